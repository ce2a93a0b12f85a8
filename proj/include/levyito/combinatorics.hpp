#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levyito/error.hpp"

namespace levyito
{
class LevyMeasure;
class StepFunction;

inline constexpr int kMaxPartitionSize = 14;

//! Set partition of {1..m}; blocks sorted by their minimum element.
struct Partition
{
    std::vector<std::vector<int>> blocks;

    bool operator==(Partition const&) const = default;
};

namespace detail
{
struct RgsState
{
    int m;
    std::vector<int> labels;   // block label of each element (restricted growth)
    std::vector<int> sizes;    // size of each open block
    int singletons = 0;
};

template<class Visitor>
void visit_no_singleton(RgsState& st, int i, Visitor& visit)
{
    // Every current singleton needs one of the remaining elements.
    if (st.singletons > st.m - i)
        return;
    if (i == st.m)
    {
        visit(std::span<int const>(st.labels), std::span<int const>(st.sizes));
        return;
    }
    auto const open = static_cast<int>(st.sizes.size());
    for (int b = 0; b < open; ++b)
    {
        // index, not reference: the recursion may grow sizes
        st.singletons += (st.sizes[b] == 1) ? -1 : 0;
        ++st.sizes[b];
        st.labels[i] = b;
        visit_no_singleton(st, i + 1, visit);
        --st.sizes[b];
        st.singletons += (st.sizes[b] == 1) ? 1 : 0;
    }
    st.sizes.push_back(1);
    ++st.singletons;
    st.labels[i] = open;
    visit_no_singleton(st, i + 1, visit);
    --st.singletons;
    st.sizes.pop_back();
}
}  // namespace detail

/*!
 * Visit every partition of {1..m} whose blocks all have size >= 2.
 *
 * Generates restricted growth strings in lexicographic order, pruning any
 * prefix with more open singleton blocks than remaining elements. The
 * visitor receives (labels, block_sizes); both spans are only valid for the
 * duration of the call.
 */
template<class Visitor>
void for_each_no_singleton_partition(int m, Visitor&& visit)
{
    require(m >= 0, Errc::InvalidArgument, "partition size must be non-negative");
    require(m <= kMaxPartitionSize, Errc::SizeLimitExceeded,
            "partition enumeration capped at m <= 14");
    if (m == 0)
        return;
    detail::RgsState st{m, std::vector<int>(m, 0), {}, 0};
    detail::visit_no_singleton(st, 0, visit);
}

std::vector<Partition> enumerate_no_singleton_partitions(int m);

//! C*_p: number of partitions of {1..p} without singleton blocks.
std::uint64_t count_c_star(int p);
//! Same count by filtering every partition of {1..p} (unpruned enumeration).
std::uint64_t count_c_star_filtered(int p);

/*!
 * Cumulants kappa_n, n = 1..max_order (kappa_1 = 0 in the centered setting).
 */
class CumulantVector
{
  public:
    CumulantVector() = default;
    //! values[k] is kappa_{k+2}: the centered representation.
    static CumulantVector centered(std::vector<double> kappa_from_2);

    int max_order() const { return static_cast<int>(kappa_.size()) - 1; }
    double operator[](int n) const;
    void set(int n, double value);

  private:
    std::vector<double> kappa_{0.0, 0.0};  // index 0 unused, kappa_1 = 0
};

/*!
 * E[X^m] = sum over no-singleton partitions pi of prod_{B in pi} kappa_|B|,
 * accumulated with Neumaier compensated summation.
 */
double moment_from_cumulants(CumulantVector const& kappa, int m);

//! General cumulant formula over *all* partitions, kappa_1 included.
double moment_from_all_partitions(CumulantVector const& kappa, int m);

/*!
 * Cumulants of L(phi) = int phi dL: kappa_n = m~_n int phi^n dx, n = 2..p.
 */
CumulantVector cumulants_of_linear_functional(LevyMeasure const& model,
                                              StepFunction const& phi, int p);

//! Cumulants from precomputed integrals: kappa_n = m~_n * power_integrals[n].
CumulantVector cumulants_from_power_integrals(LevyMeasure const& model,
                                              std::span<double const> power_integrals,
                                              int p);

}  // namespace levyito

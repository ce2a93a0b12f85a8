#include "levyito/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyito/functions.hpp"
#include "levyito/levy_measure.hpp"
#include "levyito/summation.hpp"

namespace levyito
{
namespace
{
// Unpruned restricted-growth enumeration of every partition.
template<class Visitor>
void visit_all(int m, int i, std::vector<int>& sizes, Visitor& visit)
{
    if (i == m)
    {
        visit(std::span<int const>(sizes));
        return;
    }
    for (std::size_t b = 0, open = sizes.size(); b < open; ++b)
    {
        ++sizes[b];
        visit_all(m, i + 1, sizes, visit);
        --sizes[b];
    }
    sizes.push_back(1);
    visit_all(m, i + 1, sizes, visit);
    sizes.pop_back();
}

void require_cumulants(CumulantVector const& kappa, int m)
{
    require(kappa.max_order() >= m, Errc::MissingCumulant,
            "cumulants provided up to order " + std::to_string(kappa.max_order())
                + " but moment order " + std::to_string(m) + " requested");
}
}  // namespace

std::vector<Partition> enumerate_no_singleton_partitions(int m)
{
    std::vector<Partition> out;
    for_each_no_singleton_partition(
        m, [&](std::span<int const> labels, std::span<int const> sizes) {
            Partition p;
            p.blocks.resize(sizes.size());
            for (std::size_t e = 0; e < labels.size(); ++e)
                p.blocks[labels[e]].push_back(static_cast<int>(e) + 1);
            out.push_back(std::move(p));
        });
    return out;
}

std::uint64_t count_c_star(int p)
{
    require(p >= 1, Errc::InvalidArgument, "C*_p needs p >= 1");
    std::uint64_t count = 0;
    for_each_no_singleton_partition(p, [&](auto, auto) { ++count; });
    return count;
}

std::uint64_t count_c_star_filtered(int p)
{
    require(p >= 1, Errc::InvalidArgument, "C*_p needs p >= 1");
    require(p <= kMaxPartitionSize, Errc::SizeLimitExceeded,
            "partition enumeration capped at m <= 14");
    std::uint64_t count = 0;
    std::vector<int> sizes;
    auto visit = [&](std::span<int const> block_sizes) {
        if (std::none_of(block_sizes.begin(), block_sizes.end(), [](int s) { return s == 1; }))
            ++count;
    };
    visit_all(p, 0, sizes, visit);
    return count;
}

//---------------------------------------------------------------------------//
CumulantVector CumulantVector::centered(std::vector<double> kappa_from_2)
{
    CumulantVector out;
    for (std::size_t k = 0; k < kappa_from_2.size(); ++k)
        out.set(static_cast<int>(k) + 2, kappa_from_2[k]);
    return out;
}

double CumulantVector::operator[](int n) const
{
    require(n >= 1 && n <= max_order(), Errc::MissingCumulant,
            "cumulant of order " + std::to_string(n) + " not provided");
    return kappa_[n];
}

void CumulantVector::set(int n, double value)
{
    require(n >= 1, Errc::InvalidArgument, "cumulant order must be >= 1");
    if (n > max_order())
        kappa_.resize(n + 1, 0.0);
    kappa_[n] = value;
}

double moment_from_cumulants(CumulantVector const& kappa, int m)
{
    require(m >= 1, Errc::InvalidArgument, "moment order must be >= 1");
    if (m == 1)
        return 0.0;
    require_cumulants(kappa, m);
    CompensatedSum total;
    for_each_no_singleton_partition(m, [&](auto, std::span<int const> sizes) {
        double term = 1;
        for (int s : sizes)
            term *= kappa[s];
        total.add(term);
    });
    return total.value();
}

double moment_from_all_partitions(CumulantVector const& kappa, int m)
{
    require(m >= 1, Errc::InvalidArgument, "moment order must be >= 1");
    require(m <= kMaxPartitionSize, Errc::SizeLimitExceeded,
            "partition enumeration capped at m <= 14");
    require_cumulants(kappa, m);
    CompensatedSum total;
    std::vector<int> sizes;
    auto visit = [&](std::span<int const> block_sizes) {
        double term = 1;
        for (int s : block_sizes)
            term *= kappa[s];
        total.add(term);
    };
    visit_all(m, 0, sizes, visit);
    return total.value();
}

CumulantVector cumulants_from_power_integrals(LevyMeasure const& model,
                                              std::span<double const> power_integrals,
                                              int p)
{
    require(p >= 2, Errc::InvalidArgument, "cumulant order must be >= 2");
    require(static_cast<int>(power_integrals.size()) > p, Errc::InvalidArgument,
            "power integrals missing");
    CumulantVector out;
    for (int n = 2; n <= p; ++n)
        out.set(n, model.signed_moment(n) * power_integrals[n]);
    return out;
}

CumulantVector cumulants_of_linear_functional(LevyMeasure const& model,
                                              StepFunction const& phi, int p)
{
    require(p >= 2, Errc::InvalidArgument, "cumulant order must be >= 2");
    for (auto const& piece : phi.pieces())
        require(std::isfinite(piece.lo) && std::isfinite(piece.hi), Errc::UnboundedSupport,
                "phi must have bounded support");
    require(std::isfinite(model.abs_moment(p)), Errc::InfinitePMoment,
            "m_p is not finite");
    std::vector<double> integrals(p + 1, 0.0);
    for (int n = 2; n <= p; ++n)
        integrals[n] = phi.power_integral(n);
    return cumulants_from_power_integrals(model, integrals, p);
}

}  // namespace levyito

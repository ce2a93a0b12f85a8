#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levyito/levy_measure.hpp"
#include "levyito/noise_sim.hpp"
#include "levyito/rational.hpp"
#include "levyito/simple_process.hpp"
#include "levyito/stats.hpp"

namespace levyito
{
inline constexpr int kMaxChaosOrder = 4;

//! One coefficient of a step kernel: beta at an index tuple into the cells.
struct KernelEntry
{
    std::vector<int> indices;
    double value;
};

/*!
 * Order-k step kernel sum beta_{i_1..i_k} 1_{F_{i_1} x ... x F_{i_k}} over
 * pairwise disjoint cells F_i = A_i x B_i.
 *
 * The coefficient tensor is symmetrized on construction; entries on repeated
 * indices are rejected. Values are stored once per increasing index tuple.
 */
class StepKernel
{
  public:
    StepKernel() = default;
    StepKernel(int order, std::vector<Cell> cells, std::vector<KernelEntry> entries);

    //! 1_F as an order-one kernel.
    static StepKernel indicator(Cell cell, double value = 1.0);

    int order() const { return order_; }
    std::span<Cell const> cells() const { return cells_; }
    //! Increasing index tuples with their symmetric coefficient.
    std::span<std::vector<int> const> tuples() const { return tuples_; }
    std::span<double const> values() const { return values_; }

    bool is_zero() const;
    //! ||h~||^2 in L^2((R x R0)^k, (dx nu)^k).
    double squared_norm(LevyMeasure const& model) const;

    //! h(., xi) as an order k-1 kernel (zero if xi lies in no cell).
    StepKernel slice(double x, double z) const;
    //! Slice at any point of cell c.
    StepKernel slice_cell(int c) const;
    //! Index of the cell holding (x, z), or -1.
    int cell_of(double x, double z) const;

    //! Largest |x| touched by the cells.
    double extent() const;
    //! Largest right end of the cells (-inf if none).
    double right_end() const;

  private:
    int order_ = 0;
    std::vector<Cell> cells_;
    std::vector<std::vector<int>> tuples_;
    std::vector<double> values_;
};

//! h^y: cells cut to x <= y, empty cells dropped.
StepKernel project_kernel(StepKernel const& h, double y);

//! F = c0 + sum_n I_n(f_n), orders 1..4.
struct ChaosFunctional
{
    double constant = 0;
    std::vector<StepKernel> kernels;

    double extent() const;
    int max_order() const;
};

void validate_chaos(ChaosFunctional const& f);

//! I_k(h) = sum beta prod N^(F) on a realization.
double eval_multiple_integral(RealizationView const& r, StepKernel const& h);
Rational eval_multiple_integral_exact(RealizationView const& r, StepKernel const& h);

double eval_chaos(RealizationView const& r, ChaosFunctional const& f);
Rational eval_chaos_exact(RealizationView const& r, ChaosFunctional const& f);

//! D_{x,z} F = sum_n n I_{n-1}(f_n(., (x, z))).
double malliavin_derivative(PointRealization const& r, ChaosFunctional const& f, double x,
                            double z);
Rational malliavin_derivative_exact(PointRealization const& r, ChaosFunctional const& f,
                                    double x, double z);

//! F(omega + delta_xi) - F(omega), by re-evaluation on the augmented points.
Rational add_one_cost(PointRealization const& r, ChaosFunctional const& f, double x, double z);

//! delta(V_Phi) for V_Phi(x, z) = Phi(x) z, which is I(Phi).
double skorohod_predictable(PointRealization const& r, SimpleProcess const& phi);

//! <DF, V_Phi>_H on one realization, exact over cells and pieces.
double derivative_pairing(PointRealization const& r, ChaosFunctional const& f,
                          SimpleProcess const& phi);

//---------------------------------------------------------------------------//
// Checks

struct OracleCheck
{
    std::size_t probes = 0;
    std::size_t mismatches = 0;
    std::size_t inside_cells = 0;  //!< probes that hit a cell
    bool pass = false;
};

/*!
 * D_xi F (slice route) against add_one_cost (re-evaluation) in exact
 * arithmetic over random realizations and probes.
 */
OracleCheck derivative_oracle_check(LevyMeasurePtr const& model, ChaosFunctional const& f,
                                    std::size_t realizations, std::size_t probes_per,
                                    std::uint64_t seed);

struct GapCheck
{
    double lhs = 0;  //!< first side mean
    double rhs = 0;  //!< second side mean
    double gap = 0;  //!< paired mean difference
    double se = 0;
    double z = 0;
    bool pass = false;
};

//! E<DF, V_Phi> - E[F delta(V_Phi)]
GapCheck duality_gap(LevyMeasurePtr const& model, ChaosFunctional const& f,
                     SimpleProcess const& phi, McOptions const& mc, double se_multiplier);

struct Lemma41Result
{
    GapCheck projection;   //!< E[(I_k(h) - I_k(h^y)) G] = 0
    GapCheck contraction;  //!< E I_k(h^y)^2 <= E I_k(h)^2 (one-sided)
    double exact_projected = 0;  //!< k! ||h~^y||^2
    double exact_full = 0;       //!< k! ||h~||^2
    bool pass = false;
};

Lemma41Result lemma41_check(LevyMeasurePtr const& model, StepKernel const& h, double y,
                            Coefficient const& g, McOptions const& mc, double se_multiplier);

struct Lemma42Result
{
    std::size_t probes = 0;
    std::size_t nonzero = 0;
    bool pass = false;
};

//! Cells left of y give D_{x,z} F = 0 exactly for every x > y.
Lemma42Result lemma42_check(LevyMeasurePtr const& model, ChaosFunctional const& f, double y,
                            std::size_t realizations, std::size_t probes_per,
                            std::uint64_t seed);

struct IsometryResult
{
    double estimate = 0;
    double target = 0;  //!< n! ||f~||^2
    double se = 0;
    double z = 0;
    bool pass = false;
};

IsometryResult chaos_isometry_check(LevyMeasurePtr const& model, StepKernel const& h,
                                    McOptions const& mc, double se_multiplier);

//! Cov(I_m(f), I_n(g)) = 0 for m != n.
IsometryResult chaos_orthogonality_check(LevyMeasurePtr const& model, StepKernel const& f,
                                         StepKernel const& g, McOptions const& mc,
                                         double se_multiplier);

}  // namespace levyito

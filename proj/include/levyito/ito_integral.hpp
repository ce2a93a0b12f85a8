#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "levyito/functions.hpp"
#include "levyito/levy_measure.hpp"
#include "levyito/noise_sim.hpp"
#include "levyito/simple_process.hpp"
#include "levyito/stats.hpp"

namespace levyito
{
//---------------------------------------------------------------------------//
// Seminorms [X]_{K,p} = ||X||_{L^p(Omega; L^2)} + ||X||_{L^p(Omega x [-K,K])}

struct SeminormEstimate
{
    double K = kInf;
    int p = 2;
    MeanEstimate l2_part;  //!< (E (int X^2)^{p/2})^{1/p}
    MeanEstimate lp_part;  //!< (E int |X|^p)^{1/p}
    double value = 0;
    double se = 0;
    std::size_t n_samples = 0;
};

//! Exact seminorm of a deterministic step function (zero SE).
SeminormEstimate seminorm(StepFunction const& phi, int p, double K = kInf);
//! Exact seminorm of a deterministic integrand via its power integrals.
SeminormEstimate seminorm(Integrand const& phi, int p, double K = kInf);

//! MC seminorm; exact (zero SE) for deterministic processes.
SeminormEstimate estimate_seminorm(LevyMeasurePtr const& model, SimpleProcess const& x,
                                   double K, int p, McOptions const& mc);

//! sum |Y_i|^p |A_i|^{p/2} <= (sum Y_i^2 |A_i|)^{p/2} for one set of values.
bool power_sum_inequality_holds(SimpleProcess const& x, std::span<double const> values,
                                int p);

//---------------------------------------------------------------------------//
// Monte Carlo property checks

struct MomentCheck
{
    double estimate = 0;  //!< MC mean of the tested quantity
    double target = 0;
    double se = 0;
    double z = 0;
    bool pass = false;
    bool exact_target = true;
};

//! E I_K(X) = 0
MomentCheck centering_check(LevyMeasurePtr const& model, SimpleProcess const& x, double K,
                            McOptions const& mc, double se_multiplier);

/*!
 * E I_K(X)^2 = m_2 E int_{-K}^{K} X^2.
 *
 * For random X the test is paired: samples are I_K^2 - m_2 int X^2 per
 * realization, tested against 0.
 */
MomentCheck isometry_check(LevyMeasurePtr const& model, SimpleProcess const& x, double K,
                           McOptions const& mc, double se_multiplier);

/*!
 * E[(S_k - S_{k-1}) g] = 0 for the k-th increment Y_k L(A_k) and a bounded
 * g known at b_{k-1} (k is zero-based here).
 */
MomentCheck martingale_check(LevyMeasurePtr const& model, SimpleProcess const& x,
                             std::size_t k, Coefficient const& g, McOptions const& mc,
                             double se_multiplier);

//---------------------------------------------------------------------------//
// Moment bounds

struct Lemma31Result
{
    int p = 0;
    double exact_moment = 0;  //!< E L(phi)^p from cumulants
    double rhs = 0;
    double c_star = 0;
    double ratio = 0;  //!< exact / rhs (0 when rhs = 0)
    bool pass = false;
};

//! E L(phi)^p <= C*_p ((m_2 int phi^2)^{p/2} + m_p int |phi|^p), p even.
Lemma31Result bound_lemma31(LevyMeasure const& model, StepFunction const& phi, int p);
Lemma31Result bound_lemma31(LevyMeasure const& model, Integrand const& phi, int p);

//! Which power of the Rosenthal constant enters C_p^p.
enum class RosenthalConvention
{
    linear,  //!< C_p^p = 2 B_p C*_p (m_2^{p/2} v m_p)
    power,   //!< C_p^p = 2 B_p^p C*_p (m_2^{p/2} v m_p)
};

struct RosenthalConstant
{
    double value = 1.0;
    RosenthalConvention convention = RosenthalConvention::linear;
};

std::string_view to_string(RosenthalConvention c);
RosenthalConvention parse_rosenthal_convention(std::string_view s);

//! C_p^p for the Ito moment bound.
double ito_constant_pow_p(LevyMeasure const& model, int p, RosenthalConstant const& rc);

struct Thm34Result
{
    int p = 0;
    MeanEstimate lhs;                   //!< ||I(X)||_p by MC
    std::optional<double> lhs_exact;    //!< deterministic integrands only
    SeminormEstimate seminorm;
    double constant = 0;  //!< C_p
    double rhs = 0;       //!< C_p [X]_p
    double rhs_se = 0;
    RosenthalConstant rosenthal;
    bool pass = false;
};

/*!
 * ||I(X)||_p <= C_p [X]_p, checked as lhs <= rhs + k sqrt(se_lhs^2 + se_rhs^2).
 */
Thm34Result bound_thm34(LevyMeasurePtr const& model, SimpleProcess const& x, int p,
                        RosenthalConstant const& rc, McOptions const& mc,
                        double se_multiplier);
//! Deterministic integrand; I(X) is realized as I_K with K from choose_window.
Thm34Result bound_thm34(LevyMeasurePtr const& model, Integrand const& phi, int p,
                        RosenthalConstant const& rc, McOptions const& mc,
                        double se_multiplier, double tail_tolerance = 1e-12);

//---------------------------------------------------------------------------//
// Unbounded support

//! m_2 int_{K < |x| <= K'} phi^2
double tail_variance(LevyMeasure const& model, Integrand const& phi, double K, double K_outer);

/*!
 * Smallest K on the grid {k * step} whose theoretical tail variance is below
 * tolerance; the support radius for bounded integrands.
 */
double choose_window(LevyMeasure const& model, Integrand const& phi, double tolerance,
                     double step = 0.5);

struct TailRow
{
    double K = 0;
    double estimate = 0;  //!< MC mean of (I_{K'} - I_K)^2
    double se = 0;
    double theory = 0;
    double z = 0;
    bool pass = false;
};

struct TailResult
{
    double K_outer = 0;
    std::vector<TailRow> rows;
    bool pass = true;
};

TailResult tail_convergence(LevyMeasurePtr const& model, Integrand const& phi,
                            std::span<double const> schedule, double K_outer,
                            McOptions const& mc, double se_multiplier);

//---------------------------------------------------------------------------//
// Approximation by simple processes (left-point freeze on a uniform mesh)

struct ApproximationStep
{
    double mesh = 0;
    SimpleProcess process;
    double error = 0;  //!< [X_m - X]_{K,2}
    double se = 0;
};

//! Freeze phi at the left mesh point on [-K, K]; error by quadrature.
std::vector<ApproximationStep> approximate_by_simple(Integrand const& phi, double K,
                                                     std::span<double const> meshes);

/*!
 * Freeze a simple process at the left mesh point on [-K, K]. The frozen value
 * is the coefficient of the piece containing the mesh point, so the result
 * stays predictable; the error is estimated by MC on the difference process.
 */
std::vector<ApproximationStep> approximate_by_simple(LevyMeasurePtr const& model,
                                                     SimpleProcess const& x, double K,
                                                     std::span<double const> meshes,
                                                     McOptions const& mc);

}  // namespace levyito

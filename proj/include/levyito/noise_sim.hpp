#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "levyito/functions.hpp"
#include "levyito/levy_measure.hpp"

namespace levyito
{
//! One atom (x, z) of the Poisson random measure.
struct JumpPoint
{
    double x;
    double z;

    bool operator==(JumpPoint const&) const = default;
};

//! Space-jump cell A x B with A = (lo, hi].
struct Cell
{
    Interval space;
    JumpSet jumps;

    bool contains(double x, double z) const
    {
        return space.contains(x) && jumps.contains(z);
    }
};

/*!
 * Read-only view of the points of a realization with x <= horizon.
 *
 * Evaluating a functional on a view touches only the information generated
 * by the noise left of the horizon (the sigma-field F_horizon); asking for a
 * set reaching past the horizon is a HorizonViolation.
 */
struct RealizationView
{
    std::span<JumpPoint const> points;
    LevyMeasure const* model = nullptr;
    double window = 0;
    double horizon = kInf;
};

/*!
 * A sampled configuration of the Poisson random measure on [-K, K] x R0.
 *
 * Points are kept sorted by location so that the F_y restriction is a
 * binary-search cut.
 */
class PointRealization
{
  public:
    //! Build from explicit points (validated, then sorted).
    PointRealization(LevyMeasurePtr model, double window, std::vector<JumpPoint> points,
                     std::uint64_t seed = 0);

    double window() const { return window_; }
    std::uint64_t seed() const { return seed_; }
    std::span<JumpPoint const> points() const { return points_; }
    LevyMeasure const& model() const { return *model_; }
    LevyMeasurePtr const& model_ptr() const { return model_; }

    RealizationView view() const;
    //! Points with x <= y.
    RealizationView prefix(double y) const;

    //! Copy with one extra point (the add-one configuration).
    PointRealization with_point(JumpPoint point) const;

    operator RealizationView() const { return view(); }  // NOLINT

  private:
    LevyMeasurePtr model_;
    double window_;
    std::vector<JumpPoint> points_;
    std::uint64_t seed_;
};

/*!
 * Sample N on [-K, K]: Poisson(2 K nu(R0)) points, uniform locations, jumps
 * from nu / nu(R0). Deterministic in the seed.
 */
PointRealization sample_prm(LevyMeasurePtr model, double window, std::uint64_t seed);

//! L(A) = sum_{x_i in A} z_i - |A| m~_1
double eval_L_set(RealizationView const& r, IntervalSet const& set);
//! L(phi) = sum phi(x_i) z_i - m~_1 int phi
double eval_L_phi(RealizationView const& r, StepFunction const& phi);
//! Deterministic integrand restricted to the view window: I_K(phi).
double eval_L_integrand(RealizationView const& r, Integrand const& phi,
                        Interval restrict_to);
//! Two-sided path: L((0, x]) for x >= 0 and -L((x, 0]) for x < 0.
double eval_path(RealizationView const& r, double x);

//! N(A x B) and the compensated count N(A x B) - |A| nu(B).
std::size_t count_points(RealizationView const& r, Cell const& cell);
double compensated_count(RealizationView const& r, Cell const& cell);

//---------------------------------------------------------------------------//
// Characteristic function of L(A) / L(phi)

//! exp(|A| psi(theta)), psi the Levy exponent.
std::complex<double> char_function_set(LevyMeasure const& model, double length,
                                       double theta);
//! exp(sum_k len_k psi(theta v_k)) for a step phi.
std::complex<double> char_function_phi(LevyMeasure const& model, StepFunction const& phi,
                                       double theta);

struct CharGapRow
{
    double theta;
    std::complex<double> empirical;
    std::complex<double> theoretical;
    double gap;
};

struct CharGapResult
{
    double sup_gap = 0;
    std::size_t n_samples = 0;
    std::vector<CharGapRow> rows;
};

struct McOptions
{
    std::size_t n_samples = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 0;  //!< 0: hardware concurrency
    //! Receives the primary per-sample values of a check when set.
    std::vector<double>* sample_sink = nullptr;
};

//! Copy samples into mc.sample_sink if one is attached.
inline void offer_samples(McOptions const& mc, std::span<double const> samples)
{
    if (mc.sample_sink)
        mc.sample_sink->assign(samples.begin(), samples.end());
}

/*!
 * Empirical vs closed-form characteristic function of L(A) over a theta grid.
 */
CharGapResult char_function_gap(LevyMeasurePtr const& model, Interval set,
                                std::span<double const> thetas, McOptions const& mc);

//! n samples of L(A_k) for each configured set (row-major: sample x set).
std::vector<double> simulate_sets(LevyMeasurePtr const& model, double window,
                                  std::span<IntervalSet const> sets, McOptions const& mc);

}  // namespace levyito

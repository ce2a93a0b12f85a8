#include "levyito/noise_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "levyito/error.hpp"
#include "levyito/parallel.hpp"
#include "levyito/rng.hpp"
#include "levyito/summation.hpp"

namespace levyito
{
namespace
{
void require_in_window(RealizationView const& r, double lo, double hi, char const* what)
{
    require(lo >= -r.window && hi <= r.window, Errc::WindowExceeded,
            std::string(what) + " (" + std::to_string(lo) + ", " + std::to_string(hi)
                + "] leaves the window [-" + std::to_string(r.window) + ", "
                + std::to_string(r.window) + "]");
}

void require_before_horizon(RealizationView const& r, double hi, char const* what)
{
    require(hi <= r.horizon, Errc::HorizonViolation,
            std::string(what) + " reaches x = " + std::to_string(hi)
                + " past the measurability horizon " + std::to_string(r.horizon));
}

// Points with x in (lo, hi].
std::span<JumpPoint const> points_in(RealizationView const& r, double lo, double hi)
{
    auto by_x = [](JumpPoint const& p, double v) { return p.x <= v; };
    auto first = std::lower_bound(r.points.begin(), r.points.end(), lo, by_x);
    auto last = std::lower_bound(first, r.points.end(), hi, by_x);
    return {first, last};
}
}  // namespace

//---------------------------------------------------------------------------//
PointRealization::PointRealization(LevyMeasurePtr model, double window,
                                   std::vector<JumpPoint> points, std::uint64_t seed)
    : model_(std::move(model)), window_(window), points_(std::move(points)), seed_(seed)
{
    require(model_ != nullptr, Errc::InvalidArgument, "realization needs a model");
    require(window_ >= 0 && std::isfinite(window_), Errc::InvalidArgument,
            "window must be a finite K >= 0");
    for (auto const& p : points_)
    {
        require(std::abs(p.x) <= window_, Errc::WindowExceeded,
                "point location outside the window");
        require(p.z != 0.0 && std::isfinite(p.z), Errc::AtomAtZero,
                "point jump must be finite and nonzero");
    }
    std::stable_sort(points_.begin(), points_.end(),
                     [](JumpPoint const& a, JumpPoint const& b) { return a.x < b.x; });
}

RealizationView PointRealization::view() const
{
    return {points_, model_.get(), window_, kInf};
}

RealizationView PointRealization::prefix(double y) const
{
    auto last = std::upper_bound(points_.begin(), points_.end(), y,
                                 [](double v, JumpPoint const& p) { return v < p.x; });
    return {std::span<JumpPoint const>(points_.begin(), last), model_.get(), window_, y};
}

PointRealization PointRealization::with_point(JumpPoint point) const
{
    std::vector<JumpPoint> points = points_;
    points.push_back(point);
    return PointRealization(model_, window_, std::move(points), seed_);
}

PointRealization sample_prm(LevyMeasurePtr model, double window, std::uint64_t seed)
{
    require(model != nullptr, Errc::InvalidArgument, "sample_prm needs a model");
    require(window >= 0 && std::isfinite(window), Errc::InvalidArgument,
            "window must be a finite K >= 0");
    std::vector<JumpPoint> points;
    double const mean = 2.0 * window * model->total_mass();
    if (mean > 0)
    {
        Philox4x32 rng(seed);
        std::poisson_distribution<std::size_t> count_dist(mean);
        std::uniform_real_distribution<double> location(-window, window);
        std::size_t const count = count_dist(rng);
        points.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            double const x = location(rng);
            points.push_back({x, model->sample_jump(rng)});
        }
    }
    return PointRealization(std::move(model), window, std::move(points), seed);
}

//---------------------------------------------------------------------------//
double eval_L_set(RealizationView const& r, IntervalSet const& set)
{
    if (set.empty())
        return 0.0;
    require_in_window(r, set.inf(), set.sup(), "set");
    require_before_horizon(r, set.sup(), "set");
    double jumps = 0;
    for (auto const& part : set.parts())
        for (auto const& p : points_in(r, part.lo, part.hi))
            jumps += p.z;
    return jumps - set.length() * r.model->signed_moment(1);
}

double eval_L_phi(RealizationView const& r, StepFunction const& phi)
{
    if (phi.is_zero())
        return 0.0;
    require_in_window(r, phi.support_lo(), phi.support_hi(), "step function support");
    require_before_horizon(r, phi.support_hi(), "step function support");
    double jumps = 0;
    for (auto const& piece : phi.pieces())
        for (auto const& p : points_in(r, piece.lo, piece.hi))
            jumps += piece.value * p.z;
    return jumps - r.model->signed_moment(1) * phi.power_integral(1);
}

double eval_L_integrand(RealizationView const& r, Integrand const& phi, Interval restrict_to)
{
    if (restrict_to.empty())
        return 0.0;
    require_in_window(r, restrict_to.lo, restrict_to.hi, "integration range");
    require_before_horizon(r, restrict_to.hi, "integration range");
    double jumps = 0;
    for (auto const& p : points_in(r, restrict_to.lo, restrict_to.hi))
        jumps += phi(p.x) * p.z;
    return jumps
           - r.model->signed_moment(1) * phi.power_integral(1, restrict_to.lo, restrict_to.hi);
}

double eval_path(RealizationView const& r, double x)
{
    require(std::abs(x) <= r.window, Errc::WindowExceeded, "path point outside the window");
    if (x >= 0)
        return eval_L_set(r, IntervalSet{{0.0, x}});
    return -eval_L_set(r, IntervalSet{{x, 0.0}});
}

std::size_t count_points(RealizationView const& r, Cell const& cell)
{
    if (cell.space.empty())
        return 0;
    require_in_window(r, cell.space.lo, cell.space.hi, "cell");
    require_before_horizon(r, cell.space.hi, "cell");
    std::size_t count = 0;
    for (auto const& p : points_in(r, cell.space.lo, cell.space.hi))
        if (cell.jumps.contains(p.z))
            ++count;
    return count;
}

double compensated_count(RealizationView const& r, Cell const& cell)
{
    return static_cast<double>(count_points(r, cell))
           - cell.space.length() * r.model->mass_of(cell.jumps);
}

//---------------------------------------------------------------------------//
std::complex<double> char_function_set(LevyMeasure const& model, double length, double theta)
{
    return std::exp(length * model.levy_exponent(theta));
}

std::complex<double> char_function_phi(LevyMeasure const& model, StepFunction const& phi,
                                       double theta)
{
    std::complex<double> exponent = 0;
    for (auto const& piece : phi.pieces())
        exponent += (piece.hi - piece.lo) * model.levy_exponent(theta * piece.value);
    return std::exp(exponent);
}

CharGapResult char_function_gap(LevyMeasurePtr const& model, Interval set,
                                std::span<double const> thetas, McOptions const& mc)
{
    require(set.bounded(), Errc::UnboundedSupport, "set must be bounded");
    double const window = std::max(std::abs(set.lo), std::abs(set.hi));
    IntervalSet const a{set};

    std::vector<double> values(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        values[j] = eval_L_set(r, a);
    });

    offer_samples(mc, values);
    CharGapResult out;
    out.n_samples = mc.n_samples;
    for (double theta : thetas)
    {
        CompensatedSum re;
        CompensatedSum im;
        for (double v : values)
        {
            re.add(std::cos(theta * v));
            im.add(std::sin(theta * v));
        }
        double const n = static_cast<double>(std::max<std::size_t>(mc.n_samples, 1));
        std::complex<double> const empirical{re.value() / n, im.value() / n};
        auto const theoretical = char_function_set(*model, set.length(), theta);
        double const gap = std::abs(empirical - theoretical);
        out.rows.push_back({theta, empirical, theoretical, gap});
        out.sup_gap = std::max(out.sup_gap, gap);
    }
    return out;
}

std::vector<double> simulate_sets(LevyMeasurePtr const& model, double window,
                                  std::span<IntervalSet const> sets, McOptions const& mc)
{
    std::vector<double> values(mc.n_samples * sets.size());
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        for (std::size_t k = 0; k < sets.size(); ++k)
            values[j * sets.size() + k] = eval_L_set(r, sets[k]);
    });
    return values;
}

}  // namespace levyito

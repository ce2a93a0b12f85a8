#include "levyito/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "levyito/combinatorics.hpp"
#include "levyito/error.hpp"
#include "levyito/parallel.hpp"
#include "levyito/rng.hpp"
#include "levyito/simple_process.hpp"
#include "quadrature.hpp"

namespace levyito
{
namespace
{
// Heat kernel support is cut at this many multiples of sqrt(4 D t).
constexpr double kHeatCutoff = 10.0;

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
}  // namespace

ConvolutionKernel::ConvolutionKernel(Variant v) : impl_(v)
{
    if (auto const* b = std::get_if<kernel::Box>(&impl_))
        require(std::isfinite(b->lo) && std::isfinite(b->hi) && b->hi >= b->lo
                    && std::isfinite(b->height),
                Errc::InvalidArgument, "box kernel needs finite lo <= hi and height");
    if (auto const* h = std::get_if<kernel::Heat>(&impl_))
        require(h->diffusivity > 0 && std::isfinite(h->diffusivity), Errc::InvalidArgument,
                "heat kernel needs a positive diffusivity");
}

double ConvolutionKernel::operator()(double t, double x) const
{
    return std::visit(Overloaded{
                          [](kernel::Zero) { return 0.0; },
                          [x](kernel::Box const& b) {
                              return (x > b.lo && x <= b.hi) ? b.height : 0.0;
                          },
                          [t, x](kernel::Heat const& h) {
                              if (!(t > 0))
                                  return 0.0;
                              double const s = 4 * h.diffusivity * t;
                              return std::exp(-x * x / s) / std::sqrt(std::numbers::pi * s);
                          },
                      },
                      impl_);
}

double ConvolutionKernel::space_integral(double t, double a, double b) const
{
    if (!(b > a))
        return 0.0;
    return std::visit(Overloaded{
                          [](kernel::Zero) { return 0.0; },
                          [a, b](kernel::Box const& k) {
                              return k.height * Interval{a, b}.intersect({k.lo, k.hi}).length();
                          },
                          [t, a, b](kernel::Heat const& h) {
                              if (!(t > 0))
                                  return (a < 0 && 0 <= b) ? 1.0 : 0.0;
                              double const s = std::sqrt(4 * h.diffusivity * t);
                              double const ua = a / s;
                              double const ub = b / s;
                              // erfc in the tails keeps small differences accurate
                              if (ua > 0)
                                  return 0.5 * (std::erfc(ua) - std::erfc(ub));
                              if (ub < 0)
                                  return 0.5 * (std::erfc(-ub) - std::erfc(-ua));
                              return 0.5 * (std::erf(ub) - std::erf(ua));
                          },
                      },
                      impl_);
}

Interval ConvolutionKernel::spatial_range(double t) const
{
    return std::visit(Overloaded{
                          [](kernel::Zero) { return Interval{}; },
                          [](kernel::Box const& b) { return Interval{b.lo, b.hi}; },
                          [t](kernel::Heat const& h) {
                              double const r = kHeatCutoff * std::sqrt(4 * h.diffusivity * t);
                              return Interval{-r, r};
                          },
                      },
                      impl_);
}

double ConvolutionKernel::time_integral(double t, double a) const
{
    if (!(t > 0))
        return 0.0;
    if (std::holds_alternative<kernel::Box>(impl_))
        return t * (*this)(t, a);
    if (std::holds_alternative<kernel::Zero>(impl_))
        return 0.0;
    double const d = std::get<kernel::Heat>(impl_).diffusivity;
    double const u = std::abs(a);
    return std::sqrt(t / (std::numbers::pi * d)) * std::exp(-u * u / (4 * d * t))
           - u / (2 * d) * std::erfc(u / std::sqrt(4 * d * t));
}

bool ConvolutionKernel::finite_nu(int q) const
{
    if (std::holds_alternative<kernel::Heat>(impl_))
        return q < 3;
    return true;
}

//---------------------------------------------------------------------------//
double field_moment_bound(LevyMeasure const& model, RandomField const& phi, int p)
{
    return std::visit(Overloaded{
                          [p](field::Constant const& c) { return std::pow(std::abs(c.value), p); },
                          [&](field::LaggedNoise const& f) {
                              require(p % 2 == 0, Errc::InvalidArgument,
                                      "field moment bound needs an even p");
                              std::vector<double> kappa;
                              for (int n = 2; n <= p; ++n)
                                  kappa.push_back(model.signed_moment(n) * f.lag);
                              double const m = moment_from_cumulants(
                                  CumulantVector::centered(std::move(kappa)), p);
                              return std::min(m, std::pow(f.bound, p));
                          },
                      },
                      phi);
}

RefinedIntegral kernel_power_integral(ConvolutionKernel const& g, double t, int q,
                                      MidpointOptions const& opt)
{
    require(t >= 0 && std::isfinite(t), Errc::InvalidArgument, "t must be finite, >= 0");
    require(opt.initial_cells >= 1, Errc::InvalidArgument, "need at least one cell");
    RefinedIntegral out;
    if (std::holds_alternative<kernel::Zero>(g.variant()) || t == 0)
        return out;
    if (!g.finite_nu(q))
        fail(Errc::InfiniteNuT, "int_0^T int |G|^" + std::to_string(q) + " diverges");

    auto midpoint = [&](int n) {
        double total = 0;
        for (int i = 0; i < n; ++i)
        {
            double const w = (i + 0.5) / n;
            double const s = t * w * w;
            Interval const range = g.spatial_range(s);
            double const width = range.length();
            double inner = 0;
            for (int j = 0; j < n; ++j)
            {
                double const y = range.lo + (j + 0.5) / n * width;
                inner += std::pow(std::abs(g(s, y)), q);
            }
            total += 2 * t * w * width * inner / n;
        }
        return total / n;
    };

    int n = opt.initial_cells;
    double previous = midpoint(n);
    for (int k = 0; k < opt.max_refinements; ++k)
    {
        n *= 2;
        double const current = midpoint(n);
        double const change = std::abs(current - previous);
        previous = current;
        if (change <= opt.relative_change * std::abs(current))
        {
            out.value = current;
            out.last_change = change;
            out.cells = n;
            return out;
        }
    }
    fail(Errc::QuadratureFailure, "midpoint refinement did not settle");
}

//---------------------------------------------------------------------------//
namespace
{
struct PsiCell
{
    Interval span;
    double compensator;  // int over span of the time-integrated kernel
    std::optional<Coefficient> coefficient;
};

struct PreparedConvolution
{
    std::vector<PsiCell> cells;
    double constant = 1;
};

// Support of y -> G_{t-s}(x - y) over s in (0, t).
Interval psi_support(ConvolutionSpec const& spec)
{
    Interval const r = spec.kernel.spatial_range(spec.t);
    if (r.empty())
        return {};
    return {spec.x - r.hi, spec.x - r.lo};
}

double compensator_integral(ConvolutionSpec const& spec, Interval span)
{
    if (span.empty())
        return 0.0;
    double const t = spec.t;
    auto f = [&](double w) {
        double const r = t * w * w;
        return 2 * t * w * spec.kernel.space_integral(r, spec.x - span.hi, spec.x - span.lo);
    };
    return detail::integrate(f, 0.0, 1.0, 1e-12, "kernel compensator integral");
}

PreparedConvolution prepare(ConvolutionSpec const& spec)
{
    PreparedConvolution out;
    Interval const support = psi_support(spec);
    if (support.empty() || !(spec.t > 0))
        return out;
    if (auto const* c = std::get_if<field::Constant>(&spec.field))
    {
        out.constant = c->value;
        out.cells.push_back({support, compensator_integral(spec, support), std::nullopt});
        return out;
    }
    auto const& f = std::get<field::LaggedNoise>(spec.field);
    require(f.spacing > 0 && f.lag > 0, Errc::InvalidArgument,
            "lagged field needs positive spacing and lag");
    auto const first = static_cast<long>(std::floor(support.lo / f.spacing));
    auto const last = static_cast<long>(std::ceil(support.hi / f.spacing));
    for (long j = first; j < last; ++j)
    {
        double const left = static_cast<double>(j) * f.spacing;
        Interval const span = Interval{left, left + f.spacing}.intersect(support);
        if (span.empty())
            continue;
        out.cells.push_back(
            {span, compensator_integral(spec, span),
             Coefficient::clamped_noise(IntervalSet{{left - f.lag, left}}, f.bound)});
    }
    return out;
}

double evaluate_prepared(PointRealization const& r, ConvolutionSpec const& spec,
                         PreparedConvolution const& prep)
{
    double const m1 = r.model().signed_moment(1);
    auto const points = r.points();
    double total = 0;
    for (auto const& cell : prep.cells)
    {
        require(cell.span.lo >= -r.window() && cell.span.hi <= r.window(),
                Errc::WindowExceeded, "convolution support leaves the window");
        double jumps = 0;
        for (auto const& pt : points)
            if (cell.span.contains(pt.x))
                jumps += spec.kernel.time_integral(spec.t, spec.x - pt.x) * pt.z;
        double const noise = jumps - m1 * cell.compensator;
        double const y = cell.coefficient
                             ? cell.coefficient->evaluate(r.prefix(cell.span.lo))
                             : prep.constant;
        total += y * noise;
    }
    return total;
}
}  // namespace

double convolution_window(ConvolutionSpec const& spec)
{
    Interval const s = psi_support(spec);
    if (s.empty())
        return 0.0;
    double w = std::max(std::abs(s.lo), std::abs(s.hi));
    if (auto const* f = std::get_if<field::LaggedNoise>(&spec.field))
    {
        double const left = std::floor(s.lo / f->spacing) * f->spacing - f->lag;
        w = std::max(w, std::abs(left));
    }
    return w;
}

double eval_convolution(PointRealization const& r, ConvolutionSpec const& spec, double window)
{
    require(window <= r.window(), Errc::WindowExceeded, "realization window too small");
    return evaluate_prepared(r, spec, prepare(spec));
}

Thm35Result bound_thm35(LevyMeasurePtr const& model, ConvolutionSpec const& spec, int p,
                        RosenthalConstant const& rc, McOptions const& mc,
                        double se_multiplier, MidpointOptions const& opt)
{
    require(p >= 2 && p % 2 == 0, Errc::InvalidArgument, "p must be even and >= 2");
    require(spec.t > 0 && std::isfinite(spec.t), Errc::InvalidArgument, "t must be positive");
    if (!spec.kernel.finite_nu(p))
        fail(Errc::InfiniteNuT, "nu_t is infinite for this kernel at p = " + std::to_string(p));

    Thm35Result out;
    out.p = p;
    out.rosenthal = rc;
    auto const nu = kernel_power_integral(spec.kernel, spec.t, p, opt);
    auto const j2 = p == 2 ? nu : kernel_power_integral(spec.kernel, spec.t, 2, opt);
    out.nu_t = nu.value;
    out.kernel_integral = j2.value + nu.value;
    out.quadrature_delta = j2.last_change + nu.last_change;
    out.field_bound = field_moment_bound(*model, spec.field, p);

    double const cpp = ito_constant_pow_p(*model, p, rc);
    double const t = spec.t;
    auto b_pow_p = [&](double nu_t) {
        return std::pow(2.0, p - 1) * cpp
               * (std::pow(t, 0.5 * p) * std::pow(nu_t, 0.5 * p - 1) + std::pow(t, p - 1));
    };
    out.b_pow_p = b_pow_p(nu.value);
    out.rhs = out.b_pow_p * out.kernel_integral * out.field_bound;
    out.rhs_inflated = b_pow_p(nu.value + nu.last_change)
                       * (out.kernel_integral + out.quadrature_delta) * out.field_bound;

    out.window = convolution_window(spec);
    auto const prep = prepare(spec);
    std::vector<double> powers(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, out.window, sample_seed(mc.seed, j));
        powers[j] = std::pow(evaluate_prepared(r, spec, prep), p);
    });
    offer_samples(mc, powers);
    out.lhs = estimate_mean(powers);
    out.pass = out.lhs.mean <= out.rhs_inflated + se_multiplier * out.lhs.se;
    return out;
}

}  // namespace levyito

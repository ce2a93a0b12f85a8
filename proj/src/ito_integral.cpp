#include "levyito/ito_integral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyito/combinatorics.hpp"
#include "levyito/error.hpp"
#include "levyito/parallel.hpp"
#include "levyito/rng.hpp"
#include "quadrature.hpp"

namespace levyito
{
namespace
{
void require_even(int p)
{
    require(p >= 2 && p % 2 == 0, Errc::InvalidArgument,
            "p must be an even integer >= 2, got " + std::to_string(p));
}

void require_finite_moment(LevyMeasure const& model, int p)
{
    require(std::isfinite(model.abs_moment(p)), Errc::InfinitePMoment,
            "m_" + std::to_string(p) + " is not finite");
}

// |A_i n [-K, K]| for every piece.
std::vector<double> clipped_lengths(SimpleProcess const& x, double K)
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x.piece(i).intersect({-K, K}).length();
    return out;
}

// Draw n realizations on `window` and record f(realization) per index.
template<class F>
std::vector<double> sample_scalar(LevyMeasurePtr const& model, double window,
                                  McOptions const& mc, F&& f)
{
    std::vector<double> out(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        out[j] = f(r);
    });
    return out;
}

MomentCheck from_ztest(ZTest const& t, double target, bool exact)
{
    return {t.estimate, target, t.se, t.z, t.pass, exact};
}

double deterministic_l2_squared(SimpleProcess const& x, double K)
{
    auto const v = x.deterministic_values();
    auto const len = clipped_lengths(x, K);
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += v[i] * v[i] * len[i];
    return s;
}
}  // namespace

//---------------------------------------------------------------------------//
SeminormEstimate seminorm(StepFunction const& phi, int p, double K)
{
    require(p >= 2, Errc::InvalidArgument, "seminorm needs p >= 2");
    SeminormEstimate out;
    out.K = K;
    out.p = p;
    Interval const w{-K, K};
    out.l2_part.mean = std::sqrt(phi.power_integral(2, w));
    out.lp_part.mean = std::pow(phi.abs_power_integral(p, w), 1.0 / p);
    out.value = out.l2_part.mean + out.lp_part.mean;
    return out;
}

SeminormEstimate seminorm(Integrand const& phi, int p, double K)
{
    require(p >= 2, Errc::InvalidArgument, "seminorm needs p >= 2");
    SeminormEstimate out;
    out.K = K;
    out.p = p;
    out.l2_part.mean = std::sqrt(phi.power_integral(2, -K, K));
    out.lp_part.mean = std::pow(phi.abs_power_integral(p, -K, K), 1.0 / p);
    out.value = out.l2_part.mean + out.lp_part.mean;
    return out;
}

SeminormEstimate estimate_seminorm(LevyMeasurePtr const& model, SimpleProcess const& x,
                                   double K, int p, McOptions const& mc)
{
    require(p >= 2, Errc::InvalidArgument, "seminorm needs p >= 2");
    if (auto step = x.as_step_function())
        return seminorm(*step, p, K);

    auto const len = clipped_lengths(x, K);
    double const window = x.required_window(K);
    std::vector<double> l2(mc.n_samples);
    std::vector<double> lp(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        auto const v = x.values(r);
        double q2 = 0;
        double qp = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            q2 += v[i] * v[i] * len[i];
            qp += std::pow(std::abs(v[i]), p) * len[i];
        }
        l2[j] = std::pow(q2, 0.5 * p);
        lp[j] = qp;
    });

    SeminormEstimate out;
    out.K = K;
    out.p = p;
    out.n_samples = mc.n_samples;
    out.l2_part = pth_root(estimate_mean(l2), p);
    out.lp_part = pth_root(estimate_mean(lp), p);
    out.value = out.l2_part.mean + out.lp_part.mean;
    out.se = out.l2_part.se + out.lp_part.se;
    return out;
}

bool power_sum_inequality_holds(SimpleProcess const& x, std::span<double const> values,
                                int p)
{
    require(values.size() == x.size(), Errc::InvalidArgument, "one value per piece required");
    double lhs = 0;
    double q2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const len = x.piece(i).length();
        lhs += std::pow(std::abs(values[i]), p) * std::pow(len, 0.5 * p);
        q2 += values[i] * values[i] * len;
    }
    double const rhs = std::pow(q2, 0.5 * p);
    return lhs <= rhs * (1 + 1e-12);
}

//---------------------------------------------------------------------------//
MomentCheck centering_check(LevyMeasurePtr const& model, SimpleProcess const& x, double K,
                            McOptions const& mc, double se_multiplier)
{
    auto const samples = sample_scalar(model, x.required_window(K), mc,
                                       [&](PointRealization const& r) {
                                           return eval_I_K(r, x, K);
                                       });
    offer_samples(mc, samples);
    return from_ztest(mc_mean_test(samples, 0.0, se_multiplier), 0.0, true);
}

MomentCheck isometry_check(LevyMeasurePtr const& model, SimpleProcess const& x, double K,
                           McOptions const& mc, double se_multiplier)
{
    double const m2 = model->m2();
    double const window = x.required_window(K);
    if (x.is_deterministic())
    {
        double const target = m2 * deterministic_l2_squared(x, K);
        auto const samples = sample_scalar(model, window, mc, [&](PointRealization const& r) {
            double const v = eval_I_K(r, x, K);
            return v * v;
        });
        offer_samples(mc, samples);
        return from_ztest(mc_mean_test(samples, target, se_multiplier), target, true);
    }

    auto const len = clipped_lengths(x, K);
    std::vector<double> squares(mc.n_samples);
    std::vector<double> targets(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        auto const v = x.values(r);
        double const i_k = eval_I_K(r, x, v, K);
        double q2 = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            q2 += v[i] * v[i] * len[i];
        squares[j] = i_k * i_k;
        targets[j] = m2 * q2;
    });
    std::vector<double> diff(mc.n_samples);
    for (std::size_t j = 0; j < diff.size(); ++j)
        diff[j] = squares[j] - targets[j];
    offer_samples(mc, diff);
    auto const t = mc_mean_test(diff, 0.0, se_multiplier);
    double const target = estimate_mean(targets).mean;
    return {estimate_mean(squares).mean, target, t.se, t.z, t.pass, false};
}

MomentCheck martingale_check(LevyMeasurePtr const& model, SimpleProcess const& x,
                             std::size_t k, Coefficient const& g, McOptions const& mc,
                             double se_multiplier)
{
    require(k < x.size(), Errc::InvalidArgument, "increment index out of range");
    double const b = x.breakpoints()[k];
    require(g.horizon() <= b, Errc::HorizonViolation,
            "test functional reads the noise past b = " + std::to_string(b));
    double const window = std::max(x.required_window(), g.extent());
    IntervalSet const piece{x.piece(k)};
    auto const samples = sample_scalar(model, window, mc, [&](PointRealization const& r) {
        auto const prefix = r.prefix(b);
        double const y = std::clamp(x.coefficients()[k].evaluate(prefix),
                                    -x.coefficients()[k].bound(), x.coefficients()[k].bound());
        return y * eval_L_set(r.view(), piece) * g.evaluate(prefix);
    });
    offer_samples(mc, samples);
    return from_ztest(mc_mean_test(samples, 0.0, se_multiplier), 0.0, true);
}

//---------------------------------------------------------------------------//
namespace
{
Lemma31Result lemma31_from_integrals(LevyMeasure const& model, std::vector<double> const& pi,
                                     double abs_p_integral, int p)
{
    require_even(p);
    require_finite_moment(model, p);
    Lemma31Result out;
    out.p = p;
    out.c_star = static_cast<double>(count_c_star(p));
    out.exact_moment = moment_from_cumulants(cumulants_from_power_integrals(model, pi, p), p);
    out.rhs = out.c_star
              * (std::pow(model.m2() * pi[2], 0.5 * p) + model.abs_moment(p) * abs_p_integral);
    out.ratio = out.rhs > 0 ? out.exact_moment / out.rhs : 0.0;
    out.pass = out.exact_moment <= out.rhs;
    return out;
}
}  // namespace

Lemma31Result bound_lemma31(LevyMeasure const& model, StepFunction const& phi, int p)
{
    require_even(p);
    std::vector<double> pi(p + 1, 0.0);
    for (int n = 2; n <= p; ++n)
        pi[n] = phi.power_integral(n);
    return lemma31_from_integrals(model, pi, phi.abs_power_integral(p), p);
}

Lemma31Result bound_lemma31(LevyMeasure const& model, Integrand const& phi, int p)
{
    require_even(p);
    std::vector<double> pi(p + 1, 0.0);
    for (int n = 2; n <= p; ++n)
        pi[n] = phi.power_integral(n);
    return lemma31_from_integrals(model, pi, phi.abs_power_integral(p), p);
}

std::string_view to_string(RosenthalConvention c)
{
    return c == RosenthalConvention::linear ? "linear" : "power";
}

RosenthalConvention parse_rosenthal_convention(std::string_view s)
{
    if (s == "linear")
        return RosenthalConvention::linear;
    if (s == "power")
        return RosenthalConvention::power;
    fail(Errc::InvalidArgument, "Rosenthal convention must be 'linear' or 'power'");
}

double ito_constant_pow_p(LevyMeasure const& model, int p, RosenthalConstant const& rc)
{
    require_even(p);
    require_finite_moment(model, p);
    require(rc.value > 0 && std::isfinite(rc.value), Errc::InvalidArgument,
            "Rosenthal constant must be positive");
    double const b = rc.convention == RosenthalConvention::linear ? rc.value
                                                                  : std::pow(rc.value, p);
    double const c_star = static_cast<double>(count_c_star(p));
    return 2.0 * b * c_star * std::max(std::pow(model.m2(), 0.5 * p), model.abs_moment(p));
}

namespace
{
void finish_thm34(Thm34Result& out, double se_multiplier)
{
    out.rhs = out.constant * out.seminorm.value;
    out.rhs_se = out.constant * out.seminorm.se;
    double const slack = se_multiplier * std::hypot(out.lhs.se, out.rhs_se);
    out.pass = out.lhs.mean <= out.rhs + slack;
    if (out.lhs_exact)
        out.pass = out.pass && *out.lhs_exact <= out.rhs * (1 + 1e-12);
}
}  // namespace

Thm34Result bound_thm34(LevyMeasurePtr const& model, SimpleProcess const& x, int p,
                        RosenthalConstant const& rc, McOptions const& mc,
                        double se_multiplier)
{
    require_even(p);
    Thm34Result out;
    out.p = p;
    out.rosenthal = rc;
    out.constant = std::pow(ito_constant_pow_p(*model, p, rc), 1.0 / p);

    double const window = x.required_window();
    auto const len = clipped_lengths(x, kInf);
    bool const deterministic = x.is_deterministic();
    std::vector<double> powers(mc.n_samples);
    std::vector<double> l2(deterministic ? 0 : mc.n_samples);
    std::vector<double> lp(deterministic ? 0 : mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        auto const v = x.values(r);
        powers[j] = std::pow(eval_I_K(r, x, v, kInf), p);
        if (deterministic)
            return;
        double q2 = 0;
        double qp = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            q2 += v[i] * v[i] * len[i];
            qp += std::pow(std::abs(v[i]), p) * len[i];
        }
        l2[j] = std::pow(q2, 0.5 * p);
        lp[j] = qp;
    });
    offer_samples(mc, powers);
    out.lhs = pth_root(estimate_mean(powers), p);

    if (deterministic)
    {
        auto const step = *x.as_step_function();
        out.seminorm = seminorm(step, p);
        out.lhs_exact = std::pow(bound_lemma31(*model, step, p).exact_moment, 1.0 / p);
    }
    else
    {
        out.seminorm.p = p;
        out.seminorm.n_samples = mc.n_samples;
        out.seminorm.l2_part = pth_root(estimate_mean(l2), p);
        out.seminorm.lp_part = pth_root(estimate_mean(lp), p);
        out.seminorm.value = out.seminorm.l2_part.mean + out.seminorm.lp_part.mean;
        out.seminorm.se = out.seminorm.l2_part.se + out.seminorm.lp_part.se;
    }
    finish_thm34(out, se_multiplier);
    return out;
}

Thm34Result bound_thm34(LevyMeasurePtr const& model, Integrand const& phi, int p,
                        RosenthalConstant const& rc, McOptions const& mc,
                        double se_multiplier, double tail_tolerance)
{
    require_even(p);
    Thm34Result out;
    out.p = p;
    out.rosenthal = rc;
    out.constant = std::pow(ito_constant_pow_p(*model, p, rc), 1.0 / p);
    double const K = choose_window(*model, phi, tail_tolerance);
    auto const powers = sample_scalar(model, K, mc, [&](PointRealization const& r) {
        return std::pow(eval_L_integrand(r.view(), phi, {-K, K}), p);
    });
    offer_samples(mc, powers);
    out.lhs = pth_root(estimate_mean(powers), p);
    out.lhs_exact = std::pow(bound_lemma31(*model, phi, p).exact_moment, 1.0 / p);
    out.seminorm = seminorm(phi, p);
    finish_thm34(out, se_multiplier);
    return out;
}

//---------------------------------------------------------------------------//
double tail_variance(LevyMeasure const& model, Integrand const& phi, double K, double K_outer)
{
    if (!(K_outer > K))
        return 0.0;
    // adaptive quadrature on finite shells of smooth integrands
    if (std::isfinite(K_outer) && !phi.as_step())
    {
        auto sq = [&phi](double x) {
            double const v = phi(x);
            return v * v;
        };
        double const quad = detail::integrate(sq, -K_outer, -K, 1e-12, "tail integral")
                            + detail::integrate(sq, K, K_outer, 1e-12, "tail integral");
        return model.m2() * quad;
    }
    return model.m2() * phi.shell_power_integral(2, K, K_outer);
}

double choose_window(LevyMeasure const& model, Integrand const& phi, double tolerance,
                     double step)
{
    require(tolerance > 0 && step > 0, Errc::InvalidArgument,
            "tolerance and step must be positive");
    if (phi.bounded_support())
        return std::max(std::abs(phi.support_lo()), std::abs(phi.support_hi()));
    for (int k = 1; k <= 100000; ++k)
    {
        double const K = k * step;
        if (model.m2() * phi.shell_power_integral(2, K, kInf) < tolerance)
            return K;
    }
    fail(Errc::UnboundedSupport, "integrand tail does not fall below the tolerance");
}

TailResult tail_convergence(LevyMeasurePtr const& model, Integrand const& phi,
                            std::span<double const> schedule, double K_outer,
                            McOptions const& mc, double se_multiplier)
{
    require(std::isfinite(K_outer) && K_outer > 0, Errc::InvalidArgument,
            "outer window must be finite and positive");
    for (double K : schedule)
        require(K >= 0 && K <= K_outer, Errc::InvalidArgument,
                "every K must lie in [0, K']");
    std::size_t const m = schedule.size();
    std::vector<double> squares(mc.n_samples * m);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, K_outer, sample_seed(mc.seed, j));
        auto const view = r.view();
        for (std::size_t k = 0; k < m; ++k)
        {
            double const K = schedule[k];
            // I_{K'} - I_K is the integral over the shell K < |x| <= K'
            double const d = eval_L_integrand(view, phi, {-K_outer, -K})
                             + eval_L_integrand(view, phi, {K, K_outer});
            squares[j * m + k] = d * d;
        }
    });

    offer_samples(mc, squares);
    TailResult out;
    out.K_outer = K_outer;
    std::vector<double> column(mc.n_samples);
    for (std::size_t k = 0; k < m; ++k)
    {
        for (std::size_t j = 0; j < mc.n_samples; ++j)
            column[j] = squares[j * m + k];
        TailRow row;
        row.K = schedule[k];
        row.theory = tail_variance(*model, phi, row.K, K_outer);
        auto const t = mc_mean_test(column, row.theory, se_multiplier);
        row.estimate = t.estimate;
        row.se = t.se;
        row.z = t.z;
        row.pass = t.pass;
        out.pass = out.pass && row.pass;
        out.rows.push_back(row);
    }
    return out;
}

//---------------------------------------------------------------------------//
namespace
{
std::vector<double> mesh_nodes(double K, double mesh)
{
    require(K > 0 && std::isfinite(K), Errc::InvalidArgument, "K must be finite and positive");
    require(mesh > 0, Errc::InvalidArgument, "mesh must be positive");
    auto const n = static_cast<std::size_t>(std::ceil(2 * K / mesh - 1e-9));
    std::vector<double> nodes(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        nodes[j] = -K + 2 * K * static_cast<double>(j) / static_cast<double>(n);
    nodes.back() = K;
    return nodes;
}
}  // namespace

std::vector<ApproximationStep> approximate_by_simple(Integrand const& phi, double K,
                                                     std::span<double const> meshes)
{
    std::vector<ApproximationStep> out;
    for (double mesh : meshes)
    {
        auto const nodes = mesh_nodes(K, mesh);
        std::vector<StepPiece> pieces;
        double err2 = 0;
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
        {
            double const lo = nodes[j];
            double const hi = nodes[j + 1];
            double const frozen = phi.as_step() ? phi.as_step()->right_limit(lo) : phi(lo);
            pieces.push_back({lo, hi, frozen});
            if (auto const* step = phi.as_step())
            {
                // exact on the step structure
                for (auto const& p : step->pieces())
                {
                    double const a = std::max(lo, p.lo);
                    double const b = std::min(hi, p.hi);
                    if (b > a)
                        err2 += (frozen - p.value) * (frozen - p.value) * (b - a);
                }
                double covered = 0;
                for (auto const& p : step->pieces())
                    covered += std::max(0.0, std::min(hi, p.hi) - std::max(lo, p.lo));
                err2 += frozen * frozen * (hi - lo - covered);
            }
            else
            {
                err2 += detail::integrate(
                    [&](double x) {
                        double const d = frozen - phi(x);
                        return d * d;
                    },
                    lo, hi, 1e-12, "freeze error");
            }
        }
        ApproximationStep s;
        s.mesh = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
        s.process = SimpleProcess::deterministic(StepFunction(std::move(pieces)));
        // [.]_{K,2}: both parts equal the L2 norm
        s.error = 2 * std::sqrt(std::max(err2, 0.0));
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ApproximationStep> approximate_by_simple(LevyMeasurePtr const& model,
                                                     SimpleProcess const& x, double K,
                                                     std::span<double const> meshes,
                                                     McOptions const& mc)
{
    auto const target = x.restricted(K);
    std::vector<ApproximationStep> out;
    for (double mesh : meshes)
    {
        auto const nodes = mesh_nodes(K, mesh);
        std::vector<double> b;
        std::vector<Coefficient> c;
        b.push_back(nodes.front());
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
        {
            // value just right of the node: piece with b_i <= node < b_{i+1}
            std::optional<Coefficient> frozen;
            for (std::size_t i = 0; i < target.size(); ++i)
                if (target.breakpoints()[i] <= nodes[j] && nodes[j] < target.breakpoints()[i + 1])
                    frozen = target.coefficients()[i];
            c.push_back(frozen ? *frozen : Coefficient::constant(0.0));
            b.push_back(nodes[j + 1]);
        }
        ApproximationStep s;
        s.mesh = 2 * K / static_cast<double>(nodes.size() - 1);
        s.process = SimpleProcess::make(std::move(b), std::move(c));
        auto const diff = SimpleProcess::combine(1.0, s.process, -1.0, target);
        auto const est = estimate_seminorm(model, diff, K, 2, mc);
        s.error = est.value;
        s.se = est.se;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace levyito

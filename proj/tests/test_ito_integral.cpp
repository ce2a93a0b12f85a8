#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "levyito/ito_integral.hpp"
#include "levyito/rng.hpp"
#include "levyito/simple_process.hpp"
#include "test_support.hpp"

using namespace levyito;
using test::error_of;

namespace
{
McOptions mc(std::size_t n, std::uint64_t seed)
{
    McOptions o;
    o.n_samples = n;
    o.seed = seed;
    return o;
}

SimpleProcess lagged()
{
    return SimpleProcess::make({0.0, 1.0}, {Coefficient::clamped_noise(IntervalSet{{-1.0, 0.0}}, 10)});
}

SimpleProcess mixed()
{
    auto const y = Coefficient::clamped_noise(IntervalSet{{-1.0, 0.0}}, 5);
    return SimpleProcess::make({-1.0, 0.0, 1.0},
                               {Coefficient::constant(1.5),
                                Coefficient::polynomial(y, {0.5, 1.0, -0.25})});
}
}  // namespace

TEST_CASE("simple process validation")
{
    CHECK_NOTHROW(SimpleProcess::make({0.0, 1.0}, {Coefficient::constant(3)}));
    CHECK(error_of([] {
              SimpleProcess::make({0.0, 1.0},
                                  {Coefficient::clamped_noise(IntervalSet{{0.0, 0.5}}, 10)});
          })
          == Errc::HorizonViolation);
    CHECK_NOTHROW(lagged());
    CHECK(error_of([] {
              SimpleProcess::make({0.0, 0.0}, {Coefficient::constant(1)});
          })
          == Errc::NonIncreasingBreakpoints);
    CHECK(error_of([] {
              Coefficient::clamped_noise(IntervalSet{{-1.0, 0.0}}, INFINITY);
          })
          == Errc::UnboundedCoefficient);
    CHECK(error_of([] { SimpleProcess::make({0.0, 1.0, 2.0}, {Coefficient::constant(1)}); })
          == Errc::InvalidArgument);
    auto const g = Coefficient::product({Coefficient::clamped_noise(IntervalSet{{-2.0, -1.0}}, 2),
                                         Coefficient::clamped_noise(IntervalSet{{-1.0, 0.5}}, 3)});
    CHECK(g.horizon() == 0.5);
    CHECK(g.bound() == 6.0);
    CHECK(Coefficient::constant(4).is_deterministic());
}

TEST_CASE("I_K examples and pathwise identities")
{
    auto const unit = test::unit_atom();
    PointRealization const r(unit, 2.0, {{0.2, 1.0}, {0.7, 1.0}});
    auto const x = SimpleProcess::deterministic(StepFunction::indicator({0.0, 1.0}, 3.0));
    CHECK(eval_I_K(r, x, 2.0) == 3.0);
    CHECK(eval_I_K(r, SimpleProcess{}, 2.0) == 0.0);

    auto const split = SimpleProcess::deterministic(StepFunction({{0, 1, 1}, {1, 2, 1}}));
    auto const whole = SimpleProcess::deterministic(StepFunction::indicator({0.0, 2.0}));
    auto const m = test::atoms({{1.0, 0.5}, {-2.0, 0.3}});
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        auto const rr = sample_prm(m, 3.0, s);
        CHECK(eval_I(rr, split) == doctest::Approx(eval_I(rr, whole)).epsilon(1e-13));
        auto const a = mixed();
        auto const b = lagged();
        auto const lin = SimpleProcess::combine(2.0, a, -0.5, b);
        CHECK(eval_I_K(rr, lin, 3.0)
              == doctest::Approx(2.0 * eval_I_K(rr, a, 3.0) - 0.5 * eval_I_K(rr, b, 3.0))
                     .epsilon(1e-12));
        // restriction: I_K(X) = I_K'(X 1_[-K,K])
        CHECK(eval_I_K(rr, a, 0.5)
              == doctest::Approx(eval_I_K(rr, a.restricted(0.5), 3.0)).epsilon(1e-13));
    }
}

TEST_CASE("seminorm closed forms")
{
    auto const ind = seminorm(StepFunction::indicator({0.0, 1.0}), 4);
    CHECK(ind.value == 2.0);
    for (int p : {2, 4, 6})
    {
        double const c = 1.5;
        double const a = 0.25;
        double const b = 2.0;
        auto const s = seminorm(StepFunction::indicator({a, b}, c), p);
        CHECK(s.value
              == doctest::Approx(c * std::sqrt(b - a) + c * std::pow(b - a, 1.0 / p)));
        CHECK(s.se == 0.0);
    }
    CHECK(seminorm(StepFunction{}, 4).value == 0.0);
    auto const est = estimate_seminorm(test::unit_atom(),
                                       SimpleProcess::deterministic(StepFunction::indicator({0, 1})),
                                       kInf, 6, mc(1000, 1));
    CHECK(est.value == 2.0);
    // restricted window
    CHECK(seminorm(StepFunction::indicator({-2.0, 2.0}), 2, 1.0).value
          == doctest::Approx(2 * std::sqrt(2.0)));
}

TEST_CASE("random seminorm is consistent with its parts")
{
    auto const s = estimate_seminorm(test::unit_atom(), lagged(), kInf, 4, mc(20000, 2));
    CHECK(s.l2_part.mean >= 0);
    CHECK(s.lp_part.mean >= 0);
    CHECK(s.value == doctest::Approx(s.l2_part.mean + s.lp_part.mean));
    // |A| = 1 so both parts equal (E Y^4)^{1/4}; E L^4 = 4 for the unit atom
    CHECK(std::abs(s.l2_part.mean - std::pow(4.0, 0.25)) < 4 * s.l2_part.se + 1e-9);
}

TEST_CASE("power-sum inequality")
{
    auto const x = SimpleProcess::deterministic(StepFunction({{0, 0.5, 3}, {0.5, 2, -1}, {2, 2.1, 7}}));
    for (int p : {2, 4, 6})
        CHECK(power_sum_inequality_holds(x, x.deterministic_values(), p));
}

TEST_CASE("centering, isometry and martingale checks")
{
    auto const m = test::atoms({{1.0, 0.5}, {-2.0, 0.3}});
    for (auto const& x : {lagged(), mixed()})
    {
        CHECK(centering_check(m, x, kInf, mc(40000, 3), 3).pass);
        CHECK(isometry_check(m, x, kInf, mc(40000, 4), 3).pass);
    }
    auto const det = SimpleProcess::deterministic(StepFunction({{0, 1, 2}, {1, 2, -1}}));
    auto const iso = isometry_check(m, det, kInf, mc(40000, 5), 3);
    CHECK(iso.exact_target);
    CHECK(iso.target == doctest::Approx(m->m2() * 5.0));
    CHECK(iso.pass);

    auto const g = Coefficient::clamped_noise(IntervalSet{{-1.0, 0.0}}, 3);
    CHECK(martingale_check(m, mixed(), 1, g, mc(40000, 6), 3).pass);
    auto const future = Coefficient::clamped_noise(IntervalSet{{0.0, 0.5}}, 3);
    CHECK(error_of([&] { martingale_check(m, mixed(), 1, future, mc(1000, 6), 3); })
          == Errc::HorizonViolation);
}

TEST_CASE("a non-predictable integrand breaks the martingale property")
{
    // Y = L((0,1]) on (0,1] reads its own increment, so E[Y L((0,1])] = m2 != 0.
    // Build it by hand since the checked constructor refuses it.
    auto const m = test::unit_atom();
    std::vector<double> prod;
    for (std::uint64_t j = 0; j < 20000; ++j)
    {
        auto const r = sample_prm(m, 1.0, sample_seed(12, j));
        double const l = eval_L_set(r, IntervalSet{{0.0, 1.0}});
        prod.push_back(l * l);
    }
    CHECK_FALSE(mc_mean_test(prod, 0.0, 3).pass);
}

TEST_CASE("p-th moment bound for deterministic integrands")
{
    auto const unit = test::unit_atom();
    auto const r4 = bound_lemma31(*unit, StepFunction::indicator({0.0, 1.0}), 4);
    CHECK(r4.exact_moment == 4.0);
    CHECK(r4.rhs == 8.0);
    CHECK(r4.ratio == 0.5);
    CHECK(r4.pass);
    auto const r6 = bound_lemma31(*unit, StepFunction::indicator({0.0, 1.0}), 6);
    CHECK(r6.exact_moment == 41.0);
    CHECK(r6.rhs == 82.0);
    auto const zero = bound_lemma31(*unit, StepFunction{}, 4);
    CHECK(zero.exact_moment == 0.0);
    CHECK(zero.rhs == 0.0);
    CHECK(zero.pass);
    CHECK(error_of([&] { bound_lemma31(*unit, StepFunction::indicator({0, 1}), 3); })
          == Errc::InvalidArgument);
}

TEST_CASE("integral moment bound worked example")
{
    auto const unit = test::unit_atom();
    RosenthalConstant const rc{};
    CHECK(ito_constant_pow_p(*unit, 4, rc) == 8.0);
    RosenthalConstant const rc2{2.0, RosenthalConvention::power};
    CHECK(ito_constant_pow_p(*unit, 4, rc2) == 2 * 16.0 * 4);
    CHECK(parse_rosenthal_convention("power") == RosenthalConvention::power);
    CHECK(error_of([] { parse_rosenthal_convention("cubic"); }) == Errc::InvalidArgument);

    auto const x = SimpleProcess::deterministic(StepFunction::indicator({0.0, 1.0}));
    auto const r = bound_thm34(unit, x, 4, rc, mc(20000, 7), 3);
    CHECK(r.rhs == doctest::Approx(std::pow(8.0, 0.25) * 2).epsilon(1e-12));
    REQUIRE(r.lhs_exact);
    CHECK(*r.lhs_exact == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.pass);
    auto const z = bound_thm34(unit, SimpleProcess{}, 4, rc, mc(1000, 7), 3);
    CHECK(z.lhs.mean == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK(z.pass);
    auto const two = bound_thm34(unit, x, 2, rc, mc(20000, 7), 3);
    REQUIRE(two.lhs_exact);
    CHECK(*two.lhs_exact * *two.lhs_exact == doctest::Approx(unit->m2()));
}

TEST_CASE("tail variance and convergence")
{
    auto const unit = test::unit_atom();
    Integrand const g = Gaussian{1.0, 0.0, 1.0};
    // int_{|x|>K} e^{-2x^2} = sqrt(pi/2) erfc(sqrt(2) K)
    for (double K : {0.5, 1.0, 2.0})
        CHECK(tail_variance(*unit, g, K, kInf)
              == doctest::Approx(std::sqrt(std::numbers::pi / 2) * std::erfc(std::sqrt(2.0) * K)).epsilon(1e-10));
    CHECK(tail_variance(*unit, g, 1.0, 3.0)
          == doctest::Approx(std::sqrt(std::numbers::pi / 2)
                             * (std::erfc(std::sqrt(2.0)) - std::erfc(3 * std::sqrt(2.0))))
                 .epsilon(1e-10));
    Integrand const step = StepFunction::indicator({-1.0, 1.0});
    CHECK(tail_variance(*unit, step, 1.0, 5.0) == 0.0);
    CHECK(choose_window(*unit, step, 1e-12) == 1.0);

    std::vector<double> schedule{1, 2};
    auto const t = tail_convergence(unit, g, schedule, 6.0, mc(20000, 9), 3);
    CHECK(t.pass);
    auto const zero = tail_convergence(unit, step, schedule, 6.0, mc(2000, 9), 3);
    for (auto const& row : zero.rows)
        CHECK(row.estimate == 0.0);
}

TEST_CASE("approximation by simple processes")
{
    Integrand const g = Gaussian{1.0, 0.3, 1.0};
    std::vector<double> meshes{0.5, 0.25, 0.125, 0.0625};
    auto const steps = approximate_by_simple(g, 2.0, meshes);
    REQUIRE(steps.size() == 4);
    for (std::size_t i = 1; i < steps.size(); ++i)
        CHECK(steps[i].error < steps[i - 1].error);
    // left-point freezing is first order: halving the mesh halves the error
    CHECK(steps[2].error / steps[3].error == doctest::Approx(2.0).epsilon(0.1));

    Integrand const aligned = StepFunction({{-1, 0, 2}, {0, 1, -1}});
    for (auto const& s : approximate_by_simple(aligned, 2.0, meshes))
        CHECK(s.error == 0.0);
    Integrand const zero = StepFunction{};
    for (auto const& s : approximate_by_simple(zero, 2.0, meshes))
        CHECK(s.error == 0.0);

    auto const unit = test::unit_atom();
    std::vector<double> coarse{1.0, 0.5};
    for (auto const& s : approximate_by_simple(unit, lagged(), 2.0, coarse, mc(2000, 10)))
        CHECK(s.error == 0.0);
}

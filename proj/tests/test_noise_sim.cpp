#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "levyito/noise_sim.hpp"
#include "levyito/rng.hpp"
#include "levyito/stats.hpp"
#include "test_support.hpp"

using namespace levyito;
using test::error_of;

namespace
{
PointRealization realization(LevyMeasurePtr m, double K, std::vector<JumpPoint> pts)
{
    return PointRealization(std::move(m), K, std::move(pts));
}
}  // namespace

TEST_CASE("sampling basics")
{
    auto const unit = test::unit_atom();
    CHECK(sample_prm(unit, 0.0, 5).points().empty());
    auto const r = sample_prm(unit, 1.0, 11);
    for (auto const& p : r.points())
    {
        CHECK(p.z == 1.0);
        CHECK(std::abs(p.x) <= 1.0);
    }
    auto const r2 = sample_prm(unit, 1.0, 11);
    CHECK(std::equal(r.points().begin(), r.points().end(), r2.points().begin(),
                     r2.points().end()));
    for (std::size_t i = 1; i < r.points().size(); ++i)
        CHECK(r.points()[i - 1].x <= r.points()[i].x);
}

TEST_CASE("point count is Poisson(2 K nu(R0))")
{
    auto const m = test::atoms({{1.0, 1.5}, {-1.0, 0.5}});
    std::vector<double> counts;
    for (std::uint64_t j = 0; j < 100000; ++j)
        counts.push_back(static_cast<double>(sample_prm(m, 1.0, sample_seed(3, j)).points().size()));
    CHECK(mc_mean_test(counts, 4.0, 3).pass);
    // Poisson variance equals the mean
    std::vector<double> sq;
    for (double c : counts)
        sq.push_back((c - 4.0) * (c - 4.0));
    CHECK(mc_mean_test(sq, 4.0, 3).pass);
}

TEST_CASE("evaluation examples")
{
    auto const unit = test::unit_atom();
    auto const empty = realization(unit, 2.0, {});
    CHECK(eval_L_set(empty, IntervalSet{}) == 0.0);
    CHECK(eval_L_set(empty, IntervalSet{{0.0, 1.0}}) == -1.0);
    CHECK(eval_path(empty, 0.0) == 0.0);
    CHECK(eval_path(empty, 2.0) == -2.0);
    CHECK(eval_path(empty, -1.0) == 1.0);

    auto const two = test::atoms({{2.0, 1.0}});
    CHECK(eval_L_set(realization(two, 1.0, {{0.5, 2.0}}), IntervalSet{{0.0, 1.0}}) == 0.0);

    auto const r = realization(unit, 1.0, {{0.25, 1.0}, {0.75, 1.0}});
    CHECK(eval_L_phi(r, StepFunction::indicator({0.0, 0.5}, 2.0)) == 1.0);
    CHECK(eval_L_phi(r, StepFunction{}) == 0.0);

    // half-open intervals: a point at the right end counts, at the left end not
    auto const edge = realization(unit, 2.0, {{0.0, 1.0}, {1.0, 1.0}});
    CHECK(eval_L_set(edge, IntervalSet{{0.0, 1.0}}) == 0.0);
    CHECK(count_points(edge, Cell{{0.0, 1.0}, JumpSet::all()}) == 1);
    // singleton: zero length, no mass
    CHECK(eval_L_set(edge, IntervalSet{{1.0, 1.0}}) == 0.0);
}

TEST_CASE("window and horizon enforcement")
{
    auto const r = sample_prm(test::unit_atom(), 1.0, 1);
    CHECK(error_of([&] { eval_L_set(r, IntervalSet{{0.0, 2.0}}); }) == Errc::WindowExceeded);
    CHECK(error_of([&] { eval_path(r, 1.5); }) == Errc::WindowExceeded);
    CHECK(error_of([&] { eval_L_set(r.prefix(0.0), IntervalSet{{-0.5, 0.5}}); })
          == Errc::HorizonViolation);
    CHECK(eval_L_set(r.prefix(0.0), IntervalSet{{-0.5, 0.0}})
          == eval_L_set(r, IntervalSet{{-0.5, 0.0}}));
    CHECK(error_of([] { realization(test::unit_atom(), 1.0, {{2.0, 1.0}}); })
          == Errc::WindowExceeded);
}

TEST_CASE("pathwise identities on random realizations")
{
    auto const m = test::atoms({{1.0, 0.7}, {-2.5, 0.2}, {0.3, 3.0}});
    for (std::uint64_t s = 0; s < 200; ++s)
    {
        auto const r = sample_prm(m, 3.0, s);
        IntervalSet const a{{-2.0, -0.5}};
        IntervalSet const b{{0.25, 1.0}, {2.0, 3.0}};
        double const la = eval_L_set(r, a);
        double const lb = eval_L_set(r, b);
        CHECK(eval_L_set(r, a.unite(b)) == doctest::Approx(la + lb).epsilon(1e-13));
        CHECK(eval_L_phi(r, StepFunction::indicator({-2.0, -0.5})) == la);
        // increments of the path
        CHECK(eval_path(r, 1.5) - eval_path(r, -1.0)
              == doctest::Approx(eval_L_set(r, IntervalSet{{-1.0, 1.5}})).epsilon(1e-12));
    }
}

TEST_CASE("moments of L(A)")
{
    auto const m = test::atoms({{1.0, 0.5}, {-2.0, 0.25}});
    McOptions mc;
    mc.n_samples = 50000;
    mc.seed = 99;
    std::vector<IntervalSet> sets{IntervalSet{{0.0, 1.5}}, IntervalSet{{-1.0, 0.0}}};
    auto const v = simulate_sets(m, 1.5, sets, mc);
    std::vector<double> first, second, prod;
    for (std::size_t j = 0; j < mc.n_samples; ++j)
    {
        first.push_back(v[2 * j]);
        second.push_back(v[2 * j] * v[2 * j]);
        prod.push_back(v[2 * j] * v[2 * j + 1]);
    }
    CHECK(mc_mean_test(first, 0.0, 3).pass);
    CHECK(mc_mean_test(second, m->m2() * 1.5, 3).pass);
    CHECK(mc_mean_test(prod, 0.0, 3).pass);
}

TEST_CASE("characteristic function")
{
    auto const unit = test::unit_atom();
    CHECK(char_function_set(*unit, 1.0, 0.0) == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(char_function_set(*unit, 1.0, std::numbers::pi))
          == doctest::Approx(std::exp(-2.0)));
    auto const sym = test::atoms({{1.0, 0.5}, {-1.0, 0.5}});
    for (double t : {-3.0, -1.0, 0.5, 2.0})
        CHECK(char_function_set(*sym, 1.0, t).imag() == doctest::Approx(0.0));
    // step phi: product over pieces
    StepFunction const phi({{0, 1, 2}, {1, 3, -1}});
    auto const expect = char_function_set(*unit, 1.0, 0.7 * 2) * char_function_set(*unit, 2.0, -0.7);
    auto const got = char_function_phi(*unit, phi, 0.7);
    CHECK(got.real() == doctest::Approx(expect.real()));
    CHECK(got.imag() == doctest::Approx(expect.imag()));

    McOptions mc;
    mc.n_samples = 20000;
    mc.seed = 5;
    std::vector<double> thetas{0.0, 1.0, -2.0};
    auto const gap = char_function_gap(unit, {0.0, 1.0}, thetas, mc);
    CHECK(gap.rows.size() == 3);
    CHECK(gap.rows[0].gap == 0.0);
    CHECK(gap.sup_gap < 5.0 / std::sqrt(20000.0));
}

TEST_CASE("sampling a density measure")
{
    auto const m = std::make_shared<LevyMeasure const>(
        LevyMeasure::from_density({1.2, 0.2, 3.0, 1.0}));
    std::vector<double> sq;
    for (std::uint64_t j = 0; j < 20000; ++j)
    {
        auto const r = sample_prm(m, 0.5, sample_seed(8, j));
        for (auto const& p : r.points())
        {
            CHECK(std::abs(p.z) >= 0.2);
            CHECK(std::abs(p.z) <= 3.0);
        }
        double const l = eval_L_set(r, IntervalSet{{-0.5, 0.5}});
        sq.push_back(l * l);
    }
    CHECK(mc_mean_test(sq, m->m2(), 3).pass);
}

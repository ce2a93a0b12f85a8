#include <cmath>
#include <numbers>

#include <doctest.h>

#include "levyito/levy_measure.hpp"
#include "test_support.hpp"

using namespace levyito;
using test::atoms;
using test::error_of;

TEST_CASE("atomic measure validation")
{
    auto const unit = LevyMeasure::from_atoms({{1.0, 1.0}});
    CHECK(unit.total_mass() == 1.0);
    CHECK(unit.m2() == 1.0);

    auto const sym = LevyMeasure::from_atoms({{1.0, 0.5}, {-1.0, 0.5}});
    CHECK(sym.m2() == 1.0);

    CHECK(error_of([] { LevyMeasure::from_atoms({{0.0, 1.0}}); }) == Errc::AtomAtZero);
    CHECK(error_of([] { LevyMeasure::from_atoms({{1.0, 0.0}}); }) == Errc::NonPositiveMass);
    CHECK(error_of([] { LevyMeasure::from_atoms({{1.0, -2.0}}); }) == Errc::NonPositiveMass);
    CHECK(error_of([] { LevyMeasure::from_atoms({{1.0, INFINITY}}); })
          == Errc::InfiniteTotalMass);
    CHECK(error_of([] { LevyMeasure::from_atoms({}); }) == Errc::NonPositiveMass);
}

TEST_CASE("absolute and signed moments of atoms")
{
    CHECK(atoms({{1.0, 1.0}})->abs_moment(4) == 1.0);
    CHECK(atoms({{2.0, 1.0}})->abs_moment(3) == 8.0);
    CHECK(atoms({{1.0, 0.5}, {-1.0, 0.5}})->abs_moment(2) == 1.0);
    CHECK(atoms({{1.0, 0.5}, {-1.0, 0.5}})->signed_moment(3) == 0.0);
    CHECK(atoms({{1.0, 1.0}})->signed_moment(5) == 1.0);
    CHECK(atoms({{2.0, 1.0}, {-1.0, 3.0}})->signed_moment(3) == 5.0);
    // non-integer order
    CHECK(atoms({{4.0, 2.0}})->abs_moment(2.5) == doctest::Approx(64.0));
}

TEST_CASE("moment properties hold on a grid of atomic measures")
{
    std::vector<std::vector<Atom>> grid{
        {{1.0, 1.0}},
        {{-0.5, 3.0}, {0.25, 1.0}},
        {{1.0, 0.5}, {-1.0, 0.5}, {3.0, 0.125}, {-3.0, 0.125}},
        {{0.1, 7.0}, {2.5, 0.3}, {-4.0, 0.01}},
    };
    for (auto const& g : grid)
    {
        auto const m = LevyMeasure::from_atoms(g);
        CHECK(m.abs_moment(2) == m.m2());
        // independent oracle: direct summation
        for (int n = 1; n <= 8; ++n)
        {
            double s = 0;
            double a = 0;
            for (auto const& at : g)
            {
                s += at.mass * std::pow(at.jump, n);
                a += at.mass * std::pow(std::abs(at.jump), n);
            }
            CHECK(m.signed_moment(n) == doctest::Approx(s).epsilon(1e-14));
            CHECK(m.abs_moment(n) == doctest::Approx(a).epsilon(1e-14));
        }
        for (auto const& row : interpolation_check(m, 8))
            CHECK(row.pass);
    }
    auto const sym = LevyMeasure::from_atoms({{2.0, 0.5}, {-2.0, 0.5}, {0.5, 1.0}, {-0.5, 1.0}});
    for (int n = 1; n <= 9; n += 2)
        CHECK(sym.signed_moment(n) == 0.0);
}

TEST_CASE("interpolation check examples")
{
    for (auto const& row : interpolation_check(*atoms({{1.0, 1.0}}), 6))
    {
        CHECK(row.moment == 1.0);
        CHECK(row.bound == doctest::Approx(1.0));
        CHECK(row.pass);
    }
    auto const single = interpolation_check(*atoms({{2.0, 1.0}}), 4);
    REQUIRE(single.size() == 3);
    CHECK(single[1].r == 3);
    CHECK(single[1].moment == 8.0);
    CHECK(single[1].bound == doctest::Approx(8.0));
    CHECK(single[1].tight);
    for (auto const& row : interpolation_check(*atoms({{3.0, 0.25}}), 10))
        CHECK(row.tight);

    auto const two = interpolation_check(*atoms({{1.0, 0.5}, {3.0, 0.5}}), 4);
    CHECK(two[1].moment == 14.0);
    CHECK(two[1].bound == doctest::Approx(std::sqrt(41.0 * 5.0)));
    CHECK(two[1].pass);
    CHECK_FALSE(two[1].tight);

    CHECK(error_of([] { interpolation_check(*atoms({{1.0, 1.0}}), 5); })
          == Errc::InvalidArgument);
}

TEST_CASE("power-law density moments match closed forms")
{
    PowerLawDensity d{1.5, 0.1, 5.0, 2.0};
    auto const m = LevyMeasure::from_density(d);
    // int_{eps}^{zmax} z^{q-1-alpha} dz, twice for symmetry
    auto closed = [&](double q) {
        double const e = q - d.alpha;
        return 2 * d.scale * (std::pow(d.z_max, e) - std::pow(d.eps, e)) / e;
    };
    CHECK(m.total_mass() == doctest::Approx(closed(0)).epsilon(1e-9));
    CHECK(m.m2() == doctest::Approx(closed(2)).epsilon(1e-9));
    CHECK(m.abs_moment(4) == doctest::Approx(closed(4)).epsilon(1e-9));
    CHECK(m.abs_moment(2.5) == doctest::Approx(closed(2.5)).epsilon(1e-9));
    CHECK(std::abs(m.signed_moment(3)) < 1e-9);
    CHECK(m.truncation_bias() > 0);

    CHECK(error_of([] { LevyMeasure::from_density({1.0, 0.0, 1.0, 1.0}); })
          == Errc::InfiniteTotalMass);
    CHECK(error_of([] { LevyMeasure::from_density({1.0, 0.1, INFINITY, 1.0}); })
          == Errc::InfiniteSecondMoment);
}

TEST_CASE("levy exponent")
{
    auto const unit = atoms({{1.0, 1.0}});
    auto const psi = unit->levy_exponent(std::numbers::pi);
    CHECK(psi.real() == doctest::Approx(-2.0));
    CHECK(psi.imag() == doctest::Approx(-std::numbers::pi));
    CHECK(std::abs(unit->levy_exponent(0.0)) == 0.0);
    auto const sym = atoms({{1.0, 0.5}, {-1.0, 0.5}});
    for (double t : {-2.0, 0.3, 1.7})
        CHECK(sym->levy_exponent(t).imag() == doctest::Approx(0.0));
}

TEST_CASE("jump sets")
{
    auto const m = atoms({{1.0, 1.0}, {2.0, 0.5}, {-1.0, 0.25}});
    CHECK(m->mass_of(JumpSet{{1.0, 2.0}, std::nullopt}) == 1.5);
    CHECK(m->mass_of(JumpSet::all()) == 1.75);
    CHECK(m->first_moment_of(JumpSet{{2.0, -1.0}, std::nullopt}) == 0.75);
    CHECK(m->mass_of(JumpSet{{}, Interval{0.0, 1.5}}) == 1.0);
}

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <doctest.h>

#include "levyito/parallel.hpp"
#include "levyito/rational.hpp"
#include "levyito/rng.hpp"
#include "levyito/stats.hpp"
#include "levyito/summation.hpp"
#include "test_support.hpp"

using namespace levyito;
using test::error_of;

TEST_CASE("Philox4x32-10 known answers")
{
    using B = Philox4x32::Block;
    CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0})
          == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu})
          == B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               {0xa4093822u, 0x299f31d0u})
          == B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("engine streams are deterministic and distinct")
{
    Philox4x32 a(42, 1);
    Philox4x32 b(42, 1);
    Philox4x32 c(42, 2);
    bool differ = false;
    for (int i = 0; i < 100; ++i)
    {
        auto const x = a();
        CHECK(x == b());
        differ = differ || x != c();
    }
    CHECK(differ);
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(sample_seed(9, 0) != sample_seed(9, 1));
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("engine output is roughly uniform")
{
    Philox4x32 g(123);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sum = 0;
    int const n = 200000;
    for (int i = 0; i < n; ++i)
        sum += u(g);
    // mean of U(0,1): SE = sqrt(1/12/n)
    CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
}

TEST_CASE("mean estimate and z-test")
{
    std::vector<double> constant(2000, 3.0);
    auto const t = mc_mean_test(constant, 3.0, 3);
    CHECK(t.z == 0.0);
    CHECK(t.pass);
    CHECK(error_of([&] { mc_mean_test(constant, 2.0, 3); }) == Errc::DegenerateVariance);
    std::vector<double> few(10, 1.0);
    CHECK(error_of([&] { mc_mean_test(few, 1.0, 3); }) == Errc::InvalidArgument);

    std::vector<double> alt;
    for (int i = 0; i < 1000; ++i)
        alt.push_back(i % 2 ? 1.0 : -1.0);
    auto const e = estimate_mean(alt);
    CHECK(e.mean == 0.0);
    CHECK(e.se == doctest::Approx(std::sqrt(1000.0 / 999.0 / 1000.0)));
    auto const zt = z_test(1.0, 0.5, 0.0, 3);
    CHECK(zt.z == 2.0);
    CHECK(zt.pass);
    CHECK_FALSE(z_test(2.0, 0.5, 0.0, 3).pass);
}

TEST_CASE("pth root delta method")
{
    MeanEstimate m{16.0, 1.6, 1000};
    auto const r = pth_root(m, 4);
    CHECK(r.mean == doctest::Approx(2.0));
    // d/dx x^{1/4} = x^{-3/4}/4
    CHECK(r.se == doctest::Approx(1.6 * std::pow(16.0, -0.75) / 4));
}

TEST_CASE("compensated summation")
{
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
}

TEST_CASE("parallel_for is reproducible across thread counts")
{
    auto run = [](unsigned threads) {
        std::vector<double> out(5000);
        parallel_for(out.size(), threads, [&](std::size_t j) {
            Philox4x32 g(sample_seed(77, j));
            out[j] = std::uniform_real_distribution<double>(0, 1)(g);
        });
        return out;
    };
    CHECK(run(1) == run(3));
    CHECK(run(1) == run(8));
}

TEST_CASE("parallel_for propagates exceptions")
{
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t j) {
                                     if (j == 57)
                                         fail(Errc::InvalidArgument, "boom");
                                 }),
                    Error);
}

TEST_CASE("rational conversion is exact")
{
    for (double x : {0.1, -3.75, 1e-300, 123456789.125})
        CHECK(to_double(to_rational(x)) == x);
    CHECK(to_rational(0.5) + to_rational(0.25) == Rational(3, 4));
}

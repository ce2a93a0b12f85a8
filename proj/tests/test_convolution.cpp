#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "levyito/convolution.hpp"
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

double heat(double d, double t, double x)
{
    return std::exp(-x * x / (4 * d * t)) / std::sqrt(4 * std::numbers::pi * d * t);
}
}  // namespace

TEST_CASE("kernel evaluation")
{
    ConvolutionKernel const box = kernel::Box{0.0, 1.0, 2.0};
    CHECK(box(0.3, 0.5) == 2.0);
    CHECK(box(0.3, 0.0) == 0.0);
    CHECK(box(0.3, 1.0) == 2.0);
    CHECK(box.space_integral(1.0, -1.0, 0.5) == 1.0);
    CHECK(box.time_integral(0.5, 0.5) == 1.0);

    ConvolutionKernel const zero = kernel::Zero{};
    CHECK(zero(1.0, 0.0) == 0.0);
    CHECK(zero.time_integral(1.0, 0.0) == 0.0);

    double const d = 0.7;
    ConvolutionKernel const h = kernel::Heat{d};
    CHECK(h(0.4, 0.3) == doctest::Approx(heat(d, 0.4, 0.3)));
    // closed-form time integral against adaptive quadrature of the raw kernel
    for (double a : {0.0, 0.05, 0.4, 1.3, 3.0})
    {
        for (double t : {0.1, 1.0, 2.5})
        {
            auto f = [&](double w) { return w > 0 ? 2 * t * w * heat(d, t * w * w, a) : 0.0; };
            double const q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                f, 0.0, 1.0, 25, 1e-14);
            CHECK(h.time_integral(t, a) == doctest::Approx(q).epsilon(1e-9));
        }
    }
    // space integral against erf
    double const t = 0.8;
    double const s = std::sqrt(4 * d * t);
    CHECK(h.space_integral(t, -0.2, 0.9)
          == doctest::Approx(0.5 * (std::erf(0.9 / s) - std::erf(-0.2 / s))));
    CHECK(h.space_integral(t, -kInf, kInf) == doctest::Approx(1.0));
    CHECK(h.finite_nu(2));
    CHECK_FALSE(h.finite_nu(3));
}

TEST_CASE("kernel power integrals")
{
    ConvolutionKernel const box = kernel::Box{-0.5, 1.0, 2.0};
    auto const b = kernel_power_integral(box, 2.0, 3);
    CHECK(b.value == doctest::Approx(2.0 * 1.5 * 8.0).epsilon(1e-12));

    double const d = 0.5;
    ConvolutionKernel const h = kernel::Heat{d};
    // int_0^t int G_s^2 dx ds = sqrt(t / (2 pi D))
    for (double t : {0.5, 1.0})
    {
        auto const r = kernel_power_integral(h, t, 2);
        double const exact = std::sqrt(t / (2 * std::numbers::pi * d));
        CHECK(std::abs(r.value - exact) <= 1e-3 * exact + r.last_change);
        // heat kernel has unit mass
        CHECK(kernel_power_integral(h, t, 1).value == doctest::Approx(t).epsilon(1e-3));
    }
    CHECK(error_of([&] { kernel_power_integral(h, 1.0, 4); }) == Errc::InfiniteNuT);
    CHECK(kernel_power_integral(ConvolutionKernel{kernel::Zero{}}, 1.0, 2).value == 0.0);
}

TEST_CASE("field moment bounds")
{
    auto const unit = test::unit_atom();
    CHECK(field_moment_bound(*unit, field::Constant{-2.0}, 4) == 16.0);
    CHECK(field_moment_bound(*unit, field::LaggedNoise{1.0, 100.0, 0.5}, 4) == 4.0);
    CHECK(field_moment_bound(*unit, field::LaggedNoise{1.0, 1.2, 0.5}, 4) == std::pow(1.2, 4));
    CHECK(field_moment_bound(*unit, field::LaggedNoise{2.0, 100.0, 0.5}, 2) == 2.0);
}

TEST_CASE("convolution bound with a box kernel")
{
    auto const unit = test::unit_atom();
    ConvolutionSpec spec;
    spec.kernel = kernel::Box{0.0, 1.0, 1.0};
    spec.field = field::Constant{1.0};
    auto const r = bound_thm35(unit, spec, 2, RosenthalConstant{}, mc(20000, 1), 3);
    CHECK(r.nu_t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.b_pow_p == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(16.0).epsilon(1e-10));
    CHECK(std::abs(r.lhs.mean - 1.0) < 4 * r.lhs.se);
    CHECK(r.pass);

    // Psi = 1_[x-1, x) so I(Psi) = L((x-1, x]) on every realization
    for (std::uint64_t s = 0; s < 50; ++s)
    {
        auto const w = convolution_window(spec);
        auto const pr = sample_prm(unit, w, s);
        CHECK(eval_convolution(pr, spec, w)
              == doctest::Approx(eval_L_set(pr, IntervalSet{{-1.0, 0.0}})).epsilon(1e-12));
    }
}

TEST_CASE("convolution bound degenerate cases")
{
    auto const unit = test::unit_atom();
    ConvolutionSpec zero_field;
    zero_field.kernel = kernel::Box{};
    zero_field.field = field::Constant{0.0};
    auto const a = bound_thm35(unit, zero_field, 2, RosenthalConstant{}, mc(1000, 2), 3);
    CHECK(a.lhs.mean == 0.0);
    CHECK(a.rhs == 0.0);
    CHECK(a.pass);

    ConvolutionSpec zero_kernel;
    zero_kernel.kernel = kernel::Zero{};
    auto const b = bound_thm35(unit, zero_kernel, 2, RosenthalConstant{}, mc(1000, 2), 3);
    CHECK(b.nu_t == 0.0);
    CHECK(b.lhs.mean == 0.0);
    CHECK(b.rhs == 0.0);

    ConvolutionSpec heat;
    heat.kernel = kernel::Heat{};
    CHECK(error_of([&] { bound_thm35(unit, heat, 4, RosenthalConstant{}, mc(1000, 2), 3); })
          == Errc::InfiniteNuT);
}

TEST_CASE("convolution bound with a heat kernel and a random field")
{
    auto const m = test::atoms({{1.0, 0.5}, {-1.0, 0.5}});
    ConvolutionSpec spec;
    spec.kernel = kernel::Heat{0.5};
    spec.field = field::LaggedNoise{1.0, 3.0, 0.5};
    spec.t = 0.5;
    auto const r = bound_thm35(m, spec, 2, RosenthalConstant{}, mc(4000, 3), 3);
    CHECK(r.pass);
    CHECK(r.rhs_inflated >= r.rhs);
    CHECK(r.lhs.mean < r.rhs);
}

#pragma once

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levyito/error.hpp"

namespace levyito::detail
{
// Adaptive Gauss-Kronrod on a finite interval; throws QuadratureFailure when
// the error estimate exceeds abs_tol (scaled by the L1 norm when it is > 1).
template<class F>
double integrate(F&& f, double a, double b, double abs_tol, std::string const& what)
{
    if (!(b > a))
        return 0.0;
    double error = 0;
    double l1 = 0;
    double const value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, 20, 1e-13, &error, &l1);
    if (!std::isfinite(value) || error > abs_tol * std::max(1.0, l1))
        fail(Errc::QuadratureFailure,
             what + ": error estimate " + std::to_string(error) + " exceeds tolerance");
    return value;
}

// tanh-sinh for integrable endpoint singularities.
template<class F>
double integrate_singular(F&& f, double a, double b, double abs_tol, std::string const& what)
{
    if (!(b > a))
        return 0.0;
    boost::math::quadrature::tanh_sinh<double> rule;
    double error = 0;
    double l1 = 0;
    double const value = rule.integrate(f, a, b, 1e-13, &error, &l1);
    if (!std::isfinite(value) || error > abs_tol * std::max(1.0, l1))
        fail(Errc::QuadratureFailure,
             what + ": error estimate " + std::to_string(error) + " exceeds tolerance");
    return value;
}

}  // namespace levyito::detail

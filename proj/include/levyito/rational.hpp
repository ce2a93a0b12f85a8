#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace levyito
{
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

//! Exact value of a finite double (every finite double is a dyadic rational).
Rational to_rational(double x);

//! Nearest double to a rational (faithful to within one ulp, no overflow
//! from large numerators or denominators).
double to_double(Rational const& q);

}  // namespace levyito

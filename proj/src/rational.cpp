#include "levyito/rational.hpp"

#include <cmath>

#include "levyito/error.hpp"

namespace levyito
{
Rational to_rational(double x)
{
    require(std::isfinite(x), Errc::InvalidArgument,
            "cannot convert a non-finite double to a rational");
    if (x == 0.0)
        return Rational(0);
    int exponent = 0;
    double const fraction = std::frexp(x, &exponent);
    // x = mantissa * 2^(exponent - 53) with |mantissa| < 2^53
    auto const mantissa = static_cast<long long>(std::ldexp(fraction, 53));
    int const shift = exponent - 53;
    BigInt num(mantissa);
    BigInt den(1);
    if (shift >= 0)
        num <<= shift;
    else
        den <<= -shift;
    return Rational(num, den);
}

double to_double(Rational const& q)
{
    BigInt num = boost::multiprecision::numerator(q);
    BigInt const den = boost::multiprecision::denominator(q);
    if (num == 0)
        return 0.0;
    bool const negative = num < 0;
    if (negative)
        num = -num;
    // Scale so that the integer quotient carries ~66 significant bits.
    long const shift = 66 - (static_cast<long>(boost::multiprecision::msb(num))
                             - static_cast<long>(boost::multiprecision::msb(den)));
    BigInt scaled_num = num;
    BigInt scaled_den = den;
    if (shift >= 0)
        scaled_num <<= shift;
    else
        scaled_den <<= -shift;
    BigInt quotient = scaled_num / scaled_den;
    // Sticky bit keeps round-to-nearest honest after truncating division.
    if (quotient * scaled_den != scaled_num)
        quotient |= 1;
    double const value = std::ldexp(quotient.convert_to<double>(),
                                    static_cast<int>(-shift));
    return negative ? -value : value;
}

}  // namespace levyito

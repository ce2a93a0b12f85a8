#pragma once

#include <initializer_list>
#include <limits>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace levyito
{
inline constexpr double kInf = std::numeric_limits<double>::infinity();

//---------------------------------------------------------------------------//
// Half-open interval (lo, hi]; empty when hi <= lo.
struct Interval
{
    double lo = 0;
    double hi = 0;

    double length() const { return hi > lo ? hi - lo : 0.0; }
    bool empty() const { return !(hi > lo); }
    bool contains(double x) const { return x > lo && x <= hi; }
    bool bounded() const;

    Interval intersect(Interval other) const;
};

//---------------------------------------------------------------------------//
/*!
 * Finite union of half-open intervals, normalized to sorted disjoint parts
 * with touching parts merged.
 */
class IntervalSet
{
  public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);
    IntervalSet(std::initializer_list<Interval> parts)
        : IntervalSet(std::vector<Interval>(parts))
    {
    }

    std::span<Interval const> parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    double length() const;
    bool contains(double x) const;
    bool bounded() const;

    //! Smallest lower endpoint / largest upper endpoint; +-inf when empty.
    double inf() const;
    double sup() const;

    IntervalSet intersect(Interval window) const;
    IntervalSet unite(IntervalSet const& other) const;

  private:
    std::vector<Interval> parts_;
};

//---------------------------------------------------------------------------//
// One constant piece of a step function.
struct StepPiece
{
    double lo;
    double hi;
    double value;
};

/*!
 * Piecewise-constant function with bounded support, phi = sum v_k 1_(lo,hi].
 *
 * Construction splits overlapping input pieces at every breakpoint and sums
 * them; zero pieces are dropped. Adjacent pieces with equal values are *not*
 * merged, so a refined representation stays a distinct (equal) function.
 */
class StepFunction
{
  public:
    StepFunction() = default;
    explicit StepFunction(std::vector<StepPiece> pieces);

    static StepFunction indicator(Interval a, double value = 1.0);

    std::span<StepPiece const> pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }
    double operator()(double x) const;
    //! phi(x+), the value on the piece starting at or covering x.
    double right_limit(double x) const;

    //! Integral of phi^n over the real line, exact from the pieces.
    double power_integral(int n) const;
    //! Integral of |phi|^p (real p >= 0).
    double abs_power_integral(double p) const;
    //! Integral of phi^n restricted to (window.lo, window.hi].
    double power_integral(int n, Interval window) const;
    double abs_power_integral(double p, Interval window) const;

    //! Split every piece at the given points (same function).
    StepFunction refined(std::span<double const> cuts) const;

    double support_lo() const;
    double support_hi() const;

  private:
    std::vector<StepPiece> pieces_;
};

//---------------------------------------------------------------------------//
// a * exp(-((x - center) / width)^2)
struct Gaussian
{
    double amplitude = 1;
    double center = 0;
    double width = 1;

    double operator()(double x) const;
    //! Integral of phi^n over (lo, hi] in closed form (erf); lo/hi may be inf.
    double power_integral(int n, double lo, double hi) const;
    double abs_power_integral(double p, double lo, double hi) const;
};

//! Deterministic integrand on R: a step function or a Gaussian bump.
class Integrand
{
  public:
    Integrand(StepFunction f) : impl_(std::move(f)) {}  // NOLINT
    Integrand(Gaussian g) : impl_(g) {}  // NOLINT

    double operator()(double x) const;

    double power_integral(int n, double lo, double hi) const;
    double abs_power_integral(double p, double lo, double hi) const;
    double power_integral(int n) const;
    double abs_power_integral(double p) const;

    //! Integral over the symmetric shell {k_inner < |x| <= k_outer}.
    double shell_power_integral(int n, double k_inner, double k_outer) const;

    bool bounded_support() const;
    double support_lo() const;
    double support_hi() const;

    StepFunction const* as_step() const { return std::get_if<StepFunction>(&impl_); }
    Gaussian const* as_gaussian() const { return std::get_if<Gaussian>(&impl_); }

  private:
    std::variant<StepFunction, Gaussian> impl_;
};

}  // namespace levyito

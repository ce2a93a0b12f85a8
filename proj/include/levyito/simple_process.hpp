#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "levyito/functions.hpp"
#include "levyito/noise_sim.hpp"

namespace levyito
{
inline constexpr double kDefaultClampBound = 1e6;

class Coefficient;

namespace coef
{
struct Constant
{
    double value;
};
//! clamp(L(set), -bound, bound)
struct ClampedNoise
{
    IntervalSet set;
    double bound;
};
//! clamp(N^(cell), -bound, bound), the compensated count of a cell.
struct ClampedCount
{
    Cell cell;
    double bound;
};
//! sum_k c_k inner^k
struct Polynomial
{
    std::shared_ptr<Coefficient const> inner;
    std::vector<double> coefficients;
};
struct Product
{
    std::vector<Coefficient> factors;
};
struct Sum
{
    std::vector<std::pair<double, Coefficient>> terms;
};
using Node = std::variant<Constant, ClampedNoise, ClampedCount, Polynomial, Product, Sum>;
}  // namespace coef

/*!
 * Bounded coefficient functional Y of the noise, from a closed catalog.
 *
 * Each catalog entry knows the rightmost location it reads (its horizon), so
 * F_b-measurability of Y reduces to horizon() <= b. The a priori bound
 * follows from the clamps.
 */
class Coefficient
{
  public:
    static Coefficient constant(double value);
    static Coefficient clamped_noise(IntervalSet set, double bound = kDefaultClampBound);
    static Coefficient clamped_count(Cell cell, double bound = kDefaultClampBound);
    static Coefficient polynomial(Coefficient inner, std::vector<double> coefficients);
    static Coefficient product(std::vector<Coefficient> factors);
    static Coefficient sum(std::vector<std::pair<double, Coefficient>> terms);

    coef::Node const& node() const { return *node_; }

    //! Rightmost location read; -inf for deterministic coefficients.
    double horizon() const { return horizon_; }
    double bound() const { return bound_; }
    //! Largest |x| referenced by any set or cell (0 if none).
    double extent() const { return extent_; }
    bool is_deterministic() const { return horizon_ == -kInf; }
    std::optional<double> constant_value() const;

    //! Value on the information left of the horizon.
    double evaluate(RealizationView const& view) const;

  private:
    explicit Coefficient(coef::Node node);

    std::shared_ptr<coef::Node const> node_;
    double horizon_ = -kInf;
    double bound_ = 0;
    double extent_ = 0;
};

/*!
 * Simple process X = sum_i Y_i 1_(b_{i-1}, b_i] with Y_i F_{b_{i-1}}-measurable.
 *
 * A process with no pieces is the zero process.
 */
class SimpleProcess
{
  public:
    SimpleProcess() = default;

    //! Checked construction; rejects horizon violations.
    static SimpleProcess make(std::vector<double> breakpoints,
                              std::vector<Coefficient> coefficients);
    //! Deterministic process from a step function.
    static SimpleProcess deterministic(StepFunction const& phi);

    std::span<double const> breakpoints() const { return breakpoints_; }
    std::span<Coefficient const> coefficients() const { return coefficients_; }
    std::size_t size() const { return coefficients_.size(); }
    bool is_zero() const { return coefficients_.empty(); }
    bool is_deterministic() const;

    Interval piece(std::size_t i) const { return {breakpoints_[i], breakpoints_[i + 1]}; }
    //! (b_0, b_n], empty for the zero process.
    Interval support() const;
    //! Window needed to evaluate the process and its coefficients on [-K, K].
    double required_window(double K = kInf) const;

    //! Y_i evaluated on the F_{b_{i-1}} prefix, clamped to [-M_i, M_i].
    std::vector<double> values(PointRealization const& r) const;
    //! Deterministic values (throws for random coefficients).
    std::vector<double> deterministic_values() const;
    //! Path x -> X(x) for given coefficient values.
    StepFunction path(std::span<double const> values) const;
    std::optional<StepFunction> as_step_function() const;

    //! X 1_[-K, K]
    SimpleProcess restricted(double K) const;
    //! a X + b Y on merged breakpoints.
    static SimpleProcess combine(double a, SimpleProcess const& x, double b,
                                 SimpleProcess const& y);

  private:
    std::vector<double> breakpoints_;
    std::vector<Coefficient> coefficients_;
};

//! I_K(X) = sum_i Y_i L((b_{i-1}, b_i] n [-K, K])
double eval_I_K(PointRealization const& r, SimpleProcess const& x, double K);
//! Same with precomputed coefficient values.
double eval_I_K(PointRealization const& r, SimpleProcess const& x,
                std::span<double const> values, double K);
//! I(X) for a bounded-support simple process (K covering the support).
double eval_I(PointRealization const& r, SimpleProcess const& x);

}  // namespace levyito

#include "levyito/simple_process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyito/error.hpp"

namespace levyito
{
namespace
{
double clamp_to(double v, double bound)
{
    return std::clamp(v, -bound, bound);
}

void require_bound(double bound)
{
    require(std::isfinite(bound) && bound > 0, Errc::UnboundedCoefficient,
            "coefficient clamp bound must be finite and positive");
}

struct Measure
{
    double horizon = -kInf;
    double bound = 0;
    double extent = 0;
};

Measure measure_of(coef::Node const& node)
{
    return std::visit(
        [](auto const& n) -> Measure {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, coef::Constant>)
            {
                return {-kInf, std::abs(n.value), 0.0};
            }
            else if constexpr (std::is_same_v<T, coef::ClampedNoise>)
            {
                if (n.set.empty())
                    return {-kInf, 0.0, 0.0};
                return {n.set.sup(), n.bound,
                        std::max(std::abs(n.set.inf()), std::abs(n.set.sup()))};
            }
            else if constexpr (std::is_same_v<T, coef::ClampedCount>)
            {
                if (n.cell.space.empty())
                    return {-kInf, 0.0, 0.0};
                return {n.cell.space.hi, n.bound,
                        std::max(std::abs(n.cell.space.lo), std::abs(n.cell.space.hi))};
            }
            else if constexpr (std::is_same_v<T, coef::Polynomial>)
            {
                double const b = n.inner->bound();
                double bound = 0;
                double power = 1;
                for (double c : n.coefficients)
                {
                    bound += std::abs(c) * power;
                    power *= b;
                }
                return {n.inner->horizon(), bound, n.inner->extent()};
            }
            else if constexpr (std::is_same_v<T, coef::Product>)
            {
                Measure m{-kInf, 1.0, 0.0};
                for (auto const& f : n.factors)
                {
                    m.horizon = std::max(m.horizon, f.horizon());
                    m.bound *= f.bound();
                    m.extent = std::max(m.extent, f.extent());
                }
                return m;
            }
            else
            {
                Measure m;
                for (auto const& [w, c] : n.terms)
                {
                    m.horizon = std::max(m.horizon, c.horizon());
                    m.bound += std::abs(w) * c.bound();
                    m.extent = std::max(m.extent, c.extent());
                }
                return m;
            }
        },
        node);
}
}  // namespace

//---------------------------------------------------------------------------//
Coefficient::Coefficient(coef::Node node)
    : node_(std::make_shared<coef::Node const>(std::move(node)))
{
    auto const m = measure_of(*node_);
    horizon_ = m.horizon;
    bound_ = m.bound;
    extent_ = m.extent;
    require(std::isfinite(bound_), Errc::UnboundedCoefficient,
            "coefficient has no finite a priori bound");
}

Coefficient Coefficient::constant(double value)
{
    require(std::isfinite(value), Errc::UnboundedCoefficient, "constant must be finite");
    return Coefficient(coef::Constant{value});
}

Coefficient Coefficient::clamped_noise(IntervalSet set, double bound)
{
    require_bound(bound);
    require(set.bounded(), Errc::UnboundedSupport, "noise set must be bounded");
    return Coefficient(coef::ClampedNoise{std::move(set), bound});
}

Coefficient Coefficient::clamped_count(Cell cell, double bound)
{
    require_bound(bound);
    require(cell.space.empty() || cell.space.bounded(), Errc::UnboundedSupport,
            "count cell must be bounded");
    return Coefficient(coef::ClampedCount{std::move(cell), bound});
}

Coefficient Coefficient::polynomial(Coefficient inner, std::vector<double> coefficients)
{
    for (double c : coefficients)
        require(std::isfinite(c), Errc::UnboundedCoefficient,
                "polynomial coefficients must be finite");
    return Coefficient(coef::Polynomial{std::make_shared<Coefficient const>(std::move(inner)),
                                        std::move(coefficients)});
}

Coefficient Coefficient::product(std::vector<Coefficient> factors)
{
    return Coefficient(coef::Product{std::move(factors)});
}

Coefficient Coefficient::sum(std::vector<std::pair<double, Coefficient>> terms)
{
    for (auto const& t : terms)
        require(std::isfinite(t.first), Errc::UnboundedCoefficient, "weights must be finite");
    return Coefficient(coef::Sum{std::move(terms)});
}

std::optional<double> Coefficient::constant_value() const
{
    if (auto const* c = std::get_if<coef::Constant>(node_.get()))
        return c->value;
    return std::nullopt;
}

double Coefficient::evaluate(RealizationView const& view) const
{
    return std::visit(
        [&view](auto const& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, coef::Constant>)
            {
                return n.value;
            }
            else if constexpr (std::is_same_v<T, coef::ClampedNoise>)
            {
                return clamp_to(eval_L_set(view, n.set), n.bound);
            }
            else if constexpr (std::is_same_v<T, coef::ClampedCount>)
            {
                return clamp_to(compensated_count(view, n.cell), n.bound);
            }
            else if constexpr (std::is_same_v<T, coef::Polynomial>)
            {
                // Horner
                double const v = n.inner->evaluate(view);
                double acc = 0;
                for (auto it = n.coefficients.rbegin(); it != n.coefficients.rend(); ++it)
                    acc = acc * v + *it;
                return acc;
            }
            else if constexpr (std::is_same_v<T, coef::Product>)
            {
                double acc = 1;
                for (auto const& f : n.factors)
                    acc *= f.evaluate(view);
                return acc;
            }
            else
            {
                double acc = 0;
                for (auto const& [w, c] : n.terms)
                    acc += w * c.evaluate(view);
                return acc;
            }
        },
        *node_);
}

//---------------------------------------------------------------------------//
SimpleProcess SimpleProcess::make(std::vector<double> breakpoints,
                                  std::vector<Coefficient> coefficients)
{
    if (coefficients.empty())
    {
        require(breakpoints.size() <= 1, Errc::InvalidArgument,
                "breakpoints given without coefficients");
        return {};
    }
    require(breakpoints.size() == coefficients.size() + 1, Errc::InvalidArgument,
            "need exactly one more breakpoint than coefficients");
    for (std::size_t i = 0; i < breakpoints.size(); ++i)
    {
        require(std::isfinite(breakpoints[i]), Errc::NonIncreasingBreakpoints,
                "breakpoints must be finite");
        if (i > 0)
            require(breakpoints[i] > breakpoints[i - 1], Errc::NonIncreasingBreakpoints,
                    "breakpoints must be strictly increasing");
    }
    for (std::size_t i = 0; i < coefficients.size(); ++i)
    {
        auto const& y = coefficients[i];
        require(y.horizon() <= breakpoints[i], Errc::HorizonViolation,
                "coefficient " + std::to_string(i + 1) + " reads the noise up to x = "
                    + std::to_string(y.horizon()) + " but must be known at b = "
                    + std::to_string(breakpoints[i]));
    }
    SimpleProcess out;
    out.breakpoints_ = std::move(breakpoints);
    out.coefficients_ = std::move(coefficients);
    return out;
}

SimpleProcess SimpleProcess::deterministic(StepFunction const& phi)
{
    std::vector<double> b;
    std::vector<Coefficient> c;
    for (auto const& piece : phi.pieces())
    {
        if (!b.empty() && b.back() < piece.lo)
        {
            // gap between pieces
            c.push_back(Coefficient::constant(0.0));
            b.push_back(piece.lo);
        }
        if (b.empty())
            b.push_back(piece.lo);
        c.push_back(Coefficient::constant(piece.value));
        b.push_back(piece.hi);
    }
    return make(std::move(b), std::move(c));
}

bool SimpleProcess::is_deterministic() const
{
    return std::all_of(coefficients_.begin(), coefficients_.end(),
                       [](Coefficient const& c) { return c.is_deterministic(); });
}

Interval SimpleProcess::support() const
{
    if (is_zero())
        return {};
    return {breakpoints_.front(), breakpoints_.back()};
}

double SimpleProcess::required_window(double K) const
{
    double w = 0;
    for (std::size_t i = 0; i < size(); ++i)
    {
        Interval const a = piece(i).intersect({-K, K});
        if (a.empty())
            continue;
        w = std::max({w, std::abs(a.lo), std::abs(a.hi), coefficients_[i].extent()});
    }
    return w;
}

std::vector<double> SimpleProcess::values(PointRealization const& r) const
{
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i)
    {
        auto const& y = coefficients_[i];
        double const v = y.is_deterministic() ? y.evaluate(r.view())
                                              : y.evaluate(r.prefix(breakpoints_[i]));
        out[i] = clamp_to(v, y.bound());
    }
    return out;
}

std::vector<double> SimpleProcess::deterministic_values() const
{
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i)
    {
        auto const v = coefficients_[i].constant_value();
        require(coefficients_[i].is_deterministic(), Errc::InvalidArgument,
                "process has random coefficients");
        out[i] = v ? *v : coefficients_[i].evaluate(RealizationView{});
    }
    return out;
}

StepFunction SimpleProcess::path(std::span<double const> values) const
{
    require(values.size() == size(), Errc::InvalidArgument, "one value per piece required");
    std::vector<StepPiece> pieces;
    pieces.reserve(size());
    for (std::size_t i = 0; i < size(); ++i)
        pieces.push_back({breakpoints_[i], breakpoints_[i + 1], values[i]});
    return StepFunction(std::move(pieces));
}

std::optional<StepFunction> SimpleProcess::as_step_function() const
{
    if (!is_deterministic())
        return std::nullopt;
    auto const v = deterministic_values();
    return path(v);
}

SimpleProcess SimpleProcess::restricted(double K) const
{
    std::vector<double> b;
    std::vector<Coefficient> c;
    for (std::size_t i = 0; i < size(); ++i)
    {
        Interval const a = piece(i).intersect({-K, K});
        if (a.empty())
            continue;
        if (b.empty())
            b.push_back(a.lo);
        c.push_back(coefficients_[i]);
        b.push_back(a.hi);
    }
    SimpleProcess out;
    out.breakpoints_ = std::move(b);
    out.coefficients_ = std::move(c);
    if (out.coefficients_.empty())
        out.breakpoints_.clear();
    return out;
}

SimpleProcess SimpleProcess::combine(double a, SimpleProcess const& x, double b,
                                     SimpleProcess const& y)
{
    std::vector<double> cuts(x.breakpoints_);
    cuts.insert(cuts.end(), y.breakpoints_.begin(), y.breakpoints_.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() < 2)
        return {};

    // Coefficient of p on (lo, hi], or nothing outside its support.
    auto lookup = [](SimpleProcess const& p, double lo, double hi) -> Coefficient const* {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p.breakpoints_[i] <= lo && hi <= p.breakpoints_[i + 1])
                return &p.coefficients_[i];
        return nullptr;
    };

    std::vector<Coefficient> c;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
    {
        std::vector<std::pair<double, Coefficient>> terms;
        if (auto const* cx = lookup(x, cuts[j], cuts[j + 1]))
            terms.emplace_back(a, *cx);
        if (auto const* cy = lookup(y, cuts[j], cuts[j + 1]))
            terms.emplace_back(b, *cy);
        bool const all_constant = std::all_of(terms.begin(), terms.end(), [](auto const& t) {
            return t.second.constant_value().has_value();
        });
        if (all_constant)
        {
            double v = 0;
            for (auto const& [w, k] : terms)
                v += w * *k.constant_value();
            c.push_back(Coefficient::constant(v));
        }
        else
        {
            c.push_back(Coefficient::sum(std::move(terms)));
        }
    }
    return make(std::move(cuts), std::move(c));
}

//---------------------------------------------------------------------------//
double eval_I_K(PointRealization const& r, SimpleProcess const& x,
                std::span<double const> values, double K)
{
    require(K >= 0, Errc::InvalidArgument, "K must be non-negative");
    require(values.size() == x.size(), Errc::InvalidArgument, "one value per piece required");
    auto const view = r.view();
    double total = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        Interval const a = x.piece(i).intersect({-K, K});
        if (a.empty())
            continue;
        total += values[i] * eval_L_set(view, IntervalSet{a});
    }
    return total;
}

double eval_I_K(PointRealization const& r, SimpleProcess const& x, double K)
{
    auto const v = x.values(r);
    return eval_I_K(r, x, v, K);
}

double eval_I(PointRealization const& r, SimpleProcess const& x)
{
    if (x.is_zero())
        return 0.0;
    auto const s = x.support();
    return eval_I_K(r, x, std::max(std::abs(s.lo), std::abs(s.hi)));
}

}  // namespace levyito

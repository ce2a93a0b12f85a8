#include "levyito/functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levyito/error.hpp"

namespace levyito
{
bool Interval::bounded() const
{
    return std::isfinite(lo) && std::isfinite(hi);
}

Interval Interval::intersect(Interval other) const
{
    return {std::max(lo, other.lo), std::min(hi, other.hi)};
}

//---------------------------------------------------------------------------//
IntervalSet::IntervalSet(std::vector<Interval> parts)
{
    std::erase_if(parts, [](Interval const& a) { return a.empty(); });
    for (auto const& a : parts)
        require(!std::isnan(a.lo) && !std::isnan(a.hi), Errc::InvalidArgument,
                "interval endpoint is NaN");
    std::sort(parts.begin(), parts.end(),
              [](Interval const& a, Interval const& b) { return a.lo < b.lo; });
    for (auto const& a : parts)
    {
        if (!parts_.empty() && a.lo <= parts_.back().hi)
            parts_.back().hi = std::max(parts_.back().hi, a.hi);
        else
            parts_.push_back(a);
    }
}

double IntervalSet::length() const
{
    double total = 0;
    for (auto const& a : parts_)
        total += a.length();
    return total;
}

bool IntervalSet::contains(double x) const
{
    auto it = std::lower_bound(
        parts_.begin(), parts_.end(), x,
        [](Interval const& a, double v) { return a.hi < v; });
    return it != parts_.end() && it->contains(x);
}

bool IntervalSet::bounded() const
{
    return parts_.empty() || (std::isfinite(inf()) && std::isfinite(sup()));
}

double IntervalSet::inf() const
{
    return parts_.empty() ? kInf : parts_.front().lo;
}

double IntervalSet::sup() const
{
    return parts_.empty() ? -kInf : parts_.back().hi;
}

IntervalSet IntervalSet::intersect(Interval window) const
{
    std::vector<Interval> out;
    for (auto const& a : parts_)
        out.push_back(a.intersect(window));
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(IntervalSet const& other) const
{
    std::vector<Interval> all(parts_.begin(), parts_.end());
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
}

//---------------------------------------------------------------------------//
StepFunction::StepFunction(std::vector<StepPiece> pieces)
{
    std::vector<double> cuts;
    std::vector<StepPiece> live;
    for (auto const& p : pieces)
    {
        require(std::isfinite(p.value), Errc::InvalidArgument,
                "step function value must be finite");
        if (!(p.hi > p.lo) || p.value == 0.0)
            continue;
        require(std::isfinite(p.lo) && std::isfinite(p.hi),
                Errc::UnboundedSupport, "step function piece is unbounded");
        cuts.push_back(p.lo);
        cuts.push_back(p.hi);
        live.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::stable_sort(live.begin(), live.end(),
                     [](StepPiece const& a, StepPiece const& b) { return a.lo < b.lo; });

    // Sweep the elementary intervals keeping the set of covering pieces.
    std::vector<StepPiece const*> active;
    std::size_t next = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    {
        double const lo = cuts[k];
        double const hi = cuts[k + 1];
        std::erase_if(active, [lo](StepPiece const* p) { return p->hi <= lo; });
        while (next < live.size() && live[next].lo <= lo)
            active.push_back(&live[next++]);
        double value = 0;
        for (auto const* p : active)
            value += p->value;
        if (!active.empty() && value != 0.0)
            pieces_.push_back({lo, hi, value});
    }
}

double StepFunction::right_limit(double x) const
{
    auto it = std::upper_bound(
        pieces_.begin(), pieces_.end(), x,
        [](double v, StepPiece const& p) { return v < p.hi; });
    if (it != pieces_.end() && x >= it->lo && x < it->hi)
        return it->value;
    return 0.0;
}

StepFunction StepFunction::indicator(Interval a, double value)
{
    return StepFunction({{a.lo, a.hi, value}});
}

double StepFunction::operator()(double x) const
{
    auto it = std::lower_bound(
        pieces_.begin(), pieces_.end(), x,
        [](StepPiece const& p, double v) { return p.hi < v; });
    if (it != pieces_.end() && x > it->lo && x <= it->hi)
        return it->value;
    return 0.0;
}

double StepFunction::power_integral(int n) const
{
    return power_integral(n, {-kInf, kInf});
}

double StepFunction::abs_power_integral(double p) const
{
    return abs_power_integral(p, {-kInf, kInf});
}

double StepFunction::power_integral(int n, Interval window) const
{
    double total = 0;
    for (auto const& p : pieces_)
    {
        double const len = Interval{p.lo, p.hi}.intersect(window).length();
        if (len > 0)
            total += std::pow(p.value, n) * len;
    }
    return total;
}

double StepFunction::abs_power_integral(double q, Interval window) const
{
    double total = 0;
    for (auto const& p : pieces_)
    {
        double const len = Interval{p.lo, p.hi}.intersect(window).length();
        if (len > 0)
            total += std::pow(std::abs(p.value), q) * len;
    }
    return total;
}

StepFunction StepFunction::refined(std::span<double const> cuts) const
{
    StepFunction out;
    std::vector<double> sorted(cuts.begin(), cuts.end());
    std::sort(sorted.begin(), sorted.end());
    for (auto const& p : pieces_)
    {
        double lo = p.lo;
        for (double c : sorted)
        {
            if (c > lo && c < p.hi)
            {
                out.pieces_.push_back({lo, c, p.value});
                lo = c;
            }
        }
        out.pieces_.push_back({lo, p.hi, p.value});
    }
    return out;
}

double StepFunction::support_lo() const
{
    return pieces_.empty() ? 0.0 : pieces_.front().lo;
}

double StepFunction::support_hi() const
{
    return pieces_.empty() ? 0.0 : pieces_.back().hi;
}

//---------------------------------------------------------------------------//
namespace
{
// erf(b) - erf(a) for a <= b without cancellation in the tails.
double erf_difference(double a, double b)
{
    if (a >= 0)
        return std::erfc(a) - std::erfc(b);
    if (b <= 0)
        return std::erfc(-b) - std::erfc(-a);
    return std::erf(b) - std::erf(a);
}
}  // namespace

double Gaussian::operator()(double x) const
{
    double const u = (x - center) / width;
    return amplitude * std::exp(-u * u);
}

double Gaussian::abs_power_integral(double p, double lo, double hi) const
{
    if (!(hi > lo) || amplitude == 0.0)
        return 0.0;
    // |a|^p exp(-p u^2) integrated in x = c + w u
    double const s = std::sqrt(p);
    double const w = std::abs(width);
    double const a = s * (lo - center) / w;
    double const b = s * (hi - center) / w;
    return std::pow(std::abs(amplitude), p) * w / s
           * (std::sqrt(std::numbers::pi_v<double>) / 2) * erf_difference(a, b);
}

double Gaussian::power_integral(int n, double lo, double hi) const
{
    double const magnitude = abs_power_integral(n, lo, hi);
    return (amplitude < 0 && n % 2 == 1) ? -magnitude : magnitude;
}

//---------------------------------------------------------------------------//
double Integrand::operator()(double x) const
{
    return std::visit([x](auto const& f) { return f(x); }, impl_);
}

double Integrand::power_integral(int n, double lo, double hi) const
{
    if (auto const* s = as_step())
        return s->power_integral(n, {lo, hi});
    return std::get<Gaussian>(impl_).power_integral(n, lo, hi);
}

double Integrand::abs_power_integral(double p, double lo, double hi) const
{
    if (auto const* s = as_step())
        return s->abs_power_integral(p, {lo, hi});
    return std::get<Gaussian>(impl_).abs_power_integral(p, lo, hi);
}

double Integrand::power_integral(int n) const
{
    return power_integral(n, -kInf, kInf);
}

double Integrand::abs_power_integral(double p) const
{
    return abs_power_integral(p, -kInf, kInf);
}

double Integrand::shell_power_integral(int n, double k_inner, double k_outer) const
{
    if (!(k_outer > k_inner))
        return 0.0;
    // {k_inner < |x| <= k_outer} = [-k_outer, -k_inner) u (k_inner, k_outer]
    return power_integral(n, -k_outer, -k_inner) + power_integral(n, k_inner, k_outer);
}

bool Integrand::bounded_support() const
{
    if (as_step())
        return true;
    return std::get<Gaussian>(impl_).amplitude == 0.0;
}

double Integrand::support_lo() const
{
    if (auto const* s = as_step())
        return s->support_lo();
    return bounded_support() ? 0.0 : -kInf;
}

double Integrand::support_hi() const
{
    if (auto const* s = as_step())
        return s->support_hi();
    return bounded_support() ? 0.0 : kInf;
}

}  // namespace levyito

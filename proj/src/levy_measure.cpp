#include "levyito/levy_measure.hpp"

#include <cmath>
#include <sstream>

#include "levyito/error.hpp"
#include "levyito/rational.hpp"
#include "quadrature.hpp"

namespace levyito
{
namespace
{
constexpr double kInterpolationTolerance = 1e-12;

Rational rational_power(Rational const& base, int n)
{
    Rational out(1);
    for (int k = 0; k < n; ++k)
        out *= base;
    return out;
}

// Exact sum_j lambda_j z_j^n (or |z_j|^n), rounded once.
double atomic_moment(std::span<Atom const> atoms, int n, bool absolute)
{
    Rational total(0);
    for (auto const& atom : atoms)
    {
        Rational z = to_rational(absolute ? std::abs(atom.jump) : atom.jump);
        total += to_rational(atom.mass) * rational_power(z, n);
    }
    return to_double(total);
}

// 2 * int_eps^zmax z^p density(z) dz for the symmetric family.
double density_abs_moment(PowerLawDensity const& d, double p)
{
    auto f = [&](double z) { return std::pow(z, p) * d.density(z); };
    return 2.0 * detail::integrate(f, d.eps, d.z_max, LevyMeasure::kQuadratureTolerance,
                                   "density moment");
}
}  // namespace

double PowerLawDensity::density(double z) const
{
    double const a = std::abs(z);
    if (a < eps || a > z_max)
        return 0.0;
    return scale * std::pow(a, -1.0 - alpha);
}

bool JumpSet::contains(double z) const
{
    if (range)
        return range->contains(z);
    return std::find(atoms.begin(), atoms.end(), z) != atoms.end();
}

//---------------------------------------------------------------------------//
LevyMeasure LevyMeasure::from_atoms(std::vector<Atom> atoms)
{
    require(!atoms.empty(), Errc::NonPositiveMass, "measure has no atoms");
    for (auto const& atom : atoms)
    {
        require(atom.jump != 0.0, Errc::AtomAtZero,
                "atom at z = 0 (the measure lives on R \\ {0})");
        require(!std::isnan(atom.jump), Errc::InvalidArgument, "atom position is NaN");
        require(atom.mass > 0.0, Errc::NonPositiveMass,
                "atom at z = " + std::to_string(atom.jump) + " has non-positive mass");
        require(std::isfinite(atom.mass), Errc::InfiniteTotalMass,
                "atom mass is not finite");
        require(std::isfinite(atom.jump), Errc::InfiniteSecondMoment,
                "atom position is not finite");
    }
    LevyMeasure out;
    double total = 0;
    for (auto const& atom : atoms)
    {
        total += atom.mass;
        out.cumulative_mass_.push_back(total);
    }
    require(std::isfinite(total), Errc::InfiniteTotalMass, "total mass overflows");
    out.total_mass_ = total;
    out.impl_ = std::move(atoms);
    out.cache_moments();
    require(std::isfinite(out.m2()), Errc::InfiniteSecondMoment,
            "second moment is not finite");
    return out;
}

LevyMeasure LevyMeasure::from_density(PowerLawDensity density)
{
    require(density.eps > 0.0, Errc::InfiniteTotalMass,
            "density must be truncated at |z| >= eps > 0");
    require(density.scale > 0.0 && std::isfinite(density.scale), Errc::NonPositiveMass,
            "density scale must be positive and finite");
    require(std::isfinite(density.z_max), Errc::InfiniteSecondMoment,
            "density must be truncated at a finite z_max");
    require(density.z_max > density.eps, Errc::NonPositiveMass,
            "empty support: z_max <= eps");
    require(density.alpha < 2.0, Errc::InfiniteSecondMoment,
            "alpha >= 2: the untruncated family has infinite small-jump variance");

    LevyMeasure out;
    out.impl_ = density;
    auto const& d = std::get<PowerLawDensity>(out.impl_);
    out.total_mass_ = 2.0 * detail::integrate(
        [&](double z) { return d.density(z); }, d.eps, d.z_max, kQuadratureTolerance,
        "density total mass");
    out.cache_moments();
    return out;
}

void LevyMeasure::cache_moments()
{
    abs_[0] = total_mass_;
    signed_[0] = total_mass_;
    for (int n = 1; n <= kCachedOrder; ++n)
    {
        if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
        {
            abs_[n] = atomic_moment(*atoms, n, true);
            signed_[n] = n % 2 == 0 ? abs_[n] : atomic_moment(*atoms, n, false);
        }
        else
        {
            abs_[n] = density_abs_moment(std::get<PowerLawDensity>(impl_), n);
            signed_[n] = n % 2 == 0 ? abs_[n] : 0.0;
        }
    }
}

std::span<Atom const> LevyMeasure::atoms() const
{
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
        return *atoms;
    return {};
}

double LevyMeasure::abs_moment(double p) const
{
    require(p >= 1.0 && std::isfinite(p), Errc::InvalidArgument,
            "absolute moment order must be a real p >= 1");
    double integral_part = 0;
    if (std::modf(p, &integral_part) == 0.0 && p <= kCachedOrder)
        return abs_[static_cast<int>(p)];
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
    {
        if (std::modf(p, &integral_part) == 0.0)
            return atomic_moment(*atoms, static_cast<int>(p), true);
        double total = 0;
        for (auto const& atom : *atoms)
            total += atom.mass * std::pow(std::abs(atom.jump), p);
        return total;
    }
    return density_abs_moment(std::get<PowerLawDensity>(impl_), p);
}

double LevyMeasure::signed_moment(int n) const
{
    require(n >= 1, Errc::InvalidArgument, "signed moment order must be >= 1");
    if (n <= kCachedOrder)
        return signed_[n];
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
        return atomic_moment(*atoms, n, false);
    return n % 2 == 0 ? density_abs_moment(std::get<PowerLawDensity>(impl_), n) : 0.0;
}

MomentTable LevyMeasure::moment_table(int max_order) const
{
    MomentTable table;
    table.abs_moments.assign(max_order + 1, 0.0);
    table.signed_moments.assign(max_order + 1, 0.0);
    for (int n = 1; n <= max_order; ++n)
    {
        table.abs_moments[n] = abs_moment(n);
        table.signed_moments[n] = signed_moment(n);
    }
    return table;
}

double LevyMeasure::drift() const
{
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
    {
        double total = 0;
        for (auto const& atom : *atoms)
            if (std::abs(atom.jump) > 1.0)
                total += atom.mass * atom.jump;
        return -total;
    }
    return 0.0;  // symmetric family
}

double LevyMeasure::truncation_bias() const
{
    auto const* d = density();
    if (!d)
        return 0.0;
    auto f = [&](double z) { return d->scale * std::pow(z, 1.0 - d->alpha); };
    return 2.0 * detail::integrate_singular(f, 0.0, d->eps, kQuadratureTolerance,
                                            "truncation bias");
}

double LevyMeasure::mass_of(JumpSet const& set) const
{
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
    {
        double total = 0;
        for (auto const& atom : *atoms)
            if (set.contains(atom.jump))
                total += atom.mass;
        return total;
    }
    if (!set.range)
        return 0.0;
    auto const& d = std::get<PowerLawDensity>(impl_);
    auto f = [&](double z) { return d.density(z); };
    Interval const pos = set.range->intersect({d.eps, d.z_max});
    Interval const neg = set.range->intersect({-d.z_max, -d.eps});
    return detail::integrate(f, pos.lo, pos.hi, kQuadratureTolerance, "jump-set mass")
           + detail::integrate(f, neg.lo, neg.hi, kQuadratureTolerance, "jump-set mass");
}

double LevyMeasure::first_moment_of(JumpSet const& set) const
{
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
    {
        double total = 0;
        for (auto const& atom : *atoms)
            if (set.contains(atom.jump))
                total += atom.mass * atom.jump;
        return total;
    }
    if (!set.range)
        return 0.0;
    auto const& d = std::get<PowerLawDensity>(impl_);
    auto f = [&](double z) { return z * d.density(z); };
    Interval const pos = set.range->intersect({d.eps, d.z_max});
    Interval const neg = set.range->intersect({-d.z_max, -d.eps});
    return detail::integrate(f, pos.lo, pos.hi, kQuadratureTolerance, "jump-set moment")
           + detail::integrate(f, neg.lo, neg.hi, kQuadratureTolerance, "jump-set moment");
}

std::complex<double> LevyMeasure::levy_exponent(double theta) const
{
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
    {
        double re = 0;
        double im = 0;
        for (auto const& atom : *atoms)
        {
            double const t = theta * atom.jump;
            // cos(t) - 1 = -2 sin^2(t/2) avoids cancellation near 0
            double const s = std::sin(t / 2);
            re += atom.mass * (-2.0 * s * s);
            im += atom.mass * (std::sin(t) - t);
        }
        return {re, im};
    }
    auto const& d = std::get<PowerLawDensity>(impl_);
    auto f = [&](double z) {
        double const s = std::sin(theta * z / 2);
        return -2.0 * s * s * d.density(z);
    };
    return {2.0 * detail::integrate(f, d.eps, d.z_max, kQuadratureTolerance, "levy exponent"),
            0.0};
}

std::string LevyMeasure::describe() const
{
    std::ostringstream os;
    os.precision(17);
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
    {
        os << "atoms{";
        for (std::size_t j = 0; j < atoms->size(); ++j)
            os << (j ? "," : "") << "(" << (*atoms)[j].jump << "," << (*atoms)[j].mass << ")";
        os << "}";
    }
    else
    {
        auto const& d = std::get<PowerLawDensity>(impl_);
        os << "symmetric_power_law{alpha=" << d.alpha << ",eps=" << d.eps
           << ",z_max=" << d.z_max << ",scale=" << d.scale << "}";
    }
    return os.str();
}

//---------------------------------------------------------------------------//
std::vector<InterpolationRow> interpolation_check(LevyMeasure const& model, int p)
{
    require(p >= 2 && p % 2 == 0, Errc::InvalidArgument,
            "interpolation check needs an even p >= 2");
    double const mp = model.abs_moment(p);
    require(std::isfinite(mp), Errc::InfinitePMoment,
            "m_" + std::to_string(p) + " is not finite");
    double const m2 = model.m2();

    std::vector<InterpolationRow> rows;
    for (int r = 2; r <= p; ++r)
    {
        double const theta = p == 2 ? 0.0 : double(r - 2) / double(p - 2);
        double const bound = std::pow(mp, theta) * std::pow(m2, 1.0 - theta);
        double const moment = model.abs_moment(r);
        double const slack = kInterpolationTolerance * bound;
        rows.push_back({r, moment, bound, moment <= bound + slack,
                        std::abs(moment - bound) <= slack});
    }
    return rows;
}

}  // namespace levyito

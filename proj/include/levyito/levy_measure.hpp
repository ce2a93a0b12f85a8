#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levyito/functions.hpp"

namespace levyito
{
//! Jump size z carrying intensity mass lambda.
struct Atom
{
    double jump;
    double mass;
};

/*!
 * Symmetric power-law density c |z|^(-1-alpha) on eps <= |z| <= z_max.
 *
 * The small jumps |z| < eps are discarded; their variance contribution is
 * reported through LevyMeasure::truncation_bias().
 */
struct PowerLawDensity
{
    double alpha = 1.0;
    double eps = 0.1;
    double z_max = 10.0;
    double scale = 1.0;

    double density(double z) const;
};

//! Set of jump sizes: an explicit atom list or an interval (lo, hi] of z.
struct JumpSet
{
    //! Explicit jump values (atomic measures).
    std::vector<double> atoms;
    //! Used instead of the atom list when set.
    std::optional<Interval> range;

    static JumpSet all() { return JumpSet{{}, Interval{-kInf, kInf}}; }
    bool contains(double z) const;
};

struct MomentTable
{
    //! abs_moments[p] = m_p, signed_moments[n] = m~_n (index 0 unused)
    std::vector<double> abs_moments;
    std::vector<double> signed_moments;
};

struct InterpolationRow
{
    int r;
    double moment;  //!< m_r
    double bound;   //!< m_p^theta m_2^(1-theta), theta = (r-2)/(p-2)
    bool pass;      //!< moment <= bound up to relative 1e-12
    bool tight;     //!< |moment - bound| <= 1e-12 * bound
};

/*!
 * Validated finite-mass jump measure nu on R \ {0}.
 *
 * Integer-order moments up to kCachedOrder are computed once at validation:
 * atomic measures use exact rational accumulation (every double is a dyadic
 * rational) with a single final rounding, density measures use adaptive
 * Gauss-Kronrod quadrature. Instances are immutable after construction.
 */
class LevyMeasure
{
  public:
    static constexpr int kCachedOrder = 16;
    static constexpr double kQuadratureTolerance = 1e-10;

    static LevyMeasure from_atoms(std::vector<Atom> atoms);
    static LevyMeasure from_density(PowerLawDensity density);

    bool is_atomic() const { return std::holds_alternative<std::vector<Atom>>(impl_); }
    std::span<Atom const> atoms() const;
    PowerLawDensity const* density() const { return std::get_if<PowerLawDensity>(&impl_); }

    double total_mass() const { return total_mass_; }
    double m2() const { return signed_[2]; }

    //! m_p = int |z|^p nu(dz)
    double abs_moment(double p) const;
    //! m~_n = int z^n nu(dz)
    double signed_moment(int n) const;
    MomentTable moment_table(int max_order) const;

    //! b = -int_{|z|>1} z nu(dz)
    double drift() const;
    //! int_{|z|<eps} z^2 nu(dz) discarded by truncation (0 for atoms).
    double truncation_bias() const;

    //! nu(B)
    double mass_of(JumpSet const& set) const;
    //! int_B z nu(dz)
    double first_moment_of(JumpSet const& set) const;

    //! psi(theta) = int (e^{i theta z} - 1 - i theta z) nu(dz)
    std::complex<double> levy_exponent(double theta) const;

    //! Draw a jump from nu / nu(R0).
    template<class Engine>
    double sample_jump(Engine& rng) const;

    std::string describe() const;

  private:
    LevyMeasure() = default;
    void cache_moments();

    std::variant<std::vector<Atom>, PowerLawDensity> impl_;
    double total_mass_ = 0;
    std::array<double, kCachedOrder + 1> abs_{};
    std::array<double, kCachedOrder + 1> signed_{};
    std::vector<double> cumulative_mass_;  // atomic sampling table
};

using LevyMeasurePtr = std::shared_ptr<LevyMeasure const>;

//! Hoelder interpolation m_r <= m_p^theta m_2^(1-theta) for r = 2..p.
std::vector<InterpolationRow> interpolation_check(LevyMeasure const& model, int p);

//---------------------------------------------------------------------------//
template<class Engine>
double LevyMeasure::sample_jump(Engine& rng) const
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (auto const* atoms = std::get_if<std::vector<Atom>>(&impl_))
    {
        if (atoms->size() == 1)
            return atoms->front().jump;
        double const u = unit(rng) * cumulative_mass_.back();
        auto it = std::upper_bound(cumulative_mass_.begin(), cumulative_mass_.end(), u);
        auto idx = static_cast<std::size_t>(it - cumulative_mass_.begin());
        if (idx >= atoms->size())
            idx = atoms->size() - 1;
        return (*atoms)[idx].jump;
    }
    auto const& d = std::get<PowerLawDensity>(impl_);
    // Inverse CDF of |z| on [eps, z_max], then a fair sign.
    double const u = unit(rng);
    double magnitude;
    if (d.alpha == 0.0)
    {
        magnitude = d.eps * std::pow(d.z_max / d.eps, u);
    }
    else
    {
        double const a = std::pow(d.eps, -d.alpha);
        double const b = std::pow(d.z_max, -d.alpha);
        magnitude = std::pow(a - u * (a - b), -1.0 / d.alpha);
    }
    magnitude = std::clamp(magnitude, d.eps, d.z_max);
    return unit(rng) < 0.5 ? -magnitude : magnitude;
}

}  // namespace levyito

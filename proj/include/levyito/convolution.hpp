#pragma once

#include <type_traits>
#include <utility>
#include <variant>

#include "levyito/functions.hpp"
#include "levyito/ito_integral.hpp"
#include "levyito/levy_measure.hpp"
#include "levyito/noise_sim.hpp"

namespace levyito
{
namespace kernel
{
struct Zero
{
};
//! G_t(x) = height on (lo, hi], independent of t.
struct Box
{
    double lo = 0;
    double hi = 1;
    double height = 1;
};
//! G_t(x) = (4 pi D t)^{-1/2} exp(-x^2 / (4 D t))
struct Heat
{
    double diffusivity = 0.5;
};
}  // namespace kernel

class ConvolutionKernel
{
  public:
    using Variant = std::variant<kernel::Zero, kernel::Box, kernel::Heat>;

    ConvolutionKernel() = default;
    ConvolutionKernel(Variant v);  // NOLINT
    template<class K>
        requires std::is_constructible_v<Variant, K>
    ConvolutionKernel(K k)  // NOLINT
        : ConvolutionKernel(Variant{std::move(k)})
    {
    }

    Variant const& variant() const { return impl_; }

    //! G_t(x)
    double operator()(double t, double x) const;
    //! int_a^b G_t(x) dx in closed form.
    double space_integral(double t, double a, double b) const;
    //! Spatial range outside which G_t is zero or negligible (< 1e-25 relative).
    Interval spatial_range(double t) const;
    //! int_0^t G_r(a) dr in closed form.
    double time_integral(double t, double a) const;
    //! Whether int_0^T int |G|^q is finite.
    bool finite_nu(int q) const;

  private:
    Variant impl_;
};

namespace field
{
//! Phi(s, y) = value
struct Constant
{
    double value = 1;
};
/*!
 * Phi(s, y) = clamp(L((y_j - lag, y_j]), -bound, bound) where y_j is the
 * grid point with y in (y_j, y_j + spacing]. Known at y_j, hence predictable.
 */
struct LaggedNoise
{
    double lag = 1;
    double bound = kDefaultClampBound;
    double spacing = 0.5;
};
}  // namespace field

using RandomField = std::variant<field::Constant, field::LaggedNoise>;

//! Uniform bound on E|Phi(s, y)|^p.
double field_moment_bound(LevyMeasure const& model, RandomField const& phi, int p);

struct ConvolutionSpec
{
    ConvolutionKernel kernel;
    RandomField field = field::Constant{};
    double t = 1;
    double x = 0;
};

struct MidpointOptions
{
    int initial_cells = 8;     //!< per axis
    int max_refinements = 10;  //!< doublings
    double relative_change = 1e-3;
};

//! Result of a refined double integral over (0, t) x R.
struct RefinedIntegral
{
    double value = 0;
    double last_change = 0;  //!< |I_n - I_{n/2}| at termination
    int cells = 0;
};

/*!
 * int_0^t int |G_s(y)|^q dy ds by the composite midpoint rule, in the
 * variables s = t w^2 and the kernel's spatial range, refined by doubling.
 */
RefinedIntegral kernel_power_integral(ConvolutionKernel const& g, double t, int q,
                                      MidpointOptions const& opt = {});

struct Thm35Result
{
    int p = 0;
    MeanEstimate lhs;          //!< E|I(Psi)|^p
    double nu_t = 0;           //!< int_0^t int |G|^p
    double b_pow_p = 0;        //!< B_{t,p}^p
    double kernel_integral = 0;  //!< int int (G^2 + |G|^p)
    double field_bound = 0;    //!< sup E|Phi|^p
    double rhs = 0;            //!< refined value
    double rhs_inflated = 0;   //!< rhs plus the last quadrature change
    double quadrature_delta = 0;
    double window = 0;
    RosenthalConstant rosenthal;
    bool pass = false;
};

/*!
 * Psi(y) = int_0^t G_{t-s}(x - y) Phi(s, y) ds; lhs is the MC p-th moment of
 * I(Psi), rhs is B_{t,p}^p int_0^t int (G^2 + |G|^p) E|Phi|^p dy ds.
 */
Thm35Result bound_thm35(LevyMeasurePtr const& model, ConvolutionSpec const& spec, int p,
                        RosenthalConstant const& rc, McOptions const& mc,
                        double se_multiplier, MidpointOptions const& opt = {});

//! I(Psi) on one realization (window must cover the spatial range of Psi).
double eval_convolution(PointRealization const& r, ConvolutionSpec const& spec, double window);
//! Spatial window needed for I(Psi), including the lag of the field.
double convolution_window(ConvolutionSpec const& spec);

}  // namespace levyito

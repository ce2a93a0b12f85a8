#pragma once

#include <cstddef>
#include <span>

namespace levyito
{
inline constexpr std::size_t kSampleFloor = 1000;

//! Sample mean with its standard error (sample standard deviation / sqrt(n)).
struct MeanEstimate
{
    double mean = 0;
    double se = 0;
    std::size_t n = 0;
};

MeanEstimate estimate_mean(std::span<double const> samples);

struct ZTest
{
    double estimate = 0;
    double se = 0;
    double z = 0;
    bool pass = false;
};

/*!
 * Two-sided z-test of the sample mean against target.
 *
 * Needs at least kSampleFloor samples. Constant samples equal to the target
 * give z = 0; constant samples away from it raise DegenerateVariance.
 */
ZTest mc_mean_test(std::span<double const> samples, double target, double se_multiplier);

//! z-test from a precomputed estimate: |estimate - target| <= k * se.
ZTest z_test(double estimate, double se, double target, double se_multiplier);

//! (E X)^(1/p) with delta-method SE, given the mean estimate of X >= 0.
MeanEstimate pth_root(MeanEstimate const& mean_of_power, int p);

}  // namespace levyito

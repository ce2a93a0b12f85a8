#include "levyito/stats.hpp"

#include <cmath>
#include <string>

#include "levyito/error.hpp"
#include "levyito/summation.hpp"

namespace levyito
{
MeanEstimate estimate_mean(std::span<double const> samples)
{
    MeanEstimate out;
    out.n = samples.size();
    if (samples.empty())
        return out;
    double const n = static_cast<double>(samples.size());
    out.mean = compensated_sum(samples) / n;
    if (samples.size() < 2)
        return out;
    CompensatedSum squares;
    for (double v : samples)
    {
        double const d = v - out.mean;
        squares.add(d * d);
    }
    double const variance = squares.value() / (n - 1);
    out.se = std::sqrt(variance / n);
    return out;
}

ZTest z_test(double estimate, double se, double target, double se_multiplier)
{
    require(se_multiplier >= 1.0, Errc::InvalidArgument, "SE multiplier must be >= 1");
    ZTest out{estimate, se, 0.0, false};
    double const diff = estimate - target;
    if (se > 0)
        out.z = diff / se;
    else if (diff != 0.0)
        out.z = diff > 0 ? INFINITY : -INFINITY;
    out.pass = std::abs(out.z) <= se_multiplier;
    return out;
}

ZTest mc_mean_test(std::span<double const> samples, double target, double se_multiplier)
{
    require(samples.size() >= kSampleFloor, Errc::InvalidArgument,
            "mean test needs at least " + std::to_string(kSampleFloor) + " samples, got "
                + std::to_string(samples.size()));
    auto const m = estimate_mean(samples);
    if (m.se == 0.0 && m.mean != target)
        fail(Errc::DegenerateVariance,
             "all samples equal " + std::to_string(m.mean) + " but target is "
                 + std::to_string(target));
    return z_test(m.mean, m.se, target, se_multiplier);
}

MeanEstimate pth_root(MeanEstimate const& mean_of_power, int p)
{
    MeanEstimate out = mean_of_power;
    double const base = std::max(mean_of_power.mean, 0.0);
    out.mean = std::pow(base, 1.0 / p);
    // d/dm m^(1/p) = m^(1/p - 1) / p
    out.se = base > 0 ? out.mean / (p * base) * mean_of_power.se : 0.0;
    return out;
}

}  // namespace levyito

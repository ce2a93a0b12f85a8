#pragma once

#include <cmath>
#include <span>

namespace levyito
{
//! Neumaier (improved Kahan) compensated accumulator.
class CompensatedSum
{
  public:
    void add(double x) noexcept
    {
        double const t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            compensation_ += (sum_ - t) + x;
        else
            compensation_ += (x - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + compensation_; }

  private:
    double sum_ = 0;
    double compensation_ = 0;
};

inline double compensated_sum(std::span<double const> values) noexcept
{
    CompensatedSum acc;
    for (double v : values)
        acc.add(v);
    return acc.value();
}

}  // namespace levyito

#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace drokit {

/** Neumaier-compensated accumulator.
 *
 *  All reductions in this library run in ascending index order through this
 *  accumulator, so results do not depend on how work was scheduled and agree
 *  across platforms to the last bit.
 */
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

inline double compensated_dot(std::span<const double> a, std::span<const double> b) noexcept {
    CompensatedSum acc;
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i]);
    return acc.value();
}

inline double norm2(std::span<const double> v) noexcept {
    CompensatedSum acc;
    for (double x : v) acc.add(x * x);
    return std::sqrt(acc.value());
}

} // namespace drokit

#pragma once

#include <algorithm>
#include <cmath>

namespace pbm {

inline constexpr double kDefaultTol = 1e-9;

/// Scale used by every tolerance comparison: max(1, |a|, |b|).
inline double tol_scale(double a, double b) noexcept {
    return std::max({1.0, std::abs(a), std::abs(b)});
}

/// |a - b| <= tol * max(1, |a|, |b|)
inline bool approx_equal(double a, double b, double tol) noexcept {
    return std::abs(a - b) <= tol * tol_scale(a, b);
}

/// lhs <= rhs up to the same scaled slack as approx_equal.
inline bool approx_le(double lhs, double rhs, double tol) noexcept {
    return lhs <= rhs + tol * tol_scale(lhs, rhs);
}

}  // namespace pbm

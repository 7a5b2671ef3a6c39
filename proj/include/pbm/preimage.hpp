#pragma once

#include <cstddef>
#include <optional>

#include "pbm/expr.hpp"
#include "pbm/space.hpp"
#include "pbm/tolerance.hpp"

namespace pbm {

struct PreimageOptions {
    double tol = kDefaultTol;            ///< |f(x) - target| <= tol * max(1, |target|)
    double membership_tol = kDefaultTol;  ///< slack when testing x against the carrier
    std::size_t scan_subdivisions = 1024;
    /// Unbounded intervals are scanned on [lo, lo+1], [lo+1, lo+2], [lo+2, lo+4], ...
    /// for this many segments.
    int max_segments = 64;
};

struct PreimageResult {
    double x = 0.0;
    double residual = 0.0;  ///< |f(x) - target|
    bool from_inverse = false;
};

/// Finds x in the carrier with f(x) = target.
///
/// A supplied inverse is evaluated and checked forward; if it does not
/// reproduce the target, Error(inverse_inconsistent) is thrown. Without an
/// inverse the carrier is scanned left to right and the first sign change of
/// f - target is bisected, so the leftmost bracketed root wins. Throws
/// Error(no_bracket_found) when the scan finds nothing.
PreimageResult solve_preimage(const Expression& f, double target, const Carrier& carrier,
                              const std::optional<Expression>& inverse = std::nullopt,
                              const PreimageOptions& opts = {});

}  // namespace pbm

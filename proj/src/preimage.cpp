#include "pbm/preimage.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pbm/errors.hpp"

namespace pbm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Residual {
public:
    Residual(const Expression& f, double target) : f_(f), target_(target) {}

    // NaN where f is undefined, so such points never form a bracket
    double operator()(double x) const {
        try {
            return f_(x) - target_;
        } catch (const Error&) {
            return kNaN;
        }
    }

private:
    const Expression& f_;
    double target_;
};

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

double bisect(const Residual& g, double a, double b, double ga) {
    double gb = g(b);
    for (int it = 0; it < 2200; ++it) {
        const double m = a + 0.5 * (b - a);
        if (m <= a || m >= b) break;
        const double gm = g(m);
        if (gm == 0.0) return m;
        if (std::isnan(gm)) break;
        if (opposite(gm, ga)) {
            b = m;
            gb = gm;
        } else {
            a = m;
            ga = gm;
        }
    }
    return std::abs(ga) <= std::abs(gb) ? a : b;
}

struct Segment {
    double lo, hi;
    bool lo_open, hi_open;
};

std::optional<PreimageResult> scan_segment(const Residual& g, const Segment& seg, double accept,
                                           std::size_t subdivisions) {
    const std::size_t n = std::max<std::size_t>(1, subdivisions);
    auto node = [&](std::size_t i) {
        double x = seg.lo + (seg.hi - seg.lo) * static_cast<double>(i) / static_cast<double>(n);
        if (i == 0 && seg.lo_open) x = std::nextafter(seg.lo, seg.hi);
        if (i == n && seg.hi_open) x = std::nextafter(seg.hi, seg.lo);
        return x;
    };
    auto hit = [&](double x, double gx) -> std::optional<PreimageResult> {
        if (std::abs(gx) <= accept) return PreimageResult{x, std::abs(gx), false};
        return std::nullopt;
    };

    double prev_x = node(0);
    double prev_g = g(prev_x);
    if (auto r = hit(prev_x, prev_g)) return r;
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = node(i);
        const double gx = g(x);
        if (opposite(prev_g, gx)) {
            const double root = bisect(g, prev_x, x, prev_g);
            if (auto r = hit(root, g(root))) return r;
        }
        if (auto r = hit(x, gx)) return r;
        prev_x = x;
        prev_g = gx;
    }
    return std::nullopt;
}

}  // namespace

PreimageResult solve_preimage(const Expression& f, double target, const Carrier& carrier,
                              const std::optional<Expression>& inverse, const PreimageOptions& opts) {
    const double accept = opts.tol * std::max(1.0, std::abs(target));
    if (inverse) {
        double x = kNaN;
        double fx = kNaN;
        try {
            x = (*inverse)(target);
            fx = f(x);
        } catch (const Error& e) {
            throw Error(ErrorCode::inverse_inconsistent,
                        "inverse undefined at " + format_number(target) + ": " + e.what());
        }
        const double residual = std::abs(fx - target);
        if (!carrier.contains(x, opts.membership_tol) || !(residual <= accept)) {
            throw Error(ErrorCode::inverse_inconsistent, "inverse gives x = " + format_number(x) + " with f(x) = " +
                                                             format_number(fx) + " for target " +
                                                             format_number(target));
        }
        return {x, residual, true};
    }

    const Residual g(f, target);
    for (const auto& iv : carrier.intervals()) {
        if (std::isfinite(iv.hi)) {
            const Segment seg{iv.lo, iv.hi, !iv.lo_closed, !iv.hi_closed};
            if (auto r = scan_segment(g, seg, accept, opts.scan_subdivisions)) return *r;
            continue;
        }
        double lo = iv.lo;
        double width = 1.0;
        for (int k = 0; k < opts.max_segments; ++k) {
            const double hi = lo + width;
            const Segment seg{lo, hi, k == 0 && !iv.lo_closed, false};
            if (auto r = scan_segment(g, seg, accept, opts.scan_subdivisions)) return *r;
            lo = hi;
            if (k > 0) width *= 2.0;
        }
    }
    throw Error(ErrorCode::no_bracket_found, "no preimage of " + format_number(target) + " in " + carrier.to_string());
}

}  // namespace pbm

#include "pbm/solver.hpp"

#include <algorithm>
#include <cmath>

#include "pbm/errors.hpp"

namespace pbm {

std::string_view to_string(TraceStatus s) noexcept {
    switch (s) {
        case TraceStatus::converged: return "converged";
        case TraceStatus::max_iters: return "max_iters";
        case TraceStatus::preimage_failure: return "preimage_failure";
    }
    return "?";
}

bool IterationTrace::all_gates() const noexcept {
    return std::all_of(gate_flags.begin(), gate_flags.end(), [](bool b) { return b; });
}

double IterationTrace::max_preimage_residual() const noexcept {
    double m = 0.0;
    for (double r : preimage_residuals) m = std::max(m, r);
    return m;
}

IterationTrace build_sequence(const Scenario& sc, double v0, const IterationOptions& opts) {
    IterationTrace t;
    t.v0 = v0;
    t.v_points.push_back(v0);
    std::size_t settled = 0;
    for (std::size_t k = 0; k < opts.max_iters; ++k) {
        const double v = t.v_points[k];
        const bool even = k % 2 == 0;
        double d = 0.0;
        try {
            if (even) {
                t.gate_flags.push_back(sc.gamma(sc.Q(v)) >= 1.0);
                d = sc.h(v);
            } else {
                t.gate_flags.push_back(sc.delta(sc.Z(v)) >= 1.0);
                d = sc.eta(v);
            }
        } catch (const Error& e) {
            throw Error(ErrorCode::evaluation, "iteration step " + std::to_string(k) + ": " + e.what());
        }
        t.d_points.push_back(d);

        if (k > 0) {
            const double prev = t.d_points[k - 1];
            const double step = sc.space.pd(prev, d);
            t.step_distances.push_back(step);
            settled = (step <= opts.tol || approx_equal(prev, d, opts.tol)) ? settled + 1 : 0;
            if (settled >= opts.streak) {
                t.status = TraceStatus::converged;
                t.limit = d;
                return t;
            }
        }

        // next pre-point: Z v_{k+1} = d_k for even k, Q v_{k+1} = d_k for odd k
        try {
            const auto p = even ? solve_preimage(sc.Z, d, sc.space.carrier, sc.inverse_Z, opts.preimage)
                                : solve_preimage(sc.Q, d, sc.space.carrier, sc.inverse_Q, opts.preimage);
            t.v_points.push_back(p.x);
            t.preimage_residuals.push_back(p.residual);
        } catch (const Error& e) {
            t.status = TraceStatus::preimage_failure;
            t.failure_step = k;
            t.failure_message = e.what();
            return t;
        }
    }
    t.status = TraceStatus::max_iters;
    return t;
}

LimitCertificate detect_limit(const IterationTrace& trace, const PartialBMetricSpace& space, double tol,
                              std::size_t window) {
    if (!trace.converged()) {
        throw Error(ErrorCode::not_converged, "trace from v0 = " + format_number(trace.v0) + " ended with status " +
                                                  std::string(to_string(trace.status)));
    }
    LimitCertificate c;
    c.limit = trace.d_points.back();
    c.convergence = check_convergence(space, trace.d_points, c.limit, tol, window);
    c.cauchy = check_cauchy_numeric(space, trace.d_points, tol, window);
    return c;
}

ComplianceReport check_even_step_monotonicity(const IterationTrace& trace, const PartialBMetricSpace& space,
                                              double tol) {
    ComplianceReport r("even-step-monotonicity");
    const auto& d = trace.d_points;
    for (std::size_t m = 1; 2 * m + 1 < d.size(); ++m) {
        const double lhs = space.pd(d[2 * m], d[2 * m + 1]);
        const double rhs = space.pd(d[2 * m], d[2 * m - 1]);
        if (lhs <= rhs + tol) {
            r.record_satisfied(rhs - lhs);
        } else {
            r.record_violation({{static_cast<double>(m)}, lhs, rhs, lhs - rhs, "distance grew at even step"});
        }
    }
    return r.finalize();
}

namespace {

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

template <class Fn>
double bisect_root(Fn&& r, double a, double b) {
    double ra = r(a);
    double rb = r(b);
    for (int it = 0; it < 2200; ++it) {
        const double m = a + 0.5 * (b - a);
        if (m <= a || m >= b) break;
        const double rm = r(m);
        if (rm == 0.0) return m;
        if (opposite(rm, ra)) {
            b = m;
            rb = rm;
        } else {
            a = m;
            ra = rm;
        }
    }
    return std::abs(ra) <= std::abs(rb) ? a : b;
}

std::vector<double> sorted_grid(std::span<const double> grid, const char* what) {
    if (grid.empty()) throw Error(ErrorCode::empty_grid, std::string(what) + " grid is empty");
    std::vector<double> xs(grid.begin(), grid.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

double eval_at(const Expression& f, double x, const char* what) {
    try {
        return f(x);
    } catch (const Error& e) {
        throw Error(ErrorCode::evaluation, std::string(what) + " at " + format_number(x) + ": " + e.what());
    }
}

}  // namespace

CoincidenceSet find_coincidence_points(const PartialBMetricSpace& space, const Expression& f, const Expression& g,
                                       std::span<const double> grid, double tol, std::string pair_id) {
    const auto xs = sorted_grid(grid, "coincidence");
    CoincidenceSet out{std::move(pair_id), {}, {}};
    auto residual = [&](double x) { return eval_at(f, x, "f") - eval_at(g, x, "g"); };
    auto is_hit = [&](double x) { return pbm_equal(space, eval_at(f, x, "f"), eval_at(g, x, "g"), tol); };
    auto add = [&](double x) {
        out.points.push_back(x);
        out.residuals.push_back(std::abs(residual(x)));
    };

    std::vector<double> r(xs.size());
    std::vector<bool> hit(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        r[i] = residual(xs[i]);
        hit[i] = is_hit(xs[i]);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && !hit[i - 1] && !hit[i] && opposite(r[i - 1], r[i])) {
            const double root = bisect_root(residual, xs[i - 1], xs[i]);
            if (is_hit(root)) add(root);
        }
        if (hit[i]) add(xs[i]);
    }
    return out;
}

ComplianceReport check_weak_compatibility(const PartialBMetricSpace& space, const Expression& f,
                                          const Expression& g, std::span<const double> points, double tol) {
    ComplianceReport r("weak-compatibility");
    for (double x : points) {
        const double fg = eval_at(f, eval_at(g, x, "g"), "f");
        const double gf = eval_at(g, eval_at(f, x, "f"), "g");
        if (pbm_equal(space, fg, gf, tol)) {
            r.record_satisfied(0.0);
        } else {
            r.record_violation({{x}, fg, gf, std::abs(fg - gf), "f(g(x)) != g(f(x))"});
        }
    }
    if (points.empty()) r.detail = "no coincidence points";
    return r.finalize();
}

FixedPointCertificate certify_common_fixed_point(const Scenario& sc, double d, double tol) {
    FixedPointCertificate c;
    c.point = d;
    c.certified = true;
    const MapId ids[] = {MapId::h, MapId::eta, MapId::Q, MapId::Z};
    for (std::size_t i = 0; i < 4; ++i) {
        const double v = eval_at(sc.map(ids[i]), d, to_string(ids[i]).data());
        c.residuals[i] = std::abs(v - d);
        c.equal[i] = pbm_equal(sc.space, v, d, tol);
        c.certified = c.certified && c.equal[i];
    }
    return c;
}

UniquenessReport search_uniqueness(const Scenario& sc, std::span<const double> grid, double tol) {
    const auto xs = sorted_grid(grid, "uniqueness");
    UniquenessReport rep;
    rep.grid_points = xs.size();
    rep.region = "[" + format_number(xs.front()) + ", " + format_number(xs.back()) + "] over " +
                 std::to_string(xs.size()) + " grid points";

    std::vector<double> candidates(xs.begin(), xs.end());
    const MapId ids[] = {MapId::h, MapId::eta, MapId::Q, MapId::Z};
    for (MapId id : ids) {
        const Expression& m = sc.map(id);
        auto r = [&](double x) { return eval_at(m, x, "map") - x; };
        double prev = r(xs[0]);
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double cur = r(xs[i]);
            if (opposite(prev, cur)) candidates.push_back(bisect_root(r, xs[i - 1], xs[i]));
            prev = cur;
        }
    }
    std::sort(candidates.begin(), candidates.end());
    for (double x : candidates) {
        if (!rep.points.empty() && approx_equal(rep.points.back().point, x, tol)) continue;
        auto c = certify_common_fixed_point(sc, x, tol);
        if (c.certified) rep.points.push_back(c);
    }
    if (rep.points.empty()) rep.warning = "no common fixed point on the searched grid";
    return rep;
}

}  // namespace pbm

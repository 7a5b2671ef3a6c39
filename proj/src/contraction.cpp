#include "pbm/contraction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "pbm/errors.hpp"
#include "pbm/parallel.hpp"

namespace pbm {

std::string_view to_string(MapId id) noexcept {
    switch (id) {
        case MapId::h: return "h";
        case MapId::eta: return "eta";
        case MapId::Q: return "Q";
        case MapId::Z: return "Z";
    }
    return "?";
}

MapId map_id_from_name(std::string_view name) {
    if (name == "h") return MapId::h;
    if (name == "eta") return MapId::eta;
    if (name == "Q") return MapId::Q;
    if (name == "Z") return MapId::Z;
    throw Error(ErrorCode::invalid_argument, "unknown map '" + std::string(name) + "' (expected h, eta, Q or Z)");
}

const Expression& Scenario::map(MapId id) const {
    switch (id) {
        case MapId::h: return h;
        case MapId::eta: return eta;
        case MapId::Q: return Q;
        case MapId::Z: return Z;
    }
    return h;
}

namespace {

constexpr MapId kAllMaps[] = {MapId::h, MapId::eta, MapId::Q, MapId::Z};

std::string pair_text(double w, double z) { return "(" + format_number(w) + ", " + format_number(z) + ")"; }

template <class Fn>
auto guarded(std::string_view where, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::evaluation) throw;
        throw Error(ErrorCode::evaluation, std::string(where) + ": " + e.what());
    }
}

}  // namespace

double n_s(const Scenario& sc, double w, double z) {
    return guarded("N_s at " + pair_text(w, z), [&] {
        const auto& sp = sc.space;
        const double qw = sc.Q(w);
        const double zz = sc.Z(z);
        const double hw = sc.h(w);
        const double ez = sc.eta(z);
        const double a = sp.pd(qw, zz);
        const double b = sp.pd(hw, qw);
        const double c = sp.pd(zz, ez);
        const double d = (sp.pd(qw, ez) + sp.pd(hw, zz)) / (2.0 * sp.s_coeff);
        return std::max({a, b, c, d});
    });
}

bool gate(const Scenario& sc, double w, double z) {
    return guarded("gate at " + pair_text(w, z), [&] { return sc.gamma(sc.Q(w)) * sc.delta(sc.Z(z)) >= 1.0; });
}

PairVerdict check_tac_at(const Scenario& sc, double w, double z, double tol) {
    PairVerdict v;
    if (!gate(sc, w, z)) return v;
    const double n = n_s(sc, w, z);
    guarded("contraction at " + pair_text(w, z), [&] {
        const double s = sc.space.s_coeff;
        const auto& tk = sc.toolkit;
        v.lhs = tk.xi.expr(s * s * s * sc.space.pd(sc.h(w), sc.eta(z)));
        v.rhs = tk.H.expr(tk.xi.expr(n), tk.omega.expr(n));
        return 0;
    });
    v.margin = v.rhs - v.lhs;
    v.kind = approx_le(v.lhs, v.rhs, tol) ? PairVerdict::Kind::satisfied : PairVerdict::Kind::violated;
    return v;
}

// --- grids -------------------------------------------------------------------

GridSpec GridSpec::parse(std::string_view text) {
    GridSpec g;
    double* fields[] = {&g.lo, &g.hi, &g.step};
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t colon = i < 2 ? text.find(':', start) : text.size();
        if (colon == std::string_view::npos) {
            throw Error(ErrorCode::invalid_argument, "grid must be lo:hi:step, got '" + std::string(text) + "'");
        }
        const auto part = text.substr(start, colon - start);
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), *fields[i]);
        if (ec != std::errc{} || ptr != part.data() + part.size()) {
            throw Error(ErrorCode::invalid_argument, "bad number '" + std::string(part) + "' in grid");
        }
        start = colon + 1;
    }
    if (!(g.step > 0.0) || g.hi < g.lo) {
        throw Error(ErrorCode::invalid_argument, "grid needs lo <= hi and step > 0: '" + std::string(text) + "'");
    }
    return g;
}

std::string GridSpec::to_string() const {
    return format_number(lo) + ":" + format_number(hi) + ":" + format_number(step);
}

std::vector<double> GridSpec::points() const { return grid_points(lo, hi, step); }

std::vector<double> scenario_breakpoints(const Scenario& sc) {
    std::set<double> raw;
    for (const Expression* e : {&sc.h, &sc.eta, &sc.Q, &sc.Z, &sc.gamma, &sc.delta}) {
        for (double b : e->breakpoints()) raw.insert(b);
    }
    auto add_preimages = [&](const Expression& admissibility, const Expression& f) {
        for (double b : admissibility.breakpoints()) {
            try {
                raw.insert(solve_preimage(f, b, sc.space.carrier).x);
            } catch (const Error&) {
                // b outside the range of f; nothing to add
            }
        }
    };
    add_preimages(sc.gamma, sc.Q);
    add_preimages(sc.gamma, sc.eta);
    add_preimages(sc.delta, sc.Z);
    add_preimages(sc.delta, sc.h);

    std::set<double> out;
    for (double b : raw) {
        for (double x : {std::nextafter(b, -INFINITY), b, std::nextafter(b, INFINITY)}) {
            if (sc.space.carrier.contains(x)) out.insert(x);
        }
    }
    return {out.begin(), out.end()};
}

PairGrid build_pair_grid(const Scenario& sc, const GridSpec& box, std::span<const double> breakpoints) {
    std::set<double> axis;
    for (double x : box.points()) {
        if (sc.space.carrier.contains(x)) axis.insert(x);
    }
    for (double b : breakpoints) {
        if (b >= box.lo && b <= box.hi && sc.space.carrier.contains(b)) axis.insert(b);
    }
    PairGrid g;
    g.w_axis.assign(axis.begin(), axis.end());
    g.z_axis = g.w_axis;
    return g;
}

ComplianceReport verify_tac_grid(const Scenario& sc, const PairGrid& grid, const GridCheckOptions& opts) {
    if (grid.size() == 0) throw Error(ErrorCode::empty_grid, "contraction grid has no points in the carrier");
    std::vector<ComplianceReport> parts(std::max(1u, opts.workers), ComplianceReport("tac-contraction", opts.witness_cap));
    const std::size_t used =
        parallel_chunks(grid.w_axis.size(), opts.workers, [&](std::size_t b, std::size_t e, std::size_t c) {
            auto& r = parts[c];
            for (std::size_t i = b; i < e; ++i) {
                const double w = grid.w_axis[i];
                for (double z : grid.z_axis) {
                    const auto v = check_tac_at(sc, w, z, opts.tol);
                    switch (v.kind) {
                        case PairVerdict::Kind::vacuous: r.record_vacuous(); break;
                        case PairVerdict::Kind::satisfied: r.record_satisfied(v.margin); break;
                        case PairVerdict::Kind::violated:
                            r.record_violation({{w, z}, v.lhs, v.rhs, v.lhs - v.rhs, ""});
                            break;
                    }
                }
            }
        });
    ComplianceReport out("tac-contraction", opts.witness_cap);
    for (std::size_t c = 0; c < used; ++c) out.merge(std::move(parts[c]));
    out.detail = std::to_string(out.satisfied + out.violated) + " gated of " + std::to_string(grid.size()) + " pairs";
    if (out.satisfied + out.violated == 0) out.detail += "; all pairs vacuous";
    return out.finalize();
}

// --- hypotheses ------------------------------------------------------------

ComplianceReport check_cyclic_admissible(const Scenario& sc, std::span<const double> samples) {
    ComplianceReport r("cyclic-admissibility");
    for (double w : samples) {
        guarded("admissibility at " + format_number(w), [&] {
            if (sc.gamma(sc.Q(w)) >= 1.0) {
                const double d = sc.delta(sc.h(w));
                if (d >= 1.0) {
                    r.record_satisfied(d - 1.0);
                } else {
                    r.record_violation({{w}, d, 1.0, 1.0 - d, "gamma(Qw) >= 1 but delta(hw) < 1"});
                }
            } else {
                r.record_vacuous();
            }
            if (sc.delta(sc.Z(w)) >= 1.0) {
                const double g = sc.gamma(sc.eta(w));
                if (g >= 1.0) {
                    r.record_satisfied(g - 1.0);
                } else {
                    r.record_violation({{w}, g, 1.0, 1.0 - g, "delta(Zw) >= 1 but gamma(eta w) < 1"});
                }
            } else {
                r.record_vacuous();
            }
            return 0;
        });
    }
    if (r.satisfied + r.violated == 0) r.detail = "all premises false";
    return r.finalize();
}

ComplianceReport check_range_inclusion(const Scenario& sc, std::span<const double> samples,
                                       const PreimageOptions& opts) {
    ComplianceReport r("range-inclusion");
    auto one = [&](double w, const Expression& f, const Expression& cover, const std::optional<Expression>& inverse,
                   const char* label) {
        const double target = guarded(std::string(label) + " at " + format_number(w), [&] { return f(w); });
        try {
            const auto p = solve_preimage(cover, target, sc.space.carrier, inverse, opts);
            r.record_satisfied(opts.tol * std::max(1.0, std::abs(target)) - p.residual);
        } catch (const Error& e) {
            r.record_violation({{w, target}, target, 0.0, 0.0, std::string(label) + " value not covered: " + e.what()});
        }
    };
    for (double w : samples) {
        one(w, sc.h, sc.Z, sc.inverse_Z, "h");
        one(w, sc.eta, sc.Q, sc.inverse_Q, "eta");
    }
    return r.finalize();
}

ComplianceReport check_self_maps(const Scenario& sc, std::span<const double> samples, double membership_tol) {
    ComplianceReport r("self-maps");
    for (double w : samples) {
        for (MapId id : kAllMaps) {
            const double v = guarded(std::string(to_string(id)) + " at " + format_number(w),
                                     [&] { return sc.map(id)(w); });
            if (sc.space.carrier.contains(v, membership_tol)) {
                r.record_satisfied(0.0);
            } else {
                r.record_violation({{w}, v, 0.0, 0.0, std::string(to_string(id)) + " leaves the carrier"});
            }
        }
    }
    return r.finalize();
}

ComplianceReport check_initial_gate(const Scenario& sc, std::span<const double> candidates) {
    ComplianceReport r("initial-gate");
    for (double v : candidates) {
        const bool open = guarded("initial gate at " + format_number(v),
                                  [&] { return sc.gamma(sc.Q(v)) >= 1.0 && sc.delta(sc.Z(v)) >= 1.0; });
        if (open) {
            r.record_satisfied(0.0);
        } else {
            r.record_vacuous();
        }
    }
    if (r.satisfied == 0) r.detail = "no candidate v0 opens the gate";
    return r.finalize();
}

ComplianceReport check_superlevel_closure(const Scenario& sc) {
    ComplianceReport r("superlevel-closure");
    auto in_set = [&](double x) { return sc.gamma(x) >= 1.0 && sc.delta(x) >= 1.0; };
    std::set<double> candidates;
    for (double b : sc.gamma.breakpoints()) candidates.insert(b);
    for (double b : sc.delta.breakpoints()) candidates.insert(b);
    for (const auto& iv : sc.space.carrier.intervals()) {
        if (std::isfinite(iv.lo)) candidates.insert(iv.lo);
        if (std::isfinite(iv.hi)) candidates.insert(iv.hi);
    }
    for (double b : candidates) {
        guarded("closure at " + format_number(b), [&] {
            for (double dir : {-1.0, 1.0}) {
                bool inside = true;
                for (int n = 1; n <= 40 && inside; ++n) {
                    const double x = b + dir * std::ldexp(std::max(1.0, std::abs(b)), -n);
                    inside = sc.space.carrier.contains(x) && in_set(x);
                }
                if (!inside) {
                    r.record_vacuous();
                } else if (sc.space.carrier.contains(b) && in_set(b)) {
                    r.record_satisfied(0.0);
                } else {
                    r.record_violation({{b, dir}, 0.0, 1.0, 1.0, "limit leaves {gamma >= 1, delta >= 1}"});
                }
            }
            return 0;
        });
    }
    return r.finalize();
}

ComplianceReport check_closed_ranges(const Scenario& sc, const PreimageOptions& opts) {
    ComplianceReport r("closed-range");
    if (sc.declared_closed_ranges.empty()) {
        r.record_violation({{}, 0.0, 1.0, 1.0, "no range declared partially b-closed"});
        return r.finalize();
    }
    for (MapId id : sc.declared_closed_ranges) {
        const Expression& f = sc.map(id);
        std::set<double> points;
        for (double b : f.breakpoints()) points.insert(b);
        for (const auto& iv : sc.space.carrier.intervals()) {
            if (std::isfinite(iv.lo)) points.insert(iv.lo);
            if (std::isfinite(iv.hi)) points.insert(iv.hi);
        }
        for (double b : points) {
            for (double dir : {-1.0, 1.0}) {
                const double scale = std::max(1.0, std::abs(b));
                const double x_prev = b + dir * std::ldexp(scale, -39);
                const double x_last = b + dir * std::ldexp(scale, -40);
                if (!sc.space.carrier.contains(x_prev) || !sc.space.carrier.contains(x_last)) {
                    r.record_vacuous();
                    continue;
                }
                // f(b ± h) against h halving: linear extrapolation to h = 0
                const double f_prev = guarded("closed-range probe", [&] { return f(x_prev); });
                const double f_last = guarded("closed-range probe", [&] { return f(x_last); });
                const double limit = 2.0 * f_last - f_prev;
                const std::optional<Expression> inverse =
                    id == MapId::Q ? sc.inverse_Q : (id == MapId::Z ? sc.inverse_Z : std::nullopt);
                try {
                    solve_preimage(f, limit, sc.space.carrier, inverse, opts);
                    r.record_satisfied(0.0);
                } catch (const Error&) {
                    r.record_violation({{b, dir, limit}, limit, 0.0, 0.0,
                                        "limit of " + std::string(to_string(id)) + " values has no preimage"});
                }
            }
        }
    }
    return r.finalize();
}

// --- presets ---------------------------------------------------------------

namespace {

Expression indicator(const IntervalSet& set) {
    auto node = make_piecewise({PiecewiseBranch{0, "x", set, make_number(1.0)}}, make_number(0.0));
    return Expression::from_ast(std::move(node), 1, {"x"});
}

bool intersects(const IntervalSet& a, const IntervalSet& b) {
    for (const auto& x : a) {
        for (const auto& y : b) {
            Interval both;
            if (x.lo > y.lo || (x.lo == y.lo && !x.lo_closed)) {
                both.lo = x.lo;
                both.lo_closed = x.lo_closed;
            } else {
                both.lo = y.lo;
                both.lo_closed = y.lo_closed;
            }
            if (x.hi < y.hi || (x.hi == y.hi && !x.hi_closed)) {
                both.hi = x.hi;
                both.hi_closed = x.hi_closed;
            } else {
                both.hi = y.hi;
                both.hi_closed = y.hi_closed;
            }
            if (!both.empty()) return true;
        }
    }
    return false;
}

}  // namespace

Scenario make_cyclic_preset(const IntervalSet& C, const IntervalSet& D, Expression h, Expression eta,
                            Expression distance, double s_coeff, Toolkit toolkit, std::string name) {
    const IntervalSet c = normalize(C);
    const IntervalSet d = normalize(D);
    if (!intersects(c, d)) {
        throw Error(ErrorCode::empty_intersection, "C = " + to_string(c) + " and D = " + to_string(d) + " are disjoint");
    }
    IntervalSet both = c;
    both.insert(both.end(), d.begin(), d.end());
    const auto identity = Expression::parse("x", 1);
    return Scenario{
        std::move(name),
        PartialBMetricSpace(Carrier(std::move(both)), std::move(distance), s_coeff, true),
        std::move(h),
        std::move(eta),
        identity,
        identity,
        indicator(c),
        indicator(d),
        std::move(toolkit),
        {MapId::Q, MapId::Z},
        identity,
        identity,
    };
}

WeakContractionToolkit make_weak_contraction_preset(XiFunction xi, OmegaOneFunction omega) {
    const auto one = Expression::parse("1", 1);
    return {Toolkit{std::move(xi), std::move(omega), make_cclass(CClassPreset::truncated_difference)}, one, one};
}

}  // namespace pbm

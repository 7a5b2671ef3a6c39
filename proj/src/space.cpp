#include "pbm/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pbm/errors.hpp"
#include "pbm/parallel.hpp"

namespace pbm {

// --- Carrier ---------------------------------------------------------------

Carrier::Carrier(IntervalSet intervals) : intervals_(normalize(std::move(intervals))) {
    if (intervals_.empty()) throw Error(ErrorCode::invalid_argument, "carrier has no intervals");
    if (intervals_.front().lo < 0.0) {
        throw Error(ErrorCode::invalid_argument, "carrier must lie in [0, inf): " + pbm::to_string(intervals_));
    }
}

Carrier Carrier::nonnegative_reals() {
    return Carrier({Interval{0.0, std::numeric_limits<double>::infinity(), true, false}});
}

Carrier Carrier::parse(std::string_view text) { return Carrier(parse_interval_set(text)); }

bool Carrier::contains(double x) const noexcept { return pbm::contains(intervals_, x); }

bool Carrier::contains(double x, double tol) const noexcept {
    if (contains(x)) return true;
    return std::any_of(intervals_.begin(), intervals_.end(), [x, tol](const Interval& iv) {
        const double slack = tol * tol_scale(x, 0.0);
        return x >= iv.lo - slack && x <= iv.hi + slack;
    });
}

// --- spaces ----------------------------------------------------------------

PartialBMetricSpace::PartialBMetricSpace(Carrier c, Expression pd, double s, bool complete)
    : carrier(std::move(c)), distance(std::move(pd)), s_coeff(s), declared_complete(complete) {
    if (distance.arity() != 2) throw Error(ErrorCode::arity, "distance must be a function of two variables");
    if (!(s_coeff >= 1.0)) throw Error(ErrorCode::invalid_argument, "coefficient s must be >= 1");
}

double PartialBMetricSpace::pd(double x, double y) const {
    try {
        return distance(x, y);
    } catch (const Error& e) {
        throw Error(ErrorCode::distance_evaluation,
                    "pd(" + format_number(x) + ", " + format_number(y) + "): " + e.what());
    }
}

Expression builtin_distance(std::string_view name) {
    if (name == "max") return Expression::parse("max(x, y)", 2);
    if (name == "abs-diff") return Expression::parse("abs(x - y)", 2);
    throw Error(ErrorCode::unknown_preset, "unknown distance '" + std::string(name) + "'");
}

PartialBMetricSpace max_metric_space(Carrier carrier) {
    PartialBMetricSpace s(std::move(carrier), builtin_distance("max"), 1.0, true);
    s.distance_name = "max";
    return s;
}

PartialBMetricSpace abs_metric_space(Carrier carrier) {
    PartialBMetricSpace s(std::move(carrier), builtin_distance("abs-diff"), 1.0, true);
    s.distance_name = "abs-diff";
    return s;
}

// --- sampling --------------------------------------------------------------

std::vector<double> grid_points(double lo, double hi, double step) {
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
        throw Error(ErrorCode::invalid_argument, "bad grid " + format_number(lo) + ":" + format_number(hi) + ":" +
                                                     format_number(step));
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::min(hi, lo + static_cast<double>(i) * step));
    return out;
}

std::vector<double> sample_carrier(const Carrier& carrier, const SamplingOptions& opts) {
    std::vector<double> out;
    struct Span {
        double lo, hi;
    };
    std::vector<Span> spans;
    double total = 0.0;
    for (const auto& iv : carrier.intervals()) {
        const double hi = std::isfinite(iv.hi) ? iv.hi : iv.lo + opts.unbounded_span;
        spans.push_back({iv.lo, hi});
        total += hi - iv.lo;
        if (iv.lo_closed) out.push_back(iv.lo);
        if (iv.hi_closed) out.push_back(iv.hi);
        const std::size_t n = opts.grid_per_interval;
        for (std::size_t i = 0; n > 1 && i < n; ++i) {
            const double x = iv.lo + (hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            if (iv.contains(x)) out.push_back(x);
        }
    }
    // 53-bit mantissa draw from mt19937_64 so the stream is identical across standard libraries
    std::mt19937_64 rng(opts.seed);
    for (std::size_t i = 0; i < opts.random_count && total > 0.0; ++i) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
        for (const auto& sp : spans) {
            const double len = sp.hi - sp.lo;
            if (u <= len) {
                const double x = sp.lo + u;
                if (carrier.contains(x)) out.push_back(x);
                break;
            }
            u -= len;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --- axioms ----------------------------------------------------------------

std::string_view to_string(AxiomId id) noexcept {
    switch (id) {
        case AxiomId::p1_indistinguishability: return "P1-indistinguishability";
        case AxiomId::p2_small_self_distance: return "P2-small-self-distance";
        case AxiomId::p3_symmetry: return "P3-symmetry";
        case AxiomId::p4_modified_triangle: return "P4-modified-triangle";
        case AxiomId::b1_zero_self_distance: return "B1-zero-self-distance";
        case AxiomId::b2_symmetry: return "B2-symmetry";
        case AxiomId::b3_relaxed_triangle: return "B3-relaxed-triangle";
    }
    return "?";
}

namespace {

class DistanceMatrix {
public:
    DistanceMatrix(const PartialBMetricSpace& space, std::span<const double> xs, unsigned workers)
        : n_(xs.size()), d_(xs.size() * xs.size()) {
        parallel_chunks(n_, workers, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t i = b; i < e; ++i) {
                for (std::size_t j = 0; j < n_; ++j) d_[i * n_ + j] = space.pd(xs[i], xs[j]);
            }
        });
    }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> d_;
};

struct Collector {
    explicit Collector(std::size_t c) : cap(c) {}

    std::size_t cap;
    std::size_t violations = 0;
    std::vector<AxiomWitness> witnesses;

    void add(std::vector<double> pts, double lhs, double rhs, double gap) {
        ++violations;
        if (witnesses.size() < cap) witnesses.push_back({std::move(pts), lhs, rhs, gap});
    }
};

AxiomReport finish(AxiomId id, Collector c, std::size_t checked) {
    AxiomReport r;
    r.axiom = id;
    r.pass = c.violations == 0;
    r.violations = c.violations;
    r.witnesses = std::move(c.witnesses);
    r.samples_checked = checked;
    return r;
}

void require_samples(std::span<const double> samples) {
    if (samples.empty()) throw Error(ErrorCode::empty_sample_set, "no sample points");
}

double equality_gap(double self_x, double cross, double self_y) {
    return std::max(std::abs(self_x - cross), std::abs(self_y - cross));
}

// Ordered-triple check parallelised over the first index; chunk results are
// concatenated in index order.
template <class Pred>
AxiomReport triangle_report(AxiomId id, std::span<const double> xs, const AxiomCheckOptions& opts, Pred pred) {
    const std::size_t n = xs.size();
    std::vector<Collector> parts(std::max(1u, opts.workers), Collector{opts.witness_cap});
    const std::size_t used = parallel_chunks(n, opts.workers, [&](std::size_t b, std::size_t e, std::size_t c) {
        for (std::size_t i = b; i < e; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) pred(i, j, k, parts[c]);
    });
    Collector all{opts.witness_cap};
    for (std::size_t c = 0; c < used; ++c) {
        all.violations += parts[c].violations;
        for (auto& w : parts[c].witnesses) {
            if (all.witnesses.size() < all.cap) all.witnesses.push_back(std::move(w));
        }
    }
    return finish(id, std::move(all), n * n * n);
}

}  // namespace

std::vector<AxiomReport> check_pbm_axioms(const PartialBMetricSpace& space, std::span<const double> xs,
                                          const AxiomCheckOptions& opts) {
    require_samples(xs);
    const DistanceMatrix d(space, xs, opts.workers);
    const std::size_t n = xs.size();
    const double tol = opts.tol;
    std::vector<AxiomReport> out;

    Collector p1{opts.witness_cap};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const bool same = approx_equal(d(i, i), d(i, j), tol) && approx_equal(d(j, j), d(i, j), tol);
            const bool identical = xs[i] == xs[j];
            if (same != identical) {
                p1.add({xs[i], xs[j]}, d(i, j), d(i, i), equality_gap(d(i, i), d(i, j), d(j, j)));
            }
        }
    }
    out.push_back(finish(AxiomId::p1_indistinguishability, std::move(p1), n * (n + 1) / 2));

    Collector p2{opts.witness_cap};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!approx_le(d(i, i), d(i, j), tol)) p2.add({xs[i], xs[j]}, d(i, i), d(i, j), d(i, i) - d(i, j));
        }
    }
    out.push_back(finish(AxiomId::p2_small_self_distance, std::move(p2), n * n));

    Collector p3{opts.witness_cap};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!approx_equal(d(i, j), d(j, i), tol))
                p3.add({xs[i], xs[j]}, d(i, j), d(j, i), std::abs(d(i, j) - d(j, i)));
        }
    }
    out.push_back(finish(AxiomId::p3_symmetry, std::move(p3), n * (n - 1) / 2));

    const double s = space.s_coeff;
    out.push_back(triangle_report(AxiomId::p4_modified_triangle, xs, opts,
                                  [&](std::size_t i, std::size_t j, std::size_t k, Collector& c) {
                                      const double lhs = d(i, j);
                                      const double rhs = s * (d(i, k) + d(k, j)) - d(k, k);
                                      if (!approx_le(lhs, rhs, tol)) c.add({xs[i], xs[j], xs[k]}, lhs, rhs, lhs - rhs);
                                  }));
    return out;
}

std::vector<AxiomReport> check_b_metric_axioms(const PartialBMetricSpace& space, std::span<const double> xs,
                                               const AxiomCheckOptions& opts) {
    require_samples(xs);
    const DistanceMatrix d(space, xs, opts.workers);
    const std::size_t n = xs.size();
    const double tol = opts.tol;
    std::vector<AxiomReport> out;

    Collector b1{opts.witness_cap};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const bool zero = approx_equal(d(i, j), 0.0, tol);
            if (zero != (xs[i] == xs[j])) b1.add({xs[i], xs[j]}, d(i, j), 0.0, std::abs(d(i, j)));
        }
    }
    out.push_back(finish(AxiomId::b1_zero_self_distance, std::move(b1), n * (n + 1) / 2));

    Collector b2{opts.witness_cap};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!approx_equal(d(i, j), d(j, i), tol))
                b2.add({xs[i], xs[j]}, d(i, j), d(j, i), std::abs(d(i, j) - d(j, i)));
        }
    }
    out.push_back(finish(AxiomId::b2_symmetry, std::move(b2), n * (n - 1) / 2));

    const double s = space.s_coeff;
    out.push_back(triangle_report(AxiomId::b3_relaxed_triangle, xs, opts,
                                  [&](std::size_t i, std::size_t j, std::size_t k, Collector& c) {
                                      const double lhs = d(i, j);
                                      const double rhs = s * (d(i, k) + d(k, j));
                                      if (!approx_le(lhs, rhs, tol)) c.add({xs[i], xs[j], xs[k]}, lhs, rhs, lhs - rhs);
                                  }));
    return out;
}

double recompute_gap(const PartialBMetricSpace& space, AxiomId axiom, const AxiomWitness& w) {
    const auto& p = w.points;
    const double s = space.s_coeff;
    switch (axiom) {
        case AxiomId::p1_indistinguishability:
            return equality_gap(space.pd(p[0], p[0]), space.pd(p[0], p[1]), space.pd(p[1], p[1]));
        case AxiomId::p2_small_self_distance: return space.pd(p[0], p[0]) - space.pd(p[0], p[1]);
        case AxiomId::p3_symmetry:
        case AxiomId::b2_symmetry: return std::abs(space.pd(p[0], p[1]) - space.pd(p[1], p[0]));
        case AxiomId::p4_modified_triangle:
            return space.pd(p[0], p[1]) - (s * (space.pd(p[0], p[2]) + space.pd(p[2], p[1])) - space.pd(p[2], p[2]));
        case AxiomId::b1_zero_self_distance: return std::abs(space.pd(p[0], p[1]));
        case AxiomId::b3_relaxed_triangle:
            return space.pd(p[0], p[1]) - s * (space.pd(p[0], p[2]) + space.pd(p[2], p[1]));
    }
    return 0.0;
}

bool pbm_equal(const PartialBMetricSpace& space, double x, double y, double tol) {
    const double xy = space.pd(x, y);
    return approx_equal(space.pd(x, x), xy, tol) && approx_equal(space.pd(y, y), xy, tol);
}

// --- sequences -------------------------------------------------------------

ConvergenceVerdict check_convergence(const PartialBMetricSpace& space, std::span<const double> seq, double limit,
                                     double tol, std::size_t window) {
    if (window == 0 || seq.size() < window) {
        throw Error(ErrorCode::sequence_too_short,
                    "need " + std::to_string(window) + " terms, have " + std::to_string(seq.size()));
    }
    ConvergenceVerdict v;
    v.window = window;
    v.converges = true;
    const double self = space.pd(limit, limit);
    for (std::size_t k = seq.size() - window; k < seq.size(); ++k) {
        const double dk = space.pd(seq[k], limit);
        v.tail_discrepancy = std::max(v.tail_discrepancy, std::abs(dk - self));
        if (!approx_equal(dk, self, tol)) v.converges = false;
    }
    return v;
}

CauchyVerdict check_cauchy_numeric(const PartialBMetricSpace& space, std::span<const double> seq, double tol,
                                   std::size_t window) {
    if (window == 0 || seq.size() < 2 * window) {
        throw Error(ErrorCode::sequence_too_short,
                    "need " + std::to_string(2 * window) + " terms, have " + std::to_string(seq.size()));
    }
    CauchyVerdict v;
    v.window = window;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = seq.size() - window; k < seq.size(); ++k) {
        for (std::size_t m = k; m < seq.size(); ++m) {
            const double d = space.pd(seq[k], seq[m]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            sum += d;
            ++count;
        }
    }
    v.limit_estimate = sum / static_cast<double>(count);
    v.spread = hi - lo;
    v.cauchy = approx_equal(hi, lo, tol) && std::isfinite(hi);
    return v;
}

}  // namespace pbm

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pbm/expr.hpp"
#include "pbm/tolerance.hpp"

namespace pbm {

/// Point set of a space: a normalized union of intervals in [0, inf).
class Carrier {
public:
    Carrier() = default;
    explicit Carrier(IntervalSet intervals);

    static Carrier nonnegative_reals();
    static Carrier parse(std::string_view text);

    bool contains(double x) const noexcept;
    /// Membership up to `tol` slack at interval endpoints.
    bool contains(double x, double tol) const noexcept;

    const IntervalSet& intervals() const noexcept { return intervals_; }
    std::string to_string() const { return pbm::to_string(intervals_); }

private:
    IntervalSet intervals_;
};

/// Partial b-metric (or plain b-metric) space over a real carrier.
///
/// Only finite samples are ever checked: a passing axiom report means no
/// counterexample was found among the samples, never that the axiom holds.
struct PartialBMetricSpace {
    Carrier carrier;
    Expression distance;  ///< pd(x, y), arity 2
    double s_coeff = 1.0;
    bool declared_complete = false;
    std::string distance_name;  ///< builtin name when not user-defined

    PartialBMetricSpace(Carrier c, Expression pd, double s, bool complete = false);

    /// Throws Error(distance_evaluation) when pd is undefined at (x, y).
    double pd(double x, double y) const;
};

PartialBMetricSpace max_metric_space(Carrier carrier = Carrier::nonnegative_reals());
PartialBMetricSpace abs_metric_space(Carrier carrier = Carrier::nonnegative_reals());

/// Builtin distances by name: "max" (pd = max{x,y}) and "abs-diff" (|x - y|).
Expression builtin_distance(std::string_view name);

// --- sampling --------------------------------------------------------------

struct SamplingOptions {
    std::size_t grid_per_interval = 64;
    std::size_t random_count = 32;
    std::uint64_t seed = 0;
    /// Unbounded intervals are clipped to [lo, lo + unbounded_span].
    double unbounded_span = 100.0;
};

/// Uniform grid per interval, closed endpoints, and seeded pseudorandom points;
/// sorted and unique.
std::vector<double> sample_carrier(const Carrier& carrier, const SamplingOptions& opts = {});

/// Inclusive lattice lo, lo+step, ... <= hi (with 1e-9 relative slack on hi).
std::vector<double> grid_points(double lo, double hi, double step);

// --- axiom checks ----------------------------------------------------------

enum class AxiomId {
    p1_indistinguishability,
    p2_small_self_distance,
    p3_symmetry,
    p4_modified_triangle,
    b1_zero_self_distance,
    b2_symmetry,
    b3_relaxed_triangle,
};

std::string_view to_string(AxiomId id) noexcept;

struct AxiomWitness {
    std::vector<double> points;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;  ///< lhs - rhs for inequalities, |lhs - rhs| for equalities
};

struct AxiomReport {
    AxiomId axiom = AxiomId::p1_indistinguishability;
    bool pass = true;
    std::vector<AxiomWitness> witnesses;
    std::size_t violations = 0;  ///< total, witnesses are capped
    std::size_t samples_checked = 0;
};

struct AxiomCheckOptions {
    double tol = kDefaultTol;
    std::size_t witness_cap = 32;
    unsigned workers = 1;
};

/// Partial b-metric axioms (P1)-(P4) over every sampled pair / ordered triple.
std::vector<AxiomReport> check_pbm_axioms(const PartialBMetricSpace& space, std::span<const double> samples,
                                          const AxiomCheckOptions& opts = {});

/// b-metric axioms (B1)-(B3).
std::vector<AxiomReport> check_b_metric_axioms(const PartialBMetricSpace& space, std::span<const double> samples,
                                               const AxiomCheckOptions& opts = {});

/// Re-evaluates a witness from scratch and returns its gap.
double recompute_gap(const PartialBMetricSpace& space, AxiomId axiom, const AxiomWitness& w);

/// x and y are indistinguishable: pd(x,x) = pd(x,y) = pd(y,y) within tol.
bool pbm_equal(const PartialBMetricSpace& space, double x, double y, double tol = kDefaultTol);

// --- sequence diagnostics --------------------------------------------------

struct ConvergenceVerdict {
    bool converges = false;
    double tail_discrepancy = 0.0;  ///< max |pd(z_k, z) - pd(z, z)| over the tail
    std::size_t window = 0;
};

/// pd(z_k, limit) -> pd(limit, limit), judged on the final `window` terms.
ConvergenceVerdict check_convergence(const PartialBMetricSpace& space, std::span<const double> sequence,
                                     double limit, double tol = kDefaultTol, std::size_t window = 3);

struct CauchyVerdict {
    bool cauchy = false;
    double limit_estimate = 0.0;  ///< mean of pd(z_k, z_m) over the final window
    double spread = 0.0;          ///< max - min of those values
    std::size_t window = 0;
};

/// Pairwise pd(z_k, z_m), k <= m, over the final `window` terms must agree
/// within tol. Requires at least 2 * window terms.
CauchyVerdict check_cauchy_numeric(const PartialBMetricSpace& space, std::span<const double> sequence,
                                   double tol = kDefaultTol, std::size_t window = 3);

}  // namespace pbm

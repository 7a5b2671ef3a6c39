#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbm/contraction.hpp"
#include "pbm/preimage.hpp"
#include "pbm/report.hpp"
#include "pbm/space.hpp"

namespace pbm {

struct IterationOptions {
    std::size_t max_iters = 10000;
    double tol = kDefaultTol;
    /// Consecutive settled steps required before declaring convergence.
    std::size_t streak = 5;
    PreimageOptions preimage;
};

enum class TraceStatus { converged, max_iters, preimage_failure };

std::string_view to_string(TraceStatus s) noexcept;

/// The interleaved sequence d_2m = h v_2m = Z v_2m+1, d_2m+1 = η v_2m+1 = Q v_2m+2.
///
/// gate_flags[k] records gamma(Q v_k) >= 1 for even k and delta(Z v_k) >= 1
/// for odd k. preimage_residuals[k] is |Z v_{k+1} - d_k| (k even) or
/// |Q v_{k+1} - d_k| (k odd), one per computed v_{k+1}.
struct IterationTrace {
    double v0 = 0.0;
    std::vector<double> v_points;
    std::vector<double> d_points;
    std::vector<double> step_distances;  ///< pd(d_{k-1}, d_k), k >= 1
    std::vector<bool> gate_flags;
    std::vector<double> preimage_residuals;
    TraceStatus status = TraceStatus::max_iters;
    double limit = 0.0;  ///< meaningful when converged
    std::size_t failure_step = 0;
    std::string failure_message;

    bool converged() const noexcept { return status == TraceStatus::converged; }
    bool all_gates() const noexcept;
    double max_preimage_residual() const noexcept;
};

/// A step is settled when pd(d_{k-1}, d_k) <= tol, or when the two points
/// coincide numerically (the constant-sequence case, where pd(d, d) may be
/// nonzero). Preimage failures end the trace early with status
/// preimage_failure; the partial trace is returned.
IterationTrace build_sequence(const Scenario& sc, double v0, const IterationOptions& opts = {});

struct LimitCertificate {
    double limit = 0.0;
    ConvergenceVerdict convergence;
    CauchyVerdict cauchy;
    bool ok() const noexcept { return convergence.converges && cauchy.cauchy; }
};

/// Throws Error(not_converged) unless the trace converged.
LimitCertificate detect_limit(const IterationTrace& trace, const PartialBMetricSpace& space,
                              double tol = kDefaultTol, std::size_t window = 3);

/// pd(d_2m, d_2m+1) <= pd(d_2m, d_2m-1) + tol for every m >= 1 in the trace.
ComplianceReport check_even_step_monotonicity(const IterationTrace& trace, const PartialBMetricSpace& space,
                                              double tol = kDefaultTol);

struct CoincidenceSet {
    std::string pair_id;
    std::vector<double> points;
    std::vector<double> residuals;  ///< |f(x) - g(x)|
};

/// Grid points where f(x) and g(x) are pbm-equal, plus bisection-refined roots
/// of f - g inside cells whose endpoints change sign. Tangential coincidences
/// between grid points are missed. Throws Error(empty_grid).
CoincidenceSet find_coincidence_points(const PartialBMetricSpace& space, const Expression& f, const Expression& g,
                                       std::span<const double> grid, double tol = kDefaultTol,
                                       std::string pair_id = "");

/// f(g(x)) pbm-equals g(f(x)) at every given coincidence point.
ComplianceReport check_weak_compatibility(const PartialBMetricSpace& space, const Expression& f,
                                          const Expression& g, std::span<const double> coincidence_points,
                                          double tol = kDefaultTol);

struct FixedPointCertificate {
    double point = 0.0;
    std::array<double, 4> residuals{};  ///< |m(d) - d| for h, eta, Q, Z
    std::array<bool, 4> equal{};
    bool certified = false;
};

FixedPointCertificate certify_common_fixed_point(const Scenario& sc, double d, double tol = kDefaultTol);

struct UniquenessReport {
    std::vector<FixedPointCertificate> points;
    std::string region;
    std::size_t grid_points = 0;
    bool unique() const noexcept { return points.size() == 1; }
    bool multiple() const noexcept { return points.size() > 1; }
    std::string warning;
};

/// Certifies every grid point, plus roots of m(x) - x bisected from sign
/// changes of each map. Uniqueness is only relative to the searched grid.
UniquenessReport search_uniqueness(const Scenario& sc, std::span<const double> grid, double tol = kDefaultTol);

}  // namespace pbm

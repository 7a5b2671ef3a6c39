#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace pbm {

enum class Verdict { pass, fail, vacuous };

std::string_view to_string(Verdict v) noexcept;

struct Witness {
    std::vector<double> point;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;  ///< lhs - rhs
    std::string note;
};

/// Aggregated outcome of a sampled hypothesis check.
///
/// Each individual test is counted as satisfied, vacuous (premise false), or
/// violated. verdict is fail iff violated > 0, vacuous iff nothing was
/// actually tested, pass otherwise. worst_margin is min(rhs - lhs) over the
/// non-vacuous tests (+inf when there were none).
struct ComplianceReport {
    std::string check_id;
    Verdict verdict = Verdict::vacuous;
    std::size_t satisfied = 0;
    std::size_t vacuous = 0;
    std::size_t violated = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<Witness> witnesses;
    std::size_t witness_cap = 32;
    std::string detail;

    explicit ComplianceReport(std::string id, std::size_t cap = 32) : check_id(std::move(id)), witness_cap(cap) {}

    void record_satisfied(double margin);
    void record_vacuous() { ++vacuous; }
    void record_violation(Witness w);
    /// Folds another report's counts and witnesses into this one, in order.
    void merge(ComplianceReport&& other);
    /// Recomputes verdict from the counts.
    ComplianceReport& finalize();

    bool ok() const noexcept { return verdict != Verdict::fail; }
};

}  // namespace pbm

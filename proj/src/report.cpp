#include "pbm/report.hpp"

#include <algorithm>

namespace pbm {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::vacuous: return "vacuous";
    }
    return "?";
}

void ComplianceReport::record_satisfied(double margin) {
    ++satisfied;
    worst_margin = std::min(worst_margin, margin);
}

void ComplianceReport::record_violation(Witness w) {
    ++violated;
    worst_margin = std::min(worst_margin, -w.gap);
    if (witnesses.size() < witness_cap) witnesses.push_back(std::move(w));
}

void ComplianceReport::merge(ComplianceReport&& other) {
    satisfied += other.satisfied;
    vacuous += other.vacuous;
    violated += other.violated;
    worst_margin = std::min(worst_margin, other.worst_margin);
    for (auto& w : other.witnesses) {
        if (witnesses.size() < witness_cap) witnesses.push_back(std::move(w));
    }
}

ComplianceReport& ComplianceReport::finalize() {
    if (violated > 0) {
        verdict = Verdict::fail;
    } else if (satisfied == 0) {
        verdict = Verdict::vacuous;
    } else {
        verdict = Verdict::pass;
    }
    return *this;
}

}  // namespace pbm

#include "pbm/errors.hpp"

namespace pbm {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::syntax: return "SyntaxError";
        case ErrorCode::arity: return "ArityError";
        case ErrorCode::domain: return "DomainError";
        case ErrorCode::division_by_zero: return "DivisionByZero";
        case ErrorCode::empty_sample_set: return "EmptySampleSet";
        case ErrorCode::distance_evaluation: return "DistanceEvaluationError";
        case ErrorCode::sequence_too_short: return "SequenceTooShort";
        case ErrorCode::unsorted_samples: return "UnsortedSamples";
        case ErrorCode::invalid_argument: return "InvalidArgument";
        case ErrorCode::evaluation: return "EvaluationError";
        case ErrorCode::empty_grid: return "EmptyGrid";
        case ErrorCode::empty_intersection: return "EmptyIntersection";
        case ErrorCode::preimage_solver_unavailable: return "PreimageSolverUnavailable";
        case ErrorCode::no_bracket_found: return "NoBracketFound";
        case ErrorCode::inverse_inconsistent: return "InverseInconsistent";
        case ErrorCode::not_converged: return "NotConverged";
        case ErrorCode::missing_section: return "MissingSection";
        case ErrorCode::unknown_preset: return "UnknownPreset";
        case ErrorCode::io: return "IOError";
    }
    return "Error";
}

namespace {

std::string with_line(ErrorCode code, const std::string& message, std::optional<std::size_t> line) {
    std::string out(to_string(code));
    if (line) out += " (line " + std::to_string(*line) + ")";
    out += ": ";
    out += message;
    return out;
}

std::string describe_syntax(std::size_t offset, const std::vector<std::string>& expected,
                            const std::string& found) {
    std::string msg = "at offset " + std::to_string(offset) + ": found " + found + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += (i + 1 == expected.size()) ? " or " : ", ";
        msg += expected[i];
    }
    return msg;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(with_line(code, message, line)), code_(code), message_(message), line_(line) {}

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found,
                         std::optional<std::size_t> line)
    : Error(ErrorCode::syntax, describe_syntax(offset, expected, found), line),
      offset_(offset),
      found_(found),
      expected_(std::move(expected)) {}

}  // namespace pbm

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pbm {

enum class ErrorCode {
    // expression language
    syntax,
    arity,
    domain,
    division_by_zero,
    // spaces and sampling
    empty_sample_set,
    distance_evaluation,
    sequence_too_short,
    unsorted_samples,
    invalid_argument,
    // contraction / solver
    evaluation,
    empty_grid,
    empty_intersection,
    preimage_solver_unavailable,
    no_bracket_found,
    inverse_inconsistent,
    not_converged,
    // scenario files
    missing_section,
    unknown_preset,
    io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library.
///
/// `line()` is set for errors tied to a scenario-file line; syntax errors in
/// expressions carry a byte offset through SyntaxError instead.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> line() const noexcept { return line_; }
    /// The message without the error-name and line prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
    std::optional<std::size_t> line_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found,
                std::optional<std::size_t> line = std::nullopt);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t offset_;
    std::string found_;
    std::vector<std::string> expected_;
};

}  // namespace pbm

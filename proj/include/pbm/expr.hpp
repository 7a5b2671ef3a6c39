#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pbm {

/// A real interval with explicit open/closed endpoints. `inf` bounds are
/// always open.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = true;

    bool contains(double x) const noexcept;
    bool empty() const noexcept;
    bool bounded() const noexcept;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Union of intervals, in declaration order (not normalized).
using IntervalSet = std::vector<Interval>;

bool contains(const IntervalSet& set, double x) noexcept;

/// Sorts, drops nothing, merges overlapping or touching intervals.
/// Throws Error(invalid_argument) on an empty interval such as (1,1).
IntervalSet normalize(IntervalSet set);

/// Parses "[0,1] or (2, inf)". Variables are not allowed here.
IntervalSet parse_interval_set(std::string_view text);

std::string to_string(const Interval& iv);
std::string to_string(const IntervalSet& set);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

// --- AST -------------------------------------------------------------------

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct NumberNode {
    double value;
};

struct VariableNode {
    int index;
    std::string name;
};

enum class BinaryOp { add, sub, mul, div, pow };

struct BinaryNode {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct NegateNode {
    ExprPtr operand;
};

enum class Builtin { max, min, sqrt, cbrt, log, abs };

struct CallNode {
    Builtin fn;
    std::vector<ExprPtr> args;
};

struct PiecewiseBranch {
    int var;
    std::string var_name;
    IntervalSet set;
    ExprPtr value;
};

/// Branches are tried in order; the first whose set contains the variable wins.
struct PiecewiseNode {
    std::vector<PiecewiseBranch> branches;
    ExprPtr otherwise;
};

struct ExprNode {
    std::variant<NumberNode, VariableNode, BinaryNode, NegateNode, CallNode, PiecewiseNode> node;
};

ExprPtr make_number(double v);
ExprPtr make_variable(int index, std::string name);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_negate(ExprPtr operand);
ExprPtr make_call(Builtin fn, std::vector<ExprPtr> args);
ExprPtr make_piecewise(std::vector<PiecewiseBranch> branches, ExprPtr otherwise);

std::string_view builtin_name(Builtin fn) noexcept;
int builtin_arity(Builtin fn) noexcept;

bool structurally_equal(const ExprNode& a, const ExprNode& b) noexcept;

/// Minimal-parenthesis rendering in the input grammar.
std::string print(const ExprNode& node);

/// Throws Error(domain) or Error(division_by_zero).
double evaluate(const ExprNode& node, std::span<const double> args);

// --- Expression ------------------------------------------------------------

/// An immutable parsed expression of one or two real variables.
///
/// Variable names are resolved at parse time. Arity-1 expressions accept any
/// single identifier (x, z, u, t, ...). Arity-2 expressions take an explicit
/// name list, or else the used names must fit one of the conventional pairs
/// (x,y) (w,z) (t,z) (t,v) (s,t) (u,v) (a,b), first match wins.
class Expression {
public:
    Expression();

    static Expression parse(std::string_view text, int arity, std::vector<std::string> var_names = {});
    static Expression from_ast(ExprPtr root, int arity, std::vector<std::string> var_names);

    double operator()(double x) const;
    double operator()(double x, double y) const;
    double eval(std::span<const double> args) const;

    int arity() const noexcept { return arity_; }
    const std::vector<std::string>& variables() const noexcept { return vars_; }
    const ExprNode& root() const noexcept { return *root_; }
    const ExprPtr& root_ptr() const noexcept { return root_; }

    std::string to_string() const { return print(*root_); }

    /// Finite interval endpoints appearing in piecewise conditions, sorted and unique.
    std::vector<double> breakpoints() const;

private:
    ExprPtr root_;
    int arity_ = 1;
    std::vector<std::string> vars_;
};

}  // namespace pbm

#include "pbm/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <system_error>

#include "pbm/errors.hpp"

namespace pbm {

// --- intervals ---------------------------------------------------------------

bool Interval::contains(double x) const noexcept {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

bool Interval::empty() const noexcept {
    if (lo < hi) return false;
    return !(lo == hi && lo_closed && hi_closed);
}

bool Interval::bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }

bool contains(const IntervalSet& set, double x) noexcept {
    return std::any_of(set.begin(), set.end(), [x](const Interval& iv) { return iv.contains(x); });
}

IntervalSet normalize(IntervalSet set) {
    for (const auto& iv : set) {
        if (iv.empty()) throw Error(ErrorCode::invalid_argument, "empty interval " + to_string(iv));
    }
    std::sort(set.begin(), set.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.lo_closed && !b.lo_closed;
    });
    IntervalSet out;
    for (const auto& iv : set) {
        if (!out.empty()) {
            auto& last = out.back();
            const bool touches = iv.lo < last.hi || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
            if (touches) {
                if (iv.hi > last.hi) {
                    last.hi = iv.hi;
                    last.hi_closed = iv.hi_closed;
                } else if (iv.hi == last.hi) {
                    last.hi_closed = last.hi_closed || iv.hi_closed;
                }
                continue;
            }
        }
        out.push_back(iv);
    }
    return out;
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), ptr);
}

namespace {

std::string format_bound(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_number(v);
}

}  // namespace

std::string to_string(const Interval& iv) {
    std::string out;
    out += iv.lo_closed ? '[' : '(';
    out += format_bound(iv.lo);
    out += ", ";
    out += format_bound(iv.hi);
    out += iv.hi_closed ? ']' : ')';
    return out;
}

std::string to_string(const IntervalSet& set) {
    std::string out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out += " or ";
        out += to_string(set[i]);
    }
    return out;
}

// --- node construction -----------------------------------------------------

ExprPtr make_number(double v) { return std::make_shared<const ExprNode>(ExprNode{NumberNode{v}}); }
ExprPtr make_variable(int index, std::string name) {
    return std::make_shared<const ExprNode>(ExprNode{VariableNode{index, std::move(name)}});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_negate(ExprPtr operand) {
    return std::make_shared<const ExprNode>(ExprNode{NegateNode{std::move(operand)}});
}
ExprPtr make_call(Builtin fn, std::vector<ExprPtr> args) {
    return std::make_shared<const ExprNode>(ExprNode{CallNode{fn, std::move(args)}});
}
ExprPtr make_piecewise(std::vector<PiecewiseBranch> branches, ExprPtr otherwise) {
    return std::make_shared<const ExprNode>(ExprNode{PiecewiseNode{std::move(branches), std::move(otherwise)}});
}

namespace {

constexpr std::array<Builtin, 6> kBuiltins = {Builtin::max,  Builtin::min, Builtin::sqrt,
                                              Builtin::cbrt, Builtin::log, Builtin::abs};

bool lookup_builtin(std::string_view name, Builtin& out) {
    for (auto fn : kBuiltins) {
        if (builtin_name(fn) == name) {
            out = fn;
            return true;
        }
    }
    return false;
}

bool is_keyword(std::string_view s) {
    return s == "piecewise" || s == "otherwise" || s == "in" || s == "or" || s == "inf";
}

}  // namespace

std::string_view builtin_name(Builtin fn) noexcept {
    switch (fn) {
        case Builtin::max: return "max";
        case Builtin::min: return "min";
        case Builtin::sqrt: return "sqrt";
        case Builtin::cbrt: return "cbrt";
        case Builtin::log: return "log";
        case Builtin::abs: return "abs";
    }
    return "?";
}

int builtin_arity(Builtin fn) noexcept { return (fn == Builtin::max || fn == Builtin::min) ? 2 : 1; }

// --- structural equality ---------------------------------------------------

bool structurally_equal(const ExprNode& a, const ExprNode& b) noexcept {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&b](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, NumberNode>) {
                // bitwise identity, so that 0.0 and -0.0 differ
                return std::signbit(lhs.value) == std::signbit(rhs.value) &&
                       (lhs.value == rhs.value || (std::isnan(lhs.value) && std::isnan(rhs.value)));
            } else if constexpr (std::is_same_v<T, VariableNode>) {
                return lhs.index == rhs.index && lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                return lhs.op == rhs.op && structurally_equal(*lhs.lhs, *rhs.lhs) &&
                       structurally_equal(*lhs.rhs, *rhs.rhs);
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                return structurally_equal(*lhs.operand, *rhs.operand);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                if (lhs.fn != rhs.fn || lhs.args.size() != rhs.args.size()) return false;
                for (std::size_t i = 0; i < lhs.args.size(); ++i) {
                    if (!structurally_equal(*lhs.args[i], *rhs.args[i])) return false;
                }
                return true;
            } else {
                if (lhs.branches.size() != rhs.branches.size()) return false;
                for (std::size_t i = 0; i < lhs.branches.size(); ++i) {
                    const auto& x = lhs.branches[i];
                    const auto& y = rhs.branches[i];
                    if (x.var != y.var || x.var_name != y.var_name || x.set != y.set) return false;
                    if (!structurally_equal(*x.value, *y.value)) return false;
                }
                return structurally_equal(*lhs.otherwise, *rhs.otherwise);
            }
        },
        a.node);
}

// --- printing --------------------------------------------------------------

namespace {

// add/sub 1, mul/div 2, pow 3, unary 4, primary 5
int precedence(const ExprNode& n) {
    if (const auto* b = std::get_if<BinaryNode>(&n.node)) {
        switch (b->op) {
            case BinaryOp::add:
            case BinaryOp::sub: return 1;
            case BinaryOp::mul:
            case BinaryOp::div: return 2;
            case BinaryOp::pow: return 3;
        }
    }
    if (std::holds_alternative<NegateNode>(n.node)) return 4;
    return 5;
}

void print_into(const ExprNode& n, std::string& out);

void print_at_least(const ExprNode& n, int min_prec, std::string& out) {
    if (precedence(n) < min_prec) {
        out += '(';
        print_into(n, out);
        out += ')';
    } else {
        print_into(n, out);
    }
}

void print_into(const ExprNode& n, std::string& out) {
    std::visit(
        [&out](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NumberNode>) {
                out += format_number(node.value);
            } else if constexpr (std::is_same_v<T, VariableNode>) {
                out += node.name;
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                if (node.op == BinaryOp::pow) {
                    print_at_least(*node.lhs, 4, out);
                    out += '^';
                    print_at_least(*node.rhs, 3, out);
                    return;
                }
                const int p = (node.op == BinaryOp::add || node.op == BinaryOp::sub) ? 1 : 2;
                print_at_least(*node.lhs, p, out);
                switch (node.op) {
                    case BinaryOp::add: out += " + "; break;
                    case BinaryOp::sub: out += " - "; break;
                    case BinaryOp::mul: out += " * "; break;
                    default: out += " / "; break;
                }
                print_at_least(*node.rhs, p + 1, out);
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                out += '-';
                print_at_least(*node.operand, 4, out);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                out += builtin_name(node.fn);
                out += '(';
                for (std::size_t i = 0; i < node.args.size(); ++i) {
                    if (i) out += ", ";
                    print_into(*node.args[i], out);
                }
                out += ')';
            } else {
                out += "piecewise(";
                for (const auto& br : node.branches) {
                    out += br.var_name;
                    out += " in ";
                    out += to_string(br.set);
                    out += ": ";
                    print_into(*br.value, out);
                    out += "; ";
                }
                out += "otherwise: ";
                print_into(*node.otherwise, out);
                out += ')';
            }
        },
        n.node);
}

}  // namespace

std::string print(const ExprNode& node) {
    std::string out;
    print_into(node, out);
    return out;
}

// --- evaluation ------------------------------------------------------------

double evaluate(const ExprNode& n, std::span<const double> args) {
    return std::visit(
        [args](const auto& node) -> double {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NumberNode>) {
                return node.value;
            } else if constexpr (std::is_same_v<T, VariableNode>) {
                return args[static_cast<std::size_t>(node.index)];
            } else if constexpr (std::is_same_v<T, BinaryNode>) {
                const double a = evaluate(*node.lhs, args);
                const double b = evaluate(*node.rhs, args);
                double r = 0.0;
                switch (node.op) {
                    case BinaryOp::add: r = a + b; break;
                    case BinaryOp::sub: r = a - b; break;
                    case BinaryOp::mul: r = a * b; break;
                    case BinaryOp::div:
                        if (b == 0.0) {
                            throw Error(ErrorCode::division_by_zero,
                                        "division of " + format_number(a) + " by zero");
                        }
                        r = a / b;
                        break;
                    case BinaryOp::pow: r = std::pow(a, b); break;
                }
                if (std::isnan(r)) {
                    throw Error(ErrorCode::domain, "undefined arithmetic on " + format_number(a) + " and " +
                                                       format_number(b));
                }
                return r;
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                return -evaluate(*node.operand, args);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                const double a = evaluate(*node.args[0], args);
                switch (node.fn) {
                    case Builtin::max: return std::max(a, evaluate(*node.args[1], args));
                    case Builtin::min: return std::min(a, evaluate(*node.args[1], args));
                    case Builtin::sqrt:
                        if (a < 0.0) throw Error(ErrorCode::domain, "sqrt of negative " + format_number(a));
                        return std::sqrt(a);
                    case Builtin::cbrt: return std::cbrt(a);
                    case Builtin::log:
                        if (!(a > 0.0)) throw Error(ErrorCode::domain, "log of non-positive " + format_number(a));
                        return std::log(a);
                    case Builtin::abs: return std::abs(a);
                }
                return 0.0;
            } else {
                for (const auto& br : node.branches) {
                    if (contains(br.set, args[static_cast<std::size_t>(br.var)])) return evaluate(*br.value, args);
                }
                return evaluate(*node.otherwise, args);
            }
        },
        n.node);
}

// --- lexer -----------------------------------------------------------------

namespace {

enum class Tok { number, ident, punct, end };

struct Token {
    Tok kind;
    std::string text;
    double value = 0.0;
    std::size_t offset = 0;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::end: return "end of input";
        case Tok::number: return "number '" + t.text + "'";
        case Tok::ident: return "identifier '" + t.text + "'";
        case Tok::punct: return "'" + t.text + "'";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                    j = k;
                }
            }
            Token t{Tok::number, std::string(src.substr(i, j - i)), 0.0, i};
            // from_chars rejects a leading '.', so parse a zero-prefixed copy
            const std::string digits = t.text.front() == '.' ? "0" + t.text : t.text;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.value);
            if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
                throw SyntaxError(i, {"number"}, "malformed number '" + t.text + "'");
            }
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back(Token{Tok::ident, std::string(src.substr(i, j - i)), 0.0, i});
            i = j;
            continue;
        }
        static constexpr std::string_view kPunct = "+-*/^()[],;:";
        if (kPunct.find(c) != std::string_view::npos) {
            out.push_back(Token{Tok::punct, std::string(1, c), 0.0, i});
            ++i;
            continue;
        }
        throw SyntaxError(i, {"expression"}, std::string("character '") + c + "'");
    }
    out.push_back(Token{Tok::end, "", 0.0, src.size()});
    return out;
}

// --- parser ------------------------------------------------------------------

class Parser {
public:
    Parser(std::vector<Token> toks, std::vector<std::string> vars)
        : toks_(std::move(toks)), vars_(std::move(vars)) {}

    ExprPtr parse_all() {
        auto e = expr();
        if (peek().kind != Tok::end) fail({"operator", "end of input"});
        return e;
    }

    IntervalSet parse_set_only() {
        auto set = set_expr(nullptr);
        if (peek().kind != Tok::end) fail({"'or'", "end of input"});
        return set;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    bool at_punct(char c) const { return peek().kind == Tok::punct && peek().text[0] == c; }
    bool at_ident(std::string_view s) const { return peek().kind == Tok::ident && peek().text == s; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw SyntaxError(peek().offset, std::move(expected), describe(peek()));
    }

    void expect_punct(char c) {
        if (!at_punct(c)) fail({std::string("'") + c + "'"});
        ++pos_;
    }

    void expect_ident(std::string_view s) {
        if (!at_ident(s)) fail({"'" + std::string(s) + "'"});
        ++pos_;
    }

    int variable_index(const Token& t) const {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == t.text) return static_cast<int>(i);
        }
        throw Error(ErrorCode::arity, "unknown variable '" + t.text + "' at offset " + std::to_string(t.offset));
    }

    ExprPtr expr() {
        auto lhs = term();
        while (at_punct('+') || at_punct('-')) {
            const auto op = next().text[0] == '+' ? BinaryOp::add : BinaryOp::sub;
            lhs = make_binary(op, lhs, term());
        }
        return lhs;
    }

    ExprPtr term() {
        auto lhs = factor();
        while (at_punct('*') || at_punct('/')) {
            const auto op = next().text[0] == '*' ? BinaryOp::mul : BinaryOp::div;
            lhs = make_binary(op, lhs, factor());
        }
        return lhs;
    }

    ExprPtr factor() {
        auto base = unary();
        if (at_punct('^')) {
            ++pos_;
            return make_binary(BinaryOp::pow, base, factor());
        }
        return base;
    }

    ExprPtr unary() {
        if (at_punct('-')) {
            ++pos_;
            return make_negate(unary());
        }
        return primary();
    }

    ExprPtr primary() {
        const Token& t = peek();
        if (t.kind == Tok::number) {
            ++pos_;
            return make_number(t.value);
        }
        if (at_punct('(')) {
            ++pos_;
            auto e = expr();
            expect_punct(')');
            return e;
        }
        if (t.kind == Tok::ident) {
            if (t.text == "piecewise") return piecewise();
            if (is_keyword(t.text)) fail({"number", "identifier", "'('", "'-'", "'piecewise'"});
            Builtin fn{};
            if (lookup_builtin(t.text, fn)) {
                ++pos_;
                return call(fn);
            }
            ++pos_;
            if (at_punct('(')) {
                throw SyntaxError(t.offset, {"max", "min", "sqrt", "cbrt", "log", "abs"},
                                  "unknown function '" + t.text + "'");
            }
            return make_variable(variable_index(t), t.text);
        }
        fail({"number", "identifier", "'('", "'-'", "'piecewise'"});
    }

    ExprPtr call(Builtin fn) {
        expect_punct('(');
        std::vector<ExprPtr> args;
        args.push_back(expr());
        for (int i = 1; i < builtin_arity(fn); ++i) {
            expect_punct(',');
            args.push_back(expr());
        }
        expect_punct(')');
        return make_call(fn, std::move(args));
    }

    ExprPtr piecewise() {
        ++pos_;
        expect_punct('(');
        std::vector<PiecewiseBranch> branches;
        do {
            branches.push_back(branch());
            expect_punct(';');
        } while (!at_ident("otherwise"));
        ++pos_;
        expect_punct(':');
        auto otherwise = expr();
        expect_punct(')');
        return make_piecewise(std::move(branches), std::move(otherwise));
    }

    PiecewiseBranch branch() {
        const Token& v = peek();
        if (v.kind != Tok::ident || is_keyword(v.text)) fail({"variable", "'otherwise'"});
        ++pos_;
        const int index = variable_index(v);
        expect_ident("in");
        auto set = set_expr(&v.text);
        expect_punct(':');
        return PiecewiseBranch{index, v.text, std::move(set), expr()};
    }

    // interval ("or" [var "in"] interval)*
    IntervalSet set_expr(const std::string* var) {
        IntervalSet set;
        set.push_back(interval());
        while (at_ident("or")) {
            ++pos_;
            if (var && peek().kind == Tok::ident && !is_keyword(peek().text)) {
                if (peek().text != *var) fail({"'" + *var + "'"});
                ++pos_;
                expect_ident("in");
            }
            set.push_back(interval());
        }
        return set;
    }

    Interval interval() {
        Interval iv;
        if (at_punct('[')) {
            iv.lo_closed = true;
        } else if (at_punct('(')) {
            iv.lo_closed = false;
        } else {
            fail({"'['", "'('"});
        }
        ++pos_;
        iv.lo = bound();
        expect_punct(',');
        const std::size_t hi_offset = peek().offset;
        iv.hi = bound();
        if (at_punct(']')) {
            iv.hi_closed = true;
        } else if (at_punct(')')) {
            iv.hi_closed = false;
        } else {
            fail({"']'", "')'"});
        }
        ++pos_;
        if (std::isinf(iv.lo)) iv.lo_closed = false;
        if (std::isinf(iv.hi)) iv.hi_closed = false;
        if (iv.hi < iv.lo) throw SyntaxError(hi_offset, {"upper bound >= lower bound"}, "inverted interval");
        return iv;
    }

    double bound() {
        double sign = 1.0;
        if (at_punct('-')) {
            ++pos_;
            sign = -1.0;
        } else if (at_punct('+')) {
            ++pos_;
        }
        if (peek().kind == Tok::number) return sign * next().value;
        if (at_ident("inf")) {
            ++pos_;
            return sign * std::numeric_limits<double>::infinity();
        }
        fail({"number", "'inf'"});
    }

    std::vector<Token> toks_;
    std::vector<std::string> vars_;
    std::size_t pos_ = 0;
};

// Identifiers that act as variable references, in order of first appearance.
std::vector<std::string> scan_variables(const std::vector<Token>& toks) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto& t = toks[i];
        if (t.kind != Tok::ident || is_keyword(t.text)) continue;
        Builtin fn{};
        if (lookup_builtin(t.text, fn)) continue;
        if (toks[i + 1].kind == Tok::punct && toks[i + 1].text == "(") continue;
        if (std::find(names.begin(), names.end(), t.text) == names.end()) names.push_back(t.text);
    }
    return names;
}

std::vector<std::string> resolve_variables(const std::vector<std::string>& used, int arity,
                                           std::vector<std::string> declared) {
    if (arity != 1 && arity != 2) throw Error(ErrorCode::arity, "arity must be 1 or 2");
    if (!declared.empty()) {
        if (static_cast<int>(declared.size()) != arity) {
            throw Error(ErrorCode::arity, "declared " + std::to_string(declared.size()) +
                                              " variable names for arity " + std::to_string(arity));
        }
        return declared;
    }
    if (arity == 1) {
        if (used.size() > 1) {
            throw Error(ErrorCode::arity, "expression of one variable uses '" + used[0] + "' and '" + used[1] + "'");
        }
        return {used.empty() ? std::string("x") : used[0]};
    }
    static const std::array<std::array<const char*, 2>, 7> kPairs = {{
        {"x", "y"}, {"w", "z"}, {"t", "z"}, {"t", "v"}, {"s", "t"}, {"u", "v"}, {"a", "b"},
    }};
    for (const auto& pair : kPairs) {
        const bool fits = std::all_of(used.begin(), used.end(),
                                      [&pair](const std::string& n) { return n == pair[0] || n == pair[1]; });
        if (fits) return {pair[0], pair[1]};
    }
    std::string list;
    for (const auto& n : used) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::arity, "variables {" + list + "} do not form a known pair; declare them explicitly");
}

void collect_breakpoints(const ExprNode& n, std::set<double>& out) {
    std::visit(
        [&out](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BinaryNode>) {
                collect_breakpoints(*node.lhs, out);
                collect_breakpoints(*node.rhs, out);
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                collect_breakpoints(*node.operand, out);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                for (const auto& a : node.args) collect_breakpoints(*a, out);
            } else if constexpr (std::is_same_v<T, PiecewiseNode>) {
                for (const auto& br : node.branches) {
                    for (const auto& iv : br.set) {
                        if (std::isfinite(iv.lo)) out.insert(iv.lo);
                        if (std::isfinite(iv.hi)) out.insert(iv.hi);
                    }
                    collect_breakpoints(*br.value, out);
                }
                collect_breakpoints(*node.otherwise, out);
            }
        },
        n.node);
}

}  // namespace

IntervalSet parse_interval_set(std::string_view text) {
    Parser p(tokenize(text), {});
    return p.parse_set_only();
}

// --- Expression ------------------------------------------------------------

Expression::Expression() : root_(make_number(0.0)), arity_(1), vars_{"x"} {}

Expression Expression::parse(std::string_view text, int arity, std::vector<std::string> var_names) {
    auto toks = tokenize(text);
    if (toks.size() == 1) throw SyntaxError(0, {"expression"}, "empty input");
    auto vars = resolve_variables(scan_variables(toks), arity, std::move(var_names));
    Parser p(std::move(toks), vars);
    return from_ast(p.parse_all(), arity, std::move(vars));
}

Expression Expression::from_ast(ExprPtr root, int arity, std::vector<std::string> var_names) {
    Expression e;
    e.root_ = std::move(root);
    e.arity_ = arity;
    e.vars_ = std::move(var_names);
    return e;
}

double Expression::operator()(double x) const {
    // a second slot keeps arity-2 trees well-defined when called with one argument
    const std::array<double, 2> args{x, 0.0};
    return evaluate(*root_, args);
}

double Expression::operator()(double x, double y) const {
    const std::array<double, 2> args{x, y};
    return evaluate(*root_, args);
}

double Expression::eval(std::span<const double> args) const {
    if (static_cast<int>(args.size()) != arity_) {
        throw Error(ErrorCode::arity, "expected " + std::to_string(arity_) + " arguments, got " +
                                          std::to_string(args.size()));
    }
    return evaluate(*root_, args);
}

std::vector<double> Expression::breakpoints() const {
    std::set<double> s;
    collect_breakpoints(*root_, s);
    return {s.begin(), s.end()};
}

}  // namespace pbm

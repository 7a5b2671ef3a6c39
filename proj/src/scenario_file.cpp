#include "pbm/scenario_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "bundled_scenarios.hpp"
#include "pbm/errors.hpp"

namespace pbm {

namespace {

struct Value {
    std::string text;
    bool quoted = false;
    std::size_t line = 0;
};

struct Section {
    std::size_t line = 0;
    std::map<std::string, Value> entries;
    std::vector<std::string> consumed;
};

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

const std::vector<std::string>& known_sections() {
    static const std::vector<std::string> k = {"scenario", "space",   "maps",        "admissibility",
                                               "toolkit",  "solver", "verification"};
    return k;
}

std::map<std::string, Section> parse_sections(std::string_view text) {
    std::map<std::string, Section> out;
    Section* current = nullptr;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // strip a comment that starts outside quotes
        bool in_quotes = false;
        std::size_t cut = raw.size();
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"') in_quotes = !in_quotes;
            if (!in_quotes && raw[i] == '#') {
                cut = i;
                break;
            }
        }
        const std::string line = trim(std::string_view(raw).substr(0, cut));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw Error(ErrorCode::syntax, "unterminated section header", line_no);
            const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
            const auto& k = known_sections();
            if (std::find(k.begin(), k.end(), name) == k.end()) {
                throw Error(ErrorCode::syntax, "unknown section [" + name + "]", line_no);
            }
            if (out.count(name)) throw Error(ErrorCode::syntax, "duplicate section [" + name + "]", line_no);
            current = &out[name];
            current->line = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::syntax, "expected key = value", line_no);
        if (!current) throw Error(ErrorCode::syntax, "key outside of any section", line_no);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        std::string val = trim(std::string_view(line).substr(eq + 1));
        Value v{std::move(val), false, line_no};
        if (!v.text.empty() && v.text.front() == '"') {
            if (v.text.size() < 2 || v.text.back() != '"') {
                throw Error(ErrorCode::syntax, "unterminated string for '" + key + "'", line_no);
            }
            v.text = v.text.substr(1, v.text.size() - 2);
            v.quoted = true;
        }
        if (key.empty()) throw Error(ErrorCode::syntax, "empty key", line_no);
        if (current->entries.count(key)) throw Error(ErrorCode::syntax, "duplicate key '" + key + "'", line_no);
        current->entries.emplace(key, std::move(v));
    }
    return out;
}

class Reader {
public:
    explicit Reader(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    void require_section(const std::string& s) const {
        if (!has_section(s)) throw Error(ErrorCode::missing_section, "missing section [" + s + "]");
    }

    std::size_t section_line(const std::string& s) const { return sections_.at(s).line; }

    const Value* find(const std::string& section, const std::string& key) {
        auto it = sections_.find(section);
        if (it == sections_.end()) return nullptr;
        auto e = it->second.entries.find(key);
        if (e == it->second.entries.end()) return nullptr;
        it->second.consumed.push_back(key);
        return &e->second;
    }

    const Value& get(const std::string& section, const std::string& key) {
        require_section(section);
        if (const Value* v = find(section, key)) return *v;
        throw Error(ErrorCode::invalid_argument, "missing key '" + key + "' in [" + section + "]",
                    section_line(section));
    }

    // Every key must have been read by someone.
    void reject_unused() const {
        for (const auto& [name, sec] : sections_) {
            for (const auto& [key, val] : sec.entries) {
                if (std::find(sec.consumed.begin(), sec.consumed.end(), key) == sec.consumed.end()) {
                    throw Error(ErrorCode::invalid_argument, "unexpected key '" + key + "' in [" + name + "]",
                                val.line);
                }
            }
        }
    }

private:
    std::map<std::string, Section> sections_;
};

Expression expr_of(const Value& v, int arity, std::vector<std::string> vars = {}) {
    if (!v.quoted) throw Error(ErrorCode::syntax, "expression values must be quoted", v.line);
    try {
        return Expression::parse(v.text, arity, std::move(vars));
    } catch (const SyntaxError& e) {
        throw SyntaxError(e.offset(), e.expected(), e.found() + " in \"" + v.text + "\"", v.line);
    } catch (const Error& e) {
        throw Error(e.code(), e.message(), v.line);
    }
}

double number_of(const Value& v) {
    double out = 0.0;
    const std::string& t = v.text;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw Error(ErrorCode::syntax, "expected a number, got '" + t + "'", v.line);
    }
    return out;
}

std::size_t count_of(const Value& v) {
    const double d = number_of(v);
    if (d < 0.0 || d != std::floor(d)) throw Error(ErrorCode::syntax, "expected a nonnegative integer", v.line);
    return static_cast<std::size_t>(d);
}

bool bool_of(const Value& v) {
    if (v.text == "true") return true;
    if (v.text == "false") return false;
    throw Error(ErrorCode::syntax, "expected true or false, got '" + v.text + "'", v.line);
}

std::vector<std::string> list_of(const Value& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(v.text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> numbers_of(const Value& v) {
    std::vector<double> out;
    for (const auto& s : list_of(v)) out.push_back(number_of(Value{s, false, v.line}));
    return out;
}

GridSpec grid_of(const Value& v) {
    try {
        return GridSpec::parse(v.text);
    } catch (const Error& e) {
        throw Error(e.code(), e.message(), v.line);
    }
}

IntervalSet set_of(const Value& v) {
    if (!v.quoted) throw Error(ErrorCode::syntax, "interval sets must be quoted", v.line);
    try {
        return parse_interval_set(v.text);
    } catch (const SyntaxError& e) {
        throw SyntaxError(e.offset(), e.expected(), e.found() + " in \"" + v.text + "\"", v.line);
    }
}

std::vector<std::string> vars_of(Reader& r, const std::string& section, const std::string& key) {
    if (const Value* v = r.find(section, key)) return list_of(*v);
    return {};
}

template <class Fn>
auto located(const Value& v, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.line()) throw;
        throw Error(e.code(), e.message(), v.line);
    }
}

}  // namespace

ScenarioFile load_scenario(std::string_view text, std::string default_name) {
    Reader r(parse_sections(text));
    for (const char* s : {"space", "maps", "toolkit"}) r.require_section(s);

    std::string name = std::move(default_name);
    if (const Value* v = r.find("scenario", "name")) name = v->text;

    // [space]
    const Value& dist = r.get("space", "distance");
    Expression distance = dist.quoted
                              ? expr_of(dist, 2, vars_of(r, "space", "distance_vars"))
                              : located(dist, [&] { return builtin_distance(dist.text); });
    double s = 1.0;
    if (const Value* v = r.find("space", "s")) s = number_of(*v);
    bool complete = false;
    if (const Value* v = r.find("space", "complete")) complete = bool_of(*v);

    // [toolkit]
    bool weak_preset = false;
    if (const Value* v = r.find("toolkit", "preset")) {
        if (v->text != "weak-contraction") {
            throw Error(ErrorCode::unknown_preset, "unknown toolkit preset '" + v->text + "'", v->line);
        }
        weak_preset = true;
    }
    const Value& xi_v = r.get("toolkit", "xi");
    XiFunction xi = xi_v.quoted ? XiFunction{expr_of(xi_v, 1)} : [&] {
        if (xi_v.text != "identity") {
            throw Error(ErrorCode::unknown_preset, "unknown xi preset '" + xi_v.text + "'", xi_v.line);
        }
        return xi_identity();
    }();
    OmegaOneFunction omega{expr_of(r.get("toolkit", "omega"), 1)};

    Toolkit toolkit{xi, omega, make_cclass(CClassPreset::half_t)};
    std::optional<Expression> gamma, delta;
    if (weak_preset) {
        if (const Value* v = r.find("toolkit", "H")) {
            throw Error(ErrorCode::invalid_argument, "H is fixed by the weak-contraction preset", v->line);
        }
        auto preset = make_weak_contraction_preset(xi, omega);
        toolkit = preset.toolkit;
        gamma = preset.gamma;
        delta = preset.delta;
    } else {
        const Value& hv = r.get("toolkit", "H");
        toolkit.H = hv.quoted ? CClassFunction{expr_of(hv, 2, vars_of(r, "toolkit", "H_vars")), CClassPreset::custom}
                              : located(hv, [&] { return cclass_from_name(hv.text); });
    }

    // [maps]
    bool cyclic = false;
    if (const Value* v = r.find("maps", "preset")) {
        if (v->text != "cyclic") throw Error(ErrorCode::unknown_preset, "unknown maps preset '" + v->text + "'", v->line);
        cyclic = true;
    }
    Expression h = expr_of(r.get("maps", "h"), 1);
    Expression eta = expr_of(r.get("maps", "eta"), 1);

    auto scenario = [&]() -> Scenario {
        if (cyclic) {
            if (r.has_section("admissibility") || weak_preset) {
                throw Error(ErrorCode::invalid_argument, "the cyclic preset defines gamma and delta itself",
                            r.section_line("maps"));
            }
            const Value& cv = r.get("maps", "C");
            const Value& dv = r.get("maps", "D");
            const auto C = set_of(cv);
            const auto D = set_of(dv);
            return located(cv, [&] { return make_cyclic_preset(C, D, h, eta, distance, s, toolkit, name); });
        }
        const Value& carrier_v = r.get("space", "carrier");
        Carrier carrier = located(carrier_v, [&] { return Carrier(set_of(carrier_v)); });
        if (!weak_preset) {
            gamma = expr_of(r.get("admissibility", "gamma"), 1);
            delta = expr_of(r.get("admissibility", "delta"), 1);
        } else if (r.has_section("admissibility")) {
            throw Error(ErrorCode::invalid_argument, "the weak-contraction preset fixes gamma = delta = 1",
                        r.section_line("admissibility"));
        }
        Scenario sc{name,
                    PartialBMetricSpace(std::move(carrier), distance, s, complete),
                    h,
                    eta,
                    expr_of(r.get("maps", "Q"), 1),
                    expr_of(r.get("maps", "Z"), 1),
                    *gamma,
                    *delta,
                    toolkit,
                    {},
                    std::nullopt,
                    std::nullopt};
        if (const Value* v = r.find("maps", "inverse_Q")) sc.inverse_Q = expr_of(*v, 1);
        if (const Value* v = r.find("maps", "inverse_Z")) sc.inverse_Z = expr_of(*v, 1);
        if (const Value* v = r.find("maps", "closed_ranges")) {
            for (const auto& m : list_of(*v)) sc.declared_closed_ranges.push_back(located(*v, [&] {
                return map_id_from_name(m);
            }));
        }
        return sc;
    }();
    scenario.space.declared_complete = complete || cyclic;
    if (!dist.quoted) scenario.space.distance_name = dist.text;

    ScenarioFile out{std::move(scenario), {}, {}};

    if (const Value* v = r.find("solver", "v0")) out.solver.v0 = v->quoted ? numbers_of(*v) : std::vector{number_of(*v)};
    if (const Value* v = r.find("solver", "tol")) out.solver.tol = number_of(*v);
    if (const Value* v = r.find("solver", "max_iters")) out.solver.max_iters = count_of(*v);
    if (const Value* v = r.find("solver", "streak")) out.solver.streak = count_of(*v);

    if (const Value* v = r.find("verification", "grid")) out.verification.grid = grid_of(*v);
    if (const Value* v = r.find("verification", "breakpoints")) out.verification.breakpoints = numbers_of(*v);
    if (const Value* v = r.find("verification", "samples")) out.verification.random_samples = count_of(*v);
    if (const Value* v = r.find("verification", "coincidence_grid")) out.verification.coincidence_grid = grid_of(*v);
    if (const Value* v = r.find("verification", "uniqueness_grid")) out.verification.uniqueness_grid = grid_of(*v);

    r.reject_unused();
    return out;
}

namespace {

std::string canonical_name(std::string_view name) {
    std::string out(name);
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

}  // namespace

std::optional<std::string_view> bundled_scenario(std::string_view name) {
    const std::string key = canonical_name(name);
    for (const auto& b : detail::kBundledScenarios) {
        if (b.name == key) return b.text;
    }
    return std::nullopt;
}

std::vector<std::string> bundled_scenario_names() {
    std::vector<std::string> out;
    for (const auto& b : detail::kBundledScenarios) out.emplace_back(b.name);
    return out;
}

ScenarioFile load_scenario_source(const std::string& name_or_path) {
    std::ifstream in(name_or_path, std::ios::binary);
    if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        return load_scenario(buf.str(), std::filesystem::path(name_or_path).stem().string());
    }
    if (auto text = bundled_scenario(name_or_path)) return load_scenario(*text, canonical_name(name_or_path));
    throw Error(ErrorCode::io, "cannot read scenario '" + name_or_path + "'");
}

}  // namespace pbm

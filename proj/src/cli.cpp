#include "pbm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <random>
#include <set>

#include "pbm/contraction.hpp"
#include "pbm/errors.hpp"
#include "pbm/function_classes.hpp"
#include "pbm/parallel.hpp"
#include "pbm/scenario_file.hpp"
#include "pbm/solver.hpp"

namespace pbm {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Flags {
    std::string scenario;
    std::string grid;
    double tol = kDefaultTol;
    std::size_t max_iters = 10000;
    bool max_iters_given = false;
    std::uint64_t seed = 0;
    std::string report_path;
    unsigned workers = default_workers();
    bool timings = false;
    bool b_metric = false;
    std::vector<double> v0;
};

json num(double d) {
    if (std::isfinite(d)) return d;
    if (std::isnan(d)) return "nan";
    return d > 0 ? "inf" : "-inf";
}

json nums(std::span<const double> xs) {
    json a = json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

json to_json(const ComplianceReport& r) {
    json w = json::array();
    for (const auto& x : r.witnesses) {
        json j = {{"point", nums(x.point)}, {"lhs", num(x.lhs)}, {"rhs", num(x.rhs)}, {"gap", num(x.gap)}};
        if (!x.note.empty()) j["note"] = x.note;
        w.push_back(std::move(j));
    }
    json j = {{"check", r.check_id},
              {"verdict", to_string(r.verdict)},
              {"satisfied", r.satisfied},
              {"vacuous", r.vacuous},
              {"violated", r.violated},
              {"worst_margin", num(r.worst_margin)}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    j["witnesses"] = std::move(w);
    return j;
}

json to_json(const AxiomReport& r) {
    json w = json::array();
    for (const auto& x : r.witnesses) {
        w.push_back({{"points", nums(x.points)}, {"lhs", num(x.lhs)}, {"rhs", num(x.rhs)}, {"gap", num(x.gap)}});
    }
    return {{"axiom", to_string(r.axiom)},
            {"pass", r.pass},
            {"samples_checked", r.samples_checked},
            {"violations", r.violations},
            {"witnesses", std::move(w)}};
}

std::string counts(const ComplianceReport& r) {
    return std::to_string(r.satisfied) + " satisfied, " + std::to_string(r.vacuous) + " vacuous, " +
           std::to_string(r.violated) + " violated";
}

std::string format_point(const std::vector<double>& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
    return s + ")";
}

class Session {
public:
    Session(const Flags& flags, ScenarioFile file, std::string source, std::string command, std::ostream& out)
        : flags_(flags), file_(std::move(file)), out_(out) {
        grid_ = flags.grid.empty() ? file_.verification.grid : GridSpec::parse(flags.grid);
        if (flags.max_iters_given) file_.solver.max_iters = flags.max_iters;
        if (!flags.v0.empty()) file_.solver.v0 = flags.v0;

        report_["tool"] = kToolName;
        report_["version"] = kToolVersion;
        report_["command"] = std::move(command);
        report_["scenario"] = {{"name", sc().name}, {"source", std::move(source)}};
        report_["config"] = {{"tol", flags.tol},
                             {"grid", grid_.to_string()},
                             {"seed", flags.seed},
                             {"max_iters", file_.solver.max_iters},
                             {"streak", file_.solver.streak},
                             {"v0", nums(file_.solver.v0)},
                             {"random_samples", file_.verification.random_samples},
                             {"workers", flags.workers}};
        report_["checks"] = json::array();
    }

    const Scenario& sc() const { return file_.scenario; }
    json& report() { return report_; }
    std::ostream& out() { return out_; }

    template <class Fn>
    auto timed(const std::string& name, Fn&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        auto result = fn();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        timings_[name] = dt.count();
        return result;
    }

    /// Grid points and breakpoints in the carrier plus seeded uniform draws
    /// over the grid box.
    std::vector<double> samples(bool with_breakpoints) const {
        std::set<double> pts;
        const Carrier& c = sc().space.carrier;
        for (double x : grid_.points()) {
            if (c.contains(x)) pts.insert(x);
        }
        if (with_breakpoints) {
            for (double b : file_.verification.breakpoints) {
                if (b >= grid_.lo && b <= grid_.hi && c.contains(b)) pts.insert(b);
            }
        }
        std::mt19937_64 gen(flags_.seed);
        for (std::size_t i = 0; i < file_.verification.random_samples; ++i) {
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            const double x = grid_.lo + u * (grid_.hi - grid_.lo);
            if (c.contains(x)) pts.insert(x);
        }
        return {pts.begin(), pts.end()};
    }

    bool add_check(const ComplianceReport& r) {
        out_ << "  [" << (r.verdict == Verdict::fail ? "FAIL" : r.verdict == Verdict::vacuous ? "VACUOUS" : "PASS")
             << "] " << r.check_id << ": " << counts(r);
        if (!r.detail.empty()) out_ << " (" << r.detail << ")";
        out_ << "\n";
        if (!r.witnesses.empty()) {
            const auto& w = r.witnesses.front();
            out_ << "         witness " << format_point(w.point) << " lhs " << format_number(w.lhs) << " rhs "
                 << format_number(w.rhs);
            if (!w.note.empty()) out_ << " " << w.note;
            out_ << "\n";
        }
        report_["checks"].push_back(to_json(r));
        return r.ok();
    }

    bool run_space(bool b_metric) {
        const auto pts = samples(false);
        out_ << "space: " << sc().space.carrier.to_string() << ", pd(x, y) = "
             << (sc().space.distance_name.empty() ? sc().space.distance.to_string() : sc().space.distance_name)
             << ", s = " << format_number(sc().space.s_coeff) << ", " << pts.size() << " samples\n";
        const AxiomCheckOptions opts{flags_.tol, 32, flags_.workers};
        bool ok = true;
        auto emit = [&](const std::vector<AxiomReport>& reports, const char* key) {
            json arr = json::array();
            for (const auto& r : reports) {
                out_ << "  [" << (r.pass ? "PASS" : "FAIL") << "] " << to_string(r.axiom) << ": "
                     << r.violations << " violations in " << r.samples_checked << " cases\n";
                if (!r.witnesses.empty()) {
                    const auto& w = r.witnesses.front();
                    out_ << "         witness " << format_point(w.points) << " lhs " << format_number(w.lhs)
                         << " rhs " << format_number(w.rhs) << "\n";
                }
                ok = ok && r.pass;
                arr.push_back(to_json(r));
            }
            report_[key] = std::move(arr);
        };
        report_["space"] = {{"carrier", sc().space.carrier.to_string()},
                            {"distance", sc().space.distance.to_string()},
                            {"s", sc().space.s_coeff},
                            {"declared_complete", sc().space.declared_complete},
                            {"samples", pts.size()}};
        emit(timed("axioms", [&] { return check_pbm_axioms(sc().space, pts, opts); }), "axioms");
        if (b_metric) {
            emit(timed("b_metric_axioms", [&] { return check_b_metric_axioms(sc().space, pts, opts); }),
                 "b_metric_axioms");
        }
        return ok;
    }

    bool run_classes() {
        out_ << "function classes:\n";
        const auto& tk = sc().toolkit;
        const auto xs = default_xi_samples();
        const auto pairs = default_cclass_pairs();
        bool ok = add_check(check_xi(tk.xi, xs, flags_.tol));
        ok = add_check(check_omega1(tk.omega, default_omega_probes(flags_.tol), flags_.tol)) && ok;
        ok = add_check(check_cclass(tk.H, pairs, flags_.tol)) && ok;
        return ok;
    }

    ComplianceReport tac_report() {
        std::vector<double> bps = file_.verification.breakpoints;
        for (double b : scenario_breakpoints(sc())) bps.push_back(b);
        const auto grid = build_pair_grid(sc(), grid_, bps);
        report_["tac_grid"] = {{"box", grid_.to_string()}, {"axis_points", grid.w_axis.size()}, {"pairs", grid.size()}};
        return timed("tac", [&] { return verify_tac_grid(sc(), grid, {flags_.tol, 32, flags_.workers}); });
    }

    bool run_tac_only() {
        out_ << "contraction:\n";
        const auto r = tac_report();
        add_check(r);
        return r.ok() && r.satisfied > 0;
    }

    bool run_hypotheses() {
        bool ok = run_classes();
        const auto pts = samples(true);
        const PreimageOptions popts{flags_.tol, flags_.tol};
        out_ << "hypotheses over " << pts.size() << " samples:\n";
        ok = add_check(check_self_maps(sc(), pts, flags_.tol)) && ok;
        ok = add_check(check_range_inclusion(sc(), pts, popts)) && ok;
        ok = add_check(check_cyclic_admissible(sc(), pts)) && ok;
        ok = add_check(check_initial_gate(sc(), file_.solver.v0)) && ok;
        ok = add_check(check_superlevel_closure(sc())) && ok;
        ok = add_check(check_closed_ranges(sc(), popts)) && ok;
        ok = add_check(tac_report()) && ok;
        return ok;
    }

    struct SolveOutcome {
        std::vector<IterationTrace> traces;
        std::vector<std::optional<FixedPointCertificate>> certificates;
        bool all_converged = true;
        bool any_certified = false;
    };

    SolveOutcome run_solve() {
        SolveOutcome o;
        const auto& v0s = file_.solver.v0;
        IterationOptions iopts;
        iopts.max_iters = file_.solver.max_iters;
        iopts.tol = flags_.tol;
        iopts.streak = file_.solver.streak;
        iopts.preimage = {flags_.tol, flags_.tol};
        o.traces.resize(v0s.size());
        timed("solve", [&] {
            parallel_chunks(v0s.size(), flags_.workers, [&](std::size_t b, std::size_t e, std::size_t) {
                for (std::size_t i = b; i < e; ++i) o.traces[i] = build_sequence(sc(), v0s[i], iopts);
            });
            return 0;
        });

        out_ << "solver:\n";
        json traces = json::array();
        for (const auto& t : o.traces) {
            json j = {{"v0", num(t.v0)},
                      {"status", to_string(t.status)},
                      {"iterations", t.d_points.size()},
                      {"all_gates_open", t.all_gates()},
                      {"max_preimage_residual", num(t.max_preimage_residual())}};
            std::optional<FixedPointCertificate> cert;
            out_ << "  v0 = " << format_number(t.v0) << ": " << to_string(t.status) << " after "
                 << t.d_points.size() << " terms";
            if (t.converged()) {
                const auto lim = detect_limit(t, sc().space, flags_.tol);
                cert = certify_common_fixed_point(sc(), lim.limit, flags_.tol);
                const auto mono = check_even_step_monotonicity(t, sc().space, flags_.tol);
                j["limit"] = num(lim.limit);
                j["convergence"] = {{"converges", lim.convergence.converges},
                                    {"tail_discrepancy", num(lim.convergence.tail_discrepancy)}};
                j["cauchy"] = {{"cauchy", lim.cauchy.cauchy},
                               {"limit_estimate", num(lim.cauchy.limit_estimate)},
                               {"spread", num(lim.cauchy.spread)}};
                j["even_step_monotonicity"] = to_json(mono);
                j["certificate"] = {{"point", num(cert->point)},
                                    {"residuals", nums(cert->residuals)},
                                    {"certified", cert->certified}};
                out_ << ", limit " << format_number(lim.limit) << (cert->certified ? " (certified)" : " (not certified)");
                o.any_certified = o.any_certified || cert->certified;
            } else {
                o.all_converged = false;
                if (t.status == TraceStatus::preimage_failure) {
                    j["failure_step"] = t.failure_step;
                    j["failure"] = t.failure_message;
                    out_ << " (" << t.failure_message << ")";
                }
            }
            out_ << "\n";
            j["d_points"] = nums(t.d_points);
            j["v_points"] = nums(t.v_points);
            j["step_distances"] = nums(t.step_distances);
            j["preimage_residuals"] = nums(t.preimage_residuals);
            traces.push_back(std::move(j));
            o.certificates.push_back(cert);
        }
        report_["traces"] = std::move(traces);
        return o;
    }

    struct CoincidenceOutcome {
        CoincidenceSet hq, ez;
        ComplianceReport compat_hq{"weak-compatibility-h-Q"};
        ComplianceReport compat_ez{"weak-compatibility-eta-Z"};
    };

    CoincidenceOutcome run_coincidence() {
        const GridSpec g = file_.verification.coincidence_grid.value_or(grid_);
        std::vector<double> xs;
        for (double x : g.points()) {
            if (sc().space.carrier.contains(x)) xs.push_back(x);
        }
        CoincidenceOutcome o;
        timed("coincidence", [&] {
            o.hq = find_coincidence_points(sc().space, sc().h, sc().Q, xs, flags_.tol, "h-Q");
            o.ez = find_coincidence_points(sc().space, sc().eta, sc().Z, xs, flags_.tol, "eta-Z");
            return 0;
        });
        o.compat_hq = check_weak_compatibility(sc().space, sc().h, sc().Q, o.hq.points, flags_.tol);
        o.compat_hq.check_id = "weak-compatibility-h-Q";
        o.compat_ez = check_weak_compatibility(sc().space, sc().eta, sc().Z, o.ez.points, flags_.tol);
        o.compat_ez.check_id = "weak-compatibility-eta-Z";

        out_ << "coincidence points on " << g.to_string() << ":\n";
        json arr = json::array();
        for (const auto* set : {&o.hq, &o.ez}) {
            out_ << "  " << set->pair_id << ": {";
            for (std::size_t i = 0; i < set->points.size(); ++i) {
                out_ << (i ? ", " : "") << format_number(set->points[i]);
            }
            out_ << "}\n";
            arr.push_back({{"pair", set->pair_id}, {"points", nums(set->points)}, {"residuals", nums(set->residuals)}});
        }
        report_["coincidence"] = {{"grid", g.to_string()}, {"pairs", std::move(arr)}};
        add_check(o.compat_hq);
        add_check(o.compat_ez);
        return o;
    }

    UniquenessReport run_uniqueness() {
        const GridSpec g = file_.verification.uniqueness_grid.value_or(grid_);
        std::vector<double> xs;
        for (double x : g.points()) {
            if (sc().space.carrier.contains(x)) xs.push_back(x);
        }
        auto u = timed("uniqueness", [&] { return search_uniqueness(sc(), xs, flags_.tol); });
        json pts = json::array();
        out_ << "common fixed points on " << u.region << ": {";
        for (std::size_t i = 0; i < u.points.size(); ++i) {
            out_ << (i ? ", " : "") << format_number(u.points[i].point);
            pts.push_back({{"point", num(u.points[i].point)}, {"residuals", nums(u.points[i].residuals)}});
        }
        out_ << "}" << (u.multiple() ? " (more than one)" : "") << "\n";
        if (!u.warning.empty()) out_ << "  warning: " << u.warning << "\n";
        report_["uniqueness"] = {{"region", u.region}, {"points", std::move(pts)}, {"unique", u.unique()}};
        if (!u.warning.empty()) report_["uniqueness"]["warning"] = u.warning;
        return u;
    }

    void confirm(const std::string& id, const std::string& claim, bool ok) {
        out_ << "  [" << (ok ? "CONFIRMED" : "NOT CONFIRMED") << "] " << id << ": " << claim << "\n";
        confirmations_.push_back({{"id", id}, {"claim", claim}, {"confirmed", ok}});
        all_confirmed_ = all_confirmed_ && ok;
    }

    bool all_confirmed() const { return all_confirmed_; }

    std::string finish(int exit_code) {
        if (!confirmations_.empty()) report_["confirmations"] = confirmations_;
        if (flags_.timings) report_["timings_seconds"] = timings_;
        report_["exit_code"] = exit_code;
        return report_.dump(2) + "\n";
    }

private:
    const Flags& flags_;
    ScenarioFile file_;
    std::ostream& out_;
    GridSpec grid_;
    json report_;
    json timings_ = json::object();
    json confirmations_ = json::array();
    bool all_confirmed_ = true;
};

bool same_set(const std::vector<double>& found, const std::vector<double>& expected, double tol) {
    if (found.size() != expected.size()) return false;
    auto it = found.begin();
    for (double e : expected) {
        if (std::abs(*it++ - e) > tol) return false;
    }
    return true;
}

std::string set_text(const std::vector<double>& xs) {
    std::string s = "{";
    for (auto it = xs.begin(); it != xs.end(); ++it) s += (it == xs.begin() ? "" : ", ") + format_number(*it);
    return s + "}";
}

// What each bundled scenario is expected to show.
struct Expectation {
    std::string_view name;
    bool contraction_only = false;
    std::vector<double> coincidence_hq;
    std::vector<double> coincidence_ez;
    double fixed_point = 0.0;
};

const Expectation kExpectations[] = {
    {"example_2_2", true, {}, {}, 0.0},
    {"example_2_6", false, {0.0, 2.0}, {0.0}, 0.0},
    {"corollary_2_4_demo", false, {0.0}, {0.0}, 0.0},
    {"corollary_2_5_demo", false, {0.0}, {0.0}, 0.0},
};

int reproduce(Session& s, const Expectation& ex) {
    if (ex.contraction_only) {
        const bool ok = s.run_tac_only();
        s.out() << "confirmations:\n";
        s.confirm("contraction", "(h, eta) satisfies the contraction inequality on every gated grid pair", ok);
        return s.all_confirmed() ? kExitOk : kExitFailed;
    }
    const bool space_ok = s.run_space(false);
    const bool hyp_ok = s.run_hypotheses();
    const auto solved = s.run_solve();
    const auto co = s.run_coincidence();
    const auto u = s.run_uniqueness();

    constexpr double kSetTol = 1e-6;
    bool limits_ok = solved.all_converged && !solved.certificates.empty();
    for (const auto& c : solved.certificates) {
        limits_ok = limits_ok && c && c->certified && std::abs(c->point - ex.fixed_point) <= kSetTol;
    }
    s.out() << "confirmations:\n";
    s.confirm("space", "the distance satisfies the partial b-metric axioms on the samples", space_ok);
    s.confirm("hypotheses", "every existence hypothesis holds on the samples", hyp_ok);
    s.confirm("limit", "every start converges to the common fixed point " + format_number(ex.fixed_point), limits_ok);
    s.confirm("coincidence-h-Q", "P(h, Q) = " + set_text(ex.coincidence_hq),
              same_set(co.hq.points, ex.coincidence_hq, kSetTol));
    s.confirm("coincidence-eta-Z", "P(eta, Z) = " + set_text(ex.coincidence_ez),
              same_set(co.ez.points, ex.coincidence_ez, kSetTol));
    s.confirm("weak-compatibility", "both pairs commute at their coincidence points",
              co.compat_hq.verdict == Verdict::pass && co.compat_ez.verdict == Verdict::pass);
    s.confirm("uniqueness", "exactly one common fixed point on the search grid",
              u.unique() && std::abs(u.points.front().point - ex.fixed_point) <= kSetTol);
    return s.all_confirmed() ? kExitOk : kExitFailed;
}

bool write_report(const Flags& flags, const std::string& text, std::ostream& err) {
    if (flags.report_path.empty()) return true;
    std::ofstream f(flags.report_path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !f.flush()) {
        err << "error: cannot write report to " << flags.report_path << "\n";
        return false;
    }
    return true;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags flags;
    CLI::App app{"Partial b-metric contraction checks and fixed-point solver", std::string(kToolName)};
    app.require_subcommand(1);
    app.add_option("--scenario", flags.scenario, "Scenario file or bundled scenario name");
    app.add_option("--grid", flags.grid, "Verification grid lo:hi:step");
    app.add_option("--tol", flags.tol, "Comparison tolerance")->check(CLI::PositiveNumber);
    auto* iters = app.add_option("--max-iters", flags.max_iters, "Iteration cap for the solver");
    app.add_option("--seed", flags.seed, "Seed for random sample augmentation");
    app.add_option("--report", flags.report_path, "Write the JSON report here");
    app.add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--timings", flags.timings, "Include wall-clock timings in the report");

    auto* space = app.add_subcommand("check-space", "Check the partial b-metric axioms on samples");
    space->add_flag("--b-metric", flags.b_metric, "Also check the b-metric axioms");
    auto* classes = app.add_subcommand("check-classes", "Check xi, omega and H against their classes");
    auto* hyp = app.add_subcommand("check-hypotheses", "Check every existence hypothesis");
    auto* solve = app.add_subcommand("solve", "Run the iteration and certify common fixed points");
    solve->add_option("--v0", flags.v0, "Starting points (overrides the scenario)")->delimiter(',');
    auto* coin = app.add_subcommand("coincidence", "Locate coincidence points and test weak compatibility");
    std::string preset;
    auto* repro = app.add_subcommand("reproduce", "Run the full pipeline on a bundled scenario");
    repro->add_option("name", preset, "Bundled scenario name")->required();
    for (auto* sub : {space, classes, hyp, solve, coin, repro}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    flags.max_iters_given = iters->count() > 0;
    if (flags.max_iters_given && flags.max_iters == 0) {
        err << "error: --max-iters must be positive\n";
        return kExitUsage;
    }

    CLI::App* cmd = app.get_subcommands().front();
    std::string command = cmd->get_name();
    std::string source;
    const Expectation* expectation = nullptr;
    if (cmd == repro) {
        std::string key = preset;
        std::replace(key.begin(), key.end(), '-', '_');
        for (const auto& ex : kExpectations) {
            if (ex.name == key) expectation = &ex;
        }
        if (!expectation) {
            err << "error: unknown bundled scenario '" << preset << "'; known:";
            for (const auto& n : bundled_scenario_names()) err << " " << n;
            err << "\n";
            return kExitUsage;
        }
        source = preset;
        command += " " + preset;
    } else {
        if (flags.scenario.empty()) {
            err << "error: --scenario is required for " << command << "\n";
            return kExitUsage;
        }
        source = flags.scenario;
    }

    std::optional<Session> session;
    try {
        session.emplace(flags, load_scenario_source(source), source, command, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    Session& s = *session;
    int code = kExitFailed;
    try {
        out << command << " on " << s.sc().name << "\n";
        if (cmd == space) {
            code = s.run_space(flags.b_metric) ? kExitOk : kExitFailed;
        } else if (cmd == classes) {
            code = s.run_classes() ? kExitOk : kExitFailed;
        } else if (cmd == hyp) {
            code = s.run_hypotheses() ? kExitOk : kExitFailed;
        } else if (cmd == solve) {
            const auto o = s.run_solve();
            s.run_coincidence();
            s.run_uniqueness();
            code = o.any_certified ? kExitOk : kExitFailed;
        } else if (cmd == coin) {
            const auto o = s.run_coincidence();
            code = !o.hq.points.empty() && !o.ez.points.empty() && o.compat_hq.ok() && o.compat_ez.ok() ? kExitOk
                                                                                                          : kExitFailed;
        } else {
            code = reproduce(s, *expectation);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        s.report()["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
        const bool usage = e.code() == ErrorCode::empty_grid || e.code() == ErrorCode::empty_sample_set ||
                           e.code() == ErrorCode::invalid_argument;
        code = usage ? kExitUsage : kExitFailed;
    }
    out << "exit " << code << "\n";
    if (!write_report(flags, s.finish(code), err)) return kExitUsage;
    return code;
}

}  // namespace pbm

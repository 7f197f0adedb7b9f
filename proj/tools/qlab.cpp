// qlab: batch front end for the exact query-cost toolkit. Subcommands read
// JSON (a path or `-` for stdin), write a report to stdout, and exit 0 on
// success / all checks passing, 1 when a check fails, 2 on usage or format
// errors. Randomized subcommands require an explicit --seed.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlab/bin.hpp"
#include "qlab/cost_table.hpp"
#include "qlab/depth_engine.hpp"
#include "qlab/ecf.hpp"
#include "qlab/rational.hpp"
#include "qlab/search_problem.hpp"
#include "qlab/set_system.hpp"
#include "qlab/synthesis.hpp"
#include "qlab/truth_table.hpp"

namespace {

using nlohmann::json;

json read_input(const std::string& path) {
    if (path == "-") return json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return json::parse(in);
}

struct Output {
    bool as_json = false;

    void emit(const json& j, const std::string& text) const {
        if (as_json)
            std::cout << j.dump(2) << "\n";
        else
            std::cout << text;
    }
};

std::string selector_string(std::uint32_t select, int l) {
    std::string s;
    for (int i = 0; i < l; ++i) s.push_back((select >> i) & 1u ? '1' : '0');
    return s;
}

std::uint32_t parse_selector(const std::string& s, int l) {
    if (static_cast<int>(s.size()) != l)
        throw std::invalid_argument("selector must have exactly " + std::to_string(l) + " bits");
    std::uint32_t select = 0;
    for (int i = 0; i < l; ++i) {
        if (s[i] == '1') select |= 1u << i;
        else if (s[i] != '0') throw std::invalid_argument("selector must be over '01'");
    }
    return select;
}

json ecf_report_json(const qlab::EcfReport& report) {
    json out;
    out["pass"] = report.pass();
    out["violations"] = json::array();
    for (const auto& v : report.violations)
        out["violations"].push_back(
            {{"axiom", v.axiom}, {"X", v.x}, {"Y", v.y}, {"detail", v.detail}});
    return out;
}

std::string ecf_report_text(const qlab::EcfReport& report, int l) {
    if (report.pass()) return "axioms (1)(2)(3): pass\n";
    std::ostringstream os;
    for (const auto& v : report.violations) {
        os << "axiom " << (v.axiom == "zero" ? "(1)" : v.axiom == "monotone" ? "(2)" : "(3)")
           << " " << v.axiom << " violated: " << v.detail << " (witness X="
           << selector_string(v.x, l);
        if (v.axiom != "zero") os << ", Y=" << selector_string(v.y, l);
        os << ")\n";
    }
    return os.str();
}

int cmd_ecf_validate(const Output& out, const std::string& path) {
    qlab::CostTable table = qlab::CostTable::from_json(read_input(path));
    qlab::EcfReport report = qlab::validate_ecf(table);
    out.emit(ecf_report_json(report), ecf_report_text(report, table.l));
    return report.pass() ? 0 : 1;
}

int cmd_ecf_random(const Output& out, int l, std::int64_t max_value, std::uint64_t seed) {
    qlab::CostTable table = qlab::random_ecf(l, max_value, seed);
    out.emit(table.to_json(), table.to_json().dump(2) + "\n");
    return 0;
}

int cmd_ecf_cstar(const Output& out) {
    qlab::CostTable table = qlab::cstar();
    out.emit(table.to_json(), table.to_json().dump(2) + "\n");
    return 0;
}

int cmd_ecf_realize(const Output& out, const std::string& path) {
    qlab::CostTable table = qlab::CostTable::from_json(read_input(path));
    qlab::WeightedSetSystem system = qlab::realize_ecf(table);
    out.emit(system.to_json(), system.to_json().dump(2) + "\n");
    return 0;
}

int cmd_hs_solve(const Output& out, const std::string& path, const std::string& selector) {
    qlab::WeightedSetSystem system = qlab::WeightedSetSystem::from_json(read_input(path));
    std::uint32_t select = parse_selector(selector, system.set_count());
    qlab::HittingSetResult result = qlab::min_hitting_set(system, select);
    json ids = json::array();
    std::ostringstream text;
    text << "minimum hitting set for X=" << selector << ": weight " << result.weight << ", {";
    for (std::size_t i = 0; i < result.elements.size(); ++i) {
        ids.push_back(system.element(result.elements[i]).id);
        text << (i ? ", " : "") << system.element(result.elements[i]).id;
    }
    text << "}\n";
    out.emit({{"X", selector}, {"weight", result.weight}, {"elements", ids}}, text.str());
    return 0;
}

int cmd_hs_table(const Output& out, const std::string& path) {
    qlab::WeightedSetSystem system = qlab::WeightedSetSystem::from_json(read_input(path));
    qlab::CostTable table = qlab::hs_cost_table(system);
    out.emit(table.to_json(), table.to_json().dump(2) + "\n");
    return 0;
}

int cmd_dt_depth(const Output& out, const std::string& path, int cap) {
    qlab::TruthTable f = qlab::TruthTable::from_json(read_input(path));
    int d = qlab::depth(f, cap);
    out.emit({{"depth", d}}, "depth: " + std::to_string(d) + "\n");
    return 0;
}

int cmd_dt_cost_table(const Output& out, const std::string& path, int cap) {
    qlab::FunctionFamily family = qlab::FunctionFamily::from_json(read_input(path));
    qlab::CostTable table = qlab::multitask_cost(family, cap);
    out.emit(table.to_json(), table.to_json().dump(2) + "\n");
    return 0;
}

int cmd_dt_tree(const Output& out, const std::string& path, int cap) {
    qlab::TruthTable f = qlab::TruthTable::from_json(read_input(path));
    qlab::DecisionTree tree = qlab::optimal_tree(f, cap);
    out.emit(tree.to_json(), tree.to_json().dump(2) + "\n");
    return 0;
}

int cmd_tusp_classify(const Output& out, const std::string& path) {
    qlab::SearchProblem problem = qlab::SearchProblem::from_json(read_input(path));
    qlab::Classification c = qlab::classify(problem);
    json j{{"total", c.total}, {"unique", c.unique}};
    std::ostringstream text;
    text << "total: " << (c.total ? "yes" : "no");
    if (c.not_total_at) {
        j["not_total_at"] = *c.not_total_at;
        text << " (no witness at x=" << *c.not_total_at << ")";
    }
    text << "\nunique: " << (c.unique ? "yes" : "no");
    if (c.not_unique_at) {
        j["not_unique_at"] = *c.not_unique_at;
        text << " (two witnesses at x=" << *c.not_unique_at << ")";
    }
    text << "\n";
    out.emit(j, text.str());
    return 0;
}

int cmd_tusp_depth(const Output& out, const std::string& path) {
    qlab::SearchProblem problem = qlab::SearchProblem::from_json(read_input(path));
    int s = qlab::s_of(problem);
    int d = qlab::depth_tusp(problem);
    out.emit({{"depth", d}, {"s", s}},
             "depth: " + std::to_string(d) + "  (s = " + std::to_string(s) + ")\n");
    return 0;
}

int cmd_tusp_solve(const Output& out, const std::string& path) {
    qlab::SearchProblem problem = qlab::SearchProblem::from_json(read_input(path));
    qlab::PhaseReport report = qlab::solve_quadratic_measure(problem);
    json j{{"max_queries", report.max_queries},
           {"s", report.s},
           {"bound", report.s * report.s},
           {"all_correct", report.all_correct}};
    std::ostringstream text;
    text << "phase solver: max queries " << report.max_queries << " over all inputs, s = "
         << report.s << ", bound s^2 = " << report.s * report.s
         << (report.all_correct ? ", all outputs correct" : ", OUTPUT MISMATCH") << "\n";
    out.emit(j, text.str());
    return report.all_correct && report.max_queries <= report.s * report.s ? 0 : 1;
}

int cmd_tusp_from_udnf(const Output& out, const std::string& path) {
    json j = read_input(path);
    qlab::SearchProblem problem =
        qlab::udnf_to_tusp(qlab::Dnf::from_json(j.at("f1")), qlab::Dnf::from_json(j.at("f2")),
                           j.at("n").get<int>());
    out.emit(problem.to_json(), problem.to_json().dump(2) + "\n");
    return 0;
}

int cmd_tusp_find_gap(const Output& out, int n, std::uint64_t seed, int budget) {
    qlab::GapSearchResult result = qlab::find_gap_tusp(n, seed, budget);
    json j{{"trials", result.trials}, {"found", result.best.has_value()}};
    std::ostringstream text;
    if (result.best) {
        j["depth"] = result.best_depth;
        j["s"] = result.best_s;
        j["problem"] = result.best->to_json();
        text << "found depth " << result.best_depth << " > s " << result.best_s << " after "
             << result.trials << " trials\n";
    } else {
        text << "no depth > s instance found in " << result.trials << " trials\n";
    }
    out.emit(j, text.str());
    return 0;
}

int cmd_werf_random(const Output& out, int m, int d, int t, std::uint64_t seed, int max_tries) {
    qlab::WerfSample sample = qlab::random_werf(m, d, t, seed, max_tries);
    std::cerr << "sampled in " << sample.tries << " tries; per-(set,value) failure chance "
              << "(1-1/d)^(2^(m-t)) = " << sample.per_pair_failure << "\n";
    out.emit(sample.werf.to_json(), sample.werf.to_json().dump(2) + "\n");
    return 0;
}

int cmd_werf_verify(const Output& out, const std::string& path, int t) {
    qlab::Werf werf = qlab::Werf::from_json(read_input(path));
    qlab::WerfCheck check = qlab::verify_werf(werf, t);
    json j{{"ok", check.ok}, {"t", t}};
    std::ostringstream text;
    if (check.ok) {
        text << "resilient for all coordinate sets of size <= " << t << "\n";
    } else {
        j["failing_value"] = check.failing_value;
        j["failing_set"] = check.failing_set;
        text << "fails: value " << check.failing_value
             << " unreachable with zeros on coordinate mask " << check.failing_set << "\n";
    }
    out.emit(j, text.str());
    return check.ok ? 0 : 1;
}

int cmd_bin_build(const Output& out, const std::string& path) {
    json j = read_input(path);
    qlab::BinPtr bin =
        qlab::build_mystery_bin(qlab::SearchProblem::from_json(j.at("tusp")),
                                qlab::Werf::from_json(j.at("werf")), j.at("M").get<int>());
    out.emit(bin->to_json(), bin->to_json().dump(2) + "\n");
    return 0;
}

int cmd_bin_certify(const Output& out, const std::string& path, int budget,
                    const std::string& delta_text) {
    qlab::BinPtr bin = qlab::bin_from_json(read_input(path));
    qlab::Rational delta = qlab::Rational::parse(delta_text);
    qlab::MbfReport report = qlab::certify_mbf(bin, budget, delta);
    json checks = json::array();
    std::ostringstream text;
    for (const auto& c : report.checks) {
        checks.push_back(
            {{"label", c.label}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
        text << c.label << ": " << c.measured << " " << c.bound << " -> "
             << (c.pass ? "pass" : "FAIL") << "\n";
    }
    out.emit({{"pass", report.pass()}, {"checks", checks}}, text.str());
    return report.pass() ? 0 : 1;
}

int cmd_bin_security(const Output& out, const std::string& path, int q) {
    qlab::BinPtr bin = qlab::bin_from_json(read_input(path));
    qlab::SecurityResult result = qlab::security(bin, q);
    out.emit({{"q", q}, {"beta", result.beta.str()}},
             "security at q=" + std::to_string(q) + ": " + result.beta.str() + "\n");
    return 0;
}

int cmd_bin_lift(const Output& out, const std::string& path, int factor) {
    qlab::BinPtr bin = qlab::xor_lift(qlab::bin_from_json(read_input(path)), factor);
    // Keep lifted table bins in table form when small enough to enumerate.
    if (bin->arity() <= 16 && bin->kind() == "lifted") {
        std::vector<std::uint32_t> contents(std::size_t(1) << bin->arity());
        for (std::uint64_t y = 0; y < contents.size(); ++y) contents[y] = bin->contents(y);
        bool base_is_table =
            dynamic_cast<const qlab::TableBin*>(
                dynamic_cast<const qlab::LiftedBin*>(bin.get())->base().get()) != nullptr;
        if (base_is_table)
            bin = qlab::make_table_bin(bin->arity(), bin->key_count(), std::move(contents));
    }
    out.emit(bin->to_json(), bin->to_json().dump(2) + "\n");
    return 0;
}

int cmd_synth_build(const Output& out, const std::string& path) {
    qlab::SynthesisSpec spec = qlab::SynthesisSpec::from_json(read_input(path));
    qlab::FunctionFamily family = qlab::build_family(spec);
    out.emit(family.to_json(), family.to_json().dump(2) + "\n");
    return 0;
}

int cmd_synth_solve(const Output& out, const std::string& path, const std::string& selector) {
    qlab::SynthesisSpec spec = qlab::SynthesisSpec::from_json(read_input(path));
    std::uint32_t select = parse_selector(selector, spec.system().set_count());
    qlab::TwoPhaseReport report = qlab::measure_two_phase(spec, select);
    json j{{"X", selector},
           {"worst_queries", report.worst_queries},
           {"outputs_correct", report.outputs_correct}};
    std::ostringstream text;
    text << "two-phase solver on X=" << selector << ": worst case " << report.worst_queries
         << " queries, outputs " << (report.outputs_correct ? "correct" : "WRONG") << "\n";
    out.emit(j, text.str());
    return report.outputs_correct ? 0 : 1;
}

int cmd_synth_verify(const Output& out, const std::string& path, std::int64_t scale,
                     const std::string& eps_text, const std::vector<int>& budgets) {
    qlab::SynthesisSpec spec = qlab::SynthesisSpec::from_json(read_input(path));
    qlab::SandwichReport report =
        qlab::verify_sandwich(spec, scale, budgets, qlab::Rational::parse(eps_text));
    out.emit(report.to_json(), report.to_text());
    bool pass = report.all_upper_ok() && report.ecf_ok && report.all_covered_games_ok();
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact decision-tree multitask costs, hitting sets, and bin games"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Output out;
    int threads = 1;
    app.add_flag("--json", out.as_json, "emit machine-readable JSON reports");
    app.add_option("--threads", threads, "worker count (runs serially; must be >= 1)")
        ->check(CLI::PositiveNumber);

    std::string in_path;
    std::string selector, delta_text = "0.5", eps_text = "1";
    int l = 3, n = 4, t = 1, q = 0, factor = 1, budget_opt = 1, max_tries = 64, m = 4, d = 2;
    int cap = qlab::kDefaultDepthCap;
    std::int64_t max_value = 8, scale = 1;
    std::uint64_t seed = 0;
    std::vector<int> budgets;
    int search_budget = 1000;

    // ecf
    auto* ecf = app.add_subcommand("ecf", "cost-function axioms and realizations");
    ecf->require_subcommand(1);
    auto* ecf_validate = ecf->add_subcommand("validate", "check the three axioms");
    ecf_validate->add_option("input", in_path, "cost table JSON (- for stdin)")->required();
    auto* ecf_random = ecf->add_subcommand("random", "sample a valid cost table");
    ecf_random->add_option("--l", l, "number of goods")->required();
    ecf_random->add_option("--max-value", max_value, "largest initial entry");
    ecf_random->add_option("--seed", seed, "RNG seed")->required();
    auto* ecf_cstar = ecf->add_subcommand("cstar", "the 3-good 0/1/1/2 example table");
    auto* ecf_realize = ecf->add_subcommand("realize", "weighted set system matching a table");
    ecf_realize->add_option("input", in_path, "cost table JSON")->required();

    // hs
    auto* hs = app.add_subcommand("hs", "weighted hitting sets");
    hs->require_subcommand(1);
    auto* hs_solve = hs->add_subcommand("solve", "minimum hitting set for chosen sets");
    hs_solve->add_option("input", in_path, "set system JSON")->required();
    hs_solve->add_option("--x", selector, "selector bits, X_1 first")->required();
    auto* hs_table = hs->add_subcommand("table", "hitting cost for every selector");
    hs_table->add_option("input", in_path, "set system JSON")->required();

    // dt
    auto* dt = app.add_subcommand("dt", "exact decision-tree depth");
    dt->require_subcommand(1);
    auto* dt_depth = dt->add_subcommand("depth", "worst-case query depth");
    dt_depth->add_option("input", in_path, "truth table JSON")->required();
    dt_depth->add_option("--cap", cap, "engine arity cap");
    auto* dt_cost = dt->add_subcommand("cost-table", "joint depth of every subfamily");
    dt_cost->add_option("input", in_path, "function family JSON")->required();
    dt_cost->add_option("--cap", cap, "engine arity cap");
    auto* dt_tree = dt->add_subcommand("tree", "a minimum-depth tree");
    dt_tree->add_option("input", in_path, "truth table JSON")->required();
    dt_tree->add_option("--cap", cap, "engine arity cap");

    // tusp
    auto* tusp = app.add_subcommand("tusp", "search problems over {0,1,*} witnesses");
    tusp->require_subcommand(1);
    auto* tusp_classify = tusp->add_subcommand("classify", "totality and uniqueness");
    tusp_classify->add_option("input", in_path, "search problem JSON")->required();
    auto* tusp_depth = tusp->add_subcommand("depth", "exact solving depth");
    tusp_depth->add_option("input", in_path, "search problem JSON")->required();
    auto* tusp_solve = tusp->add_subcommand("solve", "run the phase solver on all inputs");
    tusp_solve->add_option("input", in_path, "search problem JSON")->required();
    auto* tusp_udnf = tusp->add_subcommand("from-udnf", "witnesses from a DNF pair");
    tusp_udnf->add_option("input", in_path, "{n, f1, f2} JSON")->required();
    auto* tusp_gap = tusp->add_subcommand("find-gap", "search for depth > s");
    tusp_gap->add_option("--n", n, "arity")->required();
    tusp_gap->add_option("--seed", seed, "RNG seed")->required();
    tusp_gap->add_option("--budget", search_budget, "number of trials");

    // werf
    auto* werf = app.add_subcommand("werf", "exposure-resilient encoders");
    werf->require_subcommand(1);
    auto* werf_random = werf->add_subcommand("random", "sample-and-verify an encoder");
    werf_random->add_option("--m", m, "input bits")->required();
    werf_random->add_option("--d", d, "range size")->required();
    werf_random->add_option("--t", t, "resilience")->required();
    werf_random->add_option("--seed", seed, "RNG seed")->required();
    werf_random->add_option("--max-tries", max_tries, "rejection limit");
    auto* werf_verify = werf->add_subcommand("verify", "check resilience exhaustively");
    werf_verify->add_option("input", in_path, "encoder JSON")->required();
    werf_verify->add_option("--t", t, "resilience to check")->required();

    // bin
    auto* bin = app.add_subcommand("bin", "key bins and the hiding game");
    bin->require_subcommand(1);
    auto* bin_build = bin->add_subcommand("build", "structured bin from {tusp, werf, M}");
    bin_build->add_option("input", in_path, "construction JSON")->required();
    auto* bin_certify = bin->add_subcommand("certify", "check the three bin properties");
    bin_certify->add_option("input", in_path, "bin JSON")->required();
    bin_certify->add_option("--T", budget_opt, "contents query budget")->required();
    bin_certify->add_option("--delta", delta_text, "fraction delta (e.g. 0.25 or 1/4)")
        ->required();
    auto* bin_security = bin->add_subcommand("security", "exact hiding-game value");
    bin_security->add_option("input", in_path, "bin JSON")->required();
    bin_security->add_option("--q", q, "number of queries")->required();
    auto* bin_lift = bin->add_subcommand("lift", "blockwise-parity stretch");
    bin_lift->add_option("input", in_path, "bin JSON")->required();
    bin_lift->add_option("--c", factor, "stretch factor")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "families built from set systems and bins");
    synth->require_subcommand(1);
    auto* synth_build = synth->add_subcommand("build", "materialize the function family");
    synth_build->add_option("input", in_path, "synthesis spec JSON")->required();
    auto* synth_solve = synth->add_subcommand("solve", "measure the two-phase solver");
    synth_solve->add_option("input", in_path, "synthesis spec JSON")->required();
    synth_solve->add_option("--x", selector, "selector bits, X_1 first")->required();
    auto* synth_verify = synth->add_subcommand("verify", "exact sandwich report");
    synth_verify->add_option("input", in_path, "synthesis spec JSON")->required();
    synth_verify->add_option("--T", scale, "band scale")->required();
    synth_verify->add_option("--eps", eps_text, "band tolerance (e.g. 0.5)")->required();
    synth_verify->add_option("--budgets", budgets, "per-element budgets (default: measured)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ecf_validate) return cmd_ecf_validate(out, in_path);
        if (*ecf_random) return cmd_ecf_random(out, l, max_value, seed);
        if (*ecf_cstar) return cmd_ecf_cstar(out);
        if (*ecf_realize) return cmd_ecf_realize(out, in_path);
        if (*hs_solve) return cmd_hs_solve(out, in_path, selector);
        if (*hs_table) return cmd_hs_table(out, in_path);
        if (*dt_depth) return cmd_dt_depth(out, in_path, cap);
        if (*dt_cost) return cmd_dt_cost_table(out, in_path, cap);
        if (*dt_tree) return cmd_dt_tree(out, in_path, cap);
        if (*tusp_classify) return cmd_tusp_classify(out, in_path);
        if (*tusp_depth) return cmd_tusp_depth(out, in_path);
        if (*tusp_solve) return cmd_tusp_solve(out, in_path);
        if (*tusp_udnf) return cmd_tusp_from_udnf(out, in_path);
        if (*tusp_gap) return cmd_tusp_find_gap(out, n, seed, search_budget);
        if (*werf_random) return cmd_werf_random(out, m, d, t, seed, max_tries);
        if (*werf_verify) return cmd_werf_verify(out, in_path, t);
        if (*bin_build) return cmd_bin_build(out, in_path);
        if (*bin_certify) return cmd_bin_certify(out, in_path, budget_opt, delta_text);
        if (*bin_security) return cmd_bin_security(out, in_path, q);
        if (*bin_lift) return cmd_bin_lift(out, in_path, factor);
        if (*synth_build) return cmd_synth_build(out, in_path);
        if (*synth_solve) return cmd_synth_solve(out, in_path, selector);
        if (*synth_verify) return cmd_synth_verify(out, in_path, scale, eps_text, budgets);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

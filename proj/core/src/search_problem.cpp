#include "qlab/search_problem.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "qlab/rng.hpp"

namespace qlab {

Witness::Witness(std::string pattern) : pattern_(std::move(pattern)) {
    if (pattern_.empty() || pattern_.size() > 24)
        throw std::invalid_argument("Witness: pattern length must be in [1, 24]");
    n_ = static_cast<int>(pattern_.size());
    mask_ = bits_ = 0;
    for (int p = 0; p < n_; ++p) {
        char c = pattern_[p];
        if (c == '0' || c == '1') {
            mask_ |= 1u << p;
            if (c == '1') bits_ |= 1u << p;
        } else if (c != '*') {
            throw std::invalid_argument("Witness: pattern must be over '01*'");
        }
    }
}

int Witness::fixed_count() const { return std::popcount(mask_); }

SearchProblem::SearchProblem(int n, std::vector<Witness> witnesses)
    : n_(n), witnesses_(std::move(witnesses)) {
    if (n < 1 || n > 24) throw std::invalid_argument("SearchProblem: arity out of range");
    std::set<std::string> seen;
    for (const Witness& w : witnesses_) {
        if (w.length() != n_)
            throw std::invalid_argument("SearchProblem: witness length mismatch");
        if (!seen.insert(w.pattern()).second)
            throw std::invalid_argument("SearchProblem: duplicate witness '" + w.pattern() + "'");
    }
}

SearchProblem SearchProblem::from_patterns(int n, const std::vector<std::string>& patterns) {
    std::vector<Witness> ws;
    ws.reserve(patterns.size());
    for (const std::string& p : patterns) ws.emplace_back(p);
    return SearchProblem(n, std::move(ws));
}

nlohmann::json SearchProblem::to_json() const {
    nlohmann::json ws = nlohmann::json::array();
    for (const Witness& w : witnesses_) ws.push_back(w.pattern());
    return {{"n", n_}, {"witnesses", ws}};
}

SearchProblem SearchProblem::from_json(const nlohmann::json& j) {
    return from_patterns(j.at("n").get<int>(),
                         j.at("witnesses").get<std::vector<std::string>>());
}

Classification classify(const SearchProblem& problem) {
    if (problem.arity() > 20) throw std::invalid_argument("classify: arity above 20");
    Classification c;
    c.total = c.unique = true;
    for (std::uint64_t x = 0; x < (1ull << problem.arity()); ++x) {
        int agreeing = 0;
        for (const Witness& w : problem.witnesses())
            if (w.agrees(x) && ++agreeing == 2) break;
        if (agreeing == 0 && c.total) {
            c.total = false;
            c.not_total_at = x;
        }
        if (agreeing >= 2 && c.unique) {
            c.unique = false;
            c.not_unique_at = x;
        }
        if (!c.total && !c.unique) break;
    }
    return c;
}

int s_of(const SearchProblem& problem) {
    if (problem.witness_count() == 0) throw std::invalid_argument("s_of: no witnesses");
    int s = 0;
    for (const Witness& w : problem.witnesses()) s = std::max(s, w.fixed_count());
    return s;
}

int tusp_eval(const SearchProblem& problem, std::uint64_t x) {
    int found = -1;
    for (int i = 0; i < problem.witness_count(); ++i) {
        if (!problem.witness(i).agrees(x)) continue;
        if (found >= 0)
            throw std::invalid_argument("tusp_eval: two witnesses agree at x=" +
                                        std::to_string(x));
        found = i;
    }
    if (found < 0)
        throw std::invalid_argument("tusp_eval: no witness agrees at x=" + std::to_string(x));
    return found;
}

TruthTable tusp_table(const SearchProblem& problem) {
    return TruthTable::from_eval(
        problem.arity(), static_cast<std::uint32_t>(problem.witness_count()),
        [&](std::uint64_t x) { return static_cast<std::uint32_t>(tusp_eval(problem, x)); });
}

namespace {

// Some witness is fully confirmed by the fixed bits: every one of its 0/1
// positions is fixed and matches. For a total unique problem this is
// exactly the condition under which all completions share one witness.
bool solved_state(const SearchProblem& problem, std::uint32_t mask, std::uint32_t bits) {
    for (const Witness& w : problem.witnesses()) {
        if ((w.fixed_mask() & ~mask) == 0 &&
            ((bits ^ w.fixed_bits()) & w.fixed_mask()) == 0)
            return true;
    }
    return false;
}

class TuspDepthSolver {
public:
    explicit TuspDepthSolver(const SearchProblem& problem) : problem_(problem) {}

    int depth(std::uint32_t mask, std::uint32_t bits) {
        if (solved_state(problem_, mask, bits)) return 0;
        std::uint64_t key = (std::uint64_t(mask) << 32) | bits;
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const std::uint32_t full = (1u << problem_.arity()) - 1;
        int best = problem_.arity() + 1;
        for (std::uint32_t m = full & ~mask; m != 0; m &= m - 1) {
            std::uint32_t q = m & (~m + 1);
            int d0 = depth(mask | q, bits);
            int d1 = depth(mask | q, bits | q);
            best = std::min(best, 1 + std::max(d0, d1));
            if (best == 1) break;
        }
        memo_.emplace(key, best);
        return best;
    }

private:
    const SearchProblem& problem_;
    std::unordered_map<std::uint64_t, int> memo_;
};

}  // namespace

int depth_tusp(const SearchProblem& problem) {
    if (problem.arity() > 14) throw std::invalid_argument("depth_tusp: arity above 14");
    Classification c = classify(problem);
    if (!c.tusp()) throw std::invalid_argument("depth_tusp: problem is not total and unique");
    return TuspDepthSolver(problem).depth(0, 0);
}

PhaseRun solve_quadratic_run(const SearchProblem& problem, const BitOracle& oracle) {
    const int n = problem.arity();
    std::uint32_t queried = 0, bits = 0;
    std::vector<char> live(problem.witness_count(), 1);
    PhaseRun run;

    auto query = [&](int p) {  // 0-based position
        int b = oracle(p + 1);
        queried |= 1u << p;
        if (b) bits |= 1u << p;
        ++run.queries;
        for (int i = 0; i < problem.witness_count(); ++i) {
            const Witness& w = problem.witness(i);
            if (live[i] && ((w.fixed_mask() >> p) & 1u) &&
                static_cast<int>((w.fixed_bits() >> p) & 1u) != b)
                live[i] = 0;
        }
    };
    auto confirmed = [&]() -> std::optional<int> {
        for (int i = 0; i < problem.witness_count(); ++i)
            if (live[i] && (problem.witness(i).fixed_mask() & ~queried) == 0) return i;
        return std::nullopt;
    };

    for (int phase = 0; phase <= s_of(problem); ++phase) {
        if (auto w = confirmed()) {
            run.witness_index = w;
            return run;
        }
        // Most active coordinates first; ties go to listed order.
        int pick = -1, pick_active = -1;
        for (int i = 0; i < problem.witness_count(); ++i) {
            if (!live[i]) continue;
            int active = std::popcount(problem.witness(i).fixed_mask() & ~queried);
            if (active > pick_active) {
                pick = i;
                pick_active = active;
            }
        }
        if (pick < 0) return run;  // no live witness: no match
        std::uint32_t active = problem.witness(pick).fixed_mask() & ~queried;
        for (int p = 0; p < n; ++p)
            if ((active >> p) & 1u) query(p);
    }
    if (auto w = confirmed()) {
        run.witness_index = w;
        return run;
    }
    if (std::none_of(live.begin(), live.end(), [](char v) { return v; })) return run;
    throw std::logic_error("solve_quadratic: phases exhausted without an answer");
}

PhaseReport solve_quadratic_measure(const SearchProblem& problem) {
    if (problem.arity() > 16)
        throw std::invalid_argument("solve_quadratic_measure: arity above 16");
    Classification c = classify(problem);
    if (!c.unique)
        throw std::invalid_argument("solve_quadratic_measure: problem is not unique");
    PhaseReport report;
    report.s = s_of(problem);
    for (std::uint64_t x = 0; x < (1ull << problem.arity()); ++x) {
        PhaseRun run = solve_quadratic_run(
            problem, [&](int i) { return static_cast<int>((x >> (i - 1)) & 1u); });
        report.max_queries = std::max(report.max_queries, run.queries);
        bool has_witness = false;
        for (const Witness& w : problem.witnesses()) has_witness |= w.agrees(x);
        if (has_witness) {
            if (!run.witness_index || run.witness_index != tusp_eval(problem, x))
                report.all_correct = false;
        } else if (run.witness_index) {
            report.all_correct = false;
        }
    }
    return report;
}

bool Dnf::clause_satisfied(std::size_t c, std::uint64_t x) const {
    for (const DnfLiteral& lit : clauses[c]) {
        int v = static_cast<int>((x >> (lit.variable - 1)) & 1u);
        if (v == static_cast<int>(lit.negated)) return false;
    }
    return true;
}

int Dnf::satisfied_count(std::uint64_t x) const {
    int count = 0;
    for (std::size_t c = 0; c < clauses.size(); ++c)
        if (clause_satisfied(c, x)) ++count;
    return count;
}

nlohmann::json Dnf::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const DnfClause& clause : clauses) {
        nlohmann::json c = nlohmann::json::array();
        for (const DnfLiteral& lit : clause)
            c.push_back({{"v", lit.variable}, {"neg", lit.negated}});
        out.push_back(c);
    }
    return out;
}

Dnf Dnf::from_json(const nlohmann::json& j) {
    Dnf dnf;
    for (const auto& c : j) {
        DnfClause clause;
        for (const auto& lit : c)
            clause.push_back(DnfLiteral{lit.at("v").get<int>(), lit.at("neg").get<bool>()});
        dnf.clauses.push_back(std::move(clause));
    }
    return dnf;
}

namespace {

std::string clause_pattern(const DnfClause& clause, int n) {
    std::string pattern(static_cast<std::size_t>(n), '*');
    for (const DnfLiteral& lit : clause) {
        if (lit.variable < 1 || lit.variable > n)
            throw std::invalid_argument("udnf_to_tusp: literal variable out of range");
        char& slot = pattern[lit.variable - 1];
        if (slot != '*') throw std::invalid_argument("udnf_to_tusp: variable repeated in clause");
        slot = lit.negated ? '0' : '1';
    }
    return pattern;
}

}  // namespace

SearchProblem udnf_to_tusp(const Dnf& f_true, const Dnf& f_false, int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("udnf_to_tusp: arity out of range");
    for (const Dnf* f : {&f_true, &f_false})
        for (const DnfClause& c : f->clauses)
            if (c.empty()) throw std::invalid_argument("udnf_to_tusp: empty clause");
    for (std::uint64_t x = 0; x < (1ull << n); ++x) {
        int c1 = f_true.satisfied_count(x);
        int c2 = f_false.satisfied_count(x);
        if (c1 > 1)
            throw std::invalid_argument("udnf_to_tusp: first formula ambiguous at x=" +
                                        std::to_string(x));
        if (c2 > 1)
            throw std::invalid_argument("udnf_to_tusp: second formula ambiguous at x=" +
                                        std::to_string(x));
        if (c1 + c2 != 1)
            throw std::invalid_argument("udnf_to_tusp: formulas not complementary at x=" +
                                        std::to_string(x));
    }
    std::vector<std::string> patterns;
    for (const Dnf* f : {&f_true, &f_false})
        for (const DnfClause& c : f->clauses) patterns.push_back(clause_pattern(c, n));
    SearchProblem problem = SearchProblem::from_patterns(n, patterns);
    Classification c = classify(problem);
    if (!c.tusp()) throw std::logic_error("udnf_to_tusp: construction failed certification");
    return problem;
}

namespace {

// Greedy disjoint-cube cover of a point set: grow each uncovered point into
// a cube that stays inside the remaining set, freeing coordinates in a
// seeded random order. Cubes partition the set, so the cover is an
// unambiguous DNF of its indicator.
std::vector<std::string> disjoint_cover(const std::vector<char>& members, int n, Rng& rng) {
    std::vector<char> remaining = members;
    std::vector<std::string> patterns;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (std::uint64_t x = 0; x < remaining.size(); ++x) {
        if (!remaining[x]) continue;
        std::uint32_t mask = (1u << n) - 1;  // fixed positions of the cube
        for (int i = n - 1; i > 0; --i)
            std::swap(order[i], order[rng.below(std::uint64_t(i) + 1)]);
        for (int p : order) {
            std::uint32_t candidate = mask & ~(1u << p);
            // The doubled cube must lie inside the remaining set.
            std::uint32_t free_mask = ~candidate & ((1u << n) - 1);
            std::uint64_t sub = 0;
            bool ok = true;
            do {
                std::uint64_t y = (x & candidate) | sub;
                if (!remaining[y]) { ok = false; break; }
                sub = (sub - free_mask) & free_mask;
            } while (sub != 0);
            if (ok) mask = candidate;
        }
        std::string pattern(static_cast<std::size_t>(n), '*');
        std::uint64_t sub = 0;
        std::uint32_t free_mask = ~mask & ((1u << n) - 1);
        do {
            remaining[(x & mask) | sub] = 0;
            sub = (sub - free_mask) & free_mask;
        } while (sub != 0);
        for (int p = 0; p < n; ++p)
            if ((mask >> p) & 1u) pattern[p] = (x >> p) & 1u ? '1' : '0';
        patterns.push_back(std::move(pattern));
    }
    return patterns;
}

}  // namespace

GapSearchResult find_gap_tusp(int n, std::uint64_t seed, int budget) {
    if (n < 1 || n > 12) throw std::invalid_argument("find_gap_tusp: arity out of range");
    Rng rng(seed);
    GapSearchResult result;
    for (int trial = 0; trial < budget; ++trial) {
        ++result.trials;
        std::vector<char> on(std::size_t(1) << n, 0);
        bool any0 = false, any1 = false;
        for (auto& v : on) {
            v = static_cast<char>(rng.bit());
            if (v) any1 = true; else any0 = true;
        }
        if (!any0 || !any1) continue;
        std::vector<char> off(on.size());
        for (std::size_t i = 0; i < on.size(); ++i) off[i] = !on[i];
        std::vector<std::string> patterns = disjoint_cover(on, n, rng);
        std::vector<std::string> complement = disjoint_cover(off, n, rng);
        patterns.insert(patterns.end(), complement.begin(), complement.end());
        SearchProblem problem = SearchProblem::from_patterns(n, patterns);
        int s = s_of(problem);
        int d = depth_tusp(problem);
        if (d > s && (!result.best || d - s > result.best_depth - result.best_s)) {
            result.best = problem;
            result.best_depth = d;
            result.best_s = s;
        }
    }
    return result;
}

}  // namespace qlab

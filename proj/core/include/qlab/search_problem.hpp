#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlab/truth_table.hpp"

namespace qlab {

// A pattern over {0,1,*}; position p (0-based) constrains variable x_{p+1}.
class Witness {
public:
    explicit Witness(std::string pattern);

    int length() const { return n_; }
    const std::string& pattern() const { return pattern_; }
    std::uint32_t fixed_mask() const { return mask_; }
    std::uint32_t fixed_bits() const { return bits_; }
    int fixed_count() const;

    bool agrees(std::uint64_t x) const {
        return ((static_cast<std::uint32_t>(x) ^ bits_) & mask_) == 0;
    }

    friend bool operator==(const Witness& a, const Witness& b) {
        return a.pattern_ == b.pattern_;
    }

private:
    std::string pattern_;
    int n_;
    std::uint32_t mask_;
    std::uint32_t bits_;
};

// A search problem: find a witness agreeing with the hidden input.
class SearchProblem {
public:
    SearchProblem(int n, std::vector<Witness> witnesses);
    static SearchProblem from_patterns(int n, const std::vector<std::string>& patterns);

    int arity() const { return n_; }
    int witness_count() const { return static_cast<int>(witnesses_.size()); }
    const Witness& witness(int i) const { return witnesses_[i]; }
    const std::vector<Witness>& witnesses() const { return witnesses_; }

    nlohmann::json to_json() const;
    static SearchProblem from_json(const nlohmann::json& j);

private:
    int n_;
    std::vector<Witness> witnesses_;
};

struct Classification {
    bool total = false;
    bool unique = false;
    std::optional<std::uint64_t> not_total_at;   // an input with no witness
    std::optional<std::uint64_t> not_unique_at;  // an input with two witnesses
    bool tusp() const { return total && unique; }
};

// Exhaustive over all 2^n inputs; n <= 20.
Classification classify(const SearchProblem& problem);

// Maximum number of 0/1 entries over the witnesses.
int s_of(const SearchProblem& problem);

// Index of the single witness agreeing with x. Checks totality and
// uniqueness at x itself.
int tusp_eval(const SearchProblem& problem, std::uint64_t x);

// x -> witness index, as a table; alphabet = witness count.
TruthTable tusp_table(const SearchProblem& problem);

// Exact minimum solving depth for a total unique problem: minimax over
// partial assignments, where an assignment is solved once it confirms every
// fixed entry of some witness. n <= 14.
int depth_tusp(const SearchProblem& problem);

using BitOracle = std::function<int(int)>;  // answers x_i for 1-based i

// Result of running the phase solver against one input oracle.
struct PhaseRun {
    std::optional<int> witness_index;
    int queries = 0;
};

// Phase algorithm for unique search problems: repeatedly pick the live
// witness with the most still-unqueried fixed coordinates (ties: listed
// order) and query all of them. Needs at most s + (s-1) + ... + 1 queries.
PhaseRun solve_quadratic_run(const SearchProblem& problem, const BitOracle& oracle);

struct PhaseReport {
    int max_queries = 0;
    bool all_correct = true;
    int s = 0;
};

// Runs the phase solver against every input and checks it against
// tusp_eval; n <= 16.
PhaseReport solve_quadratic_measure(const SearchProblem& problem);

struct DnfLiteral {
    int variable;  // 1-based
    bool negated = false;
};
using DnfClause = std::vector<DnfLiteral>;

struct Dnf {
    std::vector<DnfClause> clauses;

    bool clause_satisfied(std::size_t c, std::uint64_t x) const;
    int satisfied_count(std::uint64_t x) const;

    nlohmann::json to_json() const;
    static Dnf from_json(const nlohmann::json& j);
};

// Builds the search problem whose witnesses are the clause patterns of the
// two formulas. Verifies exhaustively that each formula is unambiguous and
// that every input satisfies exactly one of the two; the result is
// certified total and unique before returning. n <= 16.
SearchProblem udnf_to_tusp(const Dnf& f_true, const Dnf& f_false, int n);

struct GapSearchResult {
    std::optional<SearchProblem> best;  // only set when depth > s was found
    int best_depth = 0;
    int best_s = 0;
    int trials = 0;
};

// Randomized search for a total unique problem with solving depth strictly
// above s, over disjoint-cube covers of random functions and their
// complements. Finding nothing within the budget is a valid outcome.
// n <= 12.
GapSearchResult find_gap_tusp(int n, std::uint64_t seed, int budget);

}  // namespace qlab

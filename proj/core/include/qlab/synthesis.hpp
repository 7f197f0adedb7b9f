#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlab/bin.hpp"
#include "qlab/cost_table.hpp"
#include "qlab/depth_engine.hpp"
#include "qlab/rational.hpp"
#include "qlab/set_system.hpp"

namespace qlab {

// A weighted set system with one bin per universe element, all sharing the
// keyspace [1, M]. The joint input is the concatenation of the per-element
// blocks in universe order.
class SynthesisSpec {
public:
    SynthesisSpec(WeightedSetSystem system, int key_count, std::vector<BinPtr> bins);

    const WeightedSetSystem& system() const { return system_; }
    int key_count() const { return key_count_; }
    const BinPtr& bin(int u) const { return bins_[u]; }
    int element_count() const { return static_cast<int>(bins_.size()); }
    int block_offset(int u) const { return offsets_[u]; }
    int total_arity() const { return total_arity_; }
    std::uint64_t block_of(std::uint64_t x, int u) const {
        return (x >> offsets_[u]) & ((1ull << bins_[u]->arity()) - 1);
    }

    nlohmann::json to_json() const;
    static SynthesisSpec from_json(const nlohmann::json& j);

private:
    WeightedSetSystem system_;
    int key_count_;
    std::vector<BinPtr> bins_;
    std::vector<int> offsets_;
    int total_arity_;
};

// bin_u = xor_lift(base, w(u)), so the block for u costs about w(u) times
// the base bin to read.
SynthesisSpec lift_bins_by_weight(BinPtr base, WeightedSetSystem system);

// Member i is 1 exactly when some key sits in every bin of A_i. Each member
// is materialized as a truth table (total arity <= 20) and must come out
// nonconstant.
FunctionFamily build_family(const SynthesisSpec& spec);

// Direct evaluation without materializing tables.
int eval_member(const SynthesisSpec& spec, int set_index, std::uint64_t x);

struct TwoPhaseRun {
    std::vector<int> outputs;  // values of the selected members, ascending index
    int queries = 0;
};

// Hitting-set-driven solver: read the bins of a minimum hitting set in
// full, then settle each selected member with membership probes, reusing
// any (element, key) verdict already obtained.
TwoPhaseRun two_phase_run(const SynthesisSpec& spec, std::uint32_t select,
                          const BitOracle& oracle);

struct TwoPhaseReport {
    int worst_queries = 0;
    bool outputs_correct = true;
};

// Runs the solver against every input; total arity <= 20.
TwoPhaseReport measure_two_phase(const SynthesisSpec& spec, std::uint32_t select);

// Routes each query to its block's adversary: the hiding-game optimal rule
// for plain bins, the zeros-until-critical block rule on top of the base
// rule for lifted ones. budgets[u] is the horizon through which bin u
// answers adversarially; past it the answers are 0.
std::shared_ptr<AdversaryStrategy> composite_adversary(const SynthesisSpec& spec,
                                                       const std::vector<int>& budgets);

struct SandwichRow {
    std::uint32_t select = 0;
    std::int64_t hitting_cost = 0;  // exact cost of the selected sets
    std::int64_t joint_cost = 0;    // exact joint query cost of the members
    int two_phase_depth = 0;
    bool upper_ok = false;  // joint_cost <= two_phase_depth
    bool band_ok = false;   // (1-eps)*scale*hitting <= joint <= (1+eps)*scale*hitting
    bool covered = false;   // per-bin guarantees clear the union-bound threshold
    bool game_ran = false;
    bool game_ok = false;
    std::string note;
};

struct SandwichReport {
    std::vector<SandwichRow> rows;     // one per nonzero selector
    std::vector<int> budgets;          // per element: full reading cost
    std::vector<int> thresholds;       // ceil((1 - eps/2) * budget): heavy-use cutoffs
    std::vector<int> guaranteed_keys;  // surviving keys while strictly under the cutoff
    std::int64_t scale = 0;
    Rational eps;
    bool ecf_ok = false;  // the joint cost table satisfies the axioms

    bool all_upper_ok() const;
    bool all_covered_games_ok() const;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

// Exact three-way comparison for every nonzero selector: the brute-force
// joint cost, the measured two-phase upper bound, the (1 +- eps) * scale
// band against the hitting cost, and -- for selectors whose per-bin
// adversary guarantees clear the union-bound threshold -- an exhaustive
// check that every (joint_cost - 1)-query strategy played against the
// composite adversary leaves some selected member undetermined whenever
// the over-budget elements fail to hit the selection. Selectors that are
// not covered, or whose game exceeds game_state_cap, are reported as such
// rather than silently passed.
SandwichReport verify_sandwich(const SynthesisSpec& spec, std::int64_t scale,
                               std::vector<int> budgets, const Rational& eps,
                               std::uint64_t game_state_cap = 4000000);

}  // namespace qlab

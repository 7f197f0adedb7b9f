#pragma once

#include <cstdint>
#include <memory>

#include "qlab/cost_table.hpp"
#include "qlab/decision_tree.hpp"
#include "qlab/truth_table.hpp"

namespace qlab {

// Default arity cap for the exact depth solver. The restriction lattice has
// 3^n states, so this is a cost knob, not a correctness bound.
inline constexpr int kDefaultDepthCap = 16;

// Exact worst-case query depth of one function, with the whole restriction
// lattice of f as the state space. States are addressed by their ternary
// code (digit p: 0 / 1 = x_{p+1} fixed, 2 = free), which makes the two
// children of a state the two smaller codes obtained by lowering one digit;
// results are filled lazily into flat arrays.
class DepthEngine {
public:
    explicit DepthEngine(TruthTable f, int cap = kDefaultDepthCap);

    const TruthTable& function() const { return f_; }

    int depth();

    // Minimum-depth tree for f; among equally good queries the smallest
    // index wins, so the output is deterministic.
    DecisionTree optimal_tree();

    // Depth of f under a partial assignment (mask bit p set = x_{p+1} fixed).
    int restricted_depth(std::uint32_t fixed_mask, std::uint32_t fixed_bits);
    bool restricted_constant(std::uint32_t fixed_mask, std::uint32_t fixed_bits);

private:
    static constexpr std::uint16_t kNonConstant = 0xFFFF;
    static constexpr std::uint16_t kUnsetValue = 0xFFFE;

    std::uint64_t code_of(std::uint32_t free_mask, std::uint32_t bits) const;
    std::uint16_t value_at(std::uint64_t code, std::uint32_t free_mask, std::uint32_t bits);
    int depth_at(std::uint64_t code, std::uint32_t free_mask, std::uint32_t bits);
    int build_tree(std::uint64_t code, std::uint32_t free_mask, std::uint32_t bits,
                   DecisionTree::Builder& builder);

    TruthTable f_;
    int n_;
    std::uint32_t full_mask_;
    std::vector<std::uint64_t> pow3_;
    std::vector<std::uint16_t> value_;  // constant value of the restricted fn, or sentinel
    std::vector<std::int8_t> depth_;    // -1 = not computed
};

int depth(const TruthTable& f, int cap = kDefaultDepthCap);
DecisionTree optimal_tree(const TruthTable& f, int cap = kDefaultDepthCap);

// values[X] = depth of the bundle selected by X; values[0] = 0. size() <= 8.
CostTable multitask_cost(const FunctionFamily& family, int cap = kDefaultDepthCap);

// Answer rule that keeps the restricted function as deep as possible: each
// query is answered with the bit maximizing the depth of the resulting
// restriction (ties answer 0). Requires depth(f) >= 1. Replaying any
// depth(f)-1 queries against it leaves f undetermined.
std::shared_ptr<AdversaryStrategy> extract_adversary(const TruthTable& f,
                                                     int cap = kDefaultDepthCap);

}  // namespace qlab

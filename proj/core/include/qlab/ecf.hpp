#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/cost_table.hpp"

namespace qlab {

// One axiom violation with a concrete witness selector pair. For the
// zero/positivity axiom only x is meaningful.
struct EcfViolation {
    std::string axiom;  // "zero", "monotone", "subadditive"
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::string detail;
};

struct EcfReport {
    std::vector<EcfViolation> violations;  // at most one per axiom
    bool pass() const { return violations.empty(); }
};

// Checks the three cost-function axioms on the full table:
//   (1) values >= 0 and values[X] = 0 exactly when X = 0,
//   (2) X <= Y (bitwise) implies values[X] <= values[Y],
//   (3) values[X|Y] <= values[X] + values[Y].
// l <= 12.
EcfReport validate_ecf(const CostTable& table);

// The l = 3 table 0 / 1 / 1 / 2 by Hamming weight of the selector.
CostTable cstar();

// Largest fixpoint below `table` under monotone + subadditive tightening,
// keeping values[0] = 0. Idempotent; the result always validates if the
// nonzero entries start >= 1.
CostTable ecf_closure(CostTable table);

// Seeded random valid table: nonzero entries drawn uniformly from
// [1, max_value], then closed. l <= 5, max_value <= 15.
CostTable random_ecf(int l, std::int64_t max_value, std::uint64_t seed);

}  // namespace qlab

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlab/cost_table.hpp"

namespace qlab {

struct UniverseElement {
    std::string id;
    std::int64_t weight = 1;  // >= 1
};

// A weighted universe with l nonempty subsets A_1..A_l.
class WeightedSetSystem {
public:
    WeightedSetSystem(std::vector<UniverseElement> universe,
                      std::vector<std::vector<int>> sets);

    int universe_size() const { return static_cast<int>(universe_.size()); }
    int set_count() const { return static_cast<int>(sets_.size()); }
    const UniverseElement& element(int e) const { return universe_[e]; }
    const std::vector<int>& set(int i) const { return sets_[i]; }  // sorted element indices
    std::int64_t weight(int e) const { return universe_[e].weight; }
    // Bitmask over sets covered when element e is picked.
    std::uint32_t covers(int e) const { return covers_[e]; }

    nlohmann::json to_json() const;
    static WeightedSetSystem from_json(const nlohmann::json& j);

private:
    std::vector<UniverseElement> universe_;
    std::vector<std::vector<int>> sets_;
    std::vector<std::uint32_t> covers_;
};

struct HittingSetResult {
    std::vector<int> elements;  // sorted
    std::int64_t weight = 0;
};

// Exact minimum-weight hitting sets for any subfamily of one system, by
// branch and bound on the mask of still-unhit sets (the subproblem depends
// on nothing else, so the mask doubles as the memo key). Ties resolve to
// the lexicographically smallest sorted element list, making results
// reproducible.
class HittingSetSolver {
public:
    explicit HittingSetSolver(const WeightedSetSystem& system);

    // select != 0 selects the sets that must be hit.
    HittingSetResult solve(std::uint32_t select);

private:
    struct Entry {
        std::int64_t weight;
        std::vector<int> elements;
    };
    const Entry& best(std::uint32_t unhit);

    const WeightedSetSystem& system_;
    std::vector<std::optional<Entry>> memo_;
};

HittingSetResult min_hitting_set(const WeightedSetSystem& system, std::uint32_t select);

// values[X] = minimum hitting weight for the sets selected by X; values[0]=0.
// set_count <= 8.
CostTable hs_cost_table(const WeightedSetSystem& system);

// The canonical system whose hitting costs reproduce a valid cost table
// exactly: one element b_X per nonzero selector X, weight C(X), with
// A_i = {b_X : X_i = 1}. Requires validate_ecf(table) to pass and l <= 8.
WeightedSetSystem realize_ecf(const CostTable& table);

}  // namespace qlab

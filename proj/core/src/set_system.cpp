#include "qlab/set_system.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "qlab/ecf.hpp"

namespace qlab {

WeightedSetSystem::WeightedSetSystem(std::vector<UniverseElement> universe,
                                     std::vector<std::vector<int>> sets)
    : universe_(std::move(universe)), sets_(std::move(sets)) {
    if (universe_.empty()) throw std::invalid_argument("WeightedSetSystem: empty universe");
    if (universe_.size() > 4096) throw std::invalid_argument("WeightedSetSystem: universe too large");
    if (sets_.empty() || sets_.size() > 16)
        throw std::invalid_argument("WeightedSetSystem: set count must be in [1, 16]");
    std::map<std::string, int> seen;
    for (std::size_t e = 0; e < universe_.size(); ++e) {
        if (universe_[e].weight < 1)
            throw std::invalid_argument("WeightedSetSystem: weights must be >= 1");
        if (!seen.emplace(universe_[e].id, int(e)).second)
            throw std::invalid_argument("WeightedSetSystem: duplicate element id '" +
                                        universe_[e].id + "'");
    }
    covers_.assign(universe_.size(), 0);
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        auto& s = sets_[i];
        if (s.empty())
            throw std::invalid_argument("WeightedSetSystem: set " + std::to_string(i + 1) +
                                        " is empty");
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (int e : s) {
            if (e < 0 || e >= universe_size())
                throw std::invalid_argument("WeightedSetSystem: element index out of range");
            covers_[e] |= 1u << i;
        }
    }
}

nlohmann::json WeightedSetSystem::to_json() const {
    nlohmann::json universe = nlohmann::json::array();
    for (const auto& u : universe_) universe.push_back({{"id", u.id}, {"w", u.weight}});
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& s : sets_) {
        nlohmann::json ids = nlohmann::json::array();
        for (int e : s) ids.push_back(universe_[e].id);
        sets.push_back(ids);
    }
    return {{"universe", universe}, {"sets", sets}};
}

WeightedSetSystem WeightedSetSystem::from_json(const nlohmann::json& j) {
    std::vector<UniverseElement> universe;
    std::map<std::string, int> index;
    for (const auto& u : j.at("universe")) {
        UniverseElement e{u.at("id").get<std::string>(), u.at("w").get<std::int64_t>()};
        index[e.id] = static_cast<int>(universe.size());
        universe.push_back(std::move(e));
    }
    std::vector<std::vector<int>> sets;
    for (const auto& s : j.at("sets")) {
        std::vector<int> members;
        for (const auto& id : s) {
            auto it = index.find(id.get<std::string>());
            if (it == index.end())
                throw std::invalid_argument("WeightedSetSystem: unknown element id '" +
                                            id.get<std::string>() + "'");
            members.push_back(it->second);
        }
        sets.push_back(std::move(members));
    }
    return WeightedSetSystem(std::move(universe), std::move(sets));
}

HittingSetSolver::HittingSetSolver(const WeightedSetSystem& system)
    : system_(system), memo_(std::size_t(1) << system.set_count()) {}

const HittingSetSolver::Entry& HittingSetSolver::best(std::uint32_t unhit) {
    if (memo_[unhit]) return *memo_[unhit];
    Entry entry;
    if (unhit == 0) {
        entry.weight = 0;
    } else {
        // Branch on the unhit set with the fewest elements; every hitting
        // set must contain one of them.
        int branch = -1;
        for (std::uint32_t m = unhit; m != 0; m &= m - 1) {
            int i = std::countr_zero(m);
            if (branch < 0 ||
                system_.set(i).size() < system_.set(branch).size())
                branch = i;
        }
        entry.weight = std::numeric_limits<std::int64_t>::max();
        for (int e : system_.set(branch)) {
            const Entry& rest = best(unhit & ~system_.covers(e));
            std::int64_t w = system_.weight(e) + rest.weight;
            if (w > entry.weight) continue;
            std::vector<int> candidate = rest.elements;
            candidate.insert(std::lower_bound(candidate.begin(), candidate.end(), e), e);
            if (w < entry.weight || candidate < entry.elements) {
                entry.weight = w;
                entry.elements = std::move(candidate);
            }
        }
    }
    memo_[unhit] = std::move(entry);
    return *memo_[unhit];
}

HittingSetResult HittingSetSolver::solve(std::uint32_t select) {
    if (select == 0) throw std::invalid_argument("min_hitting_set: empty selection");
    if (select >> system_.set_count())
        throw std::invalid_argument("min_hitting_set: selector out of range");
    const Entry& entry = best(select);
    return HittingSetResult{entry.elements, entry.weight};
}

HittingSetResult min_hitting_set(const WeightedSetSystem& system, std::uint32_t select) {
    return HittingSetSolver(system).solve(select);
}

CostTable hs_cost_table(const WeightedSetSystem& system) {
    if (system.set_count() > 8)
        throw std::invalid_argument("hs_cost_table: more than 8 sets");
    HittingSetSolver solver(system);
    CostTable table;
    table.l = system.set_count();
    table.values.assign(std::size_t(1) << table.l, 0);
    for (std::uint32_t x = 1; x < table.selector_count(); ++x)
        table.values[x] = solver.solve(x).weight;
    return table;
}

WeightedSetSystem realize_ecf(const CostTable& table) {
    if (table.l < 1 || table.l > 8)
        throw std::invalid_argument("realize_ecf: l must be in [1, 8]");
    EcfReport check = validate_ecf(table);
    if (!check.pass())
        throw std::invalid_argument("realize_ecf: table violates axiom '" +
                                    check.violations.front().axiom + "'");
    // One element per nonzero selector. The all-zero selector would carry
    // weight 0 and belongs to no set, so it is omitted.
    std::vector<UniverseElement> universe;
    std::vector<std::vector<int>> sets(table.l);
    for (std::uint32_t x = 1; x < table.selector_count(); ++x) {
        std::string id = "b";
        for (int i = 0; i < table.l; ++i) id.push_back((x >> i) & 1u ? '1' : '0');
        int e = static_cast<int>(universe.size());
        universe.push_back(UniverseElement{std::move(id), table.values[x]});
        for (int i = 0; i < table.l; ++i)
            if ((x >> i) & 1u) sets[i].push_back(e);
    }
    return WeightedSetSystem(std::move(universe), std::move(sets));
}

}  // namespace qlab

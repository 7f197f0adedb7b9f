#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace qlab {

// Integer cost per selector X in {0,1}^l. values is indexed by X read as a
// little-endian integer (bit i-1 of the index = X_i).
struct CostTable {
    int l = 0;
    std::vector<std::int64_t> values;

    std::int64_t at(std::uint32_t select) const { return values[select]; }
    std::uint32_t selector_count() const { return 1u << l; }

    friend bool operator==(const CostTable& a, const CostTable& b) {
        return a.l == b.l && a.values == b.values;
    }

    nlohmann::json to_json() const;
    static CostTable from_json(const nlohmann::json& j);
};

}  // namespace qlab

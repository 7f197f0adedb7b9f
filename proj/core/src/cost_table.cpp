#include "qlab/cost_table.hpp"

#include <stdexcept>

namespace qlab {

nlohmann::json CostTable::to_json() const {
    return {{"l", l}, {"values", values}};
}

CostTable CostTable::from_json(const nlohmann::json& j) {
    CostTable t;
    t.l = j.at("l").get<int>();
    if (t.l < 0 || t.l > 24) throw std::invalid_argument("CostTable: l out of range");
    t.values = j.at("values").get<std::vector<std::int64_t>>();
    if (t.values.size() != (std::size_t(1) << t.l))
        throw std::invalid_argument("CostTable: values must have length 2^l");
    return t;
}

}  // namespace qlab

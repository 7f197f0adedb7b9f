#include "qlab/ecf.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "qlab/rng.hpp"

namespace qlab {

EcfReport validate_ecf(const CostTable& table) {
    if (table.l > 12) throw std::invalid_argument("validate_ecf: l above 12");
    if (table.values.size() != (std::size_t(1) << table.l))
        throw std::invalid_argument("validate_ecf: malformed table");
    const std::uint32_t count = table.selector_count();
    EcfReport report;

    for (std::uint32_t x = 0; x < count; ++x) {
        bool bad = table.values[x] < 0 || (table.values[x] == 0) != (x == 0);
        if (bad) {
            report.violations.push_back(
                {"zero", x, 0,
                 "value " + std::to_string(table.values[x]) + " at X=" + std::to_string(x)});
            break;
        }
    }

    // Submask enumeration covers every comparable pair.
    bool mono_done = false;
    for (std::uint32_t y = 0; y < count && !mono_done; ++y) {
        for (std::uint32_t x = y; ; x = (x - 1) & y) {
            if (table.values[x] > table.values[y]) {
                report.violations.push_back(
                    {"monotone", x, y,
                     std::to_string(table.values[x]) + " > " + std::to_string(table.values[y])});
                mono_done = true;
                break;
            }
            if (x == 0) break;
        }
    }

    for (std::uint32_t x = 0; x < count; ++x) {
        bool done = false;
        for (std::uint32_t y = 0; y < count; ++y) {
            if (table.values[x | y] > table.values[x] + table.values[y]) {
                report.violations.push_back(
                    {"subadditive", x, y,
                     std::to_string(table.values[x | y]) + " > " +
                         std::to_string(table.values[x]) + " + " +
                         std::to_string(table.values[y])});
                done = true;
                break;
            }
        }
        if (done) break;
    }
    return report;
}

CostTable cstar() {
    CostTable t;
    t.l = 3;
    t.values.resize(8);
    for (std::uint32_t x = 0; x < 8; ++x) {
        int w = std::popcount(x);
        t.values[x] = w == 0 ? 0 : w == 3 ? 2 : 1;
    }
    return t;
}

CostTable ecf_closure(CostTable table) {
    const std::uint32_t count = table.selector_count();
    table.values[0] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        // Pull each entry down to the minimum over supersets.
        for (int b = 0; b < table.l; ++b) {
            for (std::uint32_t x = 0; x < count; ++x) {
                if ((x >> b) & 1u) continue;
                std::int64_t above = table.values[x | (1u << b)];
                if (above < table.values[x]) {
                    table.values[x] = above;
                    changed = true;
                }
            }
        }
        // With monotone tightening in place, disjoint splits dominate all
        // covers X = Y | Z, so submask pairs suffice.
        for (std::uint32_t x = 1; x < count; ++x) {
            for (std::uint32_t y = x; y != 0; y = (y - 1) & x) {
                std::int64_t sum = table.values[y] + table.values[x & ~y];
                if (sum < table.values[x]) {
                    table.values[x] = sum;
                    changed = true;
                }
            }
        }
    }
    return table;
}

CostTable random_ecf(int l, std::int64_t max_value, std::uint64_t seed) {
    if (l < 1 || l > 5) throw std::invalid_argument("random_ecf: l must be in [1, 5]");
    if (max_value < 1 || max_value > 15)
        throw std::invalid_argument("random_ecf: max_value must be in [1, 15]");
    Rng rng(seed);
    CostTable t;
    t.l = l;
    t.values.assign(std::size_t(1) << l, 0);
    // Drawing from [1, max] keeps every nonzero entry >= 1 through the
    // closure, so axiom (1) needs no after-the-fact repair.
    for (std::uint32_t x = 1; x < t.selector_count(); ++x) t.values[x] = rng.range(1, max_value);
    return ecf_closure(std::move(t));
}

}  // namespace qlab

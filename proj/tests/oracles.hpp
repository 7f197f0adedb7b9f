// Test-only reference implementations. Everything here is deliberately
// naive -- plain recursion and exhaustive enumeration -- and stays
// independent of the engine code paths it cross-checks.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "qlab/bin.hpp"
#include "qlab/cost_table.hpp"
#include "qlab/decision_tree.hpp"
#include "qlab/rng.hpp"
#include "qlab/search_problem.hpp"
#include "qlab/set_system.hpp"
#include "qlab/truth_table.hpp"

namespace oracles {

// Depth by unmemoized recursion straight off the definition.
inline int plain_depth(const qlab::TruthTable& f) {
    if (f.is_constant()) return 0;
    int best = f.arity();
    for (int i = 1; i <= f.arity(); ++i) {
        int d = 1 + std::max(plain_depth(f.restricted(i, 0)), plain_depth(f.restricted(i, 1)));
        best = std::min(best, d);
    }
    return best;
}

// Minimum hitting weight by enumerating every subset of the universe.
inline std::int64_t brute_hitting_weight(const qlab::WeightedSetSystem& system,
                                         std::uint32_t select) {
    const int u = system.universe_size();
    std::int64_t best = -1;
    for (std::uint64_t pick = 0; pick < (1ull << u); ++pick) {
        bool hits = true;
        for (int i = 0; i < system.set_count() && hits; ++i) {
            if (!((select >> i) & 1u)) continue;
            bool covered = false;
            for (int e : system.set(i)) covered = covered || ((pick >> e) & 1u);
            hits = covered;
        }
        if (!hits) continue;
        std::int64_t w = 0;
        for (int e = 0; e < u; ++e)
            if ((pick >> e) & 1u) w += system.weight(e);
        if (best < 0 || w < best) best = w;
    }
    return best;
}

// The three axioms as literal loops.
inline bool plain_ecf_check(const qlab::CostTable& t) {
    const std::uint32_t count = t.selector_count();
    for (std::uint32_t x = 0; x < count; ++x) {
        if (t.values[x] < 0) return false;
        if ((t.values[x] == 0) != (x == 0)) return false;
    }
    for (std::uint32_t x = 0; x < count; ++x)
        for (std::uint32_t y = 0; y < count; ++y) {
            if ((x & y) == x && t.values[x] > t.values[y]) return false;
            if (t.values[x | y] > t.values[x] + t.values[y]) return false;
        }
    return true;
}

inline std::uint64_t parse_input(const std::string& bits) {
    std::uint64_t x = 0;
    for (std::size_t p = 0; p < bits.size(); ++p)
        if (bits[p] == '1') x |= 1ull << p;
    return x;
}

inline qlab::TruthTable random_table(int n, std::uint32_t alphabet, qlab::Rng& rng) {
    std::vector<std::uint32_t> out(std::size_t(1) << n);
    for (auto& v : out) v = static_cast<std::uint32_t>(rng.below(alphabet));
    return qlab::TruthTable(n, alphabet, std::move(out));
}

inline qlab::TruthTable random_nonconstant(int n, qlab::Rng& rng) {
    for (;;) {
        qlab::TruthTable f = random_table(n, 2, rng);
        if (!f.is_constant()) return f;
    }
}

// Plays the adversary against every adaptive query sequence of the given
// length; true when each reached restriction keeps f nonconstant. Against a
// fixed answer rule every decision tree of that depth traces one of these
// sequences.
inline bool adversary_survives_all(const qlab::TruthTable& f,
                                   const qlab::AdversaryStrategy& adversary, int length) {
    struct Frame {
        qlab::Transcript transcript;
    };
    auto nonconstant_under = [&](const qlab::Transcript& transcript) {
        qlab::Restriction r{f.arity(), 0, 0};
        for (const auto& rec : transcript) r = r.with(rec.index, rec.bit);
        return !r.apply(f).is_constant();
    };
    auto rec = [&](auto&& self, qlab::Transcript& transcript) -> bool {
        if (static_cast<int>(transcript.size()) == length) return nonconstant_under(transcript);
        for (int i = 1; i <= f.arity(); ++i) {
            bool used = false;
            for (const auto& recq : transcript) used = used || recq.index == i;
            if (used) continue;
            int b = adversary.answer(transcript, i);
            transcript.push_back(qlab::QueryRecord{i, b});
            bool ok = self(self, transcript);
            transcript.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    qlab::Transcript t;
    return rec(rec, t);
}

// Exact hiding-game value by enumerating every adversary answer rule on the
// reachable transcript tree, then letting the querier best-respond.
// Exponential in every direction; arity <= 3, q <= 2.
inline int enumerated_security_count(const qlab::Bin& bin, int q) {
    const int n = bin.arity();
    std::vector<char> keys;

    auto h_count = [&](std::uint64_t mask, std::uint64_t bits) {
        bin.consistent_keys(mask, bits, keys);
        int c = 0;
        for (char v : keys) c += v;
        return c;
    };

    // An answer rule maps (transcript, next query) to a bit. Rules are
    // grown lazily: whenever play reaches an undecided point, both answers
    // are branched on, which enumerates every rule on the reachable
    // transcript tree.
    struct Rule {
        std::vector<std::uint64_t> keys;
        std::vector<int> bits;
        int* find(std::uint64_t k) {
            for (std::size_t i = 0; i < keys.size(); ++i)
                if (keys[i] == k) return &bits[i];
            return nullptr;
        }
    };
    // Prefix-free encoding of (transcript, query); n <= 3 and q <= 2 keep
    // this well inside 64 bits.
    auto encode = [&](const qlab::Transcript& transcript, int query) {
        std::uint64_t key = 1;
        for (const auto& r : transcript) key = key * 32 + std::uint64_t(r.index) * 2 + r.bit;
        return key * 32 + std::uint64_t(query);
    };

    int best_overall = 0;
    Rule rule;
    auto querier_min = [&](auto&& self, qlab::Transcript& transcript, std::uint64_t mask,
                           std::uint64_t bits, int left, bool& incomplete,
                           std::uint64_t& missing) -> int {
        if (left == 0) return h_count(mask, bits);
        int best = bin.key_count() + 1;
        for (int i = 1; i <= n; ++i) {
            if ((mask >> (i - 1)) & 1u) continue;
            int* chosen = rule.find(encode(transcript, i));
            if (!chosen) {
                incomplete = true;
                missing = encode(transcript, i);
                return 0;  // value unusable until the rule decides this point
            }
            transcript.push_back(qlab::QueryRecord{i, *chosen});
            std::uint64_t nm = mask | (1ull << (i - 1));
            std::uint64_t nb = *chosen ? bits | (1ull << (i - 1)) : bits;
            int v = self(self, transcript, nm, nb, left - 1, incomplete, missing);
            transcript.pop_back();
            if (incomplete) return 0;
            best = std::min(best, v);
        }
        return best;
    };
    auto enumerate = [&](auto&& self) -> void {
        bool incomplete = false;
        std::uint64_t missing = 0;
        qlab::Transcript transcript;
        int value = querier_min(querier_min, transcript, 0, 0, q, incomplete, missing);
        if (!incomplete) {
            best_overall = std::max(best_overall, value);
            return;
        }
        for (int b = 0; b < 2; ++b) {
            rule.keys.push_back(missing);
            rule.bits.push_back(b);
            self(self);
            rule.keys.pop_back();
            rule.bits.pop_back();
        }
    };
    enumerate(enumerate);
    return best_overall;
}

// Search problem whose witnesses are the root-to-leaf paths of a random
// tree: total and unique by construction.
inline qlab::SearchProblem random_tree_tusp(int n, qlab::Rng& rng) {
    std::vector<std::string> patterns;
    auto rec = [&](auto&& self, std::string pattern, std::uint32_t used, int depth) -> void {
        bool stop = depth > 0 && (depth >= n || rng.below(3) == 0);
        if (stop) {
            patterns.push_back(pattern);
            return;
        }
        int pick;
        do {
            pick = static_cast<int>(rng.below(std::uint64_t(n)));
        } while ((used >> pick) & 1u);
        for (char c : {'0', '1'}) {
            std::string next = pattern;
            next[pick] = c;
            self(self, next, used | (1u << pick), depth + 1);
        }
    };
    rec(rec, std::string(static_cast<std::size_t>(n), '*'), 0, 0);
    return qlab::SearchProblem::from_patterns(n, patterns);
}

}  // namespace oracles

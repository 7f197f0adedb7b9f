#include "qlab/bin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "qlab/depth_engine.hpp"
#include "qlab/rng.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// Werf

Werf::Werf(int m, int d, std::vector<std::uint16_t> table)
    : m_(m), d_(d), table_(std::move(table)) {
    if (m < 1 || m > 16) throw std::invalid_argument("Werf: m must be in [1, 16]");
    if (d < 1 || d > 4096) throw std::invalid_argument("Werf: d must be in [1, 4096]");
    if (table_.size() != (std::size_t(1) << m))
        throw std::invalid_argument("Werf: table must have 2^m entries");
    preimages_.resize(d_);
    for (std::uint32_t b = 0; b < table_.size(); ++b) {
        if (table_[b] < 1 || table_[b] > d_)
            throw std::invalid_argument("Werf: table value out of range");
        preimages_[table_[b] - 1].push_back(b);
    }
}

nlohmann::json Werf::to_json() const {
    return {{"m", m_}, {"d", d_}, {"table", table_}};
}

Werf Werf::from_json(const nlohmann::json& j) {
    return Werf(j.at("m").get<int>(), j.at("d").get<int>(),
                j.at("table").get<std::vector<std::uint16_t>>());
}

WerfCheck verify_werf(const Werf& werf, int t) {
    const int m = werf.input_bits();
    if (t < 0 || t > m) throw std::invalid_argument("verify_werf: t must be in [0, m]");
    const std::uint32_t masks = 1u << m;
    std::vector<char> covered(masks);
    for (int c = 1; c <= werf.range_size(); ++c) {
        // Mark the zero-support of each preimage of c, then close downward:
        // a pinned set S works iff S is a submask of some zero-support.
        std::fill(covered.begin(), covered.end(), 0);
        for (std::uint32_t b : werf.preimage(c)) covered[~b & (masks - 1)] = 1;
        for (int p = 0; p < m; ++p)
            for (std::uint32_t s = 0; s < masks; ++s)
                if ((s >> p) & 1u && covered[s]) covered[s & ~(1u << p)] = 1;
        for (std::uint32_t s = 0; s < masks; ++s) {
            if (std::popcount(s) <= t && !covered[s])
                return WerfCheck{false, c, s};
        }
    }
    return WerfCheck{};
}

Werf parity_werf(int m) {
    std::vector<std::uint16_t> table(std::size_t(1) << m);
    for (std::uint32_t b = 0; b < table.size(); ++b)
        table[b] = static_cast<std::uint16_t>(1 + (std::popcount(b) & 1));
    return Werf(m, 2, std::move(table));
}

WerfSample random_werf(int m, int d, int t, std::uint64_t seed, int max_tries) {
    if (m < 1 || m > 16) throw std::invalid_argument("random_werf: m must be in [1, 16]");
    if (d > (1 << m))
        throw std::invalid_argument("random_werf: d > 2^m makes surjectivity impossible");
    if (max_tries < 1) throw std::invalid_argument("random_werf: max_tries must be >= 1");
    double per_pair = std::pow(1.0 - 1.0 / d, std::exp2(m - t));
    Rng rng(seed);
    for (int attempt = 1; attempt <= max_tries; ++attempt) {
        std::vector<std::uint16_t> table(std::size_t(1) << m);
        for (auto& v : table) v = static_cast<std::uint16_t>(1 + rng.below(std::uint64_t(d)));
        Werf candidate(m, d, std::move(table));
        if (verify_werf(candidate, t).ok)
            return WerfSample{std::move(candidate), attempt, per_pair};
    }
    throw std::runtime_error(
        "random_werf: no verified sample in " + std::to_string(max_tries) +
        " tries; per-(set,value) failure chance (1-1/d)^(2^(m-t)) = " + std::to_string(per_pair) +
        " suggests the parameters are too aggressive");
}

// ---------------------------------------------------------------------------
// Bins

Bin::Bin(int arity, int key_count) : arity_(arity), key_count_(key_count) {
    if (arity < 1 || arity > 63) throw std::invalid_argument("Bin: arity must be in [1, 63]");
    if (key_count < 1 || key_count > 4096)
        throw std::invalid_argument("Bin: key count must be in [1, 4096]");
}

TableBin::TableBin(int arity, int key_count, std::vector<std::uint32_t> contents_table)
    : Bin(arity, key_count), table_(std::move(contents_table)) {
    if (arity > 20) throw std::invalid_argument("TableBin: arity above 20");
    if (table_.size() != (std::size_t(1) << arity))
        throw std::invalid_argument("TableBin: contents must have 2^arity entries");
    for (std::uint32_t k : table_)
        if (k > static_cast<std::uint32_t>(key_count))
            throw std::invalid_argument("TableBin: contents value out of keyspace");
}

void TableBin::consistent_keys(std::uint64_t mask, std::uint64_t bits,
                               std::vector<char>& out) const {
    out.assign(static_cast<std::size_t>(key_count_), 0);
    const std::uint64_t full = (arity_ == 63) ? ~0ull : (1ull << arity_) - 1;
    const std::uint64_t free = full & ~mask;
    std::uint64_t sub = 0;
    do {
        std::uint32_t k = table_[(bits & mask) | sub];
        if (k) out[k - 1] = 1;
        sub = (sub - free) & free;
    } while (sub != 0);
}

nlohmann::json TableBin::to_json() const {
    return {{"kind", "table"}, {"arity", arity_}, {"M", key_count_}, {"contents", table_}};
}

TruthTable TableBin::contents_table() const {
    std::vector<std::uint32_t> out(table_);
    return TruthTable(arity_, static_cast<std::uint32_t>(key_count_) + 1, std::move(out));
}

namespace {

int layout_arity(const SearchProblem& tusp, const Werf& werf, int key_count) {
    int wcount = tusp.witness_count();
    int ktw_bits = std::bit_width(static_cast<unsigned>(wcount - 1));
    return tusp.arity() + wcount * werf.input_bits() + key_count * ktw_bits;
}

SearchProblem sorted_tusp(const SearchProblem& tusp) {
    std::vector<std::string> patterns;
    for (const Witness& w : tusp.witnesses()) patterns.push_back(w.pattern());
    std::sort(patterns.begin(), patterns.end());
    return SearchProblem::from_patterns(tusp.arity(), patterns);
}

}  // namespace

StructuredBin::StructuredBin(SearchProblem tusp, Werf werf, int key_count)
    : Bin(layout_arity(tusp, werf, key_count), key_count),
      tusp_(sorted_tusp(tusp)),
      werf_(std::move(werf)) {
    if (key_count != werf_.range_size())
        throw std::invalid_argument("StructuredBin: keyspace must match the encoder range");
    if (tusp_.witness_count() < 2)
        throw std::invalid_argument("StructuredBin: need at least two witnesses");
    Classification c = classify(tusp_);
    if (!c.tusp())
        throw std::invalid_argument("StructuredBin: search problem is not total and unique");
    x_bits_ = tusp_.arity();
    wtk_offset_ = x_bits_;
    ktw_entry_bits_ = std::bit_width(static_cast<unsigned>(tusp_.witness_count() - 1));
    ktw_offset_ = wtk_offset_ + tusp_.witness_count() * werf_.input_bits();
}

std::uint32_t StructuredBin::contents(std::uint64_t y) const {
    const std::uint64_t x = y & ((1ull << x_bits_) - 1);
    const int wi = tusp_eval(tusp_, x);
    const int em = werf_.input_bits();
    const std::uint32_t entry =
        static_cast<std::uint32_t>((y >> (wtk_offset_ + wi * em)) & ((1ull << em) - 1));
    const int k = werf_.apply(entry);
    const std::uint32_t code = static_cast<std::uint32_t>(
        (y >> (ktw_offset_ + (k - 1) * ktw_entry_bits_)) & ((1ull << ktw_entry_bits_) - 1));
    return decode_ktw(code) == wi ? static_cast<std::uint32_t>(k) : 0;
}

void StructuredBin::consistent_keys(std::uint64_t mask, std::uint64_t bits,
                                    std::vector<char>& out) const {
    out.assign(static_cast<std::size_t>(key_count_), 0);
    const int em = werf_.input_bits();
    const std::uint64_t x_mask = mask & ((1ull << x_bits_) - 1);
    const std::uint64_t entry_full = (1ull << em) - 1;
    const std::uint64_t code_full = (1ull << ktw_entry_bits_) - 1;
    // The three regions are disjoint, so a key is achievable iff some
    // witness clears all three coordinate-wise checks independently.
    for (int k = 1; k <= key_count_; ++k) {
        const int ktw_off = ktw_offset_ + (k - 1) * ktw_entry_bits_;
        const std::uint64_t kmask = (mask >> ktw_off) & code_full;
        const std::uint64_t kbits = (bits >> ktw_off) & code_full;
        for (int wi = 0; wi < tusp_.witness_count() && !out[k - 1]; ++wi) {
            const Witness& w = tusp_.witness(wi);
            if (((bits ^ w.fixed_bits()) & w.fixed_mask() & x_mask) != 0) continue;
            const int wtk_off = wtk_offset_ + wi * em;
            const std::uint64_t emask = (mask >> wtk_off) & entry_full;
            const std::uint64_t ebits = (bits >> wtk_off) & entry_full;
            bool entry_ok = false;
            for (std::uint32_t b : werf_.preimage(k)) {
                if (((b ^ ebits) & emask) == 0) { entry_ok = true; break; }
            }
            if (!entry_ok) continue;
            for (std::uint64_t v = 0; v <= code_full; ++v) {
                if (((v ^ kbits) & kmask) == 0 && decode_ktw(static_cast<std::uint32_t>(v)) == wi) {
                    out[k - 1] = 1;
                    break;
                }
            }
        }
    }
}

nlohmann::json StructuredBin::to_json() const {
    return {{"kind", "structured"},
            {"M", key_count_},
            {"tusp", tusp_.to_json()},
            {"werf", werf_.to_json()},
            {"layout",
             {{"arity", arity_},
              {"x_bits", x_bits_},
              {"wtk_offset", wtk_offset_},
              {"wtk_entry_bits", werf_.input_bits()},
              {"ktw_offset", ktw_offset_},
              {"ktw_entry_bits", ktw_entry_bits_}}}};
}

LiftedBin::LiftedBin(BinPtr base, int factor)
    : Bin(base->arity() * factor, base->key_count()), base_(std::move(base)), factor_(factor) {
    if (factor < 2) throw std::invalid_argument("LiftedBin: factor must be >= 2");
}

std::uint32_t LiftedBin::contents(std::uint64_t y) const {
    const std::uint64_t block = (1ull << factor_) - 1;
    std::uint64_t base_y = 0;
    for (int i = 0; i < base_->arity(); ++i)
        base_y |= std::uint64_t(std::popcount((y >> (i * factor_)) & block) & 1) << i;
    return base_->contents(base_y);
}

void LiftedBin::induced(std::uint64_t mask, std::uint64_t bits, std::uint64_t& base_mask,
                        std::uint64_t& base_bits) const {
    const std::uint64_t block = (1ull << factor_) - 1;
    base_mask = base_bits = 0;
    for (int i = 0; i < base_->arity(); ++i) {
        if (((mask >> (i * factor_)) & block) != block) continue;  // block has a free bit
        base_mask |= 1ull << i;
        base_bits |= std::uint64_t(std::popcount((bits >> (i * factor_)) & block) & 1) << i;
    }
}

void LiftedBin::consistent_keys(std::uint64_t mask, std::uint64_t bits,
                                std::vector<char>& out) const {
    std::uint64_t base_mask, base_bits;
    induced(mask, bits, base_mask, base_bits);
    base_->consistent_keys(base_mask, base_bits, out);
}

nlohmann::json LiftedBin::to_json() const {
    return {{"kind", "lifted"}, {"c", factor_}, {"base", base_->to_json()}};
}

BinPtr make_table_bin(int arity, int key_count, std::vector<std::uint32_t> contents_table) {
    return std::make_shared<TableBin>(arity, key_count, std::move(contents_table));
}

BinPtr build_mystery_bin(const SearchProblem& tusp, const Werf& werf, int key_count) {
    return std::make_shared<StructuredBin>(tusp, werf, key_count);
}

BinPtr xor_lift(BinPtr bin, int factor) {
    if (factor < 1) throw std::invalid_argument("xor_lift: factor must be >= 1");
    if (factor == 1) return bin;
    return std::make_shared<LiftedBin>(std::move(bin), factor);
}

BinPtr bin_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "table") {
        return make_table_bin(j.at("arity").get<int>(), j.at("M").get<int>(),
                              j.at("contents").get<std::vector<std::uint32_t>>());
    }
    if (kind == "structured") {
        auto bin = build_mystery_bin(SearchProblem::from_json(j.at("tusp")),
                                     Werf::from_json(j.at("werf")), j.at("M").get<int>());
        if (j.contains("layout") &&
            j.at("layout").at("arity").get<int>() != bin->arity())
            throw std::invalid_argument("bin_from_json: layout arity disagrees");
        return bin;
    }
    if (kind == "lifted")
        return xor_lift(bin_from_json(j.at("base")), j.at("c").get<int>());
    throw std::invalid_argument("bin_from_json: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Query strategies

namespace {

// Counts first reads only; repeated reads of a bit are free, as on a
// decision-tree path.
class CountingOracle {
public:
    CountingOracle(const BitOracle& inner, int arity) : inner_(inner), seen_(arity + 1, 0) {}

    int read(int i) {
        if (!seen_[i]) {
            seen_[i] = 1;
            ++count_;
        }
        return inner_(i);
    }
    int count() const { return count_; }

private:
    const BitOracle& inner_;
    std::vector<char> seen_;
    int count_ = 0;
};

std::uint32_t run_tree_on_oracle(const DecisionTree& tree, CountingOracle& oracle,
                                 int index_offset) {
    int cur = tree.root();
    while (!tree.node(cur).is_leaf()) {
        const auto& u = tree.node(cur);
        cur = oracle.read(u.query + index_offset) ? u.child1 : u.child0;
    }
    return tree.node(cur).label;
}

std::uint64_t read_field(CountingOracle& oracle, int offset, int width) {
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b)
        v |= std::uint64_t(oracle.read(offset + b + 1)) << b;
    return v;
}

// Query trees built once per bin so that repeated runs (measurement loops,
// the two-phase solver) do not pay for tree construction per input.
struct StrategyTrees {
    std::optional<DecisionTree> tree;
    std::unique_ptr<StrategyTrees> base;  // for lifted bins
};

StrategyTrees build_contents_trees(const Bin& bin) {
    StrategyTrees out;
    if (const auto* table = dynamic_cast<const TableBin*>(&bin)) {
        out.tree = optimal_tree(table->contents_table());
    } else if (const auto* structured = dynamic_cast<const StructuredBin*>(&bin)) {
        if (structured->x_bits() <= kDefaultDepthCap)
            out.tree = optimal_tree(tusp_table(structured->tusp()));
    } else {
        const auto& lifted = dynamic_cast<const LiftedBin&>(bin);
        out.base = std::make_unique<StrategyTrees>(build_contents_trees(*lifted.base()));
    }
    return out;
}

StrategyTrees build_membership_trees(const Bin& bin, int k) {
    StrategyTrees out;
    if (const auto* table = dynamic_cast<const TableBin*>(&bin)) {
        TruthTable indicator = TruthTable::from_eval(
            table->arity(), 2,
            [&](std::uint64_t y) { return std::uint32_t(table->contents(y) == unsigned(k)); });
        out.tree = optimal_tree(indicator);
    } else if (dynamic_cast<const LiftedBin*>(&bin)) {
        const auto& lifted = dynamic_cast<const LiftedBin&>(bin);
        out.base = std::make_unique<StrategyTrees>(build_membership_trees(*lifted.base(), k));
    }
    return out;
}

std::uint32_t contents_impl(const Bin& bin, const StrategyTrees& trees, CountingOracle& oracle,
                            int index_offset) {
    if (dynamic_cast<const TableBin*>(&bin))
        return run_tree_on_oracle(*trees.tree, oracle, index_offset);
    if (const auto* bp = dynamic_cast<const StructuredBin*>(&bin)) {
        // Solve the search problem on the x block, then chase the two tables.
        int wi;
        if (trees.tree) {
            wi = static_cast<int>(run_tree_on_oracle(*trees.tree, oracle, index_offset));
        } else {
            PhaseRun run = solve_quadratic_run(
                bp->tusp(), [&](int i) { return oracle.read(i + index_offset); });
            wi = *run.witness_index;
        }
        const int em = bp->wtk_entry_bits();
        auto entry = static_cast<std::uint32_t>(
            read_field(oracle, index_offset + bp->wtk_offset() + wi * em, em));
        const int k = bp->werf().apply(entry);
        auto code = static_cast<std::uint32_t>(read_field(
            oracle, index_offset + bp->ktw_offset() + (k - 1) * bp->ktw_entry_bits(),
            bp->ktw_entry_bits()));
        return bp->decode_ktw(code) == wi ? static_cast<std::uint32_t>(k) : 0;
    }
    const auto& lifted = dynamic_cast<const LiftedBin&>(bin);
    const int c = lifted.factor();
    BitOracle block_reader = [&](int i) {
        int parity = 0;
        for (int b = 0; b < c; ++b)
            parity ^= oracle.read(index_offset + (i - 1) * c + b + 1);
        return parity;
    };
    CountingOracle base_oracle(block_reader, lifted.base()->arity());
    return contents_impl(*lifted.base(), *trees.base, base_oracle, 0);
}

bool membership_impl(const Bin& bin, int k, const StrategyTrees& trees, CountingOracle& oracle,
                     int index_offset) {
    if (dynamic_cast<const TableBin*>(&bin))
        return run_tree_on_oracle(*trees.tree, oracle, index_offset) != 0;
    if (const auto* bp = dynamic_cast<const StructuredBin*>(&bin)) {
        auto code = static_cast<std::uint32_t>(read_field(
            oracle, index_offset + bp->ktw_offset() + (k - 1) * bp->ktw_entry_bits(),
            bp->ktw_entry_bits()));
        const int wi = bp->decode_ktw(code);
        const int em = bp->wtk_entry_bits();
        auto entry = static_cast<std::uint32_t>(
            read_field(oracle, index_offset + bp->wtk_offset() + wi * em, em));
        if (bp->werf().apply(entry) != k) return false;
        const Witness& w = bp->tusp().witness(wi);
        for (int p = 0; p < bp->x_bits(); ++p) {
            if (!((w.fixed_mask() >> p) & 1u)) continue;
            if (oracle.read(index_offset + p + 1) !=
                static_cast<int>((w.fixed_bits() >> p) & 1u))
                return false;
        }
        return true;
    }
    const auto& lifted = dynamic_cast<const LiftedBin&>(bin);
    const int c = lifted.factor();
    BitOracle block_reader = [&](int i) {
        int parity = 0;
        for (int b = 0; b < c; ++b)
            parity ^= oracle.read(index_offset + (i - 1) * c + b + 1);
        return parity;
    };
    CountingOracle base_oracle(block_reader, lifted.base()->arity());
    return membership_impl(*lifted.base(), k, *trees.base, base_oracle, 0);
}

}  // namespace

std::uint32_t run_contents_strategy(const Bin& bin, const BitOracle& oracle, int* queries) {
    StrategyTrees trees = build_contents_trees(bin);
    CountingOracle counting(oracle, bin.arity());
    std::uint32_t result = contents_impl(bin, trees, counting, 0);
    if (queries) *queries = counting.count();
    return result;
}

bool run_membership_strategy(const Bin& bin, int k, const BitOracle& oracle, int* queries) {
    if (k < 1 || k > bin.key_count())
        throw std::invalid_argument("membership: key out of range");
    StrategyTrees trees = build_membership_trees(bin, k);
    CountingOracle counting(oracle, bin.arity());
    bool verdict = membership_impl(bin, k, trees, counting, 0);
    if (queries) *queries = counting.count();
    return verdict;
}

namespace {

template <typename Run>
StrategyReport measure_strategy(const Bin& bin, const Run& run) {
    if (bin.arity() > 20)
        throw std::invalid_argument("measure: arity above 20 is not enumerable");
    StrategyReport report;
    for (std::uint64_t y = 0; y < (1ull << bin.arity()); ++y) {
        int queries = 0;
        if (!run(y, &queries)) report.all_correct = false;
        report.worst_queries = std::max(report.worst_queries, queries);
    }
    return report;
}

}  // namespace

StrategyReport measure_contents_strategy(const Bin& bin) {
    StrategyTrees trees = build_contents_trees(bin);
    return measure_strategy(bin, [&](std::uint64_t y, int* queries) {
        BitOracle oracle = [y](int i) { return static_cast<int>((y >> (i - 1)) & 1u); };
        CountingOracle counting(oracle, bin.arity());
        std::uint32_t got = contents_impl(bin, trees, counting, 0);
        *queries = counting.count();
        return got == bin.contents(y);
    });
}

StrategyReport measure_membership_strategy(const Bin& bin, int k) {
    if (k < 1 || k > bin.key_count())
        throw std::invalid_argument("membership: key out of range");
    StrategyTrees trees = build_membership_trees(bin, k);
    return measure_strategy(bin, [&](std::uint64_t y, int* queries) {
        BitOracle oracle = [y](int i) { return static_cast<int>((y >> (i - 1)) & 1u); };
        CountingOracle counting(oracle, bin.arity());
        bool got = membership_impl(bin, k, trees, counting, 0);
        *queries = counting.count();
        bool want = bin.contents(y) == static_cast<std::uint32_t>(k);
        return got == want;
    });
}

// ---------------------------------------------------------------------------
// Security game

namespace {

class SecurityGame {
public:
    SecurityGame(BinPtr bin, int q) : bin_(std::move(bin)), q_(q) {
        full_mask_ = (bin_->arity() == 63) ? ~0ull : (1ull << bin_->arity()) - 1;
    }

    int q() const { return q_; }

    // Optimal surviving-key count from a partial assignment: querier picks
    // the index, adversary picks the answer, until q bits are fixed.
    int value(std::uint64_t mask, std::uint64_t bits) {
        int fixed = std::popcount(mask);
        if (fixed >= q_ || mask == full_mask_) return count_keys(mask, bits);
        std::uint64_t key = mask | (bits << 32);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        int best = bin_->key_count() + 1;
        for (std::uint64_t m = full_mask_ & ~mask; m != 0; m &= m - 1) {
            std::uint64_t q_bit = m & (~m + 1);
            int v = std::max(value(mask | q_bit, bits), value(mask | q_bit, bits | q_bit));
            best = std::min(best, v);
            if (best == 0) break;
        }
        memo_.emplace(key, best);
        return best;
    }

    int best_answer(std::uint64_t mask, std::uint64_t bits, std::uint64_t q_bit) {
        return value(mask | q_bit, bits | q_bit) > value(mask | q_bit, bits) ? 1 : 0;
    }

private:
    int count_keys(std::uint64_t mask, std::uint64_t bits) {
        bin_->consistent_keys(mask, bits, scratch_);
        int n = 0;
        for (char v : scratch_) n += v;
        return n;
    }

    BinPtr bin_;
    int q_;
    std::uint64_t full_mask_;
    std::unordered_map<std::uint64_t, int> memo_;
    std::vector<char> scratch_;
};

class SecurityAdversary final : public AdversaryStrategy {
public:
    explicit SecurityAdversary(std::shared_ptr<SecurityGame> game) : game_(std::move(game)) {}

    int answer(const Transcript& transcript, int query) const override {
        std::uint64_t mask = 0, bits = 0;
        for (const QueryRecord& r : transcript) {
            mask |= 1ull << (r.index - 1);
            if (r.bit) bits |= 1ull << (r.index - 1);
        }
        if (std::popcount(mask) >= game_->q()) return 0;  // past the horizon
        return game_->best_answer(mask, bits, 1ull << (query - 1));
    }

private:
    std::shared_ptr<SecurityGame> game_;
};

}  // namespace

SecurityResult security(BinPtr bin, int q) {
    if (q < 0 || q > bin->arity())
        throw std::invalid_argument("security: q must be in [0, arity]");
    if (bin->arity() > 20)
        throw std::invalid_argument("security: arity above 20 is not enumerable");
    if (dynamic_cast<const TableBin*>(bin.get()) && bin->arity() > 12)
        throw std::invalid_argument("security: table bins above arity 12 are not enumerable");
    auto game = std::make_shared<SecurityGame>(bin, q);
    int surviving = game->value(0, 0);
    return SecurityResult{Rational(surviving, bin->key_count()),
                          std::make_shared<SecurityAdversary>(game)};
}

namespace {

// Answers 0 inside a block until its last free bit, then defers the block's
// parity to the base adversary.
class BlockParityAdversary final : public AdversaryStrategy {
public:
    BlockParityAdversary(int base_arity, int factor, std::shared_ptr<AdversaryStrategy> base)
        : base_arity_(base_arity), factor_(factor), base_(std::move(base)) {}

    int answer(const Transcript& transcript, int query) const override {
        const int block = (query - 1) / factor_;
        int seen_in_block = 0;
        int parity_given = 0;
        Transcript base_transcript;
        std::vector<int> block_count(base_arity_, 0);
        std::vector<int> block_parity(base_arity_, 0);
        for (const QueryRecord& r : transcript) {
            int b = (r.index - 1) / factor_;
            block_count[b] += 1;
            block_parity[b] ^= r.bit;
            if (block_count[b] == factor_)  // critical query completed b
                base_transcript.push_back(QueryRecord{b + 1, block_parity[b]});
            if (b == block) {
                seen_in_block += 1;
                parity_given ^= r.bit;
            }
        }
        if (seen_in_block < factor_ - 1) return 0;
        int target = base_->answer(base_transcript, block + 1);
        return target ^ parity_given;
    }

private:
    int base_arity_;
    int factor_;
    std::shared_ptr<AdversaryStrategy> base_;
};

}  // namespace

std::shared_ptr<AdversaryStrategy> zeros_until_critical_adversary(
    const LiftedBin& bin, std::shared_ptr<AdversaryStrategy> base_adversary) {
    return std::make_shared<BlockParityAdversary>(bin.base()->arity(), bin.factor(),
                                                  std::move(base_adversary));
}

// ---------------------------------------------------------------------------
// Certification

bool MbfReport::pass() const {
    for (const MbfCheck& c : checks)
        if (!c.pass) return false;
    return true;
}

MbfReport certify_mbf(BinPtr bin, int budget, const Rational& delta) {
    if (budget < 1) throw std::invalid_argument("certify_mbf: budget must be >= 1");
    if (delta < Rational(0) || delta > Rational(1))
        throw std::invalid_argument("certify_mbf: delta must be in [0, 1]");
    MbfReport report;

    StrategyReport contents = measure_contents_strategy(*bin);
    report.checks.push_back(MbfCheck{contents.worst_queries <= budget && contents.all_correct,
                                     "contents queries", std::to_string(contents.worst_queries),
                                     "<= " + std::to_string(budget)});

    int worst_membership = 0;
    bool membership_correct = true;
    for (int k = 1; k <= bin->key_count(); ++k) {
        StrategyReport member = measure_membership_strategy(*bin, k);
        worst_membership = std::max(worst_membership, member.worst_queries);
        membership_correct = membership_correct && member.all_correct;
    }
    Rational membership_bound = delta * Rational(budget);
    report.checks.push_back(MbfCheck{
        Rational(worst_membership) <= membership_bound && membership_correct,
        "membership queries", std::to_string(worst_membership), "<= " + membership_bound.str()});

    // floor((1 - delta) * budget), clamped to the input length.
    std::int64_t q = (delta.den() - delta.num()) * budget / delta.den();
    int q_used = static_cast<int>(std::min<std::int64_t>(q, bin->arity()));
    Rational beta = security(bin, q_used).beta;
    Rational security_bound = Rational(1) - delta;
    report.checks.push_back(MbfCheck{beta >= security_bound,
                                     "security at q=" + std::to_string(q_used), beta.str(),
                                     ">= " + security_bound.str()});
    return report;
}

}  // namespace qlab

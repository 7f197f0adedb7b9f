#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qlab/decision_tree.hpp"
#include "qlab/rational.hpp"
#include "qlab/search_problem.hpp"

namespace qlab {

// J: {0,1}^m -> [1, d]. The interesting case is exposure resilience: every
// output value stays reachable with any t chosen input coordinates pinned
// to zero.
class Werf {
public:
    Werf(int m, int d, std::vector<std::uint16_t> table);

    int input_bits() const { return m_; }
    int range_size() const { return d_; }
    std::uint16_t apply(std::uint32_t b) const { return table_[b]; }
    const std::vector<std::uint16_t>& table() const { return table_; }
    // Inputs mapping to value c (1-based).
    const std::vector<std::uint32_t>& preimage(int c) const { return preimages_[c - 1]; }

    nlohmann::json to_json() const;
    static Werf from_json(const nlohmann::json& j);

private:
    int m_;
    int d_;
    std::vector<std::uint16_t> table_;
    std::vector<std::vector<std::uint32_t>> preimages_;
};

struct WerfCheck {
    bool ok = true;
    int failing_value = 0;           // c with no zero-padded preimage
    std::uint32_t failing_set = 0;   // the pinned coordinate set as a mask
};

// Exhaustive check of the resilience property for all coordinate sets of
// size <= t, via the downward closure of the zero-support masks of each
// preimage. m <= 16.
WerfCheck verify_werf(const Werf& werf, int t);

// J(b) = 1 + parity(b): an (m, 2, m-1) resilient map.
Werf parity_werf(int m);

struct WerfSample {
    Werf werf;
    int tries = 0;
    // (1 - 1/d)^(2^(m-t)): chance one (set, value) pair has no zero-padded
    // preimage under a uniformly random map. Reported in diagnostics.
    double per_pair_failure = 0.0;
};

// Sample-and-verify with seeded randomness; throws after max_tries
// rejections with the failure bound in the message.
WerfSample random_werf(int m, int d, int t, std::uint64_t seed, int max_tries = 64);

// A bin holds at most one key from [1, M]. contents(y) returns 0 for the
// empty bin, otherwise the key. Implementations are immutable.
class Bin {
public:
    virtual ~Bin() = default;

    int arity() const { return arity_; }
    int key_count() const { return key_count_; }

    virtual std::uint32_t contents(std::uint64_t y) const = 0;

    // Keys k with some completion of the partial assignment (mask, bits)
    // whose contents equal {k}. out[k-1] is set accordingly.
    virtual void consistent_keys(std::uint64_t mask, std::uint64_t bits,
                                 std::vector<char>& out) const = 0;

    virtual std::string kind() const = 0;
    virtual nlohmann::json to_json() const = 0;

protected:
    Bin(int arity, int key_count);

    int arity_;
    int key_count_;
};

using BinPtr = std::shared_ptr<const Bin>;

// Explicit contents array, one entry per input.
class TableBin final : public Bin {
public:
    TableBin(int arity, int key_count, std::vector<std::uint32_t> contents_table);

    std::uint32_t contents(std::uint64_t y) const override { return table_[y]; }
    void consistent_keys(std::uint64_t mask, std::uint64_t bits,
                         std::vector<char>& out) const override;
    std::string kind() const override { return "table"; }
    nlohmann::json to_json() const override;

    // The contents map as a function table, alphabet 0..M.
    TruthTable contents_table() const;

private:
    std::vector<std::uint32_t> table_;
};

// y = (x, WtK, KtW): x feeds a total unique search problem W; WtK holds one
// resilient-encoded key entry per witness (witnesses ordered
// lexicographically by pattern); KtW holds one witness index per key, with
// entry values >= |W| decoding as value mod |W|. The bin holds k exactly
// when the two tables agree through the witness of x.
class StructuredBin final : public Bin {
public:
    StructuredBin(SearchProblem tusp, Werf werf, int key_count);

    std::uint32_t contents(std::uint64_t y) const override;
    void consistent_keys(std::uint64_t mask, std::uint64_t bits,
                         std::vector<char>& out) const override;
    std::string kind() const override { return "structured"; }
    nlohmann::json to_json() const override;

    const SearchProblem& tusp() const { return tusp_; }
    const Werf& werf() const { return werf_; }
    int x_bits() const { return x_bits_; }
    int wtk_offset() const { return wtk_offset_; }
    int ktw_offset() const { return ktw_offset_; }
    int wtk_entry_bits() const { return werf_.input_bits(); }
    int ktw_entry_bits() const { return ktw_entry_bits_; }
    int witness_count() const { return tusp_.witness_count(); }
    int decode_ktw(std::uint32_t value) const {
        return static_cast<int>(value % static_cast<std::uint32_t>(witness_count()));
    }

private:
    SearchProblem tusp_;  // witnesses stored in lexicographic pattern order
    Werf werf_;
    int x_bits_;
    int wtk_offset_;
    int ktw_offset_;
    int ktw_entry_bits_;
};

// Blockwise-parity stretch of a base bin: input is c times longer and the
// contents are the base contents of the per-block parities.
class LiftedBin final : public Bin {
public:
    LiftedBin(BinPtr base, int factor);

    std::uint32_t contents(std::uint64_t y) const override;
    void consistent_keys(std::uint64_t mask, std::uint64_t bits,
                         std::vector<char>& out) const override;
    std::string kind() const override { return "lifted"; }
    nlohmann::json to_json() const override;

    const BinPtr& base() const { return base_; }
    int factor() const { return factor_; }

private:
    // Base-level partial assignment induced by a lifted one: a base bit is
    // pinned only when its whole block is.
    void induced(std::uint64_t mask, std::uint64_t bits, std::uint64_t& base_mask,
                 std::uint64_t& base_bits) const;

    BinPtr base_;
    int factor_;
};

BinPtr make_table_bin(int arity, int key_count, std::vector<std::uint32_t> contents_table);

// Structured bin with keyspace matching the encoder range (M = werf.d).
// The search problem must be total and unique with at least two witnesses.
BinPtr build_mystery_bin(const SearchProblem& tusp, const Werf& werf, int key_count);

// factor = 1 returns the same bin.
BinPtr xor_lift(BinPtr bin, int factor);

// Adversary for a lifted bin: zeros inside each block until the block's
// last ("critical") bit, which is chosen so that the block parity matches
// the base adversary's answer.
std::shared_ptr<AdversaryStrategy> zeros_until_critical_adversary(
    const LiftedBin& bin, std::shared_ptr<AdversaryStrategy> base_adversary);

BinPtr bin_from_json(const nlohmann::json& j);

struct StrategyReport {
    int worst_queries = 0;
    bool all_correct = true;
};

// Computes contents through an oracle; counts distinct bits read.
std::uint32_t run_contents_strategy(const Bin& bin, const BitOracle& oracle, int* queries);
// Decides whether key k is the contents; reads the key-to-witness entry,
// then the witness-to-key entry, then only the fixed positions of the
// decoded witness.
bool run_membership_strategy(const Bin& bin, int k, const BitOracle& oracle, int* queries);

// Worst case over every input; arity <= 20.
StrategyReport measure_contents_strategy(const Bin& bin);
StrategyReport measure_membership_strategy(const Bin& bin, int k);

struct SecurityResult {
    Rational beta;  // |H| / M under optimal play
    std::shared_ptr<AdversaryStrategy> adversary;
};

// Exact value of the q-query hiding game: the adversary answers queries to
// maximize, the querier picks indices to minimize, the number of keys still
// consistent with the bits fixed after q queries. Alternating minimax
// memoized on the partial assignment. q <= arity; arity <= 20 for
// structured and lifted bins, <= 12 for table bins.
SecurityResult security(BinPtr bin, int q);

struct MbfCheck {
    bool pass = false;
    std::string label;
    std::string measured;
    std::string bound;
};

struct MbfReport {
    std::vector<MbfCheck> checks;  // contents cost, membership cost, security
    bool pass() const;
};

// Certifies the three bin properties against budget T and fraction delta:
// contents computable in <= T queries, any membership decidable in
// <= delta*T, and security at floor((1-delta)*T) queries >= 1-delta.
MbfReport certify_mbf(BinPtr bin, int budget, const Rational& delta);

}  // namespace qlab

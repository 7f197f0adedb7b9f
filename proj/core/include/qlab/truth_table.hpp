#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qlab {

// Hard cap on single-function arity. Exceeding it is a validation error.
inline constexpr int kMaxArity = 24;

// A total function {0,1}^n -> [0, alphabet). Outputs are indexed by the
// input read as an integer: bit i of the index is the value of variable
// x_{i+1}. Variables are 1-based in every public signature.
//
// Immutable after construction; safe to share across threads.
class TruthTable {
public:
    // Defaults to the constant-0 function on zero variables.
    TruthTable() : n_(0), alphabet_(1), out_{0} {}
    TruthTable(int n, std::uint32_t alphabet_size, std::vector<std::uint32_t> outputs);

    static TruthTable constant(int n, std::uint32_t alphabet_size, std::uint32_t value);
    // f(x) = x_i, Boolean.
    static TruthTable variable(int n, int i);
    static TruthTable from_eval(int n, std::uint32_t alphabet_size,
                                const std::function<std::uint32_t(std::uint64_t)>& eval);

    int arity() const { return n_; }
    std::uint32_t alphabet_size() const { return alphabet_; }
    std::uint64_t domain_size() const { return 1ull << n_; }
    std::uint32_t value(std::uint64_t x) const { return out_[x]; }
    const std::vector<std::uint32_t>& outputs() const { return out_; }

    // Fixes x_i = bit and renumbers the remaining variables, preserving order.
    TruthTable restricted(int i, int bit) const;

    bool is_constant() const;

    // Packed byte string; equal tables produce equal keys.
    std::string canonical_key() const;

    friend bool operator==(const TruthTable& a, const TruthTable& b) {
        return a.n_ == b.n_ && a.alphabet_ == b.alphabet_ && a.out_ == b.out_;
    }

    // {"n":..,"alphabet":..,"outputs":"<hex>"}; symbols packed at
    // ceil(log2(alphabet)) bits each, little-endian within the hex string.
    nlohmann::json to_json() const;
    static TruthTable from_json(const nlohmann::json& j);

private:
    int n_;
    std::uint32_t alphabet_;
    std::vector<std::uint32_t> out_;
};

// A partial assignment of variables; carries the bits fixed so far when
// simulating query strategies.
struct Restriction {
    int n = 0;
    std::uint32_t mask = 0;  // bit i set => x_{i+1} fixed
    std::uint32_t bits = 0;  // fixed values; bits & ~mask == 0

    bool fixes(int i) const { return (mask >> (i - 1)) & 1u; }
    int value_of(int i) const { return (bits >> (i - 1)) & 1u; }
    Restriction with(int i, int bit) const;
    // Applies the fixed variables to f via iterated restriction.
    TruthTable apply(const TruthTable& f) const;
};

// An ordered list of l >= 1 nonconstant Boolean functions on a common input.
class FunctionFamily {
public:
    explicit FunctionFamily(std::vector<TruthTable> members);

    int arity() const { return n_; }
    int size() const { return static_cast<int>(members_.size()); }
    const TruthTable& member(int i) const { return members_[i]; }  // 0-based
    const std::vector<TruthTable>& members() const { return members_; }

    // The joint function for the selected members: output bit r is the value
    // of the r-th selected member (by ascending index), so the tuple reads as
    // an integer in an alphabet of size 2^popcount(select). select != 0.
    TruthTable bundle(std::uint32_t select) const;

    nlohmann::json to_json() const;
    static FunctionFamily from_json(const nlohmann::json& j);

private:
    int n_;
    std::vector<TruthTable> members_;
};

}  // namespace qlab

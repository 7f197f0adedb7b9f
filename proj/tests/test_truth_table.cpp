#include "qlab/truth_table.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "qlab/rng.hpp"

using qlab::FunctionFamily;
using qlab::Rng;
using qlab::TruthTable;

namespace {

TruthTable majority3() {
    return TruthTable::from_eval(3, 2, [](std::uint64_t x) {
        return std::uint32_t(std::popcount(static_cast<std::uint32_t>(x)) >= 2);
    });
}

}  // namespace

TEST_CASE("restricting the identity on one variable leaves a constant") {
    TruthTable f = TruthTable::variable(1, 1);
    TruthTable g = f.restricted(1, 1);
    CHECK(g.arity() == 0);
    CHECK(g.value(0) == 1);
    CHECK(g.is_constant());
}

TEST_CASE("restricting xor by zero leaves the other variable") {
    TruthTable f = TruthTable::from_eval(
        2, 2, [](std::uint64_t x) { return std::uint32_t((x ^ (x >> 1)) & 1u); });
    CHECK(f.restricted(1, 0) == TruthTable::variable(1, 1));
}

TEST_CASE("restricting majority-of-3 gives an OR of the remaining bits") {
    TruthTable g = majority3().restricted(3, 1);
    // Expected values computed by enumerating all four remaining inputs.
    TruthTable or2 = TruthTable::from_eval(
        2, 2, [](std::uint64_t x) { return std::uint32_t(x != 0); });
    CHECK(g == or2);
}

TEST_CASE("is_constant") {
    CHECK(TruthTable::constant(3, 2, 0).is_constant());
    CHECK_FALSE(TruthTable::variable(2, 1).is_constant());
    TruthTable and4 = TruthTable::from_eval(
        4, 2, [](std::uint64_t x) { return std::uint32_t(x == 0xf); });
    CHECK_FALSE(and4.is_constant());
}

TEST_CASE("restriction order does not matter") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.below(3));
        TruthTable f = oracles::random_table(n, 2 + static_cast<std::uint32_t>(rng.below(3)), rng);
        int i = 1 + static_cast<int>(rng.below(std::uint64_t(n)));
        int j = 1 + static_cast<int>(rng.below(std::uint64_t(n)));
        if (i == j) continue;
        int bi = rng.bit(), bj = rng.bit();
        // Fixing x_i then x_j must match fixing x_j then x_i, after the
        // index shift a lower restriction applies to a higher one.
        TruthTable a = f.restricted(i, bi).restricted(j > i ? j - 1 : j, bj);
        TruthTable b = f.restricted(j, bj).restricted(i > j ? i - 1 : i, bi);
        CHECK(a == b);
    }
}

TEST_CASE("bundle of a single member is that member") {
    FunctionFamily family({TruthTable::variable(2, 1), TruthTable::variable(2, 2)});
    CHECK(family.bundle(0b01) == TruthTable::variable(2, 1));
    CHECK(family.bundle(0b10) == TruthTable::variable(2, 2));
}

TEST_CASE("bundle tuple encoding ranks members by index") {
    FunctionFamily family({TruthTable::variable(2, 1), TruthTable::variable(2, 2)});
    TruthTable both = family.bundle(0b11);
    CHECK(both.alphabet_size() == 4);
    // Inputs 00,01,10,11 (x1 low bit) evaluate to 0,1,2,3.
    CHECK(both.value(0) == 0);
    CHECK(both.value(1) == 1);
    CHECK(both.value(2) == 2);
    CHECK(both.value(3) == 3);
}

TEST_CASE("bundle of a repeated member doubles its bit") {
    FunctionFamily family({TruthTable::variable(2, 1), TruthTable::variable(2, 1)});
    TruthTable both = family.bundle(0b11);
    CHECK(both.value(0) == 0);
    CHECK(both.value(1) == 3);
    CHECK(both.value(2) == 0);
    CHECK(both.value(3) == 3);
}

TEST_CASE("unit bundles equal members for every family") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng.below(3));
        int l = 1 + static_cast<int>(rng.below(3));
        std::vector<TruthTable> members;
        for (int i = 0; i < l; ++i) members.push_back(oracles::random_nonconstant(n, rng));
        FunctionFamily family(members);
        for (int i = 0; i < l; ++i) CHECK(family.bundle(1u << i) == members[i]);
    }
}

TEST_CASE("family construction validates") {
    CHECK_THROWS_AS(FunctionFamily({TruthTable::constant(2, 2, 1)}), std::invalid_argument);
    CHECK_THROWS_AS(
        FunctionFamily({TruthTable::variable(2, 1), TruthTable::variable(3, 1)}),
        std::invalid_argument);
    FunctionFamily ok({TruthTable::variable(2, 1)});
    CHECK_THROWS_AS(ok.bundle(0), std::invalid_argument);
}

TEST_CASE("table validation") {
    CHECK_THROWS_AS(TruthTable(25, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(TruthTable(1, 2, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(TruthTable(1, 2, {0}), std::invalid_argument);
    CHECK_THROWS_AS(TruthTable::variable(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(TruthTable::variable(2, 1).restricted(3, 0), std::invalid_argument);
}

TEST_CASE("json hex packing golden value") {
    // x1 on two variables: outputs 0,1,0,1 at one bit each -> byte 0x0a.
    nlohmann::json j = TruthTable::variable(2, 1).to_json();
    CHECK(j.at("n") == 2);
    CHECK(j.at("alphabet") == 2);
    CHECK(j.at("outputs") == "0a");
}

TEST_CASE("json round trip is exact") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        int n = static_cast<int>(rng.below(5));
        std::uint32_t alphabet = 1 + static_cast<std::uint32_t>(rng.below(9));
        TruthTable f = oracles::random_table(n, alphabet, rng);
        CHECK(TruthTable::from_json(f.to_json()) == f);
    }
    FunctionFamily family({TruthTable::variable(3, 2), majority3()});
    CHECK(FunctionFamily::from_json(family.to_json()).bundle(0b11) == family.bundle(0b11));
}

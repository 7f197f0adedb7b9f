#include "qlab/decision_tree.hpp"

#include <bit>

#include "doctest.h"
#include "oracles.hpp"
#include "qlab/depth_engine.hpp"
#include "qlab/ecf.hpp"
#include "qlab/rng.hpp"

using qlab::DecisionTree;
using qlab::DepthEngine;
using qlab::FunctionFamily;
using qlab::Rng;
using qlab::TruthTable;

namespace {

TruthTable xor_n(int n) {
    return TruthTable::from_eval(n, 2, [](std::uint64_t x) {
        return std::uint32_t(std::popcount(x) & 1);
    });
}

TruthTable and_n(int n) {
    return TruthTable::from_eval(n, 2, [n](std::uint64_t x) {
        return std::uint32_t(x == (1ull << n) - 1);
    });
}

TruthTable or_n(int n) {
    return TruthTable::from_eval(n, 2, [](std::uint64_t x) { return std::uint32_t(x != 0); });
}

}  // namespace

TEST_CASE("depth basics") {
    CHECK(qlab::depth(TruthTable::variable(3, 1)) == 1);
    CHECK(qlab::depth(TruthTable::constant(4, 3, 2)) == 0);
    CHECK(qlab::depth(xor_n(4)) == 4);  // agrees with the plain recursion below
    CHECK(oracles::plain_depth(xor_n(4)) == 4);
}

TEST_CASE("depth equals plain recursion on random small functions") {
    Rng rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng.below(4));
        std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.below(2));
        TruthTable f = oracles::random_table(n, alphabet, rng);
        CHECK(qlab::depth(f) == oracles::plain_depth(f));
    }
}

TEST_CASE("depth engine rejects arity above the cap") {
    CHECK_THROWS_AS(qlab::depth(TruthTable::variable(5, 1), 4), std::invalid_argument);
}

TEST_CASE("multitask cost tables") {
    FunctionFamily two_vars({TruthTable::variable(2, 1), TruthTable::variable(2, 2)});
    CHECK(qlab::multitask_cost(two_vars).values == std::vector<std::int64_t>{0, 1, 1, 2});

    FunctionFamily repeated({TruthTable::variable(1, 1), TruthTable::variable(1, 1)});
    CHECK(qlab::multitask_cost(repeated).values[0b11] == 1);

    FunctionFamily mixed({TruthTable::variable(2, 1), and_n(2)});
    qlab::CostTable table = qlab::multitask_cost(mixed);
    CHECK(table.values[0b10] == 2);
    CHECK(table.values[0b11] == 2);
}

TEST_CASE("optimal trees are minimal and deterministic") {
    DecisionTree just_x2 = qlab::optimal_tree(TruthTable::variable(2, 2));
    CHECK(just_x2.depth() == 1);
    CHECK(just_x2.node(just_x2.root()).query == 2);

    DecisionTree and2 = qlab::optimal_tree(and_n(2));
    CHECK(and2.depth() == 2);
    CHECK(and2.node(and2.root()).query == 1);  // smallest index wins ties

    DecisionTree leaf = qlab::optimal_tree(TruthTable::constant(3, 2, 1));
    CHECK(leaf.depth() == 0);
    CHECK(leaf.node(leaf.root()).label == 1);
}

TEST_CASE("optimal trees compute their function") {
    Rng rng(555);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng.below(4));
        TruthTable f = oracles::random_table(n, 2 + static_cast<std::uint32_t>(rng.below(3)), rng);
        DecisionTree tree = qlab::optimal_tree(f);
        CHECK(tree.well_formed());
        CHECK(tree.depth() == qlab::depth(f));
        for (std::uint64_t x = 0; x < f.domain_size(); ++x)
            CHECK(tree.run(x).label == f.value(x));
    }
}

TEST_CASE("run_tree transcripts") {
    DecisionTree leaf = DecisionTree::leaf(2, 3, 2);
    auto res = qlab::run_tree(leaf, 0b01);
    CHECK(res.label == 2);
    CHECK(res.transcript.empty());

    DecisionTree::Builder b(2, 2);
    int l0 = b.add_leaf(0), l1 = b.add_leaf(1);
    int q2a = b.add_node(2, l0, l1);
    int q2b = b.add_node(2, l1, l0);
    DecisionTree tree = b.finish(b.add_node(1, q2a, q2b));
    auto run = qlab::run_tree(tree, oracles::parse_input("10"));
    CHECK(run.transcript == qlab::Transcript{{1, 1}, {2, 0}});

    DecisionTree xtree = qlab::optimal_tree(xor_n(2));
    auto xrun = qlab::run_tree(xtree, 0b11);
    CHECK(xrun.label == 0);
    CHECK(xrun.transcript.size() == 2);
}

TEST_CASE("compose_trees pairs outputs and contracts repeats") {
    DecisionTree t1 = qlab::optimal_tree(TruthTable::variable(2, 1));
    DecisionTree t2 = qlab::optimal_tree(TruthTable::variable(2, 2));
    DecisionTree pair = qlab::compose_trees(t1, t2);
    CHECK(pair.depth() == 2);
    for (std::uint64_t x = 0; x < 4; ++x)
        CHECK(pair.run(x).label == (x & 1u) * 2 + ((x >> 1) & 1u));

    DecisionTree same = qlab::compose_trees(t1, t1);
    CHECK(same.depth() == 1);

    DecisionTree t3 = qlab::optimal_tree(and_n(2));
    CHECK(qlab::compose_trees(t3, t1).depth() == 2);
}

TEST_CASE("composition stays within additive depth on random bundles") {
    Rng rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng.below(3));
        int l = 2 + static_cast<int>(rng.below(2));
        std::vector<TruthTable> members;
        for (int i = 0; i < l; ++i) members.push_back(oracles::random_nonconstant(n, rng));
        FunctionFamily family(members);
        std::uint32_t all = (1u << l) - 1;
        for (std::uint32_t x = 1; x <= all; ++x)
            for (std::uint32_t y = 1; y <= all; ++y) {
                DecisionTree tx = qlab::optimal_tree(family.bundle(x));
                DecisionTree ty = qlab::optimal_tree(family.bundle(y));
                CHECK(qlab::compose_trees(tx, ty).depth() <= tx.depth() + ty.depth());
                // Joint computation is never harder than composing.
                CHECK(qlab::depth(family.bundle(x | y)) <= tx.depth() + ty.depth());
            }
    }
}

TEST_CASE("produced cost tables are monotone and satisfy the axioms") {
    Rng rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng.below(4));
        int l = 1 + static_cast<int>(rng.below(3));
        std::vector<TruthTable> members;
        for (int i = 0; i < l; ++i) members.push_back(oracles::random_nonconstant(n, rng));
        qlab::CostTable table = qlab::multitask_cost(FunctionFamily(members));
        CHECK(qlab::validate_ecf(table).pass());
        for (std::uint32_t x = 0; x < table.selector_count(); ++x)
            for (std::uint32_t y = x; y < table.selector_count(); ++y)
                if ((x & y) == x) CHECK(table.values[x] <= table.values[y]);
    }
}

TEST_CASE("greedy adversary on xor answers 0 first") {
    auto adversary = qlab::extract_adversary(xor_n(2));
    CHECK(adversary->answer({}, 1) == 0);
    CHECK(adversary->answer({}, 2) == 0);
}

TEST_CASE("greedy adversary on OR answers 0 to every query") {
    auto adversary = qlab::extract_adversary(or_n(3));
    CHECK(adversary->answer({}, 2) == 0);
    CHECK(adversary->answer({{2, 0}}, 3) == 0);
    CHECK(adversary->answer({{2, 0}, {3, 0}}, 1) == 0);
    // After two zero answers the value is still open.
    CHECK(oracles::adversary_survives_all(or_n(3), *adversary, 2));
}

TEST_CASE("adversary property is vacuous at depth one") {
    auto adversary = qlab::extract_adversary(TruthTable::variable(2, 1));
    CHECK(oracles::adversary_survives_all(TruthTable::variable(2, 1), *adversary, 0));
}

TEST_CASE("adversary beats every shallow tree on sampled functions") {
    Rng rng(4242);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 2 + static_cast<int>(rng.below(3));
        TruthTable f = oracles::random_nonconstant(n, rng);
        auto adversary = qlab::extract_adversary(f);
        CHECK(oracles::adversary_survives_all(f, *adversary, qlab::depth(f) - 1));
    }
}

TEST_CASE("adversary extraction rejects constants") {
    CHECK_THROWS_AS(qlab::extract_adversary(TruthTable::constant(2, 2, 0)),
                    std::invalid_argument);
}

TEST_CASE("cost table json") {
    qlab::CostTable t = qlab::multitask_cost(
        FunctionFamily({TruthTable::variable(2, 1), TruthTable::variable(2, 2)}));
    nlohmann::json j = t.to_json();
    CHECK(j.at("l") == 2);
    CHECK(j.at("values") == nlohmann::json({0, 1, 1, 2}));
    CHECK(qlab::CostTable::from_json(j) == t);
}

TEST_CASE("tree json nesting") {
    DecisionTree tree = qlab::optimal_tree(TruthTable::variable(1, 1));
    nlohmann::json j = tree.to_json();
    CHECK(j.at("q") == 1);
    CHECK(j.at("0").at("leaf") == 0);
    CHECK(j.at("1").at("leaf") == 1);
}

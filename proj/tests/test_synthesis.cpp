#include "qlab/synthesis.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "qlab/ecf.hpp"
#include "qlab/rng.hpp"

using qlab::BinPtr;
using qlab::SynthesisSpec;
using qlab::TruthTable;
using qlab::WeightedSetSystem;

namespace {

BinPtr unit_bin() { return qlab::make_table_bin(1, 1, {0, 1}); }

// Two unit-weight elements sharing one set; members become an AND.
SynthesisSpec and_instance() {
    return SynthesisSpec(WeightedSetSystem({{"u", 1}, {"v", 1}}, {{0, 1}}), 1,
                         {unit_bin(), unit_bin()});
}

SynthesisSpec intro_instance() {
    return SynthesisSpec(
        WeightedSetSystem({{"u1", 1}, {"u2", 1}, {"u3", 1}}, {{0, 1}, {0, 2}, {1, 2}}), 1,
        {unit_bin(), unit_bin(), unit_bin()});
}

}  // namespace

TEST_CASE("family from a single one-bit bin is the identity") {
    SynthesisSpec spec(WeightedSetSystem({{"u", 1}}, {{0}}), 1, {unit_bin()});
    qlab::FunctionFamily family = qlab::build_family(spec);
    CHECK(family.member(0) == TruthTable::variable(1, 1));
}

TEST_CASE("family over a two-element set is the AND of the bins") {
    qlab::FunctionFamily family = qlab::build_family(and_instance());
    TruthTable expect = TruthTable::from_eval(
        2, 2, [](std::uint64_t x) { return std::uint32_t(x == 3); });
    CHECK(family.member(0) == expect);
}

TEST_CASE("equal sets give equal members") {
    SynthesisSpec spec(WeightedSetSystem({{"u", 1}, {"v", 1}}, {{0, 1}, {0, 1}}), 1,
                       {unit_bin(), unit_bin()});
    qlab::FunctionFamily family = qlab::build_family(spec);
    CHECK(family.member(0) == family.member(1));
}

TEST_CASE("a bin that is always empty degenerates and is rejected") {
    BinPtr empty = qlab::make_table_bin(1, 1, {0, 0});
    SynthesisSpec spec(WeightedSetSystem({{"u", 1}}, {{0}}), 1, {empty});
    CHECK_THROWS_AS(qlab::build_family(spec), std::invalid_argument);
}

TEST_CASE("weight lifting stretches blocks by their weight") {
    WeightedSetSystem weighted({{"u", 1}, {"v", 2}}, {{0, 1}});
    SynthesisSpec spec = qlab::lift_bins_by_weight(unit_bin(), weighted);
    CHECK(spec.bin(0)->arity() == 1);  // weight 1 keeps the base bin
    CHECK(spec.bin(1)->arity() == 2);
    int base_cost = qlab::measure_contents_strategy(*unit_bin()).worst_queries;
    CHECK(qlab::measure_contents_strategy(*spec.bin(1)).worst_queries <= 2 * base_cost);

    WeightedSetSystem unit({{"u", 1}, {"v", 1}}, {{0, 1}});
    SynthesisSpec same = qlab::lift_bins_by_weight(unit_bin(), unit);
    CHECK(same.bin(0)->arity() == 1);
    CHECK(same.bin(1)->arity() == 1);
}

TEST_CASE("two-phase solver on the AND instance") {
    qlab::TwoPhaseReport report = qlab::measure_two_phase(and_instance(), 0b1);
    CHECK(report.outputs_correct);
    CHECK(report.worst_queries == 2);
}

TEST_CASE("two-phase outputs match the members everywhere") {
    SynthesisSpec spec = intro_instance();
    for (std::uint32_t select = 1; select < 8; ++select) {
        qlab::TwoPhaseReport report = qlab::measure_two_phase(spec, select);
        CHECK(report.outputs_correct);
    }
}

TEST_CASE("two-phase depth upper-bounds the exact joint cost") {
    SynthesisSpec spec = intro_instance();
    qlab::CostTable joint = qlab::multitask_cost(qlab::build_family(spec));
    for (std::uint32_t select = 1; select < 8; ++select)
        CHECK(joint.at(select) <= qlab::measure_two_phase(spec, select).worst_queries);
}

TEST_CASE("two-phase on a structured-bin instance") {
    BinPtr bin = qlab::build_mystery_bin(
        qlab::SearchProblem::from_patterns(1, {"0", "1"}), qlab::parity_werf(2), 2);
    SynthesisSpec spec(WeightedSetSystem({{"a", 1}, {"b", 1}}, {{0, 1}}), 2, {bin, bin});
    qlab::TwoPhaseReport report = qlab::measure_two_phase(spec, 0b1);
    CHECK(report.outputs_correct);
    // Phase 1 reads one bin in full (<= 4), phase 2 one membership (<= 4).
    CHECK(report.worst_queries <= 8);
}

TEST_CASE("composite adversary routes by block") {
    SynthesisSpec spec = and_instance();
    auto adversary = qlab::composite_adversary(spec, {1, 1});
    // Queries to the other block do not change a bin's answers.
    int plain = adversary->answer({}, 1);
    int routed = adversary->answer({{2, 1}}, 1);
    CHECK(plain == routed);
    // Both single queries leave the AND undetermined: the kept-alive key
    // forces the queried bit to 1, so the member still depends on the
    // other block.
    qlab::FunctionFamily family = qlab::build_family(spec);
    for (int query = 1; query <= 2; ++query) {
        int bit = adversary->answer({}, query);
        qlab::Restriction r{2, 0, 0};
        r = r.with(query, bit);
        CHECK_FALSE(r.apply(family.member(0)).is_constant());
    }
}

TEST_CASE("sandwich report on the AND instance") {
    SynthesisSpec spec = and_instance();
    qlab::SandwichReport report = qlab::verify_sandwich(spec, 1, {}, qlab::Rational(1));
    CHECK(report.ecf_ok);
    CHECK(report.budgets == std::vector<int>{1, 1});
    REQUIRE(report.rows.size() == 1);
    const qlab::SandwichRow& row = report.rows[0];
    CHECK(row.hitting_cost == 1);
    CHECK(row.joint_cost == 2);
    CHECK(row.two_phase_depth == 2);
    CHECK(row.upper_ok);
    CHECK(row.band_ok);  // 2 lies in [0, 2]
    // One key only: no second consistent key exists, so the union-bound
    // threshold cannot clear, but the exhaustive game still holds here.
    CHECK_FALSE(row.covered);
    CHECK(row.game_ran);
    CHECK(row.game_ok);
    CHECK(report.all_upper_ok());
    CHECK(report.all_covered_games_ok());
}

TEST_CASE("sandwich rows outside the band are reported, not hidden") {
    SynthesisSpec spec = and_instance();
    qlab::SandwichReport tight = qlab::verify_sandwich(spec, 1, {}, qlab::Rational(1, 2));
    CHECK_FALSE(tight.rows[0].band_ok);  // 2 above (1 + 1/2) * 1 * 1
    CHECK(tight.rows[0].upper_ok);
}

TEST_CASE("joint costs are block-symmetric for identical bins") {
    SynthesisSpec ab(WeightedSetSystem({{"a", 1}, {"b", 1}}, {{0, 1}}), 1,
                     {unit_bin(), unit_bin()});
    SynthesisSpec ba(WeightedSetSystem({{"b", 1}, {"a", 1}}, {{0, 1}}), 1,
                     {unit_bin(), unit_bin()});
    CHECK(qlab::multitask_cost(qlab::build_family(ab)).values ==
          qlab::multitask_cost(qlab::build_family(ba)).values);
}

TEST_CASE("families rebuild identically") {
    SynthesisSpec spec = intro_instance();
    qlab::FunctionFamily a = qlab::build_family(spec);
    qlab::FunctionFamily b = qlab::build_family(spec);
    for (int i = 0; i < a.size(); ++i) CHECK(a.member(i) == b.member(i));
}

TEST_CASE("spec json round trips, including the lift form") {
    SynthesisSpec spec = and_instance();
    SynthesisSpec back = SynthesisSpec::from_json(spec.to_json());
    CHECK(back.total_arity() == spec.total_arity());
    CHECK(back.key_count() == 1);

    nlohmann::json lifted{{"system",
                           {{"universe", {{{"id", "u"}, {"w", 2}}, {{"id", "v"}, {"w", 1}}}},
                            {"sets", nlohmann::json::array(
                                         {nlohmann::json::array({"u", "v"})})}}},
                          {"M", 1},
                          {"base_bin", unit_bin()->to_json()},
                          {"lift_by_weight", true}};
    SynthesisSpec from_lift = SynthesisSpec::from_json(lifted);
    CHECK(from_lift.bin(0)->arity() == 2);
    CHECK(from_lift.bin(1)->arity() == 1);
}

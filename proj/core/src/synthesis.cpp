#include "qlab/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "qlab/ecf.hpp"

namespace qlab {

SynthesisSpec::SynthesisSpec(WeightedSetSystem system, int key_count, std::vector<BinPtr> bins)
    : system_(std::move(system)), key_count_(key_count), bins_(std::move(bins)) {
    if (static_cast<int>(bins_.size()) != system_.universe_size())
        throw std::invalid_argument("SynthesisSpec: need exactly one bin per element");
    offsets_.resize(bins_.size());
    int offset = 0;
    for (std::size_t u = 0; u < bins_.size(); ++u) {
        if (!bins_[u]) throw std::invalid_argument("SynthesisSpec: null bin");
        if (bins_[u]->key_count() != key_count_)
            throw std::invalid_argument("SynthesisSpec: bins must share the keyspace");
        offsets_[u] = offset;
        offset += bins_[u]->arity();
    }
    total_arity_ = offset;
    if (total_arity_ > 63) throw std::invalid_argument("SynthesisSpec: total arity above 63");
}

nlohmann::json SynthesisSpec::to_json() const {
    nlohmann::json bins = nlohmann::json::array();
    for (const BinPtr& b : bins_) bins.push_back(b->to_json());
    return {{"system", system_.to_json()}, {"M", key_count_}, {"bins", bins}};
}

SynthesisSpec SynthesisSpec::from_json(const nlohmann::json& j) {
    WeightedSetSystem system = WeightedSetSystem::from_json(j.at("system"));
    int key_count = j.at("M").get<int>();
    if (j.contains("base_bin")) {
        if (!j.value("lift_by_weight", false))
            throw std::invalid_argument("SynthesisSpec: base_bin requires lift_by_weight");
        BinPtr base = bin_from_json(j.at("base_bin"));
        if (base->key_count() != key_count)
            throw std::invalid_argument("SynthesisSpec: base bin keyspace mismatch");
        return lift_bins_by_weight(std::move(base), std::move(system));
    }
    std::vector<BinPtr> bins;
    for (const auto& b : j.at("bins")) bins.push_back(bin_from_json(b));
    return SynthesisSpec(std::move(system), key_count, std::move(bins));
}

SynthesisSpec lift_bins_by_weight(BinPtr base, WeightedSetSystem system) {
    std::vector<BinPtr> bins;
    bins.reserve(system.universe_size());
    for (int u = 0; u < system.universe_size(); ++u)
        bins.push_back(xor_lift(base, static_cast<int>(system.weight(u))));
    int key_count = base->key_count();
    return SynthesisSpec(std::move(system), key_count, std::move(bins));
}

namespace {

// Per-bin contents lookup tables; blocks are small even when the joint
// input is not.
std::vector<std::vector<std::uint32_t>> contents_tables(const SynthesisSpec& spec) {
    std::vector<std::vector<std::uint32_t>> tables(spec.element_count());
    for (int u = 0; u < spec.element_count(); ++u) {
        const Bin& bin = *spec.bin(u);
        if (bin.arity() > 20)
            throw std::invalid_argument("synthesis: bin block above 20 bits");
        tables[u].resize(std::size_t(1) << bin.arity());
        for (std::uint64_t y = 0; y < tables[u].size(); ++y)
            tables[u][y] = bin.contents(y);
    }
    return tables;
}

int member_from_contents(const SynthesisSpec& spec,
                         const std::vector<std::vector<std::uint32_t>>& tables, int set_index,
                         std::uint64_t x) {
    // 1 iff every bin of the set holds the same, nonempty, key.
    std::uint32_t key = 0;
    for (int u : spec.system().set(set_index)) {
        std::uint32_t c = tables[u][spec.block_of(x, u)];
        if (c == 0 || (key != 0 && c != key)) return 0;
        key = c;
    }
    return 1;
}

}  // namespace

int eval_member(const SynthesisSpec& spec, int set_index, std::uint64_t x) {
    std::uint32_t key = 0;
    for (int u : spec.system().set(set_index)) {
        std::uint32_t c = spec.bin(u)->contents(spec.block_of(x, u));
        if (c == 0 || (key != 0 && c != key)) return 0;
        key = c;
    }
    return 1;
}

FunctionFamily build_family(const SynthesisSpec& spec) {
    if (spec.total_arity() > 20)
        throw std::invalid_argument("build_family: total arity above 20");
    auto tables = contents_tables(spec);
    std::vector<TruthTable> members;
    members.reserve(spec.system().set_count());
    for (int i = 0; i < spec.system().set_count(); ++i)
        members.push_back(TruthTable::from_eval(spec.total_arity(), 2, [&](std::uint64_t x) {
            return static_cast<std::uint32_t>(member_from_contents(spec, tables, i, x));
        }));
    return FunctionFamily(std::move(members));  // rejects constant members
}

TwoPhaseRun two_phase_run(const SynthesisSpec& spec, std::uint32_t select,
                          const BitOracle& oracle) {
    if (select == 0) throw std::invalid_argument("two_phase_run: empty selection");
    if (select >> spec.system().set_count())
        throw std::invalid_argument("two_phase_run: selector out of range");

    std::vector<char> seen(spec.total_arity() + 1, 0);
    int distinct = 0;
    BitOracle counted = [&](int i) {
        if (!seen[i]) {
            seen[i] = 1;
            ++distinct;
        }
        return oracle(i);
    };
    auto bin_oracle = [&](int u) {
        int offset = spec.block_offset(u);
        return BitOracle([&counted, offset](int i) { return counted(offset + i); });
    };

    HittingSetResult hitting = min_hitting_set(spec.system(), select);

    // Phase 1: full contents of every hitting-set bin.
    std::map<int, std::uint32_t> known_contents;
    for (int u : hitting.elements)
        known_contents[u] = run_contents_strategy(*spec.bin(u), bin_oracle(u), nullptr);

    // Phase 2: settle each selected member; (element, key) verdicts are
    // reused across members.
    std::map<std::pair<int, int>, bool> verdicts;
    TwoPhaseRun run;
    for (int i = 0; i < spec.system().set_count(); ++i) {
        if (!((select >> i) & 1u)) continue;
        const std::vector<int>& set = spec.system().set(i);
        int witness_u = -1;
        for (int u : set)
            if (known_contents.count(u)) { witness_u = u; break; }
        if (witness_u < 0) throw std::logic_error("two_phase_run: hitting set misses a set");
        std::uint32_t key = known_contents[witness_u];
        int out = 1;
        if (key == 0) {
            out = 0;
        } else {
            for (int u : set) {
                bool holds;
                if (auto it = known_contents.find(u); it != known_contents.end()) {
                    holds = it->second == key;
                } else if (auto it2 = verdicts.find({u, int(key)}); it2 != verdicts.end()) {
                    holds = it2->second;
                } else {
                    holds = run_membership_strategy(*spec.bin(u), static_cast<int>(key),
                                                    bin_oracle(u), nullptr);
                    verdicts[{u, int(key)}] = holds;
                }
                if (!holds) { out = 0; break; }
            }
        }
        run.outputs.push_back(out);
    }
    run.queries = distinct;
    return run;
}

TwoPhaseReport measure_two_phase(const SynthesisSpec& spec, std::uint32_t select) {
    if (spec.total_arity() > 20)
        throw std::invalid_argument("measure_two_phase: total arity above 20");
    auto tables = contents_tables(spec);
    TwoPhaseReport report;
    for (std::uint64_t x = 0; x < (1ull << spec.total_arity()); ++x) {
        TwoPhaseRun run = two_phase_run(
            spec, select, [x](int i) { return static_cast<int>((x >> (i - 1)) & 1u); });
        report.worst_queries = std::max(report.worst_queries, run.queries);
        std::size_t slot = 0;
        for (int i = 0; i < spec.system().set_count(); ++i) {
            if (!((select >> i) & 1u)) continue;
            if (run.outputs[slot++] != member_from_contents(spec, tables, i, x))
                report.outputs_correct = false;
        }
    }
    return report;
}

namespace {

struct PerBinAdversary {
    std::shared_ptr<AdversaryStrategy> strategy;
    int guaranteed_keys = 0;  // surviving keys while the bin stays in budget
};

PerBinAdversary make_bin_adversary(const BinPtr& bin, int budget) {
    PerBinAdversary out;
    if (const auto* lifted = dynamic_cast<const LiftedBin*>(bin.get())) {
        // Within budget the block rule concedes at most floor(budget / c)
        // base answers, so the base adversary plays at that horizon.
        int base_q = std::min(lifted->base()->arity(), budget / lifted->factor());
        SecurityResult base = security(lifted->base(), base_q);
        out.guaranteed_keys =
            static_cast<int>(base.beta.num() * (bin->key_count() / base.beta.den()));
        out.strategy = zeros_until_critical_adversary(*lifted, base.adversary);
    } else {
        int q = std::min(bin->arity(), budget);
        SecurityResult res = security(bin, q);
        out.guaranteed_keys =
            static_cast<int>(res.beta.num() * (bin->key_count() / res.beta.den()));
        out.strategy = res.adversary;
    }
    return out;
}

class CompositeAdversary final : public AdversaryStrategy {
public:
    CompositeAdversary(const SynthesisSpec& spec, std::vector<PerBinAdversary> bins)
        : bins_(std::move(bins)) {
        for (int u = 0; u < spec.element_count(); ++u) {
            offsets_.push_back(spec.block_offset(u));
            widths_.push_back(spec.bin(u)->arity());
        }
    }

    int answer(const Transcript& transcript, int query) const override {
        int u = element_of(query);
        // Each bin sees only its own subsequence, re-indexed locally.
        Transcript local;
        for (const QueryRecord& r : transcript)
            if (element_of(r.index) == u)
                local.push_back(QueryRecord{r.index - offsets_[u], r.bit});
        return bins_[u].strategy->answer(local, query - offsets_[u]);
    }

private:
    int element_of(int index) const {
        for (std::size_t u = 0; u < offsets_.size(); ++u)
            if (index <= offsets_[u] + widths_[u]) return static_cast<int>(u);
        throw std::invalid_argument("composite adversary: query out of range");
    }

    std::vector<PerBinAdversary> bins_;
    std::vector<int> offsets_;
    std::vector<int> widths_;
};

}  // namespace

std::shared_ptr<AdversaryStrategy> composite_adversary(const SynthesisSpec& spec,
                                                       const std::vector<int>& budgets) {
    if (static_cast<int>(budgets.size()) != spec.element_count())
        throw std::invalid_argument("composite_adversary: one budget per element required");
    std::vector<PerBinAdversary> bins;
    for (int u = 0; u < spec.element_count(); ++u)
        bins.push_back(make_bin_adversary(spec.bin(u), budgets[u]));
    return std::make_shared<CompositeAdversary>(spec, std::move(bins));
}

namespace {

// Exhaustive play of every adaptive query strategy of a fixed length
// against a fixed adversary. Answers depend only on the partial assignment
// reached, so states memoize on (mask, bits).
class LowerBoundGame {
public:
    LowerBoundGame(const SynthesisSpec& spec, const FunctionFamily& family,
                   const AdversaryStrategy& adversary, const std::vector<int>& budgets,
                   std::uint32_t select, std::uint64_t state_cap)
        : spec_(spec),
          family_(family),
          adversary_(adversary),
          budgets_(budgets),
          select_(select),
          state_cap_(state_cap) {}

    bool run(int query_count, bool* hit_cap) {
        depth_limit_ = query_count;
        memo_.clear();
        capped_ = false;
        bool ok = explore(0, 0);
        *hit_cap = capped_;
        return ok && !capped_;
    }

private:
    bool explore(std::uint64_t mask, std::uint64_t bits) {
        if (std::popcount(mask) == depth_limit_) return leaf_ok(mask, bits);
        if (capped_) return false;
        std::uint64_t key = mask | (bits << 32);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() >= state_cap_) {
            capped_ = true;
            return false;
        }
        Transcript transcript = transcript_of(mask, bits);
        bool ok = true;
        for (int j = 1; j <= spec_.total_arity() && ok; ++j) {
            std::uint64_t jbit = 1ull << (j - 1);
            if (mask & jbit) continue;
            int b = adversary_.answer(transcript, j);
            ok = explore(mask | jbit, b ? bits | jbit : bits);
        }
        memo_.emplace(key, ok);
        return ok;
    }

    Transcript transcript_of(std::uint64_t mask, std::uint64_t bits) const {
        Transcript t;
        for (int i = 1; i <= spec_.total_arity(); ++i)
            if ((mask >> (i - 1)) & 1u)
                t.push_back(QueryRecord{i, static_cast<int>((bits >> (i - 1)) & 1u)});
        return t;
    }

    bool leaf_ok(std::uint64_t mask, std::uint64_t bits) {
        // Elements driven past their budget form B_P; when B_P misses some
        // selected set entirely, that set's member must still be open.
        std::vector<char> over(spec_.element_count(), 0);
        for (int u = 0; u < spec_.element_count(); ++u) {
            std::uint64_t block = ((1ull << spec_.bin(u)->arity()) - 1)
                                  << spec_.block_offset(u);
            if (std::popcount(mask & block) > budgets_[u]) over[u] = 1;
        }
        bool vacuous = true;
        for (int i = 0; i < spec_.system().set_count() && vacuous; ++i) {
            if (!((select_ >> i) & 1u)) continue;
            bool hit = false;
            for (int u : spec_.system().set(i)) hit = hit || over[u];
            if (!hit) vacuous = false;
        }
        if (vacuous) return true;
        for (int i = 0; i < spec_.system().set_count(); ++i) {
            if (!((select_ >> i) & 1u)) continue;
            bool hit = false;
            for (int u : spec_.system().set(i)) hit = hit || over[u];
            if (!hit && undetermined(i, mask, bits)) return true;
        }
        return false;
    }

    bool undetermined(int i, std::uint64_t mask, std::uint64_t bits) const {
        const TruthTable& f = family_.member(i);
        std::uint64_t full = (1ull << spec_.total_arity()) - 1;
        std::uint64_t free = full & ~mask;
        bool seen0 = false, seen1 = false;
        std::uint64_t sub = 0;
        do {
            (f.value((bits & mask) | sub) ? seen1 : seen0) = true;
            if (seen0 && seen1) return true;
            sub = (sub - free) & free;
        } while (sub != 0);
        return false;
    }

    const SynthesisSpec& spec_;
    const FunctionFamily& family_;
    const AdversaryStrategy& adversary_;
    const std::vector<int>& budgets_;
    std::uint32_t select_;
    std::uint64_t state_cap_;
    int depth_limit_ = 0;
    bool capped_ = false;
    std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace

bool SandwichReport::all_upper_ok() const {
    for (const SandwichRow& r : rows)
        if (!r.upper_ok) return false;
    return true;
}

bool SandwichReport::all_covered_games_ok() const {
    for (const SandwichRow& r : rows)
        if (r.covered && !(r.game_ran && r.game_ok)) return false;
    return true;
}

nlohmann::json SandwichReport::to_json() const {
    nlohmann::json out;
    out["scale"] = scale;
    out["eps"] = eps.str();
    out["budgets"] = budgets;
    out["guaranteed_keys"] = guaranteed_keys;
    out["ecf_ok"] = ecf_ok;
    out["rows"] = nlohmann::json::array();
    for (const SandwichRow& r : rows) {
        out["rows"].push_back({{"X", r.select},
                               {"hitting_cost", r.hitting_cost},
                               {"joint_cost", r.joint_cost},
                               {"two_phase_depth", r.two_phase_depth},
                               {"upper_ok", r.upper_ok},
                               {"band_ok", r.band_ok},
                               {"covered", r.covered},
                               {"game_ran", r.game_ran},
                               {"game_ok", r.game_ok},
                               {"note", r.note}});
    }
    return out;
}

std::string SandwichReport::to_text() const {
    int l = 0;
    for (const SandwichRow& r : rows)
        while ((r.select >> l) != 0) ++l;
    std::ostringstream os;
    os << "scale T=" << scale << "  eps=" << eps.str() << "  budgets=[";
    for (std::size_t u = 0; u < budgets.size(); ++u)
        os << (u ? "," : "") << budgets[u];
    os << "]  guaranteed_keys=[";
    for (std::size_t u = 0; u < guaranteed_keys.size(); ++u)
        os << (u ? "," : "") << guaranteed_keys[u];
    os << "]\n";
    os << "axioms on joint cost table: " << (ecf_ok ? "pass" : "FAIL") << "\n";
    os << "X";
    for (int i = 1; i < l; ++i) os << " ";
    os << "  C_A  C_F  two-phase  upper  band  covered  game\n";
    for (const SandwichRow& r : rows) {
        std::string x;
        for (int i = 0; i < l; ++i) x.push_back((r.select >> i) & 1u ? '1' : '0');
        os << x << "  " << r.hitting_cost << "    " << r.joint_cost << "    " << r.two_phase_depth
           << "          " << (r.upper_ok ? "ok" : "FAIL") << "     "
           << (r.band_ok ? "ok" : "out") << "   " << (r.covered ? "yes" : "no") << "      "
           << (!r.game_ran ? "skipped" : r.game_ok ? "ok" : "FAIL");
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << "\n";
    }
    return os.str();
}

SandwichReport verify_sandwich(const SynthesisSpec& spec, std::int64_t scale,
                               std::vector<int> budgets, const Rational& eps,
                               std::uint64_t game_state_cap) {
    if (scale < 1) throw std::invalid_argument("verify_sandwich: scale must be >= 1");
    if (eps < Rational(0)) throw std::invalid_argument("verify_sandwich: eps must be >= 0");
    const int elements = spec.element_count();
    if (budgets.empty()) {
        for (int u = 0; u < elements; ++u)
            budgets.push_back(measure_contents_strategy(*spec.bin(u)).worst_queries);
    }
    if (static_cast<int>(budgets.size()) != elements)
        throw std::invalid_argument("verify_sandwich: one budget per element required");

    FunctionFamily family = build_family(spec);
    CostTable joint = multitask_cost(family);
    CostTable hitting = hs_cost_table(spec.system());

    SandwichReport report;
    report.budgets = budgets;
    report.scale = scale;
    report.eps = eps;
    report.ecf_ok = validate_ecf(joint).pass();

    // An element counts as heavily queried once it reaches
    // ceil((1 - eps/2) * budget) queries; strictly below that, its bin's
    // adversary guarantees the surviving-key count used for coverage.
    std::vector<int> game_budgets(elements);
    const std::int64_t threshold_num = 2 * eps.den() - eps.num();
    for (int u = 0; u < elements; ++u) {
        std::int64_t t =
            threshold_num <= 0
                ? 0
                : (threshold_num * budgets[u] + 2 * eps.den() - 1) / (2 * eps.den());
        report.thresholds.push_back(static_cast<int>(t));
        game_budgets[u] = std::max(0, static_cast<int>(t) - 1);
    }

    std::vector<PerBinAdversary> per_bin;
    for (int u = 0; u < elements; ++u)
        per_bin.push_back(make_bin_adversary(spec.bin(u), game_budgets[u]));
    for (int u = 0; u < elements; ++u)
        report.guaranteed_keys.push_back(per_bin[u].guaranteed_keys);
    CompositeAdversary adversary(spec, per_bin);

    const int M = spec.key_count();
    for (std::uint32_t select = 1; select < hitting.selector_count(); ++select) {
        SandwichRow row;
        row.select = select;
        row.hitting_cost = hitting.at(select);
        row.joint_cost = joint.at(select);
        row.two_phase_depth = measure_two_phase(spec, select).worst_queries;
        row.upper_ok = row.joint_cost <= row.two_phase_depth;
        // (1-eps)*T*C_A <= C_F <= (1+eps)*T*C_A, compared exactly.
        Rational lo = (Rational(1) - eps) * Rational(scale * row.hitting_cost);
        Rational hi = (Rational(1) + eps) * Rational(scale * row.hitting_cost);
        row.band_ok = Rational(row.joint_cost) >= lo && Rational(row.joint_cost) <= hi;

        // Union-bound threshold: every selected set must keep a shared key
        // plus a second choice somewhere, out of the per-bin guarantees.
        row.covered = true;
        for (int i = 0; i < spec.system().set_count(); ++i) {
            if (!((select >> i) & 1u)) continue;
            const std::vector<int>& set = spec.system().set(i);
            int lost = 0, second = 0;
            for (int u : set) {
                lost += M - per_bin[u].guaranteed_keys;
                second = std::max(second, per_bin[u].guaranteed_keys);
            }
            if (set.size() < 2 || lost >= M || second < 2) row.covered = false;
        }

        if (row.joint_cost >= 1) {
            LowerBoundGame game(spec, family, adversary, game_budgets, select, game_state_cap);
            bool hit_cap = false;
            bool ok = game.run(static_cast<int>(row.joint_cost) - 1, &hit_cap);
            row.game_ran = !hit_cap;
            row.game_ok = ok;
            if (hit_cap) row.note = "game skipped: state cap";
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace qlab

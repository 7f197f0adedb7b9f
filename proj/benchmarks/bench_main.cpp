#include <benchmark/benchmark.h>

#include "qlab/bin.hpp"
#include "qlab/depth_engine.hpp"
#include "qlab/rng.hpp"
#include "qlab/search_problem.hpp"
#include "qlab/set_system.hpp"

namespace {

qlab::TruthTable random_function(int n, std::uint64_t seed) {
    qlab::Rng rng(seed);
    std::vector<std::uint32_t> out(std::size_t(1) << n);
    for (auto& v : out) v = static_cast<std::uint32_t>(rng.bit());
    return qlab::TruthTable(n, 2, std::move(out));
}

void BM_DepthEngine(benchmark::State& state) {
    qlab::TruthTable f = random_function(static_cast<int>(state.range(0)), 17);
    for (auto _ : state) {
        qlab::DepthEngine engine(f);
        benchmark::DoNotOptimize(engine.depth());
    }
}
BENCHMARK(BM_DepthEngine)->Arg(8)->Arg(10)->Arg(12);

void BM_HittingSet(benchmark::State& state) {
    qlab::Rng rng(5);
    const int universe = 20, sets = 8;
    std::vector<qlab::UniverseElement> elements;
    for (int e = 0; e < universe; ++e)
        elements.push_back({"u" + std::to_string(e), 1 + std::int64_t(rng.below(9))});
    std::vector<std::vector<int>> subsets(sets);
    for (auto& s : subsets) {
        while (s.size() < 5) {
            int e = static_cast<int>(rng.below(universe));
            if (std::find(s.begin(), s.end(), e) == s.end()) s.push_back(e);
        }
    }
    qlab::WeightedSetSystem system(std::move(elements), std::move(subsets));
    for (auto _ : state) benchmark::DoNotOptimize(qlab::hs_cost_table(system));
}
BENCHMARK(BM_HittingSet);

void BM_TuspDepth(benchmark::State& state) {
    qlab::Rng rng(23);
    const int n = static_cast<int>(state.range(0));
    // Full patterns make the worst-case number of witnesses.
    std::vector<std::string> patterns;
    for (std::uint64_t x = 0; x < (1ull << n); ++x) {
        std::string p(n, '0');
        for (int i = 0; i < n; ++i)
            if ((x >> i) & 1u) p[i] = '1';
        patterns.push_back(p);
    }
    qlab::SearchProblem problem = qlab::SearchProblem::from_patterns(n, patterns);
    for (auto _ : state) benchmark::DoNotOptimize(qlab::depth_tusp(problem));
}
BENCHMARK(BM_TuspDepth)->Arg(6)->Arg(8);

void BM_SecurityGame(benchmark::State& state) {
    qlab::Rng rng(99);
    const int arity = 10, keys = 4;
    std::vector<std::uint32_t> contents(std::size_t(1) << arity);
    for (auto& c : contents) c = static_cast<std::uint32_t>(rng.below(keys + 1));
    qlab::BinPtr bin = qlab::make_table_bin(arity, keys, std::move(contents));
    for (auto _ : state)
        benchmark::DoNotOptimize(qlab::security(bin, static_cast<int>(state.range(0))).beta);
}
BENCHMARK(BM_SecurityGame)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "consonance/consonance.hpp"

using namespace consonance;

namespace {

std::vector<std::size_t> label_data(std::size_t n, std::size_t k) {
  std::mt19937_64 eng(1);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::vector<std::size_t> d(n);
  for (auto& y : d) y = pick(eng);
  return d;
}

Contour staircase(std::size_t k) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < k; ++i) v.emplace_back(static_cast<std::int64_t>(i + 1), static_cast<std::int64_t>(k));
  return {FiniteOutcomeSpace::indexed(k), std::move(v)};
}

void BM_LabelTransducer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = label_data(n, 5);
  const auto space = FiniteOutcomeSpace::indexed(5);
  const auto psi = NonconformityMeasure::one_minus_empirical();
  for (auto _ : state) benchmark::DoNotOptimize(transduce_grid(data, space, psi));
}
BENCHMARK(BM_LabelTransducer)->Arg(100)->Arg(10000);

void BM_RealTransducer(benchmark::State& state) {
  std::mt19937_64 eng(2);
  std::normal_distribution<double> normal;
  std::vector<double> data(static_cast<std::size_t>(state.range(0)));
  for (auto& y : data) y = normal(eng);
  const GridOutcomeSpace grid(-6, 6, 201);
  const auto psi = NonconformityMeasure::mean_abs();
  for (auto _ : state) benchmark::DoNotOptimize(transduce_grid(data, grid, psi));
}
BENCHMARK(BM_RealTransducer)->Arg(20)->Arg(100)->Arg(1000);

void BM_RegionEquivalence(benchmark::State& state) {
  const auto c = staircase(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_region_equivalence(c));
}
BENCHMARK(BM_RegionEquivalence)->Arg(4)->Arg(8);

void BM_KAlternating(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto up = upper_table(staircase(k));
  for (auto _ : state) benchmark::DoNotOptimize(check_k_alternating(up, 3, k));
}
BENCHMARK(BM_KAlternating)->Arg(3)->Arg(5);

void BM_Mobius(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto bel = lower_table(staircase(k));
  for (auto _ : state) benchmark::DoNotOptimize(mass_from_belief<Rational>(bel, k));
}
BENCHMARK(BM_Mobius)->Arg(6)->Arg(12);

void BM_LowerEntropy(benchmark::State& state) {
  const auto c = staircase(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lower_entropy(c));
}
BENCHMARK(BM_LowerEntropy)->Arg(5)->Arg(8);

void BM_BsaIhdr(benchmark::State& state) {
  const PredictiveFGCS fgcs({{2, 1}, {5, 2}, {12, 3}});
  for (auto _ : state) benchmark::DoNotOptimize(bsa_ihdr(fgcs, 0.1));
}
BENCHMARK(BM_BsaIhdr);

void BM_CoverageCell(benchmark::State& state) {
  const auto spec = ProcessSpec::gaussian(0, 1);
  CoverageOptions opts;
  opts.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_coverage(spec, 20, Rational(1, 5), default_measure(spec), 500, 7, opts));
  }
}
BENCHMARK(BM_CoverageCell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

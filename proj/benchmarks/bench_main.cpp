#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "probint/generator.hpp"
#include "probint/interpolate.hpp"
#include "probint/jointprob.hpp"
#include "probint/oracle.hpp"

namespace {

using namespace probint;

model::Instance smallness_instance() {
  generator::Config cfg;
  cfg.n_min = 8;
  cfg.n_max = 8;
  cfg.m_min = 6;
  cfg.m_max = 6;
  cfg.mode = generator::Mode::Smallness;
  return generator::generate_instance(7, cfg);
}

model::Instance free_instance() {
  generator::Config cfg;
  cfg.n_min = 6;
  cfg.n_max = 6;
  cfg.m_min = 5;
  cfg.m_max = 5;
  return generator::generate_instance(11, cfg);
}

void BM_SigmaSeriesFull(benchmark::State& state) {
  const model::Instance inst = smallness_instance();
  const model::DependencyGraph g =
      model::build_dependency_graph(inst.space, inst.events);
  const int K = static_cast<int>(inst.events.size());
  for (auto _ : state) {
    jointprob::MemoCache cache;
    auto series =
        jointprob::sigma_series(inst.space, inst.events, g, K, {}, &cache);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_SigmaSeriesFull);

void BM_SigmaSeriesMemoized(benchmark::State& state) {
  const model::Instance inst = smallness_instance();
  const model::DependencyGraph g =
      model::build_dependency_graph(inst.space, inst.events);
  const int K = static_cast<int>(inst.events.size());
  jointprob::MemoCache cache;
  jointprob::sigma_series(inst.space, inst.events, g, K, {}, &cache);
  for (auto _ : state) {
    auto series =
        jointprob::sigma_series(inst.space, inst.events, g, K, {}, &cache);
    benchmark::DoNotOptimize(series);
  }
}
BENCHMARK(BM_SigmaSeriesMemoized);

void BM_JointProbabilityFactorized(benchmark::State& state) {
  const model::Instance inst = free_instance();
  std::vector<int> all(inst.events.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  for (auto _ : state) {
    Rational p = jointprob::joint_probability(inst.space, inst.events, all);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_JointProbabilityFactorized);

void BM_ExactComplement(benchmark::State& state) {
  const model::Instance inst = free_instance();
  for (auto _ : state) {
    Rational p =
        oracle::exact_intersection_probability(inst.space, inst.events);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_ExactComplement);

void BM_RootLocalizeDegree8(benchmark::State& state) {
  const model::Instance inst = smallness_instance();
  const model::DependencyGraph g =
      model::build_dependency_graph(inst.space, inst.events);
  jointprob::MemoCache cache;
  const std::vector<Rational> coeffs =
      oracle::full_p_polynomial(inst.space, inst.events, g, {}, &cache);
  const double delta = 1.0 / (6.0 * g.max_degree);
  for (auto _ : state) {
    auto rep = oracle::root_localize(coeffs, delta);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_RootLocalizeDegree8);

void BM_LogTaylorK512(benchmark::State& state) {
  std::vector<double> c(513, 0.0);
  c[0] = 1.0;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coeff(-0.01, 0.01);
  for (int k = 1; k <= 8; ++k) c[k] = coeff(rng);
  for (auto _ : state) {
    auto b = interpolate::log_taylor(c);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_LogTaylorK512);

void BM_EstimatePipeline(benchmark::State& state) {
  const model::Instance inst = smallness_instance();
  for (auto _ : state) {
    interpolate::Estimate est =
        interpolate::estimate_log_intersection(inst.space, inst.events);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(BM_EstimatePipeline);

}  // namespace

BENCHMARK_MAIN();

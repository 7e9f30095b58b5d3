// Serial reference kernels against their OpenMP versions.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "coopreg/kernels.hpp"
#include "coopreg/numlin.hpp"
#include "coopreg/robust.hpp"
#include "coopreg/scenarios.hpp"

namespace coopreg {
namespace {

using Eigen::MatrixXd;

MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n;
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

StateSpace system(int n) {
  std::mt19937_64 rng(1);
  MatrixXd a = random_matrix(rng, n, n);
  a.diagonal().array() -= 2.0 * n;
  return StateSpace(a, random_matrix(rng, n, 2), random_matrix(rng, 3, n), MatrixXd::Zero(3, 2));
}

template <kernels::PeakGain (*Kernel)(const StateSpace&, std::span<const double>)>
void BM_PeakGain(benchmark::State& state) {
  const StateSpace ss = system(static_cast<int>(state.range(0)));
  const auto grid = kernels::logspace(-3.0, 3.0, 4000);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(ss, grid));
}
BENCHMARK(BM_PeakGain<kernels::peak_gain_serial>)->Arg(6)->Arg(24);
BENCHMARK(BM_PeakGain<kernels::peak_gain_omp>)->Arg(6)->Arg(24);

template <kernels::WhitenedGram (*Kernel)(const Eigen::LLT<MatrixXd>&,
                                          std::span<const MatrixXd>)>
void BM_WhitenedGram(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 rng(2);
  const MatrixXd r = random_matrix(rng, n, n);
  const Eigen::LLT<MatrixXd> llt(r * r.transpose() + MatrixXd::Identity(n, n));
  std::vector<MatrixXd> dirs;
  for (Eigen::Index i = 0; i < n * (n + 1) / 2; ++i) {
    const MatrixXd d = random_matrix(rng, n, n);
    dirs.push_back(d + d.transpose());
  }
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(llt, dirs));
}
BENCHMARK(BM_WhitenedGram<kernels::whitened_gram_serial>)->Arg(8)->Arg(16);
BENCHMARK(BM_WhitenedGram<kernels::whitened_gram_omp>)->Arg(8)->Arg(16);

void BM_UncertaintyBound(benchmark::State& state) {
  const Scenario s = helicopter_scenario();
  std::vector<MatrixXd> acl, b;
  for (const auto& a : s.problem.agents) {
    const MatrixXd f = lqr_gain(a.A, a.B, s.options.lqr_Q, *s.options.lqr_R_robust);
    acl.push_back(a.A - a.B * f);
    b.push_back(a.B);
  }
  const UncertainDecomposition dec = decompose(acl, b);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(uncertainty_bound(dec.deltas, nullptr, parallel));
}
BENCHMARK(BM_UncertaintyBound)->ArgName("parallel")->Arg(0)->Arg(1);

}  // namespace
}  // namespace coopreg

BENCHMARK_MAIN();

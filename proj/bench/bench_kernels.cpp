// Serial reference vs OpenMP versions of the O(m^2) kernels, plus one full
// weighted least-squares step for scale.
#include "cmlr/irls.hpp"
#include "cmlr/kernels.hpp"
#include "cmlr/rng.hpp"
#include "cmlr/synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace cmlr;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

MatrixXd weights(Eigen::Index m) {
  MatrixXd w;
  kernels::serial::reweight(random_matrix(5, m, 2), 1e-16, w);
  return w;
}

template <double (*F)(const MatrixXd&)>
void distance_sum(benchmark::State& state) {
  const MatrixXd zt = random_matrix(8, state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(F(zt));
  state.SetComplexityN(state.range(0));
}

template <void (*F)(const MatrixXd&, double, MatrixXd&)>
void reweight(benchmark::State& state) {
  const MatrixXd zt = random_matrix(8, state.range(0), 1);
  MatrixXd w;
  for (auto _ : state) {
    F(zt, 1e-16, w);
    benchmark::DoNotOptimize(w.data());
  }
}

template <void (*F)(const MatrixXd&, const MatrixXd&, Eigen::Index, MatrixXd&)>
void hessian(benchmark::State& state) {
  const Eigen::Index m = state.range(0), block = 4;
  const MatrixXd n = random_matrix(5, m * block, 3);
  const MatrixXd gram = n.transpose() * n;
  const MatrixXd w = weights(m);
  MatrixXd h;
  for (auto _ : state) {
    F(gram, w, block, h);
    benchmark::DoNotOptimize(h.data());
  }
}

void ls_step(benchmark::State& state) {
  const auto inst = gen_sim1({.k = 3, .d = 5, .per_class = state.range(0) / 3 / 2 * 2, .alpha = 0.1, .seed = 1});
  const WeightMatrix w = update_weights(candidate_solution(inst.data, inst.model), 1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_ls_step(inst.data, w).estimates.values().data());
}

}  // namespace

BENCHMARK(distance_sum<kernels::serial::pairwise_distance_sum>)->Name("distance_sum/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(distance_sum<kernels::pairwise_distance_sum>)->Name("distance_sum/omp")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(reweight<kernels::serial::reweight>)->Name("reweight/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(reweight<kernels::reweight>)->Name("reweight/omp")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(hessian<kernels::serial::assemble_reduced_hessian>)->Name("hessian/serial")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(hessian<kernels::assemble_reduced_hessian>)->Name("hessian/omp")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(ls_step)->Arg(48)->Arg(96)->Arg(192)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

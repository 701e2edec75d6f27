#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmlr/kernels.hpp"
#include "cmlr/rng.hpp"
#include "oracles.hpp"

#include <omp.h>

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
MatrixXd random_weights(Eigen::Index m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MatrixXd w = MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) w(i, j) = w(j, i) = rng.uniform();
  return w;
}
}  // namespace

// The parallel kernels must agree with the serial reference for any thread
// count, bit for bit where the summation order is fixed.
TEST_CASE("parallel kernels match the serial reference") {
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    for (Eigen::Index m : {1, 2, 7, 64}) {
      const MatrixXd zt = random_matrix(3, m, 100 + static_cast<std::uint64_t>(m));
      CHECK(kernels::pairwise_distance_sum(zt) ==
            doctest::Approx(kernels::serial::pairwise_distance_sum(zt)).epsilon(1e-13));
      CHECK(kernels::pairwise_distance_sum(zt) ==
            doctest::Approx(oracle::objective(zt.transpose())).epsilon(1e-13));
      CHECK(kernels::smoothed_distance_sum(zt, 1e-3) ==
            doctest::Approx(kernels::serial::smoothed_distance_sum(zt, 1e-3)).epsilon(1e-13));

      MatrixXd w1, w2;
      kernels::reweight(zt, 1e-16, w1);
      kernels::serial::reweight(zt, 1e-16, w2);
      CHECK(w1 == w2);
      CHECK(w1 == w1.transpose());

      const Eigen::Index block = 2;
      const MatrixXd n = random_matrix(3, m * block, 7);
      const MatrixXd gram = n.transpose() * n;
      const MatrixXd w = random_weights(m, 9);
      MatrixXd h1, h2;
      kernels::assemble_reduced_hessian(gram, w, block, h1);
      kernels::serial::assemble_reduced_hessian(gram, w, block, h2);
      CHECK((h1 - h2).norm() <= 1e-13 * (1.0 + h2.norm()));

      const MatrixXd cross = random_matrix(m * block, m, 13);
      VectorXd r1, r2;
      kernels::assemble_reduced_rhs(cross, w, block, r1);
      kernels::serial::assemble_reduced_rhs(cross, w, block, r2);
      CHECK((r1 - r2).norm() <= 1e-13 * (1.0 + r2.norm()));
    }
  }
}

TEST_CASE("reduced hessian against dense assembly") {
  // H = N^T (L (x) I) N with N block diagonal
  const Eigen::Index m = 5, d = 3, block = 2;
  const MatrixXd w = random_weights(m, 21);
  MatrixXd nbig = MatrixXd::Zero(m * d, m * block);
  const MatrixXd n = random_matrix(d, m * block, 22);
  for (Eigen::Index i = 0; i < m; ++i) nbig.block(i * d, i * block, d, block) = n.middleCols(i * block, block);
  MatrixXd lap = -w;
  for (Eigen::Index i = 0; i < m; ++i) lap(i, i) = w.row(i).sum();
  MatrixXd lk = MatrixXd::Zero(m * d, m * d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) lk.block(i * d, j * d, d, d) = lap(i, j) * MatrixXd::Identity(d, d);
  const MatrixXd expected = nbig.transpose() * lk * nbig;
  MatrixXd h;
  kernels::serial::assemble_reduced_hessian(n.transpose() * n, w, block, h);
  CHECK((h - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("reweight values") {
  MatrixXd zt(2, 3);
  zt << 0, 0, 3,
        0, 0, 0;
  MatrixXd w;
  kernels::reweight(zt, 1e-16, w);
  CHECK(w(0, 1) == doctest::Approx(1e8));
  CHECK(w(0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w(2, 2) == 0.0);
}

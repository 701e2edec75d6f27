#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmlr/error.hpp"
#include "cmlr/geometry.hpp"
#include "cmlr/rng.hpp"
#include "cmlr/synthetic.hpp"

#include <cmath>
#include <vector>

using namespace cmlr;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("pairwise direction") {
  CHECK(direction_between(Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0)).isApprox(Eigen::Vector2d(1, 0)));
  CHECK(direction_between(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0))
            .isApprox(Eigen::Vector3d(1, -1, 0) / std::sqrt(2.0)));
  CHECK_THROWS_AS(direction_between(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1)), ModelError);
}

TEST_CASE("weighted direction") {
  SUBCASE("k = 2 reduces to the pair direction") {
    MatrixXd b(2, 3);
    b << 1, 2, 3, -1, 0, 4;
    MixtureModel model(b, {5, 11});
    CHECK(weighted_direction(0, model).isApprox(direction_between(b.row(0).transpose(), b.row(1).transpose())));
  }
  SUBCASE("three unit vectors") {
    MixtureModel model(unit_betas(3, 3), {16, 16, 16});
    const VectorXd v = weighted_direction(0, model);
    // (v_12 + v_13) / 2 with v_1q = (e_1 - e_q)/sqrt(2)
    CHECK(v.isApprox(Eigen::Vector3d(2, -1, -1) / (2.0 * std::sqrt(2.0)), 1e-15));
    CHECK(v.norm() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  }
  SUBCASE("degenerate weights") {
    const MatrixXd b = unit_betas(3, 3);
    const std::vector<double> w = {0.0, 1.0, 0.0};
    CHECK(weighted_direction(0, b, w).isApprox(direction_between(b.row(0).transpose(), b.row(1).transpose())));
  }
  SUBCASE("single class") {
    MixtureModel model(unit_betas(1, 2), {3});
    CHECK_THROWS_AS(weighted_direction(0, model), ModelError);
  }
}

TEST_CASE("separation ratio") {
  CHECK(separation_ratio(Eigen::Vector2d(2, 0), Eigen::Vector2d(1, 0)) == 0.0);
  CHECK(separation_ratio(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0)) == doctest::Approx(1.0));
  CHECK(separation_ratio(Eigen::Vector4d(1, -0.3, 0, 0), Eigen::Vector4d(1, 0, 0, 0)) == doctest::Approx(0.3));
  CHECK_THROWS_AS(separation_ratio(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)), OrthogonalPointError);
  CHECK_THROWS_AS(separation_ratio(Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 0)), ModelError);
}

TEST_CASE("complement basis") {
  const MatrixXd q = orthonormal_complement_basis(Eigen::Vector3d(1, 0, 0));
  CHECK(q.cols() == 2);
  CHECK(q.row(0).norm() <= 1e-15);
  CHECK((q.transpose() * q - MatrixXd::Identity(2, 2)).norm() <= 1e-15);
  CHECK(orthonormal_complement_basis(VectorXd::Ones(1)).cols() == 0);

  SplitMix64 rng(3);
  for (int t = 0; t < 50; ++t) {
    VectorXd v(2 + t % 7);
    for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    const MatrixXd b = orthonormal_complement_basis(v);
    CHECK((b.transpose() * b - MatrixXd::Identity(v.size() - 1, v.size() - 1)).norm() <= 1e-12);
    CHECK((b.transpose() * v).norm() <= 1e-12 * v.norm());
    CHECK(b == orthonormal_complement_basis(v));
  }
}

TEST_CASE("numerical rank") {
  MatrixXd a(3, 3);
  a << 1, 0, 0, 0, 1, 0, 1, 1, 0;
  CHECK(numerical_rank(a) == 2);
  a(2, 2) = 1e-13;
  CHECK(numerical_rank(a) == 2);
  a(2, 2) = 1e-6;
  CHECK(numerical_rank(a) == 3);
}

TEST_CASE("conditions on the balanced ensemble") {
  for (double alpha : {0.0, 0.05, 0.1, 0.15}) {
    const auto inst = gen_sim1({.k = 3, .d = 5, .per_class = 16, .alpha = alpha, .seed = 17});
    const ConditionReport r = check_conditions(inst.data, inst.model);
    CHECK(r.separation_rhs == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(r.separation_lhs <= alpha + 1e-15);
    CHECK(r.well_separated);
    for (double tau : r.balance_residuals) CHECK(tau <= 1e-12);
    CHECK(r.orthogonal_points.empty());
    for (bool s : r.span_ok) CHECK(s == (alpha > 0.0));
  }
}

TEST_CASE("conditions on the imbalanced ensemble") {
  for (double tau : {0.0, 0.02, 0.05}) {
    const auto inst = gen_sim2({.d = 5, .alpha = 0.2, .tau = tau, .seed = 5});
    const ConditionReport r = check_conditions(inst.data, inst.model);
    CHECK(r.balance_residuals[0] <= 1e-12);
    CHECK(r.balance_residuals[1] <= 1e-12);
    CHECK(std::abs(r.balance_residuals[2] - tau) <= 1e-10);
  }
}

TEST_CASE("orthogonal point is a separation failure, not a crash") {
  MatrixXd a(4, 2);
  a << 1, 0.1, 1, -0.1, 0, 1, -1, 0.2;
  const MatrixXd betas = (MatrixXd(2, 2) << 1, 0, -1, 0).finished();
  Dataset data(a, a * betas.row(0).transpose(), {0, 0, 0, 1});
  MixtureModel model(betas, {3, 1});
  const ConditionReport r = check_conditions(data, model);
  CHECK_FALSE(r.well_separated);
  CHECK(std::isinf(r.separation_lhs));
  CHECK(r.orthogonal_points == std::vector<Index>{2});
}

TEST_CASE("k = 1 is rejected") {
  MatrixXd a = MatrixXd::Identity(2, 2);
  MixtureModel model(unit_betas(1, 2), {2});
  CHECK_THROWS_AS(check_conditions(Dataset(a, VectorXd::Ones(2), {0, 0}), model), ModelError);
}

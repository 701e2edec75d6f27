#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmlr/error.hpp"
#include "cmlr/model.hpp"
#include "cmlr/rng.hpp"
#include "cmlr/synthetic.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace cmlr;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
Dataset two_points() {
  MatrixXd a(2, 2);
  a << 1, 0, 0, 1;
  return Dataset(a, VectorXd::Ones(2), {0, 1});
}
}  // namespace

TEST_CASE("dataset validation") {
  MatrixXd a(2, 2);
  a << 1, 0, 0, 0;
  CHECK_THROWS_AS(Dataset(a, VectorXd::Ones(2)), DataError);
  a << 1, 0, NAN, 1;
  CHECK_THROWS_AS(Dataset(a, VectorXd::Ones(2)), DataError);
  a << 1, 0, 0, 1;
  CHECK_THROWS_AS(Dataset(a, VectorXd::Ones(3)), DataError);
  CHECK_THROWS_AS(Dataset(a, VectorXd::Ones(2), {0}), DataError);
  CHECK_THROWS_AS(Dataset(a, VectorXd::Ones(2), {0, 2}), DataError);  // class 2 empty
  CHECK_THROWS_AS(Dataset(a, VectorXd::Ones(2), {-1, 0}), DataError);
  CHECK_THROWS_AS(Dataset(MatrixXd(0, 2), VectorXd(0)), DataError);

  Dataset ok(a, VectorXd::Ones(2), {1, 0});
  CHECK(ok.num_classes() == 2);
  CHECK(ok.members(0) == std::vector<Index>{1});
  CHECK(ok.class_sizes() == std::vector<Index>{1, 1});
  CHECK_FALSE(ok.without_labels().has_labels());
}

TEST_CASE("mixture model validation") {
  MatrixXd b(2, 2);
  b << 1, 2, 1, 2;
  CHECK_THROWS_AS(MixtureModel(b, {1, 1}), ModelError);
  b << 1, 2, 2, 1;
  CHECK_THROWS_AS(MixtureModel(b, {1}), ModelError);
  CHECK_THROWS_AS(MixtureModel(b, {1, 0}), ModelError);
  MixtureModel m(b, {3, 4});
  CHECK(m.total() == 7);
}

TEST_CASE("candidate solution") {
  SUBCASE("single class") {
    MatrixXd a = MatrixXd::Random(4, 2);
    a.col(0).array() += 3.0;
    MixtureModel model(MatrixXd((MatrixXd(1, 2) << 2, 3).finished()), {4});
    Dataset data(a, a * Eigen::Vector2d(2, 3), {0, 0, 0, 0});
    const EstimateField z = candidate_solution(data, model);
    for (Index i = 0; i < 4; ++i) CHECK((z.row(i) - Eigen::Vector2d(2, 3)).norm() == 0.0);
  }
  SUBCASE("direct indexing") {
    MixtureModel model(MatrixXd::Identity(2, 2), {1, 1});
    const EstimateField z = candidate_solution(two_points(), model);
    CHECK(z.values().isApprox(MatrixXd::Identity(2, 2)));
  }
  SUBCASE("feasible on generated data") {
    const auto inst = gen_sim1({.k = 3, .d = 5, .per_class = 16, .alpha = 0.1, .seed = 4});
    CHECK(feasibility_residual(candidate_solution(inst.data, inst.model), inst.data) <= 1e-12);
  }
  SUBCASE("unlabeled") {
    MixtureModel model(MatrixXd::Identity(2, 2), {1, 1});
    CHECK_THROWS_AS(candidate_solution(two_points().without_labels(), model), DataError);
  }
}

TEST_CASE("objective") {
  CHECK(objective(EstimateField(MatrixXd::Ones(5, 3))) == 0.0);
  MatrixXd z(2, 2);
  z << 0, 0, 3, 4;
  CHECK(objective(EstimateField(z)) == doctest::Approx(10.0).epsilon(1e-15));
  SplitMix64 rng(11);
  for (int t = 0; t < 20; ++t) {
    MatrixXd r(5, 3);
    for (Index i = 0; i < r.size(); ++i) r.data()[i] = rng.normal();
    CHECK(objective(EstimateField(r)) == doctest::Approx(oracle::objective(r)).epsilon(1e-13));
  }
}

TEST_CASE("feasibility residual") {
  MatrixXd a(2, 2);
  a << 1, 0, 0, 1;
  VectorXd b(2);
  b << 0, 1;
  Dataset data(a, b);
  CHECK(feasibility_residual(EstimateField(MatrixXd::Zero(2, 2)), data) == 1.0);
  CHECK_THROWS_AS(feasibility_residual(EstimateField(MatrixXd::Zero(3, 2)), data), DataError);
}

TEST_CASE("recovery error") {
  const MatrixXd z = MatrixXd::Random(4, 3);
  CHECK(recovery_error(EstimateField(z), EstimateField(z)) == 0.0);
  MatrixXd one(1, 2);
  one << 3, 4;
  CHECK(recovery_error(EstimateField(one), EstimateField(MatrixXd::Zero(1, 2))) == doctest::Approx(5.0));
  MatrixXd c = MatrixXd::Zero(4, 2);
  c.col(0).setConstant(0.7);
  CHECK(recovery_error(EstimateField(c), EstimateField(MatrixXd::Zero(4, 2))) == doctest::Approx(0.7));
  CHECK_THROWS_AS(recovery_error(EstimateField(c), EstimateField(MatrixXd::Zero(3, 2))), DataError);
}

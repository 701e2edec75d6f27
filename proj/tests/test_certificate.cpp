#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmlr/certificate.hpp"
#include "cmlr/error.hpp"
#include "cmlr/geometry.hpp"
#include "cmlr/synthetic.hpp"

#include <algorithm>
#include <cmath>

using namespace cmlr;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
// Stationarity residual recomputed from the public accessors only.
double stationarity(const Certificate& c, const Dataset& data, const MixtureModel& model) {
  double worst = 0.0;
  for (Index i = 0; i < data.size(); ++i) {
    const int p = data.labels()[static_cast<std::size_t>(i)];
    VectorXd r = c.nu()(i) * data.feature(i) - static_cast<double>(model.total() - model.size(p)) * c.direction(p);
    for (Index j : data.members(p))
      if (j != i) r -= c.xi(i, j);
    worst = std::max(worst, r.norm());
  }
  return worst;
}
}  // namespace

TEST_CASE("multiplier for a point on the class direction") {
  const auto inst = gen_sim1({.k = 3, .d = 5, .per_class = 16, .alpha = 0.0, .seed = 1});
  const Certificate c = build_certificate(inst.data, inst.model);
  for (Index i = 0; i < inst.data.size(); ++i) CHECK(c.nu()(i) == doctest::Approx(16.0 * std::sqrt(3.0)).epsilon(1e-14));
  CHECK(c.gamma() <= 1e-14);
}

TEST_CASE("xi structure") {
  const auto inst = gen_sim1({.k = 3, .d = 4, .per_class = 6, .alpha = 0.1, .seed = 2});
  const Certificate c = build_certificate(inst.data, inst.model);
  const auto s0 = inst.data.members(0);
  const auto s1 = inst.data.members(1);
  CHECK(c.xi(s0[0], s0[0]).norm() == 0.0);
  CHECK(c.xi(s0[0], s0[3]) == -c.xi(s0[3], s0[0]));
  CHECK_THROWS_AS(c.xi(s0[0], s1[0]), DataError);
  double g = 0.0;
  for (int p = 0; p < 3; ++p)
    for (Index i : inst.data.members(p))
      for (Index j : inst.data.members(p)) g = std::max(g, c.xi(i, j).norm());
  CHECK(c.gamma() == g);
}

TEST_CASE("balanced ensemble certifies") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = gen_sim1({.k = 3, .d = 5, .per_class = 16, .alpha = 0.1, .seed = seed});
    const Certificate c = build_certificate(inst.data, inst.model);
    const CertificateVerdict v = verify_certificate(c, inst.data, inst.model);
    CHECK(v.s1_residual <= 1e-9 * v.s1_scale);
    CHECK(stationarity(c, inst.data, inst.model) <= 1e-9 * v.s1_scale);
    CHECK(v.strict_gamma);
    CHECK(v.spans_ok);
    CHECK(v.certifies);
    // gamma <= (2 / n_p) m alpha ||v_p||, and the sharper per-class form
    const ConditionReport r = check_conditions(inst.data, inst.model);
    double bound = 0.0, sharp = 0.0;
    for (int p = 0; p < 3; ++p) {
      const double np = static_cast<double>(inst.model.size(p));
      const double vp = c.direction(p).norm();
      bound = std::max(bound, 2.0 / np * 48.0 * r.class_separation[static_cast<std::size_t>(p)] * vp);
      sharp = std::max(sharp, 2.0 / np * (48.0 - np) * r.class_separation[static_cast<std::size_t>(p)] * vp);
    }
    CHECK(c.gamma() <= sharp + 1e-12);
    CHECK(c.gamma() <= bound + 1e-12);
  }
}

TEST_CASE("imbalance breaks stationarity") {
  const auto inst = gen_sim2({.d = 5, .alpha = 0.2, .tau = 0.05, .seed = 8});
  const CertificateVerdict v = verify_certificate(build_certificate(inst.data, inst.model), inst.data, inst.model);
  CHECK(v.s1_residual > v.tolerance * v.s1_scale);
  CHECK_FALSE(v.certifies);

  const auto flat = gen_sim2({.d = 5, .alpha = 0.2, .tau = 0.0, .seed = 8});
  CHECK(verify_certificate(build_certificate(flat.data, flat.model), flat.data, flat.model).certifies);
}

TEST_CASE("nearly orthogonal point drives gamma above one") {
  // class 1 around (1, 0) with a symmetric pair almost along (0, 1)
  MatrixXd a(6, 2);
  a << 1, 0.01, 1, -0.01, 0.01, 1, 0.01, -1,
      -1, 0.01, -1, -0.01;
  const MatrixXd betas = (MatrixXd(2, 2) << 1, 0, -1, 0).finished();
  VectorXd b(6);
  for (Index i = 0; i < 6; ++i) b(i) = a.row(i).dot(betas.row(i < 4 ? 0 : 1));
  Dataset data(a, b, {0, 0, 0, 0, 1, 1});
  MixtureModel model(betas, {4, 2});
  const Certificate c = build_certificate(data, model);
  const CertificateVerdict v = verify_certificate(c, data, model);
  // nu = 2 / 0.01 on the near-orthogonal pair, xi between them = (0, 2 * 200) / 4
  CHECK(c.gamma() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(v.s1_residual <= 1e-9 * v.s1_scale);
  CHECK_FALSE(v.strict_gamma);
  CHECK_FALSE(v.certifies);
}

TEST_CASE("orthogonal point names the row") {
  MatrixXd a(4, 2);
  a << 1, 0.1, 1, -0.1, 0, 1, -1, 0;
  Dataset data(a, VectorXd::Ones(4), {0, 0, 0, 1});
  MixtureModel model((MatrixXd(2, 2) << 1, 0, -1, 0).finished(), {3, 1});
  try {
    build_certificate(data, model);
    FAIL("expected OrthogonalPointError");
  } catch (const OrthogonalPointError& e) {
    CHECK(e.point() == 2);
  }
}

TEST_CASE("too few rows for the span condition") {
  const auto inst = gen_sim1({.k = 3, .d = 8, .per_class = 4, .alpha = 0.1, .seed = 3});
  const CertificateVerdict v = verify_certificate(build_certificate(inst.data, inst.model), inst.data, inst.model);
  CHECK_FALSE(v.spans_ok);
  CHECK_FALSE(v.certifies);
}

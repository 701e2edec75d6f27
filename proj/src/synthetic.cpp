#include "cmlr/synthetic.hpp"

#include "cmlr/error.hpp"
#include "cmlr/geometry.hpp"

#include <cmath>
#include <vector>

namespace cmlr {

namespace {

Eigen::VectorXd gaussian_direction(Index dim, SplitMix64& rng) {
  Eigen::VectorXd g(dim);
  double norm = 0.0;
  while (norm == 0.0) {
    for (Index i = 0; i < dim; ++i) g(i) = rng.normal();
    norm = g.norm();
  }
  return g / norm;
}

// stream tags for derive_seed
constexpr std::uint64_t kBallStream = 1;
constexpr std::uint64_t kShiftStream = 2;

// Paired symmetric rows around vhat_p for class p (0-based).
Eigen::MatrixXd symmetric_class(const Eigen::VectorXd& vhat, const Eigen::MatrixXd& q,
                                Index per_class, double alpha, std::uint64_t seed, int p) {
  const Index d = vhat.size();
  const Index half = per_class / 2;
  Eigen::MatrixXd a(per_class, d);
  for (Index r = 0; r < half; ++r) {
    SplitMix64 rng(derive_seed(seed, {kBallStream, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(r)}));
    const Eigen::VectorXd offset = q * sample_ball(d - 1, alpha, rng);
    a.row(r) = (vhat + offset).transpose();
    a.row(r + half) = (vhat - offset).transpose();
  }
  return a;
}

SyntheticInstance assemble(const std::vector<Eigen::MatrixXd>& rows, const Eigen::MatrixXd& betas) {
  const Index d = betas.cols();
  Index m = 0;
  for (const auto& r : rows) m += r.rows();
  Eigen::MatrixXd a(m, d);
  Eigen::VectorXd b(m);
  std::vector<int> labels;
  std::vector<Index> sizes;
  Index at = 0;
  for (std::size_t p = 0; p < rows.size(); ++p) {
    const Index n = rows[p].rows();
    a.middleRows(at, n) = rows[p];
    b.segment(at, n) = rows[p] * betas.row(static_cast<Index>(p)).transpose();
    labels.insert(labels.end(), static_cast<std::size_t>(n), static_cast<int>(p));
    sizes.push_back(n);
    at += n;
  }
  return {Dataset(std::move(a), std::move(b), std::move(labels)), MixtureModel(betas, std::move(sizes))};
}

}  // namespace

Eigen::VectorXd sample_ball(Index dim, double radius, SplitMix64& rng) {
  if (dim < 0 || !(radius >= 0.0)) throw DataError("ball needs dim >= 0 and radius >= 0");
  if (dim == 0) return Eigen::VectorXd(0);
  const Eigen::VectorXd dir = gaussian_direction(dim, rng);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  return r * dir;
}

Eigen::VectorXd sample_sphere(Index dim, double radius, SplitMix64& rng) {
  if (dim < 1 || !(radius >= 0.0)) throw DataError("sphere needs dim >= 1 and radius >= 0");
  return radius * gaussian_direction(dim, rng);
}

Eigen::MatrixXd unit_betas(int k, Index d) {
  if (k < 1 || d < k) throw DataError("unit coefficient vectors need 1 <= k <= d");
  Eigen::MatrixXd betas = Eigen::MatrixXd::Zero(k, d);
  for (int p = 0; p < k; ++p) betas(p, p) = 1.0;
  return betas;
}

SyntheticInstance gen_sim1(const Sim1Config& cfg) {
  if (cfg.k < 2) throw DataError("simulation needs at least two classes");
  if (cfg.d < cfg.k) throw DataError("simulation needs d >= k");
  if (cfg.per_class < 2 || cfg.per_class % 2 != 0) throw DataError("per-class count must be even and positive");
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) throw DataError("aperture must be non-negative");

  const Eigen::MatrixXd betas = unit_betas(cfg.k, cfg.d);
  const std::vector<double> weights(static_cast<std::size_t>(cfg.k), static_cast<double>(cfg.per_class));
  std::vector<Eigen::MatrixXd> rows;
  for (int p = 0; p < cfg.k; ++p) {
    const Eigen::VectorXd v = weighted_direction(p, betas, weights);
    const Eigen::VectorXd vhat = v / v.norm();
    rows.push_back(symmetric_class(vhat, orthonormal_complement_basis(vhat), cfg.per_class, cfg.alpha, cfg.seed, p));
  }
  return assemble(rows, betas);
}

SyntheticInstance gen_sim2(const Sim2Config& cfg) {
  constexpr int k = 3;
  if (cfg.d < 3) throw DataError("imbalance simulation needs d >= 3");
  const Index per_class = cfg.per_class == 0 ? 4 * cfg.d : cfg.per_class;
  if (per_class < 2 || per_class % 2 != 0) throw DataError("per-class count must be even and positive");
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) throw DataError("aperture must be non-negative");
  if (!(cfg.tau >= 0.0) || !std::isfinite(cfg.tau)) throw DataError("imbalance must be non-negative");

  const Eigen::MatrixXd betas = unit_betas(k, cfg.d);
  const std::vector<double> weights(k, static_cast<double>(per_class));
  std::vector<Eigen::MatrixXd> rows;
  for (int p = 0; p < k; ++p) {
    const Eigen::VectorXd v = weighted_direction(p, betas, weights);
    const Eigen::VectorXd vhat = v / v.norm();
    const Eigen::MatrixXd q = orthonormal_complement_basis(vhat);
    Eigen::MatrixXd a = symmetric_class(vhat, q, per_class, cfg.alpha, cfg.seed, p);
    if (p == k - 1) {
      SplitMix64 rng(derive_seed(cfg.seed, {kShiftStream, static_cast<std::uint64_t>(p)}));
      const Eigen::VectorXd shift = q * sample_sphere(cfg.d - 1, cfg.tau, rng);
      a.rowwise() += shift.transpose();
      // the shift is orthogonal to vhat, so no row can change side
      if (((a * vhat).array() <= 0.0).any()) throw NumericalError("imbalance shift flipped a measurement sign");
    }
    rows.push_back(std::move(a));
  }
  return assemble(rows, betas);
}

}  // namespace cmlr

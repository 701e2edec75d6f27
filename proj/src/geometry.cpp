#include "cmlr/geometry.hpp"

#include "cmlr/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cmlr {

Eigen::VectorXd direction_between(const Eigen::VectorXd& beta_p, const Eigen::VectorXd& beta_q) {
  if (beta_p.size() != beta_q.size()) throw DataError("coefficient vectors differ in length");
  const Eigen::VectorXd diff = beta_p - beta_q;
  const double norm = diff.norm();
  if (norm == 0.0) throw ModelError("direction between equal coefficient vectors is undefined");
  return diff / norm;
}

Eigen::VectorXd weighted_direction(int p, const Eigen::MatrixXd& betas,
                                   std::span<const double> weights) {
  const int k = static_cast<int>(betas.rows());
  if (k < 2) throw ModelError("weighted direction needs at least two classes");
  if (p < 0 || p >= k) throw DataError("class index out of range");
  if (static_cast<int>(weights.size()) != k) throw DataError("one weight per class is required");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(betas.cols());
  double total = 0.0;
  for (int q = 0; q < k; ++q) {
    if (q == p) continue;
    const double w = weights[static_cast<std::size_t>(q)];
    if (!(w >= 0.0)) throw DataError("direction weights must be non-negative");
    if (w == 0.0) continue;
    acc += w * direction_between(betas.row(p).transpose(), betas.row(q).transpose());
    total += w;
  }
  if (total == 0.0) throw ModelError("weights of the other classes sum to zero");
  return acc / total;
}

Eigen::VectorXd weighted_direction(int p, const MixtureModel& model) {
  std::vector<double> weights(model.sizes().begin(), model.sizes().end());
  return weighted_direction(p, model.betas(), weights);
}

DirectionSet compute_directions(const MixtureModel& model) {
  const int k = model.num_classes();
  if (k < 2) throw ModelError("directions need at least two classes");
  DirectionSet out;
  out.pairwise.assign(static_cast<std::size_t>(k), std::vector<Eigen::VectorXd>(static_cast<std::size_t>(k)));
  for (int p = 0; p < k; ++p) {
    for (int q = p + 1; q < k; ++q) {
      Eigen::VectorXd v = direction_between(model.beta(p), model.beta(q));
      out.pairwise[p][q] = v;
      out.pairwise[q][p] = -v;
    }
    out.weighted.push_back(weighted_direction(p, model));
  }
  return out;
}

double separation_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& v) {
  const double vnorm = v.norm();
  if (vnorm == 0.0) throw ModelError("separation ratio against a zero direction");
  const Eigen::VectorXd vhat = v / vnorm;
  const double along = vhat.dot(a);
  if (along == 0.0) throw OrthogonalPointError(-1, "measurement is orthogonal to the direction");
  return (a - along * vhat).norm() / std::abs(along);
}

Eigen::MatrixXd orthonormal_complement_basis(const Eigen::VectorXd& v) {
  const Index d = v.size();
  const double norm = v.norm();
  if (d < 1 || norm == 0.0) throw ModelError("complement basis of a zero vector");
  if (d == 1) return Eigen::MatrixXd(1, 0);
  // H = I - 2 u u^T / (u^T u) with u = vhat + s e_1 sends vhat to -s e_1.
  Eigen::VectorXd u = v / norm;
  const double s = u(0) >= 0.0 ? 1.0 : -1.0;
  u(0) += s;
  const double uu = u.squaredNorm();
  Eigen::MatrixXd q = -(2.0 / uu) * u * u.tail(d - 1).transpose();
  q.bottomRows(d - 1).diagonal().array() += 1.0;
  return q;
}

Index numerical_rank(const Eigen::MatrixXd& rows) {
  if (rows.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTolerance * sv(0)) ++rank;
  }
  return rank;
}

ConditionReport check_conditions(const Dataset& data, const MixtureModel& model) {
  require_consistent(data, model);
  const int k = model.num_classes();
  if (k < 2) throw ModelError("separation and balance are undefined for a single class");

  ConditionReport report;
  const double m = static_cast<double>(data.size());
  const Index min_size = *std::min_element(model.sizes().begin(), model.sizes().end());
  report.separation_rhs = 0.5 * static_cast<double>(min_size) / m;
  report.class_separation.assign(static_cast<std::size_t>(k), 0.0);
  report.balance_residuals.assign(static_cast<std::size_t>(k), 0.0);
  report.span_ok.assign(static_cast<std::size_t>(k), false);

  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int p = 0; p < k; ++p) {
    const Eigen::VectorXd v = weighted_direction(p, model);
    const Eigen::VectorXd vhat = v / v.norm();
    const std::vector<Index> members = data.members(p);
    Eigen::VectorXd balance = Eigen::VectorXd::Zero(data.dim());
    Eigen::MatrixXd rows(static_cast<Index>(members.size()), data.dim());
    double worst = 0.0;
    bool orthogonal = false;
    for (std::size_t r = 0; r < members.size(); ++r) {
      const Index i = members[r];
      const Eigen::VectorXd a = data.feature(i);
      rows.row(static_cast<Index>(r)) = a.transpose();
      const double along = vhat.dot(a);
      if (along == 0.0) {
        orthogonal = true;
        report.orthogonal_points.push_back(i);
        continue;
      }
      const Eigen::VectorXd perp = a - along * vhat;
      worst = std::max(worst, perp.norm() / std::abs(along));
      // sign(along) * perp / |along| == perp / along
      balance += perp / along;
    }
    const double n_p = static_cast<double>(members.size());
    report.class_separation[p] = orthogonal ? inf : worst;
    report.balance_residuals[p] = orthogonal ? inf : balance.norm() / n_p;
    report.span_ok[p] = numerical_rank(rows) == data.dim();
    report.separation_lhs = std::max(report.separation_lhs, report.class_separation[p]);
  }
  report.well_separated = report.separation_lhs < report.separation_rhs;
  return report;
}

}  // namespace cmlr

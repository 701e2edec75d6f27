#include "cmlr/certificate.hpp"

#include "cmlr/error.hpp"
#include "cmlr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmlr {

Certificate::Certificate(const Dataset& data, const MixtureModel& model)
    : dim_(data.dim()), nu_(Eigen::VectorXd::Zero(data.size())), labels_(data.labels()) {
  require_consistent(data, model);
  const int k = model.num_classes();
  if (k < 2) throw ModelError("the certificate needs at least two classes");

  position_.assign(static_cast<std::size_t>(data.size()), 0);
  const Index m = model.total();
  for (int p = 0; p < k; ++p) {
    const Eigen::VectorXd v = weighted_direction(p, model);
    const double vnorm = v.norm();
    const Eigen::VectorXd vhat = v / vnorm;
    const double others = static_cast<double>(m - model.size(p));

    ClassBlock block;
    block.members = data.members(p);
    const Index n = static_cast<Index>(block.members.size());
    Eigen::MatrixXd scaled_perp(dim_, n);  // column r is nu_i P_{v^perp} a_i
    for (Index r = 0; r < n; ++r) {
      const Index i = block.members[static_cast<std::size_t>(r)];
      position_[static_cast<std::size_t>(i)] = r;
      const Eigen::VectorXd a = data.feature(i);
      const double along = vhat.dot(a);
      if (along == 0.0) {
        throw OrthogonalPointError(i, "certificate undefined: row " + std::to_string(i + 1) +
                                          " is orthogonal to its class direction");
      }
      const double sign = along > 0.0 ? 1.0 : -1.0;
      nu_(i) = sign * vnorm * others / std::abs(along);
      scaled_perp.col(r) = nu_(i) * (a - along * vhat);
    }

    block.xi.resize(dim_, n * (n - 1) / 2);
    const double inv_n = 1.0 / static_cast<double>(n);
    Index col = 0;
    for (Index r = 0; r < n; ++r) {
      for (Index s = r + 1; s < n; ++s, ++col) {
        block.xi.col(col) = inv_n * (scaled_perp.col(r) - scaled_perp.col(s));
        gamma_ = std::max(gamma_, block.xi.col(col).norm());
      }
    }
    blocks_.push_back(std::move(block));
    directions_.push_back(v);
  }
}

Index Certificate::pair_column(Index n, Index r, Index s) const noexcept {
  // pairs (r, s), r < s, enumerated row by row
  return r * n - r * (r + 1) / 2 + (s - r - 1);
}

Eigen::VectorXd Certificate::xi(Index i, Index j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw DataError("row index out of range");
  const int p = labels_[static_cast<std::size_t>(i)];
  if (labels_[static_cast<std::size_t>(j)] != p) {
    throw DataError("xi is only defined for pairs within one class");
  }
  if (i == j) return Eigen::VectorXd::Zero(dim_);
  const ClassBlock& block = blocks_[static_cast<std::size_t>(p)];
  const Index n = static_cast<Index>(block.members.size());
  const Index r = position_[static_cast<std::size_t>(i)];
  const Index s = position_[static_cast<std::size_t>(j)];
  if (r < s) return block.xi.col(pair_column(n, r, s));
  return -block.xi.col(pair_column(n, s, r));
}

Certificate build_certificate(const Dataset& data, const MixtureModel& model) {
  return Certificate(data, model);
}

CertificateVerdict verify_certificate(const Certificate& cert, const Dataset& data,
                                      const MixtureModel& model, double tol) {
  require_consistent(data, model);
  if (cert.size() != data.size() || cert.dim() != data.dim()) {
    throw DataError("certificate was built for a different dataset");
  }
  CertificateVerdict verdict;
  verdict.tolerance = tol;
  const Index m = model.total();
  bool spans = true;
  for (int p = 0; p < model.num_classes(); ++p) {
    const std::vector<Index> members = data.members(p);
    const Eigen::VectorXd target =
        static_cast<double>(m - model.size(p)) * cert.direction(p);
    Eigen::MatrixXd rows(static_cast<Index>(members.size()), data.dim());
    for (std::size_t r = 0; r < members.size(); ++r) {
      const Index i = members[r];
      const Eigen::VectorXd lhs = cert.nu()(i) * data.feature(i);
      Eigen::VectorXd rhs = target;
      for (Index j : members) {
        if (j != i) rhs += cert.xi(i, j);
      }
      verdict.s1_residual = std::max(verdict.s1_residual, (lhs - rhs).norm());
      verdict.s1_scale = std::max(verdict.s1_scale, lhs.norm());
      rows.row(static_cast<Index>(r)) = data.features().row(i);
    }
    spans = spans && numerical_rank(rows) == data.dim();
  }
  verdict.gamma = cert.gamma();
  verdict.strict_gamma = verdict.gamma < 1.0;
  verdict.gamma_borderline = verdict.strict_gamma && verdict.gamma >= 1.0 - kGammaBorderline;
  verdict.spans_ok = spans;
  verdict.certifies =
      verdict.s1_residual <= tol * verdict.s1_scale && verdict.strict_gamma && verdict.spans_ok;
  return verdict;
}

}  // namespace cmlr

#pragma once

#include "cmlr/model.hpp"

#include <Eigen/Core>

#include <vector>

namespace cmlr {

/// Closed-form dual certificate (nu, xi) for the candidate solution z_i = beta_{l_i}.
///
///   nu_i  = sign(v_p^T a_i) ||v_p|| (sum_{q != p} n_q) / ||P_{v_p} a_i||
///   xi_ij = (nu_i P_{v_p^perp} a_i - nu_j P_{v_p^perp} a_j) / n_p
///
/// for i, j in class p. xi is stored once per unordered within-class pair;
/// `xi(j, i)` returns the negation of `xi(i, j)`, so antisymmetry is exact.
class Certificate {
 public:
  Certificate(const Dataset& data, const MixtureModel& model);

  const Eigen::VectorXd& nu() const noexcept { return nu_; }
  /// xi_ij for i, j in the same class; zero when i == j. Throws DataError otherwise.
  Eigen::VectorXd xi(Index i, Index j) const;
  /// max ||xi_ij|| over all stored pairs (0 if every class is a singleton).
  double gamma() const noexcept { return gamma_; }
  /// Weighted direction v_p used for class p.
  const Eigen::VectorXd& direction(int p) const { return directions_[static_cast<std::size_t>(p)]; }
  Index size() const noexcept { return nu_.size(); }
  Index dim() const noexcept { return dim_; }

 private:
  struct ClassBlock {
    std::vector<Index> members;
    // column t holds xi for the t-th pair (r < s) in row-major upper-triangular order
    Eigen::MatrixXd xi;
  };

  Index pair_column(Index n, Index r, Index s) const noexcept;

  Index dim_ = 0;
  Eigen::VectorXd nu_;
  double gamma_ = 0.0;
  std::vector<int> labels_;
  std::vector<Index> position_;  // position of each row within its class
  std::vector<ClassBlock> blocks_;
  std::vector<Eigen::VectorXd> directions_;
};

/// Builds the closed-form certificate. Requires k >= 2 and v_p^T a_i != 0 for
/// every row; an orthogonal row raises OrthogonalPointError naming it.
Certificate build_certificate(const Dataset& data, const MixtureModel& model);

/// Default tolerance on the stationarity residual, relative to max_i ||nu_i a_i||.
inline constexpr double kCertificateTolerance = 1e-8;
/// Width of the band [1 - band, 1) in which gamma is flagged as borderline.
inline constexpr double kGammaBorderline = 1e-9;

struct CertificateVerdict {
  /// max_i ||nu_i a_i - sum_{j in S_p, j != i} xi_ij - (sum_{q != p} n_q) v_p||
  double s1_residual = 0.0;
  /// max_i ||nu_i a_i||, the scale the residual is compared against
  double s1_scale = 0.0;
  double tolerance = kCertificateTolerance;
  double gamma = 0.0;
  bool strict_gamma = false;
  bool gamma_borderline = false;
  bool spans_ok = false;
  bool certifies = false;
};

/// Checks stationarity, gamma < 1 and the per-class span condition.
/// When `certifies` is true the candidate solution is the unique minimizer.
CertificateVerdict verify_certificate(const Certificate& cert, const Dataset& data,
                                      const MixtureModel& model,
                                      double tol = kCertificateTolerance);

}  // namespace cmlr

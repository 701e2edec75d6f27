#pragma once

#include "cmlr/model.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace cmlr {

/// Unit vector (beta_p - beta_q) / ||beta_p - beta_q||. Throws ModelError when equal.
Eigen::VectorXd direction_between(const Eigen::VectorXd& beta_p, const Eigen::VectorXd& beta_q);

/// Average of the directions from every other beta_q towards beta_p, weighted
/// by `weights[q]`. Weights must be non-negative with a positive sum over q != p.
Eigen::VectorXd weighted_direction(int p, const Eigen::MatrixXd& betas,
                                   std::span<const double> weights);

/// Same, weighted by the model's class sizes. Requires k >= 2.
Eigen::VectorXd weighted_direction(int p, const MixtureModel& model);

/// All pairwise and weighted directions of a model.
struct DirectionSet {
  /// pairwise[p][q] is v_pq; the diagonal is left empty.
  std::vector<std::vector<Eigen::VectorXd>> pairwise;
  std::vector<Eigen::VectorXd> weighted;
};

DirectionSet compute_directions(const MixtureModel& model);

/// ||P_{v^perp} a|| / ||P_v a||. Throws OrthogonalPointError (point index -1)
/// when a is orthogonal to v and ModelError when v is zero.
double separation_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& v);

/// d x (d-1) matrix with orthonormal columns spanning the complement of v.
///
/// Built from the Householder reflector that maps v/||v|| onto a multiple of
/// e_1; the result is columns 2..d of that reflector, so it is a fixed
/// function of v.
Eigen::MatrixXd orthonormal_complement_basis(const Eigen::VectorXd& v);

/// Relative threshold on singular values used for every rank decision.
inline constexpr double kRankTolerance = 1e-10;

/// Number of singular values of `rows` above kRankTolerance times the largest.
Index numerical_rank(const Eigen::MatrixXd& rows);

struct ConditionReport {
  /// max over points of separation_ratio(a_i, v_{label i}); +inf if any point is orthogonal
  double separation_lhs = 0.0;
  /// (1/2) min_p n_p / m
  double separation_rhs = 0.0;
  bool well_separated = false;
  /// per-class maximum of the separation ratio
  std::vector<double> class_separation;
  /// tau_p, the normalised balance defect of each class
  std::vector<double> balance_residuals;
  std::vector<bool> span_ok;
  /// rows with v_p^T a_i = 0 (these make the ratio infinite)
  std::vector<Index> orthogonal_points;
};

/// Evaluates well-separation, balance and the per-class span condition of a
/// labelled dataset against its ground-truth model. Requires k >= 2.
ConditionReport check_conditions(const Dataset& data, const MixtureModel& model);

}  // namespace cmlr

#pragma once

#include "cmlr/model.hpp"

#include <Eigen/Core>

#include <vector>

namespace cmlr {

struct SolverOptions {
  /// smoothing added to squared distances in the weight update
  double delta = 1e-16;
  int max_iter = 150;
  /// stop once (1/sqrt(m)) ||Z_{t+1} - Z_t||_F falls below this
  double stop_tol = 1e-5;
  /// bound on the relative residual of each reduced linear solve
  double subproblem_tol = 1e-10;
  /// delta_t = delta * decay^t; 1 keeps delta fixed
  double delta_decay = 1.0;

  /// Throws DataError on out-of-range values.
  void validate() const;
};

/// Symmetric, non-negative pair weights with a zero diagonal.
class WeightMatrix {
 public:
  explicit WeightMatrix(Eigen::MatrixXd w);
  static WeightMatrix uniform(Index m);

  Index size() const noexcept { return w_.rows(); }
  const Eigen::MatrixXd& values() const noexcept { return w_; }

 private:
  struct Trusted {};
  WeightMatrix(Eigen::MatrixXd w, Trusted) : w_(std::move(w)) {}
  friend WeightMatrix update_weights(const EstimateField& z, double delta);

  Eigen::MatrixXd w_;
};

struct SubproblemResult {
  EstimateField estimates;
  /// false when the minimizer is not unique; the minimum-norm one is returned
  bool unique = true;
  /// false when the graph of positive weights has more than one component
  bool connected = true;
  /// relative residual of the reduced linear solve
  double residual = 0.0;
  /// reciprocal condition estimate of the (regularised) reduced matrix
  double rcond = 1.0;
};

/// Exact minimizer of sum_{i,j} w_ij ||z_i - z_j||^2 subject to a_i^T z_i = b_i.
///
/// Each z_i is written as z0_i + N_i y_i with z0_i = b_i a_i / ||a_i||^2 and
/// N_i an orthonormal basis of a_i's complement, which leaves a positive
/// semidefinite system in y of size m (d - 1). Directions in which the
/// objective is flat (a connected component whose a_i do not span R^d) are
/// identified explicitly and removed, giving the minimum-norm minimizer.
/// Throws NumericalError if the system is too ill-conditioned (rcond < 1e-14)
/// or the solve residual exceeds `subproblem_tol`.
SubproblemResult weighted_ls_step(const Dataset& data, const WeightMatrix& w,
                                  double subproblem_tol = 1e-10);

/// w_ij = (||z_i - z_j||^2 + delta)^(-1/2), zero diagonal.
WeightMatrix update_weights(const EstimateField& z, double delta);

/// F_delta(Z) = sum over ordered pairs i != j of sqrt(||z_i - z_j||^2 + delta).
double smoothed_objective(const EstimateField& z, double delta);

struct SolveTrace {
  int iterations = 0;
  /// F_delta after every weighted least-squares solve
  std::vector<double> objective_history;
  std::vector<double> step_norms;
  double final_step_norm = 0.0;
  bool converged = false;
  /// number of subproblems whose minimizer was not unique
  int nonunique_steps = 0;
};

struct SolveResult {
  EstimateField estimates;
  SolveTrace trace;
};

/// Iteratively reweighted least squares for
///   min sum_{i,j} ||z_i - z_j||  s.t.  a_i^T z_i = b_i,
/// starting from uniform weights.
SolveResult irls_solve(const Dataset& data, const SolverOptions& opts = {});

}  // namespace cmlr

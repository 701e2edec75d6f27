#pragma once

// Dense O(m^2) kernels shared by the solver and the evaluation functionals.
//
// Every kernel exists twice: an OpenMP version in cmlr::kernels and a plain
// loop version in cmlr::kernels::serial. The serial versions are the
// reference the tests compare against and the baseline in bench/. The OpenMP
// versions only parallelize over independent rows and combine partial sums in
// a fixed order, so their results do not depend on the thread count.

#include <Eigen/Core>

namespace cmlr::kernels {

/// Sum over ordered pairs i != j of ||z_i - z_j||. `zt` holds z_i as column i.
double pairwise_distance_sum(const Eigen::MatrixXd& zt);

/// Sum over ordered pairs i != j of sqrt(||z_i - z_j||^2 + delta).
double smoothed_distance_sum(const Eigen::MatrixXd& zt, double delta);

/// w_ij = (||z_i - z_j||^2 + delta)^(-1/2) for i != j, w_ii = 0.
/// Each pair is evaluated once and mirrored, so `w` is exactly symmetric.
void reweight(const Eigen::MatrixXd& zt, double delta, Eigen::MatrixXd& w);

/// Reduced normal matrix H = N^T (L (x) I_d) N of the weighted subproblem.
///
/// `gram` is N^T N for the stacked per-point null-space bases N_i (each
/// d x block), `w` the pair weights. Block (i, j) of H is -w_ij N_i^T N_j and
/// block (i, i) is (sum_j w_ij) N_i^T N_i.
void assemble_reduced_hessian(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& w,
                              Eigen::Index block, Eigen::MatrixXd& h);

/// Right-hand side of the reduced system: block i is
/// sum_j w_ij (C_ij - C_ii) where C = N^T Z0 (block rows, one column per point).
void assemble_reduced_rhs(const Eigen::MatrixXd& cross, const Eigen::MatrixXd& w,
                          Eigen::Index block, Eigen::VectorXd& rhs);

namespace serial {

double pairwise_distance_sum(const Eigen::MatrixXd& zt);
double smoothed_distance_sum(const Eigen::MatrixXd& zt, double delta);
void reweight(const Eigen::MatrixXd& zt, double delta, Eigen::MatrixXd& w);
void assemble_reduced_hessian(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& w,
                              Eigen::Index block, Eigen::MatrixXd& h);
void assemble_reduced_rhs(const Eigen::MatrixXd& cross, const Eigen::MatrixXd& w,
                          Eigen::Index block, Eigen::VectorXd& rhs);

}  // namespace serial

}  // namespace cmlr::kernels

#include "cmlr/irls.hpp"

#include "cmlr/error.hpp"
#include "cmlr/geometry.hpp"
#include "cmlr/kernels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <string>

namespace cmlr {

void SolverOptions::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DataError("delta must be positive");
  if (max_iter < 1) throw DataError("max_iter must be at least 1");
  if (!(stop_tol > 0.0)) throw DataError("stop_tol must be positive");
  if (!(subproblem_tol > 0.0)) throw DataError("subproblem_tol must be positive");
  if (!(delta_decay > 0.0 && delta_decay <= 1.0)) throw DataError("delta_decay must lie in (0, 1]");
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() != w_.cols()) throw DataError("weight matrix must be square");
  for (Index j = 0; j < w_.cols(); ++j) {
    if (w_(j, j) != 0.0) throw DataError("weight matrix must have a zero diagonal");
    for (Index i = 0; i < w_.rows(); ++i) {
      const double v = w_(i, j);
      if (!std::isfinite(v) || v < 0.0) throw DataError("weights must be finite and non-negative");
      if (v != w_(j, i)) throw DataError("weight matrix must be symmetric");
    }
  }
}

WeightMatrix WeightMatrix::uniform(Index m) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(m, m);
  w.diagonal().setZero();
  return WeightMatrix(std::move(w), Trusted{});
}

WeightMatrix update_weights(const EstimateField& z, double delta) {
  if (!(delta > 0.0)) throw DataError("delta must be positive");
  Eigen::MatrixXd w;
  kernels::reweight(z.values().transpose(), delta, w);
  return WeightMatrix(std::move(w), WeightMatrix::Trusted{});
}

double smoothed_objective(const EstimateField& z, double delta) {
  return kernels::smoothed_distance_sum(z.values().transpose(), delta);
}

namespace {

// Connected components of the graph with an edge wherever w_ij > 0.
std::vector<Index> weight_components(const Eigen::MatrixXd& w, Index& count) {
  const Index m = w.rows();
  std::vector<Index> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index j = 0; j < m; ++j) {
    for (Index i = j + 1; i < m; ++i) {
      if (w(i, j) > 0.0) {
        const Index ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<Index> label(static_cast<std::size_t>(m), -1);
  std::vector<Index> root_label(static_cast<std::size_t>(m), -1);
  count = 0;
  for (Index i = 0; i < m; ++i) {
    const Index r = find(i);
    if (root_label[r] < 0) root_label[r] = count++;
    label[i] = root_label[r];
  }
  return label;
}

double relative_residual(const Eigen::MatrixXd& h, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& rhs) {
  const double scale = h.cwiseAbs().rowwise().sum().maxCoeff() * y.cwiseAbs().maxCoeff() +
                       rhs.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (h * y - rhs).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

SubproblemResult weighted_ls_step(const Dataset& data, const WeightMatrix& weights,
                                  double subproblem_tol) {
  const Index m = data.size();
  const Index d = data.dim();
  if (weights.size() != m) throw DataError("weight matrix size does not match the dataset");
  const Eigen::MatrixXd& w = weights.values();

  SubproblemResult result;
  Index components = 0;
  const std::vector<Index> component = weight_components(w, components);
  result.connected = components <= 1;

  // Particular solutions z0_i and per-point null-space bases N_i.
  const Index block = d - 1;
  Eigen::MatrixXd z0t(d, m);
  Eigen::MatrixXd basis(d, m * block);
  for (Index i = 0; i < m; ++i) {
    const Eigen::VectorXd a = data.feature(i);
    z0t.col(i) = (data.response(i) / a.squaredNorm()) * a;
    if (block > 0) basis.middleCols(i * block, block) = orthonormal_complement_basis(a);
  }
  if (block == 0) {
    result.estimates = EstimateField(z0t.transpose());
    return result;
  }

  const Eigen::MatrixXd gram = basis.transpose() * basis;
  const Eigen::MatrixXd cross = basis.transpose() * z0t;
  Eigen::MatrixXd h;
  Eigen::VectorXd rhs;
  kernels::assemble_reduced_hessian(gram, w, block, h);
  kernels::assemble_reduced_rhs(cross, w, block, rhs);

  // Flat directions: for a component whose a_i leave a subspace T uncovered,
  // shifting every z_i in the component by t in T costs nothing. In y those
  // shifts are u_i = N_i^T t.
  std::vector<Eigen::VectorXd> flat;
  for (Index c = 0; c < components; ++c) {
    std::vector<Index> rows;
    for (Index i = 0; i < m; ++i) {
      if (component[i] == c) rows.push_back(i);
    }
    Eigen::MatrixXd a(static_cast<Index>(rows.size()), d);
    for (std::size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Index>(r)) = data.features().row(rows[r]);
    // pad so the SVD always yields a full d x d right basis
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(std::max<Index>(a.rows(), d), d);
    padded.topRows(a.rows()) = a;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index s = 0; s < sv.size(); ++s) {
      if (sv(s) > kRankTolerance * sv(0)) ++rank;
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(rows.size()));
    for (Index s = rank; s < d; ++s) {
      const Eigen::VectorXd t = svd.matrixV().col(s);
      Eigen::VectorXd u = Eigen::VectorXd::Zero(m * block);
      for (Index i : rows) u.segment(i * block, block) = norm * basis.middleCols(i * block, block).transpose() * t;
      flat.push_back(std::move(u));
    }
  }
  result.unique = flat.empty();

  Eigen::MatrixXd flat_basis(m * block, static_cast<Index>(flat.size()));
  for (std::size_t s = 0; s < flat.size(); ++s) flat_basis.col(static_cast<Index>(s)) = flat[s];
  if (!flat.empty()) {
    // H + s U U^T is positive definite and its solution has no component in U.
    const double shift = std::max(h.diagonal().maxCoeff(), 1.0);
    h.noalias() += shift * flat_basis * flat_basis.transpose();
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("weighted least-squares system is not positive definite");
  }
  result.rcond = llt.rcond();
  if (!(result.rcond >= 1e-14)) {
    throw NumericalError("weighted least-squares system is ill-conditioned (rcond " +
                         std::to_string(result.rcond) + ")");
  }
  Eigen::VectorXd y = llt.solve(rhs);
  result.residual = relative_residual(h, y, rhs);
  if (result.residual > subproblem_tol) {
    y += llt.solve(rhs - h * y);
    result.residual = relative_residual(h, y, rhs);
    if (result.residual > subproblem_tol) {
      throw NumericalError("weighted least-squares residual " + std::to_string(result.residual) +
                           " exceeds the tolerance");
    }
  }
  if (!flat.empty()) y -= flat_basis * (flat_basis.transpose() * y);

  Eigen::MatrixXd z(m, d);
  for (Index i = 0; i < m; ++i) {
    z.row(i) = (z0t.col(i) + basis.middleCols(i * block, block) * y.segment(i * block, block)).transpose();
  }
  result.estimates = EstimateField(std::move(z));
  return result;
}

SolveResult irls_solve(const Dataset& data, const SolverOptions& opts) {
  opts.validate();
  if (data.size() < 1) throw DataError("cannot solve an empty dataset");

  SolveResult out;
  SolveTrace& trace = out.trace;
  double delta = opts.delta;

  SubproblemResult step = weighted_ls_step(data, WeightMatrix::uniform(data.size()), opts.subproblem_tol);
  EstimateField z = std::move(step.estimates);
  trace.iterations = 1;
  trace.nonunique_steps += step.unique ? 0 : 1;
  trace.objective_history.push_back(smoothed_objective(z, delta));

  while (trace.iterations < opts.max_iter) {
    step = weighted_ls_step(data, update_weights(z, delta), opts.subproblem_tol);
    ++trace.iterations;
    trace.nonunique_steps += step.unique ? 0 : 1;
    const double moved = recovery_error(step.estimates, z);
    z = std::move(step.estimates);
    trace.objective_history.push_back(smoothed_objective(z, delta));
    trace.step_norms.push_back(moved);
    trace.final_step_norm = moved;
    if (moved < opts.stop_tol) {
      trace.converged = true;
      break;
    }
    delta *= opts.delta_decay;
  }
  out.estimates = std::move(z);
  return out;
}

}  // namespace cmlr

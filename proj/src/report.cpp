#include "cmlr/report.hpp"

#include <cmath>

namespace cmlr {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json one_based(const std::vector<int>& labels) {
  json out = json::array();
  for (int l : labels) out.push_back(l + 1);
  return out;
}

}  // namespace

json to_json(const SolveTrace& trace) {
  return {{"iterations", trace.iterations},
          {"objective_history", numbers(trace.objective_history)},
          {"step_norms", numbers(trace.step_norms)},
          {"final_step_norm", number(trace.final_step_norm)},
          {"converged", trace.converged},
          {"nonunique_steps", trace.nonunique_steps}};
}

json to_json(const SolverOptions& opts) {
  return {{"delta", opts.delta},
          {"max_iter", opts.max_iter},
          {"stop_tol", opts.stop_tol},
          {"subproblem_tol", opts.subproblem_tol},
          {"delta_decay", opts.delta_decay}};
}

json to_json(const ConditionReport& report) {
  json orthogonal = json::array();
  for (Index i : report.orthogonal_points) orthogonal.push_back(i + 1);
  json span = json::array();
  for (bool ok : report.span_ok) span.push_back(ok);
  return {{"separation_lhs", number(report.separation_lhs)},
          {"separation_lhs_infinite", std::isinf(report.separation_lhs)},
          {"separation_rhs", number(report.separation_rhs)},
          {"well_separated", report.well_separated},
          {"class_separation", numbers(report.class_separation)},
          {"balance_residuals", numbers(report.balance_residuals)},
          {"span_ok", span},
          {"orthogonal_points", orthogonal}};
}

json to_json(const CertificateVerdict& verdict) {
  return {{"s1_residual", number(verdict.s1_residual)},
          {"s1_scale", number(verdict.s1_scale)},
          {"tolerance", verdict.tolerance},
          {"gamma", number(verdict.gamma)},
          {"strict_gamma", verdict.strict_gamma},
          {"gamma_borderline", verdict.gamma_borderline},
          {"spans_ok", verdict.spans_ok},
          {"certifies", verdict.certifies}};
}

json to_json(const CertifyReport& report) {
  json out = {{"conditions", to_json(report.conditions)}};
  if (report.verdict) {
    out["verdict"] = to_json(*report.verdict);
    out["certifies"] = report.verdict->certifies;
  } else {
    out["verdict"] = nullptr;
    out["certifies"] = false;
    out["error"] = report.error;
    out["orthogonal_point"] = report.orthogonal_point + 1;
  }
  return out;
}

json to_json(const ClusteringResult& result) {
  return {{"centers", matrix_rows(result.centers)},
          {"labels", one_based(result.labels)},
          {"inertia", number(result.inertia)},
          {"iterations", result.iterations},
          {"restart", result.restart}};
}

json to_json(const RefitResult& result) {
  json residual = json::array();
  for (Index p = 0; p < result.per_class_residual.size(); ++p) residual.push_back(number(result.per_class_residual(p)));
  json under = json::array();
  for (bool u : result.underdetermined) under.push_back(u);
  return {{"betas", matrix_rows(result.betas)}, {"per_class_residual", residual}, {"underdetermined", under}};
}

json to_json(const FitReport& report) {
  json out = {{"m", report.processed.size()},
              {"d", report.processed.dim()},
              {"k", report.clustering.centers.rows()},
              {"refit", to_json(report.refit)},
              {"clustering", to_json(report.clustering)},
              {"trace", to_json(report.trace)},
              {"seconds", report.seconds}};
  if (report.match) {
    json perm = json::array();
    for (int p : report.match->permutation) perm.push_back(p + 1);
    out["match"] = {{"permutation", perm}, {"accuracy", report.match->accuracy}};
  }
  return out;
}

json to_json(const PhaseGrid& grid) {
  json dims = json::array();
  for (Index d : grid.dims) dims.push_back(d);
  json records = json::array();
  for (std::size_t di = 0; di < grid.dims.size(); ++di) {
    for (std::size_t si = 0; si < grid.sweep.size(); ++si) {
      for (int t = 0; t < grid.trials; ++t) {
        const TrialRecord& r = grid.record(di, si, t);
        json rec = {{"d", grid.dims[di]},
                    {"value", grid.sweep[si]},
                    {"trial", t},
                    {"seed", r.seed},
                    {"recovery_error", number(r.recovery_error)},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"success", r.success},
                    {"certified", r.certified},
                    {"failed", r.failed}};
        if (r.failed) rec["error"] = r.error;
        records.push_back(std::move(rec));
      }
    }
  }
  return {{"mode", to_string(grid.mode)},
          {"dims", dims},
          {"sweep", grid.sweep},
          {"trials", grid.trials},
          {"fractions", matrix_rows(grid.fractions)},
          {"records", records}};
}

}  // namespace cmlr

#include "cmlr/pipeline.hpp"

#include "cmlr/csv_io.hpp"
#include "cmlr/error.hpp"

#include <chrono>
#include <limits>

namespace cmlr {

FitReport fit_mixture(const Dataset& data, int k, const FitOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Dataset processed = opts.preprocess
                          ? preprocess_center_scale(data, opts.preprocess->alpha, opts.preprocess->column)
                          : data;
  SolveResult solved = irls_solve(processed, opts.solver);
  ClusteringResult clusters = kmeans(solved.estimates.values(), k, opts.restarts, opts.seed);
  RefitResult refit = refit_regression(processed, clusters.labels, k);
  std::optional<LabelMatch> match;
  if (data.has_labels() && data.num_classes() <= k) {
    match = match_labels(clusters.labels, data.labels(), k);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return FitReport{std::move(processed), std::move(solved.estimates), std::move(solved.trace),
                   std::move(clusters),  std::move(refit),             std::move(match),
                   seconds};
}

CertifyReport certify_instance(const Dataset& data, const MixtureModel& model, double tol) {
  CertifyReport report{check_conditions(data, model), std::nullopt, -1, {}};
  try {
    const Certificate cert = build_certificate(data, model);
    report.verdict = verify_certificate(cert, data, model, tol);
  } catch (const OrthogonalPointError& e) {
    report.orthogonal_point = e.point();
    report.error = e.what();
  }
  return report;
}

double max_objective_increase(const SolveTrace& trace) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t < trace.objective_history.size(); ++t) {
    worst = std::max(worst, trace.objective_history[t] - trace.objective_history[t - 1]);
  }
  return trace.objective_history.size() < 2 ? 0.0 : worst;
}

}  // namespace cmlr

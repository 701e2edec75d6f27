// Command-line front end: gen, solve, certify, fit, phase.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include "cmlr/csv_io.hpp"
#include "cmlr/error.hpp"
#include "cmlr/phase.hpp"
#include "cmlr/pipeline.hpp"
#include "cmlr/report.hpp"
#include "cmlr/synthetic.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void add_solver_flags(CLI::App* cmd, cmlr::SolverOptions& opts) {
  cmd->add_option("--delta", opts.delta, "IRLS smoothing delta")->capture_default_str();
  cmd->add_option("--max-iter", opts.max_iter, "maximum IRLS iterations")->capture_default_str();
  cmd->add_option("--stop-tol", opts.stop_tol, "stop when (1/sqrt m)||Z_t+1 - Z_t||_F < tol")->capture_default_str();
  cmd->add_option("--delta-decay", opts.delta_decay, "geometric factor applied to delta each iteration (1 = fixed)")
      ->capture_default_str();
}

void emit_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw cmlr::DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// "3:8" or "3,4,5"
std::vector<cmlr::Index> parse_dims(const std::string& text) {
  std::vector<cmlr::Index> dims;
  try {
    if (const auto colon = text.find(':'); colon != std::string::npos) {
      const long lo = std::stol(text.substr(0, colon));
      const long hi = std::stol(text.substr(colon + 1));
      for (long d = lo; d <= hi; ++d) dims.push_back(d);
    } else {
      std::size_t start = 0;
      while (start <= text.size()) {
        const auto comma = text.find(',', start);
        dims.push_back(std::stol(text.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--dims", "expected LO:HI or a comma-separated list");
  }
  if (dims.empty()) throw CLI::ValidationError("--dims", "empty dimension list");
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex mixed linear regression: fusion-penalty IRLS solver, dual certificates and phase diagrams"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic labelled dataset");
  std::string gen_kind = "sim1";
  cmlr::Sim1Config sim1;
  cmlr::Sim2Config sim2;
  cmlr::Index gen_d = 5;
  cmlr::Index gen_per_class = 0;
  double gen_alpha = -1.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_betas;
  bool gen_unsafe = false;
  gen->add_option("--kind", gen_kind, "sim1 (balanced) or sim2 (class 3 imbalanced)")
      ->check(CLI::IsMember({"sim1", "sim2"}))
      ->capture_default_str();
  gen->add_option("--k", sim1.k, "number of classes (sim1)")->capture_default_str();
  gen->add_option("--d", gen_d, "dimension")->capture_default_str();
  gen->add_option("--per-class", gen_per_class, "rows per class (default 16 for sim1, 4d for sim2)");
  gen->add_option("--alpha", gen_alpha, "aperture (default 0.1 for sim1, 0.2 for sim2)");
  gen->add_option("--tau", sim2.tau, "imbalance radius of class 3 (sim2)")->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "dataset CSV")->required();
  gen->add_option("--betas", gen_betas, "coefficient CSV");
  gen->add_flag("--unsafe", gen_unsafe, "allow apertures above 0.75 and imbalance above 0.062");

  // solve
  auto* solve = app.add_subcommand("solve", "run IRLS and write the per-point estimates");
  cmlr::SolverOptions solve_opts;
  std::string solve_data, solve_out, solve_trace;
  solve->add_option("--data", solve_data, "dataset CSV")->required();
  solve->add_option("--out", solve_out, "estimates CSV")->required();
  solve->add_option("--trace", solve_trace, "solve trace JSON (default stdout)");
  add_solver_flags(solve, solve_opts);

  // certify
  auto* certify = app.add_subcommand("certify", "check recovery conditions and the dual certificate");
  std::string cert_data, cert_betas, cert_out;
  double cert_tol = cmlr::kCertificateTolerance;
  certify->add_option("--data", cert_data, "labelled dataset CSV")->required();
  certify->add_option("--betas", cert_betas, "coefficient CSV")->required();
  certify->add_option("--tol", cert_tol, "relative stationarity tolerance")->capture_default_str();
  certify->add_option("--out", cert_out, "verdict JSON (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "solve, cluster with k-means and refit each class");
  cmlr::FitOptions fit_opts;
  std::string fit_data, fit_dir = ".";
  int fit_k = 2;
  std::optional<cmlr::Index> fit_column;
  double fit_alpha = 1.0;
  fit->add_option("--data", fit_data, "dataset CSV")->required();
  fit->add_option("--k", fit_k, "number of classes")->capture_default_str()->check(CLI::PositiveNumber);
  fit->add_option("--restarts", fit_opts.restarts, "k-means restarts")->capture_default_str();
  fit->add_option("--seed", fit_opts.seed, "k-means seed")->capture_default_str();
  fit->add_option("--center-column", fit_column, "1-based feature column to center and scale");
  fit->add_option("--alpha", fit_alpha, "scale applied to the centered column")->capture_default_str();
  fit->add_option("--out-dir", fit_dir, "directory for fit.json, labels.csv, estimates.csv")->capture_default_str();
  add_solver_flags(fit, fit_opts.solver);

  // phase
  auto* phase = app.add_subcommand("phase", "run a recovery phase diagram over (d, aperture) or (d, imbalance)");
  std::string phase_mode = "aperture", phase_dims = "3:15", phase_prefix = "phase";
  std::vector<double> phase_alpha, phase_tau;
  cmlr::PhaseConfig phase_cfg;
  phase->add_option("--mode", phase_mode, "aperture or imbalance")
      ->check(CLI::IsMember({"aperture", "imbalance"}))
      ->capture_default_str();
  phase->add_option("--dims", phase_dims, "dimensions, LO:HI or comma list")->capture_default_str();
  phase->add_option("--alpha", phase_alpha, "aperture values (aperture mode)")->delimiter(',');
  phase->add_option("--tau", phase_tau, "imbalance values (imbalance mode)")->delimiter(',');
  phase->add_option("--trials", phase_cfg.trials, "trials per cell")->capture_default_str();
  phase->add_option("--success-tol", phase_cfg.success_tol, "recovery error threshold")->capture_default_str();
  phase->add_option("--seed", phase_cfg.base_seed, "base seed")->capture_default_str();
  phase->add_option("--workers", phase_cfg.workers, "worker threads (0 = all)")->capture_default_str();
  phase->add_option("--out", phase_prefix, "output prefix for .csv, .pgm, .json, _trials.csv")->capture_default_str();
  phase->add_flag("--unsafe", phase_cfg.unsafe, "allow sweep values outside the standard ranges");
  add_solver_flags(phase, phase_cfg.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      cmlr::SyntheticInstance inst = [&] {
        const double max_alpha = 0.75, max_tau = 0.062;
        if (gen_kind == "sim1") {
          sim1.d = gen_d;
          sim1.per_class = gen_per_class > 0 ? gen_per_class : 16;
          sim1.alpha = gen_alpha >= 0.0 ? gen_alpha : 0.1;
          sim1.seed = gen_seed;
          if (!gen_unsafe && sim1.alpha > max_alpha) throw cmlr::DataError("aperture above 0.75 needs --unsafe");
          return cmlr::gen_sim1(sim1);
        }
        sim2.d = gen_d;
        sim2.per_class = gen_per_class;
        sim2.alpha = gen_alpha >= 0.0 ? gen_alpha : 0.2;
        sim2.seed = gen_seed;
        if (!gen_unsafe && (sim2.alpha > max_alpha || sim2.tau > max_tau)) {
          throw cmlr::DataError("aperture above 0.75 or imbalance above 0.062 needs --unsafe");
        }
        return cmlr::gen_sim2(sim2);
      }();
      cmlr::write_csv(gen_out, inst.data);
      if (!gen_betas.empty()) cmlr::write_betas(gen_betas, inst.model.betas());
      return 0;
    }

    if (*solve) {
      const cmlr::Dataset data = cmlr::load_csv(solve_data);
      const cmlr::SolveResult result = cmlr::irls_solve(data, solve_opts);
      cmlr::write_estimates(solve_out, result.estimates);
      nlohmann::json j = cmlr::to_json(result.trace);
      j["options"] = cmlr::to_json(solve_opts);
      j["feasibility_residual"] = cmlr::feasibility_residual(result.estimates, data);
      j["objective"] = cmlr::objective(result.estimates);
      emit_json(j, solve_trace);
      return 0;
    }

    if (*certify) {
      const cmlr::Dataset data = cmlr::load_csv(cert_data);
      const Eigen::MatrixXd betas = cmlr::load_betas(cert_betas);
      if (!data.has_labels()) throw cmlr::DataError("certify needs a label column");
      const cmlr::MixtureModel model(betas, data.class_sizes());
      const cmlr::CertifyReport report = cmlr::certify_instance(data, model, cert_tol);
      emit_json(cmlr::to_json(report), cert_out);
      return report.verdict ? 0 : kExitNumerical;
    }

    if (*fit) {
      const cmlr::Dataset data = cmlr::load_csv(fit_data);
      if (fit_column) fit_opts.preprocess = cmlr::Preprocess{*fit_column - 1, fit_alpha};
      const cmlr::FitReport report = cmlr::fit_mixture(data, fit_k, fit_opts);
      fs::create_directories(fit_dir);
      const fs::path dir(fit_dir);
      nlohmann::json j = cmlr::to_json(report);
      j["options"] = cmlr::to_json(fit_opts.solver);
      emit_json(j, (dir / "fit.json").string());
      cmlr::write_labels(dir / "labels.csv", report.clustering.labels);
      cmlr::write_estimates(dir / "estimates.csv", report.estimates, report.clustering.labels);
      cmlr::write_betas(dir / "betas.csv", report.refit.betas);
      return 0;
    }

    if (*phase) {
      phase_cfg.mode = cmlr::parse_phase_mode(phase_mode);
      const cmlr::PhaseConfig defaults = cmlr::PhaseConfig::defaults(phase_cfg.mode);
      phase_cfg.dims = parse_dims(phase_dims);
      const auto& values = phase_cfg.mode == cmlr::PhaseMode::aperture ? phase_alpha : phase_tau;
      phase_cfg.sweep = values.empty() ? defaults.sweep : values;
      const cmlr::PhaseGrid grid = cmlr::run_phase(phase_cfg);
      cmlr::write_phase_csv(phase_prefix + ".csv", grid);
      cmlr::write_phase_pgm(phase_prefix + ".pgm", grid);
      cmlr::write_trials_csv(phase_prefix + "_trials.csv", grid);
      emit_json(cmlr::to_json(grid), phase_prefix + ".json");
      for (std::size_t di = 0; di < grid.dims.size(); ++di) {
        std::cout << "d=" << grid.dims[di];
        for (std::size_t si = 0; si < grid.sweep.size(); ++si) {
          std::cout << ' ' << cmlr::format_double(grid.fractions(static_cast<cmlr::Index>(di), static_cast<cmlr::Index>(si)));
        }
        std::cout << '\n';
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cmlr::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const cmlr::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

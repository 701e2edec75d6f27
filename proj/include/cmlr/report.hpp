#pragma once

// JSON views of the result types. Non-finite numbers are written as null.

#include "cmlr/certificate.hpp"
#include "cmlr/cluster.hpp"
#include "cmlr/geometry.hpp"
#include "cmlr/irls.hpp"
#include "cmlr/phase.hpp"
#include "cmlr/pipeline.hpp"

#include "json.hpp"

namespace cmlr {

nlohmann::json to_json(const SolveTrace& trace);
nlohmann::json to_json(const SolverOptions& opts);
nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const CertificateVerdict& verdict);
nlohmann::json to_json(const CertifyReport& report);
nlohmann::json to_json(const ClusteringResult& result);
nlohmann::json to_json(const RefitResult& result);
nlohmann::json to_json(const FitReport& report);
nlohmann::json to_json(const PhaseGrid& grid);

}  // namespace cmlr

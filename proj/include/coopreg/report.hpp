#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "coopreg/regulator.hpp"
#include "coopreg/robust.hpp"
#include "coopreg/scenarios.hpp"
#include "coopreg/sim.hpp"

namespace coopreg {

using Json = nlohmann::ordered_json;

// {"rows": r, "cols": c, "data": row-major values}.
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& field);

// 64-bit FNV-1a of the canonical scenario JSON, as 16 hex digits.
std::string input_hash(const Scenario& s);

Json assumptions_to_json(const AssumptionReport& rep);

// Gains and every a-posteriori number of a synthesized regulator.
Json regulator_report(const Scenario& s, const DistributedRegulator& reg,
                      const AssumptionReport& assumptions,
                      const std::optional<RobustReport>& robust = std::nullopt);

// Throws Error(kParseError) on malformed reports and Error(kDimensionMismatch)
// when the embedded input hash differs from input_hash(s).
DistributedRegulator regulator_from_report(const Json& report, const Scenario& s);

struct ResetMetrics {
  double time = 0.0;
  double decay_rate = 0.0;      // fitted over [time, time + window]
  bool decay_valid = false;     // false when the signal vanished
  double max_sync_error = 0.0;  // max of ||eps_s|| over [time, next reset)
};

struct SimMetrics {
  std::vector<double> final_error_norms;  // ||e_k(t_end)||
  double max_final_error = 0.0;
  std::vector<ResetMetrics> resets;
  double internal_abscissa = 0.0;
  bool p1 = false;
  double observer_decay = 0.0;  // fitted rate of the stacked observer errors
  std::vector<std::string> warnings;
};

// Per-reset sync-error windows use `window` seconds.
SimMetrics compute_metrics(const MultiAgentProblem& p, const DistributedRegulator& reg,
                           const ClosedLoopSystem& cls, const SimulationTrace& trace,
                           double window = 2.0);
Json metrics_to_json(const SimMetrics& m);

}  // namespace coopreg

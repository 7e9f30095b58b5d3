#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coopreg/problem.hpp"

namespace coopreg {

struct AssumptionVerdict {
  std::string name;  // "A1", "A1'", "A2", "A2'", "A3", "A4", "A5", "A6"
  int agent = -1;    // 0-based, or -1 for network-wide verdicts
  bool passed = false;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionVerdict> verdicts;

  // True when every verdict with one of these names passed.
  bool passes(const std::vector<std::string>& names) const;
  bool passes(const std::string& name) const { return passes(std::vector<std::string>{name}); }
  std::vector<AssumptionVerdict> failures() const;
};

// Names of the assumptions each synthesis mode relies on.
std::vector<std::string> required_assumptions(SynthesisMode mode);

AssumptionReport check_assumptions(const MultiAgentProblem& p,
                                   const SynthesisOptions& opts);

struct AgentGains {
  Eigen::MatrixXd F;
  Eigen::MatrixXd G_g, G_l;
  Eigen::MatrixXd L;  // observer gain on the (x, d_l) composite
  Eigen::MatrixXd Pi_g, Gamma_g, Pi_l, Gamma_l;
  double closed_loop_abscissa = 0.0;  // of A - B F
  double observer_abscissa = 0.0;     // of the observer error matrix
};

struct DistributedRegulator {
  SynthesisMode mode = SynthesisMode::kNominal;
  std::vector<AgentGains> agents;
  Eigen::MatrixXd K;
  std::optional<Eigen::MatrixXd> H;

  // A-posteriori numbers recorded at synthesis time.
  std::vector<std::complex<double>> lambdas;  // nonzero Laplacian eigenvalues
  // Eigenvalues K is designed for: `lambdas` plus those of the graph without
  // the edges into the informed agent, which govern the estimation errors.
  std::vector<std::complex<double>> k_lambdas;
  std::vector<double> k_abscissa;  // of S^g - lambda K per entry of k_lambdas
  // Of A - B F - lambda B H per lambda; of the nominal A~ - lambda B~ H in
  // the robust mode.
  std::vector<double> h_abscissa;
};

// Gain consistency, observers, K and F only.
DistributedRegulator synth_nominal(const MultiAgentProblem& p,
                                   const SynthesisOptions& opts);

// Adds the coupling gain H for identical agents. Throws
// Error(kIdenticalityViolated) or Error(kInvalidArgument) when eta <= gamma.
DistributedRegulator synth_transient_identical(const MultiAgentProblem& p,
                                               const SynthesisOptions& opts);

// Shared by the nominal and transient syntheses; `weight_R` overrides
// opts.lqr_R when given.
DistributedRegulator synth_base(const MultiAgentProblem& p,
                                const SynthesisOptions& opts,
                                const Eigen::MatrixXd* weight_R = nullptr);

// x_k - Pi_g d_g - Pi_l d_l.
Eigen::VectorXd transient_component(const DistributedRegulator& reg, int k,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& d_g,
                                    const Eigen::VectorXd& d_l);

struct ControllerEstimates {
  Eigen::VectorXd x_hat;
  Eigen::VectorXd dg_hat;
  Eigen::VectorXd dl_hat;
};

// u_k for agent k. `neighbor_eps_hat` holds eps_hat_j for j in N_k, in the
// order of graph.neighbors(k); it is ignored in nominal mode.
Eigen::VectorXd control_law(const DistributedRegulator& reg, int k,
                            const ControllerEstimates& est,
                            const std::vector<Eigen::VectorXd>& neighbor_eps_hat);

// Stacked plant of all agents with d = (d_g, d_l_1, ..., d_l_N).
struct OverallPlant {
  Eigen::MatrixXd A, B, Bd, C, D, Dd, Ce, De, Ded, S;
};
OverallPlant build_overall_plant(const MultiAgentProblem& p);

struct Lemma1Check {
  bool equivalent = false;
  double overall_residual = 0.0;
  double local_residual = 0.0;
};

// Solves the overall regulator equation directly and compares it with the
// block solution assembled from the local ones. Throws Error(kNoSolution)
// naming the failing side.
Lemma1Check crosscheck_lemma1_detailed(const MultiAgentProblem& p);
bool crosscheck_lemma1(const MultiAgentProblem& p);

}  // namespace coopreg

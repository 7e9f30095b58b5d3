#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coopreg/graph.hpp"
#include "coopreg/lmi.hpp"

namespace coopreg {

// Generalized plant of one agent:
//   x' = A x + B u + B_dg d_g + B_dl d_l
//   y  = C x + D u + D_dg d_g + D_dl d_l
//   e  = Ce x + De u + D_edg d_g + D_edl d_l
struct AgentPlant {
  Eigen::MatrixXd A, B, B_dg, B_dl;
  Eigen::MatrixXd C, D, D_dg, D_dl;
  Eigen::MatrixXd Ce, De, D_edg, D_edl;
  Eigen::VectorXd x0;  // initial plant state; zero when empty

  Eigen::Index n_x() const { return A.rows(); }
  Eigen::Index n_u() const { return B.cols(); }
  Eigen::Index n_y() const { return C.rows(); }
  Eigen::Index n_e() const { return Ce.rows(); }
  Eigen::Index n_dg() const { return B_dg.cols(); }
  Eigen::Index n_dl() const { return B_dl.cols(); }

  // Throws Error(kValidationError) naming the first inconsistent matrix.
  void validate(const std::string& where) const;
};

struct ExoReset {
  double time = 0.0;
  Eigen::VectorXd state;
};

// d' = S d with scheduled overwrites of d at the reset times.
struct Exosystem {
  Eigen::MatrixXd S;
  Eigen::VectorXd d0;  // zero when empty
  std::vector<ExoReset> resets;

  Eigen::Index dim() const { return S.rows(); }
  Eigen::VectorXd initial_state() const;
  void validate(const std::string& where) const;
};

struct MultiAgentProblem {
  std::vector<AgentPlant> agents;
  Exosystem global_exo;
  std::vector<Exosystem> local_exos;
  DiGraph graph{1, {}};
  int informed_agent = 0;

  int n_agents() const { return static_cast<int>(agents.size()); }
  void validate() const;
};

enum class SynthesisMode { kNominal, kTransientIdentical, kTransientRobust };
enum class ObserverStrategy { kDualLqr, kExactPoles };

std::string to_string(SynthesisMode mode);
std::string to_string(ObserverStrategy strategy);

struct SynthesisOptions {
  // Decay rate of the synchronization error.
  double gamma = 1.0;
  // Decay rate of the local and distributed observers.
  double eta = 3.0;
  Eigen::MatrixXd lqr_Q;  // empty selects identity
  Eigen::MatrixXd lqr_R;  // empty selects identity
  // Weight used instead of lqr_R in the robust mode, when set.
  std::optional<Eigen::MatrixXd> lqr_R_robust;
  ObserverStrategy observer = ObserverStrategy::kDualLqr;
  std::vector<std::complex<double>> observer_poles;
  // Pole region for the coupling gain H; half-plane(gamma) when unset.
  std::optional<LmiRegion> region;
  // Describes `region` for reports, e.g. {"s", 3, 30, 1.047}.
  std::string region_kind;
  std::vector<double> region_params;
  double margin_factor = 0.95;
  // H-infinity level used when the uncertainty bound is zero.
  double eta_cap = 1e3;

  LmiRegion coupling_region() const;
};

}  // namespace coopreg

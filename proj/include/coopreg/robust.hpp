#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "coopreg/lmi.hpp"
#include "coopreg/problem.hpp"
#include "coopreg/regulator.hpp"
#include "coopreg/state_space.hpp"

namespace coopreg {

struct NominalModel {
  Eigen::MatrixXd A_tilde;
  Eigen::MatrixXd B_tilde;
};

// Averages of A_k - B_k F_k and B_k. Throws Error(kDimensionMismatch) on
// differing state or input dimensions and Error(kNominalNotHurwitz).
NominalModel nominal_average(const std::vector<Eigen::MatrixXd>& closed_A,
                             const std::vector<Eigen::MatrixXd>& B);

// Realization of G_k(s) - G(s) with G_k = (sI - A_cl)^-1 B_k and
// G = (sI - A~)^-1 B~. Throws Error(kNotStable).
StateSpace additive_uncertainty(const Eigen::MatrixXd& closed_A,
                                const Eigen::MatrixXd& B,
                                const NominalModel& nominal);

struct UncertainDecomposition {
  Eigen::MatrixXd A_tilde, B_tilde;
  Eigen::MatrixXd B_omega, C_zeta, D_zeta;
  std::vector<StateSpace> deltas;
  std::vector<double> delta_norms;
  double eta_delta = 0.0;
  int worst_agent = 0;
};

// Nominal model, uncertainty realizations and their H-infinity norms. The
// per-agent norms are computed in parallel.
UncertainDecomposition decompose(const std::vector<Eigen::MatrixXd>& closed_A,
                                 const std::vector<Eigen::MatrixXd>& B);

// max_k ||Delta_k||_inf. `parallel` selects the OpenMP loop.
double uncertainty_bound(const std::vector<StateSpace>& deltas,
                         std::vector<double>* norms = nullptr, bool parallel = true);

struct SmallGainCheck {
  std::vector<double> norms;  // ||T_k|| for lambda = 0 followed by the given lambdas
  bool norms_below_eta = false;
  bool product_below_one = false;
  bool ok() const { return norms_below_eta && product_below_one; }
};

SmallGainCheck verify_small_gain(const UncertainDecomposition& dec,
                                 const Eigen::MatrixXd& H,
                                 const std::vector<std::complex<double>>& lambdas,
                                 double eta);

struct RobustReport {
  double eta_delta = 0.0;
  int worst_agent = 0;
  std::vector<double> delta_norms;
  double eta_lower_bound = 0.0;  // open-loop norm of the nominal plant
  double eta_used = 0.0;
  std::vector<HinfCouplingCheck> checks;
  SmallGainCheck small_gain;
  // Eigenvalues of A~ - lambda B~ H per nonzero lambda.
  std::vector<std::vector<std::complex<double>>> nominal_poles;
  // Eigenvalues of diag(A_k - B_k F_k) - diag(B_k)(L (x) H).
  std::vector<std::complex<double>> network_poles;
  double nominal_decay = 0.0;
  // -Re of the slowest network pole after discarding the n_x slowest ones,
  // which belong to the synchronous motion in the nominal network.
  double achieved_decay = 0.0;
  double nominal_abscissa = 0.0;  // of A~
  double certified_margin = 0.0;
};

struct RobustCoupling {
  Eigen::MatrixXd H;
  RobustReport report;
};

// Throws Error(kGraphNotUndirected), Error(kEtaBelowOpenLoopBound),
// InfeasibleError or Error(kPostCheckFailed).
RobustCoupling synth_robust_coupling(const MultiAgentProblem& p,
                                     const std::vector<Eigen::MatrixXd>& F,
                                     const SynthesisOptions& opts);

// Full regulator for non-identical agents: F_k from the robust weight,
// observers as in the nominal design and H from synth_robust_coupling.
std::pair<DistributedRegulator, RobustReport> synth_transient_robust(
    const MultiAgentProblem& p, const SynthesisOptions& opts);

}  // namespace coopreg

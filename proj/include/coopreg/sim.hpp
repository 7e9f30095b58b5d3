#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coopreg/problem.hpp"
#include "coopreg/regulator.hpp"

namespace coopreg {

// Named contiguous ranges of the stacked closed-loop state.
class SliceMap {
 public:
  struct Slice {
    std::string name;
    Eigen::Index offset = 0;
    Eigen::Index size = 0;
  };

  void add(std::string name, Eigen::Index size);
  const Slice& at(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<Slice>& slices() const { return slices_; }
  Eigen::Index dim() const { return dim_; }

  // agent1.x.1, agent1.x.2, ... one label per state entry.
  std::vector<std::string> column_labels() const;

 private:
  std::vector<Slice> slices_;
  Eigen::Index dim_ = 0;
};

struct ResetEvent {
  double time = 0.0;
  Eigen::Index offset = 0;
  Eigen::VectorXd state;
};

// Autonomous closed loop z' = A_cl z. Per agent k the state holds x_k,
// x_hat_k and d_hat_l_k; agents 2..N add d_hat_g_k; then d_g and every
// d_l_k follow. Agent 1 reads d_g in place of d_hat_g_1.
struct ClosedLoopSystem {
  Eigen::MatrixXd A_cl;
  SliceMap slices;
  // u = U z with the inputs of all agents stacked.
  Eigen::MatrixXd U;
  std::vector<Eigen::Index> u_offset;
  std::vector<ResetEvent> resets;  // sorted by time
  Eigen::VectorXd initial_state;
  std::vector<Eigen::Index> exo_indices;

  Eigen::Index dim() const { return A_cl.rows(); }
  // Rows of U for agent k.
  Eigen::MatrixXd input_map(int k) const;
};

// Throws Error(kDimensionMismatch) when reg does not match p.
ClosedLoopSystem assemble(const MultiAgentProblem& p, const DistributedRegulator& reg);

struct SimulationTrace {
  std::vector<double> times;
  Eigen::MatrixXd states;  // row i is the state at times[i]
  SliceMap slices;

  // Rows x slice-size block for one named slice.
  Eigen::MatrixXd slice(const std::string& name) const;
};

// Exact propagation with Phi = exp(A_cl dt). Reset times are snapped to the
// nearest grid point; snapped times are reported through `warnings`. The
// trace stores post-reset states.
SimulationTrace simulate(const ClosedLoopSystem& cls, const Eigen::VectorXd& z0,
                         double t_end, double dt,
                         std::vector<std::string>* warnings = nullptr);
SimulationTrace simulate(const ClosedLoopSystem& cls, double t_end, double dt,
                         std::vector<std::string>* warnings = nullptr);

// Per agent, times x n_e regulation errors.
std::vector<Eigen::MatrixXd> regulation_errors(const MultiAgentProblem& p,
                                               const ClosedLoopSystem& cls,
                                               const SimulationTrace& trace);

// Per agent, times x n_x transient components from true states.
std::vector<Eigen::MatrixXd> transient_components(const MultiAgentProblem& p,
                                                  const DistributedRegulator& reg,
                                                  const SimulationTrace& trace);

// Per agent, times x n_x synchronization errors eps_k - mean_j eps_j.
std::vector<Eigen::MatrixXd> sync_errors(const MultiAgentProblem& p,
                                         const DistributedRegulator& reg,
                                         const SimulationTrace& trace);

struct ObserverErrors {
  Eigen::MatrixXd x;    // x - x_hat
  Eigen::MatrixXd d_l;  // d_l - d_hat_l
  Eigen::MatrixXd d_g;  // d_g - d_hat_g (identically zero for agent 1)
};
std::vector<ObserverErrors> observer_errors(const MultiAgentProblem& p,
                                            const SimulationTrace& trace);

// Row-wise Euclidean norm of the horizontally stacked signals.
Eigen::VectorXd stacked_norm(const std::vector<Eigen::MatrixXd>& signals);

// Negated least-squares slope of log(norm) over samples with t1 <= t <= t2.
// Throws Error(kInvalidArgument) with fewer than two samples and
// Error(kSignalVanished) when a norm is <= 1e-12.
double estimate_decay_rate(const std::vector<double>& times, const Eigen::VectorXd& norms,
                           double t1, double t2);

// Spectral abscissa of A_cl with the exosystem rows and columns removed.
double internal_abscissa(const ClosedLoopSystem& cls);
bool verify_p1(const MultiAgentProblem& p, const DistributedRegulator& reg);

// Header row of column labels, then one row per sample with %.17g values.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
void write_signal_csv(std::ostream& out, const std::vector<double>& times,
                      const std::vector<std::string>& labels, const Eigen::MatrixXd& values);

}  // namespace coopreg

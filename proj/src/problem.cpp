#include "coopreg/problem.hpp"

#include "coopreg/error.hpp"
#include "coopreg/numlin.hpp"

namespace coopreg {

namespace {

void expect_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                  const std::string& where, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::kValidationError,
                where + "." + name + " must be " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

}  // namespace

void AgentPlant::validate(const std::string& where) const {
  const auto n = n_x(), m = n_u(), p = n_y(), q = n_e(), dg = n_dg(), dl = n_dl();
  expect_shape(A, n, n, where, "A");
  expect_shape(B, n, m, where, "B");
  expect_shape(B_dg, n, dg, where, "B_dg");
  expect_shape(B_dl, n, dl, where, "B_dl");
  expect_shape(C, p, n, where, "C");
  expect_shape(D, p, m, where, "D");
  expect_shape(D_dg, p, dg, where, "D_dg");
  expect_shape(D_dl, p, dl, where, "D_dl");
  expect_shape(Ce, q, n, where, "Ce");
  expect_shape(De, q, m, where, "De");
  expect_shape(D_edg, q, dg, where, "D_edg");
  expect_shape(D_edl, q, dl, where, "D_edl");
  if (x0.size() != 0 && x0.size() != n) {
    throw Error(ErrorCode::kValidationError, where + ".x0 must have " +
                                                 std::to_string(n) + " entries");
  }
  if (n == 0) throw Error(ErrorCode::kValidationError, where + " has no states");
}

Eigen::VectorXd Exosystem::initial_state() const {
  return d0.size() == 0 ? Eigen::VectorXd::Zero(dim()) : d0;
}

void Exosystem::validate(const std::string& where) const {
  if (S.rows() != S.cols()) {
    throw Error(ErrorCode::kValidationError, where + ".S must be square");
  }
  if (d0.size() != 0 && d0.size() != dim()) {
    throw Error(ErrorCode::kValidationError,
                where + ".d0 must have " + std::to_string(dim()) + " entries");
  }
  if (dim() > 0) {
    const double tol = 1e-9 * (1.0 + S.norm());
    const Eigen::VectorXcd lam = eigenvalues(S);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (lam(i).real() < -tol) {
        throw Error(ErrorCode::kValidationError,
                    where + ".S has an asymptotically stable eigenvalue");
      }
    }
  }
  double last = -1.0;
  for (const auto& r : resets) {
    if (!(r.time > last) || r.time < 0.0) {
      throw Error(ErrorCode::kValidationError,
                  where + " reset times must be nonnegative and strictly increasing");
    }
    last = r.time;
    if (r.state.size() != dim()) {
      throw Error(ErrorCode::kValidationError,
                  where + " reset state must have " + std::to_string(dim()) + " entries");
    }
  }
}

void MultiAgentProblem::validate() const {
  const int n = n_agents();
  if (n == 0) throw Error(ErrorCode::kValidationError, "problem has no agents");
  if (graph.n_nodes() != n) {
    throw Error(ErrorCode::kValidationError, "graph node count differs from agent count");
  }
  if (static_cast<int>(local_exos.size()) != n) {
    throw Error(ErrorCode::kValidationError, "need one local exosystem per agent");
  }
  if (informed_agent != 0) {
    throw Error(ErrorCode::kValidationError, "the informed agent must be agent 1");
  }
  global_exo.validate("global_exo");
  for (int k = 0; k < n; ++k) {
    const std::string where = "agents[" + std::to_string(k) + "]";
    agents[k].validate(where);
    if (agents[k].n_dg() != global_exo.dim()) {
      throw Error(ErrorCode::kValidationError,
                  where + ".B_dg column count differs from the global exosystem order");
    }
    local_exos[k].validate("local_exos[" + std::to_string(k) + "]");
    if (agents[k].n_dl() != local_exos[k].dim()) {
      throw Error(ErrorCode::kValidationError,
                  where + ".B_dl column count differs from its local exosystem order");
    }
  }
}

std::string to_string(SynthesisMode mode) {
  switch (mode) {
    case SynthesisMode::kNominal: return "nominal";
    case SynthesisMode::kTransientIdentical: return "transient_identical";
    case SynthesisMode::kTransientRobust: return "transient_robust";
  }
  return "unknown";
}

std::string to_string(ObserverStrategy strategy) {
  return strategy == ObserverStrategy::kDualLqr ? "dual_lqr" : "exact_poles";
}

LmiRegion SynthesisOptions::coupling_region() const {
  return region ? *region : region_halfplane(gamma);
}

}  // namespace coopreg

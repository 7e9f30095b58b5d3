#include "coopreg/regulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "coopreg/error.hpp"
#include "coopreg/lmi.hpp"
#include "coopreg/numlin.hpp"

namespace coopreg {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

bool AssumptionReport::passes(const std::vector<std::string>& names) const {
  for (const auto& v : verdicts) {
    if (!v.passed && std::find(names.begin(), names.end(), v.name) != names.end()) {
      return false;
    }
  }
  return true;
}

std::vector<AssumptionVerdict> AssumptionReport::failures() const {
  std::vector<AssumptionVerdict> out;
  for (const auto& v : verdicts)
    if (!v.passed) out.push_back(v);
  return out;
}

std::vector<std::string> required_assumptions(SynthesisMode mode) {
  switch (mode) {
    case SynthesisMode::kNominal: return {"A1", "A2", "A3", "A4", "A5"};
    case SynthesisMode::kTransientIdentical:
      return {"A1'", "A2'", "A3", "A4", "A5", "A6"};
    case SynthesisMode::kTransientRobust: return {"A1", "A2", "A3", "A4", "A5"};
  }
  return {};
}

namespace {

MatrixXd weight_or_identity(const MatrixXd& w, Eigen::Index n) {
  return w.size() == 0 ? MatrixXd::Identity(n, n) : w;
}

// ([A B_dl; 0 S_l], [C D_dl]).
void observer_pair(const AgentPlant& a, const Exosystem& local, MatrixXd* ao,
                   MatrixXd* co) {
  const auto n = a.n_x(), dl = a.n_dl();
  ao->setZero(n + dl, n + dl);
  ao->topLeftCorner(n, n) = a.A;
  ao->topRightCorner(n, dl) = a.B_dl;
  ao->bottomRightCorner(dl, dl) = local.S;
  co->resize(a.n_y(), n + dl);
  *co << a.C, a.D_dl;
}

MatrixXd lqr_for(const AgentPlant& a, const SynthesisOptions& opts,
                 const MatrixXd* weight_R) {
  const MatrixXd q = weight_or_identity(opts.lqr_Q, a.n_x());
  const MatrixXd r = weight_or_identity(weight_R ? *weight_R : opts.lqr_R, a.n_u());
  return lqr_gain(a.A, a.B, q, r);
}

std::string agent_tag(int k) { return "agent " + std::to_string(k + 1); }

}  // namespace

AssumptionReport check_assumptions(const MultiAgentProblem& p,
                                   const SynthesisOptions& opts) {
  p.validate();
  AssumptionReport rep;
  auto add = [&](const std::string& name, int agent, bool ok, std::string detail) {
    rep.verdicts.push_back({name, agent, ok, std::move(detail)});
  };
  std::vector<MatrixXd> f_gains(p.n_agents());
  bool f_ok = true;
  for (int k = 0; k < p.n_agents(); ++k) {
    const AgentPlant& a = p.agents[k];
    const Exosystem& local = p.local_exos[k];
    add("A1", k, is_stabilizable(a.A, a.B), "(A_k, B_k) stabilizable");
    add("A1'", k, is_stabilizable(a.A, a.B, opts.gamma),
        "(A_k + gamma I, B_k) stabilizable, gamma = " + std::to_string(opts.gamma));
    MatrixXd ao, co;
    observer_pair(a, local, &ao, &co);
    add("A2", k, is_detectable(ao, co), "composite observer pair detectable");
    add("A2'", k, is_detectable(ao, co, opts.eta),
        "shifted composite observer pair detectable, eta = " + std::to_string(opts.eta));
    try {
      solve_regulator_equation(a.A, a.B, a.Ce, a.De, p.global_exo.S, a.B_dg, a.D_edg);
      solve_regulator_equation(a.A, a.B, a.Ce, a.De, local.S, a.B_dl, a.D_edl);
      add("A4", k, true, "local regulator equations solvable");
    } catch (const Error& e) {
      add("A4", k, false, e.what());
    }
    try {
      f_gains[k] = lqr_for(a, opts, nullptr);
    } catch (const Error&) {
      f_ok = false;
    }
  }
  add("A3", -1, p.informed_agent == 0, "agent 1 reads the global exosystem state");
  add("A5", -1, has_spanning_tree_rooted_at(p.graph, p.informed_agent),
      "graph has a spanning tree rooted at agent 1");

  bool identical = f_ok;
  std::string why = f_ok ? "" : "state feedback gains could not be computed";
  const AgentPlant& a0 = p.agents[0];
  for (int k = 1; k < p.n_agents() && identical; ++k) {
    const AgentPlant& a = p.agents[k];
    if (a.A != a0.A) why = "A differs for " + agent_tag(k);
    else if (a.B != a0.B) why = "B differs for " + agent_tag(k);
    else if (a.Ce != a0.Ce) why = "Ce differs for " + agent_tag(k);
    else if (a.De != a0.De) why = "De differs for " + agent_tag(k);
    else if (f_gains[k] != f_gains[0]) why = "F differs for " + agent_tag(k);
    identical = why.empty();
  }
  add("A6", -1, identical, identical ? "agents identical in (A, B, Ce, De, F)" : why);
  return rep;
}

DistributedRegulator synth_base(const MultiAgentProblem& p, const SynthesisOptions& opts,
                                const MatrixXd* weight_R) {
  p.validate();
  if (!has_spanning_tree_rooted_at(p.graph, p.informed_agent)) {
    throw Error(ErrorCode::kNotConnected,
                "A5 fails: agent 1 is not the root of a spanning tree");
  }
  if (!(opts.eta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "observer decay rate must be positive");
  }
  DistributedRegulator reg;
  const int n = p.n_agents();
  for (int k = 0; k < n; ++k) {
    const AgentPlant& a = p.agents[k];
    const Exosystem& local = p.local_exos[k];
    AgentGains g;
    try {
      g.F = lqr_for(a, opts, weight_R);
    } catch (const Error& e) {
      throw Error(e.code(), "A1 fails for " + agent_tag(k) + ": " + e.what());
    }
    g.closed_loop_abscissa = spectral_abscissa(a.A - a.B * g.F);
    try {
      const auto sg = solve_regulator_equation(a.A, a.B, a.Ce, a.De, p.global_exo.S,
                                               a.B_dg, a.D_edg);
      const auto sl =
          solve_regulator_equation(a.A, a.B, a.Ce, a.De, local.S, a.B_dl, a.D_edl);
      g.Pi_g = sg.Pi;
      g.Gamma_g = sg.Gamma;
      g.Pi_l = sl.Pi;
      g.Gamma_l = sl.Gamma;
    } catch (const Error& e) {
      throw Error(e.code(), "A4 fails for " + agent_tag(k) + ": " + e.what());
    }
    g.G_g = g.Gamma_g + g.F * g.Pi_g;
    g.G_l = g.Gamma_l + g.F * g.Pi_l;

    MatrixXd ao, co;
    observer_pair(a, local, &ao, &co);
    try {
      if (opts.observer == ObserverStrategy::kDualLqr) {
        g.L = place_observer_gain(ao, co, opts.eta);
      } else {
        g.L = place_poles_exact(ao, co, opts.observer_poles);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "A2 fails for " + agent_tag(k) + ": " + e.what());
    }
    g.observer_abscissa = spectral_abscissa(ao - g.L * co);
    if (!(g.closed_loop_abscissa < 0.0) || !(g.observer_abscissa < 0.0)) {
      throw Error(ErrorCode::kPostCheckFailed,
                  "state feedback or observer of " + agent_tag(k) + " is not Hurwitz");
    }
    reg.agents.push_back(std::move(g));
  }

  const auto ndg = p.global_exo.dim();
  reg.K = MatrixXd::Zero(ndg, ndg);
  if (n > 1) {
    reg.lambdas = laplacian_spectrum(p.graph).nonzero();
    reg.k_lambdas = reg.lambdas;
    for (const cplx lam :
         laplacian_spectrum(remove_incoming(p.graph, p.informed_agent)).nonzero()) {
      const bool known = std::any_of(reg.k_lambdas.begin(), reg.k_lambdas.end(),
                                     [&](cplx l) { return std::abs(l - lam) <= 1e-9; });
      if (!known) reg.k_lambdas.push_back(lam);
    }
    if (ndg > 0) {
      reg.K = synth_coupling_gain_region(p.global_exo.S, MatrixXd::Identity(ndg, ndg),
                                         reg.k_lambdas, region_halfplane(opts.eta))
                  .K;
    }
    for (const cplx lam : reg.k_lambdas) {
      const Eigen::MatrixXcd m =
          p.global_exo.S.cast<cplx>() - lam * reg.K.cast<cplx>();
      double worst = -std::numeric_limits<double>::infinity();
      if (ndg > 0) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
        worst = es.eigenvalues().real().maxCoeff();
      }
      reg.k_abscissa.push_back(worst);
    }
  }
  return reg;
}

DistributedRegulator synth_nominal(const MultiAgentProblem& p, const SynthesisOptions& opts) {
  DistributedRegulator reg = synth_base(p, opts);
  reg.mode = SynthesisMode::kNominal;
  return reg;
}

DistributedRegulator synth_transient_identical(const MultiAgentProblem& p,
                                               const SynthesisOptions& opts) {
  if (!(opts.gamma > 0.0) || !(opts.eta > opts.gamma)) {
    throw Error(ErrorCode::kInvalidArgument,
                "transient synchronization needs eta > gamma > 0");
  }
  const AssumptionReport rep = check_assumptions(p, opts);
  for (const auto& v : rep.failures()) {
    if (v.name == "A6") throw Error(ErrorCode::kIdenticalityViolated, v.detail);
  }
  for (const auto& v : rep.failures()) {
    if (v.name == "A1'") {
      throw Error(ErrorCode::kNotStabilizable, "A1' fails for " + agent_tag(v.agent));
    }
    if (v.name == "A2'") {
      throw Error(ErrorCode::kNotDetectable, "A2' fails for " + agent_tag(v.agent));
    }
  }
  DistributedRegulator reg = synth_base(p, opts);
  reg.mode = SynthesisMode::kTransientIdentical;
  const AgentPlant& a = p.agents[0];
  const MatrixXd acl = a.A - a.B * reg.agents[0].F;
  if (reg.lambdas.empty()) {
    reg.H = MatrixXd::Zero(a.n_u(), a.n_x());
    return reg;
  }
  const LmiRegion region = opts.coupling_region();
  reg.H = synth_coupling_gain_region(acl, a.B, reg.lambdas, region).K;
  for (const cplx lam : reg.lambdas) {
    const Eigen::MatrixXcd m = acl.cast<cplx>() - lam * (a.B * *reg.H).cast<cplx>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    reg.h_abscissa.push_back(es.eigenvalues().real().maxCoeff());
  }
  return reg;
}

VectorXd transient_component(const DistributedRegulator& reg, int k, const VectorXd& x,
                             const VectorXd& d_g, const VectorXd& d_l) {
  const AgentGains& g = reg.agents.at(k);
  return x - g.Pi_g * d_g - g.Pi_l * d_l;
}

VectorXd control_law(const DistributedRegulator& reg, int k, const ControllerEstimates& est,
                     const std::vector<VectorXd>& neighbor_eps_hat) {
  const AgentGains& g = reg.agents.at(k);
  VectorXd u = -g.F * est.x_hat + g.G_g * est.dg_hat + g.G_l * est.dl_hat;
  if (reg.mode != SynthesisMode::kNominal && reg.H) {
    const VectorXd own = transient_component(reg, k, est.x_hat, est.dg_hat, est.dl_hat);
    VectorXd sum = VectorXd::Zero(own.size());
    for (const auto& eps : neighbor_eps_hat) sum += eps - own;
    u += *reg.H * sum;
  }
  return u;
}

OverallPlant build_overall_plant(const MultiAgentProblem& p) {
  p.validate();
  Eigen::Index nx = 0, nu = 0, ny = 0, ne = 0, ndl = 0;
  for (const auto& a : p.agents) {
    nx += a.n_x();
    nu += a.n_u();
    ny += a.n_y();
    ne += a.n_e();
    ndl += a.n_dl();
  }
  const auto ndg = p.global_exo.dim();
  const auto nd = ndg + ndl;
  OverallPlant o;
  o.A = MatrixXd::Zero(nx, nx);
  o.B = MatrixXd::Zero(nx, nu);
  o.Bd = MatrixXd::Zero(nx, nd);
  o.C = MatrixXd::Zero(ny, nx);
  o.D = MatrixXd::Zero(ny, nu);
  o.Dd = MatrixXd::Zero(ny, nd);
  o.Ce = MatrixXd::Zero(ne, nx);
  o.De = MatrixXd::Zero(ne, nu);
  o.Ded = MatrixXd::Zero(ne, nd);
  o.S = MatrixXd::Zero(nd, nd);
  o.S.topLeftCorner(ndg, ndg) = p.global_exo.S;
  Eigen::Index ix = 0, iu = 0, iy = 0, ie = 0, il = ndg;
  for (int k = 0; k < p.n_agents(); ++k) {
    const AgentPlant& a = p.agents[k];
    const auto n = a.n_x(), m = a.n_u(), q = a.n_y(), r = a.n_e(), l = a.n_dl();
    o.A.block(ix, ix, n, n) = a.A;
    o.B.block(ix, iu, n, m) = a.B;
    o.Bd.block(ix, 0, n, ndg) = a.B_dg;
    o.Bd.block(ix, il, n, l) = a.B_dl;
    o.C.block(iy, ix, q, n) = a.C;
    o.D.block(iy, iu, q, m) = a.D;
    o.Dd.block(iy, 0, q, ndg) = a.D_dg;
    o.Dd.block(iy, il, q, l) = a.D_dl;
    o.Ce.block(ie, ix, r, n) = a.Ce;
    o.De.block(ie, iu, r, m) = a.De;
    o.Ded.block(ie, 0, r, ndg) = a.D_edg;
    o.Ded.block(ie, il, r, l) = a.D_edl;
    o.S.block(il, il, l, l) = p.local_exos[k].S;
    ix += n;
    iu += m;
    iy += q;
    ie += r;
    il += l;
  }
  return o;
}

Lemma1Check crosscheck_lemma1_detailed(const MultiAgentProblem& p) {
  const OverallPlant o = build_overall_plant(p);
  Lemma1Check out;
  try {
    const auto sol = solve_regulator_equation(o.A, o.B, o.Ce, o.De, o.S, o.Bd, o.Ded);
    out.overall_residual = sol.residual;
  } catch (const Error& e) {
    throw Error(ErrorCode::kNoSolution, std::string("overall side: ") + e.what());
  }

  MatrixXd pi = MatrixXd::Zero(o.A.rows(), o.S.rows());
  MatrixXd gamma = MatrixXd::Zero(o.B.cols(), o.S.rows());
  const auto ndg = p.global_exo.dim();
  Eigen::Index ix = 0, iu = 0, il = ndg;
  for (int k = 0; k < p.n_agents(); ++k) {
    const AgentPlant& a = p.agents[k];
    try {
      const auto sg =
          solve_regulator_equation(a.A, a.B, a.Ce, a.De, p.global_exo.S, a.B_dg, a.D_edg);
      const auto sl = solve_regulator_equation(a.A, a.B, a.Ce, a.De, p.local_exos[k].S,
                                               a.B_dl, a.D_edl);
      pi.block(ix, 0, a.n_x(), ndg) = sg.Pi;
      gamma.block(iu, 0, a.n_u(), ndg) = sg.Gamma;
      pi.block(ix, il, a.n_x(), a.n_dl()) = sl.Pi;
      gamma.block(iu, il, a.n_u(), a.n_dl()) = sl.Gamma;
    } catch (const Error& e) {
      throw Error(ErrorCode::kNoSolution,
                  "local side, " + agent_tag(k) + ": " + e.what());
    }
    ix += a.n_x();
    iu += a.n_u();
    il += a.n_dl();
  }
  out.local_residual = regulator_residual(o.A, o.B, o.Ce, o.De, o.S, o.Bd, o.Ded, pi, gamma);
  out.equivalent = out.overall_residual <= 1e-8 && out.local_residual <= 1e-8;
  return out;
}

bool crosscheck_lemma1(const MultiAgentProblem& p) {
  return crosscheck_lemma1_detailed(p).equivalent;
}

}  // namespace coopreg

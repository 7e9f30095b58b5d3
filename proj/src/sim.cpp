#include "coopreg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "coopreg/error.hpp"
#include "coopreg/numlin.hpp"

namespace coopreg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void SliceMap::add(std::string name, Index size) {
  if (contains(name)) throw Error(ErrorCode::kInvalidArgument, "duplicate slice " + name);
  slices_.push_back({std::move(name), dim_, size});
  dim_ += size;
}

const SliceMap::Slice& SliceMap::at(const std::string& name) const {
  for (const auto& s : slices_) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown slice " + name);
}

bool SliceMap::contains(const std::string& name) const {
  return std::any_of(slices_.begin(), slices_.end(),
                     [&](const Slice& s) { return s.name == name; });
}

std::vector<std::string> SliceMap::column_labels() const {
  std::vector<std::string> out;
  out.reserve(dim_);
  for (const auto& s : slices_) {
    for (Index i = 0; i < s.size; ++i) out.push_back(s.name + "." + std::to_string(i + 1));
  }
  return out;
}

MatrixXd ClosedLoopSystem::input_map(int k) const {
  const Index begin = u_offset.at(k);
  return U.middleRows(begin, u_offset.at(k + 1) - begin);
}

namespace {

std::string agent_name(int k) { return "agent" + std::to_string(k + 1); }

// Rows of the identity that pick one slice out of z.
MatrixXd selector(const SliceMap& m, const std::string& name) {
  const auto& s = m.at(name);
  MatrixXd out = MatrixXd::Zero(s.size, m.dim());
  out.middleCols(s.offset, s.size).setIdentity();
  return out;
}

// Slice holding the global exosystem estimate used by agent k.
std::string dg_source(int k) { return k == 0 ? "d_g" : agent_name(k) + ".dhat_g"; }

}  // namespace

ClosedLoopSystem assemble(const MultiAgentProblem& p, const DistributedRegulator& reg) {
  p.validate();
  const int n = p.n_agents();
  if (static_cast<int>(reg.agents.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "regulator and problem differ in agent count");
  }
  const Index ndg = p.global_exo.dim();
  if (reg.K.rows() != ndg || reg.K.cols() != ndg) {
    throw Error(ErrorCode::kDimensionMismatch, "K does not match the global exosystem");
  }
  for (int k = 0; k < n; ++k) {
    const AgentPlant& a = p.agents[k];
    const AgentGains& g = reg.agents[k];
    if (g.F.rows() != a.n_u() || g.F.cols() != a.n_x() || g.L.rows() != a.n_x() + a.n_dl() ||
        g.L.cols() != a.n_y() || g.Pi_g.rows() != a.n_x() || g.Pi_g.cols() != ndg ||
        g.Pi_l.cols() != a.n_dl()) {
      throw Error(ErrorCode::kDimensionMismatch, "gains do not match " + agent_name(k));
    }
    if (reg.mode != SynthesisMode::kNominal && reg.H &&
        (reg.H->rows() != a.n_u() || reg.H->cols() != a.n_x())) {
      throw Error(ErrorCode::kDimensionMismatch, "H does not match " + agent_name(k));
    }
  }

  ClosedLoopSystem cls;
  SliceMap& m = cls.slices;
  for (int k = 0; k < n; ++k) {
    const AgentPlant& a = p.agents[k];
    m.add(agent_name(k) + ".x", a.n_x());
    m.add(agent_name(k) + ".xhat", a.n_x());
    m.add(agent_name(k) + ".dhat_l", a.n_dl());
    if (k > 0) m.add(agent_name(k) + ".dhat_g", ndg);
  }
  m.add("d_g", ndg);
  for (int k = 0; k < n; ++k) m.add(agent_name(k) + ".d_l", p.agents[k].n_dl());
  const Index dim = m.dim();

  // Inputs: the control law is linear in the estimates, so apply it to each
  // basis vector of z.
  cls.u_offset.push_back(0);
  for (int k = 0; k < n; ++k) cls.u_offset.push_back(cls.u_offset.back() + p.agents[k].n_u());
  cls.U = MatrixXd::Zero(cls.u_offset.back(), dim);
  std::vector<MatrixXd> xh(n), dgh(n), dlh(n);
  for (int k = 0; k < n; ++k) {
    xh[k] = selector(m, agent_name(k) + ".xhat");
    dgh[k] = selector(m, dg_source(k));
    dlh[k] = selector(m, agent_name(k) + ".dhat_l");
  }
  for (Index i = 0; i < dim; ++i) {
    std::vector<ControllerEstimates> est(n);
    std::vector<VectorXd> eps(n);
    for (int k = 0; k < n; ++k) {
      est[k] = {xh[k].col(i), dgh[k].col(i), dlh[k].col(i)};
      eps[k] = transient_component(reg, k, est[k].x_hat, est[k].dg_hat, est[k].dl_hat);
    }
    for (int k = 0; k < n; ++k) {
      std::vector<VectorXd> nb;
      for (int j : p.graph.neighbors(k)) nb.push_back(eps[j]);
      cls.U.block(cls.u_offset[k], i, p.agents[k].n_u(), 1) = control_law(reg, k, est[k], nb);
    }
  }

  MatrixXd& acl = cls.A_cl;
  acl = MatrixXd::Zero(dim, dim);
  const MatrixXd dg = selector(m, "d_g");
  for (int k = 0; k < n; ++k) {
    const AgentPlant& a = p.agents[k];
    const AgentGains& g = reg.agents[k];
    const Exosystem& local = p.local_exos[k];
    const std::string name = agent_name(k);
    const MatrixXd x = selector(m, name + ".x");
    const MatrixXd dl = selector(m, name + ".d_l");
    const MatrixXd u = cls.input_map(k);

    const auto& sx = m.at(name + ".x");
    acl.middleRows(sx.offset, sx.size) = a.A * x + a.B * u + a.B_dg * dg + a.B_dl * dl;

    const MatrixXd innovation = a.C * (x - xh[k]) + a.D_dg * (dg - dgh[k]) +
                                a.D_dl * (dl - dlh[k]);
    const Index nx = a.n_x();
    const auto& sxh = m.at(name + ".xhat");
    acl.middleRows(sxh.offset, sxh.size) = a.A * xh[k] + a.B * u + a.B_dg * dgh[k] +
                                           a.B_dl * dlh[k] + g.L.topRows(nx) * innovation;
    const auto& sdl = m.at(name + ".dhat_l");
    acl.middleRows(sdl.offset, sdl.size) = local.S * dlh[k] + g.L.bottomRows(a.n_dl()) * innovation;

    if (k > 0) {
      MatrixXd row = p.global_exo.S * dgh[k];
      for (int j : p.graph.neighbors(k)) row += reg.K * (dgh[j] - dgh[k]);
      acl.middleRows(m.at(name + ".dhat_g").offset, ndg) = row;
    }
    const auto& sd = m.at(name + ".d_l");
    acl.middleRows(sd.offset, sd.size) = local.S * dl;
  }
  acl.middleRows(m.at("d_g").offset, ndg) = p.global_exo.S * dg;

  cls.initial_state = VectorXd::Zero(dim);
  for (int k = 0; k < n; ++k) {
    const AgentPlant& a = p.agents[k];
    if (a.x0.size() > 0) cls.initial_state.segment(m.at(agent_name(k) + ".x").offset, a.n_x()) = a.x0;
    const auto& sd = m.at(agent_name(k) + ".d_l");
    cls.initial_state.segment(sd.offset, sd.size) = p.local_exos[k].initial_state();
    for (const auto& r : p.local_exos[k].resets) cls.resets.push_back({r.time, sd.offset, r.state});
  }
  const auto& sg = m.at("d_g");
  cls.initial_state.segment(sg.offset, sg.size) = p.global_exo.initial_state();
  for (const auto& r : p.global_exo.resets) cls.resets.push_back({r.time, sg.offset, r.state});
  std::stable_sort(cls.resets.begin(), cls.resets.end(),
                   [](const ResetEvent& a, const ResetEvent& b) { return a.time < b.time; });

  for (Index i = sg.offset; i < sg.offset + sg.size; ++i) cls.exo_indices.push_back(i);
  for (int k = 0; k < n; ++k) {
    const auto& sd = m.at(agent_name(k) + ".d_l");
    for (Index i = sd.offset; i < sd.offset + sd.size; ++i) cls.exo_indices.push_back(i);
  }
  return cls;
}

MatrixXd SimulationTrace::slice(const std::string& name) const {
  const auto& s = slices.at(name);
  return states.middleCols(s.offset, s.size);
}

SimulationTrace simulate(const ClosedLoopSystem& cls, const VectorXd& z0, double t_end,
                         double dt, std::vector<std::string>* warnings) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need dt > 0 and t_end >= 0");
  }
  if (z0.size() != cls.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial state has the wrong dimension");
  }
  const auto steps = static_cast<Index>(std::llround(t_end / dt));
  const MatrixXd phi = (cls.A_cl * dt).exp();

  // Resets keyed by grid index.
  std::vector<std::pair<Index, const ResetEvent*>> schedule;
  for (const auto& r : cls.resets) {
    const auto idx = static_cast<Index>(std::llround(r.time / dt));
    if (idx < 0 || idx > steps) continue;
    if (std::abs(static_cast<double>(idx) * dt - r.time) > 1e-9 * std::max(1.0, r.time) &&
        warnings) {
      warnings->push_back("reset at t = " + std::to_string(r.time) + " snapped to t = " +
                          std::to_string(static_cast<double>(idx) * dt));
    }
    schedule.emplace_back(idx, &r);
  }
  auto apply = [&](Index idx, VectorXd& z) {
    for (const auto& [i, r] : schedule) {
      if (i == idx) z.segment(r->offset, r->state.size()) = r->state;
    }
  };

  SimulationTrace trace;
  trace.slices = cls.slices;
  trace.times.resize(steps + 1);
  trace.states.resize(steps + 1, cls.dim());
  VectorXd z = z0;
  apply(0, z);
  trace.times[0] = 0.0;
  trace.states.row(0) = z.transpose();
  for (Index i = 1; i <= steps; ++i) {
    z = phi * z;
    apply(i, z);
    trace.times[i] = static_cast<double>(i) * dt;
    trace.states.row(i) = z.transpose();
  }
  return trace;
}

SimulationTrace simulate(const ClosedLoopSystem& cls, double t_end, double dt,
                         std::vector<std::string>* warnings) {
  return simulate(cls, cls.initial_state, t_end, dt, warnings);
}

std::vector<MatrixXd> regulation_errors(const MultiAgentProblem& p, const ClosedLoopSystem& cls,
                                        const SimulationTrace& trace) {
  std::vector<MatrixXd> out;
  const MatrixXd dg = selector(cls.slices, "d_g");
  for (int k = 0; k < p.n_agents(); ++k) {
    const AgentPlant& a = p.agents[k];
    const MatrixXd x = selector(cls.slices, agent_name(k) + ".x");
    const MatrixXd dl = selector(cls.slices, agent_name(k) + ".d_l");
    const MatrixXd map = a.Ce * x + a.De * cls.input_map(k) + a.D_edg * dg + a.D_edl * dl;
    out.push_back(trace.states * map.transpose());
  }
  return out;
}

std::vector<MatrixXd> transient_components(const MultiAgentProblem& p,
                                           const DistributedRegulator& reg,
                                           const SimulationTrace& trace) {
  std::vector<MatrixXd> out;
  const MatrixXd dg = trace.slice("d_g");
  for (int k = 0; k < p.n_agents(); ++k) {
    const AgentGains& g = reg.agents.at(k);
    out.push_back(trace.slice(agent_name(k) + ".x") - dg * g.Pi_g.transpose() -
                  trace.slice(agent_name(k) + ".d_l") * g.Pi_l.transpose());
  }
  return out;
}

std::vector<MatrixXd> sync_errors(const MultiAgentProblem& p, const DistributedRegulator& reg,
                                  const SimulationTrace& trace) {
  std::vector<MatrixXd> eps = transient_components(p, reg, trace);
  if (eps.empty()) return eps;
  MatrixXd mean = MatrixXd::Zero(eps[0].rows(), eps[0].cols());
  for (const auto& e : eps) {
    if (e.cols() != mean.cols()) {
      throw Error(ErrorCode::kDimensionMismatch, "sync errors need equal state dimensions");
    }
    mean += e;
  }
  mean /= static_cast<double>(eps.size());
  for (auto& e : eps) e -= mean;
  return eps;
}

std::vector<ObserverErrors> observer_errors(const MultiAgentProblem& p,
                                            const SimulationTrace& trace) {
  std::vector<ObserverErrors> out;
  const MatrixXd dg = trace.slice("d_g");
  for (int k = 0; k < p.n_agents(); ++k) {
    const std::string name = agent_name(k);
    ObserverErrors e;
    e.x = trace.slice(name + ".x") - trace.slice(name + ".xhat");
    e.d_l = trace.slice(name + ".d_l") - trace.slice(name + ".dhat_l");
    e.d_g = k == 0 ? MatrixXd::Zero(dg.rows(), dg.cols())
                   : MatrixXd(dg - trace.slice(name + ".dhat_g"));
    out.push_back(std::move(e));
  }
  return out;
}

VectorXd stacked_norm(const std::vector<MatrixXd>& signals) {
  if (signals.empty()) return VectorXd();
  VectorXd sq = VectorXd::Zero(signals[0].rows());
  for (const auto& s : signals) {
    if (s.rows() != sq.size()) throw Error(ErrorCode::kDimensionMismatch, "signal lengths differ");
    sq += s.rowwise().squaredNorm();
  }
  return sq.cwiseSqrt();
}

double estimate_decay_rate(const std::vector<double>& times, const VectorXd& norms, double t1,
                           double t2) {
  if (static_cast<Index>(times.size()) != norms.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "times and norms differ in length");
  }
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t1 - 1e-12 || times[i] > t2 + 1e-12) continue;
    const double v = norms[static_cast<Index>(i)];
    if (!(v > 1e-12)) {
      throw Error(ErrorCode::kSignalVanished,
                  "signal norm " + std::to_string(v) + " at t = " + std::to_string(times[i]));
    }
    ts.push_back(times[i]);
    ls.push_back(std::log(v));
  }
  if (ts.size() < 2) throw Error(ErrorCode::kInvalidArgument, "fewer than two samples in window");
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= n;
  ml /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    num += (ts[i] - mt) * (ls[i] - ml);
    den += (ts[i] - mt) * (ts[i] - mt);
  }
  return -num / den;
}

double internal_abscissa(const ClosedLoopSystem& cls) {
  std::vector<bool> exo(cls.dim(), false);
  for (Index i : cls.exo_indices) exo[i] = true;
  std::vector<Index> keep;
  for (Index i = 0; i < cls.dim(); ++i) {
    if (!exo[i]) keep.push_back(i);
  }
  if (keep.empty()) return -std::numeric_limits<double>::infinity();
  MatrixXd sub(keep.size(), keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t c = 0; c < keep.size(); ++c) sub(r, c) = cls.A_cl(keep[r], keep[c]);
  }
  return spectral_abscissa(sub);
}

bool verify_p1(const MultiAgentProblem& p, const DistributedRegulator& reg) {
  return internal_abscissa(assemble(p, reg)) < 0.0;
}

namespace {

void write_row(std::ostream& out, double t, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  out << buf;
  for (Index j = 0; j < row.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", row[j]);
    out << ',' << buf;
  }
  out << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  write_signal_csv(out, trace.times, trace.slices.column_labels(), trace.states);
}

void write_signal_csv(std::ostream& out, const std::vector<double>& times,
                      const std::vector<std::string>& labels, const MatrixXd& values) {
  if (static_cast<Index>(labels.size()) != values.cols() ||
      static_cast<Index>(times.size()) != values.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "CSV labels or times do not match the values");
  }
  out << "t";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) write_row(out, times[i], values.row(i));
}

}  // namespace coopreg

#include "coopreg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "coopreg/error.hpp"
#include "coopreg/graph.hpp"
#include "coopreg/numlin.hpp"
#include "coopreg/regulator.hpp"
#include "coopreg/scenarios.hpp"
#include "test_util.hpp"

namespace coopreg {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

ClosedLoopSystem raw_system(const MatrixXd& a) {
  ClosedLoopSystem cls;
  cls.A_cl = a;
  cls.slices.add("z", a.rows());
  cls.U = MatrixXd::Zero(0, a.rows());
  cls.initial_state = VectorXd::Zero(a.rows());
  return cls;
}

// Sorted by real part, then imaginary part.
std::vector<cplx> sorted(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-7) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

std::vector<cplx> to_vec(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

TEST(Assemble, SingleAgentSeparation) {
  MultiAgentProblem p = test::scalar_tracking_problem(DiGraph(1, {}));
  // Harmonic global exosystem to make the spectrum less trivial.
  AgentPlant& a = p.agents[0];
  a.A = (MatrixXd(2, 2) << 0.0, 1.0, 2.0, -1.0).finished();
  a.B = (MatrixXd(2, 1) << 0.0, 1.0).finished();
  a.B_dg = MatrixXd::Zero(2, 2);
  a.B_dl = (MatrixXd(2, 1) << 0.0, 1.0).finished();
  a.C = (MatrixXd(1, 2) << 1.0, 0.0).finished();
  a.D_dg = MatrixXd::Zero(1, 2);
  a.Ce = a.C;
  a.D_edg = (MatrixXd(1, 2) << -1.0, 0.0).finished();
  a.x0 = VectorXd::Zero(2);
  p.global_exo = {(MatrixXd(2, 2) << 0.0, 1.0, -1.0, 0.0).finished(), VectorXd::Ones(2), {}};
  const DistributedRegulator reg = synth_nominal(p, SynthesisOptions{});
  const ClosedLoopSystem cls = assemble(p, reg);

  const AgentGains& g = reg.agents[0];
  MatrixXd ao = MatrixXd::Zero(3, 3);
  ao.topLeftCorner(2, 2) = a.A;
  ao.topRightCorner(2, 1) = a.B_dl;
  MatrixXd co(1, 3);
  co << a.C, a.D_dl;
  std::vector<cplx> expected;
  for (const MatrixXd& m : {MatrixXd(a.A - a.B * g.F), MatrixXd(ao - g.L * co), p.global_exo.S,
                            p.local_exos[0].S}) {
    const auto ev = to_vec(eigenvalues(m));
    expected.insert(expected.end(), ev.begin(), ev.end());
  }
  const auto actual = sorted(to_vec(eigenvalues(cls.A_cl)));
  expected = sorted(expected);
  ASSERT_EQ(actual.size(), expected.size());
  for (std::size_t i = 0; i < actual.size(); ++i)
    EXPECT_LT(std::abs(actual[i] - expected[i]), 1e-6) << i;
  EXPECT_TRUE(verify_p1(p, reg));
}

TEST(Assemble, ZeroGainsDecouplePlant) {
  const Scenario s = platoon_scenario();
  DistributedRegulator reg = synth_nominal(s.problem, s.options);
  for (auto& g : reg.agents) {
    g.F.setZero();
    g.G_g.setZero();
    g.G_l.setZero();
    g.L.setZero();
  }
  reg.K.setZero();
  const ClosedLoopSystem cls = assemble(s.problem, reg);
  EXPECT_EQ(cls.U.norm(), 0.0);
  for (int k = 0; k < 5; ++k) {
    const auto& x = cls.slices.at("agent" + std::to_string(k + 1) + ".x");
    const auto& xh = cls.slices.at("agent" + std::to_string(k + 1) + ".xhat");
    EXPECT_EQ(cls.A_cl.block(x.offset, x.offset, 2, 2), s.problem.agents[k].A);
    EXPECT_EQ(cls.A_cl.block(x.offset, xh.offset, 2, 2).norm(), 0.0);
    EXPECT_EQ(cls.A_cl.block(xh.offset, x.offset, 2, 2).norm(), 0.0);
  }
}

TEST(Assemble, Dimension) {
  const Scenario s = platoon_scenario();
  const ClosedLoopSystem cls = assemble(s.problem, synth_nominal(s.problem, s.options));
  Eigen::Index expected = 0;
  for (int k = 0; k < 5; ++k)
    expected += 2 * s.problem.agents[k].n_x() + 2 * s.problem.agents[k].n_dl();
  expected += 4 * 2 + 2;
  EXPECT_EQ(cls.dim(), expected);
  EXPECT_EQ(cls.slices.dim(), expected);
  EXPECT_FALSE(cls.slices.contains("agent1.dhat_g"));
  EXPECT_TRUE(cls.slices.contains("agent2.dhat_g"));
  DistributedRegulator bad = synth_nominal(s.problem, s.options);
  bad.agents.pop_back();
  EXPECT_THROW(assemble(s.problem, bad), Error);
}

TEST(Simulate, ClosedForms) {
  const SimulationTrace c = simulate(raw_system(MatrixXd::Zero(2, 2)),
                                     (VectorXd(2) << 1.0, -2.0).finished(), 1.0, 0.1);
  for (Eigen::Index i = 0; i < c.states.rows(); ++i)
    EXPECT_EQ(c.states.row(i), (Eigen::RowVector2d(1.0, -2.0)));

  const SimulationTrace e = simulate(raw_system(-MatrixXd::Identity(1, 1)),
                                     VectorXd::Ones(1), 5.0, 0.1);
  ASSERT_EQ(e.times.size(), 51u);
  for (std::size_t i = 0; i < e.times.size(); ++i)
    EXPECT_NEAR(e.states(static_cast<Eigen::Index>(i), 0), std::exp(-e.times[i]), 1e-12);
}

TEST(Simulate, HarmonicConservation) {
  const MatrixXd s = (MatrixXd(2, 2) << 0.0, 1.0, -1.0, 0.0).finished();
  const SimulationTrace t = simulate(raw_system(s), (VectorXd(2) << 0.6, 0.8).finished(), 100.0, 0.01);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < t.states.rows(); ++i)
    worst = std::max(worst, std::abs(t.states.row(i).norm() - 1.0));
  EXPECT_LE(worst, 1e-9);
}

TEST(Simulate, StepHalving) {
  const Scenario s = platoon_scenario();
  const ClosedLoopSystem cls = assemble(s.problem, synth_transient_identical(s.problem, s.options));
  const SimulationTrace a = simulate(cls, 60.0, 0.01);
  const SimulationTrace b = simulate(cls, 60.0, 0.005);
  ASSERT_EQ(b.times.size(), 2 * a.times.size() - 1);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.states.rows(); ++i) {
    const double scale = std::max(1.0, a.states.row(i).norm());
    worst = std::max(worst, (a.states.row(i) - b.states.row(2 * i)).norm() / scale);
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Simulate, ResetsAndSnapping) {
  ClosedLoopSystem cls = raw_system(MatrixXd::Zero(1, 1));
  cls.resets.push_back({0.503, 0, VectorXd::Constant(1, 7.0)});
  std::vector<std::string> warnings;
  const SimulationTrace t = simulate(cls, VectorXd::Zero(1), 1.0, 0.01, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(t.states(49, 0), 0.0);
  EXPECT_EQ(t.states(50, 0), 7.0);
  EXPECT_EQ(t.states(100, 0), 7.0);
}

// Platoon nominal loop started on the steady-state manifold with exact
// estimates and no resets.
SimulationTrace on_manifold(const Scenario& s, const DistributedRegulator& reg,
                            ClosedLoopSystem* cls) {
  MultiAgentProblem p = s.problem;
  for (auto& e : p.local_exos) e.resets.clear();
  *cls = assemble(p, reg);
  VectorXd z = cls->initial_state;
  const VectorXd dg = p.global_exo.initial_state();
  z.segment(cls->slices.at("d_g").offset, dg.size()) = dg;
  for (int k = 0; k < p.n_agents(); ++k) {
    const std::string n = "agent" + std::to_string(k + 1);
    const VectorXd dl = p.local_exos[k].initial_state();
    const VectorXd x = reg.agents[k].Pi_g * dg + reg.agents[k].Pi_l * dl;
    z.segment(cls->slices.at(n + ".x").offset, x.size()) = x;
    z.segment(cls->slices.at(n + ".xhat").offset, x.size()) = x;
    z.segment(cls->slices.at(n + ".dhat_l").offset, dl.size()) = dl;
    if (k > 0) z.segment(cls->slices.at(n + ".dhat_g").offset, dg.size()) = dg;
  }
  return simulate(*cls, z, 20.0, 0.01);
}

TEST(Signals, OnManifoldErrorsVanish) {
  const Scenario s = platoon_scenario();
  const DistributedRegulator reg = synth_transient_identical(s.problem, s.options);
  ClosedLoopSystem cls;
  const SimulationTrace t = on_manifold(s, reg, &cls);
  double scale = 0.0;
  for (const auto& e : regulation_errors(s.problem, cls, t)) {
    EXPECT_LE(e.cwiseAbs().maxCoeff(), 1e-9);
  }
  for (const auto& eps : transient_components(s.problem, reg, t)) {
    scale = std::max(scale, eps.cwiseAbs().maxCoeff());
  }
  EXPECT_LE(scale, 1e-9);
}

TEST(Signals, ZeroStateGivesZeroError) {
  Scenario s = platoon_scenario();
  const DistributedRegulator reg = synth_nominal(s.problem, s.options);
  const ClosedLoopSystem cls = assemble(s.problem, reg);
  const SimulationTrace t = simulate(cls, VectorXd::Zero(cls.dim()), 5.0, 0.01);
  for (const auto& e : regulation_errors(s.problem, cls, t)) EXPECT_EQ(e.norm(), 0.0);
}

TEST(Signals, SyncErrorsSumToZero) {
  const Scenario s = platoon_scenario();
  const DistributedRegulator reg = synth_nominal(s.problem, s.options);
  const ClosedLoopSystem cls = assemble(s.problem, reg);
  const SimulationTrace t = simulate(cls, 20.0, 0.01);
  const auto eps_s = sync_errors(s.problem, reg, t);
  MatrixXd sum = MatrixXd::Zero(eps_s[0].rows(), eps_s[0].cols());
  for (const auto& e : eps_s) sum += e;
  EXPECT_LE(sum.cwiseAbs().maxCoeff(), 1e-9);

  const MultiAgentProblem single = test::scalar_tracking_problem(DiGraph(1, {}));
  const DistributedRegulator r1 = synth_nominal(single, SynthesisOptions{});
  const SimulationTrace t1 = simulate(assemble(single, r1), 5.0, 0.01);
  EXPECT_EQ(sync_errors(single, r1, t1)[0].norm(), 0.0);
}

TEST(Signals, ObserverErrorsDecayAtEta) {
  const Scenario s = platoon_scenario();
  const DistributedRegulator reg = synth_nominal(s.problem, s.options);
  const SimulationTrace t = simulate(assemble(s.problem, reg), 10.0, 0.01);
  std::vector<MatrixXd> all;
  const auto errs = observer_errors(s.problem, t);
  for (const auto& e : errs) {
    all.push_back(e.x);
    all.push_back(e.d_l);
    all.push_back(e.d_g);
  }
  EXPECT_EQ(errs[0].d_g.norm(), 0.0);
  const VectorXd n = stacked_norm(all);
  EXPECT_GE(estimate_decay_rate(t.times, n, 2.0, 6.0), 0.8 * s.options.eta);
}

TEST(DecayRate, Examples) {
  std::vector<double> t;
  for (int i = 0; i <= 300; ++i) t.push_back(0.01 * i);
  VectorXd pure(t.size()), mixed(t.size()), flat(t.size()), tiny(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    pure(i) = 3.0 * std::exp(-2.0 * t[i]);
    mixed(i) = std::exp(-t[i]) + 1e-6 * std::exp(-0.1 * t[i]);
    flat(i) = 4.0;
    tiny(i) = i > 150 ? 1e-13 : 1.0;
  }
  EXPECT_NEAR(estimate_decay_rate(t, pure, 0.0, 3.0), 2.0, 1e-6);
  EXPECT_NEAR(estimate_decay_rate(t, mixed, 0.0, 3.0), 1.0, 0.05);
  EXPECT_NEAR(estimate_decay_rate(t, flat, 0.0, 3.0), 0.0, 1e-12);
  try {
    estimate_decay_rate(t, tiny, 0.0, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSignalVanished);
  }
  EXPECT_NO_THROW(estimate_decay_rate(t, tiny, 0.0, 1.0));
  EXPECT_THROW(estimate_decay_rate(t, pure, 5.0, 6.0), Error);
}

TEST(P1, Examples) {
  const Scenario s = platoon_scenario();
  const DistributedRegulator reg = synth_nominal(s.problem, s.options);
  EXPECT_TRUE(verify_p1(s.problem, reg));
  EXPECT_LT(internal_abscissa(assemble(s.problem, reg)), -1e-6);

  const MultiAgentProblem p = test::scalar_tracking_problem(DiGraph::undirected_path(2), 1.0);
  DistributedRegulator zeroed = synth_nominal(p, SynthesisOptions{});
  EXPECT_TRUE(verify_p1(p, zeroed));
  for (auto& g : zeroed.agents) g.F.setZero();
  EXPECT_FALSE(verify_p1(p, zeroed));
}

TEST(Csv, HeaderAndPrecision) {
  ClosedLoopSystem cls = raw_system(MatrixXd::Zero(2, 2));
  const SimulationTrace t = simulate(cls, (VectorXd(2) << 0.1, 1.0 / 3.0).finished(), 0.01, 0.01);
  std::ostringstream out;
  write_trace_csv(out, t);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "t,z.1,z.2");
  EXPECT_EQ(row, "0,0.10000000000000001,0.33333333333333331");
}

}  // namespace
}  // namespace coopreg

#include "coopreg/robust.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "coopreg/error.hpp"
#include "coopreg/numlin.hpp"

namespace coopreg {

using Eigen::MatrixXd;
using cplx = std::complex<double>;

NominalModel nominal_average(const std::vector<MatrixXd>& closed_A,
                             const std::vector<MatrixXd>& B) {
  if (closed_A.empty() || closed_A.size() != B.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "need one (A_cl, B) pair per agent");
  }
  NominalModel out{MatrixXd::Zero(closed_A[0].rows(), closed_A[0].cols()),
                   MatrixXd::Zero(B[0].rows(), B[0].cols())};
  for (std::size_t k = 0; k < closed_A.size(); ++k) {
    if (closed_A[k].rows() != out.A_tilde.rows() || closed_A[k].cols() != out.A_tilde.cols() ||
        B[k].rows() != out.B_tilde.rows() || B[k].cols() != out.B_tilde.cols()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "agents with non-identical state or input dimensions are excluded");
    }
    out.A_tilde += closed_A[k];
    out.B_tilde += B[k];
  }
  const double n = static_cast<double>(closed_A.size());
  out.A_tilde /= n;
  out.B_tilde /= n;
  if (!(spectral_abscissa(out.A_tilde) < 0.0)) {
    throw Error(ErrorCode::kNominalNotHurwitz, "averaged closed loop is not Hurwitz");
  }
  return out;
}

StateSpace additive_uncertainty(const MatrixXd& closed_A, const MatrixXd& B,
                                const NominalModel& nominal) {
  if (!(spectral_abscissa(closed_A) < 0.0) ||
      !(spectral_abscissa(nominal.A_tilde) < 0.0)) {
    throw Error(ErrorCode::kNotStable, "agent or nominal closed loop is not Hurwitz");
  }
  const auto n = closed_A.rows();
  const auto nn = nominal.A_tilde.rows();
  const auto m = B.cols();
  MatrixXd a = MatrixXd::Zero(n + nn, n + nn);
  a.topLeftCorner(n, n) = closed_A;
  a.bottomRightCorner(nn, nn) = nominal.A_tilde;
  MatrixXd b(n + nn, m);
  b << B, nominal.B_tilde;
  MatrixXd c(n, n + nn);
  c << MatrixXd::Identity(n, n), -MatrixXd::Identity(n, nn);
  return StateSpace(a, b, c, MatrixXd::Zero(n, m));
}

double uncertainty_bound(const std::vector<StateSpace>& deltas, std::vector<double>* norms,
                         bool parallel) {
  std::vector<double> values(deltas.size(), 0.0);
  const auto count = static_cast<std::ptrdiff_t>(deltas.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) values[k] = hinf_norm(deltas[k]);
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) values[k] = hinf_norm(deltas[k]);
  }
  if (norms) *norms = values;
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

UncertainDecomposition decompose(const std::vector<MatrixXd>& closed_A,
                                 const std::vector<MatrixXd>& B) {
  const NominalModel nominal = nominal_average(closed_A, B);
  UncertainDecomposition dec;
  dec.A_tilde = nominal.A_tilde;
  dec.B_tilde = nominal.B_tilde;
  const auto n = nominal.A_tilde.rows();
  dec.B_omega = nominal.B_tilde;
  dec.C_zeta = MatrixXd::Identity(n, n);
  dec.D_zeta = MatrixXd::Zero(n, nominal.B_tilde.cols());
  for (std::size_t k = 0; k < closed_A.size(); ++k)
    dec.deltas.push_back(additive_uncertainty(closed_A[k], B[k], nominal));
  dec.eta_delta = uncertainty_bound(dec.deltas, &dec.delta_norms);
  dec.worst_agent = static_cast<int>(
      std::max_element(dec.delta_norms.begin(), dec.delta_norms.end()) -
      dec.delta_norms.begin());
  return dec;
}

SmallGainCheck verify_small_gain(const UncertainDecomposition& dec, const MatrixXd& H,
                                 const std::vector<cplx>& lambdas, double eta) {
  SmallGainCheck out;
  out.norms_below_eta = true;
  std::vector<double> all{0.0};
  for (const cplx l : lambdas) all.push_back(l.real());
  for (double lam : all) {
    const MatrixXd a = dec.A_tilde - lam * dec.B_tilde * H;
    double norm = std::numeric_limits<double>::infinity();
    if (spectral_abscissa(a) < 0.0) {
      norm = hinf_norm(StateSpace(a, dec.B_omega, dec.C_zeta - lam * dec.D_zeta * H,
                                  MatrixXd::Zero(dec.C_zeta.rows(), dec.B_omega.cols())));
    }
    out.norms.push_back(norm);
    out.norms_below_eta = out.norms_below_eta && norm < eta;
  }
  out.product_below_one = eta * dec.eta_delta < 1.0;
  return out;
}

RobustCoupling synth_robust_coupling(const MultiAgentProblem& p, const std::vector<MatrixXd>& F,
                                     const SynthesisOptions& opts) {
  p.validate();
  if (!p.graph.is_undirected()) {
    throw Error(ErrorCode::kGraphNotUndirected,
                "the robust coupling design needs an undirected graph");
  }
  const auto lambdas = laplacian_spectrum(p.graph).nonzero();
  if (F.size() != p.agents.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "need one state feedback gain per agent");
  }
  std::vector<MatrixXd> closed_A, B;
  for (std::size_t k = 0; k < F.size(); ++k) {
    closed_A.push_back(p.agents[k].A - p.agents[k].B * F[k]);
    B.push_back(p.agents[k].B);
  }
  const UncertainDecomposition dec = decompose(closed_A, B);

  RobustCoupling out;
  RobustReport& rep = out.report;
  rep.eta_delta = dec.eta_delta;
  rep.worst_agent = dec.worst_agent;
  rep.delta_norms = dec.delta_norms;
  rep.nominal_abscissa = spectral_abscissa(dec.A_tilde);
  rep.eta_lower_bound = hinf_norm(StateSpace(
      dec.A_tilde, dec.B_omega, dec.C_zeta,
      MatrixXd::Zero(dec.C_zeta.rows(), dec.B_omega.cols())));
  // Near-identical agents give a round-off eta_delta; the cap keeps the LMI scaled.
  rep.eta_used = dec.eta_delta > 0.0
                     ? std::min(opts.margin_factor / dec.eta_delta, opts.eta_cap)
                     : opts.eta_cap;
  if (!(rep.eta_used > rep.eta_lower_bound)) {
    throw Error(ErrorCode::kEtaBelowOpenLoopBound,
                "admissible interval for eta is empty: open-loop bound " +
                    std::to_string(rep.eta_lower_bound) + ", upper limit " +
                    std::to_string(rep.eta_used));
  }

  const LmiRegion region = opts.coupling_region();
  const HinfCoupling hc =
      synth_hinf_coupling_region(dec.A_tilde, dec.B_tilde, dec.B_omega, dec.C_zeta,
                                 dec.D_zeta, lambdas, rep.eta_used, region);
  out.H = hc.H;
  rep.checks = hc.checks;
  rep.certified_margin = hc.certified_margin;
  rep.small_gain = verify_small_gain(dec, out.H, lambdas, rep.eta_used);
  if (!rep.small_gain.ok()) {
    throw Error(ErrorCode::kPostCheckFailed, "small-gain condition fails for the coupling gain");
  }

  rep.nominal_decay = std::numeric_limits<double>::infinity();
  for (const cplx l : lambdas) {
    const Eigen::VectorXcd poles = eigenvalues(dec.A_tilde - l.real() * dec.B_tilde * out.H);
    rep.nominal_poles.emplace_back(poles.data(), poles.data() + poles.size());
    rep.nominal_decay = std::min(rep.nominal_decay, -poles.real().maxCoeff());
  }

  // Perturbed network of transient components.
  const int n_agents = p.n_agents();
  const auto nx = dec.A_tilde.rows();
  const MatrixXd lap = laplacian(p.graph);
  MatrixXd net = MatrixXd::Zero(n_agents * nx, n_agents * nx);
  for (int k = 0; k < n_agents; ++k) {
    net.block(k * nx, k * nx, nx, nx) = closed_A[k];
    for (int j = 0; j < n_agents; ++j) {
      if (lap(k, j) != 0.0) net.block(k * nx, j * nx, nx, nx) -= lap(k, j) * B[k] * out.H;
    }
  }
  const Eigen::VectorXcd poles = eigenvalues(net);
  rep.network_poles.assign(poles.data(), poles.data() + poles.size());
  std::sort(rep.network_poles.begin(), rep.network_poles.end(),
            [](cplx a, cplx b) { return a.real() > b.real(); });
  rep.achieved_decay = n_agents > 1 ? -rep.network_poles[nx].real() : 0.0;
  return out;
}

std::pair<DistributedRegulator, RobustReport> synth_transient_robust(
    const MultiAgentProblem& p, const SynthesisOptions& opts) {
  if (!p.graph.is_undirected()) {
    throw Error(ErrorCode::kGraphNotUndirected,
                "the robust coupling design needs an undirected graph");
  }
  const MatrixXd* weight = opts.lqr_R_robust ? &*opts.lqr_R_robust : nullptr;
  DistributedRegulator reg = synth_base(p, opts, weight);
  reg.mode = SynthesisMode::kTransientRobust;
  std::vector<MatrixXd> f;
  for (const auto& g : reg.agents) f.push_back(g.F);
  RobustCoupling rc = synth_robust_coupling(p, f, opts);
  reg.H = rc.H;
  for (const auto& c : rc.report.checks) reg.h_abscissa.push_back(c.spectral_abscissa);
  return {std::move(reg), std::move(rc.report)};
}

}  // namespace coopreg

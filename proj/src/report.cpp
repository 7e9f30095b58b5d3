#include "coopreg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "coopreg/error.hpp"
#include "coopreg/graph.hpp"

namespace coopreg {

using Eigen::Index;
using Eigen::MatrixXd;
using cplx = std::complex<double>;

Json matrix_to_json(const MatrixXd& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

MatrixXd matrix_from_json(const Json& j, const std::string& field) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kParseError, "field " + field + ": " + what);
  };
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    fail("expected {rows, cols, data}");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) fail("bad shape");
  const auto r = j["rows"].get<Index>();
  const auto c = j["cols"].get<Index>();
  const Json& data = j["data"];
  if (r < 0 || c < 0 || !data.is_array() || static_cast<Index>(data.size()) != r * c)
    fail("data does not match shape");
  MatrixXd m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index k = 0; k < c; ++k) {
      const Json& v = data[static_cast<std::size_t>(i * c + k)];
      if (!v.is_number()) fail("expected numbers");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

std::string input_hash(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : scenario_to_json(s)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json complex_list(const std::vector<cplx>& v) {
  Json out = Json::array();
  for (const cplx z : v) out.push_back({z.real(), z.imag()});
  return out;
}

Json number_list(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
  return out;
}

std::string mode_key(SynthesisMode m) {
  switch (m) {
    case SynthesisMode::kNominal: return "nominal";
    case SynthesisMode::kTransientIdentical: return "transient";
    case SynthesisMode::kTransientRobust: return "robust";
  }
  return "nominal";
}

}  // namespace

Json assumptions_to_json(const AssumptionReport& rep) {
  Json out = Json::array();
  for (const auto& v : rep.verdicts) {
    out.push_back({{"name", v.name},
                   {"agent", v.agent < 0 ? Json(nullptr) : Json(v.agent + 1)},
                   {"passed", v.passed},
                   {"detail", v.detail}});
  }
  return out;
}

Json regulator_report(const Scenario& s, const DistributedRegulator& reg,
                      const AssumptionReport& assumptions,
                      const std::optional<RobustReport>& robust) {
  Json out;
  out["input_hash"] = input_hash(s);
  out["scenario"] = s.name;
  out["mode"] = mode_key(reg.mode);
  out["assumptions"] = assumptions_to_json(assumptions);

  Json gains;
  gains["K"] = matrix_to_json(reg.K);
  gains["H"] = reg.H ? matrix_to_json(*reg.H) : Json(nullptr);
  Json agents = Json::array();
  std::vector<double> cl, obs;
  for (const auto& g : reg.agents) {
    agents.push_back({{"F", matrix_to_json(g.F)},
                      {"G_g", matrix_to_json(g.G_g)},
                      {"G_l", matrix_to_json(g.G_l)},
                      {"L", matrix_to_json(g.L)},
                      {"Pi_g", matrix_to_json(g.Pi_g)},
                      {"Gamma_g", matrix_to_json(g.Gamma_g)},
                      {"Pi_l", matrix_to_json(g.Pi_l)},
                      {"Gamma_l", matrix_to_json(g.Gamma_l)}});
    cl.push_back(g.closed_loop_abscissa);
    obs.push_back(g.observer_abscissa);
  }
  gains["agents"] = agents;
  out["gains"] = gains;

  Json ver;
  ver["gamma"] = s.options.gamma;
  ver["eta"] = s.options.eta;
  ver["lambdas"] = complex_list(reg.lambdas);
  ver["k_lambdas"] = complex_list(reg.k_lambdas);
  ver["k_abscissa"] = number_list(reg.k_abscissa);
  ver["h_abscissa"] = number_list(reg.h_abscissa);
  ver["closed_loop_abscissa"] = number_list(cl);
  ver["observer_abscissa"] = number_list(obs);
  const ClosedLoopSystem cls = assemble(s.problem, reg);
  const double ia = internal_abscissa(cls);
  ver["internal_abscissa"] = ia;
  ver["p1"] = ia < 0.0;
  out["verification"] = ver;

  if (robust) {
    const RobustReport& r = *robust;
    Json rj;
    rj["eta_delta"] = r.eta_delta;
    rj["worst_agent"] = r.worst_agent + 1;
    rj["delta_norms"] = number_list(r.delta_norms);
    rj["eta_lower_bound"] = r.eta_lower_bound;
    rj["eta_used"] = r.eta_used;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"lambda", {c.lambda.real(), c.lambda.imag()}},
                        {"hinf_norm", c.hinf_norm},
                        {"spectral_abscissa", c.spectral_abscissa},
                        {"in_region", c.in_region}});
    }
    rj["checks"] = checks;
    rj["small_gain"] = {{"norms", number_list(r.small_gain.norms)},
                        {"norms_below_eta", r.small_gain.norms_below_eta},
                        {"product_below_one", r.small_gain.product_below_one}};
    rj["nominal_abscissa"] = r.nominal_abscissa;
    rj["nominal_decay"] = r.nominal_decay;
    rj["achieved_decay"] = r.achieved_decay;
    rj["certified_margin"] = r.certified_margin;
    rj["region"] = {{"kind", s.options.region_kind}, {"params", s.options.region_params}};
    out["robust"] = rj;
  }
  return out;
}

DistributedRegulator regulator_from_report(const Json& report, const Scenario& s) {
  if (!report.is_object() || !report.contains("gains") || !report.contains("mode") ||
      !report.contains("input_hash")) {
    throw Error(ErrorCode::kParseError, "regulator report lacks gains, mode or input_hash");
  }
  if (report["input_hash"] != input_hash(s)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "regulator report was synthesized for a different scenario (input hash " +
                    report["input_hash"].dump() + " vs " + input_hash(s) + ")");
  }
  DistributedRegulator reg;
  const std::string mode = report["mode"].is_string() ? report["mode"].get<std::string>() : "";
  if (mode == "nominal") reg.mode = SynthesisMode::kNominal;
  else if (mode == "transient") reg.mode = SynthesisMode::kTransientIdentical;
  else if (mode == "robust") reg.mode = SynthesisMode::kTransientRobust;
  else throw Error(ErrorCode::kParseError, "field mode: unknown value");

  const Json& g = report["gains"];
  reg.K = matrix_from_json(g.at("K"), "gains.K");
  if (g.contains("H") && !g["H"].is_null()) reg.H = matrix_from_json(g["H"], "gains.H");
  const Json& agents = g.at("agents");
  if (!agents.is_array() || static_cast<int>(agents.size()) != s.problem.n_agents()) {
    throw Error(ErrorCode::kDimensionMismatch, "report and scenario differ in agent count");
  }
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string f = "gains.agents[" + std::to_string(k) + "].";
    const Json& a = agents[k];
    AgentGains ag;
    ag.F = matrix_from_json(a.at("F"), f + "F");
    ag.G_g = matrix_from_json(a.at("G_g"), f + "G_g");
    ag.G_l = matrix_from_json(a.at("G_l"), f + "G_l");
    ag.L = matrix_from_json(a.at("L"), f + "L");
    ag.Pi_g = matrix_from_json(a.at("Pi_g"), f + "Pi_g");
    ag.Gamma_g = matrix_from_json(a.at("Gamma_g"), f + "Gamma_g");
    ag.Pi_l = matrix_from_json(a.at("Pi_l"), f + "Pi_l");
    ag.Gamma_l = matrix_from_json(a.at("Gamma_l"), f + "Gamma_l");
    reg.agents.push_back(std::move(ag));
  }
  if (report.contains("verification")) {
    for (const auto& z : report["verification"].value("lambdas", Json::array()))
      reg.lambdas.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  }
  return reg;
}

SimMetrics compute_metrics(const MultiAgentProblem& p, const DistributedRegulator& reg,
                           const ClosedLoopSystem& cls, const SimulationTrace& trace,
                           double window) {
  SimMetrics m;
  const auto e = regulation_errors(p, cls, trace);
  for (const auto& ek : e) {
    const double v = ek.rows() ? ek.row(ek.rows() - 1).norm() : 0.0;
    m.final_error_norms.push_back(v);
    m.max_final_error = std::max(m.max_final_error, v);
  }
  m.internal_abscissa = internal_abscissa(cls);
  m.p1 = m.internal_abscissa < 0.0;

  const Eigen::VectorXd sync = stacked_norm(sync_errors(p, reg, trace));
  std::vector<double> times;
  for (const auto& r : cls.resets) {
    if (times.empty() || r.time > times.back()) times.push_back(r.time);
  }
  const double t_end = trace.times.empty() ? 0.0 : trace.times.back();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double tr = times[i];
    if (tr + window > t_end + 1e-12) continue;
    ResetMetrics rm;
    rm.time = tr;
    try {
      rm.decay_rate = estimate_decay_rate(trace.times, sync, tr, tr + window);
      rm.decay_valid = true;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kSignalVanished) throw;
      m.warnings.push_back(std::string("sync error vanished after reset at t = ") +
                           std::to_string(tr));
    }
    const double stop = i + 1 < times.size() ? times[i + 1] : t_end + 1.0;
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
      if (trace.times[k] >= tr - 1e-12 && trace.times[k] < stop - 1e-12)
        rm.max_sync_error = std::max(rm.max_sync_error, sync[static_cast<Index>(k)]);
    }
    m.resets.push_back(rm);
  }

  std::vector<MatrixXd> obs;
  for (const auto& oe : observer_errors(p, trace)) {
    obs.push_back(oe.x);
    obs.push_back(oe.d_l);
    obs.push_back(oe.d_g);
  }
  const Eigen::VectorXd on = stacked_norm(obs);
  const double first = times.empty() ? t_end : times.front();
  const double stop = std::min({window, first, t_end});
  try {
    m.observer_decay = estimate_decay_rate(trace.times, on, 0.0, stop);
  } catch (const Error&) {
    m.observer_decay = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

Json metrics_to_json(const SimMetrics& m) {
  Json out;
  out["final_error_norms"] = number_list(m.final_error_norms);
  out["max_final_error"] = m.max_final_error;
  Json resets = Json::array();
  for (const auto& r : m.resets) {
    resets.push_back({{"time", r.time},
                      {"sync_decay_rate", r.decay_valid ? Json(r.decay_rate) : Json(nullptr)},
                      {"max_sync_error", r.max_sync_error}});
  }
  out["resets"] = resets;
  out["internal_abscissa"] = m.internal_abscissa;
  out["p1"] = m.p1;
  out["observer_decay"] =
      std::isfinite(m.observer_decay) ? Json(m.observer_decay) : Json(nullptr);
  out["warnings"] = m.warnings;
  return out;
}

}  // namespace coopreg

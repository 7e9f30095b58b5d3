#include "coopreg/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "coopreg/error.hpp"

namespace coopreg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using json = nlohmann::ordered_json;

namespace {

MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
  MatrixXd m(static_cast<Index>(r.size()), static_cast<Index>(r.begin()->size()));
  Index i = 0;
  for (const auto& row : r) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Reset times land on the default 0.01 s grid.
double to_grid(double t) { return std::round(t * 100.0) / 100.0; }

}  // namespace

Scenario platoon_scenario(const PlatoonConfig& c) {
  if (c.n_agents < 2) throw Error(ErrorCode::kInvalidArgument, "platoon needs two agents");
  Scenario s;
  s.name = "platoon";
  s.mode = SynthesisMode::kTransientIdentical;
  MultiAgentProblem& p = s.problem;
  const MatrixXd a = rows({{0, 1}, {0, 0}});
  const MatrixXd b = rows({{0}, {1}});
  p.global_exo.S = a;
  p.global_exo.d0 = c.dg0;
  p.graph = DiGraph::undirected_path(c.n_agents);
  p.informed_agent = 0;
  for (int k = 0; k < c.n_agents; ++k) {
    const bool harmonic = k == 1;
    const Index ndl = harmonic ? 3 : 2;
    const double r = -c.spacing * k;
    AgentPlant ag;
    ag.A = a;
    ag.B = b;
    ag.B_dg = MatrixXd::Zero(2, 2);
    ag.B_dl = MatrixXd::Zero(2, ndl);
    ag.B_dl(1, 1) = 1.0;
    // y = [s, v, r]: own state and own reference.
    ag.C = rows({{1, 0}, {0, 1}, {0, 0}});
    ag.D = MatrixXd::Zero(3, 1);
    ag.D_dg = MatrixXd::Zero(3, 2);
    ag.D_dl = MatrixXd::Zero(3, ndl);
    ag.D_dl(2, 0) = 1.0;
    ag.Ce = MatrixXd::Identity(2, 2);
    ag.De = MatrixXd::Zero(2, 1);
    ag.D_edg = -MatrixXd::Identity(2, 2);
    ag.D_edl = MatrixXd::Zero(2, ndl);
    ag.D_edl(0, 0) = -1.0;
    ag.x0 = Eigen::Vector2d(r - c.initial_spread * k, 0.0);
    p.agents.push_back(ag);

    Exosystem local;
    if (harmonic) {
      local.S = rows({{0, 0, 0}, {0, 0, 1}, {0, -1, 0}});
      local.d0 = Eigen::Vector3d(r, 0.0, c.w2_amplitude);
    } else {
      local.S = MatrixXd::Zero(2, 2);
      local.d0 = Eigen::Vector2d(r, 0.0);
    }
    if (k == 3) local.resets.push_back({c.w4_time, Eigen::Vector2d(r, c.w4_step)});
    if (k == 2) local.resets.push_back({c.w3_time, Eigen::Vector2d(r, c.w3_step)});
    p.local_exos.push_back(local);
  }
  SynthesisOptions& o = s.options;
  o.gamma = 1.0;
  o.eta = 3.0;
  o.lqr_Q = MatrixXd::Identity(2, 2);
  o.lqr_R = MatrixXd::Identity(1, 1);
  o.observer = ObserverStrategy::kDualLqr;
  s.t_end = 60.0;
  s.dt = 0.01;
  return s;
}

const std::vector<Eigen::Vector4d>& helicopter_parameters() {
  static const std::vector<Eigen::Vector4d> params = {
      Eigen::Vector4d(0.7, 1.17, 6.0, 0.58), Eigen::Vector4d(0.5, 1.05, 5.8, 0.50),
      Eigen::Vector4d(0.6, 1.10, 6.1, 0.63), Eigen::Vector4d(0.7, 1.25, 5.6, 0.48)};
  return params;
}

AgentPlant helicopter_agent(const Eigen::Vector4d& p) {
  AgentPlant ag;
  ag.A = MatrixXd::Zero(6, 6);
  ag.A(0, 1) = 1.0;
  ag.A(1, 2) = -p[0];
  ag.A(2, 3) = 1.0;
  ag.A(4, 5) = 1.0;
  ag.A(5, 4) = -p[1];
  ag.B = MatrixXd::Zero(6, 2);
  ag.B(3, 0) = p[2];
  ag.B(3, 1) = -p[2];
  ag.B(5, 0) = p[3];
  ag.B(5, 1) = p[3];
  ag.B_dg = MatrixXd::Zero(6, 3);
  ag.B_dl = MatrixXd::Zero(6, 2);
  ag.B_dl(3, 0) = 1.0;
  ag.B_dl(3, 1) = -1.0;
  ag.B_dl(5, 0) = 1.0;
  ag.B_dl(5, 1) = 1.0;
  ag.C = MatrixXd::Zero(3, 6);
  ag.C(0, 0) = 1.0;
  ag.C(1, 2) = 1.0;
  ag.C(2, 4) = 1.0;
  ag.D = MatrixXd::Zero(3, 2);
  ag.D_dg = MatrixXd::Zero(3, 3);
  ag.D_dl = MatrixXd::Zero(3, 2);
  ag.Ce = MatrixXd::Zero(2, 6);
  ag.Ce(0, 0) = 1.0;
  ag.Ce(1, 4) = 1.0;
  ag.De = MatrixXd::Zero(2, 2);
  ag.D_edg = rows({{-1, 0, 0}, {0, 0, -1}});
  ag.D_edl = MatrixXd::Zero(2, 2);
  return ag;
}

std::vector<ExoReset> random_piecewise_constant(std::uint64_t seed, int agent, Index dim,
                                                double amplitude, double mean_dwell,
                                                double horizon, VectorXd* initial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(agent)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> level(-amplitude, amplitude);
  std::exponential_distribution<double> dwell(1.0 / mean_dwell);
  auto draw = [&] {
    VectorXd v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = level(rng);
    return v;
  };
  if (initial) *initial = draw();
  std::vector<ExoReset> out;
  double t = 0.0;
  while (true) {
    const double next = to_grid(t + dwell(rng));
    if (next >= horizon) break;
    if (next <= t) continue;
    t = next;
    out.push_back({t, draw()});
  }
  return out;
}

Scenario helicopter_scenario(const HelicopterConfig& c) {
  Scenario s;
  s.name = "helicopter";
  s.mode = SynthesisMode::kTransientRobust;
  s.seed = c.seed;
  s.t_end = c.horizon;
  s.dt = 0.01;
  MultiAgentProblem& p = s.problem;
  p.global_exo.S = rows({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}});
  p.global_exo.d0 = c.dg0;
  const auto& params = helicopter_parameters();
  const int n = static_cast<int>(params.size());
  p.graph = DiGraph::undirected_cycle(n);
  p.informed_agent = 0;
  for (int k = 0; k < n; ++k) {
    p.agents.push_back(helicopter_agent(params[k]));
    Exosystem local;
    local.S = MatrixXd::Zero(2, 2);
    VectorXd d0;
    local.resets =
        random_piecewise_constant(c.seed, k, 2, c.amplitude, c.mean_dwell,
                                  c.horizon - c.settle, &d0);
    local.d0 = d0;
    p.local_exos.push_back(local);
  }
  SynthesisOptions& o = s.options;
  o.gamma = 3.0;
  o.eta = 5.0;
  Eigen::VectorXd q(6);
  q << 50, 1, 1, 1, 100, 50;
  o.lqr_Q = q.asDiagonal();
  o.lqr_R = 2.0 * MatrixXd::Identity(2, 2);
  o.lqr_R_robust = 4.0 * MatrixXd::Identity(2, 2);
  o.observer = ObserverStrategy::kExactPoles;
  const int n_obs = 8;
  for (int i = 0; i < n_obs; ++i) {
    const double t = static_cast<double>(i) / (n_obs - 1);
    o.observer_poles.emplace_back(c.observer_pole_min + t * (c.observer_pole_max - c.observer_pole_min),
                                  0.0);
  }
  o.region_kind = "s";
  o.region_params = {3.0, 30.0, std::numbers::pi / 3.0};
  o.region = region_s(3.0, 30.0, std::numbers::pi / 3.0);
  o.margin_factor = 0.95;
  return s;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

[[noreturn]] void parse_fail(const std::string& source, const std::string& field,
                             const std::string& what) {
  throw Error(ErrorCode::kParseError, source + ": field " + field + ": " + what);
}

[[noreturn]] void missing(const std::string& source, const std::string& field) {
  throw Error(ErrorCode::kValidationError, source + ": missing field " + field);
}

struct Reader {
  std::string source;

  const json& get(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) parse_fail(source, path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) missing(source, path + "." + key);
    return *it;
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) parse_fail(source, path, "expected a number");
    return j.get<double>();
  }

  MatrixXd matrix(const json& j, const std::string& path) const {
    if (!j.is_array()) parse_fail(source, path, "expected a nested array");
    if (j.empty()) return MatrixXd();
    const json& first = j.front();
    if (!first.is_array()) parse_fail(source, path, "expected rows as arrays");
    const Index r = static_cast<Index>(j.size());
    const Index c = static_cast<Index>(first.size());
    MatrixXd m(r, c);
    for (Index i = 0; i < r; ++i) {
      const json& row = j[static_cast<std::size_t>(i)];
      const std::string rp = path + "[" + std::to_string(i) + "]";
      if (!row.is_array()) parse_fail(source, rp, "expected an array");
      if (static_cast<Index>(row.size()) != c) {
        throw Error(ErrorCode::kValidationError,
                    source + ": " + rp + " has " + std::to_string(row.size()) +
                        " entries, expected " + std::to_string(c));
      }
      for (Index k = 0; k < c; ++k)
        m(i, k) = number(row[static_cast<std::size_t>(k)], rp + "[" + std::to_string(k) + "]");
    }
    return m;
  }

  // A matrix with explicit shape, so that empty dimensions survive.
  MatrixXd shaped(const json& obj, const std::string& key, const std::string& path) const {
    const json& j = get(obj, key, path);
    const std::string p = path + "." + key;
    if (j.is_object()) {
      const auto r = static_cast<Index>(number(get(j, "rows", p), p + ".rows"));
      const auto c = static_cast<Index>(number(get(j, "cols", p), p + ".cols"));
      if (r < 0 || c < 0) throw Error(ErrorCode::kValidationError, source + ": " + p + " shape");
      MatrixXd m = matrix(get(j, "data", p), p + ".data");
      if (m.size() == 0) return MatrixXd::Zero(r, c);
      if (m.rows() != r || m.cols() != c) {
        throw Error(ErrorCode::kValidationError, source + ": " + p + " data does not match shape");
      }
      return m;
    }
    return matrix(j, p);
  }

  VectorXd vector(const json& j, const std::string& path) const {
    if (!j.is_array()) parse_fail(source, path, "expected an array");
    VectorXd v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
      v[static_cast<Index>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
    return v;
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) parse_fail(source, path, "expected a string");
    return j.get<std::string>();
  }

  Exosystem exo(const json& j, const std::string& path) const {
    Exosystem e;
    e.S = shaped(j, "S", path);
    if (j.contains("d0")) e.d0 = vector(j["d0"], path + ".d0");
    if (j.contains("resets")) {
      const json& rs = j["resets"];
      if (!rs.is_array()) parse_fail(source, path + ".resets", "expected an array");
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const std::string rp = path + ".resets[" + std::to_string(i) + "]";
        ExoReset r;
        r.time = number(get(rs[i], "time", rp), rp + ".time");
        r.state = vector(get(rs[i], "state", rp), rp + ".state");
        e.resets.push_back(std::move(r));
      }
    }
    return e;
  }
};

json matrix_json(const MatrixXd& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    data.push_back(std::move(row));
  }
  // Empty dimensions need the explicit form.
  if (m.rows() == 0 || m.cols() == 0) return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
  return data;
}

json vector_json(const VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json exo_json(const Exosystem& e) {
  json out;
  out["S"] = matrix_json(e.S);
  out["d0"] = vector_json(e.initial_state());
  json rs = json::array();
  for (const auto& r : e.resets) rs.push_back({{"time", r.time}, {"state", vector_json(r.state)}});
  out["resets"] = rs;
  return out;
}

SynthesisMode mode_from(const std::string& s, const std::string& source) {
  if (s == "nominal") return SynthesisMode::kNominal;
  if (s == "transient") return SynthesisMode::kTransientIdentical;
  if (s == "robust") return SynthesisMode::kTransientRobust;
  parse_fail(source, "mode", "unknown mode " + s);
}

std::string mode_name(SynthesisMode m) {
  switch (m) {
    case SynthesisMode::kNominal: return "nominal";
    case SynthesisMode::kTransientIdentical: return "transient";
    case SynthesisMode::kTransientRobust: return "robust";
  }
  return "nominal";
}

LmiRegion region_from(const std::string& kind, const std::vector<double>& a,
                      const std::string& source) {
  auto need = [&](std::size_t n) {
    if (a.size() != n) {
      throw Error(ErrorCode::kValidationError, source + ": region " + kind + " takes " +
                                                   std::to_string(n) + " parameters");
    }
  };
  if (kind == "halfplane") {
    need(1);
    return region_halfplane(a[0]);
  }
  if (kind == "disk") {
    need(1);
    return region_disk(a[0]);
  }
  if (kind == "cone") {
    need(1);
    return region_cone(a[0]);
  }
  if (kind == "s") {
    need(3);
    return region_s(a[0], a[1], a[2]);
  }
  parse_fail(source, "options.region.kind", "unknown region " + kind);
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(end), '\n');
    throw Error(ErrorCode::kParseError,
                source + ": line " + std::to_string(line) + ": " + e.what());
  }
  const Reader rd{source};
  if (!doc.is_object()) parse_fail(source, "<root>", "expected an object");

  Scenario s;
  if (doc.contains("name")) s.name = rd.string(doc["name"], "name");
  if (doc.contains("mode")) s.mode = mode_from(rd.string(doc["mode"], "mode"), source);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) parse_fail(source, "seed", "expected an unsigned integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("simulation")) {
    const json& sim = doc["simulation"];
    if (sim.contains("t_end")) s.t_end = rd.number(sim["t_end"], "simulation.t_end");
    if (sim.contains("dt")) s.dt = rd.number(sim["dt"], "simulation.dt");
  }

  MultiAgentProblem& p = s.problem;
  const json& g = rd.get(doc, "graph", "<root>");
  const auto n = static_cast<int>(rd.number(rd.get(g, "n", "graph"), "graph.n"));
  std::vector<DiGraph::Edge> edges;
  const json& ej = rd.get(g, "edges", "graph");
  if (!ej.is_array()) parse_fail(source, "graph.edges", "expected an array");
  for (std::size_t i = 0; i < ej.size(); ++i) {
    const std::string ep = "graph.edges[" + std::to_string(i) + "]";
    if (!ej[i].is_array() || ej[i].size() != 2) parse_fail(source, ep, "expected [from, to]");
    // Nodes are numbered from 1 in files.
    edges.emplace_back(static_cast<int>(rd.number(ej[i][0], ep)) - 1,
                       static_cast<int>(rd.number(ej[i][1], ep)) - 1);
  }
  try {
    p.graph = DiGraph(n, edges);
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidationError, source + ": graph: " + e.what());
  }
  if (doc.contains("informed_agent")) {
    p.informed_agent = static_cast<int>(rd.number(doc["informed_agent"], "informed_agent")) - 1;
  }

  const json& agents = rd.get(doc, "agents", "<root>");
  if (!agents.is_array()) parse_fail(source, "agents", "expected an array");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string ap = "agents[" + std::to_string(k) + "]";
    const json& aj = agents[k];
    AgentPlant a;
    a.A = rd.shaped(aj, "A", ap);
    a.B = rd.shaped(aj, "B", ap);
    a.B_dg = rd.shaped(aj, "B_dg", ap);
    a.B_dl = rd.shaped(aj, "B_dl", ap);
    a.C = rd.shaped(aj, "C", ap);
    a.D = rd.shaped(aj, "D", ap);
    a.D_dg = rd.shaped(aj, "D_dg", ap);
    a.D_dl = rd.shaped(aj, "D_dl", ap);
    a.Ce = rd.shaped(aj, "Ce", ap);
    a.De = rd.shaped(aj, "De", ap);
    a.D_edg = rd.shaped(aj, "D_edg", ap);
    a.D_edl = rd.shaped(aj, "D_edl", ap);
    if (aj.contains("x0")) a.x0 = rd.vector(aj["x0"], ap + ".x0");
    p.agents.push_back(std::move(a));
  }
  p.global_exo = rd.exo(rd.get(doc, "global_exo", "<root>"), "global_exo");
  const json& locals = rd.get(doc, "local_exos", "<root>");
  if (!locals.is_array()) parse_fail(source, "local_exos", "expected an array");
  for (std::size_t k = 0; k < locals.size(); ++k)
    p.local_exos.push_back(rd.exo(locals[k], "local_exos[" + std::to_string(k) + "]"));

  SynthesisOptions& o = s.options;
  if (doc.contains("options")) {
    const json& oj = doc["options"];
    if (!oj.is_object()) parse_fail(source, "options", "expected an object");
    if (oj.contains("gamma")) o.gamma = rd.number(oj["gamma"], "options.gamma");
    if (oj.contains("eta")) o.eta = rd.number(oj["eta"], "options.eta");
    if (oj.contains("lqr_Q")) o.lqr_Q = rd.shaped(oj, "lqr_Q", "options");
    if (oj.contains("lqr_R")) o.lqr_R = rd.shaped(oj, "lqr_R", "options");
    if (oj.contains("lqr_R_robust") && !oj["lqr_R_robust"].is_null())
      o.lqr_R_robust = rd.shaped(oj, "lqr_R_robust", "options");
    if (oj.contains("observer")) {
      const std::string obs = rd.string(oj["observer"], "options.observer");
      if (obs == "dual_lqr") o.observer = ObserverStrategy::kDualLqr;
      else if (obs == "exact_poles") o.observer = ObserverStrategy::kExactPoles;
      else parse_fail(source, "options.observer", "unknown strategy " + obs);
    }
    if (oj.contains("observer_poles")) {
      const json& pj = oj["observer_poles"];
      if (!pj.is_array()) parse_fail(source, "options.observer_poles", "expected an array");
      for (std::size_t i = 0; i < pj.size(); ++i) {
        const std::string pp = "options.observer_poles[" + std::to_string(i) + "]";
        if (pj[i].is_number()) {
          o.observer_poles.emplace_back(pj[i].get<double>(), 0.0);
        } else if (pj[i].is_array() && pj[i].size() == 2) {
          o.observer_poles.emplace_back(rd.number(pj[i][0], pp), rd.number(pj[i][1], pp));
        } else {
          parse_fail(source, pp, "expected a number or [re, im]");
        }
      }
    }
    if (oj.contains("region") && !oj["region"].is_null()) {
      const json& rj = oj["region"];
      o.region_kind = rd.string(rd.get(rj, "kind", "options.region"), "options.region.kind");
      const VectorXd a = rd.vector(rd.get(rj, "params", "options.region"), "options.region.params");
      o.region_params.assign(a.data(), a.data() + a.size());
      o.region = region_from(o.region_kind, o.region_params, source);
    }
    if (oj.contains("margin_factor"))
      o.margin_factor = rd.number(oj["margin_factor"], "options.margin_factor");
    if (oj.contains("eta_cap")) o.eta_cap = rd.number(oj["eta_cap"], "options.eta_cap");
  }

  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidationError, source + ": " + e.what());
  }
  if (!(s.dt > 0.0) || !(s.t_end >= 0.0)) {
    throw Error(ErrorCode::kValidationError, source + ": simulation needs dt > 0, t_end >= 0");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

std::string scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["mode"] = mode_name(s.mode);
  doc["seed"] = s.seed;
  doc["simulation"] = {{"t_end", s.t_end}, {"dt", s.dt}};
  const MultiAgentProblem& p = s.problem;
  json edges = json::array();
  for (int k = 0; k < p.graph.n_nodes(); ++k) {
    for (int j : p.graph.neighbors(k)) edges.push_back({j + 1, k + 1});
  }
  doc["graph"] = {{"n", p.graph.n_nodes()}, {"edges", edges}};
  doc["informed_agent"] = p.informed_agent + 1;
  json agents = json::array();
  for (const auto& a : p.agents) {
    json aj;
    aj["A"] = matrix_json(a.A);
    aj["B"] = matrix_json(a.B);
    aj["B_dg"] = matrix_json(a.B_dg);
    aj["B_dl"] = matrix_json(a.B_dl);
    aj["C"] = matrix_json(a.C);
    aj["D"] = matrix_json(a.D);
    aj["D_dg"] = matrix_json(a.D_dg);
    aj["D_dl"] = matrix_json(a.D_dl);
    aj["Ce"] = matrix_json(a.Ce);
    aj["De"] = matrix_json(a.De);
    aj["D_edg"] = matrix_json(a.D_edg);
    aj["D_edl"] = matrix_json(a.D_edl);
    aj["x0"] = vector_json(a.x0.size() ? a.x0 : VectorXd::Zero(a.n_x()));
    agents.push_back(std::move(aj));
  }
  doc["agents"] = agents;
  doc["global_exo"] = exo_json(p.global_exo);
  json locals = json::array();
  for (const auto& e : p.local_exos) locals.push_back(exo_json(e));
  doc["local_exos"] = locals;

  const SynthesisOptions& o = s.options;
  json oj;
  oj["gamma"] = o.gamma;
  oj["eta"] = o.eta;
  oj["lqr_Q"] = matrix_json(o.lqr_Q);
  oj["lqr_R"] = matrix_json(o.lqr_R);
  oj["lqr_R_robust"] = o.lqr_R_robust ? matrix_json(*o.lqr_R_robust) : json(nullptr);
  oj["observer"] = o.observer == ObserverStrategy::kDualLqr ? "dual_lqr" : "exact_poles";
  json poles = json::array();
  for (const auto& z : o.observer_poles) poles.push_back({z.real(), z.imag()});
  oj["observer_poles"] = poles;
  if (o.region && !o.region_kind.empty()) {
    json params = json::array();
    for (double v : o.region_params) params.push_back(v);
    oj["region"] = {{"kind", o.region_kind}, {"params", params}};
  } else {
    oj["region"] = nullptr;
  }
  oj["margin_factor"] = o.margin_factor;
  oj["eta_cap"] = o.eta_cap;
  doc["options"] = oj;
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, path + ": cannot write file");
  out << scenario_to_json(s);
}

namespace {

bool same(const MatrixXd& a, const MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same_exo(const Exosystem& a, const Exosystem& b) {
  if (!same(a.S, b.S) || !same(a.initial_state(), b.initial_state())) return false;
  if (a.resets.size() != b.resets.size()) return false;
  for (std::size_t i = 0; i < a.resets.size(); ++i) {
    if (a.resets[i].time != b.resets[i].time || !same(a.resets[i].state, b.resets[i].state))
      return false;
  }
  return true;
}

}  // namespace

bool scenarios_equal(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.mode != b.mode || a.seed != b.seed || a.t_end != b.t_end ||
      a.dt != b.dt)
    return false;
  const MultiAgentProblem& p = a.problem;
  const MultiAgentProblem& q = b.problem;
  if (p.n_agents() != q.n_agents() || p.informed_agent != q.informed_agent) return false;
  if (p.graph.n_nodes() != q.graph.n_nodes()) return false;
  for (int k = 0; k < p.graph.n_nodes(); ++k) {
    if (p.graph.neighbors(k) != q.graph.neighbors(k)) return false;
  }
  for (int k = 0; k < p.n_agents(); ++k) {
    const AgentPlant& x = p.agents[k];
    const AgentPlant& y = q.agents[k];
    const VectorXd x0 = x.x0.size() ? x.x0 : VectorXd::Zero(x.n_x());
    const VectorXd y0 = y.x0.size() ? y.x0 : VectorXd::Zero(y.n_x());
    if (!same(x.A, y.A) || !same(x.B, y.B) || !same(x.B_dg, y.B_dg) || !same(x.B_dl, y.B_dl) ||
        !same(x.C, y.C) || !same(x.D, y.D) || !same(x.D_dg, y.D_dg) || !same(x.D_dl, y.D_dl) ||
        !same(x.Ce, y.Ce) || !same(x.De, y.De) || !same(x.D_edg, y.D_edg) ||
        !same(x.D_edl, y.D_edl) || !same(x0, y0))
      return false;
    if (!same_exo(p.local_exos[k], q.local_exos[k])) return false;
  }
  if (!same_exo(p.global_exo, q.global_exo)) return false;
  const SynthesisOptions& o = a.options;
  const SynthesisOptions& r = b.options;
  if (o.gamma != r.gamma || o.eta != r.eta || !same(o.lqr_Q, r.lqr_Q) || !same(o.lqr_R, r.lqr_R))
    return false;
  if (o.lqr_R_robust.has_value() != r.lqr_R_robust.has_value()) return false;
  if (o.lqr_R_robust && !same(*o.lqr_R_robust, *r.lqr_R_robust)) return false;
  if (o.observer != r.observer || o.observer_poles != r.observer_poles) return false;
  if (o.region.has_value() != r.region.has_value() || o.region_kind != r.region_kind ||
      o.region_params != r.region_params)
    return false;
  return o.margin_factor == r.margin_factor && o.eta_cap == r.eta_cap;
}

}  // namespace coopreg

#include "coopreg/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopreg/error.hpp"
#include "coopreg/regulator.hpp"
#include "coopreg/report.hpp"
#include "coopreg/robust.hpp"
#include "coopreg/scenarios.hpp"
#include "coopreg/sim.hpp"

namespace coopreg {

namespace fs = std::filesystem;

namespace {

// Raised for bad flags or inconsistent inputs; maps to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SynthesisMode parse_mode(const std::string& s) {
  if (s == "nominal") return SynthesisMode::kNominal;
  if (s == "transient") return SynthesisMode::kTransientIdentical;
  if (s == "robust") return SynthesisMode::kTransientRobust;
  throw UsageError("unknown mode '" + s + "' (nominal, transient or robust)");
}

std::string mode_flag(SynthesisMode m) {
  switch (m) {
    case SynthesisMode::kNominal: return "nominal";
    case SynthesisMode::kTransientIdentical: return "transient";
    case SynthesisMode::kTransientRobust: return "robust";
  }
  return "nominal";
}

std::string design_name(SynthesisMode m) {
  switch (m) {
    case SynthesisMode::kNominal: return "nominal distributed regulator";
    case SynthesisMode::kTransientIdentical: return "transient coupling for identical agents";
    case SynthesisMode::kTransientRobust: return "robust transient coupling";
  }
  return "";
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("COOPREG_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto seed = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return seed;
  } catch (const std::exception&) {
    throw UsageError(std::string("COOPREG_SEED is not an unsigned integer: ") + v);
  }
}

Scenario builtin(const std::string& name, std::uint64_t seed) {
  if (name == "platoon") return platoon_scenario();
  if (name == "helicopter") {
    HelicopterConfig c;
    c.seed = seed;
    return helicopter_scenario(c);
  }
  throw UsageError("unknown scenario '" + name + "' (platoon or helicopter)");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

struct Design {
  DistributedRegulator reg;
  std::optional<RobustReport> robust;
  AssumptionReport assumptions;
};

Design synthesize(const Scenario& s, SynthesisMode mode) {
  Design d;
  d.assumptions = check_assumptions(s.problem, s.options);
  switch (mode) {
    case SynthesisMode::kNominal:
      d.reg = synth_nominal(s.problem, s.options);
      break;
    case SynthesisMode::kTransientIdentical:
      d.reg = synth_transient_identical(s.problem, s.options);
      break;
    case SynthesisMode::kTransientRobust: {
      auto [reg, rep] = synth_transient_robust(s.problem, s.options);
      d.reg = std::move(reg);
      d.robust = std::move(rep);
      break;
    }
  }
  return d;
}

std::vector<std::string> labels(const std::string& prefix, int k, const std::string& what,
                                Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i)
    out.push_back(prefix + std::to_string(k + 1) + "." + what + "." + std::to_string(i + 1));
  return out;
}

std::string csv(const std::vector<double>& times, const std::vector<Eigen::MatrixXd>& signals,
                const std::string& what) {
  std::vector<std::string> names;
  Eigen::Index cols = 0;
  for (std::size_t k = 0; k < signals.size(); ++k) {
    const auto l = labels("agent", static_cast<int>(k), what, signals[k].cols());
    names.insert(names.end(), l.begin(), l.end());
    cols += signals[k].cols();
  }
  Eigen::MatrixXd all(static_cast<Eigen::Index>(times.size()), cols);
  Eigen::Index c = 0;
  for (const auto& s : signals) {
    all.middleCols(c, s.cols()) = s;
    c += s.cols();
  }
  std::ostringstream out;
  write_signal_csv(out, times, names, all);
  return out.str();
}

SimMetrics run_sim(const Scenario& s, const DistributedRegulator& reg, double t_end, double dt,
                   const fs::path& dir) {
  const ClosedLoopSystem cls = assemble(s.problem, reg);
  std::vector<std::string> warnings;
  const SimulationTrace trace = simulate(cls, t_end, dt, &warnings);
  SimMetrics m = compute_metrics(s.problem, reg, cls, trace);
  m.warnings.insert(m.warnings.begin(), warnings.begin(), warnings.end());
  std::ostringstream tr;
  write_trace_csv(tr, trace);
  write_text(dir / "trace.csv", tr.str());
  write_text(dir / "e.csv", csv(trace.times, regulation_errors(s.problem, cls, trace), "e"));
  write_text(dir / "eps_s.csv", csv(trace.times, sync_errors(s.problem, reg, trace), "eps_s"));
  write_text(dir / "metrics.json", metrics_to_json(m).dump(2) + "\n");
  return m;
}

struct Row {
  int criterion;
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int print_table(std::ostream& out, const std::vector<Row>& rows) {
  bool all = true;
  for (const auto& r : rows) {
    out << "criterion " << r.criterion << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.detail
        << "\n";
    all = all && r.pass;
  }
  return all ? kExitOk : kExitFailed;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Row lemma1_row(const Scenario& s) {
  const Lemma1Check c = crosscheck_lemma1_detailed(s.problem);
  const bool ok = c.equivalent && c.overall_residual <= 1e-8 && c.local_residual <= 1e-8;
  return {8, ok,
          "regulator equations: overall residual " + fmt(c.overall_residual) +
              ", local residual " + fmt(c.local_residual)};
}

int demo_platoon(const fs::path& dir, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = platoon_scenario();
  write_text(dir / "platoon.json", scenario_to_json(s));
  SimMetrics metrics[2];
  double abscissa[2];
  const SynthesisMode modes[2] = {SynthesisMode::kNominal, SynthesisMode::kTransientIdentical};
  for (int i = 0; i < 2; ++i) {
    const Design d = synthesize(s, modes[i]);
    const fs::path sub = dir / mode_flag(modes[i]);
    write_text(sub / "report.json",
               regulator_report(s, d.reg, d.assumptions, d.robust).dump(2) + "\n");
    metrics[i] = run_sim(s, d.reg, s.t_end, s.dt, sub);
    abscissa[i] = metrics[i].internal_abscissa;
  }
  const double runtime = seconds_since(t0);

  std::vector<Row> rows;
  const double e_max = std::max(metrics[0].max_final_error, metrics[1].max_final_error);
  rows.push_back({3, e_max < 1e-3 && runtime < 10.0,
                  "max_k |e_k(60)| = " + fmt(e_max) + " (nominal " +
                      fmt(metrics[0].max_final_error) + ", transient " +
                      fmt(metrics[1].max_final_error) + "), " + fmt(runtime) + " s"});
  rows.push_back({4, metrics[0].p1 && metrics[1].p1 && abscissa[0] < -1e-6 && abscissa[1] < -1e-6,
                  "P1 " + std::string(metrics[0].p1 && metrics[1].p1 ? "holds" : "violated") +
                      ", internal abscissa nominal " + fmt(abscissa[0]) + ", transient " +
                      fmt(abscissa[1])});
  bool c5 = !metrics[1].resets.empty() && metrics[0].resets.size() == metrics[1].resets.size();
  std::string detail;
  for (std::size_t i = 0; i < metrics[1].resets.size() && i < metrics[0].resets.size(); ++i) {
    const ResetMetrics& tr = metrics[1].resets[i];
    const ResetMetrics& nr = metrics[0].resets[i];
    const bool decay = tr.decay_valid && tr.decay_rate >= 0.8 * s.options.gamma;
    const bool smaller = tr.max_sync_error < nr.max_sync_error;
    c5 = c5 && decay && smaller;
    detail += "t=" + fmt(tr.time) + ": rate " + (tr.decay_valid ? fmt(tr.decay_rate) : "n/a") +
              ", max |eps_s| " + fmt(tr.max_sync_error) + " vs nominal " +
              fmt(nr.max_sync_error) + "; ";
  }
  rows.push_back({5, c5, detail});
  rows.push_back(lemma1_row(s));
  return print_table(out, rows);
}

int demo_helicopter(const fs::path& dir, std::uint64_t seed, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = builtin("helicopter", seed);
  write_text(dir / "helicopter.json", scenario_to_json(s));
  const Design nominal = synthesize(s, SynthesisMode::kNominal);
  write_text(dir / "nominal" / "report.json",
             regulator_report(s, nominal.reg, nominal.assumptions).dump(2) + "\n");
  const SimMetrics mn = run_sim(s, nominal.reg, s.t_end, s.dt, dir / "nominal");
  const auto t1 = std::chrono::steady_clock::now();
  const Design robust = synthesize(s, SynthesisMode::kTransientRobust);
  const double synth_time = seconds_since(t1);
  write_text(dir / "robust" / "report.json",
             regulator_report(s, robust.reg, robust.assumptions, robust.robust).dump(2) + "\n");
  const SimMetrics mr = run_sim(s, robust.reg, s.t_end, s.dt, dir / "robust");
  const double runtime = seconds_since(t0);

  const RobustReport& r = *robust.robust;
  std::vector<Row> rows;
  rows.push_back({1, r.eta_delta >= 0.3079 && r.eta_delta <= 0.3179 && runtime < 30.0,
                  "eta_delta = " + fmt(r.eta_delta) + " (agent " +
                      std::to_string(r.worst_agent + 1) + "), " + fmt(runtime) + " s"});
  bool c2 = r.small_gain.ok();
  std::string detail = "eta = " + fmt(r.eta_used) + "; ";
  for (const auto& c : r.checks) {
    c2 = c2 && c.in_region && c.hinf_norm < r.eta_used;
    detail += "lambda " + fmt(c.lambda.real()) + ": |T| " + fmt(c.hinf_norm) + ", abscissa " +
              fmt(c.spectral_abscissa) + (c.in_region ? "" : " (outside region)") + "; ";
  }
  rows.push_back({2, c2 && synth_time < 60.0, detail + fmt(synth_time) + " s"});
  rows.push_back({4, mn.p1 && mr.p1 && mn.internal_abscissa < -1e-6 &&
                         mr.internal_abscissa < -1e-6,
                  "P1 " + std::string(mn.p1 && mr.p1 ? "holds" : "violated") +
                      ", internal abscissa nominal " + fmt(mn.internal_abscissa) + ", robust " +
                      fmt(mr.internal_abscissa)});
  rows.push_back(lemma1_row(s));
  out << "final |e| nominal " << fmt(mn.max_final_error) << ", robust "
      << fmt(mr.max_final_error) << "\n";
  return print_table(out, rows);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed output regulators with transient synchronization"};
  app.require_subcommand(1);

  std::string scenario_path, mode_arg, out_path, regulator_path, out_dir = "out", name;
  double t_end = -1.0, dt = -1.0;
  std::uint64_t seed = HelicopterConfig{}.seed;

  auto* check = app.add_subcommand("check", "Check the assumptions of a scenario");
  check->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  check->add_option("--mode", mode_arg, "nominal, transient or robust");

  auto* synth = app.add_subcommand("synth", "Synthesize a regulator and write its report");
  synth->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  synth->add_option("--mode", mode_arg, "nominal, transient or robust");
  synth->add_option("--out", out_path, "Report path; stdout when omitted");

  auto* sim = app.add_subcommand("sim", "Simulate a scenario under a regulator");
  sim->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("--regulator", regulator_path, "Report from synth; synthesized when omitted");
  sim->add_option("--mode", mode_arg, "Mode used when no report is given");
  sim->add_option("--t-end", t_end, "Final time");
  sim->add_option("--dt", dt, "Step size");
  sim->add_option("--out-dir", out_dir, "Output directory");

  auto* demo = app.add_subcommand("demo", "Run a built-in example end to end");
  demo->add_option("name", name, "platoon or helicopter")->required();
  demo->add_option("--out-dir", out_dir, "Output directory");
  demo->add_option("--seed", seed, "Disturbance seed");

  auto* exp = app.add_subcommand("export", "Write a built-in scenario as JSON");
  exp->add_option("name", name, "platoon or helicopter")->required();
  exp->add_option("--out", out_path, "Output path; stdout when omitted");
  exp->add_option("--seed", seed, "Disturbance seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (const auto s = env_seed()) seed = *s;

    if (check->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      const SynthesisMode mode = mode_arg.empty() ? s.mode : parse_mode(mode_arg);
      const AssumptionReport rep = check_assumptions(s.problem, s.options);
      const auto required = required_assumptions(mode);
      const bool ok = rep.passes(required);
      Json j;
      j["scenario"] = s.name;
      j["mode"] = mode_flag(mode);
      j["required"] = required;
      j["passed"] = ok;
      j["assumptions"] = assumptions_to_json(rep);
      out << j.dump(2) << "\n";
      if (!ok) {
        for (const auto& v : rep.failures()) {
          if (std::find(required.begin(), required.end(), v.name) == required.end()) continue;
          err << v.name << " fails" << (v.agent >= 0 ? " for agent " + std::to_string(v.agent + 1) : "")
              << ": " << v.detail << "\n";
        }
      }
      return ok ? kExitOk : kExitFailed;
    }

    if (synth->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      const SynthesisMode mode = mode_arg.empty() ? s.mode : parse_mode(mode_arg);
      Design d;
      try {
        d = synthesize(s, mode);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kParseError || e.code() == ErrorCode::kValidationError) throw;
        err << design_name(mode) << " failed: " << e.what() << "\n";
        return kExitFailed;
      }
      const std::string text = regulator_report(s, d.reg, d.assumptions, d.robust).dump(2) + "\n";
      if (out_path.empty()) out << text;
      else write_text(out_path, text);
      return kExitOk;
    }

    if (sim->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      DistributedRegulator reg;
      if (!regulator_path.empty()) {
        std::ifstream in(regulator_path);
        if (!in) throw UsageError("cannot open " + regulator_path);
        Json j;
        try {
          j = Json::parse(in);
        } catch (const Json::exception& e) {
          throw Error(ErrorCode::kParseError, regulator_path + ": " + e.what());
        }
        reg = regulator_from_report(j, s);
      } else {
        const SynthesisMode mode = mode_arg.empty() ? s.mode : parse_mode(mode_arg);
        try {
          reg = synthesize(s, mode).reg;
        } catch (const Error& e) {
          err << design_name(mode) << " failed: " << e.what() << "\n";
          return kExitFailed;
        }
      }
      const SimMetrics m = run_sim(s, reg, t_end >= 0.0 ? t_end : s.t_end,
                                   dt > 0.0 ? dt : s.dt, out_dir);
      out << metrics_to_json(m).dump(2) << "\n";
      return m.p1 ? kExitOk : kExitFailed;
    }

    if (demo->parsed()) {
      if (name == "platoon") return demo_platoon(fs::path(out_dir), out);
      if (name == "helicopter") return demo_helicopter(fs::path(out_dir), seed, out);
      throw UsageError("unknown demo '" + name + "' (platoon or helicopter)");
    }

    if (exp->parsed()) {
      const std::string text = scenario_to_json(builtin(name, seed));
      if (out_path.empty()) out << text;
      else write_text(out_path, text);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kParseError:
      case ErrorCode::kValidationError:
      case ErrorCode::kDimensionMismatch:
        return kExitUsage;
      default:
        return kExitFailed;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace coopreg

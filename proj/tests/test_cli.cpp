#include "coopreg/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "coopreg/scenarios.hpp"

namespace coopreg {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const std::string kDir = COOPREG_SCENARIO_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "coopreg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv("COOPREG_SEED");
    dir = fs::temp_directory_path() /
          ("coopreg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override {
    unsetenv("COOPREG_SEED");
    fs::remove_all(dir);
  }
  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string platoon_with_edges(const Json& edges, const std::string& name) {
    Json j = Json::parse(scenario_to_json(platoon_scenario()));
    j["graph"]["edges"] = edges;
    return write(name, j.dump(2));
  }
  fs::path dir;
};

TEST_F(CliTest, CheckShippedScenarios) {
  const Outcome p = run({"check", kDir + "/platoon.json"});
  EXPECT_EQ(p.code, kExitOk) << p.err;
  EXPECT_TRUE(Json::parse(p.out)["passed"].get<bool>());
  EXPECT_EQ(run({"check", kDir + "/helicopter.json"}).code, kExitOk);
  const Outcome h = run({"check", kDir + "/helicopter.json", "--mode", "transient"});
  EXPECT_EQ(h.code, kExitFailed);
  EXPECT_NE(h.err.find("A6"), std::string::npos);
}

TEST_F(CliTest, DisconnectedGraphNamesA5) {
  const std::string path = platoon_with_edges(Json::array({{1, 2}, {2, 1}}), "split.json");
  const Outcome c = run({"check", path});
  EXPECT_EQ(c.code, kExitFailed);
  EXPECT_NE(c.err.find("A5"), std::string::npos) << c.err;
  const Outcome s = run({"synth", path, "--mode", "nominal"});
  EXPECT_EQ(s.code, kExitFailed);
  EXPECT_NE(s.err.find("A5"), std::string::npos) << s.err;
}

TEST_F(CliTest, DirectedGraphRejectedByRobustMode) {
  const std::string path = platoon_with_edges(
      Json::array({{1, 2}, {2, 3}, {3, 4}, {4, 5}}), "directed.json");
  const Outcome r = run({"synth", path, "--mode", "robust"});
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_NE(r.err.find("GraphNotUndirected"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageAndParseErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"check"}).code, kExitUsage);
  EXPECT_EQ(run({"demo", "submarine"}).code, kExitUsage);
  EXPECT_EQ(run({"check", kDir + "/platoon.json", "--mode", "fast"}).code, kExitUsage);
  const Outcome m = run({"check", write("bad.json", "{\n  \"name\": \"x\",\n  oops\n}")});
  EXPECT_EQ(m.code, kExitUsage);
  EXPECT_NE(m.err.find("line 3"), std::string::npos) << m.err;
  EXPECT_EQ(run({"check", (dir / "missing.json").string()}).code, kExitUsage);
}

TEST_F(CliTest, SynthThenSimWithReport) {
  const std::string report = (dir / "report.json").string();
  ASSERT_EQ(run({"synth", kDir + "/platoon.json", "--out", report}).code, kExitOk);
  const Json j = Json::parse(read_file(report));
  EXPECT_EQ(j["mode"], "transient");
  EXPECT_TRUE(j["gains"].contains("H"));
  const Outcome s = run({"sim", kDir + "/platoon.json", "--regulator", report, "--t-end", "20",
                     "--out-dir", (dir / "sim").string()});
  EXPECT_EQ(s.code, kExitOk) << s.err;
  for (const char* f : {"trace.csv", "e.csv", "eps_s.csv", "metrics.json"})
    EXPECT_TRUE(fs::exists(dir / "sim" / f)) << f;
  const std::string header = read_file(dir / "sim" / "trace.csv").substr(0, 40);
  EXPECT_EQ(header.rfind("t,agent1.x.1,agent1.x.2,", 0), 0u) << header;

  // A report belongs to the scenario it was synthesized for.
  const Outcome wrong = run({"sim", kDir + "/helicopter.json", "--regulator", report, "--out-dir",
                         (dir / "wrong").string()});
  EXPECT_EQ(wrong.code, kExitUsage);
}

TEST_F(CliTest, Deterministic) {
  const Outcome a = run({"synth", kDir + "/helicopter.json"});
  const Outcome b = run({"synth", kDir + "/helicopter.json"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  for (const char* sub : {"s1", "s2"}) {
    ASSERT_EQ(run({"sim", kDir + "/platoon.json", "--t-end", "20", "--out-dir",
                   (dir / sub).string()})
                  .code,
              kExitOk);
  }
  for (const char* f : {"trace.csv", "e.csv", "eps_s.csv", "metrics.json"})
    EXPECT_EQ(read_file(dir / "s1" / f), read_file(dir / "s2" / f)) << f;
}

TEST_F(CliTest, SeedOverride) {
  const Outcome s5 = run({"export", "helicopter", "--seed", "5"});
  const Outcome s7 = run({"export", "helicopter", "--seed", "7"});
  EXPECT_NE(s5.out, s7.out);
  setenv("COOPREG_SEED", "5", 1);
  const Outcome env = run({"export", "helicopter", "--seed", "7"});
  EXPECT_EQ(env.out, s5.out);
  setenv("COOPREG_SEED", "not-a-number", 1);
  EXPECT_EQ(run({"export", "helicopter"}).code, kExitUsage);
  unsetenv("COOPREG_SEED");
  EXPECT_EQ(run({"export", "helicopter"}).out, read_file(kDir + "/helicopter.json"));
}

TEST_F(CliTest, ExportRoundTrip) {
  const std::string path = (dir / "p.json").string();
  ASSERT_EQ(run({"export", "platoon", "--out", path}).code, kExitOk);
  EXPECT_EQ(read_file(path), read_file(kDir + "/platoon.json"));
}

TEST_F(CliTest, DemoPlatoonPrintsCriteria) {
  const Outcome r = run({"demo", "platoon", "--out-dir", dir.string()});
  for (const char* c : {"criterion 3: ", "criterion 4: ", "criterion 5: ", "criterion 8: "})
    EXPECT_NE(r.out.find(c), std::string::npos) << c;
  EXPECT_NE(r.out.find("criterion 3: PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "transient" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "nominal" / "eps_s.csv"));
}

}  // namespace
}  // namespace coopreg

#include "qhj/cli/commands.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = qhj::cli::execute_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::path("cli-artifacts") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const std::string& name,
                      const json& j) {
  fs::path p = dir / name;
  std::ofstream(p) << j.dump(2) << "\n";
  return p;
}

json ground_config() {
  return json{
      {"grid", {{"points", {256}}, {"extent", {32.0}}}},
      {"potential", {{"kind", "harmonic"}, {"omega", 1.0}}},
      {"initial_state", {{"kind", "harmonic-ground"}, {"omega", 1.0}}},
      {"solver",
       {{"kind", "tdse"}, {"time_step", 2.5e-4}, {"steps", 400}, {"output_stride", 2}}}};
}

json packet_config() {
  return json{
      {"grid", {{"points", {256}}, {"extent", {40.0}}}},
      {"potential", {{"kind", "free"}}},
      {"initial_state", {{"kind", "free-gaussian"}, {"sigma0", 1.0}, {"k0", 1.0}}},
      {"solver",
       {{"kind", "tdse"}, {"time_step", 1e-3}, {"steps", 200}, {"output_stride", 20}}}};
}

}  // namespace

TEST_CASE("derivation replay emits a passing report and transcript") {
  auto dir = fresh_dir("derive");
  auto res = run({"derive", "nonrel-general", "--out-dir", dir.string()});
  CAPTURE(res.out, res.err);
  REQUIRE(res.code == 0);
  auto j = slurp_json(dir / "derive-nonrel-general.json");
  CHECK(j["artifact"] == "derivation-report");
  CHECK(j["pass"] == true);
  auto transcript = slurp(dir / "derive-nonrel-general.txt");
  CHECK(transcript.find("result: pass") != std::string::npos);
}

TEST_CASE("unknown pipeline and unknown flags are usage errors") {
  CHECK(run({"derive", "nosuch"}).code == 2);
  CHECK(run({"derive", "nonrel-bohm", "--frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("help exits cleanly and names the subcommands") {
  auto res = run({"--help"});
  CHECK(res.code == 0);
  CHECK(res.out.find("derive") != std::string::npos);
  CHECK(res.out.find("residuals") != std::string::npos);
}

TEST_CASE("simulate writes the record summary and final slice") {
  auto dir = fresh_dir("simulate");
  auto cfg = write_config(dir, "scenario.json", packet_config());
  auto res = run({"simulate", cfg.string(), "--out-dir", dir.string()});
  CAPTURE(res.err);
  REQUIRE(res.code == 0);
  auto j = slurp_json(dir / "simulation.json");
  CHECK(j["artifact"] == "simulation");
  CHECK(j["method"] == "split-step-fourier-o2");
  CHECK(j["times"].size() == 11);
  CHECK(j["slice_norms"].size() == 11);
  CHECK(fs::exists(dir / "final_state.csv"));
  CHECK(!fs::exists(dir / "states.csv"));

  auto dumped = run({"simulate", cfg.string(), "--out-dir", dir.string(),
                     "--dump-states"});
  CHECK(dumped.code == 0);
  CHECK(fs::exists(dir / "states.csv"));
}

TEST_CASE("residual gates pass on a resolved stationary scenario") {
  auto dir = fresh_dir("residuals");
  auto cfg = write_config(dir, "scenario.json", ground_config());
  auto res = run({"residuals", cfg.string(), "--eq", "bohm-hj,continuity",
                  "--out-dir", dir.string()});
  CAPTURE(res.out, res.err);
  REQUIRE(res.code == 0);
  auto j = slurp_json(dir / "residuals.json");
  CHECK(j["artifact"] == "residuals");
  CHECK(j["pass"] == true);
  REQUIRE(j["checks"].size() == 2);
  for (const auto& check : j["checks"]) {
    CHECK(check["pass"] == true);
    CHECK(check["worst_max_norm"].get<double>() < 1e-5);
  }
  CHECK(fs::exists(dir / "residual-bohm-hj.csv"));
  CHECK(fs::exists(dir / "residual-continuity-final.csv"));
}

TEST_CASE("a hopeless tolerance turns the exit code red") {
  auto dir = fresh_dir("residuals-red");
  auto cfg = write_config(dir, "scenario.json", ground_config());
  auto res = run({"residuals", cfg.string(), "--eq", "bohm-hj", "--tol", "1e-18",
                  "--out-dir", dir.string()});
  CHECK(res.code == 1);
  CHECK(slurp_json(dir / "residuals.json")["pass"] == false);
}

TEST_CASE("relativistic equations are refused on a nonrelativistic run") {
  auto dir = fresh_dir("mismatch");
  auto cfg = write_config(dir, "scenario.json", ground_config());
  auto res = run({"residuals", cfg.string(), "--eq", "kg-real",
                  "--out-dir", dir.string()});
  CHECK(res.code == 2);
  CHECK(!res.err.empty());
}

TEST_CASE("malformed configuration is a usage error") {
  auto dir = fresh_dir("badcfg");
  fs::path p = dir / "broken.json";
  std::ofstream(p) << "{ not json";
  CHECK(run({"simulate", p.string(), "--out-dir", dir.string()}).code == 2);

  auto extra = ground_config();
  extra["grid"]["typo"] = 1;
  auto cfg = write_config(dir, "extra.json", extra);
  CHECK(run({"simulate", cfg.string(), "--out-dir", dir.string()}).code == 2);
}

TEST_CASE("guidance paths are integrated and tabulated") {
  auto dir = fresh_dir("traj");
  auto cfg = write_config(dir, "scenario.json", packet_config());
  auto res = run({"trajectories", cfg.string(), "--seeds", "stratified:16",
                  "--out-dir", dir.string()});
  CAPTURE(res.err);
  REQUIRE(res.code == 0);
  auto j = slurp_json(dir / "trajectories.json");
  CHECK(j["artifact"] == "trajectories");
  CHECK(j["seeds"].size() == 16);
  auto csv = slurp(dir / "trajectories.csv");
  CHECK(csv.rfind("seed_id,t,x,winding", 0) == 0);
}

TEST_CASE("artifact directories aggregate into one summary") {
  auto dir = fresh_dir("report");
  REQUIRE(run({"derive", "nonrel-bohm", "--out-dir", dir.string()}).code == 0);
  auto cfg = write_config(dir, "scenario.json", ground_config());
  REQUIRE(run({"residuals", cfg.string(), "--eq", "continuity", "--out-dir",
               dir.string()}).code == 0);
  auto res = run({"report", dir.string(), "--out-dir", dir.string()});
  REQUIRE(res.code == 0);
  auto j = slurp_json(dir / "summary.json");
  CHECK(j["artifact"] == "summary");
  CHECK(j["derivations"].size() == 1);
  CHECK(j["residuals"].size() == 1);
}

TEST_CASE("artifacts are byte-identical across runs") {
  auto a = fresh_dir("det-a");
  auto b = fresh_dir("det-b");
  REQUIRE(run({"derive", "relativistic", "--out-dir", a.string()}).code == 0);
  REQUIRE(run({"derive", "relativistic", "--out-dir", b.string()}).code == 0);
  CHECK(slurp(a / "derive-relativistic.json") ==
        slurp(b / "derive-relativistic.json"));
}

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kDir = fs::temp_directory_path() / "riser_cli_test";

int sh(const std::string& args) {
  const std::string cmd = std::string("\"") + RISER_CLI_PATH + "\" " + args + " >" +
                          (kDir / "stdout.txt").string() + " 2>" + (kDir / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json base() {
  return json::parse(R"({
    "schema_version": 1,
    "geometry": {"rho": 0.5641895835477563, "h": 1.0, "N": 16},
    "physics": {"k": 5.0, "p": 1.0, "g": [0.0, 0.0, 1.0], "b0": 1.0, "a": 1.0, "b": 1.0},
    "drive": {"phi": 0.0, "alpha": 0.0},
    "initial": {"u0": {"kind": "bubble", "amplitude": 0.1}, "u1": {"kind": "zero"}},
    "time": {"t_end": 1.0, "dt": "auto", "scheme": "newmark", "record_stride": 10},
    "analysis": {"growth": {"m": -0.3, "n": 0.1, "lambda": 0.5}, "iota": 0.5}
  })");
}

std::string write_config(const std::string& name, const json& j) {
  const auto p = kDir / ("cfg_" + name);
  std::ofstream(p) << j.dump(2);
  return p.string();
}

std::string write_series(const std::string& name, double exponent) {
  const auto p = kDir / name;
  std::ofstream f(p);
  f << "t,E,I_b,d_t,r,H,q,norm_u_sq,norm_v_sq,norm_uzz_sq,max_abs_u\n";
  for (int i = 0; i <= 200; ++i) {
    const double t = 2.5 * i;
    f.precision(17);
    f << t << ',' << std::pow(1.0 + t, exponent) << ",0,0,0,0,0,0,0,0,0\n";
  }
  return p.string();
}

struct Setup {
  Setup() { fs::create_directories(kDir); }
};
const Setup setup;

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(sh("") == 2);
  CHECK(sh("frobnicate") == 2);
  CHECK(sh("run --config x.json") == 2);
  CHECK(sh("--help") == 0);
}

TEST_CASE("run: writes CSV, summary JSON and exits 0") {
  const auto cfg = write_config("ok_cfg.json", base());
  const auto out = (kDir / "ok.csv").string();
  fs::remove(kDir / "ok.json");
  REQUIRE(sh("run --config " + cfg + " --out " + out) == 0);
  CHECK(fs::exists(kDir / "ok.json"));
  const auto summary = json::parse(slurp(kDir / "ok.json"));
  CHECK(summary["energy_nonincreasing"] == true);
  CHECK(slurp(out).rfind("t,E,", 0) == 0);
  CHECK(sh("run --config " + cfg + " --out " + (kDir / "seeded.csv").string() + " --seed 99") == 0);
  CHECK(json::parse(slurp(kDir / "seeded.json"))["config"]["seed"] == 99);
  // the summary path derived from --out must not clobber the config
  const auto clash = write_config("clash.json", base());
  CHECK(sh("run --config " + clash + " --out " + (kDir / "cfg_clash.csv").string()) == 2);
  CHECK(json::parse(slurp(kDir / "cfg_clash.json")).contains("physics"));
}

TEST_CASE("run: t_end = 0 gives a single record") {
  auto j = base();
  j["time"]["t_end"] = 0.0;
  const auto cfg = write_config("zero.json", j);
  REQUIRE(sh("run --config " + cfg + " --out " + (kDir / "zero.csv").string()) == 0);
  std::ifstream f(kDir / "zero.csv");
  std::string line;
  int lines = 0;
  while (std::getline(f, line)) lines += line.empty() ? 0 : 1;
  CHECK(lines == 2);
}

TEST_CASE("run: rigidity violation exits 2 and names the condition") {
  auto j = base();
  j["physics"]["k"] = 4.0;
  const auto cfg = write_config("rigid.json", j);
  CHECK(sh("run --config " + cfg + " --out " + (kDir / "rigid.csv").string()) == 2);
  CHECK(slurp(kDir / "stderr.txt").find("rigidity") != std::string::npos);
}

TEST_CASE("run: unknown key and missing file exit 2") {
  auto j = base();
  j["time"]["stride"] = 3;
  CHECK(sh("run --config " + write_config("unknown.json", j) + " --out " + (kDir / "u.csv").string()) == 2);
  CHECK(sh("run --config " + (kDir / "missing.json").string() + " --out " + (kDir / "m.csv").string()) == 2);
}

TEST_CASE("run: divergence exits 3") {
  auto j = base();
  j["time"]["scheme"] = "explicit-rk4";
  j["time"]["dt"] = 0.05;
  j["time"]["t_end"] = 5.0;
  const auto cfg = write_config("diverge.json", j);
  CHECK(sh("run --config " + cfg + " --out " + (kDir / "diverge.csv").string()) == 3);
}

TEST_CASE("classify: JSON report on stdout") {
  const auto cfg = write_config("cls.json", base());
  REQUIRE(sh("classify --config " + cfg) == 0);
  const auto rep = json::parse(slurp(kDir / "stdout.txt"));
  CHECK(rep["rigidity_ok"] == true);
  CHECK(rep["summary"].get<std::string>().find("boundary case") != std::string::npos);
  REQUIRE(sh("classify --config " + cfg + " --detail --out " + (kDir / "cls_out.json").string()) == 0);
  CHECK(json::parse(slurp(kDir / "cls_out.json"))["condK"].contains("t"));
}

TEST_CASE("analyze: PASS exits 0, FAIL exits 5, bad CSV exits 2") {
  const auto cfg = write_config("an.json", base());
  CHECK(sh("analyze " + write_series("fast.csv", -1.0) + " --config " + cfg) == 0);
  CHECK(json::parse(slurp(kDir / "stdout.txt"))["verdict"] == "PASS");
  CHECK(sh("analyze " + write_series("flat.csv", 0.0) + " --config " + cfg) == 5);
  CHECK(json::parse(slurp(kDir / "stdout.txt"))["verdict"] == "FAIL");
  CHECK(sh("analyze " + write_series("flat2.csv", 0.0) + " --config " + cfg + " --tolerance 0.5") == 0);

  const std::string text = slurp(kDir / "fast.csv");
  // cut mid-row: fewer fields than the header
  std::string t2 = text.substr(0, text.find('\n', text.size() / 2) + 1) + "12.5,0.3\n";
  std::ofstream(kDir / "short.csv") << t2;
  CHECK(sh("analyze " + (kDir / "short.csv").string() + " --config " + cfg) == 2);
  CHECK(sh("analyze " + (kDir / "nothere.csv").string() + " --config " + cfg) == 2);
}

TEST_CASE("verify: zero fields is a vacuous pass, small runs succeed") {
  CHECK(sh("verify --fields 0") == 0);
  CHECK(json::parse(slurp(kDir / "stdout.txt"))["fields_tested"] == 0);
  REQUIRE(sh("verify --fields 25 --seed 7 --jobs 2 --nz 64 --out " + (kDir / "v.json").string()) == 0);
  CHECK(json::parse(slurp(kDir / "v.json"))["fields_tested"] == 25);
  CHECK(sh("verify --nz 4") == 2);
}

TEST_CASE("sweep: writes the master CSV") {
  auto j = base();
  j["time"]["t_end"] = 0.2;
  j["sweep"] = {{"axes", {{"k", {5.0, 6.0}}, {"b0", {0.5, 1.0}}}}};
  const auto cfg = write_config("sw.json", j);
  const auto dir = kDir / "sweep_out";
  REQUIRE(sh("sweep --config " + cfg + " --out " + dir.string() + " --jobs 2") == 0);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(fs::exists(dir / "point_003" / "summary.json"));
  j["sweep"] = {{"axes", {{"k", {4.0, 6.0}}}}};
  CHECK(sh("sweep --config " + write_config("sw2.json", j) + " --out " + (kDir / "sw2").string()) == 1);
}

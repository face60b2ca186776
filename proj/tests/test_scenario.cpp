#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riser/error.hpp"
#include "riser/scenario.hpp"
#include "riser/series_io.hpp"

using namespace riser;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_config() {
  return json::parse(R"({
    "schema_version": 1,
    "seed": 3,
    "geometry": {"rho": 0.5641895835477563, "h": 1.0, "N": 16},
    "physics": {"k": 5.0, "p": 1.0, "g": [0.0, 0.0, 1.0], "b0": 1.0,
                "a": 1.0, "b": {"kind": "power", "scale": 1.0, "exponent": 0.5}},
    "drive": {"phi": {"kind": "power", "scale": 0.05, "exponent": -0.3},
              "alpha": {"kind": "power", "scale": -0.05, "exponent": 0.1}},
    "initial": {"u0": {"kind": "bubble", "amplitude": 0.1, "lift": true},
                "u1": {"kind": "zero", "lift": true}},
    "time": {"t_end": 2.0, "dt": "auto", "scheme": "newmark", "record_stride": 5},
    "analysis": {"delta": 2.0, "sigma": "auto", "iota": 0.5,
                 "growth": {"m": -0.3, "n": 0.1, "lambda": 0.5, "M1": 0.05, "M2": 0.05, "M3": 1.5},
                 "tolerance": 0.1}
  })");
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("riser_scenario_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("parse: fields land where expected") {
  const auto c = parse_config(small_config());
  CHECK(c.N == 16);
  CHECK(c.params.k == 5.0);
  CHECK(c.params.g[2] == 1.0);
  CHECK(c.phi.kind_name() == "power");
  CHECK(c.a.kind_name() == "constant");
  CHECK(c.u0.kind == InitialSpec::Kind::Bubble);
  CHECK(c.u0.lift);
  CHECK_FALSE(c.sigma.has_value());
  CHECK_FALSE(c.scheme.dt.has_value());
  CHECK(c.growth.M3 == 1.5);
  CHECK(c.seed == 3);
}

TEST_CASE("parse: rejects unknown keys, wrong types and bad values") {
  auto j = small_config();
  j["physics"]["kk"] = 1.0;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::Validation);
  j = small_config();
  j["bogus"] = true;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::Validation);
  j = small_config();
  j["geometry"]["N"] = "many";
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::Validation);
  j = small_config();
  j["time"]["scheme"] = "euler";
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::Validation);
  j = small_config();
  j["physics"]["p"] = 0.5;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::Validation);
  j = small_config();
  j["schema_version"] = 2;
  CHECK(code_of([&] { parse_config(j); }) == ErrorCode::Validation);
}

TEST_CASE("to_json round trip and fingerprint determinism") {
  const auto c = parse_config(small_config());
  const json r = to_json(c);
  CHECK(r["analysis"]["sigma"].is_number());
  CHECK(r["time"]["dt"].is_number());
  const auto c2 = parse_config(r);
  CHECK(to_json(c2) == r);
  CHECK(fingerprint(c) == fingerprint(c2));
  CHECK(fingerprint(c).size() == 16);
  auto j = small_config();
  j["physics"]["k"] = 5.5;
  CHECK(fingerprint(parse_config(j)) != fingerprint(c));
}

TEST_CASE("build_model: rigidity failure and auto values") {
  const auto c = parse_config(small_config());
  const auto m = build_model(c);
  CHECK(resolved_sigma(c, m) == doctest::Approx(16.0));
  CHECK(resolved_dt(c, m) == doctest::Approx(1.0 / 160.0));
  auto j = small_config();
  j["physics"]["k"] = 4.0;
  const auto bad = parse_config(j);
  CHECK(code_of([&] { run_scenario(bad); }) == ErrorCode::RigidityViolated);
}

TEST_CASE("initial_state: lift matches the boundary data, incompatible data is rejected") {
  const auto c = parse_config(small_config());
  const auto m = build_model(c);
  const auto s = initial_state(c, m);
  CHECK(s.u.front() == 0.0);
  CHECK(s.u.back() == doctest::Approx(0.05));
  CHECK(s.v.back() == doctest::Approx(-0.015));
  const double dz = m.grid.dz();
  CHECK((s.u[16] - s.u[15]) / dz == doctest::Approx(-0.05).epsilon(0.2));

  auto j = small_config();
  j["initial"]["u0"] = {{"kind", "bump"}, {"center", 0.9}, {"width", 0.4}, {"amplitude", 1.0}};
  const auto bad = parse_config(j);
  CHECK(code_of([&] { initial_state(bad, build_model(bad)); }) == ErrorCode::Validation);

  j = small_config();
  std::vector<double> table(17);
  for (std::size_t i = 0; i <= 16; ++i) table[i] = 0.05 * std::pow(i / 16.0, 2) * (3.0 - 2.0 * i / 16.0);
  j["initial"]["u0"] = {{"kind", "table"}, {"values", table}};
  j["drive"]["alpha"] = -0.5;  // slope mismatch 0.5 exceeds dz (1 + |alpha|)
  const auto tab = parse_config(j);
  CHECK(code_of([&] { initial_state(tab, build_model(tab)); }) == ErrorCode::Validation);
  j["drive"]["alpha"] = 0.0;
  const auto ok = parse_config(j);
  const auto st = initial_state(ok, build_model(ok));
  CHECK(st.u[8] == doctest::Approx(table[8]));
}

TEST_CASE("CSV round trip and malformed input") {
  TimeSeries s;
  for (int i = 0; i < 5; ++i) {
    DiagnosticsRecord r;
    r.t = 0.1 * i + 1.0 / 3.0;
    r.E = std::exp(-i) * 0.123456789012345678;
    r.max_abs_u = 1e-300 * i;
    s.records.push_back(r);
  }
  std::stringstream ss;
  write_csv(ss, s);
  const auto back = read_csv(ss);
  REQUIRE(back.records.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(back.records[i].t == s.records[i].t);
    CHECK(back.records[i].E == s.records[i].E);
    CHECK(back.records[i].max_abs_u == s.records[i].max_abs_u);
  }

  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    return code_of([&] { read_csv(in); });
  };
  std::ostringstream good;
  write_csv(good, s);
  const std::string text = good.str();
  CHECK(bad("t,E\n0,1\n") == ErrorCode::MalformedCsv);
  const auto last_row = text.rfind('\n', text.size() - 2) + 1;
  CHECK(bad(text.substr(0, last_row + 5)) == ErrorCode::MalformedCsv);
  std::string swapped = text;
  const auto l1 = swapped.find('\n') + 1;
  swapped.insert(l1, swapped.substr(swapped.rfind('\n', swapped.size() - 2) + 1));
  CHECK(bad(swapped) == ErrorCode::MalformedCsv);
  CHECK(bad(text.substr(0, text.find('\n') + 1) + "0,abc,0,0,0,0,0,0,0,0,0\n") == ErrorCode::MalformedCsv);
  CHECK(code_of([] { read_csv(fs::path("/nonexistent/riser.csv")); }) == ErrorCode::Io);
}

TEST_CASE("run_scenario: files, summary and t_end = 0") {
  const auto dir = scratch("run");
  const auto c = parse_config(small_config());
  RunFiles f{dir / "s.csv", dir / "s.json", dir / "s.ckpt", {}};
  const auto out = run_scenario(c, f);
  CHECK(fs::exists(f.csv));
  CHECK(fs::exists(f.summary));
  const auto back = read_csv(f.csv);
  CHECK(back.records.size() == out.series.records.size());
  CHECK(out.summary["fingerprint"] == fingerprint(c));
  CHECK(out.summary["energy_sandwich"]["lower_violations"] == 0);
  CHECK(out.summary["energy_sandwich"]["upper_violations"] == 0);
  CHECK(out.summary.contains("classification"));

  auto j = small_config();
  j["time"]["t_end"] = 0.0;
  const auto zero = run_scenario(parse_config(j), RunFiles{dir / "z.csv"});
  CHECK(zero.series.records.size() == 1);
  CHECK(read_csv(dir / "z.csv").records.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("run_scenario: checkpoint restart reproduces the final record") {
  const auto dir = scratch("restart");
  auto j = small_config();
  j["time"]["checkpoint_stride"] = 200;
  const auto c = parse_config(j);
  const auto full = run_scenario(c, RunFiles{{}, {}, dir / "c.ckpt"});
  const auto resumed = run_scenario(c, RunFiles{{}, {}, {}, dir / "c.ckpt"});
  CHECK(resumed.series.records.back().E == full.series.records.back().E);
  CHECK(resumed.series.records.back().max_abs_u == full.series.records.back().max_abs_u);
  fs::remove_all(dir);
}

TEST_CASE("analyze: window too small and tolerance override") {
  const auto c = parse_config(small_config());
  TimeSeries tiny;
  tiny.records.push_back(DiagnosticsRecord{0.0, 1.0});
  CHECK(code_of([&] { analyze(tiny, c); }) == ErrorCode::WindowTooSmall);

  TimeSeries pl;
  for (int i = 0; i <= 200; ++i) {
    const double t = 2.5 * i;
    pl.records.push_back(DiagnosticsRecord{t, std::pow(1.0 + t, 0.0)});
  }
  const auto strict = analyze(pl, c);  // flat tail against -1/6 + 0.1
  CHECK_FALSE(strict.verdict.pass);
  const auto loose = analyze(pl, c, 0.2);
  CHECK(loose.verdict.pass);
  CHECK(loose.to_json()["pass"] == true);
}

TEST_CASE("sweep: 3 x 3 grid writes one row per point") {
  const auto dir = scratch("sweep");
  auto j = small_config();
  j["time"]["t_end"] = 0.5;
  j["sweep"] = {{"axes", {{"m", {-0.3, -0.2, -0.1}}, {"k", {5.0, 6.0, 7.0}}}}};
  const auto c = parse_config(j);
  const auto r = run_sweep(c, dir, 3);
  CHECK(r.points.size() == 9);
  CHECK(r.all_completed());
  std::ifstream csv(dir / "sweep.csv");
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "point_%03zu", i);
    CHECK(fs::exists(dir / name / "summary.json"));
    CHECK(fs::exists(dir / name / "series.csv"));
  }
  const auto cfg = apply_sweep_point(c, {{"m", -0.2}, {"k", 7.0}});
  CHECK(cfg.params.k == 7.0);
  CHECK(cfg.growth.m == -0.2);
  CHECK(cfg.phi.value(3.0) == doctest::Approx(0.05 * std::pow(4.0, -0.2)));

  // an unbuildable point is recorded and the sweep continues
  j["sweep"] = {{"axes", {{"k", {4.0, 5.0}}}}};
  const auto r2 = run_sweep(parse_config(j), dir / "again", 1);
  REQUIRE(r2.points.size() == 2);
  CHECK(r2.points[0].status.rfind("error", 0) == 0);
  CHECK(r2.points[1].status == "ok");
  CHECK_FALSE(r2.all_completed());
  fs::remove_all(dir);
}

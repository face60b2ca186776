// riser: command-line front end over the C interface.
//
//   riser run      --config cfg.json --out series.csv [--restart ckpt] [--seed S]
//   riser verify   [--fields N] [--seed S] [--jobs J] [--nz NZ] ...
//   riser classify --config cfg.json [--detail]
//   riser analyze  series.csv --config cfg.json [--tolerance TOL]
//   riser sweep    --config cfg.json --out dir [--jobs J]
//
// Exit codes: 0 success, 2 invalid input, 3 solver divergence, 4 inequality
// violation (verify), 5 decay verdict FAIL (analyze), 1 anything else.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "riser/riser_c.h"

namespace {

int exit_code(riser_status s) {
  switch (s) {
    case RISER_OK: return 0;
    case RISER_INVALID_ARGUMENT:
    case RISER_VALIDATION:
    case RISER_IO: return 2;
    case RISER_DIVERGED: return 3;
    case RISER_VIOLATION: return 4;
    case RISER_FAIL: return 5;
    default: return 1;
  }
}

int report(riser_status s, const char* what) {
  if (s != RISER_OK) {
    std::cerr << "riser " << what << ": " << riser_status_string(s);
    const char* msg = riser_last_error();
    if (msg != nullptr && *msg != '\0') std::cerr << ": " << msg;
    std::cerr << '\n';
  }
  return exit_code(s);
}

struct CString {
  char* p = nullptr;
  ~CString() { riser_string_free(p); }
};

struct Scenario {
  riser_scenario* p = nullptr;
  ~Scenario() { riser_scenario_free(p); }
};

struct Series {
  riser_series* p = nullptr;
  ~Series() { riser_series_free(p); }
};

void emit(const char* json, const std::string& out_path) {
  if (json == nullptr) return;
  if (out_path.empty()) {
    std::cout << json << '\n';
    return;
  }
  std::ofstream f(out_path, std::ios::trunc);
  f << json << '\n';
  if (!f) std::cerr << "riser: cannot write " << out_path << '\n';
}

/// Loads the config; a --seed given on the command line replaces the config's seed.
riser_status load_scenario(const std::string& path, std::optional<std::uint64_t> seed,
                           Scenario& out) {
  riser_status s = riser_scenario_load(path.c_str(), &out.p);
  if (s != RISER_OK || !seed) return s;
  CString text;
  s = riser_scenario_to_json(out.p, &text.p);
  if (s != RISER_OK) return s;
  auto j = nlohmann::json::parse(text.p);
  j["seed"] = *seed;
  // "auto" values were resolved by to_json; keep them as resolved numbers.
  riser_scenario_free(out.p);
  out.p = nullptr;
  return riser_scenario_from_json(j.dump().c_str(), &out.p);
}

std::filesystem::path sibling(const std::string& out, const char* ext) {
  std::filesystem::path p(out);
  return p.parent_path() / (p.stem().string() + ext);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riser dynamics laboratory: simulation, hypothesis checks and decay analysis"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string restart;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  std::string csv;
  bool detail = false;

  riser_verify_options vopts;
  riser_verify_options_default(&vopts);
  std::size_t fields = vopts.fields;
  std::uint64_t verify_seed = vopts.seed;

  auto* run = app.add_subcommand("run", "simulate a scenario; writes CSV, summary JSON and checkpoints");
  run->add_option("--config", config, "scenario JSON")->required();
  run->add_option("--out", out, "time-series CSV; summary goes to <stem>.json")->required();
  run->add_option("--restart", restart, "resume from a checkpoint file");
  run->add_option("--seed", seed, "override the configuration seed");

  auto* verify = app.add_subcommand("verify", "check the three cylinder estimates on random fields");
  verify->add_option("--fields", fields, "number of random fields");
  verify->add_option("--seed", verify_seed, "base seed");
  verify->add_option("--jobs", vopts.jobs, "worker threads");
  verify->add_option("--out", out, "write the JSON summary here instead of stdout");
  verify->add_option("--rho", vopts.rho, "cylinder radius");
  verify->add_option("--height", vopts.h, "cylinder height");
  verify->add_option("--nr", vopts.nr, "radial nodes (>= 16)");
  verify->add_option("--nphi", vopts.nphi, "angular nodes (>= 8)");
  verify->add_option("--nz", vopts.nz, "axial nodes (>= 16)");
  verify->add_option("--phi-max", vopts.phi_max, "phi0 drawn from [0, phi-max]");
  verify->add_option("--alpha-max", vopts.alpha_max, "alpha0 drawn from [-alpha-max, alpha-max]");
  bool negative_alpha = false;
  verify->add_flag("--negative-alpha", negative_alpha, "draw only alpha0 <= 0");

  auto* classify = app.add_subcommand("classify", "report which hypotheses hold for a scenario");
  classify->add_option("--config", config, "scenario JSON")->required();
  classify->add_option("--out", out, "write the report here instead of stdout");
  classify->add_flag("--detail", detail, "include per-sample verdicts");

  auto* analyze = app.add_subcommand("analyze", "fit the energy tail and compare with the bound");
  analyze->add_option("csv", csv, "time-series CSV from run")->required();
  analyze->add_option("--config", config, "scenario JSON")->required();
  analyze->add_option("--tolerance", tolerance, "slack on the predicted exponent");
  analyze->add_option("--out", out, "write the fit here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "run every point of the configured sweep axes");
  sweep->add_option("--config", config, "scenario JSON with sweep.axes")->required();
  sweep->add_option("--out", out, "output directory")->required();
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--seed", seed, "override the configuration seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      Scenario sc;
      if (auto s = load_scenario(config, seed, sc); s != RISER_OK) return report(s, "run");
      const auto summary = sibling(out, ".json").string();
      const auto checkpoint = sibling(out, ".ckpt").string();
      for (const auto& p : {summary, checkpoint, out}) {
        std::error_code ec;
        if (std::filesystem::equivalent(p, config, ec)) {
          std::cerr << "riser run: output " << p << " would overwrite the config\n";
          return 2;
        }
      }
      riser_run_files files{out.c_str(), summary.c_str(), checkpoint.c_str(),
                            restart.empty() ? nullptr : restart.c_str()};
      CString text;
      const auto s = riser_run(sc.p, &files, &text.p, nullptr);
      if (s == RISER_OK) std::cerr << "riser run: wrote " << out << " and " << summary << '\n';
      return report(s, "run");
    }
    if (*verify) {
      vopts.fields = fields;
      vopts.seed = verify_seed;
      vopts.negative_alpha_only = negative_alpha ? 1 : 0;
      CString text;
      const auto s = riser_verify(&vopts, &text.p);
      emit(text.p, out);
      return report(s, "verify");
    }
    if (*classify) {
      Scenario sc;
      if (auto s = riser_scenario_load(config.c_str(), &sc.p); s != RISER_OK) {
        return report(s, "classify");
      }
      CString text;
      const auto s = riser_classify(sc.p, detail ? 1 : 0, &text.p);
      emit(text.p, out);
      return report(s, "classify");
    }
    if (*analyze) {
      Scenario sc;
      if (auto s = riser_scenario_load(config.c_str(), &sc.p); s != RISER_OK) {
        return report(s, "analyze");
      }
      Series series;
      if (auto s = riser_series_load_csv(csv.c_str(), &series.p); s != RISER_OK) {
        return report(s, "analyze");
      }
      CString text;
      const auto s = riser_analyze(sc.p, series.p, tolerance, &text.p);
      emit(text.p, out);
      return report(s, "analyze");
    }
    if (*sweep) {
      Scenario sc;
      if (auto s = load_scenario(config, seed, sc); s != RISER_OK) return report(s, "sweep");
      CString text;
      const auto s = riser_sweep(sc.p, out.c_str(), jobs, &text.p);
      emit(text.p, "");
      return report(s, "sweep");
    }
  } catch (const std::exception& e) {
    std::cerr << "riser: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

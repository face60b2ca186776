#include "riser/riser_c.h"

#include <cmath>
#include <cstring>
#include <string>

#include "json.hpp"

#include "riser/error.hpp"
#include "riser/scenario.hpp"
#include "riser/series_io.hpp"

struct riser_scenario {
  riser::ScenarioConfig config;
};

struct riser_series {
  riser::TimeSeries series;
};

namespace {

thread_local std::string g_last_error;

riser_status status_for(riser::ErrorCode code) {
  using riser::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return RISER_INVALID_ARGUMENT;
    case ErrorCode::Validation:
    case ErrorCode::RigidityViolated:
    case ErrorCode::SigmaTooSmall:
    case ErrorCode::NegativePhi:
    case ErrorCode::MalformedCsv:
    case ErrorCode::WindowTooSmall:
      return RISER_VALIDATION;
    case ErrorCode::NonFinite:
    case ErrorCode::Diverged:
    case ErrorCode::PicardStalled:
      return RISER_DIVERGED;
    case ErrorCode::Io:
      return RISER_IO;
    case ErrorCode::EnergyUnderflow:
      return RISER_INTERNAL;
  }
  return RISER_INTERNAL;
}

riser_status fail(riser_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <typename F>
riser_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const riser::Error& e) {
    return fail(status_for(e.code()),
                std::string(riser::to_string(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(RISER_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RISER_INTERNAL, e.what());
  } catch (...) {
    return fail(RISER_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put_json(char** out, const nlohmann::json& j) {
  if (out != nullptr) *out = dup_string(j.dump(2));
}

}  // namespace

extern "C" {

const char* riser_last_error(void) { return g_last_error.c_str(); }

const char* riser_status_string(riser_status status) {
  switch (status) {
    case RISER_OK: return "ok";
    case RISER_INVALID_ARGUMENT: return "invalid argument";
    case RISER_VALIDATION: return "validation error";
    case RISER_DIVERGED: return "solver diverged";
    case RISER_VIOLATION: return "inequality violated";
    case RISER_FAIL: return "decay verdict FAIL";
    case RISER_IO: return "i/o error";
    case RISER_INCOMPLETE: return "sweep incomplete";
    case RISER_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void riser_string_free(char* s) { std::free(s); }

riser_status riser_scenario_load(const char* path, riser_scenario** out) {
  if (path == nullptr || out == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new riser_scenario{riser::load_config(path)};
    return RISER_OK;
  });
}

riser_status riser_scenario_from_json(const char* json_text, riser_scenario** out) {
  if (json_text == nullptr || out == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw riser::Error(riser::ErrorCode::Validation, std::string("invalid JSON: ") + e.what());
    }
    *out = new riser_scenario{riser::parse_config(j)};
    return RISER_OK;
  });
}

void riser_scenario_free(riser_scenario* scenario) { delete scenario; }

riser_status riser_scenario_to_json(const riser_scenario* scenario, char** out_json) {
  if (scenario == nullptr || out_json == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    put_json(out_json, riser::to_json(scenario->config));
    return RISER_OK;
  });
}

riser_status riser_scenario_fingerprint(const riser_scenario* scenario, char** out) {
  if (scenario == nullptr || out == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup_string(riser::fingerprint(scenario->config));
    return RISER_OK;
  });
}

riser_status riser_classify(const riser_scenario* scenario, int detail, char** out_json) {
  if (scenario == nullptr || out_json == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto model = riser::build_model(scenario->config);
    const auto report = riser::classify(model, riser::classify_options(scenario->config, model));
    put_json(out_json, riser::to_json(report, detail != 0));
    return RISER_OK;
  });
}

riser_status riser_run(const riser_scenario* scenario, const riser_run_files* files,
                       char** out_summary, riser_series** out_series) {
  if (scenario == nullptr) return fail(RISER_INVALID_ARGUMENT, "null scenario");
  if (out_series != nullptr) *out_series = nullptr;
  return guarded([&] {
    riser::RunFiles rf;
    if (files != nullptr) {
      if (files->csv) rf.csv = files->csv;
      if (files->summary) rf.summary = files->summary;
      if (files->checkpoint) rf.checkpoint = files->checkpoint;
      if (files->restart) rf.restart = files->restart;
    }
    auto result = riser::run_scenario(scenario->config, rf);
    put_json(out_summary, result.summary);
    if (out_series != nullptr) *out_series = new riser_series{std::move(result.series)};
    return RISER_OK;
  });
}

riser_status riser_series_load_csv(const char* path, riser_series** out) {
  if (path == nullptr || out == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new riser_series{riser::read_csv(std::filesystem::path(path))};
    return RISER_OK;
  });
}

riser_status riser_series_save_csv(const riser_series* series, const char* path) {
  if (series == nullptr || path == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    riser::write_csv(std::filesystem::path(path), series->series);
    return RISER_OK;
  });
}

void riser_series_free(riser_series* series) { delete series; }

size_t riser_series_length(const riser_series* series) {
  return series == nullptr ? 0 : series->series.records.size();
}

size_t riser_series_columns(void) { return std::size(riser::kRecordColumns); }

const char* riser_series_column_name(size_t column) {
  return column < std::size(riser::kRecordColumns) ? riser::kRecordColumns[column] : nullptr;
}

riser_status riser_series_record(const riser_series* series, size_t index, double* values) {
  if (series == nullptr || values == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  if (index >= series->series.records.size()) {
    return fail(RISER_INVALID_ARGUMENT, "record index out of range");
  }
  const auto& r = series->series.records[index];
  const double row[] = {r.t, r.E, r.I_b, r.d_t, r.r, r.H, r.q,
                        r.norm_u_sq, r.norm_v_sq, r.norm_uzz_sq, r.max_abs_u};
  std::memcpy(values, row, sizeof row);
  return RISER_OK;
}

riser_status riser_analyze(const riser_scenario* scenario, const riser_series* series,
                           double tolerance, char** out_json) {
  if (scenario == nullptr || series == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::optional<double> tol;
    if (!std::isnan(tolerance)) tol = tolerance;
    const auto outcome = riser::analyze(series->series, scenario->config, tol);
    put_json(out_json, outcome.to_json());
    if (!outcome.verdict.pass) {
      return fail(RISER_FAIL, "fitted exponent exceeds the predicted bound plus tolerance");
    }
    return RISER_OK;
  });
}

void riser_verify_options_default(riser_verify_options* opts) {
  if (opts == nullptr) return;
  const riser::VerifyOptions d;
  opts->rho = d.grid.rho;
  opts->h = d.grid.h;
  opts->nr = d.grid.Nr;
  opts->nphi = d.grid.Nphi;
  opts->nz = d.grid.Nz;
  opts->fields = d.fields;
  opts->seed = d.seed;
  opts->phi_max = d.phi_max;
  opts->alpha_max = d.alpha_max;
  opts->negative_alpha_only = d.negative_alpha_only ? 1 : 0;
  opts->jobs = d.jobs;
}

riser_status riser_verify(const riser_verify_options* opts, char** out_json) {
  if (opts == nullptr) return fail(RISER_INVALID_ARGUMENT, "null options");
  return guarded([&] {
    riser::VerifyOptions vo;
    vo.grid = {opts->rho, opts->h, opts->nr, opts->nphi, opts->nz};
    vo.fields = opts->fields;
    vo.seed = opts->seed;
    vo.phi_max = opts->phi_max;
    vo.alpha_max = opts->alpha_max;
    vo.negative_alpha_only = opts->negative_alpha_only != 0;
    vo.jobs = opts->jobs;
    const auto summary = riser::verify_estimates(vo);
    put_json(out_json, riser::to_json(summary, vo));
    if (!summary.passed()) return fail(RISER_VIOLATION, "super-tolerance violations found");
    return RISER_OK;
  });
}

riser_status riser_sweep(const riser_scenario* scenario, const char* out_dir, unsigned jobs,
                         char** out_json) {
  if (scenario == nullptr || out_dir == nullptr) return fail(RISER_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto result = riser::run_sweep(scenario->config, out_dir, jobs);
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : result.points) {
      nlohmann::json jp = {{"index", p.index}, {"values", p.values}, {"status", p.status}};
      jp["analysis"] = p.analysis ? p.analysis->to_json() : nlohmann::json(nullptr);
      points.push_back(jp);
    }
    put_json(out_json, {{"axes", result.axes},
                        {"points", points},
                        {"master_csv", (std::filesystem::path(out_dir) / "sweep.csv").string()}});
    if (!result.all_completed()) return fail(RISER_INCOMPLETE, "some sweep points failed");
    return RISER_OK;
  });
}

}  // extern "C"

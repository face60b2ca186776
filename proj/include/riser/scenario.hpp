#pragma once

// Scenario configuration (JSON), model construction, and the run / analyze /
// sweep drivers behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "riser/conditions.hpp"
#include "riser/cylinder.hpp"
#include "riser/decay.hpp"
#include "riser/integrator.hpp"
#include "riser/model.hpp"

namespace riser {

inline constexpr int kSchemaVersion = 1;

/// Initial displacement or velocity profile.
///   zero
///   bump:   amplitude * sin^2(pi (z - center + width/2) / width) on |z - center| < width/2
///   bubble: amplitude * z^2 (z - h)^2
///   table:  nodal values, N+1 of them
/// With `lift`, the cubic Hermite lift of the top boundary data is added so the
/// profile matches (phi, alpha) at z = h (or (phi_t, alpha_t) for velocities).
struct InitialSpec {
  enum class Kind { Zero, Bump, Bubble, Table };
  Kind kind = Kind::Zero;
  double center = 0.5;
  double width = 0.5;
  double amplitude = 0.0;
  std::vector<double> values;
  bool lift = false;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;

  Parameters params;
  std::size_t N = 128;
  TimeFunction a = TimeFunction::constant(1.0);
  TimeFunction b = TimeFunction::constant(1.0);
  TimeFunction phi = TimeFunction::constant(0.0);
  TimeFunction alpha = TimeFunction::constant(0.0);

  InitialSpec u0;
  InitialSpec u1;

  double t_end = 1.0;
  SchemeConfig scheme;
  std::int64_t record_stride = 100;
  std::int64_t checkpoint_stride = 0;

  double delta = 2.0;
  std::optional<double> sigma;  ///< nullopt = auto, 16 h / sqrt(a_max)
  GrowthSpec growth;
  double fit_window_fraction = 0.5;
  double tolerance = 0.1;
  std::size_t condition_samples = 1000;

  /// Sweep axes over {m, n, lambda, k, b0}, each with explicit values.
  std::vector<std::pair<std::string, std::vector<double>>> sweep_axes;
  std::uint64_t seed = 0;
};

/// Throws Error{Validation} for unknown keys, wrong types, or broken invariants.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration; "auto" sigma and dt are materialized.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// 16 hex digits (FNV-1a of the resolved configuration).
std::string fingerprint(const ScenarioConfig& cfg);

/// Throws Error{Validation} when the parameters break a model invariant.
RiserModel build_model(const ScenarioConfig& cfg);
double resolved_sigma(const ScenarioConfig& cfg, const RiserModel& model);
double resolved_dt(const ScenarioConfig& cfg, const RiserModel& model);
ClassifyOptions classify_options(const ScenarioConfig& cfg, const RiserModel& model);

/// Nodal initial state with boundary values applied. Throws Error{Validation}
/// when u0 is not compatible with (phi(0), alpha(0)) to within dz.
FieldState initial_state(const ScenarioConfig& cfg, const RiserModel& model);

// ---------------------------------------------------------------------------
// JSON views of the reports

/// `detail` adds the per-sample t and ok arrays.
nlohmann::json to_json(const SampledVerdict& v, bool detail = false);
nlohmann::json to_json(const HypothesisReport& r, bool detail = false);
nlohmann::json to_json(const PredictedExponents& p);
nlohmann::json to_json(const DecayFit& f);
nlohmann::json to_json(const DecayVerdict& v);
nlohmann::json to_json(const VerifySummary& s, const VerifyOptions& opts);

// ---------------------------------------------------------------------------

struct AnalysisOutcome {
  std::optional<DecayFit> fit;
  DecayVerdict verdict;
  nlohmann::json to_json() const;
};

/// Tail fit of `series` against the configuration's growth exponents.
/// Throws WindowTooSmall; energy underflow becomes a passing verdict.
AnalysisOutcome analyze(const TimeSeries& series, const ScenarioConfig& cfg,
                        std::optional<double> tolerance = std::nullopt);

struct RunFiles {
  std::filesystem::path csv;         ///< empty: not written
  std::filesystem::path summary;     ///< empty: not written
  std::filesystem::path checkpoint;  ///< used when checkpoint_stride > 0
  std::filesystem::path restart;     ///< resume from this checkpoint if set
};

struct RunOutcome {
  TimeSeries series;
  HypothesisReport report;
  std::optional<AnalysisOutcome> analysis;
  std::string analysis_error;
  nlohmann::json summary;
};

/// Validates (including the rigidity and sigma conditions), runs, writes the
/// requested files, and assembles the summary.
RunOutcome run_scenario(const ScenarioConfig& cfg, const RunFiles& files = {});

struct SweepPoint {
  std::size_t index = 0;
  std::vector<double> values;  ///< one per axis, in axis order
  std::string status = "ok";   ///< "ok" or "error: ..."
  HypothesisReport report;
  std::optional<AnalysisOutcome> analysis;
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<SweepPoint> points;
  bool all_completed() const;
};

/// Applies one grid point of the sweep axes to a copy of `cfg`. m, n and
/// lambda also reset the exponents of phi, alpha and b when those are
/// power-law or decaying-sinusoid functions.
ScenarioConfig apply_sweep_point(const ScenarioConfig& cfg,
                                 const std::vector<std::pair<std::string, double>>& assignment);

/// One run per point of the Cartesian product, each in out_dir/point_NNN/, plus
/// out_dir/sweep.csv. Point failures are recorded and the sweep continues.
SweepResult run_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                      unsigned jobs);

}  // namespace riser

#include "riser/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "riser/error.hpp"
#include "riser/log.hpp"
#include "riser/parallel.hpp"
#include "riser/series_io.hpp"

namespace riser {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::Validation, msg); }

/// Object reader that remembers which keys were consumed, so leftovers can be
/// rejected as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(fmt::format("{} must be an object", label()));
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number()) invalid(fmt::format("{} must be a number", sub(key)));
    const double x = v->get<double>();
    if (!std::isfinite(x)) invalid(fmt::format("{} must be finite", sub(key)));
    return x;
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      invalid(fmt::format("{} must be a non-negative integer", sub(key)));
    }
    return v->get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_boolean()) invalid(fmt::format("{} must be true or false", sub(key)));
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    const json* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_string()) invalid(fmt::format("{} must be a string", sub(key)));
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return {};
    return number_array(*v, sub(key));
  }

  std::string sub(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) invalid(fmt::format("unknown key '{}'", sub(it.key())));
    }
  }

  static std::vector<double> number_array(const json& v, const std::string& where) {
    if (!v.is_array()) invalid(fmt::format("{} must be an array of numbers", where));
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number()) invalid(fmt::format("{} must be an array of numbers", where));
      out.push_back(x.get<double>());
      if (!std::isfinite(out.back())) invalid(fmt::format("{} entries must be finite", where));
    }
    return out;
  }

 private:
  std::string label() const { return path_.empty() ? "configuration" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

TimeFunction parse_function(const json& j, const std::string& path) {
  if (j.is_number()) return TimeFunction::constant(j.get<double>());
  Reader r(j, path);
  const std::string kind = r.string("kind", "");
  TimeFunction f;
  try {
    if (kind == "constant") {
      f = TimeFunction::constant(r.number("value", 0.0));
    } else if (kind == "power") {
      f = TimeFunction::power(r.number("scale", 1.0), r.number("exponent", 0.0));
    } else if (kind == "decaying_sinusoid") {
      f = TimeFunction::decaying_sinusoid(r.number("scale", 1.0), r.number("exponent", 0.0),
                                          r.number("omega", 1.0));
    } else if (kind == "table") {
      f = TimeFunction::table(r.numbers("t"), r.numbers("v"));
    } else if (kind == "polynomial") {
      auto c = r.numbers("coeffs");
      if (c.empty()) invalid(fmt::format("{}.coeffs must be nonempty", path));
      f = TimeFunction::polynomial(std::move(c));
    } else {
      invalid(fmt::format(
          "{}.kind must be constant, power, decaying_sinusoid, table or polynomial (got '{}')", path,
          kind));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Validation) throw;
    invalid(fmt::format("{}: {}", path, e.what()));
  }
  r.finish();
  return f;
}

json function_json(const TimeFunction& f) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TimeFunction::Constant>) {
          return {{"kind", "constant"}, {"value", x.value}};
        } else if constexpr (std::is_same_v<T, TimeFunction::Power>) {
          return {{"kind", "power"}, {"scale", x.scale}, {"exponent", x.exponent}};
        } else if constexpr (std::is_same_v<T, TimeFunction::DecayingSinusoid>) {
          return {{"kind", "decaying_sinusoid"},
                  {"scale", x.scale},
                  {"exponent", x.exponent},
                  {"omega", x.omega}};
        } else if constexpr (std::is_same_v<T, TimeFunction::Table>) {
          return {{"kind", "table"}, {"t", x.t}, {"v", x.v}};
        } else {
          return {{"kind", "polynomial"}, {"coeffs", x.coeffs}};
        }
      },
      f.repr());
}

InitialSpec parse_initial(const json& j, const std::string& path) {
  Reader r(j, path);
  InitialSpec s;
  const std::string kind = r.string("kind", "zero");
  if (kind == "zero") {
    s.kind = InitialSpec::Kind::Zero;
  } else if (kind == "bump") {
    s.kind = InitialSpec::Kind::Bump;
    s.center = r.number("center", 0.5);
    s.width = r.number("width", 0.5);
    s.amplitude = r.number("amplitude", 0.0);
    if (!(s.width > 0.0)) invalid(fmt::format("{}.width must be positive", path));
  } else if (kind == "bubble") {
    s.kind = InitialSpec::Kind::Bubble;
    s.amplitude = r.number("amplitude", 0.0);
  } else if (kind == "table") {
    s.kind = InitialSpec::Kind::Table;
    s.values = r.numbers("values");
  } else {
    invalid(fmt::format("{}.kind must be zero, bump, bubble or table (got '{}')", path, kind));
  }
  s.lift = r.boolean("lift", false);
  r.finish();
  return s;
}

json initial_json(const InitialSpec& s) {
  json j;
  switch (s.kind) {
    case InitialSpec::Kind::Zero:
      j = {{"kind", "zero"}};
      break;
    case InitialSpec::Kind::Bump:
      j = {{"kind", "bump"}, {"center", s.center}, {"width", s.width}, {"amplitude", s.amplitude}};
      break;
    case InitialSpec::Kind::Bubble:
      j = {{"kind", "bubble"}, {"amplitude", s.amplitude}};
      break;
    case InitialSpec::Kind::Table:
      j = {{"kind", "table"}, {"values", s.values}};
      break;
  }
  j["lift"] = s.lift;
  return j;
}

constexpr std::array<const char*, 5> kSweepAxes{"m", "n", "lambda", "k", "b0"};

std::optional<Scheme> parse_scheme(const std::string& s) {
  if (s == "newmark") return Scheme::Newmark;
  if (s == "explicit-rk4" || s == "rk4") return Scheme::ExplicitRk4;
  return std::nullopt;
}

std::string scheme_name(Scheme s) { return s == Scheme::Newmark ? "newmark" : "explicit-rk4"; }

void validate_config(const ScenarioConfig& c) {
  c.params.validate();
  if (c.N < 8) invalid(fmt::format("geometry.N must be at least 8 (got {})", c.N));
  if (!(c.t_end >= 0.0)) invalid("time.t_end must be non-negative");
  if (c.scheme.dt && !(*c.scheme.dt > 0.0)) invalid("time.dt must be positive or \"auto\"");
  if (c.record_stride < 1) invalid("time.record_stride must be at least 1");
  if (c.checkpoint_stride < 0) invalid("time.checkpoint_stride must be non-negative");
  if (!(c.scheme.picard_tol > 0.0)) invalid("time.picard_tol must be positive");
  if (c.scheme.picard_max_iters < 1) invalid("time.picard_max_iters must be at least 1");
  if (!(c.delta > 1.0)) invalid("analysis.delta must exceed 1");
  if (c.sigma && !(*c.sigma > 0.0)) invalid("analysis.sigma must be positive or \"auto\"");
  if (!(c.growth.iota > 0.0)) invalid("analysis.iota must be positive");
  if (!(c.growth.M1 > 0.0 && c.growth.M2 > 0.0 && c.growth.M3 > 0.0)) {
    invalid("analysis.growth.M1, M2 and M3 must be positive");
  }
  if (!(c.fit_window_fraction > 0.0 && c.fit_window_fraction <= 1.0)) {
    invalid("analysis.fit_window_fraction must lie in (0, 1]");
  }
  if (!(c.tolerance >= 0.0)) invalid("analysis.tolerance must be non-negative");
  if (c.condition_samples < 100) invalid("analysis.condition_samples must be at least 100");
  for (const auto* init : {&c.u0, &c.u1}) {
    if (init->kind == InitialSpec::Kind::Table && init->values.size() != c.N + 1) {
      invalid(fmt::format("initial table needs N+1 = {} values, got {}", c.N + 1,
                          init->values.size()));
    }
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

double hermite_h1(double z, double h) {
  const double s = z / h;
  return 3.0 * s * s - 2.0 * s * s * s;
}

double hermite_h2(double z, double h) { return (z * z * z - h * z * z) / (h * h); }

std::vector<double> profile(const InitialSpec& s, const Grid1D& grid, double lift_value,
                            double lift_slope) {
  std::vector<double> out(grid.nodes(), 0.0);
  const double h = grid.h;
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    const double z = grid.z(i);
    double v = 0.0;
    switch (s.kind) {
      case InitialSpec::Kind::Zero:
        break;
      case InitialSpec::Kind::Bump: {
        const double x = z - s.center;
        if (std::abs(x) < 0.5 * s.width) {
          const double w = std::sin(std::numbers::pi * (x + 0.5 * s.width) / s.width);
          v = s.amplitude * w * w;
        }
        break;
      }
      case InitialSpec::Kind::Bubble:
        v = s.amplitude * z * z * (z - h) * (z - h);
        break;
      case InitialSpec::Kind::Table:
        v = s.values[i];
        break;
    }
    if (s.lift) v += lift_value * hermite_h1(z, h) + lift_slope * hermite_h2(z, h);
    out[i] = v;
  }
  return out;
}

json record_json(const DiagnosticsRecord& r) {
  return {{"t", r.t},           {"E", r.E},
          {"I_b", r.I_b},       {"d_t", r.d_t},
          {"r", r.r},           {"H", r.H},
          {"q", r.q},           {"norm_u_sq", r.norm_u_sq},
          {"norm_v_sq", r.norm_v_sq}, {"norm_uzz_sq", r.norm_uzz_sq},
          {"max_abs_u", r.max_abs_u}};
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig c;
  Reader root(j, "");
  const auto version = root.unsigned_int("schema_version", kSchemaVersion);
  if (version != static_cast<std::uint64_t>(kSchemaVersion)) {
    invalid(fmt::format("unsupported schema_version {} (expected {})", version, kSchemaVersion));
  }
  c.seed = root.unsigned_int("seed", 0);

  if (const json* g = root.find("geometry")) {
    Reader r(*g, "geometry");
    c.params.rho = r.number("rho", c.params.rho);
    c.params.h = r.number("h", c.params.h);
    c.N = r.unsigned_int("N", c.N);
    r.finish();
  }
  if (const json* p = root.find("physics")) {
    Reader r(*p, "physics");
    c.params.k = r.number("k", c.params.k);
    c.params.p = r.number("p", c.params.p);
    c.params.b0 = r.number("b0", c.params.b0);
    if (const json* g = r.find("g")) {
      const auto v = Reader::number_array(*g, "physics.g");
      if (v.size() != 3) invalid("physics.g must have three components");
      std::copy(v.begin(), v.end(), c.params.g.begin());
    }
    if (const json* a = r.find("a")) c.a = parse_function(*a, "physics.a");
    if (const json* b = r.find("b")) c.b = parse_function(*b, "physics.b");
    r.finish();
  }
  if (const json* d = root.find("drive")) {
    Reader r(*d, "drive");
    if (const json* f = r.find("phi")) c.phi = parse_function(*f, "drive.phi");
    if (const json* f = r.find("alpha")) c.alpha = parse_function(*f, "drive.alpha");
    r.finish();
  }
  if (const json* in = root.find("initial")) {
    Reader r(*in, "initial");
    if (const json* u = r.find("u0")) c.u0 = parse_initial(*u, "initial.u0");
    if (const json* u = r.find("u1")) c.u1 = parse_initial(*u, "initial.u1");
    r.finish();
  }
  if (const json* t = root.find("time")) {
    Reader r(*t, "time");
    c.t_end = r.number("t_end", c.t_end);
    if (const json* dt = r.find("dt")) {
      if (dt->is_string() && dt->get<std::string>() == "auto") {
        c.scheme.dt.reset();
      } else if (dt->is_number()) {
        c.scheme.dt = dt->get<double>();
      } else {
        invalid("time.dt must be a number or \"auto\"");
      }
    }
    const std::string name = r.string("scheme", scheme_name(c.scheme.scheme));
    const auto s = parse_scheme(name);
    if (!s) invalid(fmt::format("time.scheme must be newmark or explicit-rk4 (got '{}')", name));
    c.scheme.scheme = *s;
    c.record_stride = static_cast<std::int64_t>(r.unsigned_int("record_stride", 100));
    c.checkpoint_stride = static_cast<std::int64_t>(r.unsigned_int("checkpoint_stride", 0));
    c.scheme.picard_tol = r.number("picard_tol", c.scheme.picard_tol);
    c.scheme.picard_max_iters =
        static_cast<int>(r.unsigned_int("picard_max_iters", c.scheme.picard_max_iters));
    r.finish();
  }
  if (const json* a = root.find("analysis")) {
    Reader r(*a, "analysis");
    c.delta = r.number("delta", c.delta);
    if (const json* s = r.find("sigma")) {
      if (s->is_string() && s->get<std::string>() == "auto") {
        c.sigma.reset();
      } else if (s->is_number()) {
        c.sigma = s->get<double>();
      } else {
        invalid("analysis.sigma must be a number or \"auto\"");
      }
    }
    c.growth.iota = r.number("iota", c.growth.iota);
    if (const json* g = r.find("growth")) {
      Reader gr(*g, "analysis.growth");
      c.growth.m = gr.number("m", c.growth.m);
      c.growth.n = gr.number("n", c.growth.n);
      c.growth.lambda = gr.number("lambda", c.growth.lambda);
      c.growth.M1 = gr.number("M1", c.growth.M1);
      c.growth.M2 = gr.number("M2", c.growth.M2);
      c.growth.M3 = gr.number("M3", c.growth.M3);
      gr.finish();
    }
    c.fit_window_fraction = r.number("fit_window_fraction", c.fit_window_fraction);
    c.tolerance = r.number("tolerance", c.tolerance);
    c.condition_samples = r.unsigned_int("condition_samples", c.condition_samples);
    r.finish();
  }
  if (const json* s = root.find("sweep")) {
    Reader r(*s, "sweep");
    if (const json* axes = r.find("axes")) {
      if (!axes->is_object()) invalid("sweep.axes must be an object of value lists");
      for (const char* name : kSweepAxes) {
        auto it = axes->find(name);
        if (it == axes->end()) continue;
        auto values = Reader::number_array(*it, fmt::format("sweep.axes.{}", name));
        if (values.empty()) invalid(fmt::format("sweep.axes.{} must not be empty", name));
        c.sweep_axes.emplace_back(name, std::move(values));
      }
      for (auto it = axes->begin(); it != axes->end(); ++it) {
        if (std::find_if(kSweepAxes.begin(), kSweepAxes.end(),
                         [&](const char* a) { return it.key() == a; }) == kSweepAxes.end()) {
          invalid(fmt::format("unknown sweep axis '{}' (allowed: m, n, lambda, k, b0)", it.key()));
        }
      }
    }
    r.finish();
  }
  root.finish();
  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open config {}", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    invalid(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return parse_config(j);
}

json to_json(const ScenarioConfig& c) {
  json dt = "auto";
  json sigma = "auto";
  if (c.scheme.dt) dt = *c.scheme.dt;
  if (c.sigma) sigma = *c.sigma;
  try {
    const RiserModel model = build_model(c);
    dt = resolved_dt(c, model);
    sigma = resolved_sigma(c, model);
  } catch (const Error&) {
    // left as "auto"; the configuration cannot be resolved
  }

  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["geometry"] = {{"rho", c.params.rho}, {"h", c.params.h}, {"N", c.N}};
  j["physics"] = {{"k", c.params.k},
                  {"p", c.params.p},
                  {"g", c.params.g},
                  {"b0", c.params.b0},
                  {"a", function_json(c.a)},
                  {"b", function_json(c.b)}};
  j["drive"] = {{"phi", function_json(c.phi)}, {"alpha", function_json(c.alpha)}};
  j["initial"] = {{"u0", initial_json(c.u0)}, {"u1", initial_json(c.u1)}};
  j["time"] = {{"t_end", c.t_end},
               {"dt", dt},
               {"scheme", scheme_name(c.scheme.scheme)},
               {"record_stride", c.record_stride},
               {"checkpoint_stride", c.checkpoint_stride},
               {"picard_tol", c.scheme.picard_tol},
               {"picard_max_iters", c.scheme.picard_max_iters}};
  j["analysis"] = {{"delta", c.delta},
                   {"sigma", sigma},
                   {"iota", c.growth.iota},
                   {"growth",
                    {{"m", c.growth.m},
                     {"n", c.growth.n},
                     {"lambda", c.growth.lambda},
                     {"M1", c.growth.M1},
                     {"M2", c.growth.M2},
                     {"M3", c.growth.M3}}},
                   {"fit_window_fraction", c.fit_window_fraction},
                   {"tolerance", c.tolerance},
                   {"condition_samples", c.condition_samples}};
  if (!c.sweep_axes.empty()) {
    json axes = json::object();
    for (const auto& [name, values] : c.sweep_axes) axes[name] = values;
    j["sweep"] = {{"axes", axes}};
  }
  return j;
}

std::string fingerprint(const ScenarioConfig& cfg) {
  return fmt::format("{:016x}", fnv1a(to_json(cfg).dump()));
}

RiserModel build_model(const ScenarioConfig& cfg) {
  cfg.params.validate();
  try {
    RiserModel m;
    m.params = cfg.params;
    m.grid = Grid1D(cfg.params.h, cfg.N);
    m.tension = TensionProfile(cfg.a, m.grid);
    m.drag = cfg.b;
    m.drive = Drive{cfg.phi, cfg.alpha};
    return m;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Validation) throw;
    invalid(e.what());
  }
}

double resolved_sigma(const ScenarioConfig& cfg, const RiserModel& model) {
  return cfg.sigma.value_or(default_sigma(model.params, model.tension));
}

double resolved_dt(const ScenarioConfig& cfg, const RiserModel& model) {
  return cfg.scheme.dt.value_or(auto_dt(cfg.scheme, model));
}

ClassifyOptions classify_options(const ScenarioConfig& cfg, const RiserModel& model) {
  ClassifyOptions o;
  o.delta = cfg.delta;
  o.sigma = resolved_sigma(cfg, model);
  o.growth = cfg.growth;
  o.t_end = cfg.t_end;
  o.samples = cfg.condition_samples;
  return o;
}

FieldState initial_state(const ScenarioConfig& cfg, const RiserModel& model) {
  const Grid1D& grid = model.grid;
  DriveSample bc;
  try {
    bc = evaluate_drive(model.drive, 0.0);
  } catch (const Error& e) {
    invalid(e.what());
  }
  const double alpha0 = model.drive.alpha.value(0.0);
  const double alpha_t0 = model.drive.alpha.derivative(0.0);

  FieldState s;
  s.t = 0.0;
  s.u = profile(cfg.u0, grid, bc.phi, alpha0);
  s.v = profile(cfg.u1, grid, bc.phi_t, alpha_t0);

  const std::size_t N = grid.N;
  const double dz = grid.dz();
  const auto& u = s.u;
  const double slope_h = (3.0 * u[N] - 4.0 * u[N - 1] + u[N - 2]) / (2.0 * dz);
  if (std::abs(u[0]) > dz) {
    invalid(fmt::format("initial u0 is incompatible with the clamped bottom: u0(0) = {}", u[0]));
  }
  if (std::abs(u[N] - bc.phi) > dz * (1.0 + std::abs(bc.phi))) {
    invalid(fmt::format("initial u0 is incompatible with the top boundary: u0(h) = {}, phi(0) = {}",
                        u[N], bc.phi));
  }
  if (std::abs(slope_h - alpha0) > dz * (1.0 + std::abs(alpha0))) {
    invalid(fmt::format(
        "initial u0 is incompatible with the top slope: u0'(h) = {}, alpha(0) = {} (set \"lift\": "
        "true to add the boundary lift)",
        slope_h, alpha0));
  }
  apply_boundary(s, bc);
  return s;
}

// ---------------------------------------------------------------------------

json to_json(const SampledVerdict& v, bool detail) {
  json j = {{"overall", v.overall},
            {"violations", v.violations},
            {"samples", v.t.size()},
            {"first_violation", optional_number(v.first_violation)}};
  if (detail) {
    j["t"] = v.t;
    std::vector<bool> ok(v.ok.begin(), v.ok.end());
    j["ok"] = ok;
  }
  return j;
}

json to_json(const HypothesisReport& r, bool detail) {
  json j;
  j["rigidity_ok"] = r.rigidity_ok;
  j["k0"] = r.k0;
  j["sigma_ok"] = r.sigma_ok;
  j["sigma"] = r.sigma;
  j["sigma_min"] = r.sigma_min;
  if (!r.constants_message.empty()) j["constants_message"] = r.constants_message;
  j["condK_ok"] = r.cond_k.overall;
  j["condK"] = to_json(r.cond_k, detail);
  j["condD_ok"] = r.cond_d.overall;
  j["condD_status"] = std::string(to_string(r.cond_d_status));
  j["condD"] = to_json(r.cond_d, detail);
  j["drag_floor_ok"] = r.drag_floor.overall;
  j["drag_floor"] = to_json(r.drag_floor, detail);
  j["growth_ok"] = {{"m_lt_half", r.growth.m_lt_half},
                    {"n_lt_minus_m", r.growth.n_lt_minus_m},
                    {"lambda_ok", r.growth.lambda_ok},
                    {"lambda_bound", r.growth.lambda_bound},
                    {"all", r.growth.theorem_ok()}};
  j["remark_consistency"] = {{"m_minus_n_negative", r.growth.remark_m_minus_n_negative},
                             {"m_negative", r.growth.remark_m_negative},
                             {"all", r.growth.remark_ok()}};
  j["growth_bounds_ok"] = r.growth_bounds.overall;
  j["growth_bounds"] = to_json(r.growth_bounds, detail);
  j["g3_positive"] = r.g3_positive;
  j["sampled_range"] = {{"t_first", r.t_first}, {"t_last", r.t_last}, {"count", r.sample_count}};
  j["lyapunov_guaranteed"] = r.lyapunov_guaranteed;
  j["decay_guaranteed"] = r.decay_guaranteed;
  j["summary"] = r.summary;
  return j;
}

json to_json(const PredictedExponents& p) {
  return {{"theorem", p.theorem},
          {"proof", p.proof},
          {"discrepancy", p.discrepancy},
          {"vacuous", p.vacuous}};
}

json to_json(const DecayFit& f) {
  return {{"fitted_exponent", f.fitted_exponent},
          {"intercept", f.intercept},
          {"residual", f.residual},
          {"t_start", f.t_start},
          {"t_stop", f.t_stop},
          {"records", f.records}};
}

json to_json(const DecayVerdict& v) {
  json j = {{"verdict", v.pass ? "PASS" : "FAIL"},
            {"pass", v.pass},
            {"underflow", v.underflow},
            {"predicted", to_json(v.predicted)},
            {"tolerance", v.tolerance},
            {"margin_proof", v.margin_proof},
            {"margin_theorem", v.margin_theorem}};
  j["fitted_exponent"] = v.underflow ? json(nullptr) : json(v.fitted_exponent);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json to_json(const VerifySummary& s, const VerifyOptions& opts) {
  json violations = json::array();
  for (const auto& v : s.violations) {
    static constexpr const char* kNames[] = {"value", "gradient", "laplacian"};
    violations.push_back({{"estimate", kNames[v.estimate - 1]},
                          {"field_index", v.field_index},
                          {"field_seed", v.field_seed},
                          {"phi0", v.field.phi0},
                          {"alpha0", v.field.alpha0},
                          {"c", v.field.c},
                          {"lhs", v.lhs},
                          {"rhs", v.rhs},
                          {"quad_error", v.quad_error},
                          {"super_tolerance", v.super_tolerance}});
  }
  return {{"fields_tested", s.fields_tested},
          {"seed", opts.seed},
          {"grid",
           {{"rho", opts.grid.rho},
            {"h", opts.grid.h},
            {"Nr", opts.grid.Nr},
            {"Nphi", opts.grid.Nphi},
            {"Nz", opts.grid.Nz}}},
          {"violations", violations},
          {"max_lhs_over_rhs", s.max_lhs_over_rhs},
          {"super_tolerance", s.super_tolerance},
          {"gradient_failing", s.gradient_failing},
          {"equality_case_ratio", s.equality_case_ratio},
          {"passed", s.passed()}};
}

json AnalysisOutcome::to_json() const {
  json j = riser::to_json(verdict);
  j["fit"] = fit ? riser::to_json(*fit) : json(nullptr);
  return j;
}

AnalysisOutcome analyze(const TimeSeries& series, const ScenarioConfig& cfg,
                        std::optional<double> tolerance) {
  const double tol = tolerance.value_or(cfg.tolerance);
  const auto predicted = predicted_exponents(cfg.growth, cfg.params.p);
  const double horizon = series.records.empty() ? cfg.t_end : series.records.back().t;
  const FitWindow window = default_window(horizon, cfg.fit_window_fraction);
  AnalysisOutcome out;
  try {
    out.fit = fit_tail(series, window);
    out.verdict = verdict(*out.fit, predicted, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EnergyUnderflow) throw;
    out.verdict = underflow_verdict(predicted, tol);
  }
  return out;
}

// ---------------------------------------------------------------------------

RunOutcome run_scenario(const ScenarioConfig& cfg, const RunFiles& files) {
  validate_config(cfg);
  const RiserModel model = build_model(cfg);
  const double sigma = resolved_sigma(cfg, model);
  const AnalysisConstants constants = derive_constants(model.params, model.tension, cfg.delta, sigma);

  RunOutcome out;
  out.report = classify(model, classify_options(cfg, model));
  const FieldState initial = initial_state(cfg, model);

  std::optional<Checkpoint> restart;
  if (!files.restart.empty()) restart = read_checkpoint(files.restart);

  RunHooks hooks;
  hooks.checkpoint_path = files.checkpoint;
  hooks.restart = restart ? &*restart : nullptr;
  RunConfig rc{cfg.t_end, cfg.record_stride, cfg.checkpoint_stride};
  SchemeConfig scheme = cfg.scheme;
  scheme.dt = resolved_dt(cfg, model);

  log::info("run {}: N = {}, t_end = {}, dt = {}", fingerprint(cfg), cfg.N, cfg.t_end, *scheme.dt);
  try {
    out.series = run(model, scheme, rc, initial, sigma, hooks);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NegativePhi) invalid(e.what());
    throw;
  }
  out.series.fingerprint = fingerprint(cfg);
  if (!files.csv.empty()) write_csv(files.csv, out.series);

  try {
    out.analysis = analyze(out.series, cfg);
  } catch (const Error& e) {
    out.analysis_error = e.what();
  }

  std::size_t lower_bad = 0;
  std::size_t upper_bad = 0;
  for (const auto& r : out.series.records) {
    const auto sw = energy_sandwich(r.norm_v_sq, r.norm_uzz_sq, r.E, constants, model.params, 1e-6);
    lower_bad += sw.lower_ok ? 0 : 1;
    upper_bad += sw.upper_ok ? 0 : 1;
  }
  bool monotone = true;
  const auto& recs = out.series.records;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].E > recs[i - 1].E * (1.0 + 1e-8)) monotone = false;
  }

  json& s = out.summary;
  s["fingerprint"] = out.series.fingerprint;
  s["config"] = to_json(cfg);
  s["records"] = recs.size();
  if (!recs.empty()) {
    s["initial"] = record_json(recs.front());
    s["final"] = record_json(recs.back());
  }
  s["energy_nonincreasing"] = monotone;
  s["energy_identity_residual"] = energy_identity_residual(out.series);
  s["energy_sandwich"] = {{"slack", 1e-6},
                          {"lower_violations", lower_bad},
                          {"upper_violations", upper_bad}};
  s["classification"] = to_json(out.report);
  if (out.analysis) {
    s["analysis"] = out.analysis->to_json();
  } else {
    s["analysis"] = nullptr;
    s["analysis_error"] = out.analysis_error;
  }
  if (!files.summary.empty()) {
    std::ofstream f(files.summary, std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, fmt::format("cannot write {}", files.summary.string()));
    f << s.dump(2) << '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

bool SweepResult::all_completed() const {
  return std::all_of(points.begin(), points.end(),
                     [](const SweepPoint& p) { return p.status == "ok"; });
}

ScenarioConfig apply_sweep_point(const ScenarioConfig& cfg,
                                 const std::vector<std::pair<std::string, double>>& assignment) {
  ScenarioConfig c = cfg;
  auto set_exponent = [](TimeFunction& f, double e) {
    if (const auto* pw = std::get_if<TimeFunction::Power>(&f.repr())) {
      f = TimeFunction::power(pw->scale, e);
    } else if (const auto* ds = std::get_if<TimeFunction::DecayingSinusoid>(&f.repr())) {
      f = TimeFunction::decaying_sinusoid(ds->scale, e, ds->omega);
    }
  };
  for (const auto& [name, value] : assignment) {
    if (name == "m") {
      c.growth.m = value;
      set_exponent(c.phi, value);
    } else if (name == "n") {
      c.growth.n = value;
      set_exponent(c.alpha, value);
    } else if (name == "lambda") {
      c.growth.lambda = value;
      set_exponent(c.b, value);
    } else if (name == "k") {
      c.params.k = value;
    } else if (name == "b0") {
      c.params.b0 = value;
    } else {
      invalid(fmt::format("unknown sweep axis '{}'", name));
    }
  }
  return c;
}

SweepResult run_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                      unsigned jobs) {
  SweepResult result;
  std::size_t total = 1;
  for (const auto& [name, values] : cfg.sweep_axes) {
    result.axes.push_back(name);
    total *= values.size();
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));

  result.points.resize(total);
  parallel_for(total, jobs, [&](std::size_t index) {
    SweepPoint& pt = result.points[index];
    pt.index = index;
    std::vector<std::pair<std::string, double>> assignment;
    std::size_t rem = index;
    std::vector<std::size_t> digits(cfg.sweep_axes.size());
    for (std::size_t a = cfg.sweep_axes.size(); a-- > 0;) {
      const auto n = cfg.sweep_axes[a].second.size();
      digits[a] = rem % n;
      rem /= n;
    }
    for (std::size_t a = 0; a < cfg.sweep_axes.size(); ++a) {
      const double v = cfg.sweep_axes[a].second[digits[a]];
      assignment.emplace_back(cfg.sweep_axes[a].first, v);
      pt.values.push_back(v);
    }
    try {
      ScenarioConfig pc = apply_sweep_point(cfg, assignment);
      pc.sweep_axes.clear();
      pc.seed = field_seed(cfg.seed, index);
      const auto dir = out_dir / fmt::format("point_{:03d}", index);
      std::filesystem::create_directories(dir);
      {
        std::ofstream f(dir / "config.json", std::ios::trunc);
        f << to_json(pc).dump(2) << '\n';
      }
      validate_config(pc);
      const RiserModel model = build_model(pc);
      pt.report = classify(model, classify_options(pc, model));
      RunFiles files;
      files.csv = dir / "series.csv";
      files.summary = dir / "summary.json";
      if (pc.checkpoint_stride > 0) files.checkpoint = dir / "series.ckpt";
      auto run = run_scenario(pc, files);
      pt.analysis = std::move(run.analysis);
    } catch (const std::exception& e) {
      pt.status = fmt::format("error: {}", e.what());
      log::error("sweep point {}: {}", index, e.what());
    }
  });

  std::ofstream csv(out_dir / "sweep.csv", std::ios::trunc);
  if (!csv) throw Error(ErrorCode::Io, "cannot write sweep.csv");
  csv << "point";
  for (const auto& a : result.axes) csv << ',' << a;
  csv << ",status,rigidity_ok,condK_ok,condD_ok,drag_floor_ok,m_lt_half,n_lt_minus_m,lambda_ok,"
         "remark_m_minus_n_negative,remark_m_negative,decay_guaranteed,fitted_exponent,"
         "predicted_proof,predicted_theorem,verdict\n";
  auto flag = [](bool b) { return b ? "1" : "0"; };
  for (const auto& pt : result.points) {
    csv << pt.index;
    for (double v : pt.values) csv << ',' << fmt::format("{:.17g}", v);
    const bool ok = pt.status == "ok";
    std::string status = ok ? "ok" : "error";
    csv << ',' << status;
    const auto& r = pt.report;
    csv << ',' << flag(r.rigidity_ok) << ',' << flag(r.cond_k.overall) << ','
        << flag(r.cond_d.overall) << ',' << flag(r.drag_floor.overall) << ','
        << flag(r.growth.m_lt_half) << ',' << flag(r.growth.n_lt_minus_m) << ','
        << flag(r.growth.lambda_ok) << ',' << flag(r.growth.remark_m_minus_n_negative) << ','
        << flag(r.growth.remark_m_negative) << ',' << flag(r.decay_guaranteed);
    if (pt.analysis) {
      const auto& v = pt.analysis->verdict;
      csv << ',' << (pt.analysis->fit ? fmt::format("{:.17g}", pt.analysis->fit->fitted_exponent)
                                      : std::string("underflow"));
      csv << ',' << fmt::format("{:.17g}", v.predicted.proof) << ','
          << fmt::format("{:.17g}", v.predicted.theorem) << ',' << (v.pass ? "PASS" : "FAIL");
    } else {
      csv << ",,,,NA";
    }
    csv << '\n';
  }
  return result;
}

}  // namespace riser

#include "riser/conditions.hpp"

#include <cmath>
#include <limits>

#include "riser/diagnostics.hpp"
#include "riser/error.hpp"

namespace riser {

void SampledVerdict::push(double time, bool good) {
  t.push_back(time);
  ok.push_back(good);
  if (!good) {
    overall = false;
    ++violations;
    if (!first_violation) first_violation = time;
  }
}

std::vector<double> sample_times(double t_end, std::size_t count) {
  if (count < 2) count = 2;
  const double horizon = t_end > 0.0 ? t_end : 1.0;
  std::vector<double> out(count);
  const double top = std::log1p(horizon);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::expm1(frac * top);
  }
  out.back() = horizon;
  return out;
}

double cond_k_lhs(double phi, double alpha) {
  if (alpha == 0.0) return phi == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (2.0 * std::abs(alpha) * phi + phi * phi) / (alpha * alpha);
}

double cond_k_rhs(const AnalysisConstants& c, double h) {
  if (c.a_max_abs <= 0.0) return std::numeric_limits<double>::infinity();
  return c.k0 / (c.delta * c.a_max_abs * h);
}

SampledVerdict check_cond_k(const Drive& drive, const AnalysisConstants& c, double h,
                            std::span<const double> t_samples) {
  SampledVerdict out;
  const double rhs = cond_k_rhs(c, h);
  for (double t : t_samples) {
    const double phi = drive.phi.value(t);
    const double alpha = drive.alpha.value(t);
    // alpha = phi = 0: no boundary motion to bound.
    const bool good = (alpha == 0.0 && phi == 0.0) || cond_k_lhs(phi, alpha) <= rhs;
    out.push(t, good);
  }
  return out;
}

std::string_view to_string(CondDStatus s) {
  switch (s) {
    case CondDStatus::Satisfied: return "satisfied";
    case CondDStatus::Boundary: return "boundary";
    case CondDStatus::Violated: return "violated";
  }
  return "violated";
}

SampledVerdict check_cond_d(const Drive& drive, double a_h, const Parameters& params,
                            std::span<const double> t_samples) {
  SampledVerdict out;
  for (double t : t_samples) {
    const DriveSample bc{drive.phi.value(t), drive.phi.derivative(t), drive.alpha.value(t)};
    out.push(t, boundary_work_rate(bc, a_h, params) < 0.0);
  }
  return out;
}

CondDStatus cond_d_status(const Drive& drive, double a_h, const Parameters& params,
                          std::span<const double> t_samples) {
  bool strict = true;
  for (double t : t_samples) {
    const DriveSample bc{drive.phi.value(t), drive.phi.derivative(t), drive.alpha.value(t)};
    const double d = boundary_work_rate(bc, a_h, params);
    if (d > 0.0 || !std::isfinite(d)) return CondDStatus::Violated;
    if (d == 0.0) strict = false;
  }
  return strict ? CondDStatus::Satisfied : CondDStatus::Boundary;
}

GrowthVerdict check_growth(const GrowthSpec& spec, double p) {
  if (!(spec.iota > 0.0)) throw Error(ErrorCode::InvalidArgument, "iota must be positive");
  GrowthVerdict v;
  v.m_lt_half = spec.m < 0.5;
  v.n_lt_minus_m = spec.n < -spec.m;
  v.lambda_bound = (p + 1.0 - spec.iota) / (p + 2.0);
  v.lambda_ok = spec.lambda <= v.lambda_bound;
  v.remark_m_minus_n_negative = spec.m - spec.n < 0.0;
  v.remark_m_negative = spec.m < 0.0;
  return v;
}

SampledVerdict check_drag_floor(const TimeFunction& b, double b0, std::span<const double> t_samples) {
  SampledVerdict out;
  for (double t : t_samples) out.push(t, b.value(t) >= b0);
  return out;
}

SampledVerdict check_growth_bounds(const RiserModel& model, const GrowthSpec& spec,
                                   std::span<const double> t_samples) {
  SampledVerdict out;
  for (double t : t_samples) {
    if (t < 1.0) continue;
    const bool good = model.drive.phi.value(t) < spec.M1 * std::pow(t, spec.m) &&
                      model.drive.alpha.value(t) < spec.M2 * std::pow(t, spec.n) &&
                      model.drag.value(t) <= spec.M3 * std::pow(t, spec.lambda);
    out.push(t, good);
  }
  return out;
}

HypothesisReport classify(const RiserModel& model, const ClassifyOptions& opts) {
  HypothesisReport rep;
  const auto& params = model.params;
  const auto samples = sample_times(opts.t_end, std::max<std::size_t>(opts.samples, 100));
  rep.t_first = samples.front();
  rep.t_last = samples.back();
  rep.sample_count = samples.size();

  AnalysisConstants c;
  c.delta = opts.delta;
  c.sigma = opts.sigma;
  c.a_max_abs = model.tension.a_max_abs();
  c.k0 = params.k - 4.0 * c.a_max_abs * params.h * params.h;
  rep.k0 = c.k0;
  rep.sigma = opts.sigma;
  rep.sigma_min = c.a_max_abs > 0.0 ? 8.0 * params.h / std::sqrt(c.a_max_abs) : 0.0;
  c.mu = opts.sigma - rep.sigma_min;
  try {
    derive_constants(params, model.tension, opts.delta, opts.sigma);
    rep.rigidity_ok = true;
    rep.sigma_ok = true;
  } catch (const Error& e) {
    rep.constants_message = e.what();
    rep.rigidity_ok = c.k0 > 0.0;
    rep.sigma_ok = c.mu > 0.0;
  }

  rep.cond_k = check_cond_k(model.drive, c, params.h, samples);
  rep.cond_d = check_cond_d(model.drive, model.tension.a_h(), params, samples);
  rep.cond_d_status = cond_d_status(model.drive, model.tension.a_h(), params, samples);
  rep.drag_floor = check_drag_floor(model.drag, params.b0, samples);
  rep.growth = check_growth(opts.growth, params.p);
  rep.growth_bounds = check_growth_bounds(model, opts.growth, samples);
  rep.g3_positive = params.g3() > 0.0;

  const bool base = rep.rigidity_ok && rep.cond_k.overall && rep.drag_floor.overall;
  rep.lyapunov_guaranteed = base && rep.cond_d_status == CondDStatus::Satisfied;
  rep.decay_guaranteed = rep.lyapunov_guaranteed && rep.sigma_ok && rep.growth.theorem_ok() &&
                         rep.growth_bounds.overall;
  if (rep.decay_guaranteed) {
    rep.summary = "decay guaranteed: stability and growth hypotheses hold";
  } else if (rep.lyapunov_guaranteed) {
    rep.summary = "energy stability guaranteed; growth hypotheses fail, decay rate not guaranteed";
  } else if (base && rep.cond_d_status == CondDStatus::Boundary) {
    rep.summary =
        "energy stability guaranteed (boundary case: d_t <= 0 with zeros, energy still "
        "nonincreasing)";
  } else {
    rep.summary = "outside hypotheses - simulation exploratory";
  }
  return rep;
}

}  // namespace riser

#include "riser/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "riser/error.hpp"

namespace riser {

PredictedExponents predicted_exponents(const GrowthSpec& spec, double p) {
  const double common = std::max({spec.m + spec.n, 2.0 * spec.m - 1.0, -spec.iota / (p + 2.0)});
  const double stated = -2.0 / (p + 1.0);
  const double derived = -2.0 / (p + 2.0);
  PredictedExponents out;
  out.theorem = std::max(common, stated);
  out.proof = std::max(common, derived);
  out.discrepancy = out.theorem != out.proof;
  out.vacuous = out.proof >= 0.0;
  return out;
}

FitWindow default_window(double t_end, double fraction) {
  FitWindow w;
  w.fraction = fraction;
  w.t_min = std::max(1.0, t_end / 10.0);
  return w;
}

DecayFit fit_tail(const TimeSeries& series, const FitWindow& window) {
  const auto& recs = series.records;
  if (recs.empty()) throw Error(ErrorCode::WindowTooSmall, "series is empty");
  if (!(window.fraction > 0.0 && window.fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fit window fraction must lie in (0, 1]");
  }

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].t >= window.t_min && recs[i].t > 0.0) eligible.push_back(i);
  }
  const auto keep = static_cast<std::size_t>(
      std::ceil(window.fraction * static_cast<double>(eligible.size())));
  if (keep < window.min_records) {
    throw Error(ErrorCode::WindowTooSmall,
                fmt::format("tail window holds {} records, need at least {}", keep,
                            window.min_records));
  }
  const std::size_t begin = eligible.size() - keep;

  const double floor = window.floor_ratio * recs.front().E;
  std::vector<double> x, y;
  x.reserve(keep);
  y.reserve(keep);
  for (std::size_t j = begin; j < eligible.size(); ++j) {
    const auto& r = recs[eligible[j]];
    if (!(r.E > floor) || !(r.E > 0.0)) {
      throw Error(ErrorCode::EnergyUnderflow,
                  fmt::format("E({}) = {} is at or below the floor {}", r.t, r.E, floor));
    }
    x.push_back(std::log(r.t));
    y.push_back(std::log(r.E));
  }

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::WindowTooSmall, "tail window spans a single time");

  DecayFit fit;
  fit.fitted_exponent = sxy / sxx;
  fit.intercept = my - fit.fitted_exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.fitted_exponent * x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.t_start = recs[eligible[begin]].t;
  fit.t_stop = recs[eligible.back()].t;
  fit.records = x.size();
  return fit;
}

DecayVerdict verdict(const DecayFit& fit, const PredictedExponents& predicted, double tolerance) {
  DecayVerdict v;
  v.fitted_exponent = fit.fitted_exponent;
  v.predicted = predicted;
  v.tolerance = tolerance;
  v.margin_proof = predicted.proof + tolerance - fit.fitted_exponent;
  v.margin_theorem = predicted.theorem + tolerance - fit.fitted_exponent;
  v.pass = v.margin_proof >= 0.0;
  if (predicted.vacuous) v.note = "bound vacuous: predicted exponent is not negative";
  return v;
}

DecayVerdict underflow_verdict(const PredictedExponents& predicted, double tolerance) {
  DecayVerdict v;
  v.pass = true;
  v.underflow = true;
  v.fitted_exponent = -std::numeric_limits<double>::infinity();
  v.predicted = predicted;
  v.tolerance = tolerance;
  v.margin_proof = std::numeric_limits<double>::infinity();
  v.margin_theorem = std::numeric_limits<double>::infinity();
  v.note = "decay exceeded measurement floor";
  return v;
}

}  // namespace riser

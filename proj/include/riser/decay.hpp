#pragma once

// Tail power-law fit of E(t) and comparison with the predicted decay exponent.

#include <string>

#include "riser/diagnostics.hpp"
#include "riser/model.hpp"

namespace riser {

struct PredictedExponents {
  double theorem = 0.0;  ///< max(m+n, 2m-1, -iota/(p+2), -2/(p+1))
  double proof = 0.0;    ///< max(m+n, 2m-1, -iota/(p+2), -2/(p+2))
  /// The two versions select different maxima (only when the last term is active).
  bool discrepancy = false;
  /// proof >= 0: no decay is implied.
  bool vacuous = false;
};

PredictedExponents predicted_exponents(const GrowthSpec& spec, double p);

struct FitWindow {
  double fraction = 0.5;        ///< keep the last `fraction` of eligible records
  double t_min = 1.0;           ///< eligible records have t >= t_min
  double floor_ratio = 1e-14;   ///< E must stay above floor_ratio * E(0)
  std::size_t min_records = 10;
};

/// Window used when the configuration does not override it:
/// t >= max(1, t_end / 10), last half.
FitWindow default_window(double t_end, double fraction = 0.5);

struct DecayFit {
  double fitted_exponent = 0.0;
  double intercept = 0.0;  ///< log M
  double residual = 0.0;   ///< RMSE of the log-log fit
  double t_start = 0.0;
  double t_stop = 0.0;
  std::size_t records = 0;
};

/// Least-squares slope of log E against log t.
/// Throws WindowTooSmall or EnergyUnderflow.
DecayFit fit_tail(const TimeSeries& series, const FitWindow& window);

struct DecayVerdict {
  bool pass = false;
  bool underflow = false;
  double fitted_exponent = 0.0;
  PredictedExponents predicted;
  double tolerance = 0.0;
  double margin_proof = 0.0;    ///< predicted.proof + tol - fitted (>= 0 passes)
  double margin_theorem = 0.0;  ///< predicted.theorem + tol - fitted
  std::string note;
};

/// PASS when fitted <= predicted.proof + tolerance.
DecayVerdict verdict(const DecayFit& fit, const PredictedExponents& predicted, double tolerance);
/// Energy fell below the measurement floor; faster than any polynomial bound.
DecayVerdict underflow_verdict(const PredictedExponents& predicted, double tolerance);

}  // namespace riser

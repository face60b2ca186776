#pragma once

// Sampled checks of the structural-stability hypotheses: rigidity margin,
// the boundary-motion constraint tying (phi, alpha) to k0, negativity of the
// boundary work rate, the drag floor, and the polynomial growth exponents.
//
// "For all t" is checked on a declared sample set; strict inequalities are
// compared with zero tolerance at each sample.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riser/model.hpp"

namespace riser {

struct SampledVerdict {
  std::vector<double> t;
  std::vector<bool> ok;
  bool overall = true;  ///< conjunction of ok
  std::size_t violations = 0;
  std::optional<double> first_violation;

  void push(double time, bool good);
};

/// Default sampling: `count` points log-spaced on [0, t_end], t_i = (1+t_end)^(i/(count-1)) - 1.
/// A zero horizon is widened to [0, 1].
std::vector<double> sample_times(double t_end, std::size_t count = 1000);

/// Left-hand side (2|alpha| phi + phi^2) / alpha^2 of the boundary-motion
/// constraint; +inf when alpha = 0 < phi and 0 when alpha = phi = 0.
double cond_k_lhs(double phi, double alpha);
/// Right-hand side k0 / (delta a_max h); +inf when a_max = 0.
double cond_k_rhs(const AnalysisConstants& c, double h);

SampledVerdict check_cond_k(const Drive& drive, const AnalysisConstants& c, double h,
                            std::span<const double> t_samples);

enum class CondDStatus { Satisfied, Boundary, Violated };
std::string_view to_string(CondDStatus s);

/// Per-sample verdict is strict negativity of the boundary work rate.
SampledVerdict check_cond_d(const Drive& drive, double a_h, const Parameters& params,
                            std::span<const double> t_samples);
/// Satisfied when every sample is strictly negative, Boundary when none is
/// positive but some vanish (the energy is still nonincreasing), else Violated.
CondDStatus cond_d_status(const Drive& drive, double a_h, const Parameters& params,
                          std::span<const double> t_samples);

struct GrowthVerdict {
  bool m_lt_half = false;
  bool n_lt_minus_m = false;
  bool lambda_ok = false;
  double lambda_bound = 0.0;  ///< (p + 1 - iota) / (p + 2)
  bool remark_m_minus_n_negative = false;
  bool remark_m_negative = false;

  bool theorem_ok() const { return m_lt_half && n_lt_minus_m && lambda_ok; }
  bool remark_ok() const { return remark_m_minus_n_negative && remark_m_negative; }
};

GrowthVerdict check_growth(const GrowthSpec& spec, double p);

SampledVerdict check_drag_floor(const TimeFunction& b, double b0, std::span<const double> t_samples);

/// phi < M1 t^m, alpha < M2 t^n, b <= M3 t^lambda at the samples with t >= 1.
SampledVerdict check_growth_bounds(const RiserModel& model, const GrowthSpec& spec,
                                   std::span<const double> t_samples);

struct HypothesisReport {
  bool rigidity_ok = false;
  double k0 = 0.0;
  bool sigma_ok = false;
  double sigma = 0.0;
  double sigma_min = 0.0;
  std::string constants_message;  ///< non-empty when constant derivation failed

  SampledVerdict cond_k;
  SampledVerdict cond_d;
  CondDStatus cond_d_status = CondDStatus::Violated;
  SampledVerdict drag_floor;
  GrowthVerdict growth;
  SampledVerdict growth_bounds;

  bool g3_positive = false;  ///< reported only; g3 <= 0 is not rejected
  double t_first = 0.0;
  double t_last = 0.0;
  std::size_t sample_count = 0;

  bool lyapunov_guaranteed = false;
  bool decay_guaranteed = false;
  std::string summary;
};

struct ClassifyOptions {
  double delta = 2.0;
  double sigma = 0.0;
  GrowthSpec growth;
  double t_end = 1.0;
  std::size_t samples = 1000;
};

/// Deterministic and side-effect free. Constant-derivation failures are
/// reported in the result rather than thrown.
HypothesisReport classify(const RiserModel& model, const ClassifyOptions& opts);

}  // namespace riser

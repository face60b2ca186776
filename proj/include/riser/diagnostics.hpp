#pragma once

// Functionals tracked along a trajectory. Depth integrals are multiplied by
// the cross-section area A = pi rho^2 so that they equal volume integrals over
// a cylinder carrying a depth-only field.

#include <span>
#include <string>
#include <vector>

#include "riser/model.hpp"

namespace riser {

struct DiagnosticsRecord {
  double t = 0.0;
  double E = 0.0;            ///< energy
  double I_b = 0.0;          ///< drag dissipation rate
  double d_t = 0.0;          ///< boundary work rate
  double r = 0.0;            ///< boundary term of the u-multiplier identity
  double H = 0.0;            ///< A int(u v) + sigma E
  double q = 0.0;            ///< A (2 phi alpha + phi^2)
  double norm_u_sq = 0.0;
  double norm_v_sq = 0.0;
  double norm_uzz_sq = 0.0;
  double max_abs_u = 0.0;
};

/// Column order of the time-series CSV.
inline constexpr const char* kRecordColumns[] = {
    "t", "E", "I_b", "d_t", "r", "H", "q", "norm_u_sq", "norm_v_sq", "norm_uzz_sq", "max_abs_u"};

struct TimeSeries {
  std::vector<DiagnosticsRecord> records;
  std::string fingerprint;
};

/// Composite trapezoid over the N+1 nodes (no area factor).
double quad_1d(std::span<const double> f, const Grid1D& grid);

struct EnergyParts {
  double kinetic = 0.0;
  double bending = 0.0;  ///< k ||u_zz||^2 part
  double tension = 0.0;  ///< int a u_z^2 part
  double total() const { return 0.5 * (kinetic + bending + tension); }
};

/// Pieces of E, each already multiplied by A.
///
/// The tension integral uses the cell midpoint rule on forward differences,
/// which is the quadratic form the flux-form operator is the gradient of.
EnergyParts energy_parts(const FieldState& state, const RiserModel& model, double alpha);
double energy(const FieldState& state, const RiserModel& model, double alpha);

/// A b(t) int |v|^{p+2}; never negative.
double drag_rate(const FieldState& state, double b, const Parameters& params, const Grid1D& grid);

/// A (a_h phi_t alpha - g3/2 phi_t^2). Depends on the boundary data only.
double boundary_work_rate(const DriveSample& bc, double a_h, const Parameters& params);

/// A (a_h alpha phi - g3 phi phi_t).
double r_term(const DriveSample& bc, double a_h, const Parameters& params);

/// A (2 phi alpha + phi^2), signed alpha.
double q_term(const DriveSample& bc, const Parameters& params);

/// A int(u v) + sigma E.
double h_functional(const FieldState& state, double E, double sigma, const Parameters& params,
                    const Grid1D& grid);

struct SandwichCheck {
  double lower = 0.0;
  double two_e = 0.0;
  double upper = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
};

/// Two-sided bound
///   ||v||^2 + k0 (delta-1)/delta ||u_zz||^2 <= 2E
///     <= ||v||^2 + ((delta+1) k + (delta-1) 4 a_max h^2)/delta ||u_zz||^2
/// with A-weighted norms. `slack` is relative to the side being compared.
SandwichCheck energy_sandwich(double norm_v_sq, double norm_uzz_sq, double E,
                              const AnalysisConstants& c, const Parameters& params,
                              double slack = 0.0);
SandwichCheck energy_sandwich(const FieldState& state, double E, const AnalysisConstants& c,
                              const RiserModel& model, double alpha, double slack = 0.0);

DiagnosticsRecord diagnose(const FieldState& state, const RiserModel& model, double sigma);

/// Trapezoid-in-time integral of I_b over the recorded series, one value per record.
std::vector<double> accumulated_drag(const TimeSeries& series);

/// sum_i |(E_{i+1}-E_i)/dt_i + mean(I_b) - mean(d_t)| dt_i over consecutive records.
double energy_identity_residual(const TimeSeries& series);

}  // namespace riser

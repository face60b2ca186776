#pragma once

// Physical parameters, coefficient functions and discrete state of the
// one-dimensional riser model
//
//   u_tt + k u_zzzz - (a(z) u_z)_z + g3 u_tz + b(t) |u_t|^p u_t = 0,
//   u(0) = u_z(0) = 0,  u(h) = phi(t),  u_z(h) = alpha(t).

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riser {

/// Physical constants. Units are documented, not enforced.
struct Parameters {
  double k = 1.0;                            ///< flexural rigidity
  double p = 1.0;                            ///< drag exponent, p >= 1
  std::array<double, 3> g{0.0, 0.0, 0.0};    ///< Coriolis vector; only g[2] is active in 1D
  double rho = 1.0;                          ///< cylinder radius
  double h = 1.0;                            ///< riser height, h > 1/2
  double b0 = 1.0;                           ///< drag coefficient floor

  /// Cross-section area pi*rho^2; converts depth integrals to volume integrals.
  double area() const;
  double g3() const { return g[2]; }

  /// Throws Error{Validation} on the first broken invariant.
  void validate() const;
};

/// Scalar function of one variable used for phi(t), alpha(t), b(t) and a(z).
///
/// Parametric kinds are shifted, (1+t)^e rather than t^e, so they stay finite
/// at the origin.
class TimeFunction {
 public:
  struct Constant {
    double value = 0.0;
  };
  /// scale * (1+t)^exponent
  struct Power {
    double scale = 1.0;
    double exponent = 0.0;
  };
  /// scale * (1+t)^exponent * (2 + sin(omega t)) / 3
  struct DecayingSinusoid {
    double scale = 1.0;
    double exponent = 0.0;
    double omega = 1.0;
  };
  /// Piecewise-linear interpolation of samples; clamped outside the range.
  struct Table {
    std::vector<double> t;
    std::vector<double> v;
  };
  /// sum_j coeffs[j] * t^j
  struct Polynomial {
    std::vector<double> coeffs;
  };

  using Repr = std::variant<Constant, Power, DecayingSinusoid, Table, Polynomial>;

  TimeFunction() : repr_(Constant{0.0}) {}
  explicit TimeFunction(Repr repr);

  static TimeFunction constant(double value) { return TimeFunction(Constant{value}); }
  static TimeFunction power(double scale, double exponent) {
    return TimeFunction(Power{scale, exponent});
  }
  static TimeFunction decaying_sinusoid(double scale, double exponent, double omega) {
    return TimeFunction(DecayingSinusoid{scale, exponent, omega});
  }
  static TimeFunction table(std::vector<double> t, std::vector<double> v);
  static TimeFunction polynomial(std::vector<double> coeffs) {
    return TimeFunction(Polynomial{std::move(coeffs)});
  }

  double value(double t) const;
  /// Exact for parametric kinds, centered difference for tables.
  double derivative(double t) const;

  const Repr& repr() const { return repr_; }
  std::string kind_name() const;
  bool is_table() const { return std::holds_alternative<Table>(repr_); }

 private:
  Repr repr_;
};

struct Grid1D {
  double h = 1.0;
  std::size_t N = 8;

  Grid1D() = default;
  /// Throws Error{InvalidArgument} unless N >= 8 and h > 0.
  Grid1D(double h, std::size_t N);
  /// Small grids for oracle comparisons; the stencils need N >= 4.
  static Grid1D small(double h, std::size_t N) { return Grid1D(h, N, 4); }

  double dz() const { return h / static_cast<double>(N); }
  double z(std::size_t i) const {
    return i == N ? h : static_cast<double>(i) * dz();
  }
  std::size_t nodes() const { return N + 1; }
  std::vector<double> positions() const;

 private:
  Grid1D(double h, std::size_t N, std::size_t min_N);
};

/// Effective tension coefficient a(z) together with its extremal data.
class TensionProfile {
 public:
  TensionProfile() = default;
  /// Samples a_max_abs on max(10^4, 100 N) uniform points plus every grid node.
  TensionProfile(TimeFunction a, const Grid1D& grid);

  double operator()(double z) const { return a_.value(z); }
  double a_h() const { return a_h_; }
  double a_max_abs() const { return a_max_abs_; }
  const TimeFunction& function() const { return a_; }

  /// a at the cell midpoints z_{i+1/2}, i = 0..N-1.
  std::vector<double> midpoint_values(const Grid1D& grid) const;

 private:
  TimeFunction a_;
  double a_h_ = 0.0;
  double a_max_abs_ = 0.0;
};

/// Constants used by the energy bounds and the auxiliary functional H.
struct AnalysisConstants {
  double delta = 2.0;
  double sigma = 0.0;
  double k0 = 0.0;  ///< k - 4 a_max h^2
  double mu = 0.0;  ///< sigma - 8 h / sqrt(a_max)
  double a_max_abs = 0.0;
};

/// Default sigma is twice the admissible lower bound 8h/sqrt(a_max).
double default_sigma(const Parameters& params, const TensionProfile& a);

/// Throws RigidityViolated when k0 <= 0 and SigmaTooSmall when
/// sigma <= 8h/sqrt(a_max). With a_max = 0 the sigma bound is vacuous.
AnalysisConstants derive_constants(const Parameters& params, const TensionProfile& a,
                                   double delta, double sigma);

/// Growth exponents and constants of the polynomial growth hypotheses.
struct GrowthSpec {
  double m = 0.0;
  double n = 0.0;
  double lambda = 0.0;
  double iota = 0.1;
  double M1 = 1.0;
  double M2 = 1.0;
  double M3 = 1.0;
};

/// Top-end boundary data: displacement phi(t) and slope alpha(t).
struct Drive {
  TimeFunction phi;
  TimeFunction alpha;
};

struct DriveSample {
  double phi = 0.0;
  double phi_t = 0.0;
  double alpha = 0.0;
};

/// Throws NegativePhi when phi(t) < 0.
DriveSample evaluate_drive(const Drive& drive, double t);

/// Everything the solver and the diagnostics need about one riser.
struct RiserModel {
  Parameters params;
  Grid1D grid;
  TensionProfile tension;
  TimeFunction drag;  ///< b(t)
  Drive drive;
};

struct FieldState {
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;

  static FieldState zeros(const Grid1D& grid, double t = 0.0);
};

/// Clamped bottom and prescribed top: u[0] = v[0] = 0, u[N] = phi, v[N] = phi_t.
void apply_boundary(FieldState& state, const DriveSample& bc);

/// True when the clamped/driven boundary values hold exactly and all entries are finite.
bool boundary_consistent(const FieldState& state, const DriveSample& bc);

}  // namespace riser

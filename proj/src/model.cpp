#include "riser/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "riser/error.hpp"

namespace riser {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::RigidityViolated: return "RigidityViolated";
    case ErrorCode::SigmaTooSmall: return "SigmaTooSmall";
    case ErrorCode::NegativePhi: return "NegativePhi";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::PicardStalled: return "PicardStalled";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::EnergyUnderflow: return "EnergyUnderflow";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double Parameters::area() const { return std::numbers::pi * rho * rho; }

void Parameters::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::Validation, msg); };
  if (!(std::isfinite(k) && k > 0.0)) fail(fmt::format("k must be positive, got {}", k));
  if (!(std::isfinite(p) && p >= 1.0)) fail(fmt::format("p must be >= 1, got {}", p));
  if (!(std::isfinite(rho) && rho > 0.0)) fail(fmt::format("rho must be positive, got {}", rho));
  if (!(std::isfinite(h) && h > 0.5)) fail(fmt::format("h must exceed 1/2, got {}", h));
  if (!(std::isfinite(b0) && b0 > 0.0)) fail(fmt::format("b0 must be positive, got {}", b0));
  for (double gi : g) {
    if (!std::isfinite(gi)) fail("g components must be finite");
  }
}

// ---------------------------------------------------------------------------
// TimeFunction

TimeFunction::TimeFunction(Repr repr) : repr_(std::move(repr)) {
  if (const auto* tab = std::get_if<Table>(&repr_)) {
    if (tab->t.size() != tab->v.size() || tab->t.empty()) {
      throw Error(ErrorCode::InvalidArgument, "table needs equally sized, nonempty t and v");
    }
    for (std::size_t i = 1; i < tab->t.size(); ++i) {
      if (!(tab->t[i] > tab->t[i - 1])) {
        throw Error(ErrorCode::InvalidArgument, "table abscissae must be strictly increasing");
      }
    }
  }
}

TimeFunction TimeFunction::table(std::vector<double> t, std::vector<double> v) {
  return TimeFunction(Table{std::move(t), std::move(v)});
}

namespace {

double table_value(const TimeFunction::Table& tab, double t) {
  if (t <= tab.t.front()) return tab.v.front();
  if (t >= tab.t.back()) return tab.v.back();
  const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
  const auto j = static_cast<std::size_t>(it - tab.t.begin());
  const double w = (t - tab.t[j - 1]) / (tab.t[j] - tab.t[j - 1]);
  return (1.0 - w) * tab.v[j - 1] + w * tab.v[j];
}

}  // namespace

double TimeFunction::value(double t) const {
  return std::visit(
      [t](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return f.value;
        } else if constexpr (std::is_same_v<T, Power>) {
          return f.scale * std::pow(1.0 + t, f.exponent);
        } else if constexpr (std::is_same_v<T, DecayingSinusoid>) {
          return f.scale * std::pow(1.0 + t, f.exponent) * (2.0 + std::sin(f.omega * t)) / 3.0;
        } else if constexpr (std::is_same_v<T, Table>) {
          return table_value(f, t);
        } else {
          double acc = 0.0;
          for (auto c = f.coeffs.rbegin(); c != f.coeffs.rend(); ++c) acc = acc * t + *c;
          return acc;
        }
      },
      repr_);
}

double TimeFunction::derivative(double t) const {
  return std::visit(
      [t](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Power>) {
          return f.scale * f.exponent * std::pow(1.0 + t, f.exponent - 1.0);
        } else if constexpr (std::is_same_v<T, DecayingSinusoid>) {
          const double base = std::pow(1.0 + t, f.exponent);
          return f.scale *
                 (f.exponent * base / (1.0 + t) * (2.0 + std::sin(f.omega * t)) +
                  base * f.omega * std::cos(f.omega * t)) /
                 3.0;
        } else if constexpr (std::is_same_v<T, Table>) {
          const double eta = 1e-6 * (1.0 + std::abs(t));
          return (table_value(f, t + eta) - table_value(f, t - eta)) / (2.0 * eta);
        } else {
          double acc = 0.0;
          for (std::size_t j = f.coeffs.size(); j-- > 1;) {
            acc = acc * t + static_cast<double>(j) * f.coeffs[j];
          }
          return acc;
        }
      },
      repr_);
}

std::string TimeFunction::kind_name() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) return "constant";
        else if constexpr (std::is_same_v<T, Power>) return "power";
        else if constexpr (std::is_same_v<T, DecayingSinusoid>) return "decaying_sinusoid";
        else if constexpr (std::is_same_v<T, Table>) return "table";
        else return "polynomial";
      },
      repr_);
}

// ---------------------------------------------------------------------------
// Grid and tension

Grid1D::Grid1D(double h_, std::size_t N_) : Grid1D(h_, N_, 8) {}

Grid1D::Grid1D(double h_, std::size_t N_, std::size_t min_N) : h(h_), N(N_) {
  if (min_N < 4) min_N = 4;
  if (N < min_N) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("grid needs N >= {}, got {}", min_N, N));
  }
  if (!(std::isfinite(h) && h > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("grid length must be positive, got {}", h));
  }
}

std::vector<double> Grid1D::positions() const {
  std::vector<double> z(nodes());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = this->z(i);
  return z;
}

TensionProfile::TensionProfile(TimeFunction a, const Grid1D& grid) : a_(std::move(a)) {
  const std::size_t samples = std::max<std::size_t>(10000, 100 * grid.N);
  double amax = 0.0;
  for (std::size_t j = 0; j <= samples; ++j) {
    const double z = grid.h * static_cast<double>(j) / static_cast<double>(samples);
    amax = std::max(amax, std::abs(a_.value(z)));
  }
  for (std::size_t i = 0; i <= grid.N; ++i) amax = std::max(amax, std::abs(a_.value(grid.z(i))));
  a_max_abs_ = amax;
  a_h_ = a_.value(grid.h);
  if (!std::isfinite(a_max_abs_)) {
    throw Error(ErrorCode::Validation, "tension profile is not finite on [0, h]");
  }
}

std::vector<double> TensionProfile::midpoint_values(const Grid1D& grid) const {
  std::vector<double> out(grid.N);
  const double dz = grid.dz();
  for (std::size_t i = 0; i < grid.N; ++i) out[i] = a_.value((static_cast<double>(i) + 0.5) * dz);
  return out;
}

// ---------------------------------------------------------------------------
// Constants and drive

double default_sigma(const Parameters& params, const TensionProfile& a) {
  if (a.a_max_abs() <= 0.0) return 16.0 * params.h;
  return 16.0 * params.h / std::sqrt(a.a_max_abs());
}

AnalysisConstants derive_constants(const Parameters& params, const TensionProfile& a,
                                   double delta, double sigma) {
  if (!(delta > 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("delta must exceed 1, got {}", delta));
  }
  AnalysisConstants c;
  c.delta = delta;
  c.sigma = sigma;
  c.a_max_abs = a.a_max_abs();
  c.k0 = params.k - 4.0 * c.a_max_abs * params.h * params.h;
  if (!(c.k0 > 0.0)) {
    throw Error(ErrorCode::RigidityViolated,
                fmt::format("rigidity condition k > 4 max|a| h^2 fails: k = {}, 4 max|a| h^2 = {}",
                            params.k, params.k - c.k0));
  }
  const double sigma_min =
      c.a_max_abs > 0.0 ? 8.0 * params.h / std::sqrt(c.a_max_abs) : 0.0;
  c.mu = sigma - sigma_min;
  if (!(c.mu > 0.0)) {
    throw Error(ErrorCode::SigmaTooSmall,
                fmt::format("sigma = {} must exceed 8h/sqrt(max|a|) = {}", sigma, sigma_min));
  }
  return c;
}

DriveSample evaluate_drive(const Drive& drive, double t) {
  DriveSample s{drive.phi.value(t), drive.phi.derivative(t), drive.alpha.value(t)};
  if (s.phi < 0.0) {
    throw Error(ErrorCode::NegativePhi, fmt::format("phi({}) = {} is negative", t, s.phi));
  }
  return s;
}

// ---------------------------------------------------------------------------
// State

FieldState FieldState::zeros(const Grid1D& grid, double t) {
  return FieldState{std::vector<double>(grid.nodes(), 0.0), std::vector<double>(grid.nodes(), 0.0), t};
}

void apply_boundary(FieldState& state, const DriveSample& bc) {
  state.u.front() = 0.0;
  state.v.front() = 0.0;
  state.u.back() = bc.phi;
  state.v.back() = bc.phi_t;
}

bool boundary_consistent(const FieldState& state, const DriveSample& bc) {
  if (state.u.size() != state.v.size() || state.u.empty()) return false;
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    if (!std::isfinite(state.u[i]) || !std::isfinite(state.v[i])) return false;
  }
  return state.u.front() == 0.0 && state.v.front() == 0.0 && state.u.back() == bc.phi &&
         state.v.back() == bc.phi_t;
}

}  // namespace riser

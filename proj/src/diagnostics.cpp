#include "riser/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "riser/spatial_ops.hpp"

namespace riser {

double quad_1d(std::span<const double> f, const Grid1D& grid) {
  const std::size_t N = grid.N;
  double acc = 0.5 * (f[0] + f[N]);
  for (std::size_t i = 1; i < N; ++i) acc += f[i];
  return acc * grid.dz();
}

EnergyParts energy_parts(const FieldState& state, const RiserModel& model, double alpha) {
  const auto& grid = model.grid;
  const double A = model.params.area();
  const std::size_t N = grid.N;
  const double dz = grid.dz();

  EnergyParts e;
  std::vector<double> work(grid.nodes());
  for (std::size_t i = 0; i <= N; ++i) work[i] = state.v[i] * state.v[i];
  e.kinetic = A * quad_1d(work, grid);

  const auto uzz = second_derivative(state.u, grid, alpha);
  for (std::size_t i = 0; i <= N; ++i) work[i] = uzz[i] * uzz[i];
  e.bending = A * model.params.k * quad_1d(work, grid);

  double tension = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double zm = (static_cast<double>(i) + 0.5) * dz;
    const double du = (state.u[i + 1] - state.u[i]) / dz;
    tension += model.tension(zm) * du * du;
  }
  e.tension = A * tension * dz;
  return e;
}

double energy(const FieldState& state, const RiserModel& model, double alpha) {
  return energy_parts(state, model, alpha).total();
}

double drag_rate(const FieldState& state, double b, const Parameters& params, const Grid1D& grid) {
  std::vector<double> w(grid.nodes());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double mag = std::abs(state.v[i]);
    w[i] = mag == 0.0 ? 0.0 : std::exp((params.p + 2.0) * std::log(mag));
  }
  return params.area() * b * quad_1d(w, grid);
}

double boundary_work_rate(const DriveSample& bc, double a_h, const Parameters& params) {
  return params.area() * (a_h * bc.phi_t * bc.alpha - 0.5 * params.g3() * bc.phi_t * bc.phi_t);
}

double r_term(const DriveSample& bc, double a_h, const Parameters& params) {
  return params.area() * (a_h * bc.alpha * bc.phi - params.g3() * bc.phi * bc.phi_t);
}

double q_term(const DriveSample& bc, const Parameters& params) {
  return params.area() * (2.0 * bc.phi * bc.alpha + bc.phi * bc.phi);
}

double h_functional(const FieldState& state, double E, double sigma, const Parameters& params,
                    const Grid1D& grid) {
  std::vector<double> uv(grid.nodes());
  for (std::size_t i = 0; i < uv.size(); ++i) uv[i] = state.u[i] * state.v[i];
  return params.area() * quad_1d(uv, grid) + sigma * E;
}

SandwichCheck energy_sandwich(double norm_v_sq, double norm_uzz_sq, double E,
                              const AnalysisConstants& c, const Parameters& params,
                              double slack) {
  const double d = c.delta;
  SandwichCheck s;
  s.two_e = 2.0 * E;
  s.lower = norm_v_sq + c.k0 * ((d - 1.0) / d) * norm_uzz_sq;
  s.upper = norm_v_sq +
            ((d + 1.0) * params.k + (d - 1.0) * 4.0 * c.a_max_abs * params.h * params.h) / d *
                norm_uzz_sq;
  s.lower_ok = s.lower <= s.two_e + slack * std::abs(s.lower);
  s.upper_ok = s.two_e <= s.upper + slack * std::abs(s.upper);
  return s;
}

SandwichCheck energy_sandwich(const FieldState& state, double E, const AnalysisConstants& c,
                              const RiserModel& model, double alpha, double slack) {
  const auto& grid = model.grid;
  const double A = model.params.area();
  std::vector<double> w(grid.nodes());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = state.v[i] * state.v[i];
  const double nv = A * quad_1d(w, grid);
  const auto uzz = second_derivative(state.u, grid, alpha);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = uzz[i] * uzz[i];
  const double nzz = A * quad_1d(w, grid);
  return energy_sandwich(nv, nzz, E, c, model.params, slack);
}

DiagnosticsRecord diagnose(const FieldState& state, const RiserModel& model, double sigma) {
  const auto& grid = model.grid;
  const auto& params = model.params;
  const double A = params.area();
  const DriveSample bc = evaluate_drive(model.drive, state.t);

  DiagnosticsRecord rec;
  rec.t = state.t;
  const EnergyParts parts = energy_parts(state, model, bc.alpha);
  rec.E = parts.total();
  rec.I_b = drag_rate(state, model.drag.value(state.t), params, grid);
  rec.d_t = boundary_work_rate(bc, model.tension.a_h(), params);
  rec.r = r_term(bc, model.tension.a_h(), params);
  rec.H = h_functional(state, rec.E, sigma, params, grid);
  rec.q = q_term(bc, params);

  std::vector<double> w(grid.nodes());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = state.u[i] * state.u[i];
  rec.norm_u_sq = A * quad_1d(w, grid);
  rec.norm_v_sq = parts.kinetic;
  rec.norm_uzz_sq = parts.bending / params.k;
  double umax = 0.0;
  for (double ui : state.u) umax = std::max(umax, std::abs(ui));
  rec.max_abs_u = umax;
  return rec;
}

std::vector<double> accumulated_drag(const TimeSeries& series) {
  const auto& recs = series.records;
  std::vector<double> acc(recs.size(), 0.0);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    acc[i] = acc[i - 1] + 0.5 * (recs[i].I_b + recs[i - 1].I_b) * (recs[i].t - recs[i - 1].t);
  }
  return acc;
}

double energy_identity_residual(const TimeSeries& series) {
  const auto& recs = series.records;
  double total = 0.0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double dt = recs[i].t - recs[i - 1].t;
    const double rate = (recs[i].E - recs[i - 1].E) / dt;
    const double ib = 0.5 * (recs[i].I_b + recs[i - 1].I_b);
    const double dd = 0.5 * (recs[i].d_t + recs[i - 1].d_t);
    total += std::abs(rate + ib - dd) * dt;
  }
  return total;
}

}  // namespace riser

#include "riser/spatial_ops.hpp"

#include <cmath>

#include <fmt/format.h>

#include "riser/error.hpp"

namespace riser {

void StencilWorkspace::load(std::span<const double> u, double dz, double alpha) {
  const std::size_t N = N_;
  for (std::size_t i = 0; i <= N; ++i) data_[i + 2] = u[i];
  // Mirror about z = 0 keeps u_z(0) = 0; about z = h the odd part carries alpha.
  data_[1] = u[1];
  data_[0] = u[2];
  data_[N + 3] = u[N - 1] + 2.0 * dz * alpha;
  data_[N + 4] = u[N - 2] + 4.0 * dz * alpha;
}

std::vector<double> first_derivative(std::span<const double> f, const Grid1D& grid) {
  const std::size_t N = grid.N;
  const double inv2dz = 0.5 / grid.dz();
  std::vector<double> out(N + 1);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2dz;
  for (std::size_t i = 1; i < N; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2dz;
  out[N] = (3.0 * f[N] - 4.0 * f[N - 1] + f[N - 2]) * inv2dz;
  return out;
}

void tension_divergence(std::span<const double> u, std::span<const double> a_mid,
                        const Grid1D& grid, std::span<double> out) {
  const std::size_t N = grid.N;
  const double inv_dz2 = 1.0 / (grid.dz() * grid.dz());
  out[0] = 0.0;
  out[N] = 0.0;
  for (std::size_t i = 1; i < N; ++i) {
    out[i] = (a_mid[i] * (u[i + 1] - u[i]) - a_mid[i - 1] * (u[i] - u[i - 1])) * inv_dz2;
  }
}

std::vector<double> tension_divergence(std::span<const double> u, const TensionProfile& a,
                                       const Grid1D& grid) {
  std::vector<double> out(grid.nodes());
  const auto a_mid = a.midpoint_values(grid);
  tension_divergence(u, a_mid, grid, out);
  return out;
}

void biharmonic(std::span<const double> u, const Grid1D& grid, double alpha,
                StencilWorkspace& ws, std::span<double> out) {
  const std::size_t N = grid.N;
  const double dz = grid.dz();
  const double inv_dz4 = 1.0 / (dz * dz * dz * dz);
  ws.load(u, dz, alpha);
  out[0] = 0.0;
  out[N] = 0.0;
  for (std::size_t k = 1; k < N; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    out[k] = (ws[i - 2] - 4.0 * ws[i - 1] + 6.0 * ws[i] - 4.0 * ws[i + 1] + ws[i + 2]) * inv_dz4;
  }
}

std::vector<double> biharmonic(std::span<const double> u, const Grid1D& grid, double alpha) {
  StencilWorkspace ws(grid.N);
  std::vector<double> out(grid.nodes());
  biharmonic(u, grid, alpha, ws, out);
  return out;
}

std::vector<double> second_derivative(std::span<const double> u, const Grid1D& grid,
                                      double alpha) {
  const std::size_t N = grid.N;
  const double dz = grid.dz();
  StencilWorkspace ws(N);
  ws.load(u, dz, alpha);
  std::vector<double> out(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    out[k] = (ws[i - 1] - 2.0 * ws[i] + ws[i + 1]) / (dz * dz);
  }
  return out;
}

double drag_force(double v, double b, double p) {
  if (v == 0.0) return 0.0;
  const double mag = std::abs(v);
  // |v|^p via exp(p ln|v|); p == 1 and p == 2 are common enough to skip the transcendental.
  const double pw = p == 1.0 ? mag : (p == 2.0 ? mag * mag : std::exp(p * std::log(mag)));
  return b * pw * v;
}

// ---------------------------------------------------------------------------

AccelerationOperator::AccelerationOperator(const RiserModel& model)
    : model_(&model),
      a_mid_(model.tension.midpoint_values(model.grid)),
      ws_(model.grid.N),
      scratch_(model.grid.nodes()) {}

void AccelerationOperator::linear(std::span<const double> u, double alpha, std::span<double> out) {
  const auto& grid = model_->grid;
  biharmonic(u, grid, alpha, ws_, out);
  tension_divergence(u, a_mid_, grid, scratch_);
  const double k = model_->params.k;
  for (std::size_t i = 0; i <= grid.N; ++i) out[i] = -k * out[i] + scratch_[i];
}

void AccelerationOperator::velocity_forces(std::span<const double> v, double b,
                                           std::span<double> out) const {
  const auto& grid = model_->grid;
  const std::size_t N = grid.N;
  const double g3 = model_->params.g3();
  const double p = model_->params.p;
  const double inv2dz = 0.5 / grid.dz();
  out[0] = 0.0;
  out[N] = 0.0;
  for (std::size_t i = 1; i < N; ++i) {
    out[i] = g3 * (v[i + 1] - v[i - 1]) * inv2dz + drag_force(v[i], b, p);
  }
}

void AccelerationOperator::operator()(std::span<const double> u, std::span<const double> v,
                                      double t, const DriveSample& bc, std::span<double> out) {
  linear(u, bc.alpha, out);
  std::vector<double>& vf = scratch_;
  velocity_forces(v, model_->drag.value(t), vf);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] -= vf[i];
    if (!std::isfinite(out[i])) {
      throw Error(ErrorCode::NonFinite,
                  fmt::format("acceleration is not finite at node {} (t = {})", i, t));
    }
  }
}

std::vector<double> acceleration(const FieldState& state, const RiserModel& model,
                                 const DriveSample& bc) {
  AccelerationOperator op(model);
  std::vector<double> out(model.grid.nodes());
  op(state.u, state.v, state.t, bc, out);
  return out;
}

}  // namespace riser

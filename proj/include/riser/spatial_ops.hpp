#pragma once

// Finite-difference operators on the uniform depth grid.
//
// Neumann data enter through ghost nodes mirrored about each end:
//   u_{-1}  = u_1                   (u_z(0) = 0)
//   u_{N+1} = u_{N-1} + 2 dz alpha  (u_z(h) = alpha)
// Operators that act on interior nodes leave the boundary entries at zero;
// boundary motion is prescribed, not integrated.

#include <cstddef>
#include <span>
#include <vector>

#include "riser/model.hpp"

namespace riser {

/// Node array extended by two ghost nodes at each end. Ghosts are filled from
/// the current boundary slope on every load() and never carried across steps.
class StencilWorkspace {
 public:
  explicit StencilWorkspace(std::size_t N) : N_(N), data_(N + 5, 0.0) {}

  void load(std::span<const double> u, double dz, double alpha);

  /// i ranges over [-2, N+2].
  double operator[](std::ptrdiff_t i) const { return data_[static_cast<std::size_t>(i + 2)]; }
  std::size_t N() const { return N_; }

 private:
  std::size_t N_;
  std::vector<double> data_;
};

/// Centered second-order differences inside, second-order one-sided at the ends.
std::vector<double> first_derivative(std::span<const double> f, const Grid1D& grid);

/// Conservative flux form (a_{i+1/2}(u_{i+1}-u_i) - a_{i-1/2}(u_i-u_{i-1})) / dz^2.
std::vector<double> tension_divergence(std::span<const double> u, const TensionProfile& a,
                                       const Grid1D& grid);
/// Same, with a already evaluated at the N cell midpoints.
void tension_divergence(std::span<const double> u, std::span<const double> a_mid,
                        const Grid1D& grid, std::span<double> out);

/// Five-point fourth difference at interior nodes. Expects u[0] = 0 and u[N] = phi.
std::vector<double> biharmonic(std::span<const double> u, const Grid1D& grid, double alpha);
void biharmonic(std::span<const double> u, const Grid1D& grid, double alpha,
                StencilWorkspace& ws, std::span<double> out);

/// Second difference at every node 0..N, ghost rules as for biharmonic().
/// This is the discrete u_zz used by the energy.
std::vector<double> second_derivative(std::span<const double> u, const Grid1D& grid, double alpha);

/// b |v|^p v, exactly zero at v = 0.
double drag_force(double v, double b, double p);

/// Right-hand side of the semi-discrete equation at interior nodes:
///   -k D4 u + D_a u - g3 D1 v - b(t) |v|^p v
/// Boundary entries are zero. Throws Error{NonFinite} on overflow.
std::vector<double> acceleration(const FieldState& state, const RiserModel& model,
                                 const DriveSample& bc);

/// Reusable evaluator for acceleration() that caches a at the midpoints.
class AccelerationOperator {
 public:
  explicit AccelerationOperator(const RiserModel& model);

  void operator()(std::span<const double> u, std::span<const double> v, double t,
                  const DriveSample& bc, std::span<double> out);

  /// Linear part only (-k D4 u + D_a u) at interior nodes, using slope alpha.
  void linear(std::span<const double> u, double alpha, std::span<double> out);

  /// Velocity-dependent part g3 D1 v + b |v|^p v at interior nodes.
  void velocity_forces(std::span<const double> v, double b, std::span<double> out) const;

  const std::vector<double>& a_mid() const { return a_mid_; }

 private:
  const RiserModel* model_;
  std::vector<double> a_mid_;
  StencilWorkspace ws_;
  std::vector<double> scratch_;
};

}  // namespace riser

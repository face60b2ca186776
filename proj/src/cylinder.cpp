#include "riser/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "riser/error.hpp"
#include "riser/parallel.hpp"

namespace riser {

void CylinderGrid::validate() const {
  if (Nr < 16 || Nz < 16 || Nphi < 8) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("cylinder grid needs Nr, Nz >= 16 and Nphi >= 8 (got {}, {}, {})", Nr,
                            Nz, Nphi));
  }
  if (!(rho > 0.0 && h > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho and h must be positive");
}

// ---------------------------------------------------------------------------

double AdmissibleField::P(double z) const {
  const double s = z / h;
  const double h1 = 3.0 * s * s - 2.0 * s * s * s;
  const double h2 = (z * z * z - h * z * z) / (h * h);
  const double bubble = z * z * (z - h) * (z - h);
  return phi0 * h1 + alpha0 * h2 + bubble * (c[0] + z * (c[1] + z * c[2]));
}

double AdmissibleField::dP(double z) const {
  const double h1 = (6.0 * z * h - 6.0 * z * z) / (h * h * h);
  const double h2 = (3.0 * z * z - 2.0 * h * z) / (h * h);
  const double b = z * z * (z - h) * (z - h);
  const double db = 2.0 * z * (z - h) * (2.0 * z - h);
  const double poly = c[0] + z * (c[1] + z * c[2]);
  const double dpoly = c[1] + 2.0 * z * c[2];
  return phi0 * h1 + alpha0 * h2 + db * poly + b * dpoly;
}

double AdmissibleField::d2P(double z) const {
  const double h1 = (6.0 * h - 12.0 * z) / (h * h * h);
  const double h2 = (6.0 * z - 2.0 * h) / (h * h);
  const double b = z * z * (z - h) * (z - h);
  const double db = 2.0 * z * (z - h) * (2.0 * z - h);
  // b = z^4 - 2h z^3 + h^2 z^2
  const double d2b = 12.0 * z * z - 12.0 * h * z + 2.0 * h * h;
  const double poly = c[0] + z * (c[1] + z * c[2]);
  const double dpoly = c[1] + 2.0 * z * c[2];
  const double d2poly = 2.0 * c[2];
  return phi0 * h1 + alpha0 * h2 + d2b * poly + 2.0 * db * dpoly + b * d2poly;
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

AdmissibleField gen_admissible(std::uint64_t seed, double phi0, double alpha0, double h) {
  if (!(phi0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "phi0 must be non-negative");
  std::mt19937_64 rng(seed);
  AdmissibleField f;
  f.h = h;
  f.phi0 = phi0;
  f.alpha0 = alpha0;
  for (auto& cj : f.c) cj = 2.0 * unit_uniform(rng) - 1.0;
  return f;
}

std::uint64_t field_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 of the pair
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// ---------------------------------------------------------------------------

double cyl_quad(const std::function<double(double, double, double)>& f, const CylinderGrid& grid) {
  const double dr = grid.rho / static_cast<double>(grid.Nr);
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(grid.Nphi);
  const double dz = grid.h / static_cast<double>(grid.Nz);
  double total = 0.0;
  for (std::size_t k = 0; k <= grid.Nz; ++k) {
    const double z = k == grid.Nz ? grid.h : static_cast<double>(k) * dz;
    const double wz = (k == 0 || k == grid.Nz) ? 0.5 : 1.0;
    double slab = 0.0;
    // r = 0 carries zero weight in r dr.
    for (std::size_t i = 1; i <= grid.Nr; ++i) {
      const double r = i == grid.Nr ? grid.rho : static_cast<double>(i) * dr;
      const double wr = (i == grid.Nr ? 0.5 : 1.0) * r;
      double ring = 0.0;
      for (std::size_t j = 0; j < grid.Nphi; ++j) ring += f(r, static_cast<double>(j) * dphi, z);
      slab += wr * ring;
    }
    total += wz * slab;
  }
  return total * dr * dphi * dz;
}

namespace {

double integrand_value(const AdmissibleField& field, double z, Integrand which) {
  switch (which) {
    case Integrand::ValueSq: {
      const double p = field.P(z);
      return p * p;
    }
    case Integrand::GradSq: {
      const double d = field.dP(z);
      return d * d;
    }
    case Integrand::LaplacianSq: {
      const double d = field.d2P(z);
      return d * d;
    }
  }
  return 0.0;
}

}  // namespace

double cyl_quad(const AdmissibleField& field, const CylinderGrid& grid, Integrand which) {
  // Depth-only field: grad u = (0, 0, P'), lap u = P''.
  return cyl_quad([&](double, double, double z) { return integrand_value(field, z, which); }, grid);
}

double reduced_quad(const AdmissibleField& field, double rho, std::size_t Nz, Integrand which) {
  const double dz = field.h / static_cast<double>(Nz);
  double acc = 0.5 * (integrand_value(field, 0.0, which) + integrand_value(field, field.h, which));
  for (std::size_t k = 1; k < Nz; ++k) {
    acc += integrand_value(field, static_cast<double>(k) * dz, which);
  }
  return std::numbers::pi * rho * rho * acc * dz;
}

// ---------------------------------------------------------------------------

namespace {

struct QuadPair {
  double value = 0.0;
  double error = 0.0;
};

/// Full 3D quadrature plus a Richardson error estimate from the z-coarsened grid.
QuadPair quad_with_error(const AdmissibleField& field, const CylinderGrid& grid, Integrand which) {
  const double fine = cyl_quad(field, grid, which);
  const double coarse = reduced_quad(field, grid.rho, grid.Nz / 2, which);
  return {fine, std::abs(fine - coarse) / 3.0};
}

EstimateCheck finish(double lhs, double rhs, double err) {
  EstimateCheck c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.holds = lhs <= rhs * (1.0 + 1e-9) || lhs <= rhs;
  c.quad_error = err;
  c.super_tolerance = !c.holds && (lhs - rhs) > 1e-9 * std::abs(rhs) + 2.0 * err;
  return c;
}

}  // namespace

EstimateCheck check_value_estimate(const AdmissibleField& field, const CylinderGrid& grid) {
  const double A = std::numbers::pi * grid.rho * grid.rho;
  const auto u2 = quad_with_error(field, grid, Integrand::ValueSq);
  const auto g2 = quad_with_error(field, grid, Integrand::GradSq);
  const double h2 = grid.h * grid.h;
  return finish(u2.value, 4.0 * h2 * (g2.value + A * field.phi0 * field.phi0),
                u2.error + 4.0 * h2 * g2.error);
}

EstimateCheck check_gradient_estimate(const AdmissibleField& field, const CylinderGrid& grid) {
  const double A = std::numbers::pi * grid.rho * grid.rho;
  const auto g2 = quad_with_error(field, grid, Integrand::GradSq);
  const auto l2 = quad_with_error(field, grid, Integrand::LaplacianSq);
  const double q = A * (2.0 * field.phi0 * field.alpha0 + field.phi0 * field.phi0);
  const double h2 = grid.h * grid.h;
  auto c = finish(g2.value, q + 4.0 * h2 * l2.value, g2.error + 4.0 * h2 * l2.error);
  c.q = q;
  return c;
}

EstimateCheck check_laplacian_estimate(const AdmissibleField& field, const CylinderGrid& grid) {
  const double A = std::numbers::pi * grid.rho * grid.rho;
  const auto l2 = quad_with_error(field, grid, Integrand::LaplacianSq);
  return finish(A * field.alpha0 * field.alpha0 / grid.h, l2.value, l2.error);
}

VerifySummary verify_estimates(const VerifyOptions& opts) {
  opts.grid.validate();
  struct PerField {
    AdmissibleField field;
    std::uint64_t seed = 0;
    std::array<EstimateCheck, 3> checks;
  };
  std::vector<PerField> results(opts.fields);
  parallel_for(opts.fields, opts.jobs, [&](std::size_t i) {
    const std::uint64_t s = field_seed(opts.seed, i);
    std::mt19937_64 rng(s);
    const double phi0 = opts.phi_max * unit_uniform(rng);
    double alpha0 = opts.alpha_max * (2.0 * unit_uniform(rng) - 1.0);
    if (opts.negative_alpha_only) alpha0 = -std::abs(alpha0);
    PerField pf;
    pf.seed = rng();
    pf.field = gen_admissible(pf.seed, phi0, alpha0, opts.grid.h);
    pf.checks = {check_value_estimate(pf.field, opts.grid), check_gradient_estimate(pf.field, opts.grid),
                 check_laplacian_estimate(pf.field, opts.grid)};
    results[i] = pf;
  });

  VerifySummary summary;
  summary.fields_tested = opts.fields;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& pf = results[i];
    for (int k = 0; k < 3; ++k) {
      const auto& c = pf.checks[static_cast<std::size_t>(k)];
      if (c.rhs > 0.0) {
        summary.max_lhs_over_rhs[static_cast<std::size_t>(k)] =
            std::max(summary.max_lhs_over_rhs[static_cast<std::size_t>(k)], c.lhs / c.rhs);
      }
      if (!c.holds) {
        summary.violations.push_back(
            {k + 1, i, pf.seed, pf.field, c.lhs, c.rhs, c.quad_error, c.super_tolerance});
        if (c.super_tolerance) {
          ++summary.super_tolerance[static_cast<std::size_t>(k)];
          if (k == 1 && pf.field.alpha0 >= 0.0) ++summary.gradient_failing;
        }
      }
    }
  }

  AdmissibleField extremal;
  extremal.h = opts.grid.h;
  extremal.phi0 = opts.grid.h * opts.grid.h;
  extremal.alpha0 = 2.0 * opts.grid.h;
  const auto eq = check_laplacian_estimate(extremal, opts.grid);
  summary.equality_case_ratio = eq.lhs / eq.rhs;
  return summary;
}

}  // namespace riser

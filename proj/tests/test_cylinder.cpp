#include "doctest.h"

#include <cmath>
#include <numbers>

#include "riser/cylinder.hpp"
#include "riser/error.hpp"

using namespace riser;
using std::numbers::pi;

namespace {

CylinderGrid grid(double rho = 1.0, double h = 1.0, std::size_t Nz = 128) {
  return CylinderGrid{rho, h, 16, 8, Nz};
}

// P = z^2 on [0, 1]: phi0 = 1, alpha0 = 2. With H1 = 3z^2 - 2z^3 and
// H2 = z^3 - z^2 we have H1 + 2 H2 = z^2, so no free part is needed.
AdmissibleField z_squared() { return AdmissibleField{1.0, 1.0, 2.0, {0.0, 0.0, 0.0}}; }

}  // namespace

TEST_CASE("grid validation") {
  CHECK_NOTHROW(grid().validate());
  CHECK_THROWS_AS((CylinderGrid{1.0, 1.0, 15, 8, 64}.validate()), Error);
  CHECK_THROWS_AS((CylinderGrid{1.0, 1.0, 16, 7, 64}.validate()), Error);
  CHECK_THROWS_AS((CylinderGrid{1.0, 1.0, 16, 8, 15}.validate()), Error);
}

TEST_CASE("admissible fields: Hermite part and endpoint constraints") {
  const AdmissibleField zero{1.0, 0.0, 0.0, {0.0, 0.0, 0.0}};
  for (double z : {0.0, 0.3, 0.7, 1.0}) CHECK(zero.P(z) == 0.0);
  const AdmissibleField h1{1.0, 1.0, 0.0, {0.0, 0.0, 0.0}};
  for (double z : {0.0, 0.25, 0.5, 0.9}) CHECK(h1.P(z) == doctest::Approx(3 * z * z - 2 * z * z * z));
  CHECK(h1.P(1.0) == doctest::Approx(1.0));
  CHECK(h1.dP(1.0) == doctest::Approx(0.0));
  const auto sq = z_squared();
  for (double z : {0.1, 0.5, 0.8}) {
    CHECK(sq.P(z) == doctest::Approx(z * z));
    CHECK(sq.dP(z) == doctest::Approx(2 * z));
    CHECK(sq.d2P(z) == doctest::Approx(2.0));
  }
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const double phi0 = 0.001 * static_cast<double>(s % 997);
    const double alpha0 = -1.0 + 0.002 * static_cast<double>(s % 1000);
    const double h = 0.6 + 0.01 * static_cast<double>(s % 150);
    const auto f = gen_admissible(field_seed(7, s), phi0, alpha0, h);
    CHECK(std::abs(f.P(0.0)) <= 1e-12);
    CHECK(std::abs(f.dP(0.0)) <= 1e-12);
    CHECK(std::abs(f.P(h) - phi0) <= 1e-12);
    CHECK(std::abs(f.dP(h) - alpha0) <= 1e-12);
    for (double c : f.c) CHECK(std::abs(c) <= 1.0);
  }
  CHECK(gen_admissible(5, 0.3, 0.1, 1.0).c == gen_admissible(5, 0.3, 0.1, 1.0).c);
  CHECK(gen_admissible(5, 0.3, 0.1, 1.0).c != gen_admissible(6, 0.3, 0.1, 1.0).c);
  CHECK_THROWS_AS(gen_admissible(1, -0.1, 0.0, 1.0), Error);
}

TEST_CASE("cyl_quad: volumes and analytic integrals") {
  CHECK(cyl_quad([](double, double, double) { return 1.0; }, grid()) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(cyl_quad([](double, double, double z) { return z * z; }, grid()) ==
        doctest::Approx(pi / 3.0).epsilon(1e-4));
  // r^2 over the unit cylinder: 2 pi / 4
  CHECK(cyl_quad([](double r, double, double) { return r * r; }, grid(1.0, 1.0, 16)) ==
        doctest::Approx(pi / 2.0).epsilon(5e-3));
  // angular dependence integrates out
  CHECK(cyl_quad([](double r, double p, double) { return r * std::cos(p); }, grid()) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const AdmissibleField h1{1.0, 1.0, 0.0, {0.0, 0.0, 0.0}};
  CHECK(cyl_quad(h1, grid(1.0, 1.0, 512), Integrand::ValueSq) ==
        doctest::Approx(pi * 13.0 / 35.0).epsilon(1e-5));
  CHECK(cyl_quad(h1, grid(1.0, 1.0, 512), Integrand::GradSq) ==
        doctest::Approx(pi * 6.0 / 5.0).epsilon(1e-5));
}

TEST_CASE("cyl_quad: 3D and reduced evaluations agree on depth-only fields") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto f = gen_admissible(field_seed(3, s), 0.4, -0.3, 1.3);
    const CylinderGrid g{0.7, 1.3, 24, 12, 96};
    for (auto w : {Integrand::ValueSq, Integrand::GradSq, Integrand::LaplacianSq}) {
      const double full = cyl_quad(f, g, w);
      const double red = reduced_quad(f, g.rho, g.Nz, w);
      CHECK(std::abs(full - red) <= 1e-10 * std::max(1.0, std::abs(red)));
    }
  }
}

TEST_CASE("cyl_quad: second-order convergence under joint refinement") {
  auto f = [](double r, double p, double z) {
    return std::exp(-r * r) * (1.0 + 0.3 * std::cos(p)) * std::sin(2.0 * z + 0.3);
  };
  // exact: (1 - e^-1)/2 * 2 pi * int_0^1 sin(2z + 0.3) dz
  const double exact = 0.5 * (1.0 - std::exp(-1.0)) * 2.0 * pi * (std::cos(0.3) - std::cos(2.3)) / 2.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t n = 16u << k;
    const double err = std::abs(cyl_quad(f, CylinderGrid{1.0, 1.0, n, 8, n}) - exact);
    if (k > 0) {
      const double order = std::log2(prev / err);
      CHECK(order >= 1.8);
      CHECK(order <= 2.2);
    }
    prev = err;
  }
}

TEST_CASE("first estimate: examples") {
  const AdmissibleField zero{1.0, 0.0, 0.0, {0.0, 0.0, 0.0}};
  const auto z = check_value_estimate(zero, grid());
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.holds);
  const AdmissibleField h1{1.0, 1.0, 0.0, {0.0, 0.0, 0.0}};
  const auto c = check_value_estimate(h1, grid(1.0, 1.0, 512));
  CHECK(c.lhs == doctest::Approx(pi * 13.0 / 35.0).epsilon(1e-5));
  CHECK(c.rhs == doctest::Approx(4.0 * (pi * 6.0 / 5.0 + pi)).epsilon(1e-5));
  CHECK(c.holds);
}

TEST_CASE("second estimate: examples") {
  const AdmissibleField zero{1.0, 0.0, 0.0, {0.0, 0.0, 0.0}};
  CHECK(check_gradient_estimate(zero, grid()).holds);
  const auto c = check_gradient_estimate(z_squared(), grid(1.0, 1.0, 512));
  CHECK(c.lhs == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-5));
  CHECK(c.q == doctest::Approx(5.0 * pi));
  CHECK(c.rhs == doctest::Approx(21.0 * pi).epsilon(1e-10));
  CHECK(c.holds);
}

TEST_CASE("third estimate: examples and the equality case") {
  const AdmissibleField flat{1.0, 0.5, 0.0, {0.3, -0.2, 0.1}};
  const auto a = check_laplacian_estimate(flat, grid());
  CHECK(a.lhs == 0.0);
  CHECK(a.holds);
  const auto e = check_laplacian_estimate(z_squared(), grid());
  CHECK(e.lhs == doctest::Approx(4.0 * pi));
  CHECK(e.rhs == doctest::Approx(4.0 * pi).epsilon(1e-12));
  CHECK(e.holds);
  CHECK_FALSE(e.super_tolerance);
}

TEST_CASE("randomized suite: 1000 fields hold all three estimates") {
  VerifyOptions o;
  o.grid = CylinderGrid{1.0, 1.0, 16, 8, 64};
  o.fields = 1000;
  o.seed = 42;
  o.jobs = 4;
  const auto s = verify_estimates(o);
  CHECK(s.fields_tested == 1000);
  CHECK(s.passed());
  CHECK(s.super_tolerance[0] == 0);
  CHECK(s.super_tolerance[1] == 0);
  CHECK(s.super_tolerance[2] == 0);
  CHECK(s.max_lhs_over_rhs[0] <= 1.0);
  CHECK(s.max_lhs_over_rhs[2] <= 1.0 + 1e-9);
  CHECK(s.equality_case_ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.equality_case_ratio <= 1.0 + 1e-12);

  // worker count does not change the result
  o.jobs = 1;
  const auto serial = verify_estimates(o);
  CHECK(serial.max_lhs_over_rhs == s.max_lhs_over_rhs);
  CHECK(serial.violations.size() == s.violations.size());
}

TEST_CASE("randomized suite: signed q with negative alpha") {
  VerifyOptions o;
  o.grid = CylinderGrid{1.0, 1.0, 16, 8, 64};
  o.fields = 1000;
  o.seed = 9;
  o.negative_alpha_only = true;
  o.jobs = 4;
  const auto s = verify_estimates(o);
  MESSAGE("negative alpha: second-estimate max lhs/rhs = " << s.max_lhs_over_rhs[1]
          << ", super-tolerance = " << s.super_tolerance[1]);
  CHECK(s.gradient_failing == 0);
  CHECK(s.passed());
}

TEST_CASE("randomized suite: zero fields is a vacuous pass") {
  VerifyOptions o;
  o.fields = 0;
  const auto s = verify_estimates(o);
  CHECK(s.fields_tested == 0);
  CHECK(s.violations.empty());
  CHECK(s.passed());
}

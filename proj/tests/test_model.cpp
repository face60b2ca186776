#include "doctest.h"

#include <cmath>

#include "riser/error.hpp"
#include "riser/model.hpp"

using namespace riser;

namespace {

TensionProfile constant_tension(double a, double h = 1.0, std::size_t N = 16) {
  return TensionProfile(TimeFunction::constant(a), Grid1D(h, N));
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("derive_constants: k0 and mu from the rigidity margin") {
  Parameters p;
  p.k = 5.0;
  p.h = 1.0;
  const auto c = derive_constants(p, constant_tension(1.0), 2.0, 20.0);
  CHECK(c.k0 == doctest::Approx(1.0));
  CHECK(c.mu == doctest::Approx(12.0));
  CHECK(c.a_max_abs == 1.0);
}

TEST_CASE("derive_constants: boundary case k = 4 a h^2 is rejected") {
  Parameters p;
  p.k = 4.0;
  CHECK(code_of([&] { derive_constants(p, constant_tension(1.0), 2.0, 20.0); }) ==
        ErrorCode::RigidityViolated);
}

TEST_CASE("derive_constants: sigma at the lower bound is rejected") {
  Parameters p;
  p.k = 5.0;
  CHECK(code_of([&] { derive_constants(p, constant_tension(1.0), 2.0, 8.0); }) ==
        ErrorCode::SigmaTooSmall);
  CHECK(code_of([&] { derive_constants(p, constant_tension(1.0), 1.0, 20.0); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("derive_constants: k0 grows one-for-one with k") {
  Parameters p;
  p.k = 5.0;
  const auto a = constant_tension(0.7);
  const double base = derive_constants(p, a, 2.0, 100.0).k0;
  for (double dk : {0.5, 1.0, 3.25}) {
    p.k = 5.0 + dk;
    CHECK(derive_constants(p, a, 2.0, 100.0).k0 == doctest::Approx(base + dk).epsilon(1e-14));
  }
}

TEST_CASE("TensionProfile: a = 1 - z/2 has max 1 at the bottom and 1/2 at the top") {
  const Grid1D grid(1.0, 32);
  const TensionProfile a(TimeFunction::polynomial({1.0, -0.5}), grid);
  // oracle: 10^4 uniform samples evaluated directly
  double amax = 0.0;
  for (int j = 0; j <= 10000; ++j) amax = std::max(amax, std::abs(1.0 - 0.5 * j / 10000.0));
  CHECK(a.a_max_abs() == doctest::Approx(amax));
  CHECK(a.a_max_abs() == doctest::Approx(1.0));
  CHECK(a.a_h() == doctest::Approx(0.5));
  for (std::size_t i = 0; i <= grid.N; ++i) CHECK(a.a_max_abs() >= std::abs(a(grid.z(i))));
}

TEST_CASE("evaluate_drive: power law and its derivative") {
  Drive d{TimeFunction::power(1.0, -0.5), TimeFunction::constant(-0.25)};
  const auto s = evaluate_drive(d, 3.0);
  CHECK(s.phi == doctest::Approx(0.5));
  CHECK(s.phi_t == doctest::Approx(-0.0625));
  CHECK(s.alpha == doctest::Approx(-0.25));
}

TEST_CASE("evaluate_drive: zero phi") {
  Drive d{TimeFunction::constant(0.0), TimeFunction::power(2.0, 0.3)};
  for (double t : {0.0, 1.5, 40.0}) {
    const auto s = evaluate_drive(d, t);
    CHECK(s.phi == 0.0);
    CHECK(s.phi_t == 0.0);
    CHECK(s.alpha == doctest::Approx(2.0 * std::pow(1.0 + t, 0.3)));
  }
}

TEST_CASE("evaluate_drive: table interpolation and negativity") {
  Drive d{TimeFunction::table({0.0, 1.0, 3.0}, {0.0, 2.0, 1.0}), TimeFunction::constant(0.0)};
  // hand interpolation: between (1, 2) and (3, 1) at t = 2 -> 1.5, slope -1/2
  const auto s = evaluate_drive(d, 2.0);
  CHECK(s.phi == doctest::Approx(1.5));
  CHECK(s.phi_t == doctest::Approx(-0.5));
  CHECK(evaluate_drive(d, 0.5).phi == doctest::Approx(1.0));

  Drive neg{TimeFunction::table({0.0, 1.0}, {0.5, -0.5}), TimeFunction::constant(0.0)};
  CHECK(code_of([&] { evaluate_drive(neg, 0.75); }) == ErrorCode::NegativePhi);
}

TEST_CASE("TimeFunction: power-law derivatives agree with centered differences") {
  const TimeFunction fs[] = {TimeFunction::power(0.05, -0.3), TimeFunction::power(-2.0, 0.1),
                             TimeFunction::power(1.0, 0.5), TimeFunction::polynomial({1.0, -0.5, 0.25})};
  for (const auto& f : fs) {
    for (double t : {0.0, 0.3, 2.0, 17.0, 400.0}) {
      const double eta = 1e-5 * (1.0 + t);
      const double fd = (f.value(t + eta) - f.value(t - eta)) / (2.0 * eta);
      const double ex = f.derivative(t);
      CHECK(std::abs(fd - ex) <= 1e-6 * std::max(std::abs(ex), 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("TimeFunction: decaying sinusoid derivative") {
  const auto f = TimeFunction::decaying_sinusoid(1.3, -0.4, 2.0);
  for (double t : {0.0, 0.3, 2.0, 17.0, 400.0}) {
    const double eta = 1e-6;
    const double fd = (f.value(t + eta) - f.value(t - eta)) / (2.0 * eta);
    CHECK(fd == doctest::Approx(f.derivative(t)).epsilon(1e-6));
  }
}

TEST_CASE("TimeFunction: table validation") {
  CHECK_THROWS_AS(TimeFunction::table({0.0, 0.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(TimeFunction::table({0.0, 1.0}, {1.0}), Error);
}

TEST_CASE("Parameters: invariants") {
  Parameters p;
  CHECK_NOTHROW(p.validate());
  p.h = 0.5;
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::Validation);
  p = Parameters{};
  p.p = 0.9;
  CHECK_THROWS_AS(p.validate(), Error);
  p = Parameters{};
  p.b0 = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = Parameters{};
  p.k = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("Grid1D: node layout and minimum size") {
  const Grid1D g(2.0, 8);
  CHECK(g.z(0) == 0.0);
  CHECK(g.z(8) == 2.0);
  CHECK(g.dz() == 0.25);
  CHECK_THROWS_AS(Grid1D(1.0, 7), Error);
  CHECK(Grid1D::small(1.0, 4).N == 4);
  CHECK_THROWS_AS(Grid1D::small(1.0, 3), Error);
}

TEST_CASE("apply_boundary: clamped bottom and driven top") {
  const Grid1D g(1.0, 10);
  FieldState s = FieldState::zeros(g);
  for (std::size_t i = 0; i <= g.N; ++i) {
    s.u[i] = 0.1 * static_cast<double>(i);
    s.v[i] = -0.2;
  }
  const DriveSample bc{0.3, -0.7, 1.1};
  CHECK_FALSE(boundary_consistent(s, bc));
  apply_boundary(s, bc);
  CHECK(boundary_consistent(s, bc));
  CHECK(s.u[0] == 0.0);
  CHECK(s.v[0] == 0.0);
  CHECK(s.u[g.N] == 0.3);
  CHECK(s.v[g.N] == -0.7);
}

#include "doctest.h"

#include "ymhs/fixtures.hpp"

#include <numbers>

using namespace ymhs;
using Grid = TorusGrid<double>;
using F = Field<double>;
using Section = SphereSection<double>;

namespace {
constexpr double pi = std::numbers::pi;
Connection<double> flat(const Grid& g) { return Connection<double>::zero(g, u1_algebra<double>()); }

OneForm<double> noise_oneform(const Grid& g, fixtures::Rng& rng) {
  return {{fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1)}};
}
}  // namespace

TEST_CASE("YMH functional on constant sections") {
  const Grid g(32);
  SUBCASE("pole") {
    const auto p = ymh_functional(Section::constant(g, {0, 0, 1}), flat(g));
    CHECK(p.kinetic == 0.0);
    CHECK(p.curvature == 0.0);
    CHECK(p.potential == doctest::Approx(4 * pi * pi).epsilon(1e-14));
    CHECK(p.total == p.potential);
  }
  SUBCASE("equator") {
    CHECK(ymh_functional(Section::constant(g, {1, 0, 0}), flat(g)).total == 0.0);
  }
  SUBCASE("equator with constant A1") {
    const double c = 0.4;
    const auto p = ymh_functional(Section::constant(g, {1, 0, 0}), u1_connection(g, g.constant(1, c), g.zeros(1)));
    CHECK(p.kinetic == doctest::Approx(c * c * 4 * pi * pi).epsilon(1e-13));
    CHECK(p.curvature == 0.0);
    CHECK(p.potential == 0.0);
  }
}

TEST_CASE("YMH functional is gauge invariant to second order") {
  fixtures::Rng rng(97);
  const auto ss = fixtures::random_section_spec(rng);
  const auto cs = fixtures::random_connection_spec(rng);
  const auto th = fixtures::random_trig(rng, 2, 1.0);
  std::vector<double> hs, errs;
  for (int n : {32, 64, 128}) {
    const Grid g(n);
    const Section phi = ss.sample(g);
    const auto A = cs.sample(g);
    auto [A2, phi2] = gauge_transform(GaugeAngle<double>{g.sample(th)}, A, phi);
    hs.push_back(g.h());
    errs.push_back(std::abs(ymh_functional(phi2, A2).total - ymh_functional(phi, A).total));
  }
  CHECK(fixtures::fit_order(hs, errs) >= 1.9);
}

TEST_CASE("energy hierarchy") {
  SUBCASE("stationary flat pair") {
    const Grid g(16);
    for (double e : energy_hierarchy(Section::constant(g, {0, 0, 1}), flat(g), 3)) CHECK(e == 0.0);
  }
  SUBCASE("monotone in k and E_0 matches the YMH parts") {
    fixtures::Rng rng(101);
    for (int trial = 0; trial < 3; ++trial) {
      const Grid g(32);
      const auto s = fixtures::smooth_state(g, fixtures::random_section_spec(rng), fixtures::random_connection_spec(rng));
      const auto E = energy_hierarchy(s.phi, s.A, 3);
      REQUIRE(E.size() == 4);
      for (std::size_t k = 0; k + 1 < E.size(); ++k) CHECK(E[k + 1] >= E[k]);
      const auto p = ymh_functional(s.phi, s.A);
      CHECK(std::abs(E[0] - 0.5 * (p.kinetic + p.curvature)) <= 1e-12 * std::max(1.0, E[0]));
    }
  }
  SUBCASE("abelian E_1 on a pure-curvature state") {
    // phi at the pole decouples (X vanishes) and F = cos x1: E_1 adds
    // 1/2 ||D_1 F||^2 = 1/2 ||sin x1||^2 = pi^2 to second order.
    std::vector<double> hs, errs;
    for (int n : {32, 64, 128}) {
      const Grid g(n);
      const auto A = u1_connection(g, g.zeros(1), g.sample([](double x1, double) { return std::sin(x1); }));
      const auto E = energy_hierarchy(Section::constant(g, {0, 0, 1}), A, 1);
      hs.push_back(g.h());
      errs.push_back(std::abs(E[1] - E[0] - pi * pi));
      CHECK(E[0] == doctest::Approx(0.5 * l2_inner(g, curvature(A).f12(), curvature(A).f12())));
    }
    CHECK(fixtures::fit_order(hs, errs) >= 1.9);
  }
  SUBCASE("range checks") {
    const Grid g(8);
    CHECK_THROWS_AS(energy_hierarchy(Section::constant(g, {0, 0, 1}), flat(g), 4), Error);
    CHECK_THROWS_AS(energy_hierarchy(Section::constant(g, {0, 0, 1}), flat(g), -1), Error);
    CHECK(energy_hierarchy(Section::constant(g, {0, 0, 1}), flat(g), 4, 5).size() == 5);
  }
}

TEST_CASE("Sobolev norm of the connection") {
  const Grid g(64);
  const auto alg = u1_algebra<double>();
  SUBCASE("A = C") {
    fixtures::Rng rng(103);
    const auto A = u1_connection(g, fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1));
    CHECK(sobolev_norm(A, A, 2) == 0.0);
  }
  SUBCASE("constant a, k = 0") {
    const auto A = u1_connection(g, g.constant(1, 0.3), g.constant(1, 0.4));
    CHECK(sobolev_norm(A, 0) == doctest::Approx(0.5 * 2 * pi).epsilon(1e-14));
  }
  SUBCASE("a = (sin x2, 0), k = 1") {
    std::vector<double> hs, errs;
    for (int n : {32, 64, 128}) {
      const Grid gg(n);
      const auto A = u1_connection(gg, gg.sample([](double, double x2) { return std::sin(x2); }), gg.zeros(1));
      const double v = sobolev_norm(A, 1);
      hs.push_back(gg.h());
      errs.push_back(std::abs(v * v - 4 * pi * pi));
    }
    CHECK(fixtures::fit_order(hs, errs) >= 1.9);
  }
  SUBCASE("range checks") {
    CHECK_THROWS_AS(sobolev_norm(flat(g), 4), Error);
    CHECK_THROWS_AS(sobolev_norm(flat(g), Connection<double>::zero(g, so3_algebra<double>()), 1), Error);
  }
}

TEST_CASE("variational consistency") {
  fixtures::Rng rng(107);
  SUBCASE("stationary flat pair") {
    const Grid g(32);
    const Section pole = Section::constant(g, {0, 0, 1});
    const auto r = variational_check(pole, flat(g), fixtures::noise_tangent(pole, rng), noise_oneform(g, rng), 1e-5);
    CHECK(std::abs(r.finite_difference) <= 1e-10);
    CHECK(std::abs(r.assembled) <= 1e-10);
    CHECK(r.abs_error <= 1e-10);
  }
  SUBCASE("twist preset, random directions") {
    const Grid g(32);
    const auto s = make_preset(g, "twist", 0.3);
    for (int trial = 0; trial < 3; ++trial) {
      const F dphi = fixtures::noise_tangent(s.phi, rng);
      const auto dA = noise_oneform(g, rng);
      CHECK(variational_check(s.phi, s.A, dphi, dA, 1e-5).rel_error <= 1e-5);
      // Richardson: the O(step^2) error shrinks ~4x per halving.
      const double e1 = variational_check(s.phi, s.A, dphi, dA, 1e-3).abs_error;
      const double e2 = variational_check(s.phi, s.A, dphi, dA, 5e-4).abs_error;
      const double e3 = variational_check(s.phi, s.A, dphi, dA, 2.5e-4).abs_error;
      CHECK(e1 / e2 > 3.5);
      CHECK(e1 / e2 < 4.5);
      CHECK(e2 / e3 > 3.5);
      CHECK(e2 / e3 < 4.5);
    }
  }
  SUBCASE("argument validation") {
    const Grid g(16);
    const auto s = make_preset(g, "twist", 0.3);
    const F dphi = fixtures::noise_tangent(s.phi, rng);
    const auto dA = noise_oneform(g, rng);
    CHECK_THROWS_AS(variational_check(s.phi, s.A, dphi, dA, 1e-2), Error);
    CHECK_THROWS_AS(variational_check(s.phi, s.A, dphi, dA, 1e-8), Error);
    CHECK_THROWS_AS(variational_check(s.phi, s.A, g.zeros(3), OneForm<double>::zeros(g, 1), 1e-5), Error);
    CHECK_THROWS_AS(variational_check(s.phi, s.A, s.phi.values(), dA, 1e-5), Error);
  }
}

TEST_CASE("energy report") {
  const Grid g(32);
  const auto s = make_preset(g, "twist", 0.3);
  const auto r = make_report(0.25, s.phi, s.A, 2);
  const auto p = ymh_functional(s.phi, s.A);
  CHECK(r.t == 0.25);
  CHECK(r.ymh == p.total);
  CHECK(r.e.size() == 3);
  CHECK(r.constraint <= 1e-12);
  CHECK(r.potential <= 4 * pi * pi);
  CHECK(r.a_w12 == sobolev_norm(s.A, 1));
  for (double v : {r.ymh, r.kinetic, r.curvature, r.potential, r.a_w12}) CHECK(v >= 0.0);
}

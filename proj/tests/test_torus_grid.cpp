#include "doctest.h"

#include "ymhs/fixtures.hpp"
#include "ymhs/torus_grid.hpp"

#include <numbers>

using namespace ymhs;
using Grid = TorusGrid<double>;
using F = Field<double>;

namespace {
constexpr double pi = std::numbers::pi;

double max_abs(const F& f) { return f.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("grid geometry") {
  for (int n : {8, 32, 64, 128}) {
    const Grid g(n);
    CHECK(g.sites() == n * n);
    CHECK(double(n) * g.h() == 2 * pi);
  }
  CHECK_THROWS_AS(Grid(7), Error);
  const Grid g(16);
  CHECK(g.site(0, 0) == 0);
  CHECK(g.site(1, 0) == 1);
  CHECK(g.site(0, 1) == 16);
  CHECK(g.site(-1, 0) == 15);
  CHECK(g.site(16, 17) == 16);
}

TEST_CASE("partial_derivative") {
  SUBCASE("constant has zero derivative") {
    const Grid g(32);
    const F f = g.constant(1, 3.25);
    CHECK(max_abs(partial_derivative(g, f, 1)) == 0.0);
    CHECK(max_abs(partial_derivative(g, f, 2)) == 0.0);
  }
  SUBCASE("sin x1 along axis 2 vanishes") {
    const Grid g(32);
    const F f = g.sample([](double x1, double) { return std::sin(x1); });
    CHECK(max_abs(partial_derivative(g, f, 2)) == 0.0);
  }
  SUBCASE("sin x1 along axis 1 converges to cos x1 at second order") {
    std::vector<double> hs, errs;
    for (int n : {32, 64, 128}) {
      const Grid g(n);
      const F f = g.sample([](double x1, double) { return std::sin(x1); });
      const F exact = g.sample([](double x1, double) { return std::cos(x1); });
      const double err = max_abs(partial_derivative(g, f, 1) - exact);
      CHECK(err <= g.h() * g.h() / 6 * 1.0001);  // |sin h / h - 1| <= h^2/6
      hs.push_back(g.h());
      errs.push_back(err);
    }
    CHECK(fixtures::fit_order(hs, errs) >= 1.9);
  }
  SUBCASE("bad axis and wrong shape") {
    const Grid g(16);
    CHECK_THROWS_AS(partial_derivative(g, g.zeros(1), 0), Error);
    CHECK_THROWS_AS(partial_derivative(g, g.zeros(1), 3), Error);
    CHECK_THROWS_AS(partial_derivative(g, F(F::Zero(1, 10)), 1), Error);
  }
  SUBCASE("multi-row fields differentiate row by row") {
    const Grid g(16);
    F f(2, g.sites());
    f.row(0) = g.sample([](double x1, double x2) { return std::sin(x1 + 2 * x2); });
    f.row(1) = g.sample([](double x1, double) { return std::cos(3 * x1); });
    const F d = partial_derivative(g, f, 2);
    CHECK(max_abs(d.row(0) - partial_derivative(g, F(f.row(0)), 2)) == 0.0);
    CHECK(max_abs(d.row(1)) == 0.0);
  }
}

TEST_CASE("l2_inner quadrature") {
  const Grid g(64);
  const F one = g.constant(1, 1.0);
  const F s = g.sample([](double x1, double) { return std::sin(x1); });
  const F c = g.sample([](double x1, double) { return std::cos(x1); });
  CHECK(l2_inner(g, one, one) == doctest::Approx(4 * pi * pi).epsilon(1e-14));
  CHECK(l2_inner(g, s, s) == doctest::Approx(2 * pi * pi).epsilon(1e-14));
  CHECK(std::abs(l2_inner(g, s, c)) <= 1e-12);
  CHECK_THROWS_AS(l2_inner(g, one, g.zeros(2)), Error);
}

TEST_CASE("l2_inner is symmetric and bilinear") {
  fixtures::Rng rng(7);
  const Grid g(16);
  const F u = fixtures::noise(g, rng, 3), v = fixtures::noise(g, rng, 3), w = fixtures::noise(g, rng, 3);
  CHECK(l2_inner(g, u, v) == l2_inner(g, v, u));
  const double lhs = l2_inner(g, F(2.5 * u + w), v);
  CHECK(lhs == doctest::Approx(2.5 * l2_inner(g, u, v) + l2_inner(g, w, v)).epsilon(1e-13));
}

TEST_CASE("central differences are skew-adjoint (summation by parts)") {
  fixtures::Rng rng(11);
  for (int n : {8, 17, 32}) {
    const Grid g(n);
    for (int trial = 0; trial < 5; ++trial) {
      const F f = fixtures::noise(g, rng, 1), h = fixtures::noise(g, rng, 1);
      for (int axis : {1, 2}) {
        const double lhs = l2_inner(g, partial_derivative(g, f, axis), h);
        const double rhs = -l2_inner(g, f, partial_derivative(g, h, axis));
        CHECK(std::abs(lhs - rhs) <= 1e-12);
      }
    }
  }
}

TEST_CASE("j on one-forms") {
  const Grid g(16);
  const OneForm<double> w{{g.constant(1, 1.0), g.constant(1, 0.0)}};
  const OneForm<double> jw = j_on_oneform(w);
  CHECK(max_abs(jw[0]) == 0.0);
  CHECK(max_abs(jw[1] - g.constant(1, -1.0)) == 0.0);

  fixtures::Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const OneForm<double> r{{fixtures::noise(g, rng, 2), fixtures::noise(g, rng, 2)}};
    const OneForm<double> jj = j_on_oneform(j_on_oneform(r));
    CHECK(max_abs(jj[0] + r[0]) == 0.0);
    CHECK(max_abs(jj[1] + r[1]) == 0.0);
    CHECK(std::abs(l2_inner(g, j_on_oneform(r), r)) <= 1e-12);
  }
}

TEST_CASE("grid is generic over the scalar type") {
  const TorusGrid<long double> g(32);
  const Field<long double> s = g.sample([](long double x1, long double) { return std::sin(x1); });
  CHECK(double(l2_inner(g, s, s)) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
}

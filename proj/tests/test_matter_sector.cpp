#include "doctest.h"

#include "ymhs/fixtures.hpp"
#include "ymhs/matter_sector.hpp"

#include <numbers>

using namespace ymhs;
using Grid = TorusGrid<double>;
using F = Field<double>;
using Section = SphereSection<double>;

namespace {
double max_abs(const F& f) { return f.cwiseAbs().maxCoeff(); }

F const_vec(const Grid& g, const Eigen::Vector3d& v) {
  F f(3, g.sites());
  f.colwise() = v;
  return f;
}

Connection<double> flat(const Grid& g) { return Connection<double>::zero(g, u1_algebra<double>()); }

// Independent per-site reference for the projected R^3 derivative.
F site_dot_ref(const F& u, const F& v) {
  F out(1, u.cols());
  for (Eigen::Index s = 0; s < u.cols(); ++s) out(0, s) = u.col(s).dot(v.col(s));
  return out;
}

Section random_section(const Grid& g, fixtures::Rng& rng) {
  F raw = fixtures::noise(g, rng, 3);
  raw.row(2).array() += 2.0;
  return project_to_sphere(g, raw);
}
}  // namespace

TEST_CASE("killing field") {
  const Grid g(16);
  CHECK(max_abs(killing_field(Section::constant(g, {0, 0, 1}))) == 0.0);
  CHECK(max_abs(killing_field(Section::constant(g, {1, 0, 0})) - const_vec(g, {0, 1, 0})) == 0.0);

  fixtures::Rng rng(41);
  const Section phi = random_section(g, rng);
  CHECK(tangency_residual(phi, killing_field(phi)) <= 1e-15);
  for (int trial = 0; trial < 5; ++trial) {
    const F Y = fixtures::noise_tangent(phi, rng), W = fixtures::noise_tangent(phi, rng);
    const F s = site_dot_ref(killing_derivative(phi, Y), W) + site_dot_ref(killing_derivative(phi, W), Y);
    CHECK(max_abs(s) <= 1e-10);
    CHECK(tangency_residual(phi, killing_derivative(phi, Y)) <= 1e-12);
  }
}

TEST_CASE("complex structure") {
  const Grid g(16);
  const Section pole = Section::constant(g, {0, 0, 1});
  CHECK(max_abs(complex_structure_apply(pole, const_vec(g, {1, 0, 0})) - const_vec(g, {0, 1, 0})) == 0.0);

  fixtures::Rng rng(43);
  const Section phi = random_section(g, rng);
  const F Y = fixtures::noise_tangent(phi, rng);
  const F JY = complex_structure_apply(phi, Y);
  CHECK(tangency_residual(phi, JY) <= 1e-12);
  CHECK(max_abs(complex_structure_apply(phi, JY) + Y) <= 1e-12);

  SUBCASE("equivariance under the circle action") {
    // The infinitesimal action on a tangent vector is the linearized rotation
    // Y -> e3 x Y along the rotated base point; J commutes with it.
    const F lhs = complex_structure_apply(phi, killing_derivative(phi, Y));
    const F rhs = killing_derivative(phi, JY);
    CHECK(max_abs(lhs - rhs) <= 1e-12);
  }
  SUBCASE("non-tangent input is rejected") {
    CHECK_THROWS_AS(complex_structure_apply(phi, phi.values()), Error);
  }
}

TEST_CASE("covariant derivative of a section") {
  const Grid g(16);
  SUBCASE("pole with A = 0") {
    const auto P = covariant_derivative_section(flat(g), Section::constant(g, {0, 0, 1}));
    CHECK(max_abs(P[0]) == 0.0);
    CHECK(max_abs(P[1]) == 0.0);
  }
  SUBCASE("constant e1 with A1 = c") {
    const double c = 0.75;
    const auto A = u1_connection(g, g.constant(1, c), g.zeros(1));
    const auto P = covariant_derivative_section(A, Section::constant(g, {1, 0, 0}));
    CHECK(max_abs(P[0] - const_vec(g, {0, c, 0})) == 0.0);
    CHECK(max_abs(P[1]) == 0.0);
  }
  SUBCASE("great circle converges to the analytic tangent") {
    std::vector<double> hs, errs;
    for (int n : {32, 64, 128}) {
      const Grid gg(n);
      const Section phi = project_to_sphere(
          gg, gg.sample_vector(3, [](double x1, double) { return Vec3<double>(std::sin(x1), 0, std::cos(x1)); }));
      const auto P = covariant_derivative_section(flat(gg), phi);
      const F exact = gg.sample_vector(3, [](double x1, double) { return Vec3<double>(std::cos(x1), 0, -std::sin(x1)); });
      CHECK(max_abs(P[1]) == 0.0);
      hs.push_back(gg.h());
      errs.push_back(max_abs(P[0] - exact));
    }
    CHECK(fixtures::fit_order(hs, errs) >= 1.9);
  }
  SUBCASE("output is tangent") {
    fixtures::Rng rng(47);
    const Section phi = random_section(g, rng);
    const auto A = u1_connection(g, fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1));
    const auto P = covariant_derivative_section(A, phi);
    CHECK(tangency_residual(phi, P[0]) <= 1e-12);
    CHECK(tangency_residual(phi, P[1]) <= 1e-12);
  }
  SUBCASE("non-abelian connection is rejected") {
    CHECK_THROWS_AS(covariant_derivative_section(Connection<double>::zero(g, so3_algebra<double>()),
                                                 Section::constant(g, {0, 0, 1})),
                    Error);
  }
}

TEST_CASE("covariant derivative of vertical fields") {
  const Grid g(16);
  fixtures::Rng rng(53);
  SUBCASE("zero and constant inputs") {
    const Section phi = random_section(g, rng);
    const auto A = u1_connection(g, fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1));
    const auto d0 = covariant_derivative_vertical(A, phi, g.zeros(3));
    CHECK(max_abs(d0[0]) == 0.0);
    CHECK(max_abs(d0[1]) == 0.0);
    const Section e1 = Section::constant(g, {1, 0, 0});
    const auto d1 = covariant_derivative_vertical(flat(g), e1, const_vec(g, {0, 0.3, -0.4}));
    CHECK(max_abs(d1[0]) == 0.0);
    CHECK(max_abs(d1[1]) == 0.0);
  }
  SUBCASE("output is tangent and input tangency is enforced") {
    const Section phi = random_section(g, rng);
    const auto A = u1_connection(g, fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1));
    const auto d = covariant_derivative_vertical(A, phi, fixtures::noise_tangent(phi, rng));
    CHECK(tangency_residual(phi, d[0]) <= 1e-8);
    CHECK(tangency_residual(phi, d[1]) <= 1e-8);
    CHECK_THROWS_AS(covariant_derivative_vertical(A, phi, phi.values()), Error);
  }
  SUBCASE("metric compatibility holds to second order") {
    const auto ss = fixtures::random_section_spec(rng);
    const auto cs = fixtures::random_connection_spec(rng);
    std::array<fixtures::TrigPolynomial, 3> yp, wp;
    for (auto& t : yp) t = fixtures::random_trig(rng);
    for (auto& t : wp) t = fixtures::random_trig(rng);
    std::vector<double> hs, errs;
    for (int n : {32, 64, 128}) {
      const Grid gg(n);
      const Section phi = ss.sample(gg);
      const auto A = cs.sample(gg);
      const F Y = fixtures::smooth_tangent(phi, yp), W = fixtures::smooth_tangent(phi, wp);
      const auto dY = covariant_derivative_vertical(A, phi, Y);
      const auto dW = covariant_derivative_vertical(A, phi, W);
      double err = 0;
      for (int i = 0; i < 2; ++i) {
        const F lhs = partial_derivative(gg, site_dot_ref(Y, W), i + 1);
        const F rhs = site_dot_ref(dY[i], W) + site_dot_ref(Y, dW[i]);
        err = std::max(err, max_abs(lhs - rhs));
      }
      hs.push_back(gg.h());
      errs.push_back(err);
    }
    CHECK(fixtures::fit_order(hs, errs) >= 1.9);
  }
}

TEST_CASE("rough Laplacian") {
  SUBCASE("pole is stationary") {
    const Grid g(16);
    CHECK(max_abs(rough_laplacian(flat(g), Section::constant(g, {0, 0, 1}))) == 0.0);
  }
  SUBCASE("pairing identity <L phi, Y> = <nabla phi, nabla Y>") {
    fixtures::Rng rng(59);
    for (int n : {8, 16, 33}) {
      const Grid g(n);
      const Section phi = random_section(g, rng);
      const auto A = u1_connection(g, fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1));
      const F Y = fixtures::noise_tangent(phi, rng);
      const double lhs = l2_inner(g, rough_laplacian(A, phi), Y);
      const double rhs = l2_inner(g, covariant_derivative_section(A, phi), covariant_derivative_vertical(A, phi, Y));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
  SUBCASE("adjoint pairing on arbitrary vertical one-forms") {
    fixtures::Rng rng(61);
    const Grid g(16);
    const Section phi = random_section(g, rng);
    const auto A = u1_connection(g, fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1));
    const OneForm<double> P{{fixtures::noise_tangent(phi, rng), fixtures::noise_tangent(phi, rng)}};
    const F Y = fixtures::noise_tangent(phi, rng);
    const double lhs = l2_inner(g, covariant_adjoint(A, phi, P), Y);
    const double rhs = l2_inner(g, P, covariant_derivative_vertical(A, phi, Y));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
  SUBCASE("great circle is harmonic") {
    // The tension of a unit-speed geodesic vanishes: -phi'' = phi is normal.
    for (int n : {32, 64, 128}) {
      const Grid g(n);
      const Section phi = project_to_sphere(
          g, g.sample_vector(3, [](double x1, double) { return Vec3<double>(std::sin(x1), 0, std::cos(x1)); }));
      CHECK(max_abs(rough_laplacian(flat(g), phi)) <= 1e-12);
    }
  }
  SUBCASE("tilted great circle is harmonic") {
    for (int n : {32, 64}) {
      const Grid g(n);
      const Section phi = project_to_sphere(g, g.sample_vector(3, [](double x1, double x2) {
        const double t = x1 + x2;
        return Vec3<double>(std::sin(t), std::cos(t) / std::sqrt(2.0), std::cos(t) / std::sqrt(2.0));
      }));
      CHECK(max_abs(rough_laplacian(flat(g), phi)) <= 1e-10);
    }
  }
}

TEST_CASE("moment term") {
  const Grid g(8);
  CHECK(max_abs(moment_term(Section::constant(g, {0, 0, 1}))) == 0.0);
  CHECK(max_abs(moment_term(Section::constant(g, {1, 0, 0}))) == 0.0);
  const double r = std::sqrt(2.0) / 2;
  const F m = moment_term(Section::constant(g, {r, 0, r}));
  CHECK(max_abs(m - const_vec(g, {-std::sqrt(2.0) / 4, 0, std::sqrt(2.0) / 4})) <= 1e-15);

  fixtures::Rng rng(67);
  const Grid gg(16);
  const Section phi = random_section(gg, rng);
  const F mt = moment_term(phi);
  CHECK(tangency_residual(phi, mt) <= 1e-15);
  CHECK(max_abs(site_dot_ref(mt, killing_field(phi))) <= 1e-15);

  SUBCASE("equals half the tangential gradient of |mu|^2") {
    // grad |y3|^2 = 2 y3 e3 in R^3, projected to T_y S^2.
    F half(3, gg.sites());
    for (Eigen::Index s = 0; s < gg.sites(); ++s) {
      const Eigen::Vector3d y = phi.at(s);
      const Eigen::Vector3d grad(0, 0, 2 * y[2]);
      half.col(s) = 0.5 * (grad - grad.dot(y) * y);
    }
    CHECK(max_abs(mt - half) <= 1e-12);
  }
}

TEST_CASE("phi star") {
  const Grid g(16);
  fixtures::Rng rng(71);
  const auto A = u1_connection(g, fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1));
  const auto ps = phi_star(A, Section::constant(g, {0, 0, 1}));
  CHECK(max_abs(ps[0]) == 0.0);
  CHECK(max_abs(ps[1]) == 0.0);

  const double c = -1.25;
  const auto pc = phi_star(u1_connection(g, g.constant(1, c), g.zeros(1)), Section::constant(g, {1, 0, 0}));
  CHECK(max_abs(pc[0] - g.constant(1, c)) == 0.0);
  CHECK(max_abs(pc[1]) == 0.0);

  const Section phi = random_section(g, rng);
  const OneForm<double> B{{fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1)}};
  const auto P = covariant_derivative_section(A, phi);
  const F X = killing_field(phi);
  double rhs = 0;
  for (int i = 0; i < 2; ++i) {
    F BX(3, g.sites());
    for (Eigen::Index s = 0; s < g.sites(); ++s) BX.col(s) = B[i](0, s) * X.col(s);
    rhs += l2_inner(g, P[i], BX);
  }
  CHECK(std::abs(l2_inner(g, phi_star(A, phi), B) - rhs) <= 1e-12);
}

TEST_CASE("project_to_sphere") {
  const Grid g(8);
  const Section e = Section::constant(g, {0.6, 0, 0.8});
  CHECK(max_abs(project_to_sphere(g, e.values()).values() - e.values()) <= 1e-16);
  CHECK(max_abs(project_to_sphere(g, const_vec(g, {0, 0, 2})).values() - const_vec(g, {0, 0, 1})) == 0.0);
  F raw = const_vec(g, {0, 0, 1});
  raw.col(5) = Eigen::Vector3d(0, 0.4, 0);
  CHECK_THROWS_AS(project_to_sphere(g, raw), BlowUpError);
  CHECK_THROWS_AS(Section(g, const_vec(g, {0, 0, 1.001})), Error);
}

TEST_CASE("curvature commutator") {
  SUBCASE("flat connection, constant section") {
    const Grid g(16);
    fixtures::Rng rng(73);
    const Section phi = Section::constant(g, {0.6, 0, 0.8});
    const auto r = commutator_check(flat(g), phi, fixtures::noise_tangent(phi, rng));
    CHECK(r.l2_norm <= 1e-14);
  }
  SUBCASE("random smooth data converge at second order") {
    fixtures::Rng rng(79);
    const auto ss = fixtures::random_section_spec(rng);
    const auto cs = fixtures::random_connection_spec(rng);
    std::array<fixtures::TrigPolynomial, 3> yp;
    for (auto& t : yp) t = fixtures::random_trig(rng);
    std::vector<double> hs, errs;
    for (int n : {32, 64, 128}) {
      const Grid g(n);
      const Section phi = ss.sample(g);
      hs.push_back(g.h());
      errs.push_back(commutator_check(cs.sample(g), phi, fixtures::smooth_tangent(phi, yp)).l2_norm);
    }
    CHECK(fixtures::fit_order(hs, errs) >= 1.9);
  }
  SUBCASE("pure gauge connection with constant section") {
    // A = d theta is flat and the section constant: the discrete commutator
    // vanishes to round-off.
    fixtures::Rng rng(83);
    const auto th = fixtures::random_trig(rng, 2, 1.0);
    for (int n : {32, 64, 128}) {
      const Grid g(n);
      const F theta = g.sample(th);
      const auto A = u1_connection(g, partial_derivative(g, theta, 1), partial_derivative(g, theta, 2));
      CHECK(max_abs(curvature(A).f12()) <= 1e-12);
      const Section phi = Section::constant(g, {0.6, 0, 0.8});
      const F Y = tangent_project(phi, const_vec(g, {0, 1, 0}));
      CHECK(commutator_check(A, phi, Y).l2_norm <= 1e-12);
    }
  }
}

TEST_CASE("gauge equivariance of the section derivative") {
  fixtures::Rng rng(89);
  const auto ss = fixtures::random_section_spec(rng);
  const auto cs = fixtures::random_connection_spec(rng);
  const auto th = fixtures::random_trig(rng, 2, 1.0);
  std::vector<double> hs, errs;
  for (int n : {32, 64, 128}) {
    const Grid g(n);
    const Section phi = ss.sample(g);
    const auto A = cs.sample(g);
    const GaugeAngle<double> theta{g.sample(th)};
    auto [A2, phi2] = gauge_transform(theta, A, phi);
    const auto P = covariant_derivative_section(A, phi);
    const auto P2 = covariant_derivative_section(A2, phi2);
    double err = 0;
    for (int i = 0; i < 2; ++i) {
      F rotated(3, g.sites());
      for (Eigen::Index s = 0; s < g.sites(); ++s) {
        const double c = std::cos(theta.theta(0, s)), sn = std::sin(theta.theta(0, s));
        rotated(0, s) = c * P[i](0, s) - sn * P[i](1, s);
        rotated(1, s) = sn * P[i](0, s) + c * P[i](1, s);
        rotated(2, s) = P[i](2, s);
      }
      err = std::max(err, max_abs(P2[i] - rotated));
    }
    hs.push_back(g.h());
    errs.push_back(err);
  }
  CHECK(fixtures::fit_order(hs, errs) >= 1.9);
}

TEST_CASE("sphere curvature tensor") {
  const Grid g(8);
  const F u = const_vec(g, {1, 0, 0}), v = const_vec(g, {0, 1, 0});
  CHECK(max_abs(sphere_curvature(u, v, v) - u) == 0.0);
  CHECK(max_abs(sphere_curvature(u, v, u) + v) == 0.0);
  CHECK(max_abs(sphere_curvature(u, u, v)) == 0.0);
}

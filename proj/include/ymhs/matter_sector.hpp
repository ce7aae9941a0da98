// Fiber model: S^2 in R^3 with the circle action rotating about e3.
//
//   generator        X(y) = e3 x y
//   moment map       mu(y) = y3
//   complex struct.  J(y) v = y x v
//   second fund. f.  AA(y)(v, w) = -<v, w> y
//
// Vertical fields along a section phi are R^3 fields tangent to phi pointwise.
//
// The discrete section derivative is
//
//   (nabla_A phi)_i = Pi_phi(D_i phi) + A_i X(phi),
//
// and the covariant derivative of a vertical field is its exact linearization
// along tangent variations of phi,
//
//   (nabla_A Y)_i = Pi_phi(D_i Y + A_i e3 x Y) - <D_i phi, phi> Y.
//
// The last term is O(h^2) (it vanishes in the continuum, where
// <d phi, phi> = 0) and makes the pairing identity
// <nabla_A* nabla_A phi, Y> = <nabla_A phi, nabla_A Y> the exact first
// variation of the discrete kinetic energy. Pi_phi(A_i e3 x Y) equals
// A_i (e3 x Y + <X(phi), Y> phi), the extrinsic form of nabla^K_Y X.
#pragma once

#include "ymhs/gauge_field.hpp"
#include "ymhs/sphere_section.hpp"

#include <type_traits>

namespace ymhs {

template <typename Scalar>
using VerticalField = Field<Scalar>;  // 3 x sites, tangent to a section

template <typename Scalar>
using VerticalOneForm = OneForm<Scalar>;  // two VerticalField components

namespace detail {

template <typename Scalar>
Field<Scalar> site_dot(const Field<Scalar>& u, const Field<Scalar>& v) {
  Field<Scalar> out(1, u.cols());
  const Eigen::Index rows = u.rows();
  for (Eigen::Index s = 0; s < u.cols(); ++s) {
    Scalar acc = 0;
    for (Eigen::Index r = 0; r < rows; ++r) acc += u(r, s) * v(r, s);
    out(0, s) = acc;
  }
  return out;
}

template <typename Scalar>
Field<Scalar> site_cross(const Field<Scalar>& u, const Field<Scalar>& v) {
  Field<Scalar> out(3, u.cols());
  for (Eigen::Index s = 0; s < u.cols(); ++s) {
    out(0, s) = u(1, s) * v(2, s) - u(2, s) * v(1, s);
    out(1, s) = u(2, s) * v(0, s) - u(0, s) * v(2, s);
    out(2, s) = u(0, s) * v(1, s) - u(1, s) * v(0, s);
  }
  return out;
}

/// e3 x v, site-wise.
template <typename Scalar>
Field<Scalar> e3_cross(const Field<Scalar>& v) {
  Field<Scalar> out(3, v.cols());
  for (Eigen::Index s = 0; s < v.cols(); ++s) {
    out(0, s) = -v(1, s);
    out(1, s) = v(0, s);
    out(2, s) = 0;
  }
  return out;
}

/// Row-vector field times each row of a 3 x sites field.
template <typename Scalar>
Field<Scalar> scale_sites(const Field<Scalar>& weights, const Field<Scalar>& v) {
  Field<Scalar> out(v.rows(), v.cols());
  for (Eigen::Index s = 0; s < v.cols(); ++s)
    for (Eigen::Index r = 0; r < v.rows(); ++r) out(r, s) = weights(0, s) * v(r, s);
  return out;
}

/// v - <v, p> p, site-wise.
template <typename Scalar>
Field<Scalar> remove_normal(const Field<Scalar>& p, const Field<Scalar>& v) {
  Field<Scalar> out(3, v.cols());
  for (Eigen::Index s = 0; s < v.cols(); ++s) {
    const Scalar d = v(0, s) * p(0, s) + v(1, s) * p(1, s) + v(2, s) * p(2, s);
    for (Eigen::Index r = 0; r < 3; ++r) out(r, s) = v(r, s) - d * p(r, s);
  }
  return out;
}

template <typename Scalar>
void require_u1(const Connection<Scalar>& A, const SphereSection<Scalar>& phi, const char* what) {
  if (!A.is_u1())
    throw Error(std::string(what) + ": matter coupling requires the abelian u(1) connection");
  if (!(A.grid == phi.grid())) throw Error(std::string(what) + ": grid mismatch");
}

template <typename Scalar>
void require_vertical(const SphereSection<Scalar>& phi, const Field<Scalar>& Y, Scalar tol, const char* what);

}  // namespace detail

/// Tangential projection Pi_phi v = v - <v, phi> phi.
template <typename Scalar>
VerticalField<Scalar> tangent_project(const SphereSection<Scalar>& phi, const std::type_identity_t<Field<Scalar>>& v) {
  require_shape(phi.grid(), v, "tangent_project");
  if (v.rows() != 3) throw Error("tangent_project: expected 3 rows");
  return detail::remove_normal(phi.values(), v);
}

/// max_x |<Y(x), phi(x)>|.
template <typename Scalar>
Scalar tangency_residual(const SphereSection<Scalar>& phi, const Field<Scalar>& Y) {
  require_shape(phi.grid(), Y, "tangency_residual");
  if (Y.rows() != 3) throw Error("tangency_residual: expected 3 rows");
  return detail::site_dot(Y, phi.values()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
void detail::require_vertical(const SphereSection<Scalar>& phi, const Field<Scalar>& Y, Scalar tol,
                              const char* what) {
  const Scalar r = tangency_residual(phi, Y);
  if (!(r <= tol)) {
    std::ostringstream os;
    os << what << ": input not tangent to the section (residual " << r << " > " << tol << ")";
    throw Error(os.str());
  }
}

/// Killing field of the unit generator, X(phi) = e3 x phi.
template <typename Scalar>
VerticalField<Scalar> killing_field(const SphereSection<Scalar>& phi) {
  return detail::e3_cross(phi.values());
}

/// Extrinsic nabla^K_Y X = Pi_phi(e3 x Y) = e3 x Y + <X(phi), Y> phi.
template <typename Scalar>
VerticalField<Scalar> killing_derivative(const SphereSection<Scalar>& phi, const std::type_identity_t<Field<Scalar>>& Y) {
  require_shape(phi.grid(), Y, "killing_derivative");
  const Field<Scalar>& p = phi.values();
  return detail::e3_cross(Y) + detail::scale_sites(detail::site_dot(detail::e3_cross(p), Y), p);
}

/// (J Y)(x) = phi(x) x Y(x).
template <typename Scalar>
VerticalField<Scalar> complex_structure_apply(const SphereSection<Scalar>& phi, const VerticalField<Scalar>& Y) {
  detail::require_vertical(phi, Y, Scalar(1e-8), "complex_structure_apply");
  return detail::site_cross(phi.values(), Y);
}

/// <D_i phi, phi> per site: the normal defect of the raw finite difference.
template <typename Scalar>
OneForm<Scalar> normal_defect(const SphereSection<Scalar>& phi) {
  const auto& g = phi.grid();
  const int n = g.n();
  const Scalar inv2h = Scalar(1) / (Scalar(2) * g.h());
  const Scalar* p = phi.values().data();
  OneForm<Scalar> out{{Field<Scalar>(1, g.sites()), Field<Scalar>(1, g.sites())}};
  Scalar* d1 = out[0].data();
  Scalar* d2 = out[1].data();
  auto dot = [p](Eigen::Index a, Eigen::Index b, Eigen::Index s) {
    return (p[3 * a] - p[3 * b]) * p[3 * s] + (p[3 * a + 1] - p[3 * b + 1]) * p[3 * s + 1] +
           (p[3 * a + 2] - p[3 * b + 2]) * p[3 * s + 2];
  };
  for (int i2 = 0; i2 < n; ++i2) {
    const Eigen::Index row = Eigen::Index(i2) * n;
    const Eigen::Index up = Eigen::Index((i2 + 1) % n) * n, down = Eigen::Index((i2 + n - 1) % n) * n;
    for (int i1 = 0; i1 < n; ++i1) {
      const Eigen::Index s = row + i1;
      const Eigen::Index right = row + (i1 + 1 == n ? 0 : i1 + 1), left = row + (i1 == 0 ? n - 1 : i1 - 1);
      d1[s] = dot(right, left, s) * inv2h;
      d2[s] = dot(up + i1, down + i1, s) * inv2h;
    }
  }
  return out;
}

/// (nabla_A phi)_i = Pi_phi(D_i phi) + A_i X(phi).
template <typename Scalar>
VerticalOneForm<Scalar> covariant_derivative_section(const Connection<Scalar>& A, const SphereSection<Scalar>& phi) {
  detail::require_u1(A, phi, "covariant_derivative_section");
  const auto& g = phi.grid();
  const Scalar* p = phi.values().data();
  VerticalOneForm<Scalar> out;
  for (int i = 0; i < 2; ++i) {
    Field<Scalar> D = partial_derivative(g, phi.values(), i + 1);
    const Scalar* a = A.a[i].data();
    Scalar* d = D.data();
    for (Eigen::Index s = 0; s < g.sites(); ++s) {
      const Scalar* ps = p + 3 * s;
      Scalar* ds = d + 3 * s;
      const Scalar n = ds[0] * ps[0] + ds[1] * ps[1] + ds[2] * ps[2];
      ds[0] += -n * ps[0] - a[s] * ps[1];
      ds[1] += -n * ps[1] + a[s] * ps[0];
      ds[2] += -n * ps[2];
    }
    out[i] = std::move(D);
  }
  return out;
}

namespace detail {
template <typename Scalar>
VerticalOneForm<Scalar> covariant_derivative_vertical_unchecked(const Connection<Scalar>& A,
                                                                const SphereSection<Scalar>& phi,
                                                                const OneForm<Scalar>& defect,
                                                                const Field<Scalar>& Y) {
  const auto& g = phi.grid();
  const Scalar* p = phi.values().data();
  const Scalar* y = Y.data();
  VerticalOneForm<Scalar> out;
  for (int i = 0; i < 2; ++i) {
    Field<Scalar> D = partial_derivative(g, Y, i + 1);
    const Scalar* a = A.a[i].data();
    const Scalar* c = defect[i].data();
    Scalar* d = D.data();
    for (Eigen::Index s = 0; s < g.sites(); ++s) {
      const Scalar* ps = p + 3 * s;
      const Scalar* ys = y + 3 * s;
      Scalar* ds = d + 3 * s;
      const Scalar w0 = ds[0] - a[s] * ys[1], w1 = ds[1] + a[s] * ys[0], w2 = ds[2];
      const Scalar n = w0 * ps[0] + w1 * ps[1] + w2 * ps[2];
      ds[0] = w0 - n * ps[0] - c[s] * ys[0];
      ds[1] = w1 - n * ps[1] - c[s] * ys[1];
      ds[2] = w2 - n * ps[2] - c[s] * ys[2];
    }
    out[i] = std::move(D);
  }
  return out;
}
}  // namespace detail

/// (nabla_A Y)_i for a vertical field Y along phi; see the header comment.
template <typename Scalar>
VerticalOneForm<Scalar> covariant_derivative_vertical(const Connection<Scalar>& A, const SphereSection<Scalar>& phi,
                                                      const VerticalField<Scalar>& Y) {
  detail::require_u1(A, phi, "covariant_derivative_vertical");
  detail::require_vertical(phi, Y, Scalar(1e-8), "covariant_derivative_vertical");
  return detail::covariant_derivative_vertical_unchecked(A, phi, normal_defect(phi), Y);
}

/// nabla_A* on vertical one-forms along phi, the exact L^2 adjoint of
/// `covariant_derivative_vertical`:
///   nabla_A* P = Pi_phi( sum_i -D_i P_i - A_i e3 x P_i - <D_i phi, phi> P_i ).
/// P is projected to the tangent bundle first.
template <typename Scalar>
VerticalField<Scalar> covariant_adjoint(const Connection<Scalar>& A, const SphereSection<Scalar>& phi,
                                        const VerticalOneForm<Scalar>& P) {
  detail::require_u1(A, phi, "covariant_adjoint");
  const auto& g = phi.grid();
  const OneForm<Scalar> defect = normal_defect(phi);
  Field<Scalar> acc = g.zeros(3);
  for (int i = 0; i < 2; ++i) {
    const Field<Scalar> Pi = tangent_project(phi, P[i]);
    const Field<Scalar> D = partial_derivative(g, Pi, i + 1);
    const Scalar* a = A.a[i].data();
    const Scalar* c = defect[i].data();
    for (Eigen::Index s = 0; s < g.sites(); ++s) {
      acc(0, s) -= D(0, s) - a[s] * Pi(1, s) + c[s] * Pi(0, s);
      acc(1, s) -= D(1, s) + a[s] * Pi(0, s) + c[s] * Pi(1, s);
      acc(2, s) -= D(2, s) + c[s] * Pi(2, s);
    }
  }
  return tangent_project(phi, acc);
}

/// Rough Laplacian nabla_A* nabla_A phi.
template <typename Scalar>
VerticalField<Scalar> rough_laplacian(const Connection<Scalar>& A, const SphereSection<Scalar>& phi) {
  return covariant_adjoint(A, phi, covariant_derivative_section(A, phi));
}

/// mu(phi) grad mu(phi) = phi3 (e3 - phi3 phi).
template <typename Scalar>
VerticalField<Scalar> moment_term(const SphereSection<Scalar>& phi) {
  const Field<Scalar>& p = phi.values();
  Field<Scalar> out(3, p.cols());
  for (Eigen::Index s = 0; s < p.cols(); ++s) {
    const Scalar m = p(2, s);
    out(0, s) = -m * m * p(0, s);
    out(1, s) = -m * m * p(1, s);
    out(2, s) = m * (Scalar(1) - m * p(2, s));
  }
  return out;
}

/// phi* nabla_A phi, the algebra-valued one-form <(nabla_A phi)_i, X(phi)>.
template <typename Scalar>
OneForm<Scalar> phi_star(const Connection<Scalar>& A, const SphereSection<Scalar>& phi) {
  const VerticalOneForm<Scalar> P = covariant_derivative_section(A, phi);
  const Field<Scalar> X = killing_field(phi);
  return {{detail::site_dot(P[0], X), detail::site_dot(P[1], X)}};
}

/// Curvature of S^2 (sectional curvature 1): R(u, v) w = <v, w> u - <u, w> v.
template <typename Scalar>
Field<Scalar> sphere_curvature(const Field<Scalar>& u, const Field<Scalar>& v, const Field<Scalar>& w) {
  return detail::scale_sites(detail::site_dot(v, w), u) - detail::scale_sites(detail::site_dot(u, w), v);
}

template <typename Scalar>
struct CommutatorResidual {
  Field<Scalar> residual;  // 3 x sites
  Scalar l2_norm;
};

/// Residual of [nabla_1, nabla_2] Y = R_K(nabla_1 phi, nabla_2 phi) Y + F_12 nabla^K_Y X.
template <typename Scalar>
CommutatorResidual<Scalar> commutator_check(const Connection<Scalar>& A, const SphereSection<Scalar>& phi,
                                            const VerticalField<Scalar>& Y) {
  detail::require_u1(A, phi, "commutator_check");
  detail::require_vertical(phi, Y, Scalar(1e-8), "commutator_check");
  const OneForm<Scalar> defect = normal_defect(phi);
  const auto dY = detail::covariant_derivative_vertical_unchecked(A, phi, defect, Y);
  const auto d1d2 = detail::covariant_derivative_vertical_unchecked(A, phi, defect, dY[1]);
  const auto d2d1 = detail::covariant_derivative_vertical_unchecked(A, phi, defect, dY[0]);
  const Field<Scalar> lhs = d1d2[0] - d2d1[1];

  const VerticalOneForm<Scalar> P = covariant_derivative_section(A, phi);
  const Curvature<Scalar> F = curvature(A);
  const Field<Scalar> rhs =
      sphere_curvature(P[0], P[1], Y) + detail::scale_sites(F.f12(), killing_derivative(phi, Y));
  Field<Scalar> r = lhs - rhs;
  const Scalar norm = std::sqrt(l2_inner(phi.grid(), r, r));
  return {std::move(r), norm};
}

}  // namespace ymhs

// Lie-algebra valued connection calculus on the torus.
//
// Sign conventions. D_A* is defined as the exact discrete L^2 adjoint of D_A
// with respect to l2_inner. On the flat torus with the identity pairing on
// algebra coordinates this gives
//
//   (D_A* F)_1 =  D_2 F - ad(A_2)^T F
//   (D_A* F)_2 = -D_1 F + ad(A_1)^T F          for a two-form F,
//   D_A* B     = -sum_i (D_i B_i - ad(A_i)^T B_i)   for a one-form B,
//
// i.e. the codifferential carries the minus sign of -div. Gauge
// transformations act by A -> A - d theta.
#pragma once

#include "ymhs/sphere_section.hpp"
#include "ymhs/torus_grid.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace ymhs {

/// Real Lie algebra in a fixed basis, given by structure constants
/// [e_i, e_j] = sum_k c^k_ij e_k. The pairing used everywhere is the identity
/// on coordinates.
template <typename Scalar>
class LieAlgebra {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// `structure[k](i, j)` = c^k_ij. Antisymmetry and the Jacobi identity are
  /// checked to `tol`.
  explicit LieAlgebra(std::vector<Matrix> structure, Scalar tol = Scalar(1e-12))
      : c_(std::move(structure)) {
    const int d = dim();
    if (d < 1) throw Error("LieAlgebra: dimension must be >= 1");
    for (const auto& ck : c_)
      if (ck.rows() != d || ck.cols() != d) throw Error("LieAlgebra: structure constants must be d x d");
    abelian_ = true;
    for (const auto& ck : c_) {
      if ((ck + ck.transpose()).cwiseAbs().maxCoeff() > tol)
        throw Error("LieAlgebra: structure constants are not antisymmetric");
      if (ck.cwiseAbs().maxCoeff() > 0) abelian_ = false;
    }
    // Jacobi: [e_i,[e_j,e_l]] + cyclic = 0, i.e.
    // sum_m c^m_jl c^k_im + c^m_li c^k_jm + c^m_ij c^k_lm = 0.
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          for (int k = 0; k < d; ++k) {
            Scalar sum = 0;
            for (int m = 0; m < d; ++m)
              sum += c_[m](j, l) * c_[k](i, m) + c_[m](l, i) * c_[k](j, m) +
                     c_[m](i, j) * c_[k](l, m);
            if (std::abs(sum) > tol) throw Error("LieAlgebra: Jacobi identity violated");
          }
  }

  static LieAlgebra u1() { return LieAlgebra({Matrix::Zero(1, 1)}); }

  /// so(3) in the basis with [e_i, e_j] = eps_ijk e_k.
  static LieAlgebra so3() {
    std::vector<Matrix> c(3, Matrix::Zero(3, 3));
    c[2](0, 1) = 1;
    c[2](1, 0) = -1;
    c[0](1, 2) = 1;
    c[0](2, 1) = -1;
    c[1](2, 0) = 1;
    c[1](0, 2) = -1;
    return LieAlgebra(std::move(c));
  }

  int dim() const { return static_cast<int>(c_.size()); }
  bool is_abelian() const { return abelian_; }
  Scalar structure(int k, int i, int j) const { return c_[k](i, j); }

  /// Site-wise bracket of two `dim x sites` fields.
  Field<Scalar> bracket(const Field<Scalar>& u, const Field<Scalar>& v) const {
    check_rows(u, "bracket");
    check_rows(v, "bracket");
    Field<Scalar> out = Field<Scalar>::Zero(dim(), u.cols());
    if (abelian_) return out;
    for (Eigen::Index s = 0; s < u.cols(); ++s)
      for (int k = 0; k < dim(); ++k) out(k, s) = u.col(s).dot(c_[k] * v.col(s));
    return out;
  }

  /// Site-wise ad(u)^T w, the pairing-adjoint of v -> [u, v].
  Field<Scalar> ad_transpose(const Field<Scalar>& u, const Field<Scalar>& w) const {
    check_rows(u, "ad_transpose");
    check_rows(w, "ad_transpose");
    Field<Scalar> out = Field<Scalar>::Zero(dim(), u.cols());
    if (abelian_) return out;
    for (Eigen::Index s = 0; s < u.cols(); ++s)
      for (int k = 0; k < dim(); ++k) out.col(s) += w(k, s) * (c_[k].transpose() * u.col(s));
    return out;
  }

  bool operator==(const LieAlgebra& o) const {
    if (dim() != o.dim()) return false;
    for (int k = 0; k < dim(); ++k)
      if (c_[k] != o.c_[k]) return false;
    return true;
  }

 private:
  void check_rows(const Field<Scalar>& f, const char* what) const {
    if (f.rows() != dim())
      throw Error(std::string("LieAlgebra::") + what + ": field has " + std::to_string(f.rows()) +
                  " rows, algebra dimension is " + std::to_string(dim()));
  }

  std::vector<Matrix> c_;
  bool abelian_ = true;
};

/// Connection A = A_1 dx^1 + A_2 dx^2 with algebra-valued coefficients,
/// written relative to the trivial reference connection C = 0.
template <typename Scalar>
struct Connection {
  TorusGrid<Scalar> grid;
  std::shared_ptr<const LieAlgebra<Scalar>> algebra;
  OneForm<Scalar> a;

  static Connection zero(const TorusGrid<Scalar>& grid,
                         std::shared_ptr<const LieAlgebra<Scalar>> algebra) {
    const int d = algebra->dim();
    return {grid, std::move(algebra), OneForm<Scalar>::zeros(grid, d)};
  }

  Connection(TorusGrid<Scalar> g, std::shared_ptr<const LieAlgebra<Scalar>> alg, OneForm<Scalar> comps)
      : grid(g), algebra(std::move(alg)), a(std::move(comps)) {
    if (!algebra) throw Error("Connection: algebra is null");
    for (int i = 0; i < 2; ++i) {
      require_shape(grid, a[i], "Connection");
      if (a[i].rows() != algebra->dim()) throw Error("Connection: component rows != algebra dimension");
    }
    if (!a.all_finite()) throw Error("Connection: non-finite entries");
  }

  bool is_u1() const { return algebra->dim() == 1 && algebra->is_abelian(); }
};

template <typename Scalar>
std::shared_ptr<const LieAlgebra<Scalar>> u1_algebra() {
  static const auto alg = std::make_shared<const LieAlgebra<Scalar>>(LieAlgebra<Scalar>::u1());
  return alg;
}

template <typename Scalar>
std::shared_ptr<const LieAlgebra<Scalar>> so3_algebra() {
  static const auto alg = std::make_shared<const LieAlgebra<Scalar>>(LieAlgebra<Scalar>::so3());
  return alg;
}

/// Builds a u(1) connection from two scalar fields.
template <typename Scalar>
Connection<Scalar> u1_connection(const TorusGrid<Scalar>& grid, Field<Scalar> a1, Field<Scalar> a2) {
  return Connection<Scalar>(grid, u1_algebra<Scalar>(), {{std::move(a1), std::move(a2)}});
}

template <typename Scalar>
struct Curvature {
  TorusGrid<Scalar> grid;
  std::shared_ptr<const LieAlgebra<Scalar>> algebra;
  TwoForm<Scalar> f;

  const Field<Scalar>& f12() const { return f.c12; }
};

namespace detail {
template <typename Scalar>
void require_same(const Connection<Scalar>& a, const Field<Scalar>& psi, const char* what) {
  require_shape(a.grid, psi, what);
  if (psi.rows() != a.algebra->dim()) throw Error(std::string(what) + ": algebra mismatch");
}
}  // namespace detail

/// F_12 = D_1 A_2 - D_2 A_1 + [A_1, A_2].
template <typename Scalar>
Curvature<Scalar> curvature(const Connection<Scalar>& A) {
  const auto& g = A.grid;
  Field<Scalar> f = partial_derivative(g, A.a[1], 1) - partial_derivative(g, A.a[0], 2);
  if (!A.algebra->is_abelian()) f += A.algebra->bracket(A.a[0], A.a[1]);
  return {g, A.algebra, {std::move(f)}};
}

/// Adjoint-bundle covariant derivative (D_A psi)_i = D_i psi + [A_i, psi].
template <typename Scalar>
OneForm<Scalar> covariant_derivative_ad(const Connection<Scalar>& A, const Field<Scalar>& psi) {
  detail::require_same(A, psi, "covariant_derivative_ad");
  OneForm<Scalar> out = gradient(A.grid, psi);
  if (!A.algebra->is_abelian())
    for (int i = 0; i < 2; ++i) out[i] += A.algebra->bracket(A.a[i], psi);
  return out;
}

/// Covariant exterior derivative on algebra-valued one-forms,
/// (D_A B)_12 = D_1 B_2 - D_2 B_1 + [A_1, B_2] - [A_2, B_1].
template <typename Scalar>
TwoForm<Scalar> exterior_derivative(const Connection<Scalar>& A, const OneForm<Scalar>& B) {
  detail::require_same(A, B[0], "exterior_derivative");
  detail::require_same(A, B[1], "exterior_derivative");
  const auto& g = A.grid;
  Field<Scalar> f = partial_derivative(g, B[1], 1) - partial_derivative(g, B[0], 2);
  if (!A.algebra->is_abelian())
    f += A.algebra->bracket(A.a[0], B[1]) - A.algebra->bracket(A.a[1], B[0]);
  return {std::move(f)};
}

/// D_A* on two-forms; exact L^2 adjoint of `exterior_derivative`.
template <typename Scalar>
OneForm<Scalar> codifferential(const Connection<Scalar>& A, const Field<Scalar>& f12) {
  detail::require_same(A, f12, "codifferential");
  const auto& g = A.grid;
  OneForm<Scalar> out{{partial_derivative(g, f12, 2), -partial_derivative(g, f12, 1)}};
  if (!A.algebra->is_abelian()) {
    out[0] -= A.algebra->ad_transpose(A.a[1], f12);
    out[1] += A.algebra->ad_transpose(A.a[0], f12);
  }
  return out;
}

template <typename Scalar>
OneForm<Scalar> codifferential(const Connection<Scalar>& A, const Curvature<Scalar>& F) {
  return codifferential(A, F.f12());
}

/// D_A* on one-forms (values in 0-forms); exact L^2 adjoint of
/// `covariant_derivative_ad`.
template <typename Scalar>
Field<Scalar> codifferential_oneform(const Connection<Scalar>& A, const OneForm<Scalar>& B) {
  detail::require_same(A, B[0], "codifferential_oneform");
  detail::require_same(A, B[1], "codifferential_oneform");
  const auto& g = A.grid;
  Field<Scalar> out = -(partial_derivative(g, B[0], 1) + partial_derivative(g, B[1], 2));
  if (!A.algebra->is_abelian())
    out += A.algebra->ad_transpose(A.a[0], B[0]) + A.algebra->ad_transpose(A.a[1], B[1]);
  return out;
}

/// Yang-Mills energy 1/2 ||F||^2.
template <typename Scalar>
Scalar yang_mills_energy(const Curvature<Scalar>& F) {
  return Scalar(0.5) * l2_inner(F.grid, F.f12(), F.f12());
}

/// Abelian gauge parameter theta (radians, stored unwrapped).
template <typename Scalar>
struct GaugeAngle {
  Field<Scalar> theta;  // 1 x sites

  static GaugeAngle zeros(const TorusGrid<Scalar>& grid) { return {grid.zeros(1)}; }
};

/// Gauge action on the connection alone, A -> A - d theta.
template <typename Scalar>
Connection<Scalar> gauge_transform_connection(const GaugeAngle<Scalar>& theta, const Connection<Scalar>& A) {
  if (!A.is_u1()) throw Error("gauge_transform: only the abelian u(1) action is implemented");
  require_shape(A.grid, theta.theta, "gauge_transform");
  OneForm<Scalar> dtheta = gradient(A.grid, theta.theta);
  return Connection<Scalar>(A.grid, A.algebra, A.a - dtheta);
}

/// Abelian gauge action on the pair (A, phi): A'_i = A_i - D_i theta and
/// phi'(x) = R_z(theta(x)) phi(x). Acting by theta1 then theta2 equals acting by
/// theta1 + theta2.
template <typename Scalar>
std::pair<Connection<Scalar>, SphereSection<Scalar>> gauge_transform(const GaugeAngle<Scalar>& theta,
                                                                     const Connection<Scalar>& A,
                                                                     const SphereSection<Scalar>& phi) {
  Connection<Scalar> a2 = gauge_transform_connection(theta, A);
  if (!(phi.grid() == A.grid)) throw Error("gauge_transform: grid mismatch");
  const Field<Scalar>& v = phi.values();
  Field<Scalar> out(3, v.cols());
  for (Eigen::Index s = 0; s < v.cols(); ++s) {
    const Scalar c = std::cos(theta.theta(0, s));
    const Scalar sn = std::sin(theta.theta(0, s));
    out(0, s) = c * v(0, s) - sn * v(1, s);
    out(1, s) = sn * v(0, s) + c * v(1, s);
    out(2, s) = v(2, s);
  }
  return {std::move(a2), SphereSection<Scalar>(phi.grid(), std::move(out))};
}

}  // namespace ymhs

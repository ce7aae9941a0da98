// Periodic discretization of the flat torus [0, 2pi)^2.
//
// Every field is stored as a dense `components x sites` matrix. Sites are
// ordered row-major: site = i2 * N + i1, where i1 indexes x^1 (fastest) and
// i2 indexes x^2. Multi-component fields (Lie-algebra valued, R^3 valued) put
// one component per row.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ymhs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
class TorusGrid {
 public:
  static constexpr int kMinPoints = 8;

  explicit TorusGrid(int n) : n_(n), h_(Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n)) {
    if (n < kMinPoints) {
      throw Error("TorusGrid: N must be >= " + std::to_string(kMinPoints) + ", got " +
                  std::to_string(n));
    }
  }

  int n() const { return n_; }
  Scalar h() const { return h_; }
  Eigen::Index sites() const { return Eigen::Index(n_) * n_; }
  Scalar length() const { return Scalar(2) * std::numbers::pi_v<Scalar>; }

  Eigen::Index site(int i1, int i2) const {
    return Eigen::Index(wrap(i2)) * n_ + wrap(i1);
  }
  Scalar coord(int i) const { return Scalar(i) * h_; }

  Field<Scalar> zeros(int components) const { return Field<Scalar>::Zero(components, sites()); }
  Field<Scalar> constant(int components, Scalar value) const {
    return Field<Scalar>::Constant(components, sites(), value);
  }

  /// Samples `fn(x1, x2)` into a one-component field.
  template <typename Fn>
  Field<Scalar> sample(Fn&& fn) const {
    Field<Scalar> out(1, sites());
    for (int i2 = 0; i2 < n_; ++i2)
      for (int i1 = 0; i1 < n_; ++i1) out(0, site(i1, i2)) = fn(coord(i1), coord(i2));
    return out;
  }

  /// Samples a vector-valued `fn(x1, x2) -> Eigen vector` into a field with
  /// `components` rows.
  template <typename Fn>
  Field<Scalar> sample_vector(int components, Fn&& fn) const {
    Field<Scalar> out(components, sites());
    for (int i2 = 0; i2 < n_; ++i2)
      for (int i1 = 0; i1 < n_; ++i1) out.col(site(i1, i2)) = fn(coord(i1), coord(i2));
    return out;
  }

  bool operator==(const TorusGrid& other) const { return n_ == other.n_; }

 private:
  int wrap(int i) const { return ((i % n_) + n_) % n_; }

  int n_;
  Scalar h_;
};

template <typename Scalar>
void require_shape(const TorusGrid<Scalar>& grid, const Field<Scalar>& f, const char* what) {
  if (f.cols() != grid.sites()) {
    throw Error(std::string(what) + ": field has " + std::to_string(f.cols()) +
                " sites, grid has " + std::to_string(grid.sites()));
  }
}

/// One-form field: component 0 multiplies dx^1, component 1 multiplies dx^2.
/// Each component may itself carry several rows (algebra or R^3 coordinates).
template <typename Scalar>
struct OneForm {
  std::array<Field<Scalar>, 2> c;

  Field<Scalar>& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const Field<Scalar>& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  static OneForm zeros(const TorusGrid<Scalar>& grid, int rows) {
    return {{grid.zeros(rows), grid.zeros(rows)}};
  }
  Eigen::Index rows() const { return c[0].rows(); }

  OneForm& operator+=(const OneForm& o) {
    c[0] += o.c[0];
    c[1] += o.c[1];
    return *this;
  }
  OneForm& operator-=(const OneForm& o) {
    c[0] -= o.c[0];
    c[1] -= o.c[1];
    return *this;
  }
  OneForm& operator*=(Scalar s) {
    c[0] *= s;
    c[1] *= s;
    return *this;
  }
  bool all_finite() const { return c[0].allFinite() && c[1].allFinite(); }
};

template <typename Scalar>
OneForm<Scalar> operator+(OneForm<Scalar> a, const OneForm<Scalar>& b) { return a += b; }
template <typename Scalar>
OneForm<Scalar> operator-(OneForm<Scalar> a, const OneForm<Scalar>& b) { return a -= b; }
template <typename Scalar>
OneForm<Scalar> operator*(Scalar s, OneForm<Scalar> a) { return a *= s; }
template <typename Scalar>
OneForm<Scalar> operator-(OneForm<Scalar> a) { return a *= Scalar(-1); }

/// Two-form field, the single component multiplying dx^1 ^ dx^2.
template <typename Scalar>
struct TwoForm {
  Field<Scalar> c12;
};

/// Second-order central difference along `axis` (1 or 2) with periodic wrap.
/// Applied row by row, so any component count is accepted.
template <typename Scalar>
Field<Scalar> partial_derivative(const TorusGrid<Scalar>& grid, const Field<Scalar>& f, int axis) {
  if (axis != 1 && axis != 2) throw Error("partial_derivative: axis must be 1 or 2");
  require_shape(grid, f, "partial_derivative");
  const Eigen::Index n = grid.n();
  const Scalar inv2h = Scalar(1) / (Scalar(2) * grid.h());
  Field<Scalar> out(f.rows(), f.cols());
  if (axis == 1) {
    for (Eigen::Index i2 = 0; i2 < n; ++i2) {
      const Eigen::Index b = i2 * n;
      out.middleCols(b + 1, n - 2) = (f.middleCols(b + 2, n - 2) - f.middleCols(b, n - 2)) * inv2h;
      out.col(b) = (f.col(b + 1) - f.col(b + n - 1)) * inv2h;
      out.col(b + n - 1) = (f.col(b) - f.col(b + n - 2)) * inv2h;
    }
  } else {
    for (Eigen::Index i2 = 0; i2 < n; ++i2) {
      const Eigen::Index fwd = ((i2 + 1) % n) * n, bwd = ((i2 + n - 1) % n) * n;
      out.middleCols(i2 * n, n) = (f.middleCols(fwd, n) - f.middleCols(bwd, n)) * inv2h;
    }
  }
  return out;
}

/// Discrete differential of a 0-form: (d f)_i = D_i f.
template <typename Scalar>
OneForm<Scalar> gradient(const TorusGrid<Scalar>& grid, const Field<Scalar>& f) {
  return {{partial_derivative(grid, f, 1), partial_derivative(grid, f, 2)}};
}

/// Discrete L^2 pairing h^2 * sum_sites <u, v>. The reduction runs in storage
/// order, so repeated evaluation is bit-identical.
template <typename Scalar>
Scalar l2_inner(const TorusGrid<Scalar>& grid, const Field<Scalar>& u, const Field<Scalar>& v) {
  require_shape(grid, u, "l2_inner");
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw Error("l2_inner: shape mismatch");
  Scalar acc = 0;
  for (Eigen::Index s = 0; s < u.cols(); ++s)
    for (Eigen::Index r = 0; r < u.rows(); ++r) acc += u(r, s) * v(r, s);
  return grid.h() * grid.h() * acc;
}

template <typename Scalar>
Scalar l2_inner(const TorusGrid<Scalar>& grid, const OneForm<Scalar>& u, const OneForm<Scalar>& v) {
  return l2_inner(grid, u[0], v[0]) + l2_inner(grid, u[1], v[1]);
}

template <typename Scalar>
Scalar l2_inner(const TorusGrid<Scalar>& grid, const TwoForm<Scalar>& u, const TwoForm<Scalar>& v) {
  return l2_inner(grid, u.c12, v.c12);
}

template <typename Scalar, typename T>
Scalar l2_norm_squared(const TorusGrid<Scalar>& grid, const T& u) {
  return l2_inner(grid, u, u);
}

/// Base complex structure on one-forms, (j w)(X) = w(jX) with j d1 = d2 and
/// j d2 = -d1.
template <typename Scalar>
OneForm<Scalar> j_on_oneform(const OneForm<Scalar>& w) {
  if (w[0].rows() != w[1].rows() || w[0].cols() != w[1].cols())
    throw Error("j_on_oneform: component shape mismatch");
  return {{w[1], -w[0]}};
}

}  // namespace ymhs

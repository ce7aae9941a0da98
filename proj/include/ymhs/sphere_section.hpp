// Sections of the associated S^2 bundle over the torus (trivial bundle, so a
// section is a unit-vector field), and the constraint-restoring projection.
#pragma once

#include "ymhs/torus_grid.hpp"

#include <sstream>

namespace ymhs {

/// Raised when a field leaves the regime where the sphere projection is well
/// defined (|raw| < 0.5 somewhere) or a right-hand side turns non-finite.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
Scalar max_unit_violation(const Field<Scalar>& v) {
  Scalar worst = 0;
  for (Eigen::Index s = 0; s < v.cols(); ++s) {
    Scalar sq = 0;
    for (Eigen::Index c = 0; c < v.rows(); ++c) sq += v(c, s) * v(c, s);
    worst = std::max(worst, std::abs(std::sqrt(sq) - Scalar(1)));
  }
  return worst;
}

template <typename Scalar>
class SphereSection {
 public:
  static constexpr Scalar kUnitTolerance = Scalar(1e-12);

  SphereSection(TorusGrid<Scalar> grid, Field<Scalar> values) : grid_(grid), v_(std::move(values)) {
    require_shape(grid_, v_, "SphereSection");
    if (v_.rows() != 3) throw Error("SphereSection: expected 3 rows");
    if (!v_.allFinite()) throw Error("SphereSection: non-finite entries");
    const Scalar bad = max_unit_violation(v_);
    if (bad > kUnitTolerance) {
      std::ostringstream os;
      os << "SphereSection: unit-norm violation " << bad << " exceeds " << kUnitTolerance
         << " (use project_to_sphere)";
      throw Error(os.str());
    }
  }

  static SphereSection constant(const TorusGrid<Scalar>& grid, const Vec3<Scalar>& y) {
    Field<Scalar> v(3, grid.sites());
    v.colwise() = y.normalized();
    return SphereSection(grid, std::move(v));
  }

  const TorusGrid<Scalar>& grid() const { return grid_; }
  const Field<Scalar>& values() const { return v_; }
  Vec3<Scalar> at(Eigen::Index site) const { return v_.col(site); }
  Scalar constraint_violation() const { return max_unit_violation(v_); }

 private:
  struct normalized_tag {};
  SphereSection(normalized_tag, const TorusGrid<Scalar>& grid, Field<Scalar> values)
      : grid_(grid), v_(std::move(values)) {}

  template <typename S>
  friend SphereSection<S> project_to_sphere(const TorusGrid<S>& grid, const Field<S>& raw);

  TorusGrid<Scalar> grid_;
  Field<Scalar> v_;
};

/// phi(x) = raw(x) / |raw(x)|. Throws BlowUpError if |raw| < 0.5 anywhere.
template <typename Scalar>
SphereSection<Scalar> project_to_sphere(const TorusGrid<Scalar>& grid, const Field<Scalar>& raw) {
  require_shape(grid, raw, "project_to_sphere");
  if (raw.rows() != 3) throw Error("project_to_sphere: expected 3 rows");
  Field<Scalar> out(3, raw.cols());
  for (Eigen::Index s = 0; s < raw.cols(); ++s) {
    const Scalar r = std::sqrt(raw(0, s) * raw(0, s) + raw(1, s) * raw(1, s) + raw(2, s) * raw(2, s));
    if (!(r >= Scalar(0.5))) {
      std::ostringstream os;
      os << "project_to_sphere: |raw| = " << r << " at site " << s << " (i1=" << s % grid.n()
         << ", i2=" << s / grid.n() << "); solution left the regime of validity";
      throw BlowUpError(os.str());
    }
    const Scalar inv = Scalar(1) / r;
    for (Eigen::Index c = 0; c < 3; ++c) out(c, s) = raw(c, s) * inv;
  }
  return SphereSection<Scalar>(typename SphereSection<Scalar>::normalized_tag{}, grid, std::move(out));
}

}  // namespace ymhs

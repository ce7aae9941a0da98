// Seeded random fields for property checks. Smooth fields are random
// trigonometric polynomials of low degree, so refinement studies see a fixed
// continuum function; `noise` fields are i.i.d. per site.
#pragma once

#include "ymhs/flow_engine.hpp"

#include <random>

namespace ymhs::fixtures {

using Rng = std::mt19937_64;

template <typename Scalar>
Scalar uniform(Rng& rng, Scalar lo = Scalar(-1), Scalar hi = Scalar(1)) {
  return std::uniform_real_distribution<double>(double(lo), double(hi))(rng);
}

/// Coefficients of sum_{|k1|,|k2| <= modes} a cos(k.x) + b sin(k.x), drawn once
/// so the same function can be sampled on several grids.
struct TrigPolynomial {
  struct Term {
    int k1, k2;
    double a, b;
  };
  std::vector<Term> terms;

  template <typename Scalar>
  Scalar operator()(Scalar x1, Scalar x2) const {
    Scalar v = 0;
    for (const auto& t : terms) {
      const Scalar arg = Scalar(t.k1) * x1 + Scalar(t.k2) * x2;
      v += Scalar(t.a) * std::cos(arg) + Scalar(t.b) * std::sin(arg);
    }
    return v;
  }
  double bound() const {
    double b = 0;
    for (const auto& t : terms) b += std::abs(t.a) + std::abs(t.b);
    return b;
  }
};

inline TrigPolynomial random_trig(Rng& rng, int modes = 2, double amplitude = 1.0) {
  TrigPolynomial p;
  for (int k1 = -modes; k1 <= modes; ++k1)
    for (int k2 = 0; k2 <= modes; ++k2) {
      if (k2 == 0 && k1 < 0) continue;
      const double decay = amplitude / (1.0 + k1 * k1 + k2 * k2);
      p.terms.push_back({k1, k2, decay * uniform(rng, -1.0, 1.0), decay * uniform(rng, -1.0, 1.0)});
    }
  return p;
}

/// A smooth section drawn once and sampled on any grid: normalize(c + s(x))
/// with |s| <= 0.45 and |c| = 1, so the raw field stays clear of zero.
struct SmoothSectionSpec {
  Eigen::Vector3d center;
  std::array<TrigPolynomial, 3> parts;
  double scale = 1.0;

  template <typename Scalar>
  SphereSection<Scalar> sample(const TorusGrid<Scalar>& grid) const {
    const Field<Scalar> raw = grid.sample_vector(3, [this](Scalar x1, Scalar x2) {
      Vec3<Scalar> v;
      for (int c = 0; c < 3; ++c) v[c] = Scalar(center[c]) + Scalar(scale) * parts[c](x1, x2);
      return v;
    });
    return project_to_sphere(grid, raw);
  }
};

inline SmoothSectionSpec random_section_spec(Rng& rng, int modes = 2) {
  SmoothSectionSpec s;
  s.center = Eigen::Vector3d(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)).normalized();
  double bound = 0;
  for (auto& p : s.parts) {
    p = random_trig(rng, modes);
    bound += p.bound();
  }
  s.scale = 0.45 / bound;
  return s;
}

template <typename Scalar>
Field<Scalar> noise(const TorusGrid<Scalar>& grid, Rng& rng, int rows, Scalar amplitude = Scalar(1)) {
  Field<Scalar> f(rows, grid.sites());
  for (Eigen::Index s = 0; s < f.cols(); ++s)
    for (Eigen::Index r = 0; r < f.rows(); ++r) f(r, s) = amplitude * uniform<Scalar>(rng);
  return f;
}

template <typename Scalar>
Field<Scalar> smooth_field(const TorusGrid<Scalar>& grid, const std::vector<TrigPolynomial>& rows) {
  Field<Scalar> f(static_cast<Eigen::Index>(rows.size()), grid.sites());
  for (std::size_t r = 0; r < rows.size(); ++r) f.row(Eigen::Index(r)) = grid.sample(rows[r]);
  return f;
}

/// Random u(1) connection whose components are smooth trig polynomials.
struct SmoothConnectionSpec {
  TrigPolynomial a1, a2;

  template <typename Scalar>
  Connection<Scalar> sample(const TorusGrid<Scalar>& grid) const {
    return u1_connection(grid, grid.sample(a1), grid.sample(a2));
  }
};

inline SmoothConnectionSpec random_connection_spec(Rng& rng, int modes = 2, double amplitude = 0.5) {
  return {random_trig(rng, modes, amplitude), random_trig(rng, modes, amplitude)};
}

/// Random tangent field along phi (noise, projected).
template <typename Scalar>
VerticalField<Scalar> noise_tangent(const SphereSection<Scalar>& phi, Rng& rng) {
  return tangent_project(phi, noise(phi.grid(), rng, 3));
}

/// Smooth tangent field along phi drawn from three trig polynomials.
template <typename Scalar>
VerticalField<Scalar> smooth_tangent(const SphereSection<Scalar>& phi, const std::array<TrigPolynomial, 3>& parts) {
  return tangent_project(phi, smooth_field(phi.grid(), {parts[0], parts[1], parts[2]}));
}

template <typename Scalar>
FlowState<Scalar> noise_state(const TorusGrid<Scalar>& grid, Rng& rng) {
  Field<Scalar> raw = noise(grid, rng, 3);
  raw.row(2).array() += Scalar(2);
  return {project_to_sphere(grid, raw), u1_connection(grid, noise(grid, rng, 1), noise(grid, rng, 1)), 0};
}

template <typename Scalar>
FlowState<Scalar> smooth_state(const TorusGrid<Scalar>& grid, const SmoothSectionSpec& s, const SmoothConnectionSpec& c) {
  return {s.sample(grid), c.sample(grid), 0};
}

/// Least-squares slope of log(err) against log(h).
inline double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

}  // namespace ymhs::fixtures

// Yang-Mills-Higgs functional and the quantities monitored along a flow.
//
// Normalizations (two conventions coexist and are kept verbatim):
//
//   YMH(phi, A) = ||nabla_A phi||^2 + ||F_A||^2 + ||mu(phi)||^2          (no 1/2)
//   E_k         = 1/2 sum_{l=0..k} ||nabla_A^l F_A||^2 + ||nabla_A^{l+1} phi||^2
//
// so E_0 = (kinetic + curvature) / 2. The "gradient pair"
//
//   G_phi = nabla_A* nabla_A phi + mu grad mu,   G_A = D_A* F_A + phi* nabla_A phi
//
// is half the L^2 gradient of YMH: dYMH = 2 (<G_phi, dphi> + <G_A, dA>).
#pragma once

#include "ymhs/gauge_field.hpp"
#include "ymhs/matter_sector.hpp"

#include <limits>
#include <vector>

namespace ymhs {

template <typename Scalar>
struct YmhParts {
  Scalar total;
  Scalar kinetic;
  Scalar curvature;
  Scalar potential;
};

template <typename Scalar>
YmhParts<Scalar> ymh_functional(const SphereSection<Scalar>& phi, const Connection<Scalar>& A) {
  const auto& g = phi.grid();
  const VerticalOneForm<Scalar> P = covariant_derivative_section(A, phi);
  const Curvature<Scalar> F = curvature(A);
  const Field<Scalar> mu = phi.values().row(2);
  YmhParts<Scalar> out;
  out.kinetic = l2_inner(g, P, P);
  out.curvature = l2_inner(g, F.f12(), F.f12());
  out.potential = l2_inner(g, mu, mu);
  out.total = out.kinetic + out.curvature + out.potential;
  return out;
}

template <typename Scalar>
struct GradientPair {
  VerticalField<Scalar> phi;  // 3 x sites, tangent
  OneForm<Scalar> a;          // u(1)-valued one-form
};

template <typename Scalar>
GradientPair<Scalar> ymh_gradient(const SphereSection<Scalar>& phi, const Connection<Scalar>& A) {
  const VerticalOneForm<Scalar> P = covariant_derivative_section(A, phi);
  const Field<Scalar> X = killing_field(phi);
  GradientPair<Scalar> g;
  g.phi = covariant_adjoint(A, phi, P) + moment_term(phi);
  g.a = codifferential(A, curvature(A));
  g.a += OneForm<Scalar>{{detail::site_dot(P[0], X), detail::site_dot(P[1], X)}};
  return g;
}

template <typename Scalar>
Scalar gradient_norm_squared(const TorusGrid<Scalar>& grid, const GradientPair<Scalar>& g) {
  return l2_inner(grid, g.phi, g.phi) + l2_inner(grid, g.a, g.a);
}

namespace detail {
// ||T||^2 for a tensor stored as a flat list of component fields.
template <typename Scalar>
Scalar components_norm_squared(const TorusGrid<Scalar>& g, const std::vector<Field<Scalar>>& comps) {
  Scalar acc = 0;
  for (const auto& c : comps) acc += l2_inner(g, c, c);
  return acc;
}
}  // namespace detail

inline constexpr int kMaxHierarchyOrder = 3;

/// E_0..E_{k_max}. Iterated derivatives act componentwise on the tensor
/// indices (flat base): nabla^{l+1} F has components D_{i_{l+1}} ... D_{i_1} F,
/// each index ranging over {1, 2}, differentiated with
/// `covariant_derivative_ad`; the phi tower uses `covariant_derivative_vertical`.
/// Components are ordered with the newest index slowest.
template <typename Scalar>
std::vector<Scalar> energy_hierarchy(const SphereSection<Scalar>& phi, const Connection<Scalar>& A, int k_max,
                                     int k_limit = kMaxHierarchyOrder) {
  if (k_max < 0 || k_max > k_limit)
    throw Error("energy_hierarchy: k_max must be in [0, " + std::to_string(k_limit) + "]");
  detail::require_u1(A, phi, "energy_hierarchy");
  const auto& g = phi.grid();
  const OneForm<Scalar> defect = normal_defect(phi);

  std::vector<Field<Scalar>> f_tower{curvature(A).f12()};
  const VerticalOneForm<Scalar> P = covariant_derivative_section(A, phi);
  std::vector<Field<Scalar>> phi_tower{P[0], P[1]};

  std::vector<Scalar> E;
  Scalar running = 0;
  for (int l = 0; l <= k_max; ++l) {
    running += Scalar(0.5) * (detail::components_norm_squared(g, f_tower) + detail::components_norm_squared(g, phi_tower));
    E.push_back(running);
    if (l == k_max) break;
    std::vector<Field<Scalar>> next_f, next_phi;
    for (int i = 0; i < 2; ++i) {
      for (const auto& c : f_tower) next_f.push_back(covariant_derivative_ad(A, c)[i]);
      for (const auto& c : phi_tower)
        next_phi.push_back(detail::covariant_derivative_vertical_unchecked(A, phi, defect, c)[i]);
    }
    f_tower = std::move(next_f);
    phi_tower = std::move(next_phi);
  }
  return E;
}

/// ||A - C||_{W^{k,2}(nabla_C)} = (sum_{i<=k} ||nabla_C^i (A - C)||^2)^{1/2}.
template <typename Scalar>
Scalar sobolev_norm(const Connection<Scalar>& A, const Connection<Scalar>& C, int k) {
  if (k < 0 || k > kMaxHierarchyOrder) throw Error("sobolev_norm: k must be in [0, 3]");
  if (!(A.grid == C.grid) || !(*A.algebra == *C.algebra)) throw Error("sobolev_norm: connection mismatch");
  const auto& g = A.grid;
  std::vector<Field<Scalar>> tower{A.a[0] - C.a[0], A.a[1] - C.a[1]};
  Scalar acc = 0;
  for (int l = 0; l <= k; ++l) {
    acc += detail::components_norm_squared(g, tower);
    if (l == k) break;
    std::vector<Field<Scalar>> next;
    for (int i = 0; i < 2; ++i)
      for (const auto& c : tower) next.push_back(covariant_derivative_ad(C, c)[i]);
    tower = std::move(next);
  }
  return std::sqrt(acc);
}

template <typename Scalar>
Scalar sobolev_norm(const Connection<Scalar>& A, int k) {
  return sobolev_norm(A, Connection<Scalar>::zero(A.grid, A.algebra), k);
}

template <typename Scalar>
struct VariationalResult {
  Scalar finite_difference;  // [YMH(+s) - YMH(-s)] / 2s
  Scalar assembled;          // 2 (<G_phi, dphi> + <G_A, dA>)
  Scalar abs_error;
  Scalar rel_error;
};

/// Central-difference directional derivative of YMH along (dphi, dA), with the
/// sphere retraction phi -> normalize(phi + s dphi), against the assembled
/// gradient pair.
template <typename Scalar>
VariationalResult<Scalar> variational_check(const SphereSection<Scalar>& phi, const Connection<Scalar>& A,
                                            const VerticalField<Scalar>& dphi, const OneForm<Scalar>& dA,
                                            Scalar step) {
  if (!(step >= Scalar(1e-7) && step <= Scalar(1e-3))) throw Error("variational_check: step outside [1e-7, 1e-3]");
  const auto& g = phi.grid();
  detail::require_vertical(phi, dphi, Scalar(1e-10), "variational_check");
  const Scalar dir_norm = l2_inner(g, dphi, dphi) + l2_inner(g, dA, dA);
  if (!(dir_norm > 0)) throw Error("variational_check: degenerate (zero) direction");

  auto ymh_at = [&](Scalar s) {
    const SphereSection<Scalar> p = project_to_sphere(g, Field<Scalar>(phi.values() + s * dphi));
    const Connection<Scalar> a(A.grid, A.algebra, A.a + s * dA);
    return ymh_functional(p, a).total;
  };
  VariationalResult<Scalar> r;
  r.finite_difference = (ymh_at(step) - ymh_at(-step)) / (Scalar(2) * step);
  const GradientPair<Scalar> G = ymh_gradient(phi, A);
  r.assembled = Scalar(2) * (l2_inner(g, G.phi, dphi) + l2_inner(g, G.a, dA));
  r.abs_error = std::abs(r.finite_difference - r.assembled);
  r.rel_error = r.abs_error / std::max(std::abs(r.assembled), std::numeric_limits<Scalar>::min());
  return r;
}

template <typename Scalar>
struct EnergyReport {
  Scalar t = 0;
  Scalar ymh = 0;
  Scalar kinetic = 0;
  Scalar curvature = 0;
  Scalar potential = 0;
  std::vector<Scalar> e;  // E_0..E_{k_max}
  Scalar constraint = 0;  // max_x | |phi| - 1 |
  Scalar a_w12 = 0;       // ||A - C||_{W^{1,2}}
};

template <typename Scalar>
EnergyReport<Scalar> make_report(Scalar t, const SphereSection<Scalar>& phi, const Connection<Scalar>& A, int k_max) {
  EnergyReport<Scalar> r;
  const YmhParts<Scalar> parts = ymh_functional(phi, A);
  r.t = t;
  r.ymh = parts.total;
  r.kinetic = parts.kinetic;
  r.curvature = parts.curvature;
  r.potential = parts.potential;
  r.e = energy_hierarchy(phi, A, k_max);
  r.constraint = phi.constraint_violation();
  r.a_w12 = sobolev_norm(A, 1);
  return r;
}

}  // namespace ymhs

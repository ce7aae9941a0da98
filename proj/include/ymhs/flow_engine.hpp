// Right-hand sides and time integration for the four flows on (phi, A):
//
//   ymhs     d_t phi = -J G_phi,              d_t A = -j G_A
//   asf      d_t phi = -J G_phi,              A frozen
//   viscous  d_t phi = -(eps + J) G_phi,      d_t A = -(eps + j) G_A
//   deturck  viscous + infinitesimal gauge by eta = eps D_B* b, with the
//            gauge ODE d_t theta = -eta
//
// where (G_phi, G_A) is the YMH gradient pair of energy_monitor.hpp. The
// DeTurck modification of the psi equation, (eps D_B* b) psi, is realized as
// the fiber action eta X(psi).
#pragma once

#include "ymhs/energy_monitor.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ymhs {

enum class FlowSystem { ymhs, asf, viscous, deturck };

inline const char* to_string(FlowSystem s) {
  switch (s) {
    case FlowSystem::ymhs: return "ymhs";
    case FlowSystem::asf: return "asf";
    case FlowSystem::viscous: return "viscous";
    case FlowSystem::deturck: return "deturck";
  }
  return "?";
}

inline FlowSystem parse_system(const std::string& s) {
  if (s == "ymhs") return FlowSystem::ymhs;
  if (s == "asf") return FlowSystem::asf;
  if (s == "viscous") return FlowSystem::viscous;
  if (s == "deturck") return FlowSystem::deturck;
  throw Error("unknown system '" + s + "' (expected ymhs, asf, viscous, deturck)");
}

template <typename Scalar>
struct FlowState {
  SphereSection<Scalar> phi;
  Connection<Scalar> A;
  Scalar t = 0;

  const TorusGrid<Scalar>& grid() const { return phi.grid(); }
};

template <typename Scalar>
struct FlowRate {
  VerticalField<Scalar> dphi;
  OneForm<Scalar> dA;

  FlowRate& operator+=(const FlowRate& o) {
    dphi += o.dphi;
    dA += o.dA;
    return *this;
  }
  FlowRate& operator*=(Scalar s) {
    dphi *= s;
    dA *= s;
    return *this;
  }
  bool all_finite() const { return dphi.allFinite() && dA.all_finite(); }
};

template <typename Scalar>
FlowRate<Scalar> operator+(FlowRate<Scalar> a, const FlowRate<Scalar>& b) { return a += b; }
template <typename Scalar>
FlowRate<Scalar> operator*(Scalar s, FlowRate<Scalar> a) { return a *= s; }

template <typename Scalar>
FlowState<Scalar> advance(const FlowState<Scalar>& s, const FlowRate<Scalar>& k, Scalar dt) {
  const auto& g = s.grid();
  return {project_to_sphere(g, Field<Scalar>(s.phi.values() + dt * k.dphi)),
          Connection<Scalar>(g, s.A.algebra, s.A.a + dt * k.dA), s.t + dt};
}

/// DeTurck variables: psi, b = B - A0 and the accumulated abelian gauge angle.
template <typename Scalar>
struct DeTurckState {
  SphereSection<Scalar> psi;
  Connection<Scalar> b;
  GaugeAngle<Scalar> theta;
  Scalar t = 0;

  const TorusGrid<Scalar>& grid() const { return psi.grid(); }
};

template <typename Scalar>
struct DeTurckRate {
  VerticalField<Scalar> dpsi;
  OneForm<Scalar> db;
  Field<Scalar> dtheta;

  DeTurckRate& operator+=(const DeTurckRate& o) {
    dpsi += o.dpsi;
    db += o.db;
    dtheta += o.dtheta;
    return *this;
  }
  DeTurckRate& operator*=(Scalar s) {
    dpsi *= s;
    db *= s;
    dtheta *= s;
    return *this;
  }
  bool all_finite() const { return dpsi.allFinite() && db.all_finite() && dtheta.allFinite(); }
};

template <typename Scalar>
DeTurckRate<Scalar> operator+(DeTurckRate<Scalar> a, const DeTurckRate<Scalar>& b) { return a += b; }
template <typename Scalar>
DeTurckRate<Scalar> operator*(Scalar s, DeTurckRate<Scalar> a) { return a *= s; }

template <typename Scalar>
DeTurckState<Scalar> advance(const DeTurckState<Scalar>& s, const DeTurckRate<Scalar>& k, Scalar dt) {
  const auto& g = s.grid();
  return {project_to_sphere(g, Field<Scalar>(s.psi.values() + dt * k.dpsi)),
          Connection<Scalar>(g, s.b.algebra, s.b.a + dt * k.db), {s.theta.theta + dt * k.dtheta}, s.t + dt};
}

namespace detail {
template <typename Rate>
void require_finite(const Rate& r, const char* what) {
  if (!r.all_finite()) throw BlowUpError(std::string(what) + ": non-finite right-hand side");
}
}  // namespace detail

template <typename Scalar>
FlowRate<Scalar> rhs_ymhs(const FlowState<Scalar>& s) {
  const GradientPair<Scalar> G = ymh_gradient(s.phi, s.A);
  FlowRate<Scalar> r{-complex_structure_apply(s.phi, G.phi), -j_on_oneform(G.a)};
  detail::require_finite(r, "rhs_ymhs");
  return r;
}

template <typename Scalar>
VerticalField<Scalar> rhs_asf(const SphereSection<Scalar>& phi, const Connection<Scalar>& A_fixed) {
  const VerticalField<Scalar> G = rough_laplacian(A_fixed, phi) + moment_term(phi);
  VerticalField<Scalar> r = -complex_structure_apply(phi, G);
  if (!r.allFinite()) throw BlowUpError("rhs_asf: non-finite right-hand side");
  return r;
}

template <typename Scalar>
FlowRate<Scalar> rhs_asf(const FlowState<Scalar>& s) {
  return {rhs_asf(s.phi, s.A), OneForm<Scalar>::zeros(s.grid(), s.A.algebra->dim())};
}

template <typename Scalar>
FlowRate<Scalar> rhs_viscous(const FlowState<Scalar>& s, Scalar eps) {
  if (!(eps >= 0)) throw Error("rhs_viscous: epsilon must be >= 0");
  const GradientPair<Scalar> G = ymh_gradient(s.phi, s.A);
  FlowRate<Scalar> r{-(tangent_project(s.phi, eps * G.phi) + complex_structure_apply(s.phi, G.phi)),
                     -(eps * G.a + j_on_oneform(G.a))};
  detail::require_finite(r, "rhs_viscous");
  return r;
}

/// eta = eps D_B* b, the parameter of the DeTurck gauge term.
template <typename Scalar>
Field<Scalar> deturck_eta(const Connection<Scalar>& B, const Connection<Scalar>& b, Scalar eps) {
  return eps * codifferential_oneform(B, b.a);
}

template <typename Scalar>
DeTurckRate<Scalar> rhs_deturck(const DeTurckState<Scalar>& s, Scalar eps, const Connection<Scalar>& A0,
                                bool gauge_ode = true) {
  if (!(eps > 0)) throw Error("rhs_deturck: epsilon must be > 0 (the DeTurck terms vanish at eps = 0)");
  if (!s.b.is_u1() || !A0.is_u1()) throw Error("rhs_deturck: only the abelian reduction is implemented");
  const auto& g = s.grid();
  const Connection<Scalar> B(g, A0.algebra, A0.a + s.b.a);
  const GradientPair<Scalar> G = ymh_gradient(s.psi, B);
  const Field<Scalar> eta = deturck_eta(B, s.b, eps);

  DeTurckRate<Scalar> r;
  r.dpsi = -(tangent_project(s.psi, eps * G.phi) + complex_structure_apply(s.psi, G.phi)) +
           detail::scale_sites(eta, killing_field(s.psi));
  r.db = -(eps * G.a + j_on_oneform(G.a)) - covariant_derivative_ad(B, eta);
  r.dtheta = gauge_ode ? Field<Scalar>(-eta) : g.zeros(1);
  detail::require_finite(r, "rhs_deturck");
  return r;
}

/// Classical four-stage step. Stage states and the final combination are
/// re-projected to the sphere, which is a smooth extension of the right-hand
/// side off the constraint and keeps fourth order.
template <typename State, typename Rhs, typename Scalar>
State step_rk4(const State& s, Rhs&& rhs, Scalar dt) {
  const auto k1 = rhs(s);
  const auto k2 = rhs(advance(s, k1, dt / 2));
  const auto k3 = rhs(advance(s, k2, dt / 2));
  const auto k4 = rhs(advance(s, k3, dt));
  auto k = k2 + k3;
  k *= Scalar(2);
  k += k1;
  k += k4;
  k *= Scalar(1) / Scalar(6);
  return advance(s, k, dt);
}

/// Abelian gauge ODE over one step with b frozen: d_t theta = -eps D_B* b.
/// With frozen coefficients all four stages coincide, so the stage
/// combination reduces to a single increment. Inside `integrate` theta is
/// part of the DeTurck state and is advanced by the same RK4 stages as (psi, b).
template <typename Scalar>
GaugeAngle<Scalar> gauge_ode_step(const GaugeAngle<Scalar>& theta, const Connection<Scalar>& B,
                                  const Connection<Scalar>& b, Scalar eps, Scalar dt) {
  if (!B.is_u1()) throw Error("gauge_ode_step: abelian connection required");
  const Field<Scalar> k = -deturck_eta(B, b, eps);
  return {theta.theta + dt * k};
}

template <typename Scalar>
struct FlowConfig {
  FlowSystem system = FlowSystem::ymhs;
  Scalar epsilon = 0;
  Scalar dt = Scalar(1e-3);
  Scalar T = Scalar(0.1);
  Scalar cfl_safety = Scalar(0.2);
  bool gauge_ode = true;  // deturck only; false is the negative control

  bool operator==(const FlowConfig&) const = default;
};

/// Explicit-step bound dt <= safety * h^2 / max(eps, 1).
template <typename Scalar>
Scalar cfl_limit(const TorusGrid<Scalar>& grid, Scalar eps, Scalar safety = Scalar(0.2)) {
  return safety * grid.h() * grid.h() / std::max(eps, Scalar(1));
}

template <typename Scalar>
void validate(const FlowConfig<Scalar>& c, const TorusGrid<Scalar>& grid) {
  auto fail = [](const std::string& field, const std::string& msg) { throw Error(field + ": " + msg); };
  if (!(c.T > 0)) fail("T", "horizon must be > 0");
  if (!(c.dt > 0)) fail("dt", "step must be > 0");
  if (!(c.epsilon >= 0)) fail("epsilon", "must be >= 0");
  if (!(c.cfl_safety > 0)) fail("cfl_safety", "must be > 0");
  const bool viscous_type = c.system == FlowSystem::viscous || c.system == FlowSystem::deturck;
  if (viscous_type && c.epsilon == 0) fail("epsilon", std::string("must be > 0 for system ") + to_string(c.system));
  if (!viscous_type && c.epsilon != 0) fail("epsilon", std::string("must be 0 for system ") + to_string(c.system));
  if (viscous_type) {
    const Scalar lim = cfl_limit(grid, c.epsilon, c.cfl_safety);
    if (c.dt > lim * (Scalar(1) + Scalar(1e-12)))
      fail("dt", "violates explicit stability bound dt <= " + std::to_string(lim));
  }
}

/// Number of uniform steps to reach T with step no larger than dt_max.
template <typename Scalar>
long steps_for(Scalar T, Scalar dt_max) {
  return std::max(1L, static_cast<long>(std::ceil(T / dt_max - Scalar(1e-9))));
}

template <typename Scalar>
FlowState<Scalar> reconstruct(const DeTurckState<Scalar>& d, const Connection<Scalar>& A0) {
  const auto& g = d.grid();
  const Connection<Scalar> B(g, A0.algebra, A0.a + d.b.a);
  auto [A, phi] = gauge_transform(d.theta, B, d.psi);
  return {std::move(phi), std::move(A), d.t};
}

template <typename Scalar>
FlowRate<Scalar> evaluate_rhs(const FlowConfig<Scalar>& c, const FlowState<Scalar>& s) {
  switch (c.system) {
    case FlowSystem::ymhs: return rhs_ymhs(s);
    case FlowSystem::asf: return rhs_asf(s);
    case FlowSystem::viscous: return rhs_viscous(s, c.epsilon);
    case FlowSystem::deturck: break;
  }
  throw Error("evaluate_rhs: deturck runs through DeTurckState");
}

template <typename Scalar>
struct Trajectory {
  FlowConfig<Scalar> config;
  Scalar dt = 0;  // step actually used (T / steps)
  long steps = 0;
  long steps_taken = 0;
  bool complete = true;
  std::string failure;
  std::vector<EnergyReport<Scalar>> reports;
  std::vector<FlowState<Scalar>> snapshots;           // at report times, if requested
  std::vector<DeTurckState<Scalar>> deturck_snapshots;  // deturck only
  std::optional<Connection<Scalar>> reference;         // A0 for deturck
  std::optional<FlowState<Scalar>> final_state;        // last valid state
};

struct IntegrateOptions {
  long report_every = 1;  // in steps
  int k_max = 3;
  bool keep_snapshots = false;
};

/// Fixed-step march to T. A blow-up returns the partial trajectory with
/// `complete == false` and the last valid state.
template <typename Scalar>
Trajectory<Scalar> integrate(const FlowConfig<Scalar>& config, const FlowState<Scalar>& initial,
                             const IntegrateOptions& opt = {}) {
  const auto& g = initial.grid();
  validate(config, g);
  if (opt.report_every < 1) throw Error("report_every must be >= 1");

  Trajectory<Scalar> tr;
  tr.config = config;
  tr.steps = steps_for(config.T, config.dt);
  tr.dt = config.T / Scalar(tr.steps);
  const Scalar dt = tr.dt;

  auto record = [&](const FlowState<Scalar>& s) {
    tr.reports.push_back(make_report(s.t, s.phi, s.A, opt.k_max));
    if (opt.keep_snapshots) tr.snapshots.push_back(s);
  };
  auto is_report_step = [&](long n) { return n % opt.report_every == 0 || n == tr.steps; };

  if (config.system == FlowSystem::deturck) {
    const Connection<Scalar> A0 = initial.A;
    tr.reference = A0;
    DeTurckState<Scalar> d{initial.phi, Connection<Scalar>::zero(g, A0.algebra), GaugeAngle<Scalar>::zeros(g),
                           initial.t};
    auto rhs = [&](const DeTurckState<Scalar>& s) { return rhs_deturck(s, config.epsilon, A0, config.gauge_ode); };
    auto record_d = [&](const DeTurckState<Scalar>& s) {
      const FlowState<Scalar> u = reconstruct(s, A0);
      record(u);
      if (opt.keep_snapshots) tr.deturck_snapshots.push_back(s);
      tr.final_state = u;
    };
    record_d(d);
    try {
      for (long n = 1; n <= tr.steps; ++n) {
        d = step_rk4(d, rhs, dt);
        d.t = initial.t + Scalar(n) * dt;
        tr.steps_taken = n;
        if (is_report_step(n)) record_d(d);
        else tr.final_state = reconstruct(d, A0);
      }
    } catch (const BlowUpError& e) {
      tr.complete = false;
      tr.failure = e.what();
    }
    return tr;
  }

  FlowState<Scalar> s = initial;
  auto rhs = [&](const FlowState<Scalar>& x) { return evaluate_rhs(config, x); };
  record(s);
  tr.final_state = s;
  try {
    for (long n = 1; n <= tr.steps; ++n) {
      s = step_rk4(s, rhs, dt);
      s.t = initial.t + Scalar(n) * dt;
      tr.steps_taken = n;
      tr.final_state = s;
      if (is_report_step(n)) record(s);
    }
  } catch (const BlowUpError& e) {
    tr.complete = false;
    tr.failure = e.what();
  }
  return tr;
}

/// L^2 distance sqrt(||phi1 - phi2||^2 + ||A1 - A2||^2).
template <typename Scalar>
Scalar state_distance(const FlowState<Scalar>& u, const FlowState<Scalar>& v) {
  const auto& g = u.grid();
  if (!(g == v.grid())) throw Error("state_distance: grid mismatch");
  const Field<Scalar> dp = u.phi.values() - v.phi.values();
  const OneForm<Scalar> da = u.A.a - v.A.a;
  return std::sqrt(l2_inner(g, dp, dp) + l2_inner(g, da, da));
}

template <typename Scalar>
struct DeTurckComparison {
  std::vector<Scalar> times;
  std::vector<Scalar> residuals;
  std::vector<FlowState<Scalar>> reconstructed;
};

/// Pulls each DeTurck snapshot back through its accumulated gauge angle and
/// compares it with the directly integrated viscous trajectory.
template <typename Scalar>
DeTurckComparison<Scalar> deturck_reconstruct(const Trajectory<Scalar>& deturck, const Trajectory<Scalar>& direct) {
  const auto& a = deturck.config;
  const auto& b = direct.config;
  if (a.system != FlowSystem::deturck || b.system != FlowSystem::viscous)
    throw Error("deturck_reconstruct: expected a deturck and a viscous trajectory");
  if (a.epsilon != b.epsilon || a.dt != b.dt || a.T != b.T || deturck.steps != direct.steps)
    throw Error("deturck_reconstruct: config mismatch (epsilon, dt, T must agree)");
  if (!deturck.reference) throw Error("deturck_reconstruct: missing reference connection A0");
  if (deturck.deturck_snapshots.size() != direct.snapshots.size() || direct.snapshots.empty())
    throw Error("deturck_reconstruct: snapshot series mismatch (run both with keep_snapshots)");
  const FlowState<Scalar>& d0 = direct.snapshots.front();
  const auto& s0 = deturck.deturck_snapshots.front();
  if (!(d0.grid() == s0.grid()) || s0.psi.values() != d0.phi.values() || deturck.reference->a[0] != d0.A.a[0] ||
      deturck.reference->a[1] != d0.A.a[1])
    throw Error("deturck_reconstruct: initial data mismatch");

  DeTurckComparison<Scalar> out;
  for (std::size_t n = 0; n < direct.snapshots.size(); ++n) {
    const auto& ds = deturck.deturck_snapshots[n];
    if (std::abs(ds.t - direct.snapshots[n].t) > Scalar(1e-12) * std::max(Scalar(1), std::abs(ds.t)))
      throw Error("deturck_reconstruct: report times differ");
    FlowState<Scalar> u = reconstruct(ds, *deturck.reference);
    out.times.push_back(ds.t);
    out.residuals.push_back(state_distance(u, direct.snapshots[n]));
    out.reconstructed.push_back(std::move(u));
  }
  return out;
}

/// Initial data presets.
///   pole:     phi = e3, A = 0
///   twist(a): phi = normalize(a sin x1, a sin x2, 1 + a cos(x1 + x2)),
///             A = (a sin x2, a sin x1)
template <typename Scalar>
FlowState<Scalar> make_preset(const TorusGrid<Scalar>& grid, const std::string& name, Scalar a = Scalar(0.3)) {
  if (name == "pole") {
    return {SphereSection<Scalar>::constant(grid, Vec3<Scalar>(0, 0, 1)),
            Connection<Scalar>::zero(grid, u1_algebra<Scalar>()), 0};
  }
  if (name == "twist") {
    const Field<Scalar> raw = grid.sample_vector(3, [a](Scalar x1, Scalar x2) {
      return Vec3<Scalar>(a * std::sin(x1), a * std::sin(x2), 1 + a * std::cos(x1 + x2));
    });
    return {project_to_sphere(grid, raw),
            u1_connection(grid, grid.sample([a](Scalar, Scalar x2) { return a * std::sin(x2); }),
                          grid.sample([a](Scalar x1, Scalar) { return a * std::sin(x1); })),
            0};
  }
  throw Error("unknown preset '" + name + "' (expected pole, twist)");
}

}  // namespace ymhs

#include "ymhs/studies.hpp"

#include "ymhs/csv_report.hpp"
#include "ymhs/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace ymhs {

using Grid = TorusGrid<double>;
using State = FlowState<double>;

void CheckReport::at_most(const std::string& what, double value, double threshold) {
  items.push_back({what, value, 0, threshold, SubCheck::Kind::at_most, std::isfinite(value) && value <= threshold});
}

void CheckReport::at_least(const std::string& what, double value, double threshold) {
  items.push_back({what, value, threshold, 0, SubCheck::Kind::at_least, std::isfinite(value) && value >= threshold});
}

void CheckReport::inside(const std::string& what, double value, double lo, double hi) {
  items.push_back({what, value, lo, hi, SubCheck::Kind::inside, value > lo && value < hi});
}

void CheckReport::append(const CheckReport& other) {
  for (auto item : other.items) {
    item.name = other.name + "/" + item.name;
    items.push_back(std::move(item));
  }
}

bool CheckReport::passed() const {
  return !items.empty() && std::all_of(items.begin(), items.end(), [](const SubCheck& c) { return c.pass; });
}

void print_report(std::ostream& os, const CheckReport& r) {
  os << "check " << r.name << '\n';
  for (const auto& c : r.items) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  value=" << format_number(c.value) << "  (";
    switch (c.kind) {
      case SubCheck::Kind::at_most: os << "<= " << format_number(c.hi); break;
      case SubCheck::Kind::at_least: os << ">= " << format_number(c.lo); break;
      case SubCheck::Kind::inside: os << "in (" << format_number(c.lo) << ", " << format_number(c.hi) << ")"; break;
    }
    os << ")\n";
  }
  os << "result " << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << '\n';
}

bool Study::strictly_decreasing() const {
  for (std::size_t i = 1; i < error.size(); ++i)
    if (!(error[i] < error[i - 1])) return false;
  return error.size() >= 2;
}

void write_study_csv(std::ostream& os, const Study& s, const json& echo, const Thresholds& thresholds) {
  write_csv_preamble(os, "ymhs convergence " + s.name, echo, thresholds);
  os << s.resolution_label << ",error\n";
  for (std::size_t i = 0; i < s.error.size(); ++i)
    os << format_number(s.resolution[i]) << ',' << format_number(s.error[i]) << '\n';
  os << "# fitted_order: " << format_number(s.order) << '\n';
  os << "# strictly_decreasing: " << (s.strictly_decreasing() ? "true" : "false") << '\n';
}

double max_relative_drift(const Trajectory<double>& tr) {
  if (tr.reports.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double y0 = tr.reports.front().ymh;
  double worst = 0;
  for (const auto& r : tr.reports) worst = std::max(worst, std::abs(r.ymh - y0));
  return worst / y0;
}

double max_ymh_increase(const Trajectory<double>& tr) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < tr.reports.size(); ++n)
    worst = std::max(worst, tr.reports[n].ymh - tr.reports[n - 1].ymh);
  return worst;
}

double dissipation_pairing_error(const FlowState<double>& s, double eps) {
  const auto& g = s.grid();
  const auto r = rhs_viscous(s, eps);
  const auto G = ymh_gradient(s.phi, s.A);
  const double pairing = 2 * (l2_inner(g, r.dphi, G.phi) + l2_inner(g, r.dA, G.a));
  const double expected = -2 * eps * gradient_norm_squared(g, G);
  return std::abs(pairing - expected) / std::abs(expected);
}

namespace {

FlowConfig<double> make_config(FlowSystem sys, double eps, double dt, double T, bool gauge_ode = true) {
  FlowConfig<double> c;
  c.system = sys;
  c.epsilon = eps;
  c.dt = dt;
  c.T = T;
  c.gauge_ode = gauge_ode;
  return c;
}

long report_stride(const FlowConfig<double>& c, long target_reports) {
  return std::max(1L, steps_for(c.T, c.dt) / target_reports);
}

void emit(const TrajectorySink& sink, const std::string& label, const Trajectory<double>& tr) {
  if (sink) sink(label, tr);
}

const State& final_of(const Trajectory<double>& tr, const std::string& label) {
  if (!tr.complete || !tr.final_state) throw Error(label + ": integration failed: " + tr.failure);
  return *tr.final_state;
}

OneForm<double> noise_oneform(const Grid& g, fixtures::Rng& rng) {
  return {{fixtures::noise(g, rng, 1), fixtures::noise(g, rng, 1)}};
}

double relative_gap(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)); }

}  // namespace

Study curvature_space_study(double a, const std::vector<int>& levels) {
  Study s{"space", "h", {}, {}, 0};
  for (int n : levels) {
    const Grid g(n);
    const State u = make_preset(g, "twist", a);
    const Field<double> exact = g.sample([a](double x1, double x2) { return a * (std::cos(x1) - std::cos(x2)); });
    const Field<double> diff = curvature(u.A).f12() - exact;
    s.resolution.push_back(g.h());
    s.error.push_back(std::sqrt(l2_inner(g, diff, diff)));
  }
  s.order = fixtures::fit_order(s.resolution, s.error);
  return s;
}

Study drift_time_study(FlowSystem system, int n, double a, double T, const std::vector<double>& dts, int k_max,
                       const TrajectorySink& sink) {
  Study s{"time", "dt", {}, {}, 0};
  const Grid g(n);
  const State u = make_preset(g, "twist", a);
  for (double dt : dts) {
    const auto c = make_config(system, 0.0, dt, T);
    const auto tr = integrate(c, u, {report_stride(c, 100), k_max, false});
    final_of(tr, "drift study");
    emit(sink, std::string("drift ") + to_string(system) + " dt=" + format_number(tr.dt), tr);
    s.resolution.push_back(tr.dt);
    s.error.push_back(max_relative_drift(tr));
  }
  s.order = fixtures::fit_order(s.resolution, s.error);
  return s;
}

Study deturck_study(const std::vector<int>& levels, double eps, double a, double T, bool gauge_ode,
                    double cfl_safety, const TrajectorySink& sink) {
  Study s{gauge_ode ? "deturck" : "deturck-control", "h", {}, {}, 0};
  for (int n : levels) {
    const Grid g(n);
    const State u = make_preset(g, "twist", a);
    auto cd = make_config(FlowSystem::deturck, eps, cfl_limit(g, eps, cfl_safety), T, gauge_ode);
    cd.cfl_safety = cfl_safety;
    auto cv = make_config(FlowSystem::viscous, eps, cd.dt, T);
    cv.cfl_safety = cfl_safety;
    const long stride = report_stride(cd, 10);
    const auto d = integrate(cd, u, {stride, 3, true});
    const auto v = integrate(cv, u, {stride, 3, true});
    final_of(d, "deturck study");
    final_of(v, "deturck study");
    emit(sink, s.name + " deturck N=" + std::to_string(n), d);
    emit(sink, s.name + " viscous N=" + std::to_string(n), v);
    const auto cmp = deturck_reconstruct(d, v);
    s.resolution.push_back(g.h());
    s.error.push_back(cmp.residuals.back());
  }
  s.order = fixtures::fit_order(s.resolution, s.error);
  return s;
}

Study gauge_study(const std::vector<int>& levels, double a, double dt, double T, std::uint64_t seed,
                  const TrajectorySink& sink) {
  Study s{"gauge", "h", {}, {}, 0};
  fixtures::Rng rng(seed);
  const auto th = fixtures::random_trig(rng, 1, 1.0);
  for (int n : levels) {
    const Grid g(n);
    const GaugeAngle<double> theta{g.sample(th)};
    const State u = make_preset(g, "twist", a);
    auto [A2, phi2] = gauge_transform(theta, u.A, u.phi);
    const auto c = make_config(FlowSystem::ymhs, 0.0, dt, T);
    const long stride = report_stride(c, 10);
    const auto tu = integrate(c, u, {stride, 3, false});
    const auto tg = integrate(c, State{phi2, A2, 0}, {stride, 3, false});
    const State& fu = final_of(tu, "gauge study");
    const State& fg = final_of(tg, "gauge study");
    emit(sink, "gauge N=" + std::to_string(n), tu);
    emit(sink, "gauge transformed N=" + std::to_string(n), tg);
    auto [A3, phi3] = gauge_transform(theta, fu.A, fu.phi);
    s.resolution.push_back(g.h());
    s.error.push_back(state_distance(State{phi3, A3, 0}, fg));
  }
  s.order = fixtures::fit_order(s.resolution, s.error);
  return s;
}

Study epsilon_study(int n, double a, double T, const std::vector<double>& epsilons, double dt,
                    const TrajectorySink& sink) {
  Study s{"epsilon", "epsilon", {}, {}, 0};
  const Grid g(n);
  const State u = make_preset(g, "twist", a);
  const auto c0 = make_config(FlowSystem::ymhs, 0.0, dt, T);
  const auto ref = integrate(c0, u, {report_stride(c0, 10), 3, false});
  const State& r = final_of(ref, "epsilon study");
  emit(sink, "epsilon reference", ref);
  for (double eps : epsilons) {
    const auto c = make_config(FlowSystem::viscous, eps, dt, T);
    const auto tr = integrate(c, u, {report_stride(c, 10), 3, false});
    emit(sink, "epsilon=" + format_number(eps), tr);
    s.resolution.push_back(eps);
    s.error.push_back(state_distance(final_of(tr, "epsilon study"), r));
  }
  s.order = fixtures::fit_order(s.resolution, s.error);
  return s;
}

CheckReport check_adjoint(std::uint64_t seed, const Thresholds& t) {
  CheckReport rep{"adjoint", {}};
  const double thr = t["adjoint_abs"];
  fixtures::Rng rng(seed);
  double sbp = 0, codiff_u1 = 0, codiff_so3 = 0, codiff1_u1 = 0, codiff1_so3 = 0, vertical = 0, jskew = 0, Jskew = 0;
  for (int n : {16, 33}) {
    const Grid g(n);
    const Field<double> f = fixtures::noise(g, rng, 2), h = fixtures::noise(g, rng, 2);
    for (int axis : {1, 2})
      sbp = std::max(sbp, relative_gap(l2_inner(g, partial_derivative(g, f, axis), h),
                                       -l2_inner(g, f, partial_derivative(g, h, axis))));

    for (auto alg : {u1_algebra<double>(), so3_algebra<double>()}) {
      const int d = alg->dim();
      const Connection<double> A(g, alg, {{fixtures::noise(g, rng, d), fixtures::noise(g, rng, d)}});
      const Field<double> f12 = fixtures::noise(g, rng, d), psi = fixtures::noise(g, rng, d);
      const OneForm<double> B{{fixtures::noise(g, rng, d), fixtures::noise(g, rng, d)}};
      const double e2 = relative_gap(l2_inner(g, codifferential(A, f12), B),
                                     l2_inner(g, f12, exterior_derivative(A, B).c12));
      const double e1 = relative_gap(l2_inner(g, codifferential_oneform(A, B), psi),
                                     l2_inner(g, B, covariant_derivative_ad(A, psi)));
      double& c2 = alg->is_abelian() ? codiff_u1 : codiff_so3;
      double& c1 = alg->is_abelian() ? codiff1_u1 : codiff1_so3;
      c2 = std::max(c2, e2);
      c1 = std::max(c1, e1);
    }

    const State s = fixtures::noise_state(g, rng);
    const OneForm<double> P{{fixtures::noise_tangent(s.phi, rng), fixtures::noise_tangent(s.phi, rng)}};
    const Field<double> Y = fixtures::noise_tangent(s.phi, rng), Z = fixtures::noise_tangent(s.phi, rng);
    vertical = std::max(vertical, relative_gap(l2_inner(g, covariant_adjoint(s.A, s.phi, P), Y),
                                               l2_inner(g, P, covariant_derivative_vertical(s.A, s.phi, Y))));
    Jskew = std::max(Jskew, relative_gap(l2_inner(g, complex_structure_apply(s.phi, Y), Z),
                                         -l2_inner(g, Y, complex_structure_apply(s.phi, Z))));
    const OneForm<double> w = noise_oneform(g, rng), v = noise_oneform(g, rng);
    jskew = std::max(jskew, relative_gap(l2_inner(g, j_on_oneform(w), v), -l2_inner(g, w, j_on_oneform(v))));
  }
  rep.at_most("summation by parts <D f, g> = -<f, D g>", sbp, thr);
  rep.at_most("<D_A* F, B> = <F, D_A B> u(1)", codiff_u1, thr);
  rep.at_most("<D_A* F, B> = <F, D_A B> so(3)", codiff_so3, thr);
  rep.at_most("<D_A* B, psi> = <B, D_A psi> u(1)", codiff1_u1, thr);
  rep.at_most("<D_A* B, psi> = <B, D_A psi> so(3)", codiff1_so3, thr);
  rep.at_most("<nabla_A* P, Y> = <P, nabla_A Y>", vertical, thr);
  rep.at_most("<J Y, Z> = -<Y, J Z>", Jskew, thr);
  rep.at_most("<j w, v> = -<w, j v>", jskew, thr);
  return rep;
}

CheckReport check_variational(std::uint64_t seed, const Thresholds& t) {
  CheckReport rep{"variational", {}};
  fixtures::Rng rng(seed);
  const Grid g(64);
  const State s = make_preset(g, "twist", 0.3);
  double rel = 0, ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const Field<double> dphi = fixtures::noise_tangent(s.phi, rng);
    const OneForm<double> dA = noise_oneform(g, rng);
    rel = std::max(rel, variational_check(s.phi, s.A, dphi, dA, t["variational_step"]).rel_error);
    double prev = variational_check(s.phi, s.A, dphi, dA, 1e-3).abs_error;
    for (double step : {5e-4, 2.5e-4}) {
      const double e = variational_check(s.phi, s.A, dphi, dA, step).abs_error;
      ratio_lo = std::min(ratio_lo, prev / e);
      ratio_hi = std::max(ratio_hi, prev / e);
      prev = e;
    }
  }
  rep.at_most("relative error at step " + format_number(t["variational_step"]), rel, t["variational_rel"]);
  rep.inside("smallest Richardson ratio (steps 1e-3, 5e-4, 2.5e-4)", ratio_lo, t["richardson_lo"], t["richardson_hi"]);
  rep.inside("largest Richardson ratio (steps 1e-3, 5e-4, 2.5e-4)", ratio_hi, t["richardson_lo"], t["richardson_hi"]);
  return rep;
}

CheckReport check_commutator(std::uint64_t seed, const Thresholds& t) {
  CheckReport rep{"commutator", {}};
  fixtures::Rng rng(seed);
  const auto ss = fixtures::random_section_spec(rng);
  const auto cs = fixtures::random_connection_spec(rng);
  std::array<fixtures::TrigPolynomial, 3> yp;
  for (auto& p : yp) p = fixtures::random_trig(rng);
  std::vector<double> hs, errs;
  for (int n : {32, 64, 128}) {
    const Grid g(n);
    const SphereSection<double> phi = ss.sample(g);
    hs.push_back(g.h());
    errs.push_back(commutator_check(cs.sample(g), phi, fixtures::smooth_tangent(phi, yp)).l2_norm);
  }
  rep.at_least("curvature commutator residual order", fixtures::fit_order(hs, errs), t["commutator_order"]);

  const Grid g(64);
  const State s = fixtures::noise_state(g, rng);
  const Field<double> m = moment_term(s.phi);
  const Field<double>& p = s.phi.values();
  double identity = 0, invariance = 0;
  for (Eigen::Index k = 0; k < g.sites(); ++k) {
    const Eigen::Vector3d y = p.col(k);
    const Eigen::Vector3d grad(0, 0, 2 * y[2]);
    const Eigen::Vector3d half = 0.5 * (grad - grad.dot(y) * y);
    identity = std::max(identity, (m.col(k) - half).cwiseAbs().maxCoeff());
    invariance = std::max(invariance, std::abs(m.col(k).dot(Eigen::Vector3d(-y[1], y[0], 0))));
  }
  rep.at_most("moment identity mu grad mu = grad |mu|^2 / 2 (pointwise)", identity, t["moment_abs"]);
  rep.at_most("<mu grad mu, X> = 0 (pointwise)", invariance, t["moment_abs"]);
  return rep;
}

CheckReport check_gauge(std::uint64_t seed, const Thresholds& t, const TrajectorySink& sink) {
  CheckReport rep{"gauge", {}};
  const Study s = gauge_study({32, 64, 128}, 0.3, 1e-3, 0.05, seed, sink);
  rep.at_least("time-independent gauge covariance order (N = 32, 64, 128)", s.order, t["gauge_order"]);

  fixtures::Rng rng(seed + 1);
  const auto th = fixtures::random_trig(rng, 2, 1.0);
  const Grid g(64);
  const State u = make_preset(g, "twist", 0.3);
  const Field<double> f0 = curvature(u.A).f12();
  const Field<double> f1 = curvature(gauge_transform_connection(GaugeAngle<double>{g.sample(th)}, u.A)).f12();
  rep.at_most("curvature gauge invariance (max abs)", (f1 - f0).cwiseAbs().maxCoeff(), t["gauge_invariance_abs"]);
  return rep;
}

CheckReport check_deturck(const Thresholds& t, bool gauge_ode, const TrajectorySink& sink) {
  CheckReport rep{gauge_ode ? "deturck" : "deturck (gauge ODE disabled)", {}};
  const std::vector<int> levels{32, 64, 128};
  const Study on = deturck_study(levels, 0.1, 0.3, 0.05, gauge_ode, 0.2, sink);
  const Study off = deturck_study(levels, 0.1, 0.3, 0.05, false, 0.2, sink);
  rep.at_least("reconstruction distance order in h", on.order, t["deturck_order"]);
  rep.at_least("control / enabled residual at N = 128", off.error.back() / on.error.back(),
               t["deturck_control_ratio"]);
  return rep;
}

}  // namespace ymhs

// Built-in property checks and refinement studies shared by the CLI and the
// acceptance suite.
#pragma once

#include "ymhs/run_config.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace ymhs {

struct SubCheck {
  enum class Kind { at_most, at_least, inside };
  std::string name;
  double value = 0;
  double lo = 0;  // threshold for at_least / inside
  double hi = 0;  // threshold for at_most / inside
  Kind kind = Kind::at_most;
  bool pass = false;
};

struct CheckReport {
  std::string name;
  std::vector<SubCheck> items;

  void at_most(const std::string& what, double value, double threshold);
  void at_least(const std::string& what, double value, double threshold);
  void inside(const std::string& what, double value, double lo, double hi);
  void append(const CheckReport& other);
  bool passed() const;
};

/// `  PASS  name  value=<v>  (<= t)` lines followed by an overall verdict.
void print_report(std::ostream& os, const CheckReport& r);

/// Called with every trajectory a study integrates; lets callers audit E_k.
using TrajectorySink = std::function<void(const std::string& label, const Trajectory<double>& tr)>;

struct Study {
  std::string name;
  std::string resolution_label;  // "h", "dt" or "epsilon"
  std::vector<double> resolution;
  std::vector<double> error;
  double order = 0;  // least-squares log-log slope

  /// error strictly decreasing in the order the points were added.
  bool strictly_decreasing() const;
};

void write_study_csv(std::ostream& os, const Study& s, const json& echo, const Thresholds& thresholds);

double max_relative_drift(const Trajectory<double>& tr);
/// Largest increase of YMH between consecutive reports (<= 0 if non-increasing).
double max_ymh_increase(const Trajectory<double>& tr);
/// |2 <G, rhs> + eps |G|^2| / (eps |G|^2) for the viscous rate at s.
double dissipation_pairing_error(const FlowState<double>& s, double eps);

/// L^2 error of the discrete curvature of the twist connection against the
/// analytic a (cos x1 - cos x2).
Study curvature_space_study(double a, const std::vector<int>& levels = {32, 64, 128});

/// Max relative YMH drift of a conservative run per step size.
Study drift_time_study(FlowSystem system, int n, double a, double T, const std::vector<double>& dts, int k_max = 3,
                       const TrajectorySink& sink = {});

/// Distance at T between the reconstructed DeTurck and the direct viscous
/// trajectories, dt = cfl_limit at each N.
Study deturck_study(const std::vector<int>& levels, double eps, double a, double T, bool gauge_ode,
                    double cfl_safety = 0.2, const TrajectorySink& sink = {});

/// Distance at T between g.(flow of u) and flow of g.u for a smooth
/// time-independent gauge angle drawn from `seed`.
Study gauge_study(const std::vector<int>& levels, double a, double dt, double T, std::uint64_t seed,
                  const TrajectorySink& sink = {});

/// Distance at T between viscous runs and the eps = 0 run at the same (N, dt).
Study epsilon_study(int n, double a, double T, const std::vector<double>& epsilons, double dt,
                    const TrajectorySink& sink = {});

CheckReport check_adjoint(std::uint64_t seed, const Thresholds& t);
CheckReport check_variational(std::uint64_t seed, const Thresholds& t);
CheckReport check_commutator(std::uint64_t seed, const Thresholds& t);
CheckReport check_gauge(std::uint64_t seed, const Thresholds& t, const TrajectorySink& sink = {});
/// Deterministic (twist preset); `gauge_ode = false` runs the negative control
/// in place of the real check.
CheckReport check_deturck(const Thresholds& t, bool gauge_ode = true, const TrajectorySink& sink = {});

}  // namespace ymhs

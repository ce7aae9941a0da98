#include "ymhs/commands.hpp"

#include "ymhs/csv_report.hpp"
#include "ymhs/field_io.hpp"
#include "ymhs/studies.hpp"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <cmath>
#include <fstream>
#include <sstream>

namespace ymhs {

namespace {

std::filesystem::path prepare_dir(const RunConfig& c) {
  const auto dir = output_dir(c);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_snapshots(const std::filesystem::path& dir, const Trajectory<double>& tr) {
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    const std::string stem = "snapshot_" + std::to_string(k);
    io::write_section(dir, stem + "_phi", tr.snapshots[k].phi);
    io::write_connection(dir, stem + "_A", tr.snapshots[k].A);
  }
  std::ofstream idx(dir / "snapshots.csv", std::ios::trunc);
  idx << "index,t\n";
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) idx << k << ',' << format_number(tr.snapshots[k].t) << '\n';
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << e.to_line() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace

void tune_allocator() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
  mallopt(M_TOP_PAD, 64 << 20);
#endif
}

int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig c = load_run_config(config);
    const TorusGrid<double> g(c.n);
    const FlowConfig<double> fc = flow_config(c);
    out << "dt = " << format_number(fc.dt)
        << (c.dt ? " (fixed)" : " (auto: " + json(c.cfl_safety).dump() + " * h^2 / max(epsilon, 1))") << '\n';

    const FlowState<double> initial = make_preset(g, c.preset, c.preset_a);
    const auto tr = integrate(fc, initial, {c.report_interval, c.k_max, c.snapshots});

    const auto dir = prepare_dir(c);
    const auto path = dir / "energy.csv";
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string());
    write_csv_preamble(os, "ymhs run", to_json(c), c.thresholds);
    write_energy_header(os, c.k_max);
    for (const auto& r : tr.reports) write_energy_row(os, r);
    write_status_footer(os, tr);
    os.close();
    if (c.snapshots) write_snapshots(dir, tr);

    out << "steps = " << tr.steps << ", step used = " << format_number(tr.dt) << '\n';
    out << "wrote " << path.string() << '\n';
    if (!tr.complete) {
      err << "blow-up: " << tr.failure << '\n';
      return kExitBlowUp;
    }
    return kExitOk;
  });
}

int cmd_check(const std::string& which, std::optional<std::uint64_t> seed, bool gauge_ode,
              const std::optional<std::filesystem::path>& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c;
    if (config) c = load_run_config(*config);
    const std::uint64_t s = seed.value_or(c.seed);
    const Thresholds& t = c.thresholds;
    out << "# thresholds: " << t.describe() << '\n' << "# seed: " << s << '\n';
    CheckReport rep;
    if (which == "adjoint") rep = check_adjoint(s, t);
    else if (which == "variational") rep = check_variational(s, t);
    else if (which == "commutator") rep = check_commutator(s, t);
    else if (which == "gauge") rep = check_gauge(s, t);
    else if (which == "deturck") rep = check_deturck(t, gauge_ode);
    else throw Error("unknown check '" + which + "' (expected variational, deturck, commutator, adjoint, gauge)");
    print_report(out, rep);
    return rep.passed() ? kExitOk : kExitCheckFailed;
  });
}

int cmd_convergence(const std::string& study, const std::filesystem::path& config, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig c = load_run_config(config);
    const Thresholds& t = c.thresholds;
    Study s;
    bool pass = false;
    if (study == "space") {
      s = curvature_space_study(c.preset_a);
      pass = s.order >= t["space_order"];
    } else if (study == "time") {
      if (c.system != FlowSystem::ymhs && c.system != FlowSystem::asf)
        throw ConfigError("system", "time study needs a conservative system (ymhs or asf)");
      double dt = c.dt ? *c.dt : c.T / 8;
      std::vector<double> dts;
      for (int k = 0; k <= c.halvings; ++k, dt /= 2) dts.push_back(dt);
      s = drift_time_study(c.system, c.n, c.preset_a, c.T, dts, c.k_max);
      pass = s.order >= t["drift_order"];
    } else if (study == "epsilon") {
      s = epsilon_study(c.n, c.preset_a, c.T, c.epsilons, resolve_dt(c));
      pass = s.strictly_decreasing();
    } else {
      throw Error("unknown study '" + study + "' (expected space, time, epsilon)");
    }

    std::ostringstream csv;
    write_study_csv(csv, s, to_json(c), t);
    const auto dir = prepare_dir(c);
    const auto path = dir / ("convergence_" + study + ".csv");
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string());
    os << csv.str();
    out << csv.str() << "# wrote " << path.string() << '\n'
        << "result " << study << ": " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kExitOk : kExitCheckFailed;
  });
}

}  // namespace ymhs

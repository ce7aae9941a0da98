#include "ymhs/csv_report.hpp"

#include <cstdio>

namespace ymhs {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_preamble(std::ostream& os, const std::string& title, const json& echo, const Thresholds& thresholds) {
  os << "# " << title << '\n';
  os << "# config: " << echo.dump() << '\n';
  os << "# thresholds: " << thresholds.describe() << '\n';
}

std::vector<std::string> energy_columns(int k_max) {
  std::vector<std::string> cols{"t", "ymh", "kinetic", "curvature", "potential"};
  for (int k = 0; k <= k_max; ++k) cols.push_back("e" + std::to_string(k));
  cols.push_back("constraint");
  cols.push_back("a_w12");
  return cols;
}

void write_energy_header(std::ostream& os, int k_max) {
  const auto cols = energy_columns(k_max);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_energy_row(std::ostream& os, const EnergyReport<double>& r) {
  os << format_number(r.t) << ',' << format_number(r.ymh) << ',' << format_number(r.kinetic) << ','
     << format_number(r.curvature) << ',' << format_number(r.potential);
  for (double e : r.e) os << ',' << format_number(e);
  os << ',' << format_number(r.constraint) << ',' << format_number(r.a_w12) << '\n';
}

void write_status_footer(std::ostream& os, const Trajectory<double>& tr) {
  if (tr.complete) {
    os << "# status: complete, steps=" << tr.steps << ", dt=" << format_number(tr.dt) << '\n';
  } else {
    os << "# status: blow-up at step " << tr.steps_taken + 1 << " of " << tr.steps << ", " << tr.failure
       << "; rows above are the partial trajectory\n";
  }
}

}  // namespace ymhs

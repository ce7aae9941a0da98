// CSV emission: `#`-prefixed header and footer lines, `,` separator, `.`
// decimal, every number printed with 17 significant digits.
#pragma once

#include "ymhs/run_config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace ymhs {

std::string format_number(double v);

/// Title, configuration echo and thresholds table, one `#` line each.
void write_csv_preamble(std::ostream& os, const std::string& title, const json& echo, const Thresholds& thresholds);

std::vector<std::string> energy_columns(int k_max);
void write_energy_header(std::ostream& os, int k_max);
void write_energy_row(std::ostream& os, const EnergyReport<double>& r);

/// `# status: complete, steps=...` or `# status: blow-up at step ..., ...`.
void write_status_footer(std::ostream& os, const Trajectory<double>& tr);

}  // namespace ymhs

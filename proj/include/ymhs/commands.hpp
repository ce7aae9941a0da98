// Subcommand bodies behind the `ymhs` executable. Exit codes:
//   0 success, 1 invalid configuration or usage, 2 blow-up during a run,
//   3 a check or study missed its threshold.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace ymhs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitCheckFailed = 3;

/// Keeps freed field buffers in the heap instead of returning them to the OS
/// (glibc only; a no-op elsewhere). Call once at program start.
void tune_allocator();

int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// `config`, if given, supplies the seed (unless `seed` is set) and thresholds.
int cmd_check(const std::string& which, std::optional<std::uint64_t> seed, bool gauge_ode,
              const std::optional<std::filesystem::path>& config, std::ostream& out, std::ostream& err);

int cmd_convergence(const std::string& study, const std::filesystem::path& config, std::ostream& out,
                    std::ostream& err);

}  // namespace ymhs

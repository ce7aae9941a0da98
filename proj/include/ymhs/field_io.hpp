// Binary field dumps. One file per component: a 16-byte header
//   bytes 0..3   magic "YMHS"
//   bytes 4..7   N            (int32, little endian)
//   bytes 8..11  component    (int32)
//   bytes 12..15 form degree  (int32: 0, 1 or 2)
// followed by N*N little-endian float64 values in site order (row-major,
// site = i2 * N + i1).
//
// Connection and curvature components are numbered i * d + a, with i the form
// index (0 for two-forms) and a the algebra coordinate.
#pragma once

#include "ymhs/gauge_field.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ymhs::io {

struct FieldHeader {
  std::int32_t n = 0;
  std::int32_t component = 0;
  std::int32_t degree = 0;
};

/// Writes row `row` of `f` as one component file.
void write_component(const std::filesystem::path& path, const TorusGrid<double>& grid, const Field<double>& f,
                     Eigen::Index row, std::int32_t component, std::int32_t degree);

/// Reads one component file; returns a 1 x N^2 field and fills `header`.
Field<double> read_component(const std::filesystem::path& path, FieldHeader& header);

/// Files written: `<stem>_c<k>.bin` for k = 0, 1, 2.
std::vector<std::filesystem::path> write_section(const std::filesystem::path& dir, const std::string& stem,
                                                 const SphereSection<double>& phi);

/// Loads three component files, re-projects to the sphere and rejects data
/// whose unit-norm violation exceeds `tolerance`.
SphereSection<double> read_section(const std::vector<std::filesystem::path>& files, double tolerance = 1e-6);

std::vector<std::filesystem::path> write_connection(const std::filesystem::path& dir, const std::string& stem,
                                                    const Connection<double>& A);

/// Component files must be given in component order (2 * d files).
Connection<double> read_connection(const std::vector<std::filesystem::path>& files,
                                   std::shared_ptr<const LieAlgebra<double>> algebra);

std::vector<std::filesystem::path> write_curvature(const std::filesystem::path& dir, const std::string& stem,
                                                   const Curvature<double>& F);

}  // namespace ymhs::io

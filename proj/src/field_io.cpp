#include "ymhs/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace ymhs::io {

namespace {

constexpr std::array<char, 4> kMagic{'Y', 'M', 'H', 'S'};

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

void put_i32(std::ostream& os, std::int32_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::int32_t get_i32(std::istream& is) {
  std::int32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

std::filesystem::path component_path(const std::filesystem::path& dir, const std::string& stem, int k) {
  return dir / (stem + "_c" + std::to_string(k) + ".bin");
}

}  // namespace

void write_component(const std::filesystem::path& path, const TorusGrid<double>& grid, const Field<double>& f,
                     Eigen::Index row, std::int32_t component, std::int32_t degree) {
  require_shape(grid, f, "write_component");
  if (row < 0 || row >= f.rows()) throw Error("write_component: row out of range");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("write_component: cannot open " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put_i32(os, grid.n());
  put_i32(os, component);
  put_i32(os, degree);
  for (Eigen::Index s = 0; s < f.cols(); ++s) {
    const double v = f(row, s);
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  if (!os) throw Error("write_component: write failed for " + path.string());
}

Field<double> read_component(const std::filesystem::path& path, FieldHeader& header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_component: cannot open " + path.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw Error("read_component: bad magic in " + path.string());
  header.n = get_i32(is);
  header.component = get_i32(is);
  header.degree = get_i32(is);
  if (!is || header.n < TorusGrid<double>::kMinPoints || header.degree < 0 || header.degree > 2)
    throw Error("read_component: bad header in " + path.string());
  const Eigen::Index sites = Eigen::Index(header.n) * header.n;
  Field<double> f(1, sites);
  is.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(sites * sizeof(double)));
  if (!is) throw Error("read_component: truncated payload in " + path.string());
  if (is.peek() != std::char_traits<char>::eof()) throw Error("read_component: trailing bytes in " + path.string());
  if (!f.allFinite()) throw Error("read_component: non-finite values in " + path.string());
  return f;
}

std::vector<std::filesystem::path> write_section(const std::filesystem::path& dir, const std::string& stem,
                                                 const SphereSection<double>& phi) {
  std::vector<std::filesystem::path> out;
  for (int k = 0; k < 3; ++k) {
    out.push_back(component_path(dir, stem, k));
    write_component(out.back(), phi.grid(), phi.values(), k, k, 0);
  }
  return out;
}

SphereSection<double> read_section(const std::vector<std::filesystem::path>& files, double tolerance) {
  if (files.size() != 3) throw Error("read_section: expected 3 component files");
  FieldHeader h0;
  Field<double> raw;
  for (int k = 0; k < 3; ++k) {
    FieldHeader h;
    const Field<double> c = read_component(files[std::size_t(k)], h);
    if (k == 0) {
      h0 = h;
      raw.resize(3, c.cols());
    }
    if (h.n != h0.n || h.degree != 0 || h.component != k)
      throw Error("read_section: inconsistent header in " + files[std::size_t(k)].string());
    raw.row(k) = c;
  }
  const double bad = max_unit_violation(raw);
  if (bad > tolerance)
    throw Error("read_section: unit-norm violation " + std::to_string(bad) + " exceeds " + std::to_string(tolerance));
  return project_to_sphere(TorusGrid<double>(h0.n), raw);
}

std::vector<std::filesystem::path> write_connection(const std::filesystem::path& dir, const std::string& stem,
                                                    const Connection<double>& A) {
  const int d = A.algebra->dim();
  std::vector<std::filesystem::path> out;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < d; ++a) {
      out.push_back(component_path(dir, stem, i * d + a));
      write_component(out.back(), A.grid, A.a[i], a, i * d + a, 1);
    }
  return out;
}

Connection<double> read_connection(const std::vector<std::filesystem::path>& files,
                                   std::shared_ptr<const LieAlgebra<double>> algebra) {
  if (!algebra) throw Error("read_connection: algebra is null");
  const int d = algebra->dim();
  if (files.size() != std::size_t(2 * d)) throw Error("read_connection: expected 2 * dim component files");
  OneForm<double> a;
  std::int32_t n = 0;
  for (int k = 0; k < 2 * d; ++k) {
    FieldHeader h;
    const Field<double> c = read_component(files[std::size_t(k)], h);
    if (k == 0) {
      n = h.n;
      a = OneForm<double>::zeros(TorusGrid<double>(n), d);
    }
    if (h.n != n || h.degree != 1 || h.component != k)
      throw Error("read_connection: inconsistent header in " + files[std::size_t(k)].string());
    a[k / d].row(k % d) = c;
  }
  return Connection<double>(TorusGrid<double>(n), std::move(algebra), std::move(a));
}

std::vector<std::filesystem::path> write_curvature(const std::filesystem::path& dir, const std::string& stem,
                                                   const Curvature<double>& F) {
  std::vector<std::filesystem::path> out;
  for (int a = 0; a < F.algebra->dim(); ++a) {
    out.push_back(component_path(dir, stem, a));
    write_component(out.back(), F.grid, F.f12(), a, a, 2);
  }
  return out;
}

}  // namespace ymhs::io

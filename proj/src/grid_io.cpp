#include "bifcurrent/grid_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace bifcurrent {

static_assert(std::endian::native == std::endian::little,
              "grid container assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'B', 'F', 'G', 'R', 'I', 'D', '0', '1'};
}

void write_grid(std::ostream& os, const GridField& field) {
  char header[32] = {};
  std::memcpy(header, kMagic, 8);
  const std::uint32_t nx = static_cast<std::uint32_t>(field.nx);
  const std::uint32_t ny = static_cast<std::uint32_t>(field.ny);
  std::memcpy(header + 8, &nx, 4);
  std::memcpy(header + 12, &ny, 4);
  os.write(header, 32);
  const double rect[4] = {field.rect.re_min, field.rect.re_max,
                          field.rect.im_min, field.rect.im_max};
  os.write(reinterpret_cast<const char*>(rect), sizeof(rect));
  os.write(reinterpret_cast<const char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write_grid: stream failure");
}

GridField read_grid(std::istream& is) {
  char header[32] = {};
  is.read(header, 32);
  if (!is || std::memcmp(header, kMagic, 8) != 0) {
    throw std::runtime_error("read_grid: bad magic");
  }
  std::uint32_t nx = 0, ny = 0;
  std::memcpy(&nx, header + 8, 4);
  std::memcpy(&ny, header + 12, 4);
  if (nx < 2 || ny < 2 || nx > (1u << 20) || ny > (1u << 20)) {
    throw std::runtime_error("read_grid: implausible dimensions");
  }
  double rect[4];
  is.read(reinterpret_cast<char*>(rect), sizeof(rect));
  GridField field;
  field.rect = {rect[0], rect[1], rect[2], rect[3]};
  field.nx = static_cast<int>(nx);
  field.ny = static_cast<int>(ny);
  field.values.resize(static_cast<std::size_t>(nx) * ny);
  is.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_grid: truncated payload");
  return field;
}

void write_grid_file(const std::string& path, const GridField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_grid_file: cannot open " + path);
  write_grid(os, field);
}

GridField read_grid_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_grid_file: cannot open " + path);
  return read_grid(is);
}

void write_pgm(std::ostream& os, const GridField& field, double gamma) {
  double lo = field.values.empty() ? 0.0 : field.values[0];
  double hi = lo;
  for (double v : field.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  os << "P5\n# bifcurrent grid, log-scaled, gamma=" << gamma << "\n"
     << field.nx << " " << field.ny << "\n255\n";
  std::string row(static_cast<std::size_t>(field.nx), '\0');
  const double log_den = std::log(256.0);
  for (int j = field.ny - 1; j >= 0; --j) {  // top row = largest imaginary part
    for (int i = 0; i < field.nx; ++i) {
      const double t = (field.at(i, j) - lo) / span;
      const double log_scaled = std::log1p(255.0 * t) / log_den;
      const double bright = std::pow(log_scaled, 1.0 / gamma);
      row[static_cast<std::size_t>(i)] =
          static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * bright)));
    }
    os.write(row.data(), field.nx);
  }
  if (!os) throw std::runtime_error("write_pgm: stream failure");
}

void write_pgm_file(const std::string& path, const GridField& field, double gamma) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_pgm_file: cannot open " + path);
  write_pgm(os, field, gamma);
}

void write_cloud_csv(std::ostream& os, const AtomCloud& cloud) {
  char buf[192];
  if (cloud.dim == 1) {
    os << "re,im,weight\n";
    for (const Atom& a : cloud.atoms) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", a.x.real(), a.x.imag(), a.weight);
      os << buf;
    }
  } else {
    os << "c_re,c_im,z_re,z_im,weight\n";
    for (const Atom& a : cloud.atoms) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", a.x.real(),
                    a.x.imag(), a.y.real(), a.y.imag(), a.weight);
      os << buf;
    }
  }
}

void write_cloud_csv_file(const std::string& path, const AtomCloud& cloud) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_cloud_csv_file: cannot open " + path);
  write_cloud_csv(os, cloud);
}

}  // namespace bifcurrent

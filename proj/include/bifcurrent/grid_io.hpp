#pragma once

#include <iosfwd>
#include <string>

#include "bifcurrent/measures.hpp"

namespace bifcurrent {

// Binary grid container, little-endian:
//   32-byte header: magic "BFGRID01" (8 bytes), uint32 nx, uint32 ny,
//                   16 reserved zero bytes;
//   rect as 4 doubles (re_min, re_max, im_min, im_max);
//   nx * ny row-major doubles.
void write_grid(std::ostream& os, const GridField& field);
GridField read_grid(std::istream& is);
void write_grid_file(const std::string& path, const GridField& field);
GridField read_grid_file(const std::string& path);

// 8-bit PGM render, log-scaled then gamma-corrected; the scaling is stated
// in a comment line so renders stay diffable.
void write_pgm(std::ostream& os, const GridField& field, double gamma = 2.2);
void write_pgm_file(const std::string& path, const GridField& field, double gamma = 2.2);

// Cloud CSV: dim-1 "re,im,weight"; dim-2 "c_re,c_im,z_re,z_im,weight".
void write_cloud_csv(std::ostream& os, const AtomCloud& cloud);
void write_cloud_csv_file(const std::string& path, const AtomCloud& cloud);

}  // namespace bifcurrent

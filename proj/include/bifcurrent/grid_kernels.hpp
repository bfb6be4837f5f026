#pragma once

#include <cstdint>

#include "bifcurrent/core_dynamics.hpp"
#include "bifcurrent/measures.hpp"
#include "bifcurrent/parallel.hpp"

namespace bifcurrent {

// Cell-centered field sampling. The parallel path maps each cell
// independently into a preallocated slot, so results are byte-identical to
// the serial path for any thread count.
template <class F>
GridField sample_grid(const Rect& rect, int nx, int ny, par::Exec exec, F&& f) {
  GridField g;
  g.rect = rect;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  par::for_each_index(static_cast<std::int64_t>(nx) * ny, exec, [&](std::int64_t idx) {
    const int i = static_cast<int>(idx % nx);
    const int j = static_cast<int>(idx / nx);
    g.values[static_cast<std::size_t>(idx)] = f(g.cell_center(i, j));
  });
  return g;
}

// scale * g_c(0) over the parameter rectangle.
inline GridField green_param_field(const Rect& rect, int nx, int ny,
                                   double scale = 1.0, double tol = kDefaultTol,
                                   int n_cap = kDefaultIterCap,
                                   par::Exec exec = par::Exec::Parallel) {
  return sample_grid(rect, nx, ny, exec, [=](Complex c) {
    return scale * green_param(c, tol, n_cap).g0.g;
  });
}

}  // namespace bifcurrent

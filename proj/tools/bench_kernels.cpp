// Times the OpenMP kernels against their serial reference paths and checks
// that both produce identical bytes.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "bifcurrent/experiments.hpp"
#include "bifcurrent/grid_kernels.hpp"
#include "bifcurrent/parallel.hpp"
#include "bifcurrent/poly_roots.hpp"

using namespace bifcurrent;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return seconds_since(t0);
}

bool same_values(const GridField& a, const GridField& b) {
  return a.values.size() == b.values.size() &&
         std::memcmp(a.values.data(), b.values.data(),
                     a.values.size() * sizeof(double)) == 0;
}

void row(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-28s %10.3f s %10.3f s %8.2fx   %s\n", name, serial, parallel,
              serial / (parallel > 0.0 ? parallel : 1e-9),
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 0;
  if (argc > 1) threads = std::atoi(argv[1]);
  const int used = par::resolve_threads(threads);
  std::printf("bifcurrent kernel benchmark, %d worker thread(s)\n", used);
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  const Rect rect{-2.5, 1.5, -1.5, 1.5};

  {
    GridField serial_field, parallel_field;
    const double ts = timed([&] {
      serial_field = green_param_field(rect, 512, 512, 1.0, kDefaultTol,
                                       kDefaultIterCap, par::Exec::Serial);
    });
    const double tp = timed([&] {
      parallel_field = green_param_field(rect, 512, 512, 1.0, kDefaultTol,
                                         kDefaultIterCap, par::Exec::Parallel);
    });
    row("green field 512^2", ts, tp, same_values(serial_field, parallel_field));
  }

  {
    const GridSpec grid{rect, 512, 512};
    GridField serial_field, parallel_field;
    const double ts = timed([&] {
      serial_field = potential_sum_field(12, LineParams{}, grid, par::Exec::Serial);
    });
    const double tp = timed([&] {
      parallel_field = potential_sum_field(12, LineParams{}, grid, par::Exec::Parallel);
    });
    row("potential sum n=12, 512^2", ts, tp, same_values(serial_field, parallel_field));
  }

  {
    RootSet serial_roots, parallel_roots;
    SolveOptions opts;
    opts.exec = par::Exec::Serial;
    const double ts = timed([&] { serial_roots = solve_qk_line(11, LineParams{}, opts); });
    opts.exec = par::Exec::Parallel;
    const double tp = timed([&] { parallel_roots = solve_qk_line(11, LineParams{}, opts); });
    bool identical = serial_roots.roots.size() == parallel_roots.roots.size();
    if (identical) {
      for (std::size_t i = 0; i < serial_roots.roots.size(); ++i) {
        if (serial_roots.roots[i] != parallel_roots.roots[i]) {
          identical = false;
          break;
        }
      }
    }
    row("newton solve k=11", ts, tp, identical);
  }

  {
    const GridField field = green_param_field(rect, 1024, 1024, 2.0, kDefaultTol,
                                              kDefaultIterCap, par::Exec::Parallel);
    GridMeasure serial_measure, parallel_measure;
    const double ts = timed([&] { serial_measure = grid_laplacian_measure(field, par::Exec::Serial); });
    const double tp = timed([&] { parallel_measure = grid_laplacian_measure(field, par::Exec::Parallel); });
    const bool identical =
        serial_measure.cell_mass.size() == parallel_measure.cell_mass.size() &&
        std::memcmp(serial_measure.cell_mass.data(), parallel_measure.cell_mass.data(),
                    serial_measure.cell_mass.size() * sizeof(double)) == 0;
    row("laplacian measure 1024^2", ts, tp, identical);
  }

  return 0;
}

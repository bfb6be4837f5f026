#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bifcurrent/grid_kernels.hpp"
#include "bifcurrent/lifted_dynamics.hpp"
#include "bifcurrent/measures.hpp"
#include "bifcurrent/poly_roots.hpp"

namespace bifcurrent {

struct GridSpec {
  Rect rect{-2.5, 1.5, -1.5, 1.5};
  int nx = 256;
  int ny = 256;
};

// Reproducible experiment record. Every metric is a function of
// (parameters, seed); the wall-clock time is kept in memory only so that
// serialized reports stay byte-stable across runs.
struct ExperimentReport {
  std::string name;
  std::map<std::string, double> parameters;
  std::map<std::string, std::string> labels;
  std::vector<std::pair<std::string, double>> metrics;
  std::map<std::string, std::string> tables;  // named CSV blocks
  int pass = -1;                              // 1 pass, 0 fail, -1 not applicable
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;               // not serialized

  void metric(const std::string& key, double value) { metrics.emplace_back(key, value); }
  double metric_value(const std::string& key) const;
};

std::string report_to_json(const ExperimentReport& report);
void write_report_file(const std::string& path, const ExperimentReport& report);

// phi_n(c) = 2^{-n} ln|b(c) p_c^n(0) - a(c)|, switching to the escape-stable
// form once the orbit passes the overflow guard.
double phi_value(const Poly& a, const Poly& b, int n, Complex c);

// (2/n) sum_{k=1..n} phi_k(c) for b = 1, a(c) = alpha c + beta.
double potential_sum_value(int n, const LineParams& line, Complex c);

GridField phi_field(const Poly& a, const Poly& b, int n, const GridSpec& grid,
                    par::Exec exec = par::Exec::Parallel);
GridField potential_sum_field(int n, const LineParams& line, const GridSpec& grid,
                              par::Exec exec = par::Exec::Parallel);

// L^1 grid distance of phi_n to the parameter Green field, over a list of
// depths. Pass: distances weakly decreasing within 10% slack and the final
// one below a third of the first.
ExperimentReport mandel_green_convergence(const Poly& a, const Poly& b,
                                          const std::vector<int>& n_list,
                                          const GridSpec& grid,
                                          par::Exec exec = par::Exec::Parallel);

// Potential identity and trend checks for mu_n = pi_*(mu~_n): the exact
// factorization identity against the cloud potential at seeded probes, the
// L^1 trend of the potential sum toward 2 g_c(0), and the Laplacian mass.
ExperimentReport parameter_potential_check(int n, const LineParams& line,
                                           const GridSpec& grid, std::uint64_t seed,
                                           par::Exec exec = par::Exec::Parallel);

// Compares slice(mu~_n, c0, width) with a backward-iteration sample of the
// equilibrium measure of K_{c0} through log potentials at off-support probes.
ExperimentReport slice_vs_equilibrium(const std::vector<int>& n_list, Complex c0,
                                      double width, int brolin_count,
                                      std::uint64_t seed);

// Seeded sampling of the three Green inequalities; zero violations pass.
ExperimentReport green_inequality_suite(std::int64_t samples, std::uint64_t seed,
                                        par::Exec exec = par::Exec::Parallel);

ExperimentReport tangency_count_table(int n_max, const LineParams& line,
                                      const SolveOptions& opts = {});

// Derived sufficient threshold for the third Green inequality.
inline constexpr double kGreenLineThreshold = 16384.0;

}  // namespace bifcurrent

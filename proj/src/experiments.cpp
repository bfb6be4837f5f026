#include "bifcurrent/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bifcurrent/rng.hpp"

namespace bifcurrent {

namespace {

constexpr double kLogFloor = 1e-300;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool trend_pass(const std::vector<double>& d, double slack, double final_ratio) {
  if (d.size() < 2) return false;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i + 1] > (1.0 + slack) * d[i]) return false;
  }
  return d.back() < d.front() * final_ratio;
}

}  // namespace

double ExperimentReport::metric_value(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw std::out_of_range("ExperimentReport: no metric " + key);
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["seed"] = report.seed;
  if (report.pass < 0) {
    j["pass"] = nullptr;
  } else {
    j["pass"] = report.pass == 1;
  }
  j["parameters"] = report.parameters;
  j["labels"] = report.labels;
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& [k, v] : report.metrics) metrics.push_back({k, v});
  j["metrics"] = metrics;
  j["tables"] = report.tables;
  return j.dump(2) + "\n";
}

void write_report_file(const std::string& path, const ExperimentReport& report) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_report_file: cannot open " + path);
  os << report_to_json(report);
}

double phi_value(const Poly& a, const Poly& b, int n, Complex c) {
  Complex q = c;
  bool over = false;
  double frozen = 0.0;
  for (int k = 1; k < n; ++k) {
    const double mag = std::abs(q);
    if (mag > kOverflowGuard) {
      over = true;
      frozen = std::ldexp(std::log(mag), -k);
      break;
    }
    q = q * q + c;
  }
  if (!over && std::abs(q) > kOverflowGuard) {
    over = true;
    frozen = std::ldexp(std::log(std::abs(q)), -n);
  }
  if (over) {
    const double bmag = std::abs(b.eval(c));
    return frozen + std::ldexp(std::log(bmag > kLogFloor ? bmag : kLogFloor), -n);
  }
  const double w = std::abs(b.eval(c) * q - a.eval(c));
  return std::ldexp(std::log(w > kLogFloor ? w : kLogFloor), -n);
}

double potential_sum_value(int n, const LineParams& line, Complex c) {
  Complex q = c;
  const Complex target = line.at(c);
  bool over = false;
  double frozen = 0.0;
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    if (!over && std::abs(q) > kOverflowGuard) {
      over = true;
      frozen = std::ldexp(std::log(std::abs(q)), -k);
    }
    if (over) {
      sum += frozen;
    } else {
      const double w = std::abs(q - target);
      sum += std::ldexp(std::log(w > kLogFloor ? w : kLogFloor), -k);
      q = q * q + c;
    }
  }
  return 2.0 * sum / n;
}

GridField phi_field(const Poly& a, const Poly& b, int n, const GridSpec& grid,
                    par::Exec exec) {
  return sample_grid(grid.rect, grid.nx, grid.ny, exec,
                     [&](Complex c) { return phi_value(a, b, n, c); });
}

GridField potential_sum_field(int n, const LineParams& line, const GridSpec& grid,
                              par::Exec exec) {
  return sample_grid(grid.rect, grid.nx, grid.ny, exec,
                     [&](Complex c) { return potential_sum_value(n, line, c); });
}

ExperimentReport mandel_green_convergence(const Poly& a, const Poly& b,
                                          const std::vector<int>& n_list,
                                          const GridSpec& grid, par::Exec exec) {
  if (b.coeffs.empty()) throw std::invalid_argument("mandel_green_convergence: b must not vanish identically");
  ExperimentReport report;
  report.name = "mandel_green_convergence";
  report.parameters["nx"] = grid.nx;
  report.parameters["ny"] = grid.ny;
  std::ostringstream acoef, bcoef;
  for (const Complex& v : a.coeffs) acoef << fmt(v.real()) << "+" << fmt(v.imag()) << "i;";
  for (const Complex& v : b.coeffs) bcoef << fmt(v.real()) << "+" << fmt(v.imag()) << "i;";
  report.labels["a_coeffs"] = acoef.str();
  report.labels["b_coeffs"] = bcoef.str();

  const GridField g_field = green_param_field(grid.rect, grid.nx, grid.ny, 1.0,
                                              kDefaultTol, kDefaultIterCap, exec);
  std::vector<double> distances;
  std::ostringstream table;
  table << "n,l1_distance\n";
  for (int n : n_list) {
    const GridField phi = phi_field(a, b, n, grid, exec);
    const double d = potential_l1_distance(phi, g_field);
    distances.push_back(d);
    report.metric("l1_distance_n" + std::to_string(n), d);
    table << n << "," << fmt(d) << "\n";
  }
  report.tables["distances"] = table.str();
  report.pass = trend_pass(distances, 0.10, 1.0 / 3.0) ? 1 : 0;
  return report;
}

ExperimentReport parameter_potential_check(int n, const LineParams& line,
                                           const GridSpec& grid, std::uint64_t seed,
                                           par::Exec exec) {
  ExperimentReport report;
  report.name = "parameter_potential_check";
  report.seed = seed;
  report.parameters["n"] = n;
  report.parameters["alpha_re"] = line.alpha.real();
  report.parameters["alpha_im"] = line.alpha.imag();
  report.parameters["beta_re"] = line.beta.real();
  report.parameters["beta_im"] = line.beta.imag();

  const TangencyCloud tangencies = vertical_tangencies(n, line);
  const AtomCloud marginal = marginal_c(tangencies.as_cloud());
  report.metric("certified", tangencies.certified ? 1.0 : 0.0);

  // The branch-count identity: the potential sum equals the marginal's log
  // potential up to the constant ln|1 - alpha| / n contributed by the
  // degree-one factor of the first level.
  const double level1_shift = std::log(std::abs(Complex{1.0, 0.0} - line.alpha)) / n;
  Rng rng(seed);
  double max_residual = 0.0;
  int probes = 0;
  while (probes < 100) {
    const Complex c = rng.in_rect(grid.rect.re_min, grid.rect.re_max,
                                  grid.rect.im_min, grid.rect.im_max);
    bool off_atom = true;
    for (const Atom& atom : marginal.atoms) {
      if (std::abs(c - atom.x) < 1e-6) {
        off_atom = false;
        break;
      }
    }
    if (!off_atom) continue;
    ++probes;
    const double direct = potential_sum_value(n, line, c);
    const double via_cloud = log_potential(marginal, c) + level1_shift;
    max_residual = std::max(max_residual, std::abs(direct - via_cloud));
  }
  report.metric("identity_max_residual", max_residual);
  const bool identity_ok = max_residual <= 1e-8;

  // L^1 trend of the potential sums toward 2 g_c(0), over even depths up to n.
  const GridField target = green_param_field(grid.rect, grid.nx, grid.ny, 2.0,
                                             kDefaultTol, kDefaultIterCap, exec);
  std::vector<double> distances;
  std::ostringstream table;
  table << "n,l1_distance\n";
  for (int m = 4; m <= n; m += 2) {
    const GridField u = potential_sum_field(m, line, grid, exec);
    const double d = potential_l1_distance(u, target);
    distances.push_back(d);
    report.metric("l1_distance_n" + std::to_string(m), d);
    table << m << "," << fmt(d) << "\n";
  }
  report.tables["distances"] = table.str();
  const bool trend_ok = distances.size() < 2 || trend_pass(distances, 0.10, 1.0);

  // Mass of dd^c of the potential sum at measure resolution.
  const GridSpec mass_grid{{-3.0, 2.0, -2.5, 2.5}, 2048, 2048};
  const GridField u_fine = potential_sum_field(n, line, mass_grid, exec);
  const GridMeasure mu_n = grid_laplacian_measure(u_fine, exec);
  report.metric("laplacian_mass", mu_n.total_mass());
  report.metric("laplacian_clipped", mu_n.clipped_negative_mass);
  const bool mass_ok = std::abs(mu_n.total_mass() - 1.0) <= 0.03;

  report.pass = (identity_ok && trend_ok && mass_ok && tangencies.certified) ? 1 : 0;
  return report;
}

ExperimentReport slice_vs_equilibrium(const std::vector<int>& n_list, Complex c0,
                                      double width, int brolin_count,
                                      std::uint64_t seed) {
  ExperimentReport report;
  report.name = "slice_vs_equilibrium";
  report.seed = seed;
  report.parameters["c0_re"] = c0.real();
  report.parameters["c0_im"] = c0.imag();
  report.parameters["width"] = width;
  report.parameters["brolin_count"] = brolin_count;

  const AtomCloud equilibrium = sample_brolin(c0, Complex{1.0, 0.0}, brolin_count, 64, seed);

  std::vector<Complex> probes;
  for (int i = 0; i < 50; ++i) {
    const double angle = 2.0 * std::numbers::pi * (i + 0.5) / 50.0;
    probes.push_back(3.5 * Complex{std::cos(angle), std::sin(angle)});
  }

  // Mass of m in the window, for the pushforward cross-check. The local rect
  // must keep the window away from the zeroed boundary ring.
  const double pad = 0.4;
  const Rect local{c0.real() - width - pad, c0.real() + width + pad,
                   c0.imag() - width - pad, c0.imag() + width + pad};
  const GridField local_g = green_param_field(local, 512, 512, 2.0);
  const GridMeasure local_m = grid_laplacian_measure(local_g);
  double window_mass_m = 0.0;
  for (int j = 0; j < local_m.ny; ++j) {
    for (int i = 0; i < local_m.nx; ++i) {
      const Complex cell = local_g.cell_center(i, j);
      if (std::abs(cell - c0) <= width) {
        window_mass_m += local_m.cell_mass[static_cast<std::size_t>(j) * local_m.nx + i];
      }
    }
  }
  report.metric("window_mass_m", window_mass_m);

  std::vector<double> gaps;
  std::ostringstream table;
  table << "n,atoms_in_window,window_mass,potential_gap\n";
  bool any_empty = false;
  bool all_certified = true;
  for (int n : n_list) {
    const TangencyCloud tang = vertical_tangencies(n, LineParams{});
    all_certified = all_certified && tang.certified;
    double window_mass = 0.0;
    for (const TangencyAtom& a : tang.atoms) {
      if (std::abs(a.c - c0) <= width) window_mass += a.weight;
    }
    report.metric("window_mass_n" + std::to_string(n), window_mass);
    const AtomCloud sliced = slice(tang.as_cloud(), c0, width);
    if (sliced.empty()) {
      any_empty = true;
      report.metric("empty_slice_n" + std::to_string(n), 1.0);
      table << n << ",0,0,nan\n";
      continue;
    }
    double gap = 0.0;
    for (const Complex& p : probes) {
      gap += std::abs(log_potential(sliced, p) - log_potential(equilibrium, p));
    }
    gap /= static_cast<double>(probes.size());
    gaps.push_back(gap);
    report.metric("potential_gap_n" + std::to_string(n), gap);
    table << n << "," << sliced.atoms.size() << "," << fmt(window_mass) << ","
          << fmt(gap) << "\n";
  }
  report.tables["gaps"] = table.str();
  const bool trend_ok = gaps.size() >= 2 && trend_pass(gaps, 0.10, 1.0);
  report.pass = (!any_empty && all_certified && trend_ok) ? 1 : 0;
  return report;
}

ExperimentReport green_inequality_suite(std::int64_t samples, std::uint64_t seed,
                                        par::Exec exec) {
  ExperimentReport report;
  report.name = "green_inequality_suite";
  report.seed = seed;
  report.parameters["samples"] = static_cast<double>(samples);
  report.parameters["tolerance"] = 1e-9;
  report.parameters["item3_c_min"] = kGreenLineThreshold;

  const std::int64_t n_boundary = samples * 5 / 100;
  const std::int64_t n_item1 = samples * 30 / 100;
  const std::int64_t n_item2 = samples * 35 / 100;
  const std::int64_t n_item3 = samples - n_boundary - n_item1 - n_item2;
  const double tol = 1e-9;

  std::vector<unsigned char> violated(static_cast<std::size_t>(samples), 0);
  std::vector<double> margin(static_cast<std::size_t>(samples), 0.0);

  par::for_each_index(samples, exec, [&](std::int64_t idx) {
    Rng rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(idx) + 1)));
    double breach;  // amount by which the inequality is exceeded
    if (idx < n_item1 + n_boundary) {
      // (1): g_c(z) <= ln 2 + max(ln|c|/2, ln|z|) for |c| >= 1
      const Complex c = (idx < n_item1) ? rng.annulus(1.0, 1e6) : rng.unit();
      const Complex z = rng.annulus(1e-3, 1e6);
      const double g = green(c, z).g;
      const double bound = std::numbers::ln2 +
                           std::max(0.5 * std::log(std::abs(c)), std::log(std::abs(z)));
      breach = g - bound;
    } else if (idx < n_item1 + n_boundary + n_item2) {
      // (2): max(g_c(z), g_c(c)/2) >= ln(|z|/4)
      const Complex c = rng.in_rect(-2.5, 2.5, -2.5, 2.5);
      const Complex z = rng.annulus(1e-3, 1e3);
      const double lhs = std::max(green(c, z).g, 0.5 * green_param(c).gM);
      breach = std::log(std::abs(z) / 4.0) - lhs;
    } else {
      // (3): g_c(alpha c + beta) < g_c(c) for |c| >= C0 in the admissible box
      const Complex c = rng.annulus(kGreenLineThreshold, 1e7);
      const Complex alpha = rng.annulus(1e-2, 1e-1);
      const Complex beta = rng.in_disk(2.0);
      const double lhs = green(c, alpha * c + beta).g;
      const double rhs = green_param(c).gM;  // g_c(c) = 2 g_c(0)
      breach = lhs - rhs;
    }
    margin[static_cast<std::size_t>(idx)] = breach;
    if (breach > ((idx >= samples - n_item3) ? -tol : tol)) {
      violated[static_cast<std::size_t>(idx)] = 1;
    }
  });

  std::int64_t violations = 0;
  double worst = -1e300;
  for (std::int64_t i = 0; i < samples; ++i) {
    violations += violated[static_cast<std::size_t>(i)];
    worst = std::max(worst, margin[static_cast<std::size_t>(i)]);
  }
  report.metric("violations", static_cast<double>(violations));
  report.metric("worst_breach", worst);
  report.metric("samples_item1", static_cast<double>(n_item1));
  report.metric("samples_boundary", static_cast<double>(n_boundary));
  report.metric("samples_item2", static_cast<double>(n_item2));
  report.metric("samples_item3", static_cast<double>(n_item3));
  report.pass = violations == 0 ? 1 : 0;
  return report;
}

ExperimentReport tangency_count_table(int n_max, const LineParams& line,
                                      const SolveOptions& opts) {
  ExperimentReport report;
  report.name = "tangency_count_table";
  report.parameters["n_max"] = n_max;
  report.parameters["alpha_re"] = line.alpha.real();
  report.parameters["alpha_im"] = line.alpha.imag();
  report.parameters["beta_re"] = line.beta.real();
  report.parameters["beta_im"] = line.beta.imag();

  std::ostringstream table;
  table << "n,count,expected,certified\n";
  bool all_ok = true;
  for (int n = 1; n <= n_max; ++n) {
    const TangencyCount tc = tangency_count(n, line, opts);
    const std::int64_t expected = static_cast<std::int64_t>(n) << (n - 1);
    table << n << "," << tc.count << "," << expected << ","
          << (tc.certified ? "true" : "false") << "\n";
    if (!tc.certified || tc.count != expected) all_ok = false;
  }
  report.tables["counts"] = table.str();
  report.pass = all_ok ? 1 : 0;
  return report;
}

}  // namespace bifcurrent

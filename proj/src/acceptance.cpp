#include "bifcurrent/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bifcurrent/experiments.hpp"
#include "bifcurrent/grid_io.hpp"
#include "bifcurrent/rng.hpp"

namespace bifcurrent {

namespace {

namespace fs = std::filesystem;

struct ArtifactSink {
  std::string dir;

  bool active() const { return !dir.empty(); }
  void text(const std::string& name, const std::string& content) const {
    if (!active()) return;
    std::ofstream os(fs::path(dir) / name, std::ios::binary);
    os << content;
  }
  std::string path(const std::string& name) const {
    return (fs::path(dir) / name).string();
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --- criterion 1: tangency counts over the default and seeded lines --------

CriterionResult criterion_tangency_counts(std::uint64_t seed, par::Exec exec,
                                          const ArtifactSink& sink) {
  CriterionResult r{1, "tangency count n*2^{n-1}, default + 5 seeded lines, n <= 10", true, "", 0.0};
  std::vector<LineParams> lines{LineParams{}};
  Rng rng(splitmix64(seed ^ 0x74616e67ull));
  while (lines.size() < 6) {
    LineParams line{rng.annulus(1e-2, 1e-1), rng.in_disk(2.0)};
    if (line.admissible()) lines.push_back(line);
  }

  SolveOptions opts;
  opts.exec = exec;
  std::ostringstream table;
  table << "line,alpha_re,alpha_im,beta_re,beta_im,n,count,expected,certified\n";
  for (std::size_t li = 0; li < lines.size(); ++li) {
    for (int n = 1; n <= 10; ++n) {
      const TangencyCount tc = tangency_count(n, lines[li], opts);
      const std::int64_t expected = static_cast<std::int64_t>(n) << (n - 1);
      table << li << "," << lines[li].alpha.real() << "," << lines[li].alpha.imag()
            << "," << lines[li].beta.real() << "," << lines[li].beta.imag() << ","
            << n << "," << tc.count << "," << expected << ","
            << (tc.certified ? "true" : "false") << "\n";
      if (!tc.certified || tc.count != expected) {
        r.pass = false;
        r.detail = "line " + std::to_string(li) + " n=" + std::to_string(n) +
                   " count=" + std::to_string(tc.count) +
                   (tc.certified ? "" : " uncertified");
      }
    }
  }
  sink.text("tangency_counts.csv", table.str());
  if (r.pass) r.detail = "60 rows exact and certified";
  return r;
}

// --- criterion 2: mass of mu~_n --------------------------------------------

CriterionResult criterion_mass_identity(par::Exec exec, const ArtifactSink& sink) {
  CriterionResult r{2, "mass of mu~_n equals 1 to 1e-12, certified n <= 12", true, "", 0.0};
  SolveOptions opts;
  opts.exec = exec;
  std::ostringstream table;
  table << "n,atoms,mass,mass_error,certified\n";
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const TangencyCloud cloud = vertical_tangencies(n, LineParams{}, opts);
    const double mass = cloud.total_mass();
    const double err = std::abs(mass - 1.0);
    worst = std::max(worst, err);
    table << n << "," << cloud.atoms.size() << "," << fmt(mass) << "," << fmt(err)
          << "," << (cloud.certified ? "true" : "false") << "\n";
    if (!cloud.certified || err > 1e-12) {
      r.pass = false;
      r.detail = "n=" + std::to_string(n) + " mass error " + fmt(err) +
                 (cloud.certified ? "" : " uncertified");
    }
  }
  sink.text("mass_identity.csv", table.str());
  if (r.pass) r.detail = "max |mass-1| = " + fmt(worst);
  return r;
}

// --- criterion 3: potential identity ----------------------------------------

double potential_identity_residual(int n, const LineParams& line, std::uint64_t seed) {
  const TangencyCloud cloud = vertical_tangencies(n, line);
  const AtomCloud marginal = marginal_c(cloud.as_cloud());
  const double shift = std::log(std::abs(Complex{1.0, 0.0} - line.alpha)) / n;
  Rng rng(seed);
  double worst = 0.0;
  int probes = 0;
  while (probes < 100) {
    const Complex c = rng.in_rect(-2.5, 1.5, -1.5, 1.5);
    bool off_atom = true;
    for (const Atom& a : marginal.atoms) {
      if (std::abs(c - a.x) < 1e-6) {
        off_atom = false;
        break;
      }
    }
    if (!off_atom) continue;
    ++probes;
    const double direct = potential_sum_value(n, line, c);
    const double via_cloud = log_potential(marginal, c) + shift;
    worst = std::max(worst, std::abs(direct - via_cloud));
  }
  return worst;
}

CriterionResult criterion_potential_identity(std::uint64_t seed, const ArtifactSink& sink) {
  CriterionResult r{3, "marginal log potential equals the phi_k sum, 100 probes, n in {4,8,12}", true, "", 0.0};
  std::ostringstream table;
  table << "line,n,max_residual\n";
  double worst = 0.0;
  // alpha = 0 keeps every level factor monic, so the identity holds verbatim;
  // the default line needs the documented ln|1-alpha|/n constant from the
  // degree-one first level, which potential_identity_residual includes.
  const LineParams lines[2] = {LineParams{Complex{0.0, 0.0}, Complex{1.0, 0.0}},
                               LineParams{}};
  const char* names[2] = {"a=1", "default"};
  for (int li = 0; li < 2; ++li) {
    for (int n : {4, 8, 12}) {
      const double res = potential_identity_residual(n, lines[li], splitmix64(seed + n));
      table << names[li] << "," << n << "," << fmt(res) << "\n";
      worst = std::max(worst, res);
      if (res > 1e-8) {
        r.pass = false;
        r.detail = std::string(names[li]) + " n=" + std::to_string(n) +
                   " residual " + fmt(res);
      }
    }
  }
  sink.text("potential_identity.csv", table.str());
  if (r.pass) r.detail = "max residual " + fmt(worst);
  return r;
}

// --- criterion 4: Green-field convergence trend -----------------------------

CriterionResult criterion_convergence_trend(par::Exec exec, const ArtifactSink& sink) {
  CriterionResult r{4, "L1 trend of phi_n toward g_c(0), two target curves, 256^2", true, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec grid;
  const std::vector<int> n_list{4, 6, 8, 10, 12};
  const Poly zero{{Complex{0.0, 0.0}}};
  const Poly one{{Complex{1.0, 0.0}}};
  const LineParams line{};
  const Poly affine{{line.beta, line.alpha}};

  const ExperimentReport rep_a = mandel_green_convergence(zero, one, n_list, grid, exec);
  const ExperimentReport rep_b = mandel_green_convergence(affine, one, n_list, grid, exec);
  sink.text("convergence_a0_b1.json", report_to_json(rep_a));
  sink.text("convergence_line_b1.json", report_to_json(rep_b));

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = rep_a.pass == 1 && rep_b.pass == 1 && seconds < 120.0;
  r.detail = "first/final (a=0): " + fmt(rep_a.metrics.front().second) + "/" +
             fmt(rep_a.metrics.back().second) + ", (a=line): " +
             fmt(rep_b.metrics.front().second) + "/" + fmt(rep_b.metrics.back().second);
  if (seconds >= 120.0) r.detail += " (over 2 min budget)";
  return r;
}

// --- criterion 5: Green inequality suite ------------------------------------

CriterionResult criterion_green_inequalities(std::uint64_t seed, par::Exec exec,
                                             const ArtifactSink& sink) {
  CriterionResult r{5, "Green inequalities (1)-(3), 1e6 seeded samples, tol 1e-9", true, "", 0.0};
  const ExperimentReport rep = green_inequality_suite(1000000, seed, exec);
  sink.text("green_inequalities.json", report_to_json(rep));
  r.pass = rep.pass == 1;
  r.detail = "violations=" + fmt(rep.metric_value("violations")) +
             " worst_breach=" + fmt(rep.metric_value("worst_breach"));
  return r;
}

// --- criterion 6: Brolin sampling vs the Green function ---------------------

CriterionResult criterion_brolin_oracle(std::uint64_t seed, const ArtifactSink& sink) {
  CriterionResult r{6, "backward-orbit potential matches g_c at 50 probes, c in {0,-2,i}", true, "", 0.0};
  const Complex cs[3] = {{0.0, 0.0}, {-2.0, 0.0}, {0.0, 1.0}};
  const char* names[3] = {"0", "-2", "i"};
  std::ostringstream table;
  std::ostringstream detail;
  table << "c,mean_gap,max_circle_deviation\n";
  for (int ci = 0; ci < 3; ++ci) {
    const AtomCloud cloud = sample_brolin(cs[ci], Complex{1.0, 0.0}, 1 << 16, 64,
                                          splitmix64(seed + static_cast<std::uint64_t>(ci)));
    Rng rng(splitmix64(seed ^ (0xb201ull + static_cast<std::uint64_t>(ci))));
    double gap = 0.0;
    for (int p = 0; p < 50; ++p) {
      const Complex probe = rng.annulus(3.0, 5.0);
      gap += std::abs(log_potential(cloud, probe) - green(cs[ci], probe).g);
    }
    gap /= 50.0;
    double circle_dev = 0.0;
    if (ci == 0) {
      for (const Atom& a : cloud.atoms) {
        circle_dev = std::max(circle_dev, std::abs(std::abs(a.x) - 1.0));
      }
      if (circle_dev > 1e-9) r.pass = false;
    }
    table << names[ci] << "," << fmt(gap) << "," << (ci == 0 ? fmt(circle_dev) : "") << "\n";
    if (gap >= 5e-3) r.pass = false;
    detail << (ci ? ", " : "") << names[ci] << ": gap " << fmt(gap);
    if (ci == 0) detail << ", circle dev " << fmt(circle_dev);
  }
  r.detail = detail.str();
  sink.text("brolin_oracle.csv", table.str());
  return r;
}

// --- criterion 7: mass of the parameter measure -----------------------------

CriterionResult criterion_parameter_mass(par::Exec exec, const ArtifactSink& sink) {
  CriterionResult r{7, "dd^c of 2 g_c(0) on [-3,2]x[-2.5,2.5] at 2048^2 has mass 1 +- 3%", true, "", 0.0};
  const Rect rect{-3.0, 2.0, -2.5, 2.5};
  const GridField field = green_param_field(rect, 2048, 2048, 2.0, kDefaultTol,
                                            kDefaultIterCap, exec);
  const GridMeasure m = grid_laplacian_measure(field, exec);
  const double mass = m.total_mass();
  r.pass = std::abs(mass - 1.0) <= 0.03;
  r.detail = "mass=" + fmt(mass) + " clipped=" + fmt(m.clipped_negative_mass);
  std::ostringstream report;
  report << "mass,clipped\n" << fmt(mass) << "," << fmt(m.clipped_negative_mass) << "\n";
  sink.text("parameter_mass.csv", report.str());
  return r;
}

// --- criterion 8: lifted-map invariants --------------------------------------

CriterionResult criterion_lifted_invariants(std::uint64_t seed, const ArtifactSink& sink) {
  CriterionResult r{8, "V-invariance, lift composition, jet derivatives vs finite differences", true, "", 0.0};

  // V-invariance on 1e4 seeded vertical directions.
  Rng rng(splitmix64(seed ^ 0x11f7ull));
  double worst_cross = 0.0;
  int done = 0;
  while (done < 10000) {
    TangentChartPoint pt;
    pt.c = rng.in_disk(1.5);
    pt.z = rng.in_disk(1.5);
    pt.v1 = Complex{0.0, 0.0};
    pt.v2 = rng.unit();
    const int n = 1 + static_cast<int>(rng.bits() % 12);
    const LiftResult lifted = lift_iterate(pt, n);
    if (lifted.overflowed) continue;
    ++done;
    TangentChartPoint vertical;
    vertical.v1 = Complex{0.0, 0.0};
    vertical.v2 = Complex{1.0, 0.0};
    worst_cross = std::max(worst_cross, projective_cross(lifted.point, vertical));
  }
  if (worst_cross > 1e-12) {
    r.pass = false;
    r.detail = "V-invariance cross " + fmt(worst_cross);
  }

  // Composition F^{a+b} = F^b o F^a projectively on 100 samples.
  double worst_comp = 0.0;
  done = 0;
  while (done < 100) {
    TangentChartPoint pt;
    pt.c = rng.in_disk(1.2);
    pt.z = rng.in_disk(1.2);
    pt.v1 = rng.unit() * std::sqrt(rng.uniform());
    pt.v2 = rng.unit() * std::sqrt(1.0 - std::norm(pt.v1));
    pt.normalize();
    const int a = 1 + static_cast<int>(rng.bits() % 6);
    const int b = 1 + static_cast<int>(rng.bits() % 6);
    const LiftResult whole = lift_iterate(pt, a + b);
    const LiftResult first = lift_iterate(pt, a);
    if (whole.overflowed || first.overflowed) continue;
    const LiftResult second = lift_iterate(first.point, b);
    if (second.overflowed) continue;
    ++done;
    worst_comp = std::max(worst_comp, projective_cross(whole.point, second.point));
  }
  if (worst_comp > 1e-9) {
    r.pass = false;
    r.detail = "composition cross " + fmt(worst_comp);
  }

  // Jet derivatives against Richardson-extrapolated central differences on
  // 1e3 samples. Near-critical orbits carry third derivatives far above the
  // first, so the oracle uses two step sizes for O(h^4) truncation while h
  // stays large enough to keep rounding noise down.
  const double h = 1e-4;
  double worst_fd = 0.0;
  done = 0;
  while (done < 1000) {
    const Complex c = rng.in_disk(0.5);
    const Complex z = rng.in_disk(0.5);
    const int n = 1 + static_cast<int>(rng.bits() % 12);
    const Jet jet = jet_iterate(c, z, n);
    if (jet.overflowed || std::abs(jet.value) > 10.0) continue;
    auto central = [&](Complex dz_step, Complex dc_step, double step) {
      return (iterate(c + dc_step, z + dz_step, n).value -
              iterate(c - dc_step, z - dz_step, n).value) /
             (2.0 * step);
    };
    ++done;
    const Complex fd_dz = (4.0 * central(Complex{h / 2, 0}, Complex{}, h / 2) -
                           central(Complex{h, 0}, Complex{}, h)) / 3.0;
    const Complex fd_dc = (4.0 * central(Complex{}, Complex{h / 2, 0}, h / 2) -
                           central(Complex{}, Complex{h, 0}, h)) / 3.0;
    worst_fd = std::max(worst_fd, std::abs(fd_dz - jet.dz) / (1.0 + std::abs(jet.dz)));
    worst_fd = std::max(worst_fd, std::abs(fd_dc - jet.dc) / (1.0 + std::abs(jet.dc)));
  }
  if (worst_fd > 1e-6) {
    r.pass = false;
    r.detail = "finite-difference mismatch " + fmt(worst_fd);
  }

  if (r.pass) {
    r.detail = "cross=" + fmt(worst_cross) + " comp=" + fmt(worst_comp) +
               " fd=" + fmt(worst_fd);
  }
  std::ostringstream table;
  table << "check,worst\nv_invariance," << fmt(worst_cross) << "\ncomposition,"
        << fmt(worst_comp) << "\nfinite_difference," << fmt(worst_fd) << "\n";
  sink.text("lifted_invariants.csv", table.str());
  return r;
}

// --- criterion 9: root certification ----------------------------------------

CriterionResult criterion_root_certification(par::Exec exec, const ArtifactSink& sink) {
  CriterionResult r{9, "solve certified for k <= 13; Aberth multiset agreement for k <= 10", true, "", 0.0};
  const LineParams line{};
  std::ostringstream table;
  table << "k,roots,expected,certified,max_scaled_residual,oracle_max_distance\n";
  double worst_oracle = 0.0;
  for (int k = 1; k <= 13; ++k) {
    SolveOptions opts;
    opts.exec = exec;
    const RootSet rs = solve_qk_line(k, line, opts);
    double oracle_dist = 0.0;
    if (k <= 10) {
      const std::vector<Complex> oracle = qk_line_roots_aberth(k, line);
      if (oracle.size() != rs.roots.size()) {
        oracle_dist = 1e300;
      } else {
        std::vector<bool> used(oracle.size(), false);
        for (const Complex& root : rs.roots) {
          double best = 1e300;
          std::size_t best_i = 0;
          for (std::size_t i = 0; i < oracle.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(root - oracle[i]);
            if (d < best) {
              best = d;
              best_i = i;
            }
          }
          used[best_i] = true;
          oracle_dist = std::max(oracle_dist, best);
        }
      }
      worst_oracle = std::max(worst_oracle, oracle_dist);
    }
    table << k << "," << rs.roots.size() << "," << rs.expected_count << ","
          << (rs.certified ? "true" : "false") << "," << fmt(rs.max_residual) << ","
          << (k <= 10 ? fmt(oracle_dist) : "") << "\n";
    if (!rs.certified || (k <= 10 && oracle_dist > 1e-7)) {
      r.pass = false;
      r.detail = "k=" + std::to_string(k) +
                 (rs.certified ? " oracle distance " + fmt(oracle_dist) : " uncertified");
    }
    if (k == 10 && sink.active()) {
      std::ostringstream roots;
      write_rootset_csv(roots, rs);
      sink.text("roots_k10.csv", roots.str());
    }
  }
  sink.text("root_certification.csv", table.str());
  if (r.pass) r.detail = "all certified; oracle max distance " + fmt(worst_oracle);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options) {
  ArtifactSink sink{options.outdir};
  if (sink.active()) fs::create_directories(options.outdir);

  std::vector<CriterionResult> results;
  const auto timed = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res = fn();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(res);
  };

  timed([&] {
    CriterionResult res = criterion_tangency_counts(options.seed, options.exec, sink);
    // stated budget: five minutes
    return res;
  });
  timed([&] { return criterion_mass_identity(options.exec, sink); });
  timed([&] { return criterion_potential_identity(options.seed, sink); });
  timed([&] { return criterion_convergence_trend(options.exec, sink); });
  timed([&] { return criterion_green_inequalities(options.seed, options.exec, sink); });
  timed([&] { return criterion_brolin_oracle(options.seed, sink); });
  timed([&] { return criterion_parameter_mass(options.exec, sink); });
  timed([&] { return criterion_lifted_invariants(options.seed, sink); });
  timed([&] { return criterion_root_certification(options.exec, sink); });

  // runtime budgets stated with criteria 1 and 4
  if (results[0].pass && results[0].seconds >= 300.0) {
    results[0].pass = false;
    results[0].detail += " (over 5 min budget)";
  }

  if (sink.active()) {
    std::ostringstream summary;
    for (const CriterionResult& r : results) summary << format_result_line(r) << "\n";
    sink.text("verify_summary.txt", summary.str());
  }
  return results;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

std::string format_result_line(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) +
         ": " + r.label + " [" + r.detail + "]";
}

}  // namespace bifcurrent

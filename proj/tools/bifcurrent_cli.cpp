// Command-line front end: subcommands for field dumps, tangency clouds,
// measure experiments, verification, and grid rendering.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bifcurrent/acceptance.hpp"
#include "bifcurrent/experiments.hpp"
#include "bifcurrent/grid_io.hpp"
#include "bifcurrent/grid_kernels.hpp"
#include "bifcurrent/lifted_dynamics.hpp"
#include "bifcurrent/parallel.hpp"

namespace fs = std::filesystem;
using namespace bifcurrent;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitExperimentFail = 2;

struct Session {
  std::string outdir = "out";
  std::uint64_t seed = 42;
  int threads = 0;
  std::string config_path;
  std::vector<std::string> written;  // removed again on hard failure

  fs::path out(const std::string& name) {
    fs::create_directories(outdir);
    fs::path p = fs::path(outdir) / name;
    written.push_back(p.string());
    return p;
  }

  void discard_outputs() {
    for (const std::string& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  json j;
  is >> j;
  if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");
  return j;
}

template <class T>
void config_default(const json& cfg, const std::string& key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

void write_resolved_config(Session& session, const std::string& command, const json& values) {
  json j = values;
  j["command"] = command;
  j["seed"] = session.seed;
  j["threads"] = session.threads;
  j["out"] = session.outdir;
  std::ofstream os(session.out("config.resolved"));
  os << j.dump(2) << "\n";
}

Rect parse_rect(const std::vector<double>& v) {
  if (v.size() != 4) throw CLI::ValidationError("--rect expects re_min,re_max,im_min,im_max");
  return {v[0], v[1], v[2], v[3]};
}

Poly parse_poly(const std::vector<double>& coeffs) {
  Poly p;
  for (double v : coeffs) p.coeffs.push_back(Complex{v, 0.0});
  if (p.coeffs.empty()) p.coeffs.push_back(Complex{});
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bifcurrent: Green functions, vertical tangencies and parameter measures of z^2 + c"};
  app.require_subcommand(1);
  app.fallthrough();

  Session session;

  // Scan for --config before CLI11 parsing so file values become defaults
  // and explicit flags still win.
  json cfg = json::object();
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") session.config_path = argv[i + 1];
  }
  try {
    if (!session.config_path.empty()) cfg = load_config(session.config_path);
    config_default(cfg, "out", session.outdir);
    config_default(cfg, "seed", session.seed);
    config_default(cfg, "threads", session.threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  app.add_option("--out", session.outdir, "output directory");
  app.add_option("--seed", session.seed, "random seed");
  app.add_option("--threads", session.threads, "worker threads (0 = auto / BIFCURRENT_THREADS)");
  app.add_option("--config", session.config_path, "JSON config file; flags override file values");

  // green: dynamical-plane Green field for a fixed parameter, or point value
  auto* cmd_green = app.add_subcommand("green", "Green function g_c(z): field dump or point value");
  double g_cre = 0.0, g_cim = 0.0;
  std::vector<double> g_rect{-2.0, 2.0, -2.0, 2.0};
  int g_nx = 512, g_ny = 512;
  std::vector<double> g_point;
  bool g_pgm = false;
  config_default(cfg, "c_re", g_cre);
  config_default(cfg, "c_im", g_cim);
  config_default(cfg, "nx", g_nx);
  config_default(cfg, "ny", g_ny);
  cmd_green->add_option("--c-re", g_cre, "Re c");
  cmd_green->add_option("--c-im", g_cim, "Im c");
  cmd_green->add_option("--rect", g_rect, "re_min,re_max,im_min,im_max")->expected(4);
  cmd_green->add_option("--nx", g_nx, "grid columns");
  cmd_green->add_option("--ny", g_ny, "grid rows");
  cmd_green->add_option("--z", g_point, "evaluate at a single z = re,im instead of a field")->expected(2);
  cmd_green->add_flag("--pgm", g_pgm, "write a PGM quick-look next to the grid");

  // mandel-grid: parameter-plane membership/Green render
  auto* cmd_mandel = app.add_subcommand("mandel-grid", "parameter-plane g_c(0) field and membership render");
  std::vector<double> m_rect{-2.5, 1.5, -1.5, 1.5};
  int m_nx = 1024, m_ny = 1024, m_cap = kDefaultIterCap;
  cmd_mandel->add_option("--rect", m_rect, "re_min,re_max,im_min,im_max")->expected(4);
  cmd_mandel->add_option("--nx", m_nx, "grid columns");
  cmd_mandel->add_option("--ny", m_ny, "grid rows");
  cmd_mandel->add_option("--n-cap", m_cap, "iteration cap");

  // tangency: cloud + count table
  auto* cmd_tangency = app.add_subcommand("tangency", "vertical-tangency cloud and count table");
  int t_n = 8, t_nmax = 0;
  double t_alpha_re = 0.05, t_alpha_im = 0.0, t_beta_re = 1.0, t_beta_im = 0.0;
  config_default(cfg, "n", t_n);
  config_default(cfg, "n_max", t_nmax);
  config_default(cfg, "alpha", t_alpha_re);
  config_default(cfg, "alpha_im", t_alpha_im);
  config_default(cfg, "beta", t_beta_re);
  config_default(cfg, "beta_im", t_beta_im);
  cmd_tangency->add_option("--n", t_n, "depth n");
  cmd_tangency->add_option("--n-max", t_nmax, "emit the table for 1..n_max instead of a single row");
  cmd_tangency->add_option("--alpha", t_alpha_re, "Re alpha of the line z = alpha c + beta");
  cmd_tangency->add_option("--alpha-im", t_alpha_im, "Im alpha");
  cmd_tangency->add_option("--beta", t_beta_re, "Re beta");
  cmd_tangency->add_option("--beta-im", t_beta_im, "Im beta");

  // mu-n: tangency measure, marginal, potential identity
  auto* cmd_mun = app.add_subcommand("mu-n", "build mu~_n, its c-marginal and the potential identity check");
  int u_n = 8;
  double u_alpha_re = 0.05, u_alpha_im = 0.0, u_beta_re = 1.0, u_beta_im = 0.0;
  config_default(cfg, "n", u_n);
  config_default(cfg, "alpha", u_alpha_re);
  config_default(cfg, "alpha_im", u_alpha_im);
  config_default(cfg, "beta", u_beta_re);
  config_default(cfg, "beta_im", u_beta_im);
  cmd_mun->add_option("--n", u_n, "depth n");
  cmd_mun->add_option("--alpha", u_alpha_re, "Re alpha");
  cmd_mun->add_option("--alpha-im", u_alpha_im, "Im alpha");
  cmd_mun->add_option("--beta", u_beta_re, "Re beta");
  cmd_mun->add_option("--beta-im", u_beta_im, "Im beta");

  // slice
  auto* cmd_slice = app.add_subcommand("slice", "slice mu~_n near a parameter and export the z-cloud");
  int s_n = 10;
  double s_c0_re = -2.0, s_c0_im = 0.0, s_width = 0.05;
  config_default(cfg, "n", s_n);
  config_default(cfg, "c0_re", s_c0_re);
  config_default(cfg, "c0_im", s_c0_im);
  config_default(cfg, "width", s_width);
  cmd_slice->add_option("--n", s_n, "depth n");
  cmd_slice->add_option("--c0-re", s_c0_re, "Re c0");
  cmd_slice->add_option("--c0-im", s_c0_im, "Im c0");
  cmd_slice->add_option("--width", s_width, "slice half-width");

  // convergence
  auto* cmd_conv = app.add_subcommand("convergence", "L1 convergence of phi_n toward the parameter Green field");
  std::vector<double> c_acoeffs{0.0};
  std::vector<double> c_bcoeffs{1.0};
  std::vector<int> c_nlist{4, 6, 8, 10, 12};
  std::vector<double> c_rect{-2.5, 1.5, -1.5, 1.5};
  int c_nx = 256, c_ny = 256;
  cmd_conv->add_option("--a-coeffs", c_acoeffs, "coefficients of a(c), ascending degree");
  cmd_conv->add_option("--b-coeffs", c_bcoeffs, "coefficients of b(c), ascending degree");
  cmd_conv->add_option("--n-list", c_nlist, "depths");
  cmd_conv->add_option("--rect", c_rect, "re_min,re_max,im_min,im_max")->expected(4);
  cmd_conv->add_option("--nx", c_nx, "grid columns");
  cmd_conv->add_option("--ny", c_ny, "grid rows");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "run the full invariant suite and write a report");

  // render
  auto* cmd_render = app.add_subcommand("render", "grid file -> 8-bit PGM");
  std::string r_in, r_out = "render.pgm";
  double r_gamma = 2.2;
  cmd_render->add_option("--in", r_in, "input .grid file")->required();
  cmd_render->add_option("--out-file", r_out, "output PGM path");
  cmd_render->add_option("--gamma", r_gamma, "gamma for the log-scaled render");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the flag schema
    return code == 0 ? kExitOk : kExitUsage;
  }

  const int threads = par::resolve_threads(session.threads);
  (void)threads;

  try {
    if (*cmd_green) {
      const Complex c{g_cre, g_cim};
      json resolved{{"c_re", g_cre}, {"c_im", g_cim}};
      if (!g_point.empty()) {
        const GreenValue gv = green(c, Complex{g_point[0], g_point[1]});
        std::printf("g = %.17g (error bound %.3g, %d iterations)\n", gv.g, gv.error_bound, gv.n_used);
        return kExitOk;
      }
      const Rect rect = parse_rect(g_rect);
      const GridField field = sample_grid(rect, g_nx, g_ny, par::Exec::Parallel,
                                          [&](Complex z) { return green(c, z).g; });
      resolved["nx"] = g_nx;
      resolved["ny"] = g_ny;
      write_grid_file(session.out("green.grid").string(), field);
      if (g_pgm) write_pgm_file(session.out("green.pgm").string(), field);
      write_resolved_config(session, "green", resolved);
      std::printf("wrote %s/green.grid (%dx%d)\n", session.outdir.c_str(), g_nx, g_ny);
      return kExitOk;
    }

    if (*cmd_mandel) {
      const Rect rect = parse_rect(m_rect);
      const GridField field = green_param_field(rect, m_nx, m_ny, 1.0, kDefaultTol, m_cap);
      std::int64_t inside = 0, outside = 0, undetermined = 0;
      std::vector<Membership::State> states(field.values.size());
      par::for_each_index(static_cast<std::int64_t>(field.values.size()), par::Exec::Parallel,
                          [&](std::int64_t idx) {
                            const int i = static_cast<int>(idx % m_nx);
                            const int j = static_cast<int>(idx / m_nx);
                            states[static_cast<std::size_t>(idx)] =
                                in_mandelbrot(field.cell_center(i, j), m_cap).state;
                          });
      for (const Membership::State s : states) {
        if (s == Membership::State::Inside) ++inside;
        else if (s == Membership::State::Outside) ++outside;
        else ++undetermined;
      }
      write_grid_file(session.out("mandel.grid").string(), field);
      write_pgm_file(session.out("mandel.pgm").string(), field);
      write_resolved_config(session, "mandel-grid",
                            json{{"nx", m_nx}, {"ny", m_ny}, {"n_cap", m_cap}});
      std::printf("inside=%lld outside=%lld undetermined=%lld\n",
                  static_cast<long long>(inside), static_cast<long long>(outside),
                  static_cast<long long>(undetermined));
      return kExitOk;
    }

    if (*cmd_tangency) {
      const LineParams line{{t_alpha_re, t_alpha_im}, {t_beta_re, t_beta_im}};
      const int n_hi = t_nmax > 0 ? t_nmax : t_n;
      const int n_lo = t_nmax > 0 ? 1 : t_n;
      std::printf("n,count,expected,certified\n");
      bool all_ok = true;
      for (int n = n_lo; n <= n_hi; ++n) {
        const TangencyCloud cloud = vertical_tangencies(n, line);
        const std::int64_t expected = static_cast<std::int64_t>(n) << (n - 1);
        std::printf("%d,%lld,%lld,%s\n", n, static_cast<long long>(cloud.atoms.size()),
                    static_cast<long long>(expected), cloud.certified ? "certified" : "uncertified");
        if (n == n_hi) {
          std::ofstream os(session.out("tangency_n" + std::to_string(n) + ".csv"));
          write_tangency_csv(os, cloud);
        }
        if (!cloud.certified || static_cast<std::int64_t>(cloud.atoms.size()) != expected) all_ok = false;
      }
      write_resolved_config(session, "tangency",
                            json{{"n", t_n}, {"n_max", t_nmax},
                                 {"alpha", t_alpha_re}, {"alpha_im", t_alpha_im},
                                 {"beta", t_beta_re}, {"beta_im", t_beta_im}});
      return all_ok ? kExitOk : kExitExperimentFail;
    }

    if (*cmd_mun) {
      const LineParams line{{u_alpha_re, u_alpha_im}, {u_beta_re, u_beta_im}};
      const TangencyCloud cloud = vertical_tangencies(u_n, line);
      {
        std::ofstream os(session.out("mu_n.csv"));
        write_tangency_csv(os, cloud);
      }
      const AtomCloud marginal = marginal_c(cloud.as_cloud());
      write_cloud_csv_file(session.out("mu_n_marginal.csv").string(), marginal);
      const ExperimentReport rep = parameter_potential_check(
          u_n, line, GridSpec{}, session.seed);
      write_report_file(session.out("potential_check.json").string(), rep);
      write_resolved_config(session, "mu-n",
                            json{{"n", u_n}, {"alpha", u_alpha_re}, {"alpha_im", u_alpha_im},
                                 {"beta", u_beta_re}, {"beta_im", u_beta_im}});
      std::printf("atoms=%lld mass=%.12f certified=%s potential_check=%s\n",
                  static_cast<long long>(cloud.atoms.size()), cloud.total_mass(),
                  cloud.certified ? "true" : "false", rep.pass == 1 ? "pass" : "fail");
      return rep.pass == 1 && cloud.certified ? kExitOk : kExitExperimentFail;
    }

    if (*cmd_slice) {
      const TangencyCloud cloud = vertical_tangencies(s_n, LineParams{});
      const AtomCloud sliced = slice(cloud.as_cloud(), Complex{s_c0_re, s_c0_im}, s_width);
      write_cloud_csv_file(session.out("slice.csv").string(), sliced);
      write_resolved_config(session, "slice",
                            json{{"n", s_n}, {"c0_re", s_c0_re}, {"c0_im", s_c0_im},
                                 {"width", s_width}});
      if (sliced.empty()) {
        std::printf("empty slice (no atoms within width %.3g of c0)\n", s_width);
        return kExitExperimentFail;
      }
      std::printf("slice atoms=%lld mass=%.12f\n",
                  static_cast<long long>(sliced.atoms.size()), sliced.total_mass());
      return kExitOk;
    }

    if (*cmd_conv) {
      const GridSpec grid{parse_rect(c_rect), c_nx, c_ny};
      const ExperimentReport rep = mandel_green_convergence(
          parse_poly(c_acoeffs), parse_poly(c_bcoeffs), c_nlist, grid);
      write_report_file(session.out("convergence.json").string(), rep);
      write_resolved_config(session, "convergence",
                            json{{"nx", c_nx}, {"ny", c_ny}});
      std::printf("%s\n", rep.tables.at("distances").c_str());
      return rep.pass == 1 ? kExitOk : kExitExperimentFail;
    }

    if (*cmd_verify) {
      AcceptanceOptions options;
      options.seed = session.seed;
      fs::create_directories(session.outdir);
      options.outdir = session.outdir;
      const std::vector<CriterionResult> results = run_acceptance_suite(options);
      for (const CriterionResult& r : results) {
        std::printf("%s\n", format_result_line(r).c_str());
      }
      write_resolved_config(session, "verify", json::object());
      return all_pass(results) ? kExitOk : kExitExperimentFail;
    }

    if (*cmd_render) {
      const GridField field = read_grid_file(r_in);
      write_pgm_file(r_out, field, r_gamma);
      std::printf("wrote %s\n", r_out.c_str());
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    session.discard_outputs();
    return kExitUsage;
  }
  return kExitUsage;
}

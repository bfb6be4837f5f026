#include <doctest.h>

#include <cmath>

#include "bifcurrent/experiments.hpp"
#include "bifcurrent/rng.hpp"

using namespace bifcurrent;

TEST_SUITE_BEGIN("experiments");

TEST_CASE("phi at depth 1 with a=0, b=1 is ln|c| / 2") {
  const Poly zero{{Complex{0, 0}}};
  const Poly one{{Complex{1, 0}}};
  Rng rng(61);
  for (int i = 0; i < 50; ++i) {
    const Complex c = rng.annulus(1e-2, 10.0);
    CHECK(phi_value(zero, one, 1, c) ==
          doctest::Approx(0.5 * std::log(std::abs(c))).epsilon(1e-12));
  }
}

TEST_CASE("phi tracks the Green function once the orbit escapes") {
  const Poly zero{{Complex{0, 0}}};
  const Poly one{{Complex{1, 0}}};
  for (const Complex c : {Complex{5, 0}, Complex{2, 2}, Complex{-3, 1}}) {
    const double g = green_param(c).g0.g;
    CHECK(std::abs(phi_value(zero, one, 10, c) - g) < 1e-9);
  }
}

TEST_CASE("phi survives the overflow regime through the stable form") {
  const Poly zero{{Complex{0, 0}}};
  const Poly one{{Complex{1, 0}}};
  const Complex c{50, 0};
  const double v = phi_value(zero, one, 12, c);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(green_param(c).g0.g).epsilon(1e-9));
}

TEST_CASE("potential sum equals the sum of phi values") {
  const LineParams line;
  const Poly affine{{line.beta, line.alpha}};
  const Poly one{{Complex{1, 0}}};
  Rng rng(67);
  for (int i = 0; i < 30; ++i) {
    const Complex c = rng.in_rect(-2.5, 1.5, -1.5, 1.5);
    const int n = 1 + static_cast<int>(rng.bits() % 10);
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += phi_value(affine, one, k, c);
    CHECK(potential_sum_value(n, line, c) ==
          doctest::Approx(2.0 * sum / n).epsilon(1e-12));
  }
}

TEST_CASE("mandel-green convergence trend at reduced resolution") {
  const Poly zero{{Complex{0, 0}}};
  const Poly one{{Complex{1, 0}}};
  GridSpec grid;
  grid.nx = grid.ny = 64;
  const ExperimentReport rep =
      mandel_green_convergence(zero, one, {4, 6, 8, 10, 12}, grid);
  CHECK(rep.pass == 1);
  CHECK(rep.metric_value("l1_distance_n12") < rep.metric_value("l1_distance_n4") / 3.0);
  CHECK(rep.tables.count("distances") == 1);
}

TEST_CASE("convergence also holds against the moving target a(c) = c") {
  const Poly ac{{Complex{0, 0}, Complex{1, 0}}};
  const Poly one{{Complex{1, 0}}};
  GridSpec grid;
  grid.nx = grid.ny = 64;
  const ExperimentReport rep = mandel_green_convergence(ac, one, {4, 6, 8, 10, 12}, grid);
  CHECK(rep.pass == 1);
}

TEST_CASE("green inequality suite finds no violations on a reduced sample") {
  const ExperimentReport rep = green_inequality_suite(20000, 4242);
  CHECK(rep.pass == 1);
  CHECK(rep.metric_value("violations") == 0.0);
}

TEST_CASE("tangency count table") {
  const ExperimentReport rep = tangency_count_table(6, LineParams{});
  CHECK(rep.pass == 1);
  CHECK(rep.tables.at("counts").find("6,192,192,true") != std::string::npos);
}

TEST_CASE("parameter potential check: identity, trend and mass") {
  const ExperimentReport rep =
      parameter_potential_check(6, LineParams{}, GridSpec{}, 77);
  CHECK(rep.pass == 1);
  CHECK(rep.metric_value("identity_max_residual") <= 1e-8);
  CHECK(std::abs(rep.metric_value("laplacian_mass") - 1.0) <= 0.03);
}

TEST_CASE("slice potentials approach the backward-orbit equilibrium sample") {
  const ExperimentReport rep =
      slice_vs_equilibrium({6, 8, 10}, Complex{-2, 0}, 0.05, 8192, 42);
  CHECK(rep.pass == 1);
  CHECK(rep.metric_value("potential_gap_n10") < rep.metric_value("potential_gap_n6"));
  // pushforward cross-check: the cloud's window mass approaches m's
  const double ratio = rep.metric_value("window_mass_n10") / rep.metric_value("window_mass_m");
  CHECK(ratio > 0.5);
  CHECK(ratio < 1.5);
}

TEST_CASE("slice experiment reports empty windows instead of failing") {
  const ExperimentReport rep =
      slice_vs_equilibrium({4}, Complex{0, 1}, 0.05, 2048, 42);
  CHECK(rep.pass == 0);
  CHECK(rep.metric_value("empty_slice_n4") == 1.0);
}

TEST_CASE("convergence experiment rejects an identically zero b") {
  const Poly zero{{Complex{0, 0}}};
  Poly empty_b;
  GridSpec grid;
  grid.nx = grid.ny = 16;
  CHECK_THROWS_AS(mandel_green_convergence(zero, empty_b, {2, 4}, grid),
                  std::invalid_argument);
}

TEST_CASE("report serialization is stable and excludes wall time") {
  ExperimentReport rep;
  rep.name = "demo";
  rep.seed = 7;
  rep.pass = 1;
  rep.parameters["n"] = 4;
  rep.metric("value", 0.5);
  rep.tables["t"] = "a,b\n1,2\n";
  rep.runtime_seconds = 1.25;
  const std::string a = report_to_json(rep);
  rep.runtime_seconds = 99.0;
  const std::string b = report_to_json(rep);
  CHECK(a == b);
  CHECK(a.find("runtime") == std::string::npos);
  CHECK(a.find("\"demo\"") != std::string::npos);
}

TEST_SUITE_END();

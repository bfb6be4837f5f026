#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bifcurrent/core_dynamics.hpp"
#include "bifcurrent/rng.hpp"

using namespace bifcurrent;

TEST_SUITE_BEGIN("core-dynamics");

TEST_CASE("iterate on hand-checkable orbits") {
  CHECK(iterate({0, 0}, {2, 0}, 3).value == Complex{256, 0});
  CHECK(iterate({-1, 0}, {0, 0}, 2).value == Complex{0, 0});
  CHECK(iterate({-2, 0}, {0, 0}, 3).value == Complex{2, 0});
  CHECK_FALSE(iterate({0, 0}, {2, 0}, 3).overflowed);
}

TEST_CASE("iterate flags overflow with the step index") {
  const OrbitValue v = iterate({0, 0}, {1e200, 0}, 3);
  CHECK(v.overflowed);
  CHECK(v.steps == 0);

  const OrbitValue w = iterate({0, 0}, {10, 0}, 400);
  CHECK(w.overflowed);
  CHECK(w.steps > 0);
  CHECK(w.steps < 400);
}

TEST_CASE("jet recursion at n=1 and n=2 matches hand algebra") {
  const Jet j1 = jet_iterate({0, 0}, {1, 0}, 1);
  CHECK(j1.value == Complex{1, 0});
  CHECK(j1.dz == Complex{2, 0});
  CHECK(j1.dc == Complex{1, 0});

  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    const Complex c = rng.in_disk(2.0);
    const Jet j2 = jet_iterate(c, {0, 0}, 2);
    CHECK(std::abs(j2.value - (c * c + c)) < 1e-14);
    CHECK(std::abs(j2.dc - (2.0 * c + 1.0)) < 1e-14);
    CHECK(std::abs(j2.dz) == 0.0);
  }
}

TEST_CASE("jet derivatives match central finite differences") {
  const Complex c{0.3, 0.1};
  const Complex z{0.2, 0.0};
  const int n = 6;
  const double h = 1e-6;
  const Jet jet = jet_iterate(c, z, n);
  const Complex fd_dz = (iterate(c, z + h, n).value - iterate(c, z - h, n).value) / (2 * h);
  const Complex fd_dc = (iterate(c + h, z, n).value - iterate(c - h, z, n).value) / (2 * h);
  CHECK(std::abs(fd_dz - jet.dz) / std::abs(jet.dz) < 1e-6);
  CHECK(std::abs(fd_dc - jet.dc) / std::abs(jet.dc) < 1e-6);
}

TEST_CASE("second z-derivative jet matches finite differences") {
  const Complex c{-0.4, 0.25};
  const Complex z{0.3, -0.2};
  const int n = 5;
  const double h = 1e-5;
  const ZJet2 j2 = zjet2_iterate(c, z, n);
  const Complex fd2 = (iterate(c, z + h, n).value - 2.0 * iterate(c, z, n).value +
                       iterate(c, z - h, n).value) /
                      (h * h);
  CHECK(std::abs(fd2 - j2.d2) / (1.0 + std::abs(j2.d2)) < 1e-5);
}

TEST_CASE("green on reference points") {
  const GreenValue a = green({0, 0}, {2, 0});
  CHECK(a.escaped());
  CHECK(a.g == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
  CHECK(a.error_bound < 1e-12);

  CHECK(green({0, 0}, {0.5, 0}).g == 0.0);
  CHECK(green({-2, 0}, {0, 0}).g == 0.0);
}

TEST_CASE("green of c=0 is ln+|z| away from the unit circle") {
  Rng rng(11);
  for (int i = 0; i < 400; ++i) {
    const Complex z = rng.annulus(1e-3, 1e3);
    const double m = std::abs(z);
    if (m >= 0.9 && m <= 1.1) continue;
    const double expected = m > 1.0 ? std::log(m) : 0.0;
    CHECK(std::abs(green({0, 0}, z).g - expected) < 1e-10);
  }
}

TEST_CASE("functional equation g(p_c(z)) = 2 g(z) on escaping samples") {
  Rng rng(23);
  int checked = 0;
  while (checked < 500) {
    const Complex c = rng.in_disk(2.5);
    const Complex z = rng.in_disk(3.0);
    const GreenValue gz = green(c, z);
    if (!gz.escaped()) continue;
    const GreenValue gp = green(c, z * z + c);
    if (!gp.escaped()) continue;
    ++checked;
    CHECK(std::abs(gp.g - 2.0 * gz.g) < 2e-12);
  }
}

TEST_CASE("green_param identities") {
  const ParamGreen zero = green_param({0, 0});
  CHECK(zero.g0.g == 0.0);
  CHECK(zero.gM == 0.0);

  const ParamGreen cyc = green_param({-1, 0});
  CHECK(cyc.g0.g == 0.0);
  CHECK(cyc.gM == 0.0);

  const ParamGreen one = green_param({1, 0});
  CHECK(one.g0.g > 0.0);
  CHECK(one.gM == 2.0 * one.g0.g);
}

TEST_CASE("Green inequality (1): g <= ln2 + max(ln|c|/2, ln|z|) for |c| >= 1") {
  Rng rng(31);
  for (int i = 0; i < 5000; ++i) {
    const Complex c = rng.annulus(1.0, 1e4);
    const Complex z = rng.annulus(1e-2, 1e4);
    const double bound = std::numbers::ln2 +
                         std::max(0.5 * std::log(std::abs(c)), std::log(std::abs(z)));
    CHECK(green(c, z).g <= bound + 1e-9);
  }
}

TEST_CASE("Green inequality (2): max(g_c(z), g_c(c)/2) >= ln(|z|/4)") {
  Rng rng(37);
  for (int i = 0; i < 5000; ++i) {
    const Complex c = rng.in_rect(-2.5, 2.5, -2.5, 2.5);
    const Complex z = rng.annulus(1e-2, 1e3);
    const double lhs = std::max(green(c, z).g, 0.5 * green_param(c).gM);
    CHECK(lhs >= std::log(std::abs(z) / 4.0) - 1e-9);
  }
}

TEST_CASE("Green inequality (3): g_c(alpha c + beta) < g_c(c) far out") {
  Rng rng(41);
  for (int i = 0; i < 2000; ++i) {
    const Complex c = rng.annulus(16384.0, 1e7);
    const Complex alpha = rng.annulus(1e-2, 1e-1);
    const Complex beta = rng.in_disk(2.0);
    CHECK(green(c, alpha * c + beta).g < green_param(c).gM - 1e-9);
  }
}

TEST_CASE("membership on reference parameters") {
  CHECK(in_mandelbrot({-1, 0}).state == Membership::State::Inside);
  CHECK(in_mandelbrot({-2, 0}).state == Membership::State::Inside);
  CHECK(in_mandelbrot({0, 0}).state == Membership::State::Inside);
  CHECK(in_mandelbrot({0.26, 0}, 1000).state == Membership::State::Outside);
  CHECK(in_mandelbrot({2, 0}).state == Membership::State::Outside);
}

TEST_CASE("membership escape is certified: Outside points have escaping orbits") {
  Rng rng(43);
  for (int i = 0; i < 2000; ++i) {
    const Complex c = rng.in_rect(-2.5, 1.5, -1.5, 1.5);
    const Membership m = in_mandelbrot(c, 600);
    if (m.state == Membership::State::Outside) {
      CHECK(green_param(c).g0.g > 0.0);
    }
  }
}

TEST_CASE("membership reports the rounding band as undetermined at the cap") {
  // c just below -2: the second iterate lands between the raw radius |c|
  // and the certified one, and certified escape only happens steps later.
  const Complex c{-2.0 - 1e-14, 0.0};
  CHECK(in_mandelbrot(c, 2).state == Membership::State::Undetermined);
  CHECK(in_mandelbrot(c, 50).state == Membership::State::Outside);
}

TEST_CASE("filled Julia membership") {
  CHECK(in_filled_julia({-1, 0}, {0, 0}).state == Membership::State::Inside);
  CHECK(in_filled_julia({0, 0}, {2.5, 0}).state == Membership::State::Outside);
  CHECK(in_filled_julia({-2, 0}, {2, 0}).state == Membership::State::Inside);
}

TEST_CASE("cardioid and bulb shortcut agrees with iteration") {
  Rng rng(47);
  for (int i = 0; i < 3000; ++i) {
    const Complex c = rng.in_rect(-1.6, 0.6, -1.1, 1.1);
    if (in_main_cardioid_or_bulb(c)) {
      CHECK(green(c, {0, 0}).g == 0.0);
    }
  }
}

TEST_SUITE_END();

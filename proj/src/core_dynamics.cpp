#include "bifcurrent/core_dynamics.hpp"

#include <cmath>

namespace bifcurrent {

namespace {
constexpr double kGuard2 = kOverflowGuard * kOverflowGuard;  // 1e300
}

OrbitValue iterate(Complex c, Complex z, int n) {
  for (int k = 0; k < n; ++k) {
    if (std::norm(z) > kGuard2) return {z, k, true};
    z = z * z + c;
  }
  if (std::norm(z) > kGuard2) return {z, n, true};
  return {z, n, false};
}

Jet jet_iterate(Complex c, Complex z, int n) {
  Jet j;
  j.value = z;
  for (int k = 0; k < n; ++k) {
    if (std::norm(j.value) > kGuard2 || std::norm(j.dz) > kGuard2 ||
        std::norm(j.dc) > kGuard2) {
      j.overflowed = true;
      j.overflow_step = k;
      j.n = k;
      return j;
    }
    const Complex v = j.value;
    j.dz = 2.0 * v * j.dz;
    j.dc = 2.0 * v * j.dc + 1.0;
    j.value = v * v + c;
  }
  j.n = n;
  return j;
}

ZJet2 zjet2_iterate(Complex c, Complex z, int n) {
  ZJet2 j;
  j.value = z;
  for (int k = 0; k < n; ++k) {
    if (std::norm(j.value) > kGuard2 || std::norm(j.d1) > kGuard2 ||
        std::norm(j.d2) > kGuard2) {
      j.overflowed = true;
      return j;
    }
    const Complex v = j.value;
    j.d2 = 2.0 * (j.d1 * j.d1 + v * j.d2);
    j.d1 = 2.0 * v * j.d1;
    j.value = v * v + c;
  }
  return j;
}

GreenValue green(Complex c, Complex z, double tol, int n_cap) {
  const double radius = escape_radius(c);
  const double r2 = radius * radius;
  const double two_c = 2.0 * std::abs(c);

  int k = 0;
  while (k < n_cap && std::norm(z) <= r2) {
    z = z * z + c;
    ++k;
  }
  double m2 = std::norm(z);
  if (m2 <= r2) return {0.0, 0.0, k};

  // Escaped. 2^{-k} ln|z_k| converges to g; each further iteration folds the
  // next correction term ln|1 + c/z_k^2| into the running value, and the
  // remaining tail is bounded by 2|c| / |z_k|^2 * 2^{-k}. Guards compare the
  // modulus, not the squared one: |z| can pass 1e154 where norm overflows.
  double tail = std::ldexp(two_c / m2, -k);
  const int refine_cap = k + 256;
  while (tail >= tol && std::abs(z) <= kOverflowGuard && k < refine_cap) {
    z = z * z + c;
    ++k;
    m2 = std::norm(z);
    tail = std::ldexp(two_c / m2, -k);
  }
  const double g = std::ldexp(std::log(std::abs(z)), -k);
  return {g, tail, k};
}

ParamGreen green_param(Complex c, double tol, int n_cap) {
  if (in_main_cardioid_or_bulb(c)) return {{0.0, 0.0, 0}, 0.0};
  GreenValue g0 = green(c, Complex{0.0, 0.0}, tol, n_cap);
  return {g0, 2.0 * g0.g};
}

bool in_main_cardioid_or_bulb(Complex c) {
  const double x = c.real();
  const double y = c.imag();
  const double y2 = y * y;
  const double t = x - 0.25;
  const double q = t * t + y2;
  if (q * (q + t) < 0.25 * y2) return true;   // main cardioid
  const double u = x + 1.0;
  return u * u + y2 < 0.0625;                 // period-2 disk
}

namespace {

Membership bounded_orbit_state(Complex c, Complex z, int n_cap) {
  const double raw = std::abs(c) > 2.0 ? std::abs(c) : 2.0;
  const double raw2 = raw * raw;
  const double r2 = escape_radius(c) * escape_radius(c);
  bool touched_band = false;
  for (int k = 1; k <= n_cap; ++k) {
    z = z * z + c;
    const double m2 = std::norm(z);
    if (m2 > r2) return {Membership::State::Outside, k};
    if (m2 > raw2) touched_band = true;
  }
  // Orbits that grazed the rounding band between the raw radius and the
  // certified one are neither cleanly bounded nor certified escaped.
  return {touched_band ? Membership::State::Undetermined
                       : Membership::State::Inside,
          n_cap};
}

}  // namespace

Membership in_mandelbrot(Complex c, int n_cap) {
  if (in_main_cardioid_or_bulb(c)) return {Membership::State::Inside, 0};
  return bounded_orbit_state(c, Complex{0.0, 0.0}, n_cap);
}

Membership in_filled_julia(Complex c, Complex z, int n_cap) {
  const double r2 = escape_radius(c) * escape_radius(c);
  if (std::norm(z) > r2) return {Membership::State::Outside, 0};
  return bounded_orbit_state(c, z, n_cap);
}

}  // namespace bifcurrent

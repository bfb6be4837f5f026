#pragma once

#include <complex>

namespace bifcurrent {

using Complex = std::complex<double>;

// Magnitude guard beyond which orbits are treated as escaped-to-infinity.
// Squared magnitudes stay representable in double up to the guard squared.
inline constexpr double kOverflowGuard = 1e150;
inline constexpr double kDefaultTol = 1e-12;
inline constexpr int kDefaultIterCap = 4096;

// Sufficient escape radius for z^2 + c: once |z| exceeds it the orbit
// magnitude is strictly increasing. The 1e-12 margin keeps the escape
// certificate robust against rounding.
inline double escape_radius(Complex c) {
  return (std::abs(c) > 2.0 ? std::abs(c) : 2.0) + 1e-12;
}

struct OrbitValue {
  Complex value{};
  int steps = 0;          // iterations actually applied
  bool overflowed = false;
};

// Order-1 jet of p_c^n at (c, z): the value together with the partial
// derivatives d/dz and d/dc, propagated by
//   value' = value^2 + c,  dz' = 2 value dz,  dc' = 2 value dc + 1.
struct Jet {
  Complex value{};
  Complex dz{1.0, 0.0};
  Complex dc{0.0, 0.0};
  int n = 0;
  bool overflowed = false;
  int overflow_step = -1;
};

// Order-2 jet in the z-direction only (used for contact-order checks).
struct ZJet2 {
  Complex value{};
  Complex d1{1.0, 0.0};
  Complex d2{0.0, 0.0};
  bool overflowed = false;
};

struct GreenValue {
  double g = 0.0;           // >= 0; 0 means no escape before the cap
  double error_bound = 0.0; // certified bound on |g - g_true| when escaped
  int n_used = 0;
  bool escaped() const { return g > 0.0; }
};

struct Membership {
  enum class State { Inside, Outside, Undetermined };
  State state = State::Undetermined;
  int n_used = 0;
};

struct ParamGreen {
  GreenValue g0;  // g_c(0)
  double gM;      // potential of the Mandelbrot equilibrium measure: 2 g_c(0)
};

OrbitValue iterate(Complex c, Complex z, int n);
Jet jet_iterate(Complex c, Complex z, int n);
ZJet2 zjet2_iterate(Complex c, Complex z, int n);

// Escape-rate Green function g_c(z). On escape the value is accurate to
// within error_bound < tol; a bounded orbit up to n_cap reports g = 0.
GreenValue green(Complex c, Complex z, double tol = kDefaultTol,
                 int n_cap = kDefaultIterCap);

ParamGreen green_param(Complex c, double tol = kDefaultTol,
                       int n_cap = kDefaultIterCap);

// True only for parameters certified interior by the main-cardioid or
// period-2 disk inequalities.
bool in_main_cardioid_or_bulb(Complex c);

Membership in_mandelbrot(Complex c, int n_cap = kDefaultIterCap);
Membership in_filled_julia(Complex c, Complex z, int n_cap = kDefaultIterCap);

}  // namespace bifcurrent

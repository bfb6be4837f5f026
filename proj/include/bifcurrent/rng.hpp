#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "bifcurrent/core_dynamics.hpp"

namespace bifcurrent {

// Stateless mixer for deriving independent per-index seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seeded generator with fully specified draw formulas. mt19937_64 output is
// pinned by the standard and the mappings below avoid std::distributions,
// so streams are reproducible bit-for-bit across platforms.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t bits() { return eng(); }

  double uniform() { return std::ldexp(static_cast<double>(eng() >> 11), -53); }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  Complex unit() {
    const double t = 2.0 * std::numbers::pi * uniform();
    return {std::cos(t), std::sin(t)};
  }

  // Uniform w.r.t. area on the disk of the given radius.
  Complex in_disk(double radius) { return radius * std::sqrt(uniform()) * unit(); }

  Complex in_rect(double re_min, double re_max, double im_min, double im_max) {
    return {uniform(re_min, re_max), uniform(im_min, im_max)};
  }

  // Log-uniform modulus in [r_min, r_max], uniform angle.
  Complex annulus(double r_min, double r_max) {
    return log_uniform(r_min, r_max) * unit();
  }
};

}  // namespace bifcurrent

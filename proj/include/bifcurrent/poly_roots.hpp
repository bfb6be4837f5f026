#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bifcurrent/core_dynamics.hpp"
#include "bifcurrent/measures.hpp"
#include "bifcurrent/parallel.hpp"

namespace bifcurrent {

// Affine target a(c) = alpha c + beta. The equidistribution experiments
// additionally require 1e-2 <= |alpha| <= 1e-1 and |beta| <= 2.
struct LineParams {
  Complex alpha{0.05, 0.0};
  Complex beta{1.0, 0.0};

  Complex at(Complex c) const { return alpha * c + beta; }
  bool admissible() const {
    const double a = std::abs(alpha);
    return a >= 1e-2 && a <= 1e-1 && std::abs(beta) <= 2.0;
  }
};

// Dense polynomial in one complex variable, coefficients by ascending degree.
struct Poly {
  std::vector<Complex> coeffs;

  Complex eval(Complex x) const {
    Complex acc{};
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Q_k(c) := p_c^k(0), the k-th critical-orbit polynomial, with derivative.
struct QkValue {
  Complex q{};
  Complex dq{};
  int steps = 0;
  bool overflowed = false;
};

QkValue qk_eval(int k, Complex c);

// Monic dense coefficients of Q_k (degree 2^{k-1}). Rejects k > 14; throws
// std::overflow_error if a coefficient leaves double range.
std::vector<double> qk_coeffs(int k);

struct RootSet {
  std::vector<Complex> roots;
  std::vector<double> residuals;  // |Q_k(c) - a(c)| at each root
  int k = 0;
  std::int64_t expected_count = 0;  // 2^{k-1}
  double max_residual = 0.0;
  bool certified = false;
};

struct SolveOptions {
  bool crosscheck = false;       // also run the Aberth oracle (k <= 10)
  int retries = 3;               // start-count doublings when roots are missing
  double dedup_radius = 1e-9;
  double residual_tol = 1e-8;    // scaled: |Q-a| <= tol * (1 + |Q'-alpha|)
  par::Exec exec = par::Exec::Parallel;
};

// All 2^{k-1} solutions of Q_k(c) = alpha c + beta by Newton iteration on the
// orbit recursion, multi-started from concentric circles. Certification means
// the deduplicated count matches the degree and every residual passes; a
// short count after the retry budget is returned uncertified, never dropped.
RootSet solve_qk_line(int k, const LineParams& line, const SolveOptions& opts = {});

// Aberth-Ehrlich on dense coefficients. Double-precision coefficient
// evaluation of Q_k loses the roots to cancellation beyond k ~ 5; use for
// generic low-degree polynomials and small-k cross-checks.
std::vector<Complex> aberth_roots(const Poly& p, int max_sweeps = 400);

// Aberth-Ehrlich oracle for Q_k(c) = a(c) driven by the orbit recursion:
// an independent collective iteration with implicit deflation, sharing only
// the evaluation primitive with the Newton path. Practical to k ~ 12.
std::vector<Complex> qk_line_roots_aberth(int k, const LineParams& line);

// The full multiset p_c^{-depth}(w) via the branch tree z -> +-sqrt(z - c);
// exactly 2^depth entries, coincident entries kept with multiplicity.
std::vector<Complex> inverse_orbit_tree(Complex c, Complex w, int depth);

// Equal-weight atoms from a seeded random backward walk along the inverse
// branches, after discarding burn_in steps. Deterministic for a fixed seed.
AtomCloud sample_brolin(Complex c, Complex z0, int count, int burn_in,
                        std::uint64_t seed);

void write_rootset_csv(std::ostream& os, const RootSet& rs);

}  // namespace bifcurrent

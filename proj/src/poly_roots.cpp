#include "bifcurrent/poly_roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "bifcurrent/rng.hpp"

namespace bifcurrent {

namespace {
constexpr double kGuard2 = kOverflowGuard * kOverflowGuard;
}

QkValue qk_eval(int k, Complex c) {
  if (k < 1) throw std::invalid_argument("qk_eval: k >= 1 required");
  Complex q = c;
  Complex dq{1.0, 0.0};
  for (int j = 1; j < k; ++j) {
    if (std::norm(q) > kGuard2 || std::norm(dq) > kGuard2) return {q, dq, j, true};
    dq = 2.0 * q * dq + 1.0;
    q = q * q + c;
  }
  return {q, dq, k, false};
}

std::vector<double> qk_coeffs(int k) {
  if (k < 1) throw std::invalid_argument("qk_coeffs: k >= 1 required");
  if (k > 14) throw std::invalid_argument("qk_coeffs: k <= 14 required");
  std::vector<double> q{0.0, 1.0};  // Q_1 = c
  for (int j = 1; j < k; ++j) {
    std::vector<double> next(2 * q.size() - 1, 0.0);
    for (std::size_t a = 0; a < q.size(); ++a) {
      for (std::size_t b = 0; b < q.size(); ++b) next[a + b] += q[a] * q[b];
    }
    next[1] += 1.0;  // + c
    q = std::move(next);
  }
  for (double v : q) {
    if (!std::isfinite(v)) throw std::overflow_error("qk_coeffs: coefficients exceed double range");
  }
  return q;
}

namespace {

// One Newton increment for Q_k(c) - a(c). When the orbit passes the overflow
// guard at level j, the increment keeps halving per remaining level, so
// (Q_j/dQ_j) * 2^{j-k} recovers it without leaving double range.
Complex newton_increment(int k, Complex c, const LineParams& line, bool& usable) {
  Complex q = c;
  Complex dq{1.0, 0.0};
  int j = 1;
  while (j < k) {
    const Complex nq = q * q + c;
    const Complex ndq = 2.0 * q * dq + 1.0;
    if (std::norm(nq) > kGuard2 || std::norm(ndq) > kGuard2) {
      usable = true;
      return std::ldexp(1.0, j - k) * (q / dq);
    }
    q = nq;
    dq = ndq;
    ++j;
  }
  const Complex denom = dq - line.alpha;
  if (std::norm(denom) == 0.0) {
    usable = false;
    return {};
  }
  usable = true;
  return (q - line.at(c)) / denom;
}

struct Candidate {
  Complex root{};
  bool converged = false;
};

Candidate newton_run(int k, Complex start, const LineParams& line, int iter_cap) {
  Complex c = start;
  for (int it = 0; it < iter_cap; ++it) {
    bool usable = false;
    Complex step = newton_increment(k, c, line, usable);
    if (!usable) return {c, false};
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return {c, false};
    const double cap = 0.5 * (1.0 + std::abs(c));
    const double len = std::abs(step);
    if (len > cap) step *= cap / len;
    c -= step;
    if (len < 1e-14 * (1.0 + std::abs(c))) {
      // two polishing steps in the quadratic basin
      for (int p = 0; p < 2; ++p) {
        bool ok = false;
        const Complex s = newton_increment(k, c, line, ok);
        if (!ok) break;
        c -= s;
      }
      return {c, true};
    }
  }
  return {c, false};
}

double scaled_residual(int k, Complex c, const LineParams& line, double* raw = nullptr) {
  const QkValue v = qk_eval(k, c);
  if (v.overflowed) {
    if (raw) *raw = kOverflowGuard;
    return kOverflowGuard;
  }
  const double r = std::abs(v.q - line.at(c));
  if (raw) *raw = r;
  return r / (1.0 + std::abs(v.dq - line.alpha));
}

}  // namespace

RootSet solve_qk_line(int k, const LineParams& line, const SolveOptions& opts) {
  if (k < 1) throw std::invalid_argument("solve_qk_line: k >= 1 required");
  if (k > 20) throw std::invalid_argument("solve_qk_line: k <= 20 required");

  RootSet rs;
  rs.k = k;
  rs.expected_count = std::int64_t{1} << (k - 1);

  const int degree = static_cast<int>(rs.expected_count);
  const double radii[4] = {2.2, 2.6, 3.0, 3.5};
  // Far-field Newton drifts inward by roughly a factor (1 - 1/degree) per
  // step, so the budget scales with the degree.
  const int iter_cap = 200 + degree;

  std::vector<Complex> accepted;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    const int per_circle = degree << attempt;
    const std::int64_t total = static_cast<std::int64_t>(per_circle) * 4;
    std::vector<Candidate> results(static_cast<std::size_t>(total));
    par::for_each_index(total, opts.exec, [&](std::int64_t idx) {
      const int circle = static_cast<int>(idx / per_circle);
      const int slot = static_cast<int>(idx % per_circle);
      // golden-angle offset so retries explore new phases
      const double angle = 2.0 * std::numbers::pi *
                           ((slot + 0.5) / per_circle + 0.381966011 * attempt +
                            0.25 * circle / 4.0);
      const Complex start = radii[circle] * Complex{std::cos(angle), std::sin(angle)};
      results[static_cast<std::size_t>(idx)] = newton_run(k, start, line, iter_cap);
    });

    for (const Candidate& cand : results) {
      if (cand.converged) accepted.push_back(cand.root);
    }

    // deterministic dedup: lexicographic sort, then a radius sweep
    std::sort(accepted.begin(), accepted.end(), [](Complex a, Complex b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    std::vector<Complex> unique;
    for (const Complex& r : accepted) {
      bool dup = false;
      for (std::size_t i = unique.size(); i-- > 0;) {
        if (r.real() - unique[i].real() > opts.dedup_radius) break;
        if (std::abs(r - unique[i]) <= opts.dedup_radius) {
          dup = true;
          break;
        }
      }
      if (!dup) unique.push_back(r);
    }
    accepted = std::move(unique);
    if (static_cast<std::int64_t>(accepted.size()) >= rs.expected_count) break;
  }

  rs.roots = accepted;
  rs.residuals.resize(rs.roots.size());
  double max_scaled = 0.0;
  bool residual_ok = true;
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    double raw = 0.0;
    const double scaled = scaled_residual(k, rs.roots[i], line, &raw);
    rs.residuals[i] = raw;
    max_scaled = std::max(max_scaled, scaled);
    if (scaled > opts.residual_tol) residual_ok = false;
  }
  rs.max_residual = max_scaled;
  rs.certified = residual_ok &&
                 static_cast<std::int64_t>(rs.roots.size()) == rs.expected_count;

  if (opts.crosscheck && k <= 10) {
    std::vector<Complex> oracle = qk_line_roots_aberth(k, line);
    if (oracle.size() != rs.roots.size()) {
      rs.certified = false;
    } else {
      std::vector<bool> used(oracle.size(), false);
      for (const Complex& r : rs.roots) {
        double best = 1e300;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < oracle.size(); ++i) {
          if (used[i]) continue;
          const double d = std::abs(r - oracle[i]);
          if (d < best) {
            best = d;
            best_i = i;
          }
        }
        if (best > 1e-7) {
          rs.certified = false;
          break;
        }
        used[best_i] = true;
      }
    }
  }
  return rs;
}

std::vector<Complex> aberth_roots(const Poly& p, int max_sweeps) {
  const int d = p.degree();
  if (d < 1) return {};
  Poly dp;
  dp.coeffs.resize(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i) {
    dp.coeffs[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) * p.coeffs[static_cast<std::size_t>(i)];
  }

  std::vector<Complex> z(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double angle = 2.0 * std::numbers::pi * (i + 0.351) / d;
    z[static_cast<std::size_t>(i)] = 2.6 * Complex{std::cos(angle), std::sin(angle)};
  }

  // Gauss-Seidel sweeps: each point sees already-updated companions.
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      const Complex zi = z[static_cast<std::size_t>(i)];
      const Complex pv = p.eval(zi);
      const Complex dv = dp.eval(zi);
      Complex w = (std::norm(dv) > 0.0) ? pv / dv : Complex{1e-3, 0.0};
      Complex s{};
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        s += 1.0 / (zi - z[static_cast<std::size_t>(j)]);
      }
      const Complex denom = 1.0 - w * s;
      const Complex corr = (std::norm(denom) > 0.0) ? w / denom : w;
      z[static_cast<std::size_t>(i)] = zi - corr;
      worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(zi)));
    }
    if (worst < 1e-14) break;
  }

  // Newton polish onto the quadratic basin of each root.
  for (int i = 0; i < d; ++i) {
    Complex& zi = z[static_cast<std::size_t>(i)];
    for (int it = 0; it < 4; ++it) {
      const Complex dv = dp.eval(zi);
      if (std::norm(dv) == 0.0) break;
      const Complex step = p.eval(zi) / dv;
      zi -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(zi))) break;
    }
  }
  return z;
}

std::vector<Complex> qk_line_roots_aberth(int k, const LineParams& line) {
  // Aberth-Ehrlich on the orbit recursion. The dense-coefficient route loses
  // the roots to cancellation beyond small k, so the oracle shares only the
  // evaluation primitive with the Newton path, not its search structure.
  const int d = 1 << (k - 1);
  std::vector<Complex> z(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double angle = 2.0 * std::numbers::pi * (i + 0.351) / d;
    z[static_cast<std::size_t>(i)] = 2.3 * Complex{std::cos(angle), std::sin(angle)};
  }

  std::vector<bool> frozen(static_cast<std::size_t>(d), false);
  const int max_sweeps = 300 + 2 * d;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool any_active = false;
    for (int i = 0; i < d; ++i) {
      if (frozen[static_cast<std::size_t>(i)]) continue;
      const Complex zi = z[static_cast<std::size_t>(i)];
      bool usable = false;
      Complex w = newton_increment(k, zi, line, usable);
      if (!usable) w = Complex{1e-3, 0.0};
      Complex s{};
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        s += 1.0 / (zi - z[static_cast<std::size_t>(j)]);
      }
      const Complex denom = 1.0 - w * s;
      Complex corr = (std::norm(denom) > 0.0) ? w / denom : w;
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) corr = w;
      const double cap = 0.5 * (1.0 + std::abs(zi));
      const double len = std::abs(corr);
      if (len > cap) corr *= cap / len;
      z[static_cast<std::size_t>(i)] = zi - corr;
      if (std::abs(corr) < 1e-14 * (1.0 + std::abs(zi))) {
        frozen[static_cast<std::size_t>(i)] = true;
      } else {
        any_active = true;
      }
    }
    if (!any_active) break;
  }

  // Newton polish into the quadratic basin.
  for (int i = 0; i < d; ++i) {
    Complex& zi = z[static_cast<std::size_t>(i)];
    for (int it = 0; it < 3; ++it) {
      bool usable = false;
      const Complex step = newton_increment(k, zi, line, usable);
      if (!usable) break;
      zi -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(zi))) break;
    }
  }
  return z;
}

std::vector<Complex> inverse_orbit_tree(Complex c, Complex w, int depth) {
  if (depth < 0) throw std::invalid_argument("inverse_orbit_tree: depth >= 0 required");
  std::vector<Complex> level{w};
  for (int d = 0; d < depth; ++d) {
    std::vector<Complex> next;
    next.reserve(level.size() * 2);
    for (const Complex& t : level) {
      const Complex s = std::sqrt(t - c);
      next.push_back(s);
      next.push_back(-s);
    }
    level = std::move(next);
  }
  return level;
}

AtomCloud sample_brolin(Complex c, Complex z0, int count, int burn_in,
                        std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_brolin: count >= 1 required");
  Rng rng(seed);
  Complex z = z0;
  for (int i = 0; i < burn_in; ++i) {
    const Complex s = std::sqrt(z - c);
    z = (rng.bits() & 1u) ? -s : s;
  }
  AtomCloud cloud;
  cloud.dim = 1;
  cloud.atoms.reserve(static_cast<std::size_t>(count));
  const double w = 1.0 / static_cast<double>(count);
  for (int i = 0; i < count; ++i) {
    const Complex s = std::sqrt(z - c);
    z = (rng.bits() & 1u) ? -s : s;
    cloud.atoms.push_back({z, Complex{}, w});
  }
  return cloud;
}

void write_rootset_csv(std::ostream& os, const RootSet& rs) {
  os << "re,im,residual\n";
  char buf[128];
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rs.roots[i].real(),
                  rs.roots[i].imag(), rs.residuals[i]);
    os << buf;
  }
}

}  // namespace bifcurrent

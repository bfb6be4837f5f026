#include "bifcurrent/lifted_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "bifcurrent/rng.hpp"

namespace bifcurrent {

void TangentChartPoint::normalize() {
  const double m = std::sqrt(std::norm(v1) + std::norm(v2));
  if (m > 0.0) {
    v1 /= m;
    v2 /= m;
  }
}

double projective_cross(const TangentChartPoint& p, const TangentChartPoint& q) {
  return std::abs(p.v1 * q.v2 - p.v2 * q.v1);
}

LiftResult lift_iterate(const TangentChartPoint& pt, int n) {
  const Jet jet = jet_iterate(pt.c, pt.z, n);
  if (jet.overflowed) return {pt, true};
  TangentChartPoint out;
  out.c = pt.c;
  out.z = jet.value;
  out.v1 = pt.v1;
  out.v2 = jet.dc * pt.v1 + jet.dz * pt.v2;
  out.normalize();
  return {out, false};
}

double TangencyCloud::total_mass() const {
  double sum = 0.0, carry = 0.0;
  for (const TangencyAtom& a : atoms) {
    const double y = a.weight - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

AtomCloud TangencyCloud::as_cloud() const {
  AtomCloud cloud;
  cloud.dim = 2;
  cloud.certified = certified;
  cloud.atoms.reserve(atoms.size());
  for (const TangencyAtom& a : atoms) cloud.atoms.push_back({a.c, a.z, a.weight});
  return cloud;
}

TangencyCloud vertical_tangencies(int n, const LineParams& line,
                                  const SolveOptions& opts) {
  if (n < 1 || n > 20) throw std::invalid_argument("vertical_tangencies: 1 <= n <= 20 required");
  TangencyCloud cloud;
  cloud.n = n;
  cloud.line = line;
  cloud.certified = true;
  const double weight = std::ldexp(2.0 / n, -n);  // 2 / (n 2^n)

  for (int j = 0; j < n; ++j) {
    const RootSet rs = solve_qk_line(n - j, line, opts);
    if (!rs.certified) cloud.certified = false;
    cloud.max_c_residual = std::max(cloud.max_c_residual, rs.max_residual);
    for (const Complex& c : rs.roots) {
      for (const Complex& z : inverse_orbit_tree(c, Complex{}, j)) {
        cloud.atoms.push_back({c, z, j, weight});
        const Jet dzjet = jet_iterate(c, z, j);
        const double res = std::abs(dzjet.value) / (1.0 + std::abs(dzjet.dz));
        cloud.max_z_residual = std::max(cloud.max_z_residual, res);
      }
    }
  }

  std::sort(cloud.atoms.begin(), cloud.atoms.end(),
            [](const TangencyAtom& a, const TangencyAtom& b) {
              if (a.c.real() != b.c.real()) return a.c.real() < b.c.real();
              if (a.c.imag() != b.c.imag()) return a.c.imag() < b.c.imag();
              if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
              if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
              return a.j < b.j;
            });
  return cloud;
}

TangencyCount tangency_count(int n, const LineParams& line, const SolveOptions& opts) {
  const TangencyCloud cloud = vertical_tangencies(n, line, opts);
  return {static_cast<std::int64_t>(cloud.atoms.size()), cloud.certified};
}

ContactReport contact_order_check(int n, const LineParams& line, int samples,
                                  std::uint64_t seed) {
  ContactReport report;
  Rng rng(seed);

  // Random points of F^{-n}(line): pull a point of the line back through the
  // branch tree, then test transversality against d_z p_c^n.
  int produced = 0;
  int guard = 0;
  while (produced < samples && guard < 100 * samples) {
    ++guard;
    const Complex c = rng.in_rect(-2.5, 1.5, -1.5, 1.5);
    const std::vector<Complex> fiber = inverse_orbit_tree(c, line.at(c), n);
    const std::size_t pick = static_cast<std::size_t>(rng.bits() % fiber.size());
    const Complex z = fiber[pick];
    const Jet jet = jet_iterate(c, z, n);
    if (jet.overflowed) continue;
    ++produced;
    ++report.samples;
    const double dz_scaled = std::abs(jet.dz) / (1.0 + std::abs(jet.value));
    if (dz_scaled < 1e-8) {
      ++report.ambiguous;
    } else {
      ++report.transversal;
    }
  }

  // The tangency set itself: contact order there must be exactly 1, i.e. the
  // second z-derivative stays away from 0 in the local model.
  const TangencyCloud cloud = vertical_tangencies(n, line);
  report.min_second_derivative = 1e300;
  for (const TangencyAtom& atom : cloud.atoms) {
    const ZJet2 j2 = zjet2_iterate(atom.c, atom.z, n);
    if (j2.overflowed) continue;
    ++report.tangencies_checked;
    const double second = std::abs(j2.d2) / (1.0 + std::abs(j2.d1));
    report.min_second_derivative = std::min(report.min_second_derivative, second);
    if (second <= 1e-8) ++report.contact_order_gt1;
  }
  if (report.tangencies_checked == 0) report.min_second_derivative = 0.0;
  return report;
}

BranchTable trace_inverse_graphs(Complex c0, double r0, const LineParams& line,
                                 int n, int grid_pts) {
  if (n < 0 || n > 14) throw std::invalid_argument("trace_inverse_graphs: 0 <= n <= 14 required");
  if (grid_pts < 2) throw std::invalid_argument("trace_inverse_graphs: grid_pts >= 2 required");
  if (r0 <= 0.0) throw std::invalid_argument("trace_inverse_graphs: r0 > 0 required");

  BranchTable table;
  table.c0 = c0;
  table.r0 = r0;
  table.n = n;
  table.rays = grid_pts;
  table.steps = grid_pts;
  table.branch_count = 1 << n;

  // Case-1 hypothesis: the whole disk sits outside the Mandelbrot set with a
  // positive Green margin, so the postcritical set stays clear.
  double min_g = 1e300;
  for (int m = 0; m < table.rays; ++m) {
    for (int s = 0; s <= table.steps; ++s) {
      const double angle = 2.0 * std::numbers::pi * m / table.rays;
      const Complex c = c0 + (r0 * s / table.steps) * Complex{std::cos(angle), std::sin(angle)};
      min_g = std::min(min_g, green_param(c).g0.g);
    }
  }
  table.m0 = 0.5 * min_g;
  if (!(min_g > 0.0)) {
    table.status = TraceStatus::PostcriticalObstruction;
    return table;
  }

  const std::vector<Complex> center_fiber = inverse_orbit_tree(c0, line.at(c0), n);
  table.values.assign(static_cast<std::size_t>(table.rays) * table.steps * table.branch_count, Complex{});
  table.max_derivative.assign(static_cast<std::size_t>(table.branch_count), 0.0);
  table.min_branch_separation = 1e300;

  auto min_separation = [](const std::vector<Complex>& fiber) {
    double best = 1e300;
    for (std::size_t a = 0; a < fiber.size(); ++a) {
      for (std::size_t b = a + 1; b < fiber.size(); ++b) {
        best = std::min(best, std::abs(fiber[a] - fiber[b]));
      }
    }
    return best;
  };

  // Swap-free advance: every branch must move less than half the distance to
  // its nearest fiber companion, so each new point is closest to its own
  // branch. Close preimage pairs make this fail for coarse steps, hence the
  // bisection in the caller.
  auto advance = [&](const std::vector<Complex>& prev, Complex c,
                     std::vector<Complex>& out) {
    const std::vector<Complex> fiber = inverse_orbit_tree(c, line.at(c), n);
    std::vector<double> nearest(prev.size(), 1e300);
    for (std::size_t a = 0; a < prev.size(); ++a) {
      for (std::size_t b = 0; b < prev.size(); ++b) {
        if (a != b) nearest[a] = std::min(nearest[a], std::abs(prev[a] - prev[b]));
      }
    }
    out.assign(prev.size(), Complex{});
    std::vector<bool> used(fiber.size(), false);
    for (std::size_t b = 0; b < prev.size(); ++b) {
      double best = 1e300;
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < fiber.size(); ++i) {
        if (used[i]) continue;
        const double d = std::abs(fiber[i] - prev[b]);
        if (d < best) {
          best = d;
          best_i = i;
        }
      }
      if (best > 0.5 * nearest[b]) return false;
      used[best_i] = true;
      out[b] = fiber[best_i];
    }
    table.min_branch_separation = std::min(table.min_branch_separation, min_separation(fiber));
    return true;
  };

  for (int m = 0; m < table.rays && table.status == TraceStatus::Ok; ++m) {
    const double angle = 2.0 * std::numbers::pi * m / table.rays;
    const Complex dir{std::cos(angle), std::sin(angle)};
    std::vector<Complex> prev = center_fiber;
    Complex prev_c = c0;
    for (int s = 1; s <= table.steps; ++s) {
      const Complex c_target = c0 + (r0 * s / table.steps) * dir;
      double t = 0.0;
      double dt = 1.0;
      std::vector<Complex> next;
      while (t < 1.0) {
        const Complex c_sub = prev_c + std::min(t + dt, 1.0) * (c_target - prev_c);
        if (advance(prev, c_sub, next)) {
          prev = next;
          t = std::min(t + dt, 1.0);
          dt = std::min(2.0 * dt, 1.0 - t + 1e-16);
        } else {
          dt *= 0.5;
          if (dt < 1.0 / 4096.0) {
            table.status = TraceStatus::ContinuationBreak;
            table.break_ray = m;
            table.break_step = s;
            return table;
          }
        }
      }
      for (std::size_t b = 0; b < prev.size(); ++b) {
        const double deriv = std::abs(prev[b] - (s == 1 ? center_fiber[b]
                                                        : table.at(m, s - 2, static_cast<int>(b)))) /
                             std::abs(c_target - prev_c);
        table.max_derivative[b] = std::max(table.max_derivative[b], deriv);
        const Jet jet = jet_iterate(c_target, prev[b], n);
        const double res = std::abs(jet.value - line.at(c_target)) / (1.0 + std::abs(jet.dz));
        table.max_defining_residual = std::max(table.max_defining_residual, res);
        table.values[(static_cast<std::size_t>(m) * table.steps + (s - 1)) * table.branch_count + b] = prev[b];
      }
      prev_c = c_target;
    }
  }
  return table;
}

void write_tangency_csv(std::ostream& os, const TangencyCloud& cloud) {
  os << "c_re,c_im,z_re,z_im,j,weight\n";
  char buf[192];
  for (const TangencyAtom& a : cloud.atoms) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d,%.17g\n",
                  a.c.real(), a.c.imag(), a.z.real(), a.z.imag(), a.j, a.weight);
    os << buf;
  }
}

}  // namespace bifcurrent

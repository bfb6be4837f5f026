#pragma once

#include <cstdint>
#include <vector>

#include "bifcurrent/core_dynamics.hpp"
#include "bifcurrent/measures.hpp"
#include "bifcurrent/poly_roots.hpp"

namespace bifcurrent {

// Point of the projectivized tangent bundle in the chart (c, z, [v1 : v2]).
// Directions are equivalence classes; equality is tested with the projective
// cross-product. Projective storage keeps the vertical chart value t = v1/v2
// representable even when v2 = 0.
struct TangentChartPoint {
  Complex c{};
  Complex z{};
  Complex v1{0.0, 0.0};
  Complex v2{1.0, 0.0};

  void normalize();
  bool vertical() const { return v1 == Complex{}; }
};

// |p.v1 q.v2 - p.v2 q.v1| on unit-normalized direction pairs.
double projective_cross(const TangentChartPoint& p, const TangentChartPoint& q);

struct LiftResult {
  TangentChartPoint point;
  bool overflowed = false;
};

// Pushforward of (c, z, [v]) by the differential of F^n(c, z) = (c, p_c^n(z)):
// the direction transports as (v1, v2) -> (v1, dc v1 + dz v2), which fixes
// the vertical hypersurface {v1 = 0} exactly.
LiftResult lift_iterate(const TangentChartPoint& pt, int n);

struct TangencyAtom {
  Complex c{};
  Complex z{};
  int j = 0;  // depth index: p_c^j(z) = 0 and Q_{n-j}(c) = a(c)
  double weight = 0.0;
};

struct TangencyCloud {
  int n = 0;
  LineParams line;
  std::vector<TangencyAtom> atoms;
  bool certified = false;
  double max_c_residual = 0.0;  // |Q_{n-j}(c) - a(c)| scaled
  double max_z_residual = 0.0;  // |p_c^j(z)| scaled by 1 + |d_z p_c^j|

  double total_mass() const;
  AtomCloud as_cloud() const;  // dim-2 cloud (c, z)
};

// Vertical tangencies of the pulled-back line: for each split j + (n-j),
// every root c of Q_{n-j}(c) = a(c) paired with every z in p_c^{-j}(0),
// each atom weighted 2 / (n 2^n). Certified runs carry n 2^{n-1} atoms.
TangencyCloud vertical_tangencies(int n, const LineParams& line,
                                  const SolveOptions& opts = {});

struct TangencyCount {
  std::int64_t count = 0;
  bool certified = false;
};

TangencyCount tangency_count(int n, const LineParams& line,
                             const SolveOptions& opts = {});

struct ContactReport {
  int samples = 0;
  int transversal = 0;
  int ambiguous = 0;       // within the numerical band around the critical set
  int tangencies_checked = 0;
  int contact_order_gt1 = 0;
  double min_second_derivative = 0.0;  // over checked tangencies, scaled
};

// Samples F^{-n}(line) and verifies the tangency dichotomy: vertical tangency
// iff d_z p_c^n(z) = 0, and every tangency has contact order exactly 1.
ContactReport contact_order_check(int n, const LineParams& line, int samples,
                                  std::uint64_t seed);

enum class TraceStatus { Ok, ContinuationBreak, PostcriticalObstruction };

struct BranchTable {
  TraceStatus status = TraceStatus::Ok;
  Complex c0{};
  double r0 = 0.0;
  int n = 0;
  int rays = 0;
  int steps = 0;             // radial steps per ray (center excluded)
  int branch_count = 0;      // 2^n
  double m0 = 0.0;           // half the minimal g_c(0) over the sampled disk
  std::vector<Complex> values;        // [ray][step][branch]
  std::vector<double> max_derivative; // per branch, finite-difference estimate
  double max_defining_residual = 0.0; // |p_c^n(gamma) - a(c)| scaled
  double min_branch_separation = 0.0;
  int break_ray = -1;
  int break_step = -1;

  Complex at(int ray, int step, int branch) const {
    return values[(static_cast<std::size_t>(ray) * steps + step) * branch_count + branch];
  }
};

// Continues the 2^n inverse branches of the line over the disk D(c0, r0)
// along rays, matching consecutive fibers by nearest preimage under a safety
// radius of half the previous fiber's minimal separation.
BranchTable trace_inverse_graphs(Complex c0, double r0, const LineParams& line,
                                 int n, int grid_pts);

void write_tangency_csv(std::ostream& os, const TangencyCloud& cloud);

}  // namespace bifcurrent

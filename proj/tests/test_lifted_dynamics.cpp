#include <doctest.h>

#include <cmath>

#include "bifcurrent/lifted_dynamics.hpp"
#include "bifcurrent/rng.hpp"

using namespace bifcurrent;

TEST_SUITE_BEGIN("lifted-dynamics");

TEST_CASE("vertical directions stay vertical under the lift") {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    TangentChartPoint pt;
    pt.c = rng.in_disk(1.5);
    pt.z = rng.in_disk(1.5);
    pt.v1 = Complex{0, 0};
    pt.v2 = rng.unit();
    const int n = 1 + static_cast<int>(rng.bits() % 10);
    const LiftResult lifted = lift_iterate(pt, n);
    if (lifted.overflowed) continue;
    CHECK(lifted.point.v1 == Complex{0, 0});
  }
}

TEST_CASE("lift of (0, 1, [1:1]) under one step is [1:3]") {
  TangentChartPoint pt;
  pt.c = Complex{0, 0};
  pt.z = Complex{1, 0};
  pt.v1 = Complex{1, 0};
  pt.v2 = Complex{1, 0};
  pt.normalize();
  const LiftResult lifted = lift_iterate(pt, 1);
  REQUIRE_FALSE(lifted.overflowed);
  CHECK(lifted.point.z == Complex{1, 0});
  TangentChartPoint expected;
  expected.v1 = Complex{1, 0};
  expected.v2 = Complex{3, 0};
  expected.normalize();
  CHECK(projective_cross(lifted.point, expected) < 1e-15);
}

TEST_CASE("lift composition is projectively functorial") {
  Rng rng(19);
  int done = 0;
  while (done < 100) {
    TangentChartPoint pt;
    pt.c = rng.in_disk(1.2);
    pt.z = rng.in_disk(1.2);
    pt.v1 = rng.unit() * std::sqrt(rng.uniform());
    pt.v2 = rng.unit() * std::sqrt(1.0 - std::norm(pt.v1));
    pt.normalize();
    const int a = 1 + static_cast<int>(rng.bits() % 5);
    const int b = 1 + static_cast<int>(rng.bits() % 5);
    const LiftResult whole = lift_iterate(pt, a + b);
    const LiftResult part = lift_iterate(pt, a);
    if (whole.overflowed || part.overflowed) continue;
    const LiftResult chained = lift_iterate(part.point, b);
    if (chained.overflowed) continue;
    ++done;
    CHECK(projective_cross(whole.point, chained.point) < 1e-9);
  }
}

TEST_CASE("tangency cloud n=1: single atom at (20/19, 0) with weight 1") {
  const TangencyCloud cloud = vertical_tangencies(1, LineParams{});
  REQUIRE(cloud.atoms.size() == 1);
  CHECK(cloud.certified);
  CHECK(std::abs(cloud.atoms[0].c - Complex{20.0 / 19.0, 0}) < 1e-12);
  CHECK(std::abs(cloud.atoms[0].z) < 1e-12);
  CHECK(cloud.atoms[0].weight == 1.0);
  CHECK(cloud.atoms[0].j == 0);
}

TEST_CASE("tangency cloud n=2: quadratic roots at z=0 plus the j=1 pair") {
  const LineParams line;
  const TangencyCloud cloud = vertical_tangencies(2, line);
  REQUIRE(cloud.atoms.size() == 4);
  CHECK(cloud.certified);
  CHECK(cloud.total_mass() == doctest::Approx(1.0).epsilon(1e-13));

  const Complex b = Complex{1, 0} - line.alpha;
  const Complex disc = std::sqrt(b * b + 4.0 * line.beta);
  const Complex q0 = (-b + disc) / 2.0;
  const Complex q1 = (-b - disc) / 2.0;
  const Complex c1{20.0 / 19.0, 0.0};
  const Complex s = std::sqrt(-c1);  // z^2 + c1 = 0

  int j0 = 0, j1 = 0;
  for (const TangencyAtom& atom : cloud.atoms) {
    CHECK(atom.weight == doctest::Approx(0.25).epsilon(1e-15));
    if (atom.j == 0) {
      ++j0;
      CHECK(std::abs(atom.z) < 1e-10);
      const bool near_root = std::abs(atom.c - q0) < 1e-9 || std::abs(atom.c - q1) < 1e-9;
      CHECK(near_root);
    } else {
      ++j1;
      CHECK(atom.j == 1);
      CHECK(std::abs(atom.c - c1) < 1e-10);
      const bool near_sqrt = std::abs(atom.z - s) < 1e-10 || std::abs(atom.z + s) < 1e-10;
      CHECK(near_sqrt);
    }
  }
  CHECK(j0 == 2);
  CHECK(j1 == 2);
}

TEST_CASE("tangency counts follow n 2^{n-1}") {
  CHECK(tangency_count(1, LineParams{}).count == 1);
  CHECK(tangency_count(3, LineParams{}).count == 12);
  const TangencyCount t8 = tangency_count(8, LineParams{});
  CHECK(t8.count == 1024);
  CHECK(t8.certified);
}

TEST_CASE("tangency mass and residual invariants up to n=8") {
  for (int n = 1; n <= 8; ++n) {
    const TangencyCloud cloud = vertical_tangencies(n, LineParams{});
    CHECK(cloud.certified);
    CHECK(static_cast<std::int64_t>(cloud.atoms.size()) ==
          (static_cast<std::int64_t>(n) << (n - 1)));
    CHECK(std::abs(cloud.total_mass() - 1.0) <= 1e-12);
    CHECK(cloud.max_c_residual <= 1e-7);
    CHECK(cloud.max_z_residual <= 1e-7);
  }
}

TEST_CASE("atoms are emitted in sorted order") {
  const TangencyCloud cloud = vertical_tangencies(5, LineParams{});
  for (std::size_t i = 1; i < cloud.atoms.size(); ++i) {
    const TangencyAtom& a = cloud.atoms[i - 1];
    const TangencyAtom& b = cloud.atoms[i];
    const bool ordered =
        a.c.real() < b.c.real() ||
        (a.c.real() == b.c.real() &&
         (a.c.imag() < b.c.imag() ||
          (a.c.imag() == b.c.imag() &&
           (a.z.real() < b.z.real() ||
            (a.z.real() == b.z.real() && a.z.imag() <= b.z.imag())))));
    CHECK(ordered);
  }
}

TEST_CASE("contact check: depth 1 pullback of z=1 is tangent only at (1, 0)") {
  const LineParams line{{0, 0}, {1, 0}};
  const TangencyCloud cloud = vertical_tangencies(1, line);
  REQUIRE(cloud.atoms.size() == 1);
  CHECK(std::abs(cloud.atoms[0].c - Complex{1, 0}) < 1e-12);
  CHECK(std::abs(cloud.atoms[0].z) < 1e-12);

  const ContactReport report = contact_order_check(1, line, 500, 7);
  CHECK(report.samples == 500);
  CHECK(report.transversal > 0);
  CHECK(report.tangencies_checked == 1);
  CHECK(report.contact_order_gt1 == 0);
}

TEST_CASE("contact order stays 1 over seeded samples at depth 4") {
  const ContactReport report = contact_order_check(4, LineParams{}, 10000, 21);
  CHECK(report.samples == 10000);
  CHECK(report.contact_order_gt1 == 0);
  CHECK(report.min_second_derivative > 1e-8);
}

TEST_CASE("inverse graph tracing over a far disk") {
  const BranchTable table = trace_inverse_graphs({4, 0}, 0.5, LineParams{}, 3, 8);
  CHECK(table.status == TraceStatus::Ok);
  CHECK(table.branch_count == 8);
  CHECK(table.m0 > 0.0);
  CHECK(table.max_defining_residual <= 1e-9);
  CHECK(table.min_branch_separation > 0.0);
  for (double d : table.max_derivative) {
    CHECK(d > 0.0);
    CHECK(d < 10.0);
  }
}

TEST_CASE("graph derivative bound stays stable as depth grows") {
  double previous = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const BranchTable table = trace_inverse_graphs({4, 0}, 0.5, LineParams{}, n, 6);
    REQUIRE(table.status == TraceStatus::Ok);
    double worst = 0.0;
    for (double d : table.max_derivative) worst = std::max(worst, d);
    CHECK(worst < 10.0);
    previous = worst;
  }
  CHECK(previous > 0.0);
}

TEST_CASE("slice of the depth-10 cloud near c=-2 stays around [-2, 2]") {
  const TangencyCloud cloud = vertical_tangencies(10, LineParams{});
  const AtomCloud sliced = slice(cloud.as_cloud(), Complex{-2, 0}, 0.05);
  REQUIRE_FALSE(sliced.empty());
  for (const Atom& a : sliced.atoms) {
    CHECK(std::abs(a.x.imag()) < 0.3);
    CHECK(a.x.real() > -2.3);
    CHECK(a.x.real() < 2.3);
  }
}

TEST_CASE("tracing refuses disks that meet the Mandelbrot set") {
  const BranchTable table = trace_inverse_graphs({0, 0}, 0.5, LineParams{}, 3, 6);
  CHECK(table.status == TraceStatus::PostcriticalObstruction);
}

TEST_SUITE_END();

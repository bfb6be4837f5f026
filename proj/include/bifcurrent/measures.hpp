#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bifcurrent/core_dynamics.hpp"
#include "bifcurrent/parallel.hpp"

namespace bifcurrent {

// Weighted point. dim-1 clouds use x only; dim-2 clouds store (c, z) = (x, y).
struct Atom {
  Complex x{};
  Complex y{};
  double weight = 0.0;
};

struct AtomCloud {
  int dim = 1;  // 1 (points of C) or 2 (points of C x C)
  std::vector<Atom> atoms;
  bool certified = true;

  bool empty() const { return atoms.empty(); }
  double total_mass() const;
};

struct Rect {
  double re_min, re_max, im_min, im_max;
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
};

// Scalar field sampled at cell centers, row-major: values[j*nx + i] holds the
// cell (i, j) with i indexing the real axis.
struct GridField {
  Rect rect{};
  int nx = 0, ny = 0;
  std::vector<double> values;

  double cell_dx() const { return rect.width() / nx; }
  double cell_dy() const { return rect.height() / ny; }
  double cell_area() const { return cell_dx() * cell_dy(); }
  Complex cell_center(int i, int j) const {
    return {rect.re_min + (i + 0.5) * cell_dx(),
            rect.im_min + (j + 0.5) * cell_dy()};
  }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

// Cell-mass measure derived from a field; layout matches GridField.
// cell_mass holds the clipped non-negative density; total_mass() reports the
// signed stencil integral (the boundary flux of the field over 2 pi), which
// is the measure's mass. The clipped report quantifies the stencil's
// negative shadow around kinks of the sampled field.
struct GridMeasure {
  Rect rect{};
  int nx = 0, ny = 0;
  std::vector<double> cell_mass;
  double clipped_negative_mass = 0.0;

  double total_mass() const;
};

struct ClippingExcess : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Pushforward of a dim-2 cloud under (c, z) -> c. Mass preserved exactly.
AtomCloud marginal_c(const AtomCloud& cloud);

// Sum of w_i ln|x - a_i| over a dim-1 cloud; -infinity when x is within
// 1e-14 of an atom.
double log_potential(const AtomCloud& cloud, Complex x);

// Five-point-stencil Laplacian mass, normalized so that dd^c ln max(|c|,1)
// carries total mass 1. Boundary cells are zeroed; negative cells are
// clipped to 0 and the clipped mass reported. Throws ClippingExcess when
// clipping exceeds 1% of the total.
GridMeasure grid_laplacian_measure(const GridField& field,
                                   par::Exec exec = par::Exec::Parallel);

// Cell-area-weighted mean absolute difference of two same-shape fields.
double potential_l1_distance(const GridField& a, const GridField& b);

// Atoms with |c - c0| <= width, projected to z and renormalized to mass 1.
// An empty result is a valid outcome (empty-slice marker).
AtomCloud slice(const AtomCloud& cloud, Complex c0, double width);

struct OrderProbe {
  std::string kind;
  double nu_value = 0.0;
  double mu_value = 0.0;
  double diff = 0.0;  // <nu, phi> - <mu, phi>
};

struct OrderTestReport {
  double tol = 0.0;
  std::vector<OrderProbe> probes;
  std::vector<int> violations;  // indices into probes with diff < -tol
  bool violated() const { return !violations.empty(); }
};

// Falsification test for the pre-order nu |> mu: evaluates a deterministic
// family (mass, pluriharmonic, convex quadratic) plus seeded log kernels
// ln|l(w) - a| with a kept away from both supports. A negative diff beyond
// tol disproves nu |> mu; the test can never prove the relation.
OrderTestReport psh_order_test(const AtomCloud& nu, const AtomCloud& mu,
                               int probes, std::uint64_t seed, double tol);

// Default tolerance for order tests on N-atom discretizations.
double default_order_tol(std::size_t atom_count, double probe_scale);

}  // namespace bifcurrent

// Homogenized surface tension from pinned ball problems, the periodic-affine
// plane estimator, and direction sweeps.
#ifndef LATMIX_CELLTENSION_HPP
#define LATMIX_CELLTENSION_HPP

#include "latmix/lattice.hpp"
#include "latmix/mincut.hpp"

#include <string>
#include <vector>

namespace latmix {

struct Schedule {
  std::vector<double> radii;
  std::vector<Vec> directions;
  int extrapolation_order = 1;  // 0: last value, 1: least-squares a + b/R

  /// d=2: R in {16,32,64,128}, 64 directions; d=3: R in {8,12,16}, 26 directions.
  static Schedule standard(int dim);
  void validate(int range) const;
};

struct TensionEstimate {
  Vec nu;
  std::string method;              // "ball" or "affine"
  std::vector<double> radii;       // ball radii, or shift index for the affine estimator
  std::vector<double> raw;         // cut values
  std::vector<double> normalized;  // raw / area
  double phi_hat = 0.0;
  double error_gauge = 0.0;
};

/// Unit directions at angles 2 pi k / n; for even n the second half is the
/// exact negation of the first.
std::vector<Vec> evenly_spaced_directions(int n);

/// Spherical directions for d=3: canonical representatives of the nonzero
/// vectors of {-1,0,1}^3, both signs (26 directions).
std::vector<Vec> cube_directions();

/// Cut value of the ball problem at radius R (center 0, trace u_{0,nu}).
/// nu is replaced by its canonical representative among +-nu.
CutResult ball_problem(const BondField& field, const Vec& nu, double R,
                       Solver solver = Solver::BoykovKolmogorov);

/// cut / (w_{d-1} R^{d-1}).
double ball_tension(const BondField& field, const Vec& nu, double R);

/// Least-squares a + b/R over the ladder (order 1), clamped at 0; order 0
/// returns the last value.
double extrapolate(const std::vector<double>& radii, const std::vector<double>& values, int order);

TensionEstimate estimate_phi(const BondField& field, const Vec& nu, const std::vector<double>& radii,
                             int extrapolation_order = 1);

/// Finite-R slack kappa * Sum beta_xi |<nu, xi>| / R. kappa was calibrated on
/// homogeneous d=2 fields at R = 128 (max measured 0.694) and frozen with a
/// safety factor of about two.
inline constexpr double kSlackKappa = 1.5;
double tension_slack(const InteractionSet& V, const Vec& nu, double R, double kappa = kSlackKappa);

/// Experimental periodic-affine plane estimator: nu is rationalized to a
/// primitive integer v; the plane problem lives on a torus of period L*T
/// along v-perpendicular lattice directions with +-1 pins above/below a
/// height slab; K shifts of the field along the transversal are averaged.
TensionEstimate estimate_phi_affine(const BondField& field, const Vec& nu, int K, int L);

/// Primitive integer vector v with v/|v| = nu (up to 1e-9), entries <= 64.
Point rational_direction(const Vec& nu);

struct Sweep {
  std::vector<double> angles;  // d=2 only
  std::vector<TensionEstimate> estimates;
  std::vector<Vec> polygon;  // nu_k / phi_hat(nu_k), d=2 only
  std::vector<std::string> warnings;
  double max_radius = 0.0;
};

/// Estimates every scheduled direction (in parallel, merged by index).
Sweep direction_sweep(const BondField& field, const Schedule& schedule);

}  // namespace latmix

#endif  // LATMIX_CELLTENSION_HPP

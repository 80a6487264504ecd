// Averaging and projection bounds, the membership test for mixtures at a
// given volume fraction, crystalline approximation and convex envelopes.
#ifndef LATMIX_BOUNDS_HPP
#define LATMIX_BOUNDS_HPP

#include "latmix/lattice.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace latmix {

/// phi(nu) = Sum_j c_j |<nu, nu_j>|
class CrystallineDensity {
 public:
  struct Term {
    double coefficient;
    Vec direction;
  };

  CrystallineDensity() = default;
  CrystallineDensity(int dim, std::vector<Term> terms);
  /// Sum_xi c_xi |<nu, xi>| over the directions of V.
  static CrystallineDensity on_directions(const InteractionSet& V, const std::vector<double>& coefficients);

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  double operator()(const Vec& nu) const;

 private:
  int dim_ = 0;
  std::vector<Term> terms_;
};

using DensityFn = std::function<double(const Vec&)>;

/// Sum_xi (theta_xi beta_xi + (1 - theta_xi) alpha_xi) |<nu, xi>|
double averaging_bound(const BondField& field, const Vec& nu);
CrystallineDensity averaging_density(const BondField& field);

std::vector<Point> canonical_basis(int dim);

/// Throws invalid-basis unless the d vectors are nonzero and pairwise orthogonal.
void check_orthogonal_basis(const std::vector<Point>& basis, int dim);
int basis_volume(const std::vector<Point>& basis);

/// c^p_j for one coset L_z(Xi): line minima over k in L_{z,j} cap P^T_z,
/// divided by T^{d-1} |P_z(Xi)|. Directions outside V (up to sign) give 0.
std::vector<double> projection_coefficients(const BondField& field, const std::vector<Point>& basis,
                                            const Point& z);
double projection_bound(const BondField& field, const std::vector<Point>& basis, const Point& z,
                        const Vec& nu);

/// Integer points of the half-open parallelepiped P_0(Xi).
std::vector<Point> parallelepiped_points(const std::vector<Point>& basis);

/// projection_coefficients summed over every coset z in Z^d cap P_0(Xi).
std::vector<double> projection_coefficients_all_cosets(const BondField& field, const std::vector<Point>& basis);
double projection_bound_all_cosets(const BondField& field, const std::vector<Point>& basis, const Vec& nu);

/// Lines of direction xi on the periodic cell are the orbits of i -> i + xi
/// on (Z/T)^d; beta_lines counts orbits whose minimum is beta.
struct LineCount {
  std::int64_t lines = 0;
  std::int64_t beta_lines = 0;
};
std::vector<LineCount> line_counts(const BondField& field);
/// Per xi in V: alpha + (beta - alpha) beta_lines / lines.
std::vector<double> line_coefficients(const BondField& field);
/// Sum over all of V of line minima averages, a lower bound for phi.
double line_bound(const BondField& field, const Vec& nu);

/// 2D: n evenly spaced angles; 3D: Fibonacci sphere.
std::vector<Vec> sphere_samples(int dim, std::size_t n);
std::size_t default_sample_count(int dim);

struct MembershipReport {
  bool feasible = false;
  bool lower_bound_holds = false;
  bool dominated_by_beta = false;  // some t in [0,1]^V dominates phi
  double theta = 0.0;
  std::vector<double> required;     // minimal t_xi (sum-minimal LP solution)
  double required_average = 0.0;
  std::vector<double> certificate;  // required padded to average theta
  double max_lower_violation = 0.0;
  std::size_t samples = 0;
  double tolerance = 1e-9;
  std::string reason;
};

/// Decides whether phi satisfies Sum alpha|<nu,xi>| <= phi <= Sum (t beta + (1-t) alpha)|<nu,xi>|
/// on the sphere sample for some t with mean <= theta.
MembershipReport membership_test(const DensityFn& phi, double theta, const InteractionSet& V,
                                 std::size_t samples = 0);

struct CrystallineApproximation {
  CrystallineDensity density;
  std::vector<Point> nodes;  // rational node directions (V first)
  double gap = 0.0;          // max |approx - phi| over a dense sample
  bool dominates = false;    // approx >= phi - tol on the sample
};

/// N >= #V rational node directions; d=2 interpolates phi at the nodes
/// (secant polygon), d=3 fits the smallest dominating sum on the sample.
CrystallineApproximation crystalline_approx(const DensityFn& phi, const InteractionSet& V, std::size_t N);

/// Piecewise-linear even 1-homogeneous interpolant through (node, value) in
/// d=2, written as a crystalline sum. Throws inconsistent-input when the
/// interpolant is not convex.
CrystallineDensity secant_density_2d(const std::vector<Vec>& nodes, const std::vector<double>& values);

/// Greatest convex even 1-homogeneous g with g(xi/|xi|) <= value_xi: the
/// gauge of conv{+-xi/(|xi| value_xi)}, stored as max_f <n_f, nu>.
class ConvexEnvelope {
 public:
  ConvexEnvelope(int dim, std::vector<Vec> facet_normals, std::optional<CrystallineDensity> crystalline);
  int dim() const { return dim_; }
  const std::vector<Vec>& facet_normals() const { return normals_; }
  /// Available in d=2 (every even polygon gauge is crystalline).
  const std::optional<CrystallineDensity>& crystalline() const { return crystalline_; }
  double operator()(const Vec& nu) const;

 private:
  int dim_;
  std::vector<Vec> normals_;
  std::optional<CrystallineDensity> crystalline_;
};

ConvexEnvelope convex_envelope_from_V(const InteractionSet& V, const std::vector<double>& values);

struct BoundsRow {
  Vec nu;
  double trivial_lower = 0.0;
  double projection = 0.0;  // canonical basis, z = 0
  double line = 0.0;
  double averaging = 0.0;
  double trivial_upper = 0.0;
};
std::vector<BoundsRow> bounds_table(const BondField& field, const std::vector<Vec>& directions);

}  // namespace latmix

#endif  // LATMIX_BOUNDS_HPP

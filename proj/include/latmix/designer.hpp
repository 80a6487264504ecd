// Periodic microgeometries realizing a crystalline target at prescribed
// volume fractions.
#ifndef LATMIX_DESIGNER_HPP
#define LATMIX_DESIGNER_HPP

#include "latmix/bounds.hpp"
#include "latmix/lattice.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace latmix {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  /// "p/q" or an integer.
  static Rational parse(const std::string& text);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator==(const Rational&) const = default;
};

bool operator<(const Rational& a, const Rational& b);
bool operator<=(const Rational& a, const Rational& b);

struct DesignTarget {
  std::vector<Rational> t;      // coefficient fractions
  std::vector<Rational> theta;  // volume fractions

  /// t_xi = theta_xi = value for every direction.
  static DesignTarget uniform(std::size_t directions, Rational value);
  Rational total() const;  // (1/#V) Sum theta_xi
  /// 0 < t_xi <= theta_xi < 1 with matching lengths; throws invalid-target.
  void validate(const InteractionSet& V) const;
  /// c_xi = t_xi beta_xi + (1 - t_xi) alpha_xi
  std::vector<double> coefficients(const InteractionSet& V) const;
};

/// Orthogonal integer basis {xi_1, ..., xi_d = xi} with entries bounded by cap.
std::vector<Point> orthogonal_basis_for(const Point& xi, int cap = 16);

/// Per line {i + t xi} through L_{z,d}(Xi) cap P^T_z(Xi): the number of its
/// points in A_nu^z(T, Xi) for nu = v/|v|, maximized over the lines.
/// Requires basis.back() == xi; <v, xi> = 0 raises undefined-count.
std::int64_t count_C(const Point& v, const Point& xi, int T, const std::vector<Point>& basis, const Point& z);

struct DirectionAudit {
  std::size_t direction = 0;
  std::vector<Point> basis;
  std::int64_t lines = 0;                  // orbits of i -> i + xi on (Z/T)^d
  std::int64_t alpha_lines = 0;            // N_xi
  std::vector<Point> alpha_line_starts;    // lexicographically smallest member of each A-line
  std::vector<std::int64_t> C;             // per v in V; -1 where <v, xi> = 0
  bool literal_card = false;               // (1 - t) Sum C <= T (1 - theta)
  std::int64_t designated_alpha = 0;       // forced alpha sites on A-lines
  std::int64_t alpha_capacity = 0;         // (1 - theta) T^d
  std::int64_t beta_line_sites = 0;        // t T^d
  std::int64_t beta_target = 0;            // theta T^d
};

struct DesignResult {
  int period = 0;
  BondField field;
  DesignTarget target;
  CrystallineDensity psi;
  std::vector<DirectionAudit> audit;
};

/// Smallest T <= T_max with T^d theta_xi and T^{d-1}(1 - t_xi) integral and
/// the designated alpha sites fitting the alpha budget, for every xi.
int choose_period(const DesignTarget& target, const InteractionSet& V, int T_max = 512);

DesignResult design_microstructure(const DesignTarget& target, const InteractionSet& V, int T_max = 512);

struct DesignVerification {
  bool fractions_exact = false;
  bool line_fractions_exact = false;  // beta_lines / lines >= t_xi, integer comparison
  std::vector<Vec> directions;        // v / |v| for v in V
  std::vector<double> psi;
  std::vector<double> projection;     // per-direction bases, all cosets
  std::vector<double> phi_hat;
  std::vector<double> phi_last;       // normalized value at the largest radius
  bool projection_ok = false;
  bool tension_ok = false;
  MembershipReport membership;
  bool ok = false;
  std::vector<std::string> failures;
};

/// Recomputes fractions, projection bounds with each direction's basis, ball
/// estimates at the V-directions (relative tolerance), and the membership
/// round trip of psi at the total fraction.
DesignVerification verify_design(const DesignResult& result, const std::vector<double>& radii,
                                 double tension_tolerance = 0.10);

}  // namespace latmix

#endif  // LATMIX_DESIGNER_HPP

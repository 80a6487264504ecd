// Lattice fields, spin configurations, interface energies and volume
// fractions.
#ifndef LATMIX_LATTICE_HPP
#define LATMIX_LATTICE_HPP

#include "latmix/core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace latmix {

/// Two-valued bond label. Strengths are resolved through the interaction set.
enum class Bond : std::uint8_t { Alpha = 0, Beta = 1 };

/// Finite range set V with per-direction strengths 0 < alpha < beta.
class InteractionSet {
 public:
  InteractionSet(int dim, std::vector<Point> directions, std::vector<double> alpha,
                 std::vector<double> beta);

  /// V = {e_1, ..., e_d} with uniform strengths.
  static InteractionSet nearest_neighbour(int dim, double alpha, double beta);
  /// V = {e_1, e_2, e_1 + e_2, e_1 - e_2} with uniform strengths.
  static InteractionSet nn_diagonal_2d(double alpha, double beta);

  int dim() const { return dim_; }
  std::size_t size() const { return directions_.size(); }
  const std::vector<Point>& directions() const { return directions_; }
  const Point& direction(std::size_t k) const { return directions_[k]; }
  double alpha(std::size_t k) const { return alpha_[k]; }
  double beta(std::size_t k) const { return beta_[k]; }
  double strength(std::size_t k, Bond b) const { return b == Bond::Beta ? beta_[k] : alpha_[k]; }

  /// max_xi ||xi||_inf
  int range() const { return range_; }
  /// Index of xi in V, or -1.
  int index_of(const Point& xi) const;

  /// Sum_xi alpha_xi |<nu, xi>| (all-alpha crystalline density).
  double alpha_tension(const Vec& nu) const;
  /// Sum_xi beta_xi |<nu, xi>|.
  double beta_tension(const Vec& nu) const;

  /// Smallest S such that every alpha_xi * S and beta_xi * S is an integer
  /// (up to 1e-12 relative), if one with S <= 1e9 exists.
  std::optional<std::int64_t> integer_scale() const;

  bool operator==(const InteractionSet& other) const;

 private:
  int dim_;
  std::vector<Point> directions_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  int range_ = 0;
};

/// Assignment of a label in {ALPHA, BETA} to each (site, direction) pair.
/// Periodic fields store [0,T)^d and reduce indices mod T; windowed fields
/// store an explicit box and return a default label outside it.
class BondField {
 public:
  static BondField periodic(InteractionSet interactions, int period,
                            std::vector<std::vector<Bond>> labels);
  static BondField windowed(InteractionSet interactions, Box window,
                            std::vector<std::vector<Bond>> labels, Bond outside);

  const InteractionSet& interactions() const { return interactions_; }
  int dim() const { return interactions_.dim(); }
  bool is_periodic() const { return periodic_; }
  int period() const { return period_; }
  const Box& window() const { return window_; }
  Bond outside_label() const { return outside_; }

  Bond label(const Point& site, std::size_t k) const {
    if (periodic_) return labels_[k][periodic_index(site)];
    if (!window_.contains(site)) return outside_;
    return labels_[k][window_.index(site)];
  }
  double strength(const Point& site, std::size_t k) const {
    return interactions_.strength(k, label(site, k));
  }
  std::span<const Bond> labels(std::size_t k) const { return labels_[k]; }

  /// Periodic fields only: c'_{i,xi} = c_{i+shift,xi}.
  BondField translated(const Point& shift) const;
  /// Copy with one label replaced (site taken mod T for periodic fields).
  BondField with_label(const Point& site, std::size_t k, Bond b) const;

  bool operator==(const BondField& other) const;

 private:
  BondField(InteractionSet interactions, bool periodic, int period, Box window,
            std::vector<std::vector<Bond>> labels, Bond outside);

  std::size_t periodic_index(const Point& site) const {
    std::size_t n = 0;
    for (Eigen::Index j = 0; j < site.size(); ++j)
      n = n * static_cast<std::size_t>(period_) + static_cast<std::size_t>(positive_mod(site[j], period_));
    return n;
  }

  InteractionSet interactions_;
  bool periodic_ = true;
  int period_ = 1;
  Box window_;
  std::vector<std::vector<Bond>> labels_;
  Bond outside_ = Bond::Beta;
};

/// u_{x,nu}: +1 on {<y - x, nu> > 0}, -1 otherwise (the hyperplane itself
/// maps to -1). A complemented trace returns the negated values.
class HalfSpaceTrace {
 public:
  HalfSpaceTrace(Vec center, Vec normal, bool complemented = false);

  const Vec& center() const { return center_; }
  const Vec& normal() const { return normal_; }
  bool complemented() const { return complemented_; }
  HalfSpaceTrace complement() const { return {center_, normal_, !complemented_}; }

  int value(const Point& site) const;

 private:
  Vec center_;
  Vec normal_;
  bool complemented_;
};

/// Spins in {-1, +1} on a finite box.
class SpinState {
 public:
  SpinState() = default;
  SpinState(Box window, std::int8_t fill);
  SpinState(Box window, std::vector<std::int8_t> values);

  const Box& window() const { return window_; }
  int value(const Point& site) const { return values_[window_.index(site)]; }
  void set(const Point& site, int s) { values_[window_.index(site)] = static_cast<std::int8_t>(s); }
  std::span<const std::int8_t> values() const { return values_; }

  /// Window filled from the trace.
  static SpinState from_trace(const Box& window, const HalfSpaceTrace& trace);

 private:
  Box window_;
  std::vector<std::int8_t> values_;
};

struct VolumeFractions {
  std::vector<double> per_direction;     // theta_xi
  double total = 0.0;                    // theta
  std::vector<std::int64_t> beta_counts; // #{i in [0,T)^d : c_{i,xi} = beta_xi}
  std::int64_t cell_sites = 0;           // T^d
};

/// Which bonds of a region enter the energy: only bonds based at sites of
/// the region (i in region), or every bond with at least one endpoint there.
enum class BondScope { BaseInRegion, TouchingRegion };

/// (1/4) Sum_{i in region} Sum_xi c_{i,xi} (u_i - u_{i+xi})^2, where values
/// outside the state window come from the trace. TouchingRegion also counts
/// bonds (j, j + xi) with j outside and j + xi inside the region.
double evaluate_energy(const BondField& field, const SpinState& state,
                       const HalfSpaceTrace& trace, std::span<const Point> region,
                       BondScope scope = BondScope::BaseInRegion);

VolumeFractions volume_fractions(const BondField& field);

struct HomogeneousSpec {
  Bond label = Bond::Alpha;
};

/// Beta on full lattice lines: for every listed bond direction, site i gets
/// beta iff (i_axis mod (alpha_width + beta_width)) >= alpha_width.
struct LaminateSpec {
  std::vector<std::size_t> bond_directions;
  int axis = 0;
  int alpha_width = 1;
  int beta_width = 1;
};

/// Exactly round(T^d theta_xi) beta bonds per direction, placed by a seeded
/// Fisher-Yates shuffle.
struct RandomSpec {
  std::vector<double> theta;
  std::uint64_t seed = 0;
};

struct ExplicitSpec {
  std::vector<std::vector<Bond>> labels;
};

using FieldSpec = std::variant<HomogeneousSpec, LaminateSpec, RandomSpec, ExplicitSpec>;

BondField make_field(const FieldSpec& spec, const InteractionSet& interactions, int period);

/// Deterministic 64-bit generator (splitmix64), identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace latmix

#endif  // LATMIX_LATTICE_HPP

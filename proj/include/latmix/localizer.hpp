// Non-periodic fields from piecewise-constant volume-fraction profiles:
// synthesis with beta guard strips, coarse-grained fractions, local ball
// tensions and regularity probes.
#ifndef LATMIX_LOCALIZER_HPP
#define LATMIX_LOCALIZER_HPP

#include "latmix/designer.hpp"
#include "latmix/lattice.hpp"
#include "latmix/mincut.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace latmix {

/// Axis-aligned box [lo, hi) in R^d.
struct Domain {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains_ball(const Vec& x, double rho) const;  // closed ball inside the closure
};

/// What fills one dyadic cell: a homogeneous phase, a target for the
/// designer, or a ready-made periodic field.
using CellFill = std::variant<HomogeneousSpec, DesignTarget, BondField>;

class MacroProfile {
 public:
  /// cells are row-major over the dyadic grid of side 2^-level covering the domain.
  MacroProfile(InteractionSet interactions, Domain domain, int level, std::vector<CellFill> cells);

  const InteractionSet& interactions() const { return interactions_; }
  const Domain& domain() const { return domain_; }
  int level() const { return level_; }
  double cell_side() const { return side_; }
  const Box& grid() const { return grid_; }  // cell multi-indices
  const std::vector<CellFill>& cells() const { return cells_; }

  Vec cell_center(std::size_t n) const;
  /// Cell containing x, or -1 outside the domain.
  long cell_of(const Vec& x) const;
  /// theta_xi of the cell's fill.
  std::vector<double> cell_theta(std::size_t n) const;

 private:
  InteractionSet interactions_;
  Domain domain_;
  int level_;
  double side_;
  Box grid_;
  std::vector<CellFill> cells_;
};

/// Two cells [0,1)x[0,1) and [1,2)x[0,1) at level 0, all-alpha | all-beta.
MacroProfile two_phase_profile(const InteractionSet& V);

struct SynthesizedField {
  BondField field;  // windowed over {i : eps i in domain}, beta outside
  double epsilon;
  double delta;
  std::vector<int> periods;  // per cell, 1 for homogeneous fills
};

/// Inside the shrunken cubes Q_{h(1-delta)}(x_n) the cell's periodic labels
/// are used at global lattice coordinates; everything else is beta.
SynthesizedField synthesize_field(const MacroProfile& profile, double epsilon, double delta, int T_max = 512);

struct CoarseGrid {
  Vec lo;
  double side = 0.0;
  Box cells;
  std::vector<std::int64_t> sites;                    // lattice sites per cell
  std::vector<std::vector<std::int64_t>> beta_counts;  // [cell][xi]
  std::vector<std::optional<std::vector<double>>> theta_xi;
  std::vector<std::optional<double>> theta;
};

/// theta_xi(cell) = eps^d #{i : eps i in cell, c_{i,xi} = beta} / h^d on the
/// grid of side h anchored at domain.lo. Only sites of the field count
/// (its window, for windowed fields); cells without sites are undefined.
CoarseGrid coarse_grain(const BondField& field, const Domain& domain, double epsilon, double h);

struct ProbeValue {
  Vec x;
  Vec nu;
  double rho = 0.0;
  double raw = 0.0;    // cut value in lattice units
  double value = 0.0;  // raw / (w_{d-1} (rho/eps)^{d-1})
};

/// Pinned ball problem on Z^d cap B_{rho/eps}(x/eps) with trace u_{x/eps,nu}.
ProbeValue local_tension(const BondField& field, const Domain& domain, double epsilon, const Vec& x,
                         const Vec& nu, double rho, Solver solver = Solver::BoykovKolmogorov);

struct SandwichProbe {
  ProbeValue probe;
  std::size_t cell = 0;
  double lower = 0.0;  // Sum alpha |<nu, xi>|
  double upper = 0.0;  // coarse-grained averaging bound
  double slack = 0.0;
  bool ok = false;
};

struct LocalReport {
  CoarseGrid grid;
  std::vector<SandwichProbe> probes;
  bool ok = false;
};

/// Probes at every cell center and direction; slack = kappa Sum beta|<nu,xi>| eps/rho.
LocalReport sandwich_report(const SynthesizedField& synth, const MacroProfile& profile,
                            const std::vector<Vec>& directions, double rho, double kappa);

struct LadderEntry {
  double epsilon = 0.0;
  std::optional<double> value;  // empty when rho/eps < 16
};

struct Ladder {
  Vec x;
  Vec nu;
  double rho = 0.0;
  std::vector<LadderEntry> entries;
  double spread = 0.0;  // max - min over computed entries
};

/// eps in {2^-5, ..., 2^-8} times the longest domain edge.
std::vector<double> default_epsilon_ladder(const Domain& domain);
Ladder probe_ladder(const MacroProfile& profile, double delta, const Vec& x, const Vec& nu, double rho,
                    const std::vector<double>& epsilons);

struct AngularRow {
  Vec nu1;
  Vec nu2;
  double rho = 0.0;
  double difference = 0.0;  // |m(nu1) - m(nu2)| / rho^{d-1}
  double angle = 0.0;
  double bound = 0.0;       // C angle + 8 eps / rho
  bool ok = false;
};

struct NestedRow {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double m1 = 0.0;       // lattice units
  double m2 = 0.0;
  double annulus = 0.0;  // trace energy on bonds touching B2 but not B1
  bool ok = false;       // m2 <= m1 + annulus
};

struct RegularityReport {
  double C = 0.0;  // 4 Sum beta ||xi||
  std::vector<AngularRow> angular;
  std::vector<NestedRow> nested;
  bool ok = false;
};

RegularityReport m_regularity_probe(const BondField& field, const Domain& domain, double epsilon, const Vec& x,
                                    const std::vector<std::pair<Vec, Vec>>& pairs,
                                    const std::vector<double>& rhos);

}  // namespace latmix

#endif  // LATMIX_LOCALIZER_HPP

// Ground states of pinned binary interface problems as minimum s-t cuts.
#ifndef LATMIX_MINCUT_HPP
#define LATMIX_MINCUT_HPP

#include "latmix/lattice.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace latmix {

struct CutEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double cap = 0.0;
};

/// Free sites are nodes; the source side is +1. A bond to a fixed +1 site is
/// paid when the node ends at -1 (source capacity), a bond to a fixed -1 site
/// when it ends at +1 (sink capacity).
struct CutInstance {
  std::size_t node_count = 0;
  std::vector<Point> sites;  // node -> site; may be empty for abstract graphs
  std::vector<CutEdge> edges;
  std::vector<double> source_cap;
  std::vector<double> sink_cap;
  std::optional<HalfSpaceTrace> trace;
  std::optional<std::int64_t> scale;  // capacities * scale are integers

  std::size_t add_node();
  void add_edge(std::size_t u, std::size_t v, double cap);
  void add_terminal(std::size_t n, double to_source, double to_sink);

  /// Sum of every finite capacity.
  double total_capacity() const;
  /// 1 + total_capacity(): larger than any cut not crossing a pin.
  double cap_pin() const { return 1.0 + total_capacity(); }
  /// Forces node n to `value` with a CAP_PIN terminal edge.
  void pin(std::size_t n, int value);

  CutInstance scaled(double factor) const;
};

struct SolverStats {
  std::string solver;
  std::int64_t augmentations = 0;
  double wall_seconds = 0.0;  // diagnostic only; never written to output files
};

struct CutResult {
  double value = 0.0;
  std::optional<std::int64_t> scaled_value;  // value * scale, when integer arithmetic was used
  std::vector<std::int8_t> node_values;
  SpinState state;  // bounding box of the free sites; trace values off the region
  SolverStats stats;
};

enum class Solver { BoykovKolmogorov, Dinic };

/// Region sites become free nodes; out-of-region neighbours are folded into
/// terminal edges from the trace. Every bond with at least one free endpoint
/// is represented. An empty region gives an instance without nodes.
CutInstance build_instance(const BondField& field, std::span<const Point> region,
                           const HalfSpaceTrace& trace);

/// Sites y in Z^d with |y - center| < radius.
std::vector<Point> ball_sites(const Vec& center, double radius);

/// build_instance over ball_sites(center, R). Throws degenerate-region unless
/// R > max ||xi||_inf.
CutInstance build_ball_instance(const BondField& field, const Vec& center, double R,
                                const HalfSpaceTrace& trace);

CutResult solve_min_cut(const CutInstance& instance, Solver solver = Solver::BoykovKolmogorov);

/// Cost of a +-1 labelling of the nodes.
double cut_value(const CutInstance& instance, std::span<const std::int8_t> values);

/// Exhaustive minimum over all 2^n states of the free sites (n <= 26).
CutResult brute_force_ground_state(const BondField& field, std::span<const Point> region,
                                   const HalfSpaceTrace& trace);

/// Text dump: "<nodes> <edges>" then "u v cap" lines; source = nodes-2, sink = nodes-1.
void write_instance(std::ostream& out, const CutInstance& instance);

}  // namespace latmix

#endif  // LATMIX_MINCUT_HPP

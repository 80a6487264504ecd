#include "latmix/mincut.hpp"

#include "maxflow.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>

namespace latmix {

namespace {

struct PointHash {
  std::size_t operator()(const Point& p) const {
    std::size_t h = 1469598103934665603ull;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(p[k]));
      h *= 1099511628211ull;
    }
    return h;
  }
};

using SiteIndex = std::unordered_map<Point, std::size_t, PointHash>;

Box bounding_box(std::span<const Point> sites, int dim) {
  if (sites.empty()) return Box(Point::Zero(dim), Point::Zero(dim));
  Point lo = sites[0], hi = sites[0];
  for (const Point& p : sites) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return Box(lo, (hi - lo).array() + 1);
}

std::optional<std::int64_t> to_scaled(double cap, std::int64_t scale) {
  const double x = cap * static_cast<double>(scale);
  const double r = std::nearbyint(x);
  if (std::abs(x - r) > 1e-6 * std::max(1.0, std::abs(x)) || std::abs(r) > 4e18) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

template <class Cap>
void run_solver(const CutInstance& inst, Solver solver, const std::vector<Cap>& edge_caps,
                const std::vector<Cap>& src, const std::vector<Cap>& snk, Cap& flow,
                std::vector<std::int8_t>& values, SolverStats& stats) {
  const std::size_t n = inst.node_count;
  values.assign(n, -1);
  if (solver == Solver::BoykovKolmogorov) {
    detail::BKGraph<Cap> g(n);
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
      g.add_edge(static_cast<int>(inst.edges[e].u), static_cast<int>(inst.edges[e].v), edge_caps[e], edge_caps[e]);
    for (std::size_t k = 0; k < n; ++k)
      if (src[k] != 0 || snk[k] != 0) g.add_tweights(static_cast<int>(k), src[k], snk[k]);
    flow = g.maxflow();
    for (std::size_t k = 0; k < n; ++k) values[k] = g.source_side(static_cast<int>(k)) ? 1 : -1;
    stats.solver = "boykov-kolmogorov";
    stats.augmentations = g.augmentations();
  } else {
    detail::DinicGraph<Cap> g(n + 2);
    const int s = static_cast<int>(n), t = static_cast<int>(n + 1);
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
      g.add_edge(static_cast<int>(inst.edges[e].u), static_cast<int>(inst.edges[e].v), edge_caps[e], edge_caps[e]);
    for (std::size_t k = 0; k < n; ++k) {
      if (src[k] != 0) g.add_edge(s, static_cast<int>(k), src[k], 0);
      if (snk[k] != 0) g.add_edge(static_cast<int>(k), t, snk[k], 0);
    }
    flow = g.maxflow(s, t);
    for (std::size_t k = 0; k < n; ++k) values[k] = g.source_side(static_cast<int>(k)) ? 1 : -1;
    stats.solver = "dinic";
    stats.augmentations = g.augmentations();
  }
}

SpinState state_from_nodes(const CutInstance& inst, const std::vector<std::int8_t>& values, int dim) {
  if (inst.sites.empty() || !inst.trace) return {};
  const Box box = bounding_box(inst.sites, dim);
  SpinState state = SpinState::from_trace(box, *inst.trace);
  for (std::size_t k = 0; k < inst.sites.size(); ++k) state.set(inst.sites[k], values[k]);
  return state;
}

}  // namespace

// ---------------------------------------------------------------------------
// CutInstance

std::size_t CutInstance::add_node() {
  source_cap.push_back(0.0);
  sink_cap.push_back(0.0);
  return node_count++;
}

void CutInstance::add_edge(std::size_t u, std::size_t v, double cap) {
  if (!(cap >= 0.0) || !std::isfinite(cap))
    throw Error(ErrorKind::PreconditionViolation, "capacities must be finite and nonnegative");
  if (u >= node_count || v >= node_count || u == v)
    throw Error(ErrorKind::PreconditionViolation, "edge endpoints must be distinct nodes");
  edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), cap});
}

void CutInstance::add_terminal(std::size_t n, double to_source, double to_sink) {
  if (!(to_source >= 0.0) || !(to_sink >= 0.0) || !std::isfinite(to_source) || !std::isfinite(to_sink))
    throw Error(ErrorKind::PreconditionViolation, "capacities must be finite and nonnegative");
  source_cap.at(n) += to_source;
  sink_cap.at(n) += to_sink;
}

double CutInstance::total_capacity() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.cap;
  for (std::size_t k = 0; k < node_count; ++k) s += source_cap[k] + sink_cap[k];
  return s;
}

void CutInstance::pin(std::size_t n, int value) {
  const double c = cap_pin();
  if (value > 0) add_terminal(n, c, 0.0);
  else add_terminal(n, 0.0, c);
}

CutInstance CutInstance::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor))
    throw Error(ErrorKind::PreconditionViolation, "scale factor must be finite and nonnegative");
  CutInstance out = *this;
  for (auto& e : out.edges) e.cap *= factor;
  for (auto& c : out.source_cap) c *= factor;
  for (auto& c : out.sink_cap) c *= factor;
  if (factor != std::floor(factor)) out.scale.reset();
  return out;
}

// ---------------------------------------------------------------------------
// Construction

CutInstance build_instance(const BondField& field, std::span<const Point> region,
                           const HalfSpaceTrace& trace) {
  const InteractionSet& V = field.interactions();
  CutInstance inst;
  inst.trace = trace;
  inst.scale = V.integer_scale();

  SiteIndex index;
  index.reserve(region.size() * 2);
  for (const Point& p : region) {
    if (p.size() != field.dim()) throw Error(ErrorKind::PreconditionViolation, "region site has wrong dimension");
    if (index.emplace(p, inst.node_count).second) {
      inst.add_node();
      inst.sites.push_back(p);
    }
  }
  auto fold = [&](std::size_t n, const Point& fixed, double c) {
    if (trace.value(fixed) > 0) inst.source_cap[n] += c;
    else inst.sink_cap[n] += c;
  };
  for (std::size_t n = 0; n < inst.node_count; ++n) {
    const Point i = inst.sites[n];
    for (std::size_t k = 0; k < V.size(); ++k) {
      const Point& xi = V.direction(k);
      const Point fwd = i + xi;
      const double c_fwd = field.strength(i, k);
      if (auto it = index.find(fwd); it != index.end()) {
        if (c_fwd > 0) inst.edges.push_back({static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(it->second), c_fwd});
      } else {
        fold(n, fwd, c_fwd);
      }
      const Point back = i - xi;
      if (index.find(back) == index.end()) fold(n, back, field.strength(back, k));
    }
  }
  return inst;
}

std::vector<Point> ball_sites(const Vec& center, double radius) {
  const int d = static_cast<int>(center.size());
  std::vector<Point> out;
  if (!(radius > 0.0)) return out;
  Point lo(d), hi(d);
  for (int k = 0; k < d; ++k) {
    lo[k] = static_cast<int>(std::floor(center[k] - radius));
    hi[k] = static_cast<int>(std::ceil(center[k] + radius));
  }
  const Box box(lo, (hi - lo).array() + 1);
  const double r2 = radius * radius;
  box.for_each([&](std::size_t, const Point& p) {
    if ((to_real(p) - center).squaredNorm() < r2) out.push_back(p);
  });
  return out;
}

CutInstance build_ball_instance(const BondField& field, const Vec& center, double R,
                                const HalfSpaceTrace& trace) {
  if (!(R > field.interactions().range()))
    throw Error(ErrorKind::DegenerateRegion, "ball radius must exceed the interaction range");
  const auto sites = ball_sites(center, R);
  return build_instance(field, sites, trace);
}

// ---------------------------------------------------------------------------
// Solving

CutResult solve_min_cut(const CutInstance& inst, Solver solver) {
  const auto t0 = std::chrono::steady_clock::now();
  CutResult result;
  const std::size_t n = inst.node_count;
  const int dim = inst.sites.empty() ? 1 : static_cast<int>(inst.sites[0].size());

  bool any_source = false, any_sink = false;
  for (std::size_t k = 0; k < n; ++k) {
    any_source = any_source || inst.source_cap[k] > 0;
    any_sink = any_sink || inst.sink_cap[k] > 0;
  }
  if (!any_source || !any_sink) {
    // No +1 or no -1 pins: the constant state on the pinned side costs nothing.
    result.node_values.assign(n, static_cast<std::int8_t>(any_source ? 1 : -1));
    result.value = 0.0;
    if (inst.scale) result.scaled_value = 0;
    result.stats.solver = "trivial";
  } else {
    bool exact = false;
    if (inst.scale) {
      std::vector<std::int64_t> ec(inst.edges.size()), src(n), snk(n);
      exact = true;
      for (std::size_t e = 0; e < inst.edges.size() && exact; ++e) {
        auto v = to_scaled(inst.edges[e].cap, *inst.scale);
        if (!v) exact = false;
        else ec[e] = *v;
      }
      for (std::size_t k = 0; k < n && exact; ++k) {
        auto a = to_scaled(inst.source_cap[k], *inst.scale);
        auto b = to_scaled(inst.sink_cap[k], *inst.scale);
        if (!a || !b) exact = false;
        else {
          src[k] = *a;
          snk[k] = *b;
        }
      }
      if (exact) {
        std::int64_t flow = 0;
        run_solver<std::int64_t>(inst, solver, ec, src, snk, flow, result.node_values, result.stats);
        result.scaled_value = flow;
        result.value = static_cast<double>(flow) / static_cast<double>(*inst.scale);
      }
    }
    if (!exact) {
      std::vector<double> ec(inst.edges.size());
      for (std::size_t e = 0; e < inst.edges.size(); ++e) ec[e] = inst.edges[e].cap;
      double flow = 0.0;
      run_solver<double>(inst, solver, ec, inst.source_cap, inst.sink_cap, flow, result.node_values, result.stats);
      result.value = flow;
    }
  }
  result.state = state_from_nodes(inst, result.node_values, dim);
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double cut_value(const CutInstance& inst, std::span<const std::int8_t> values) {
  if (values.size() != inst.node_count)
    throw Error(ErrorKind::PreconditionViolation, "one value per node required");
  double s = 0.0;
  for (const auto& e : inst.edges)
    if (values[e.u] != values[e.v]) s += e.cap;
  for (std::size_t k = 0; k < inst.node_count; ++k)
    s += values[k] > 0 ? inst.sink_cap[k] : inst.source_cap[k];
  return s;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

CutResult brute_force_ground_state(const BondField& field, std::span<const Point> region,
                                   const HalfSpaceTrace& trace) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Point> sites;
  std::map<std::vector<int>, int> position;  // ordered map: independent of the cut builder's hashing
  auto key = [](const Point& p) { return std::vector<int>(p.data(), p.data() + p.size()); };
  for (const Point& p : region)
    if (position.emplace(key(p), static_cast<int>(sites.size())).second) sites.push_back(p);
  const std::size_t n = sites.size();
  if (n > 26) throw Error(ErrorKind::SizeLimit, "brute force is limited to 26 free sites");

  const InteractionSet& V = field.interactions();
  const auto scale = V.integer_scale();
  const double S = scale ? static_cast<double>(*scale) : 1.0;
  auto cost = [&](const Point& base, std::size_t k) {
    const double c = field.strength(base, k);
    return scale ? std::nearbyint(c * S) : c;
  };

  // Per site: couplings to other free sites and fixed neighbours.
  struct Link {
    int other;  // -1 for a fixed neighbour
    int fixed_value;
    double c;
  };
  std::vector<std::vector<Link>> links(n);
  auto lookup = [&](const Point& p) {
    auto it = position.find(key(p));
    return it == position.end() ? -1 : it->second;
  };
  for (std::size_t m = 0; m < n; ++m) {
    const Point& i = sites[m];
    for (std::size_t k = 0; k < V.size(); ++k) {
      const Point& xi = V.direction(k);
      const int f = lookup(i + xi);
      if (f >= 0) {
        const double c = cost(i, k);
        links[m].push_back({f, 0, c});
        links[static_cast<std::size_t>(f)].push_back({static_cast<int>(m), 0, c});
      } else {
        links[m].push_back({-1, trace.value(i + xi), cost(i, k)});
      }
      if (lookup(i - xi) < 0) links[m].push_back({-1, trace.value(i - xi), cost(i - xi, k)});
    }
  }

  std::vector<int> u(n, -1);
  double energy = 0.0;
  for (std::size_t m = 0; m < n; ++m)
    for (const Link& l : links[m]) {
      if (l.other < 0 && l.fixed_value != u[m]) energy += l.c;
      if (l.other > static_cast<int>(m) && u[static_cast<std::size_t>(l.other)] != u[m]) energy += l.c;
    }
  double best = energy;
  std::vector<int> best_u = u;
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < states; ++g) {
    const auto m = static_cast<std::size_t>(std::countr_zero(g));
    double delta = 0.0;
    for (const Link& l : links[m]) {
      const int other = l.other < 0 ? l.fixed_value : u[static_cast<std::size_t>(l.other)];
      delta += (other == u[m]) ? l.c : -l.c;
    }
    u[m] = -u[m];
    energy += delta;
    if (energy < best) {
      best = energy;
      best_u = u;
    }
  }

  CutResult result;
  result.node_values.assign(best_u.begin(), best_u.end());
  if (scale) {
    result.scaled_value = static_cast<std::int64_t>(std::llround(best));
    result.value = best / S;
  } else {
    result.value = best;
  }
  if (n > 0) {
    const Box box = bounding_box(sites, field.dim());
    result.state = SpinState::from_trace(box, trace);
    for (std::size_t m = 0; m < n; ++m) result.state.set(sites[m], best_u[m]);
  }
  result.stats.solver = "enumeration";
  result.stats.augmentations = static_cast<std::int64_t>(states);
  result.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

void write_instance(std::ostream& out, const CutInstance& inst) {
  const std::size_t n = inst.node_count;
  std::size_t count = inst.edges.size();
  for (std::size_t k = 0; k < n; ++k) count += (inst.source_cap[k] > 0) + (inst.sink_cap[k] > 0);
  out << n + 2 << ' ' << count << '\n';
  char buf[64];
  auto line = [&](std::size_t u, std::size_t v, double c) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    out << u << ' ' << v << ' ' << buf << '\n';
  };
  for (const auto& e : inst.edges) line(e.u, e.v, e.cap);
  for (std::size_t k = 0; k < n; ++k) {
    if (inst.source_cap[k] > 0) line(n, k, inst.source_cap[k]);
    if (inst.sink_cap[k] > 0) line(k, n + 1, inst.sink_cap[k]);
  }
}

}  // namespace latmix

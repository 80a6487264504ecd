#include "latmix/localizer.hpp"

#include "latmix/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace latmix {

namespace {

constexpr double kGridTol = 1e-9;

long nearest(double x) { return std::lround(x); }

bool on_grid(double x, double h) { return std::abs(x / h - std::round(x / h)) < kGridTol; }

// first integer i with i * eps >= a
long first_site(double a, double eps) { return static_cast<long>(std::ceil(a / eps - kGridTol)); }

Vec canonical(const Vec& nu) {
  const double n = nu.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::PreconditionViolation, "zero normal");
  return nu / n * canonical_sign(nu);
}

std::vector<std::vector<Bond>> empty_labels(std::size_t directions, std::size_t sites) {
  return std::vector<std::vector<Bond>>(directions, std::vector<Bond>(sites, Bond::Beta));
}

}  // namespace

bool Domain::contains_ball(const Vec& x, double rho) const {
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (x[j] - rho < lo[j] - 1e-12 || x[j] + rho > hi[j] + 1e-12) return false;
  return true;
}

// ---------------------------------------------------------------------------

MacroProfile::MacroProfile(InteractionSet interactions, Domain domain, int level, std::vector<CellFill> cells)
    : interactions_(std::move(interactions)),
      domain_(std::move(domain)),
      level_(level),
      side_(std::ldexp(1.0, -level)),
      cells_(std::move(cells)) {
  const int d = interactions_.dim();
  if (domain_.dim() != d || domain_.hi.size() != d)
    throw Error(ErrorKind::PreconditionViolation, "domain dimension mismatch");
  Point extent(d);
  for (int j = 0; j < d; ++j) {
    if (!(domain_.hi[j] > domain_.lo[j])) throw Error(ErrorKind::PreconditionViolation, "empty domain");
    if (!on_grid(domain_.lo[j], side_) || !on_grid(domain_.hi[j], side_))
      throw Error(ErrorKind::PreconditionViolation, "domain corners must lie on the dyadic grid");
    extent[j] = static_cast<int>(nearest((domain_.hi[j] - domain_.lo[j]) / side_));
  }
  grid_ = Box(Point::Zero(d), extent);
  if (cells_.size() != grid_.size())
    throw Error(ErrorKind::PreconditionViolation,
                "profile needs " + std::to_string(grid_.size()) + " cells, got " + std::to_string(cells_.size()));
  for (const CellFill& c : cells_) {
    if (const auto* f = std::get_if<BondField>(&c)) {
      if (!f->is_periodic()) throw Error(ErrorKind::UnsupportedInput, "cell fields must be periodic");
      if (!(f->interactions() == interactions_))
        throw Error(ErrorKind::InconsistentInput, "cell field uses a different interaction set");
    } else if (const auto* t = std::get_if<DesignTarget>(&c)) {
      t->validate(interactions_);
    }
  }
}

Vec MacroProfile::cell_center(std::size_t n) const {
  const Point idx = grid_.site(n);
  return domain_.lo + (idx.cast<double>().array() + 0.5).matrix() * side_;
}

long MacroProfile::cell_of(const Vec& x) const {
  Point idx(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) idx[j] = static_cast<int>(std::floor((x[j] - domain_.lo[j]) / side_ + kGridTol));
  return grid_.contains(idx) ? static_cast<long>(grid_.index(idx)) : -1;
}

std::vector<double> MacroProfile::cell_theta(std::size_t n) const {
  const CellFill& c = cells_.at(n);
  if (const auto* h = std::get_if<HomogeneousSpec>(&c))
    return std::vector<double>(interactions_.size(), h->label == Bond::Beta ? 1.0 : 0.0);
  if (const auto* t = std::get_if<DesignTarget>(&c)) {
    std::vector<double> out;
    for (const Rational& q : t->theta) out.push_back(q.value());
    return out;
  }
  return volume_fractions(std::get<BondField>(c)).per_direction;
}

MacroProfile two_phase_profile(const InteractionSet& V) {
  if (V.dim() != 2) throw Error(ErrorKind::UnsupportedInput, "two-phase profile is two-dimensional");
  return MacroProfile(V, Domain{make_vec({0.0, 0.0}), make_vec({2.0, 1.0})}, 0,
                      {HomogeneousSpec{Bond::Alpha}, HomogeneousSpec{Bond::Beta}});
}

// ---------------------------------------------------------------------------

SynthesizedField synthesize_field(const MacroProfile& profile, double epsilon, double delta, int T_max) {
  const InteractionSet& V = profile.interactions();
  const Domain& dom = profile.domain();
  const int d = V.dim();
  const double h = profile.cell_side();
  if (!(epsilon > 0.0) || epsilon > h / 8.0 + 1e-15)
    throw Error(ErrorKind::PreconditionViolation, "epsilon must satisfy 0 < eps <= 2^-k / 8");
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::PreconditionViolation, "delta must lie in [0,1)");

  // per-cell periodic sources
  std::vector<std::optional<BondField>> fields(profile.cells().size());
  std::vector<Bond> constant(profile.cells().size(), Bond::Beta);
  std::vector<int> periods(profile.cells().size(), 1);
  for (std::size_t n = 0; n < profile.cells().size(); ++n) {
    const CellFill& c = profile.cells()[n];
    if (const auto* hs = std::get_if<HomogeneousSpec>(&c)) {
      constant[n] = hs->label;
    } else if (const auto* t = std::get_if<DesignTarget>(&c)) {
      DesignResult r = design_microstructure(*t, V, T_max);
      const MembershipReport m = membership_test(r.psi, t->total().value(), V);
      if (!m.feasible) throw Error(ErrorKind::InvalidTarget, "cell " + std::to_string(n) + ": " + m.reason);
      periods[n] = r.period;
      fields[n] = std::move(r.field);
    } else {
      const BondField& f = std::get<BondField>(c);
      periods[n] = f.period();
      fields[n] = f;
    }
  }

  Point lo(d), extent(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = static_cast<int>(first_site(dom.lo[j], epsilon));
    extent[j] = static_cast<int>(first_site(dom.hi[j], epsilon) - lo[j]);
  }
  const Box window(lo, extent);
  auto labels = empty_labels(V.size(), window.size());
  const double half = 0.5 * h * (1.0 - delta);
  window.for_each([&](std::size_t s, const Point& i) {
    const Vec x = to_real(i) * epsilon;
    const long n = profile.cell_of(x);
    if (n < 0) return;
    const Vec off = x - profile.cell_center(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < off.size(); ++j)
      if (off[j] < -half - 1e-12 * h || off[j] >= half - 1e-12 * h) return;  // guard
    for (std::size_t k = 0; k < V.size(); ++k)
      labels[k][s] = fields[static_cast<std::size_t>(n)] ? fields[static_cast<std::size_t>(n)]->label(i, k)
                                                         : constant[static_cast<std::size_t>(n)];
  });
  return SynthesizedField{BondField::windowed(V, window, std::move(labels), Bond::Beta), epsilon, delta,
                          std::move(periods)};
}

// ---------------------------------------------------------------------------

CoarseGrid coarse_grain(const BondField& field, const Domain& domain, double epsilon, double h) {
  const int d = field.dim();
  if (!(epsilon > 0.0) || h < 4.0 * epsilon - 1e-15)
    throw Error(ErrorKind::PreconditionViolation, "coarse graining needs h >= 4 eps");
  const std::size_t nv = field.interactions().size();
  CoarseGrid g;
  g.lo = domain.lo;
  g.side = h;
  Point extent(d);
  for (int j = 0; j < d; ++j)
    extent[j] = static_cast<int>(std::ceil((domain.hi[j] - domain.lo[j]) / h - kGridTol));
  g.cells = Box(Point::Zero(d), extent);
  g.sites.assign(g.cells.size(), 0);
  g.beta_counts.assign(g.cells.size(), std::vector<std::int64_t>(nv, 0));

  Point lo(d), ext(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = static_cast<int>(first_site(domain.lo[j], epsilon));
    ext[j] = static_cast<int>(first_site(domain.hi[j], epsilon) - lo[j]);
  }
  Box(lo, ext).for_each([&](std::size_t, const Point& i) {
    Point c(d);
    for (int j = 0; j < d; ++j) c[j] = static_cast<int>(std::floor((i[j] * epsilon - domain.lo[j]) / h + kGridTol));
    if (!g.cells.contains(c)) return;
    if (!field.is_periodic() && !field.window().contains(i)) return;  // not part of the field
    const std::size_t n = g.cells.index(c);
    ++g.sites[n];
    for (std::size_t k = 0; k < nv; ++k)
      if (field.label(i, k) == Bond::Beta) ++g.beta_counts[n][k];
  });

  const double scale = std::pow(epsilon / h, d);
  for (std::size_t n = 0; n < g.cells.size(); ++n) {
    if (g.sites[n] == 0) {
      g.theta_xi.emplace_back();
      g.theta.emplace_back();
      continue;
    }
    std::vector<double> t(nv);
    double sum = 0.0;
    for (std::size_t k = 0; k < nv; ++k) {
      t[k] = std::min(1.0, scale * static_cast<double>(g.beta_counts[n][k]));
      sum += t[k];
    }
    g.theta_xi.emplace_back(t);
    g.theta.emplace_back(sum / static_cast<double>(nv));
  }
  return g;
}

// ---------------------------------------------------------------------------

ProbeValue local_tension(const BondField& field, const Domain& domain, double epsilon, const Vec& x,
                         const Vec& nu, double rho, Solver solver) {
  const int d = field.dim();
  if (!(epsilon > 0.0) || rho / epsilon < 16.0 - 1e-9)
    throw Error(ErrorKind::PreconditionViolation, "local tension needs rho / eps >= 16");
  if (!domain.contains_ball(x, rho)) throw Error(ErrorKind::OutOfDomain, "probe ball leaves the domain");
  ProbeValue p;
  p.x = x;
  p.nu = canonical(nu);
  p.rho = rho;
  const Vec c = x / epsilon;
  const double R = rho / epsilon;
  const CutInstance inst = build_ball_instance(field, c, R, HalfSpaceTrace(c, p.nu));
  p.raw = solve_min_cut(inst, solver).value;
  p.value = p.raw / (unit_ball_measure(d - 1) * std::pow(R, d - 1));
  return p;
}

LocalReport sandwich_report(const SynthesizedField& synth, const MacroProfile& profile,
                            const std::vector<Vec>& directions, double rho, double kappa) {
  const InteractionSet& V = profile.interactions();
  LocalReport rep;
  rep.grid = coarse_grain(synth.field, profile.domain(), synth.epsilon, profile.cell_side());
  const std::size_t nc = profile.cells().size();
  rep.probes.resize(nc * directions.size());
  parallel_for(rep.probes.size(), [&](std::size_t q) {
    const std::size_t n = q / directions.size();
    const Vec& nu = directions[q % directions.size()];
    SandwichProbe& sp = rep.probes[q];
    sp.cell = n;
    sp.probe = local_tension(synth.field, profile.domain(), synth.epsilon, profile.cell_center(n), nu, rho);
    const Vec& u = sp.probe.nu;
    const auto& th = rep.grid.theta_xi[n];
    double beta_sum = 0.0;
    for (std::size_t k = 0; k < V.size(); ++k) {
      const double a = std::abs(u.dot(to_real(V.direction(k))));
      const double t = th ? (*th)[k] : 1.0;
      sp.lower += V.alpha(k) * a;
      sp.upper += (t * V.beta(k) + (1.0 - t) * V.alpha(k)) * a;
      beta_sum += V.beta(k) * a;
    }
    sp.slack = kappa * beta_sum * synth.epsilon / rho;
    sp.ok = sp.lower - sp.slack <= sp.probe.value && sp.probe.value <= sp.upper + sp.slack;
  });
  rep.ok = std::all_of(rep.probes.begin(), rep.probes.end(), [](const SandwichProbe& p) { return p.ok; });
  return rep;
}

std::vector<double> default_epsilon_ladder(const Domain& domain) {
  const double edge = (domain.hi - domain.lo).maxCoeff();
  return {std::ldexp(edge, -5), std::ldexp(edge, -6), std::ldexp(edge, -7), std::ldexp(edge, -8)};
}

Ladder probe_ladder(const MacroProfile& profile, double delta, const Vec& x, const Vec& nu, double rho,
                    const std::vector<double>& epsilons) {
  Ladder L;
  L.x = x;
  L.nu = canonical(nu);
  L.rho = rho;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double eps : epsilons) {
    LadderEntry e;
    e.epsilon = eps;
    if (rho / eps >= 16.0 - 1e-9 && eps <= profile.cell_side() / 8.0 + 1e-15) {
      const SynthesizedField s = synthesize_field(profile, eps, delta);
      e.value = local_tension(s.field, profile.domain(), eps, x, nu, rho).value;
      lo = any ? std::min(lo, *e.value) : *e.value;
      hi = any ? std::max(hi, *e.value) : *e.value;
      any = true;
    }
    L.entries.push_back(e);
  }
  L.spread = hi - lo;
  return L;
}

// ---------------------------------------------------------------------------

RegularityReport m_regularity_probe(const BondField& field, const Domain& domain, double epsilon, const Vec& x,
                                    const std::vector<std::pair<Vec, Vec>>& pairs,
                                    const std::vector<double>& rhos) {
  const InteractionSet& V = field.interactions();
  const int d = V.dim();
  RegularityReport rep;
  for (std::size_t k = 0; k < V.size(); ++k) rep.C += 4.0 * V.beta(k) * to_real(V.direction(k)).norm();

  for (const auto& [a, b] : pairs) {
    for (double rho : rhos) {
      AngularRow row;
      row.nu1 = a.normalized();
      row.nu2 = b.normalized();
      row.rho = rho;
      const double R = rho / epsilon;
      const double m1 = local_tension(field, domain, epsilon, x, row.nu1, rho).raw;
      const double m2 = local_tension(field, domain, epsilon, x, row.nu2, rho).raw;
      row.difference = std::abs(m1 - m2) / std::pow(R, d - 1);
      row.angle = std::acos(std::clamp(row.nu1.dot(row.nu2), -1.0, 1.0));
      row.bound = rep.C * row.angle + 8.0 * epsilon / rho;
      row.ok = row.difference <= row.bound;
      rep.angular.push_back(row);
    }
  }

  std::vector<double> sorted = rhos;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& pr : pairs) {
    const Vec nu = canonical(pr.first);
    const Vec c = x / epsilon;
    const HalfSpaceTrace trace(c, nu);
    for (std::size_t s = 0; s + 1 < sorted.size(); ++s) {
      NestedRow row;
      row.rho1 = sorted[s];
      row.rho2 = sorted[s + 1];
      row.m1 = local_tension(field, domain, epsilon, x, nu, row.rho1).raw;
      row.m2 = local_tension(field, domain, epsilon, x, nu, row.rho2).raw;
      // trace energy on bonds touching B2 minus those touching B1
      const auto b1 = ball_sites(c, row.rho1 / epsilon);
      const auto b2 = ball_sites(c, row.rho2 / epsilon);
      Point lo = b2.front(), hi = b2.front();
      for (const Point& q : b2) {
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
      }
      const SpinState state = SpinState::from_trace(Box(lo, (hi - lo).array() + 1), trace);
      const double e1 = evaluate_energy(field, state, trace, b1, BondScope::TouchingRegion);
      const double e2 = evaluate_energy(field, state, trace, b2, BondScope::TouchingRegion);
      row.annulus = e2 - e1;
      row.ok = row.m2 <= row.m1 + row.annulus + 1e-9 * (1.0 + row.m1);
      rep.nested.push_back(row);
    }
  }
  rep.ok = std::all_of(rep.angular.begin(), rep.angular.end(), [](const AngularRow& r) { return r.ok; }) &&
           std::all_of(rep.nested.begin(), rep.nested.end(), [](const NestedRow& r) { return r.ok; });
  return rep;
}

}  // namespace latmix

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include "latmix/bounds.hpp"
#include "latmix/celltension.hpp"
#include "latmix/designer.hpp"
#include "latmix/localizer.hpp"
#include "latmix/mincut.hpp"
#include "latmix/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace latmix;

namespace {

// pinned tolerances
constexpr double kAc2Rel = 0.05;
constexpr double kAc2Radius = 128.0;
constexpr double kAc3Radius = 128.0;
constexpr double kAc4Rel = 0.10;
constexpr double kAc4ProjTol = 1e-9;
constexpr double kAc5Slack = 0.02;
constexpr double kAc6Rel = 0.05;
constexpr double kAc6Epsilon = 1.0 / 128;
constexpr double kAc6Rho = 0.25;
constexpr double kAc8Beta = 2.0;

const std::vector<double> kLadder{16, 32, 64, 128};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool report(const char* id, const char* name, const std::function<Outcome()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const Error& e) {
    o = {false, std::string("error kind=") + to_string(e.kind()) + " " + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %s %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), s);
  std::fflush(stdout);
  return o.pass;
}

Vec angle(double a) { return make_vec({std::cos(a), std::sin(a)}); }

InteractionSet nn() { return InteractionSet::nearest_neighbour(2, 1.0, 2.0); }
InteractionSet nnd() { return InteractionSet::nn_diagonal_2d(1.0, 2.0); }

// canonical representatives of the 64 sweep directions
std::vector<Vec> sweep_half() {
  const auto all = evenly_spaced_directions(64);
  return {all.begin(), all.begin() + 32};
}

// fields of the sandwich suite
struct SuiteField {
  InteractionSet V;
  BondField field;
};

std::vector<SuiteField> sandwich_fields() {
  const int periods[3] = {2, 4, 8};
  const double thetas[3] = {0.25, 0.5, 0.75};
  std::vector<SuiteField> out;
  for (int s = 0; s < 20; ++s) {
    const InteractionSet V = s % 2 ? nnd() : nn();
    const RandomSpec spec{std::vector<double>(V.size(), thetas[(s / 3) % 3]), static_cast<std::uint64_t>(1000 + s)};
    out.push_back({V, make_field(spec, V, periods[s % 3])});
  }
  return out;
}

Outcome ac1() {
  SplitMix64 rng(2024);
  int equal = 0, total = 0;
  std::size_t max_sites = 0;
  for (int s = 0; s < 100; ++s) {
    const double alpha = 1.0 + static_cast<double>(rng.below(3)) * 0.5;
    const double beta = alpha + 0.5 * static_cast<double>(1 + rng.below(4));
    const InteractionSet V = s % 2 ? InteractionSet::nn_diagonal_2d(alpha, beta)
                                   : InteractionSet::nearest_neighbour(2, alpha, beta);
    const int T = 2 << rng.below(3);
    const BondField f = make_field(RandomSpec{std::vector<double>(V.size(), 0.5), static_cast<std::uint64_t>(s)}, V, T);
    // window of at most 18 sites: 3x6, 6x3, 4x4 or a radius-2.2 ball
    std::vector<Point> region;
    const auto shape = rng.below(4);
    const Point lo = make_point({static_cast<int>(rng.below(8)) - 4, static_cast<int>(rng.below(8)) - 4});
    if (shape == 3) {
      region = ball_sites(to_real(lo), 2.2);
    } else {
      const Point ext = shape == 0 ? make_point({3, 6}) : shape == 1 ? make_point({6, 3}) : make_point({4, 4});
      Box(lo, ext).for_each([&](std::size_t, const Point& p) { region.push_back(p); });
    }
    max_sites = std::max(max_sites, region.size());
    const double a = 2.0 * M_PI * static_cast<double>(rng.below(3600)) / 3600.0;
    const HalfSpaceTrace trace(to_real(lo) + make_vec({1.5, 1.5}), angle(a));
    const CutInstance inst = build_instance(f, region, trace);
    const CutResult cut = solve_min_cut(inst);
    const CutResult brute = brute_force_ground_state(f, region, trace);
    ++total;
    if (cut.scaled_value && cut.value == brute.value) ++equal;
  }
  return {equal == total && max_sites <= 18,
          std::to_string(equal) + "/" + std::to_string(total) + " windows equal, max free sites " +
              std::to_string(max_sites)};
}

Outcome ac2() {
  const InteractionSet V = nn();
  const auto dirs = sweep_half();
  double worst = 0.0, kappa = 0.0;
  for (Bond b : {Bond::Alpha, Bond::Beta}) {
    const BondField f = make_field(HomogeneousSpec{b}, V, 1);
    std::vector<double> val(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t k) { val[k] = ball_tension(f, dirs[k], kAc2Radius); });
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double exact = b == Bond::Alpha ? V.alpha_tension(dirs[k]) : V.beta_tension(dirs[k]);
      worst = std::max(worst, std::abs(val[k] - exact) / exact);
      kappa = std::max(kappa, std::abs(val[k] - exact) * kAc2Radius / V.beta_tension(dirs[k]));
    }
  }
  return {worst <= kAc2Rel && kappa <= kSlackKappa,
          "max relative deviation " + fmt("%.4f", worst) + " (tol " + fmt("%.2f", kAc2Rel) + "), measured kappa " +
              fmt("%.4f", kappa) + " <= frozen " + fmt("%.2f", kSlackKappa)};
}

Outcome ac3() {
  const auto fields = sandwich_fields();
  const auto dirs = sweep_half();
  const std::vector<Point> diag{make_point({1, -1}), make_point({1, 1})};
  std::vector<double> margin(fields.size() * dirs.size());
  parallel_for(margin.size(), [&](std::size_t q) {
    const SuiteField& sf = fields[q / dirs.size()];
    const Vec& nu = dirs[q % dirs.size()];
    const double phi = ball_tension(sf.field, nu, kAc3Radius);
    double lower = projection_bound(sf.field, canonical_basis(2), Point::Zero(2), nu);
    if (sf.V.size() == 4) lower = std::max(lower, projection_bound_all_cosets(sf.field, diag, nu));
    const double upper = averaging_bound(sf.field, nu);
    const double s = tension_slack(sf.V, nu, kAc3Radius);
    margin[q] = std::min(phi - (lower - s), upper + s - phi) / s;  // in units of the slack
  });
  const auto violations = std::count_if(margin.begin(), margin.end(), [](double m) { return m < 0.0; });
  const double worst = *std::min_element(margin.begin(), margin.end());
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(margin.size()) +
                               " (field, direction) pairs, tightest margin " + fmt("%.3f", worst) + " slack units"};
}

Outcome ac4() {
  const InteractionSet V = nn();
  std::string detail;
  bool ok = true;
  for (int p : {1, 2, 3}) {
    const DesignResult r = design_microstructure(DesignTarget::uniform(2, Rational(p, 4)), V);
    const DesignVerification v = verify_design(r, kLadder, kAc4Rel);
    double dev = 0.0, proj = 0.0;
    for (std::size_t k = 0; k < v.psi.size(); ++k) {
      dev = std::max(dev, std::abs(v.phi_last[k] - v.psi[k]) / v.psi[k]);
      proj = std::min(proj, v.projection[k] - v.psi[k]);
    }
    const bool pass = v.fractions_exact && v.tension_ok && dev <= kAc4Rel && proj >= -kAc4ProjTol;
    ok = ok && pass;
    detail += "theta=" + std::to_string(p) + "/4 T=" + std::to_string(r.period) +
              (v.fractions_exact ? " exact" : " inexact") + " dev " + fmt("%.4f", dev) + " proj-psi " +
              fmt("%.1e", proj) + "; ";
  }
  return {ok, detail};
}

// Convex hull radial function at u (origin strictly inside).
double hull_radius(const std::vector<Vec>& pts, const Vec& u) {
  std::vector<Vec> p = pts;
  std::sort(p.begin(), p.end(), [](const Vec& a, const Vec& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vec> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  double r = INFINITY;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec& a = h[i];
    const Vec& b = h[(i + 1) % h.size()];
    const Vec n = make_vec({b[1] - a[1], a[0] - b[0]});
    const double off = n.dot(a), dn = n.dot(u);
    if (dn > 0) r = std::min(r, off / dn);
  }
  return r;
}

Outcome ac5() {
  const InteractionSet V = nnd();
  const DesignResult r = design_microstructure(DesignTarget::uniform(4, Rational(1, 2)), V);
  Schedule s;
  s.radii = kLadder;
  s.directions = evenly_spaced_directions(64);
  const Sweep sw = direction_sweep(r.field, s);
  const auto& poly = sw.polygon;
  double contain = 0.0, dent = 0.0;
  bool even = true;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec u = poly[k].normalized();
    const double inner = 1.0 / V.beta_tension(u), outer = 1.0 / V.alpha_tension(u);
    const double rad = poly[k].norm();
    contain = std::max({contain, inner / rad - 1.0, rad / outer - 1.0});
    dent = std::max(dent, 1.0 - rad / hull_radius(poly, u));
    if (!(poly[(k + 32) % 64] == -poly[k])) even = false;
  }
  return {even && contain <= kAc5Slack && dent <= kAc5Slack,
          std::string(even ? "even" : "not even") + ", T=" + std::to_string(r.period) + ", containment excess " +
              fmt("%.4f", contain) + ", convexity dent " + fmt("%.4f", dent) + " (slack " + fmt("%.2f", kAc5Slack) + ")"};
}

Outcome ac6() {
  const InteractionSet V = nn();
  const MacroProfile profile = two_phase_profile(V);
  const SynthesizedField synth = synthesize_field(profile, kAc6Epsilon, 0.1);
  const auto all = evenly_spaced_directions(16);
  const std::vector<Vec> dirs(all.begin(), all.begin() + 8);
  const LocalReport rep = sandwich_report(synth, profile, dirs, kAc6Rho, kSlackKappa);
  double left = 0.0, right = 0.0;
  for (const SandwichProbe& p : rep.probes) {
    const Vec& nu = p.probe.nu;
    if (p.cell == 0) left = std::max(left, std::abs(p.probe.value / V.alpha_tension(nu) - 1.0));
    else right = std::max(right, std::abs(p.probe.value / V.beta_tension(nu) - 1.0));
  }
  const auto bad = std::count_if(rep.probes.begin(), rep.probes.end(), [](const SandwichProbe& p) { return !p.ok; });
  return {left <= kAc6Rel && right <= kAc6Rel && bad == 0,
          "rho/eps=" + fmt("%.0f", kAc6Rho / kAc6Epsilon) + ", left dev " + fmt("%.4f", left) + ", right dev " +
              fmt("%.4f", right) + ", sandwich violations " + std::to_string(bad) + "/" +
              std::to_string(rep.probes.size())};
}

Outcome ac7() {
  // symmetry: separate +-nu estimates and spin-flipped traces on the sandwich suite
  const auto fields = sandwich_fields();
  const auto dirs = evenly_spaced_directions(64);
  std::vector<int> asym(fields.size(), 0);
  parallel_for(fields.size(), [&](std::size_t n) {
    for (std::size_t k = 0; k < 32; ++k) {
      if (ball_tension(fields[n].field, dirs[k], 32) != ball_tension(fields[n].field, dirs[k + 32], 32)) ++asym[n];
      const Vec c = make_vec({0.25, 0.5});
      const HalfSpaceTrace t(c, dirs[k]);
      if (solve_min_cut(build_ball_instance(fields[n].field, c, 24, t)).value !=
          solve_min_cut(build_ball_instance(fields[n].field, c, 24, t.complement())).value)
        ++asym[n];
    }
  });
  int sym_fail = 0;
  for (int a : asym) sym_fail += a;

  // monotonicity: raise a few alpha bonds to beta
  SplitMix64 rng(77);
  int mono_fail = 0;
  for (int p = 0; p < 50; ++p) {
    const InteractionSet V = p % 2 ? nnd() : nn();
    const BondField f = make_field(RandomSpec{std::vector<double>(V.size(), 0.5), static_cast<std::uint64_t>(500 + p)}, V, 4);
    BondField g = f;
    for (int m = 0; m < 3; ++m) {
      const Point site = make_point({static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))});
      g = g.with_label(site, rng.below(V.size()), Bond::Beta);
    }
    const Vec c = make_vec({0.5 * static_cast<double>(rng.below(3)), 0.5 * static_cast<double>(rng.below(3))});
    const HalfSpaceTrace t(c, angle(2.0 * M_PI * static_cast<double>(rng.below(360)) / 360.0));
    const double lo = solve_min_cut(build_ball_instance(f, c, 12, t)).value;
    const double hi = solve_min_cut(build_ball_instance(g, c, 12, t)).value;
    if (lo > hi) ++mono_fail;
  }
  return {sym_fail == 0 && mono_fail == 0, std::to_string(sym_fail) + " symmetry mismatches over " +
                                               std::to_string(fields.size() * 64) + " checks, " +
                                               std::to_string(mono_fail) + "/50 monotonicity violations"};
}

Outcome ac8() {
  const Domain dom{make_vec({0, 0}), make_vec({1, 1})};
  const double eps = 1.0 / 64;
  std::vector<std::pair<Vec, Vec>> pairs;
  for (double a : {0.0, 0.3, 0.7})
    for (double d : {0.0, 0.01, 0.05, 0.1, 0.3, 1.0}) pairs.emplace_back(angle(a), angle(a + d));
  int rows = 0, bad = 0;
  double tight = INFINITY;
  for (const InteractionSet& V : {InteractionSet::nearest_neighbour(2, 1.0, kAc8Beta),
                                  InteractionSet::nn_diagonal_2d(1.0, kAc8Beta)}) {
    for (Bond b : {Bond::Alpha, Bond::Beta}) {
      const BondField f = make_field(HomogeneousSpec{b}, V, 1);
      const RegularityReport rep = m_regularity_probe(f, dom, eps, make_vec({0.5, 0.5}), pairs, {0.25, 0.375});
      for (const AngularRow& r : rep.angular) {
        ++rows;
        if (!r.ok) ++bad;
        tight = std::min(tight, r.bound - r.difference);
      }
      for (const NestedRow& r : rep.nested) {
        ++rows;
        if (!r.ok) ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(bad) + " violations over " + std::to_string(rows) +
                        " angular and nested rows, tightest angular margin " + fmt("%.4f", tight)};
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report("AC1", "oracle equivalence", ac1);
  ok &= report("AC2", "degenerate-theta exactness", ac2);
  ok &= report("AC3", "sandwich property", ac3);
  ok &= report("AC4", "designer round trip", ac4);
  ok &= report("AC5", "theta=1/2 octagon", ac5);
  ok &= report("AC6", "localization sandwich", ac6);
  ok &= report("AC7", "symmetry and monotonicity", ac7);
  ok &= report("AC8", "m-regularity", ac8);
  return ok ? 0 : 1;
}

#include "latmix/designer.hpp"

#include "latmix/celltension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace latmix {

namespace {

long gcd_of(const Point& v) {
  long g = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) g = std::gcd(g, static_cast<long>(std::abs(v[k])));
  return g;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Some multiple of P lies in [lo, hi].
bool multiple_in(long lo, long hi, long P) {
  if (lo > hi) return false;
  return floor_div(hi, P) * P >= lo;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

// x * num / den is an integer
bool integral(std::int64_t x, const Rational& q) { return (x * q.num) % q.den == 0; }

struct Orbits {
  std::vector<std::int64_t> id;      // site -> orbit
  std::vector<std::size_t> start;    // orbit -> smallest flat index
};

Orbits orbits_of(const Box& cell, const Point& xi, int T) {
  Orbits o;
  o.id.assign(cell.size(), -1);
  for (std::size_t n = 0; n < cell.size(); ++n) {
    if (o.id[n] >= 0) continue;
    const auto label = static_cast<std::int64_t>(o.start.size());
    o.start.push_back(n);
    Point i = cell.site(n);
    for (;;) {
      const std::size_t m = cell.index(i);
      if (o.id[m] >= 0) break;
      o.id[m] = label;
      i += xi;
      for (Eigen::Index r = 0; r < i.size(); ++r) i[r] = positive_mod(i[r], T);
    }
  }
  return o;
}

// Bonds (i, i + xi) broken by u_{j, v/|v|} for some j in T Z^d, with plane
// sites taking -1.
std::vector<std::uint8_t> designated_sites(const Box& cell, const Point& xi, const InteractionSet& V, int T) {
  std::vector<std::uint8_t> mark(cell.size(), 0);
  for (const Point& v : V.directions()) {
    const long b = xi.dot(v);
    if (b == 0) continue;
    const long P = static_cast<long>(T) * gcd_of(v);
    cell.for_each([&](std::size_t n, const Point& i) {
      const long a = i.dot(v);
      const bool hit = b > 0 ? multiple_in(a, a + b - 1, P) : multiple_in(a + b, a - 1, P);
      if (hit) mark[n] = 1;
    });
  }
  return mark;
}

struct Plan {
  Orbits orbits;
  std::int64_t N = 0;
  std::vector<std::uint8_t> designated;
  std::int64_t designated_on_A = 0;
};

Plan plan_direction(const Box& cell, const Point& xi, const InteractionSet& V, int T, const Rational& t) {
  Plan p;
  p.orbits = orbits_of(cell, xi, T);
  const auto lines = static_cast<std::int64_t>(p.orbits.start.size());
  p.N = lines * (t.den - t.num) / t.den;
  p.designated = designated_sites(cell, xi, V, T);
  for (std::size_t n = 0; n < cell.size(); ++n)
    if (p.designated[n] && p.orbits.id[n] < p.N) ++p.designated_on_A;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidTarget, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  char* end = nullptr;
  if (slash == std::string::npos) {
    const long long n = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || *end != '\0') throw Error(ErrorKind::Parse, "bad rational '" + text + "'");
    return Rational(n, 1);
  }
  const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
  const long long n = std::strtoll(a.c_str(), &end, 10);
  if (a.empty() || *end != '\0') throw Error(ErrorKind::Parse, "bad rational '" + text + "'");
  const long long d = std::strtoll(b.c_str(), &end, 10);
  if (b.empty() || *end != '\0') throw Error(ErrorKind::Parse, "bad rational '" + text + "'");
  return Rational(n, d);
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
bool operator<=(const Rational& a, const Rational& b) { return a.num * b.den <= b.num * a.den; }

// ---------------------------------------------------------------------------
// Targets

DesignTarget DesignTarget::uniform(std::size_t directions, Rational value) {
  return DesignTarget{std::vector<Rational>(directions, value), std::vector<Rational>(directions, value)};
}

Rational DesignTarget::total() const {
  std::int64_t num = 0, den = 1;
  for (const Rational& q : theta) {
    num = num * q.den + q.num * den;
    den *= q.den;
    const std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  return Rational(num, den * static_cast<std::int64_t>(theta.size()));
}

void DesignTarget::validate(const InteractionSet& V) const {
  if (t.size() != V.size() || theta.size() != V.size())
    throw Error(ErrorKind::InvalidTarget, "one t and one theta per direction required");
  const Rational zero(0, 1), one(1, 1);
  for (std::size_t k = 0; k < V.size(); ++k) {
    if (!(zero < t[k]) || !(theta[k] < one))
      throw Error(ErrorKind::InvalidTarget, "fractions must lie in (0,1)");
    if (!(t[k] <= theta[k])) throw Error(ErrorKind::InvalidTarget, "t_xi must not exceed theta_xi");
  }
}

std::vector<double> DesignTarget::coefficients(const InteractionSet& V) const {
  std::vector<double> c(V.size());
  for (std::size_t k = 0; k < V.size(); ++k) c[k] = t[k].value() * V.beta(k) + (1.0 - t[k].value()) * V.alpha(k);
  return c;
}

// ---------------------------------------------------------------------------
// Geometry

std::vector<Point> orthogonal_basis_for(const Point& xi, int cap) {
  const int d = static_cast<int>(xi.size());
  if (xi.isZero()) throw Error(ErrorKind::BasisConstruction, "zero direction");
  if (d == 1) return {xi};
  if (d == 2) return {make_point({-xi[1], xi[0]}), xi};
  if (d != 3) throw Error(ErrorKind::BasisConstruction, "unsupported dimension");
  // smallest integer w perpendicular to xi, then u = xi x w reduced
  Point best;
  int best_norm = -1;
  Box(Point::Constant(3, -cap), Point::Constant(3, 2 * cap + 1)).for_each([&](std::size_t, const Point& w) {
    if (w.isZero() || w.dot(xi) != 0) return;
    const int n2 = w.squaredNorm();
    if (best_norm < 0 || n2 < best_norm) {
      best = w;
      best_norm = n2;
    }
  });
  if (best_norm < 0) throw Error(ErrorKind::BasisConstruction, "no perpendicular lattice vector within the cap");
  Point u(3);
  u << xi[1] * best[2] - xi[2] * best[1], xi[2] * best[0] - xi[0] * best[2], xi[0] * best[1] - xi[1] * best[0];
  u /= static_cast<int>(gcd_of(u));
  if (u.cwiseAbs().maxCoeff() > cap) throw Error(ErrorKind::BasisConstruction, "basis entries exceed the cap");
  return {best, u, xi};
}

std::int64_t count_C(const Point& v, const Point& xi, int T, const std::vector<Point>& basis, const Point& z) {
  const int d = static_cast<int>(xi.size());
  check_orthogonal_basis(basis, d);
  if (basis.back() != xi) throw Error(ErrorKind::InvalidBasis, "last basis vector must be xi");
  if (T < 1) throw Error(ErrorKind::PreconditionViolation, "T must be positive");
  const long b = v.dot(xi);
  if (b == 0) throw Error(ErrorKind::UndefinedCount, "<nu, xi> = 0");
  long g = 0;
  for (const Point& e : basis) g = std::gcd(g, static_cast<long>(std::abs(e.dot(v))));
  const long P = static_cast<long>(T) * g;  // {<j, v> : j in T L_0(Xi)} = P Z
  std::int64_t worst = 0;
  const int m = std::max(d - 1, 1);
  Box(Point::Zero(m), Point::Constant(m, d > 1 ? T : 1)).for_each([&](std::size_t, const Point& lam) {
    Point k = z;
    for (int r = 0; r < d - 1; ++r) k += lam[r] * basis[static_cast<std::size_t>(r)];
    std::int64_t count = 0;
    for (int s = 0; s < T; ++s) {
      const long a = (k + s * xi).dot(v);
      // segment {i + t xi : t in [0,1)} meets a plane <y, v> = multiple of P
      const bool hit = b > 0 ? multiple_in(a, a + b - 1, P) : multiple_in(a + b + 1, a, P);
      if (hit) ++count;
    }
    worst = std::max(worst, count);
  });
  return worst;
}

// ---------------------------------------------------------------------------
// Period search and construction

int choose_period(const DesignTarget& target, const InteractionSet& V, int T_max) {
  target.validate(V);
  const int d = V.dim();
  for (int T = 1; T <= T_max; ++T) {
    const std::int64_t cells = ipow(T, d);
    bool ok = true;
    for (std::size_t k = 0; k < V.size() && ok; ++k) {
      const Rational one_minus_t(target.t[k].den - target.t[k].num, target.t[k].den);
      ok = integral(cells, target.theta[k]) && integral(ipow(T, d - 1), one_minus_t);
    }
    if (!ok) continue;
    const Box cell = Box::cube(d, T);
    for (std::size_t k = 0; k < V.size() && ok; ++k) {
      const Plan p = plan_direction(cell, V.direction(k), V, T, target.t[k]);
      const std::int64_t budget = cells * (target.theta[k].den - target.theta[k].num) / target.theta[k].den;
      ok = p.designated_on_A <= budget;
    }
    if (ok) return T;
  }
  throw Error(ErrorKind::PeriodSearchExhausted, "no admissible period up to " + std::to_string(T_max));
}

DesignResult design_microstructure(const DesignTarget& target, const InteractionSet& V, int T_max) {
  const int T = choose_period(target, V, T_max);
  const int d = V.dim();
  const Box cell = Box::cube(d, T);
  const std::int64_t cells = ipow(T, d);
  std::vector<std::vector<Bond>> labels(V.size(), std::vector<Bond>(cell.size(), Bond::Alpha));
  std::vector<DirectionAudit> audit;

  for (std::size_t k = 0; k < V.size(); ++k) {
    const Point& xi = V.direction(k);
    const Rational& t = target.t[k];
    const Rational& th = target.theta[k];
    const Plan p = plan_direction(cell, xi, V, T, t);

    DirectionAudit a;
    a.direction = k;
    a.basis = orthogonal_basis_for(xi);
    a.lines = static_cast<std::int64_t>(p.orbits.start.size());
    a.alpha_lines = p.N;
    for (std::int64_t o = 0; o < p.N; ++o) a.alpha_line_starts.push_back(cell.site(p.orbits.start[static_cast<std::size_t>(o)]));
    a.alpha_capacity = cells * (th.den - th.num) / th.den;
    a.beta_target = cells * th.num / th.den;
    a.designated_alpha = p.designated_on_A;
    if (a.designated_alpha > a.alpha_capacity)
      throw Error(ErrorKind::CapacityAccounting, "designated alpha sites exceed the alpha budget");

    // literal (card) with counted C
    std::int64_t sumC = 0;
    for (const Point& v : V.directions()) {
      if (v.dot(xi) == 0) {
        a.C.push_back(-1);
        continue;
      }
      const std::int64_t c = count_C(v, xi, T, a.basis, Point::Zero(d));
      a.C.push_back(c);
      sumC += c;
    }
    // (1 - t) sumC <= T (1 - theta)
    a.literal_card = (t.den - t.num) * sumC * th.den <= static_cast<std::int64_t>(T) * (th.den - th.num) * t.den;

    std::int64_t beta = 0;
    std::vector<std::uint8_t> free_site(cell.size(), 0);
    for (std::size_t n = 0; n < cell.size(); ++n) {
      if (p.orbits.id[n] >= p.N) {
        labels[k][n] = Bond::Beta;
        ++beta;
      } else if (!p.designated[n]) {
        free_site[n] = 1;
      }
    }
    a.beta_line_sites = beta;
    if (beta > a.beta_target) throw Error(ErrorKind::CapacityAccounting, "beta lines exceed the beta budget");
    for (std::size_t n = 0; n < cell.size() && beta < a.beta_target; ++n)
      if (free_site[n]) {
        labels[k][n] = Bond::Beta;
        ++beta;
      }
    if (beta != a.beta_target) throw Error(ErrorKind::CapacityAccounting, "cannot reach the beta count");
    audit.push_back(std::move(a));
  }
  return DesignResult{T, BondField::periodic(V, T, std::move(labels)), target,
                      CrystallineDensity::on_directions(V, target.coefficients(V)), std::move(audit)};
}

DesignVerification verify_design(const DesignResult& result, const std::vector<double>& radii,
                                 double tension_tolerance) {
  DesignVerification rep;
  const BondField& field = result.field;
  const InteractionSet& V = field.interactions();
  const int d = V.dim();

  const VolumeFractions f = volume_fractions(field);
  rep.fractions_exact = true;
  for (std::size_t k = 0; k < V.size(); ++k) {
    const Rational& th = result.target.theta[k];
    if (f.beta_counts[k] * th.den != th.num * f.cell_sites) rep.fractions_exact = false;
  }
  if (!rep.fractions_exact) rep.failures.push_back("volume fractions differ from the target");

  const auto counts = line_counts(field);
  rep.line_fractions_exact = true;
  for (std::size_t k = 0; k < V.size(); ++k) {
    const Rational& t = result.target.t[k];
    if (counts[k].beta_lines * t.den < t.num * counts[k].lines) rep.line_fractions_exact = false;
  }
  if (!rep.line_fractions_exact) rep.failures.push_back("line minima fall below the target coefficients");

  std::vector<double> cp(V.size());
  for (std::size_t k = 0; k < V.size(); ++k) {
    const auto basis = result.audit[k].basis;
    cp[k] = projection_coefficients_all_cosets(field, basis).back();
  }
  const auto projection = CrystallineDensity::on_directions(V, cp);

  rep.projection_ok = true;
  rep.tension_ok = true;
  const double w = unit_ball_measure(d - 1);
  for (std::size_t k = 0; k < V.size(); ++k) {
    const Vec nu = to_real(V.direction(k)).normalized();
    rep.directions.push_back(nu);
    const double psi = result.psi(nu);
    rep.psi.push_back(psi);
    rep.projection.push_back(projection(nu));
    if (projection(nu) < psi - 1e-9) {
      rep.projection_ok = false;
      rep.failures.push_back("projection bound below psi at direction " + std::to_string(k));
    }
    if (!radii.empty()) {
      const auto est = estimate_phi(field, nu, radii, radii.size() >= 2 ? 1 : 0);
      rep.phi_hat.push_back(est.phi_hat);
      rep.phi_last.push_back(est.raw.back() / (w * std::pow(radii.back(), d - 1)));
      if (std::abs(est.phi_hat - psi) > tension_tolerance * psi) {
        rep.tension_ok = false;
        rep.failures.push_back("estimated tension off psi at direction " + std::to_string(k));
      }
    }
  }
  rep.membership = membership_test(result.psi, result.target.total().value(), V);
  if (!rep.membership.feasible) rep.failures.push_back("membership round trip failed: " + rep.membership.reason);
  rep.ok = rep.failures.empty();
  return rep;
}

}  // namespace latmix

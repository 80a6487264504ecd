#include "latmix/bounds.hpp"

#include "latmix/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace latmix {

namespace {

void require_periodic(const BondField& field) {
  if (!field.is_periodic()) throw Error(ErrorKind::UnsupportedInput, "bounds need a periodic field");
}

// index in V of +xi or -xi
int signed_index(const InteractionSet& V, const Point& xi) {
  const int k = V.index_of(xi);
  return k >= 0 ? k : V.index_of(-xi);
}

Eigen::Matrix3d basis_matrix(const std::vector<Point>& basis) {
  Eigen::Matrix3d B = Eigen::Matrix3d::Identity();
  const int d = static_cast<int>(basis.size());
  for (int j = 0; j < d; ++j)
    for (int r = 0; r < d; ++r) B(r, j) = basis[static_cast<std::size_t>(j)][r];
  return B;
}

double min_line_label(const BondField& field, std::size_t k, const Point& start, const Point& step) {
  const InteractionSet& V = field.interactions();
  double m = V.beta(k);
  Point i = start;
  for (int t = 0; t < field.period(); ++t) {
    m = std::min(m, field.strength(i, k));
    i += step;
  }
  return m;
}

Vec unit(const Point& p) { return to_real(p).normalized(); }

// 2D point hull, counter-clockwise, no collinear points.
std::vector<Vec> hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vec> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 1e-14) --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

void check_subadditive(const DensityFn& phi, const std::vector<Vec>& samples) {
  const std::size_t n = samples.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t step : {std::size_t{1}, std::size_t{7}, n / 3 + 1}) {
      const Vec& u = samples[a];
      const Vec& w = samples[(a + step) % n];
      const Vec s = u + w;
      if (s.norm() < 1e-9) continue;
      const double lhs = phi(s);
      const double rhs = phi(u) + phi(w);
      if (lhs > rhs * (1 + 1e-9) + 1e-12)
        throw Error(ErrorKind::InconsistentInput, "sampled density is not convex");
    }
  }
}

// Greedy farthest-point choice of rational node directions, V first.
std::vector<Point> choose_nodes(const InteractionSet& V, std::size_t N) {
  const int d = V.dim();
  std::vector<Point> nodes;
  auto angular = [](const Point& a, const Point& b) {
    return std::acos(std::min(1.0, std::abs(unit(a).dot(unit(b)))));
  };
  for (const Point& xi : V.directions()) {
    Point c = canonical_sign(to_real(xi)) < 0 ? Point(-xi) : xi;
    const long g = std::accumulate(c.data(), c.data() + d, 0L,
                                   [](long acc, int x) { return std::gcd(acc, static_cast<long>(std::abs(x))); });
    c /= static_cast<int>(g);
    bool dup = false;
    for (const Point& p : nodes) dup = dup || p == c;
    if (!dup) nodes.push_back(c);
  }
  const int reach = d == 2 ? 24 : 4;
  std::vector<Point> pool;
  Box box(Point::Constant(d, -reach), Point::Constant(d, 2 * reach + 1));
  box.for_each([&](std::size_t, const Point& p) {
    if (p.isZero() || canonical_sign(to_real(p)) < 0) return;
    long g = 0;
    for (int k = 0; k < d; ++k) g = std::gcd(g, static_cast<long>(std::abs(p[k])));
    if (g == 1) pool.push_back(p);
  });
  while (nodes.size() < N) {
    double best = -1;
    std::size_t pick = 0;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      double nearest = 10.0;
      for (const Point& p : nodes) nearest = std::min(nearest, angular(pool[c], p));
      if (nearest > best + 1e-12) {
        best = nearest;
        pick = c;
      }
    }
    if (best <= 1e-12) break;
    nodes.push_back(pool[pick]);
  }
  return nodes;
}

}  // namespace

// ---------------------------------------------------------------------------
// CrystallineDensity

CrystallineDensity::CrystallineDensity(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  for (const Term& t : terms_) {
    if (t.direction.size() != dim_ || t.direction.isZero())
      throw Error(ErrorKind::PreconditionViolation, "crystalline term needs a nonzero direction");
    if (!(t.coefficient >= 0.0)) throw Error(ErrorKind::PreconditionViolation, "crystalline coefficients must be >= 0");
  }
}

CrystallineDensity CrystallineDensity::on_directions(const InteractionSet& V, const std::vector<double>& c) {
  if (c.size() != V.size()) throw Error(ErrorKind::PreconditionViolation, "one coefficient per direction required");
  std::vector<Term> terms;
  for (std::size_t k = 0; k < V.size(); ++k) terms.push_back({c[k], to_real(V.direction(k))});
  return CrystallineDensity(V.dim(), std::move(terms));
}

double CrystallineDensity::operator()(const Vec& nu) const {
  double s = 0.0;
  for (const Term& t : terms_) s += t.coefficient * std::abs(nu.dot(t.direction));
  return s;
}

// ---------------------------------------------------------------------------
// Field bounds

CrystallineDensity averaging_density(const BondField& field) {
  require_periodic(field);
  const InteractionSet& V = field.interactions();
  const VolumeFractions f = volume_fractions(field);
  std::vector<double> c(V.size());
  for (std::size_t k = 0; k < V.size(); ++k)
    c[k] = f.per_direction[k] * V.beta(k) + (1.0 - f.per_direction[k]) * V.alpha(k);
  return CrystallineDensity::on_directions(V, c);
}

double averaging_bound(const BondField& field, const Vec& nu) { return averaging_density(field)(nu); }

std::vector<Point> canonical_basis(int dim) {
  std::vector<Point> out;
  for (int j = 0; j < dim; ++j) {
    Point e = Point::Zero(dim);
    e[j] = 1;
    out.push_back(e);
  }
  return out;
}

void check_orthogonal_basis(const std::vector<Point>& basis, int dim) {
  if (static_cast<int>(basis.size()) != dim) throw Error(ErrorKind::InvalidBasis, "basis needs d vectors");
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (basis[a].size() != dim || basis[a].isZero()) throw Error(ErrorKind::InvalidBasis, "basis vector is zero or has wrong dimension");
    for (std::size_t b = 0; b < a; ++b)
      if (basis[a].dot(basis[b]) != 0) throw Error(ErrorKind::InvalidBasis, "basis is not orthogonal");
  }
}

int basis_volume(const std::vector<Point>& basis) {
  const int d = static_cast<int>(basis.size());
  const double det = basis_matrix(basis).topLeftCorner(d, d).determinant();
  return static_cast<int>(std::lround(std::abs(det)));
}

std::vector<double> projection_coefficients(const BondField& field, const std::vector<Point>& basis,
                                            const Point& z) {
  require_periodic(field);
  const int d = field.dim();
  check_orthogonal_basis(basis, d);
  const InteractionSet& V = field.interactions();
  const int T = field.period();
  const double norm = std::pow(static_cast<double>(T), d - 1) * basis_volume(basis);
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  for (int j = 0; j < d; ++j) {
    const Point& xj = basis[static_cast<std::size_t>(j)];
    const int k = signed_index(V, xj);
    if (k < 0) continue;
    const Point step = V.direction(static_cast<std::size_t>(k));
    // k-offsets: lambda_m in [0,T) for m != j
    const Box grid(Point::Zero(d - 1 > 0 ? d - 1 : 1), Point::Constant(d - 1 > 0 ? d - 1 : 1, d > 1 ? T : 1));
    double sum = 0.0;
    grid.for_each([&](std::size_t, const Point& lam) {
      Point start = z;
      int idx = 0;
      for (int m = 0; m < d; ++m) {
        if (m == j) continue;
        start += lam[idx++] * basis[static_cast<std::size_t>(m)];
      }
      sum += min_line_label(field, static_cast<std::size_t>(k), start, step);
    });
    out[static_cast<std::size_t>(j)] = sum / norm;
  }
  return out;
}

double projection_bound(const BondField& field, const std::vector<Point>& basis, const Point& z,
                        const Vec& nu) {
  const auto c = projection_coefficients(field, basis, z);
  double s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::abs(nu.dot(to_real(basis[j])));
  return s;
}

std::vector<Point> parallelepiped_points(const std::vector<Point>& basis) {
  const int d = static_cast<int>(basis.size());
  const Eigen::MatrixXd B = basis_matrix(basis).topLeftCorner(d, d);
  const Eigen::MatrixXd Binv = B.inverse();
  Point lo = Point::Zero(d), hi = Point::Zero(d);
  // corners of the parallelepiped
  for (int mask = 0; mask < (1 << d); ++mask) {
    Point c = Point::Zero(d);
    for (int j = 0; j < d; ++j)
      if (mask & (1 << j)) c += basis[static_cast<std::size_t>(j)];
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  std::vector<Point> out;
  Box(lo, (hi - lo).array() + 1).for_each([&](std::size_t, const Point& p) {
    const Eigen::VectorXd lam = Binv * p.cast<double>().head(d);
    for (int j = 0; j < d; ++j)
      if (lam[j] < -1e-9 || lam[j] >= 1 - 1e-9) return;
    out.push_back(p);
  });
  return out;
}

std::vector<double> projection_coefficients_all_cosets(const BondField& field, const std::vector<Point>& basis) {
  check_orthogonal_basis(basis, field.dim());
  std::vector<double> sum(basis.size(), 0.0);
  for (const Point& z : parallelepiped_points(basis)) {
    const auto c = projection_coefficients(field, basis, z);
    for (std::size_t j = 0; j < c.size(); ++j) sum[j] += c[j];
  }
  return sum;
}

double projection_bound_all_cosets(const BondField& field, const std::vector<Point>& basis, const Vec& nu) {
  const auto c = projection_coefficients_all_cosets(field, basis);
  double s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::abs(nu.dot(to_real(basis[j])));
  return s;
}

std::vector<LineCount> line_counts(const BondField& field) {
  require_periodic(field);
  const InteractionSet& V = field.interactions();
  const Box cell = field.window();
  const int T = field.period();
  std::vector<LineCount> out(V.size());
  for (std::size_t k = 0; k < V.size(); ++k) {
    std::vector<std::uint8_t> seen(cell.size(), 0);
    const auto labels = field.labels(k);
    for (std::size_t n = 0; n < cell.size(); ++n) {
      if (seen[n]) continue;
      bool all_beta = true;
      Point i = cell.site(n);
      for (;;) {
        const std::size_t m = cell.index(i);
        if (seen[m]) break;
        seen[m] = 1;
        all_beta = all_beta && labels[m] == Bond::Beta;
        i += V.direction(k);
        for (Eigen::Index r = 0; r < i.size(); ++r) i[r] = positive_mod(i[r], T);
      }
      ++out[k].lines;
      if (all_beta) ++out[k].beta_lines;
    }
  }
  return out;
}

std::vector<double> line_coefficients(const BondField& field) {
  const InteractionSet& V = field.interactions();
  const auto counts = line_counts(field);
  std::vector<double> c(V.size());
  for (std::size_t k = 0; k < V.size(); ++k)
    c[k] = V.alpha(k) + (V.beta(k) - V.alpha(k)) * static_cast<double>(counts[k].beta_lines) /
                            static_cast<double>(counts[k].lines);
  return c;
}

double line_bound(const BondField& field, const Vec& nu) {
  return CrystallineDensity::on_directions(field.interactions(), line_coefficients(field))(nu);
}

// ---------------------------------------------------------------------------
// Membership

std::size_t default_sample_count(int dim) { return dim == 3 ? 1024 : dim == 2 ? 360 : 2; }

std::vector<Vec> sphere_samples(int dim, std::size_t n) {
  std::vector<Vec> out;
  if (dim == 1) return {make_vec({1.0}), make_vec({-1.0})};
  if (dim == 2) {
    for (std::size_t k = 0; k < n; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      out.push_back(make_vec({std::cos(a), std::sin(a)}));
    }
    return out;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double y = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double a = golden * static_cast<double>(k);
    out.push_back(make_vec({r * std::cos(a), y, r * std::sin(a)}));
  }
  return out;
}

MembershipReport membership_test(const DensityFn& phi, double theta, const InteractionSet& V,
                                 std::size_t samples) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorKind::InvalidTarget, "theta must lie in [0,1]");
  if (samples == 0) samples = default_sample_count(V.dim());
  const auto nus = sphere_samples(V.dim(), samples);
  const std::size_t S = nus.size(), m = V.size();

  MembershipReport rep;
  rep.theta = theta;
  rep.samples = S;
  rep.lower_bound_holds = true;

  Eigen::MatrixXd A(S, m);
  Eigen::VectorXd r(S);
  for (std::size_t s = 0; s < S; ++s) {
    const double value = phi(nus[s]);
    const double lower = V.alpha_tension(nus[s]);
    const double slack = rep.tolerance * std::max(1.0, std::abs(value));
    if (value < lower - slack) {
      rep.lower_bound_holds = false;
      rep.max_lower_violation = std::max(rep.max_lower_violation, lower - value);
    }
    r[static_cast<Eigen::Index>(s)] = value - lower - slack;
    for (std::size_t k = 0; k < m; ++k)
      A(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) =
          (V.beta(k) - V.alpha(k)) * std::abs(nus[s].dot(to_real(V.direction(k))));
  }

  // Dual of  min 1't  s.t.  A t >= r, t <= 1, t >= 0.
  Eigen::MatrixXd D(m, S + m);
  D.leftCols(S) = A.transpose();
  D.rightCols(m) = -Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd c(S + m);
  c.head(S) = r;
  c.tail(m).setConstant(-1.0);
  const LpResult lp = maximize_from_origin(D, Eigen::VectorXd::Ones(m), c);
  if (lp.status == LpResult::Status::Unbounded) {
    rep.dominated_by_beta = false;
    rep.reason = "phi exceeds the all-beta density on the sample";
  } else if (lp.status == LpResult::Status::IterationLimit) {
    rep.dominated_by_beta = false;
    rep.reason = "linear program did not converge";
  } else {
    rep.required.resize(m);
    for (std::size_t k = 0; k < m; ++k)
      rep.required[k] = std::clamp(lp.duals[static_cast<Eigen::Index>(k)], 0.0, 1.0);
    // confirm primal feasibility of the recovered t
    const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(rep.required.data(), static_cast<Eigen::Index>(m));
    const Eigen::VectorXd cover = A * t - r;
    rep.dominated_by_beta = cover.minCoeff() >= -1e-9;
    if (!rep.dominated_by_beta) rep.reason = "recovered fractions fail to dominate phi";
    rep.required_average = t.sum() / static_cast<double>(m);
  }
  if (!rep.lower_bound_holds && rep.reason.empty()) rep.reason = "phi is below the all-alpha density";
  rep.feasible = rep.lower_bound_holds && rep.dominated_by_beta && rep.required_average <= theta + 1e-12;
  if (rep.lower_bound_holds && rep.dominated_by_beta && !rep.feasible)
    rep.reason = "required average fraction exceeds theta";
  if (rep.feasible) {
    rep.certificate = rep.required;
    double deficit = theta * static_cast<double>(m) - std::accumulate(rep.required.begin(), rep.required.end(), 0.0);
    for (std::size_t k = 0; k < m && deficit > 0; ++k) {
      const double add = std::min(1.0 - rep.certificate[k], deficit);
      rep.certificate[k] += add;
      deficit -= add;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Crystalline approximation and envelopes

CrystallineDensity secant_density_2d(const std::vector<Vec>& nodes, const std::vector<double>& values) {
  if (nodes.size() != values.size() || nodes.size() < 2)
    throw Error(ErrorKind::PreconditionViolation, "need at least two nodes with values");
  struct Node {
    double angle;
    Vec u;
    double f;
  };
  std::vector<Node> ns;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Vec u = nodes[k].normalized();
    // representative with angle in [0, pi)
    if (u[1] < 0 || (u[1] == 0 && u[0] < 0)) u = -u;
    ns.push_back({std::atan2(u[1], u[0]), u, values[k]});
  }
  std::sort(ns.begin(), ns.end(), [](const Node& x, const Node& y) { return x.angle < y.angle; });
  for (std::size_t k = 1; k < ns.size(); ++k)
    if (ns[k].angle - ns[k - 1].angle < 1e-12) throw Error(ErrorKind::PreconditionViolation, "repeated node direction");
  const std::size_t n = ns.size();
  auto gradient = [](const Vec& ua, double fa, const Vec& ub, double fb) {
    Eigen::Matrix2d M;
    M << ua[0], ua[1], ub[0], ub[1];
    return Vec(M.inverse() * Eigen::Vector2d(fa, fb));
  };
  // cone k: from node k to node k+1 (last: to -node 0)
  std::vector<Vec> grad(n);
  for (std::size_t k = 0; k + 1 < n; ++k) grad[k] = gradient(ns[k].u, ns[k].f, ns[k + 1].u, ns[k + 1].f);
  grad[n - 1] = gradient(ns[n - 1].u, ns[n - 1].f, -ns[0].u, ns[0].f);
  std::vector<CrystallineDensity::Term> terms;
  double scale = 0.0;
  for (const auto& g : grad) scale = std::max(scale, g.norm());
  for (std::size_t k = 0; k < n; ++k) {
    const Vec before = k == 0 ? Vec(-grad[n - 1]) : grad[k - 1];
    const Vec jump = grad[k] - before;
    const Vec normal = make_vec({-ns[k].u[1], ns[k].u[0]});
    const double c = 0.5 * jump.dot(normal);
    if (c < -1e-9 * std::max(1.0, scale)) throw Error(ErrorKind::InconsistentInput, "interpolant is not convex");
    if (c > 0) terms.push_back({c, normal});
  }
  return CrystallineDensity(2, std::move(terms));
}

CrystallineApproximation crystalline_approx(const DensityFn& phi, const InteractionSet& V, std::size_t N) {
  const int d = V.dim();
  if (d < 2) throw Error(ErrorKind::UnsupportedInput, "crystalline approximation needs d >= 2");
  if (N < V.size()) throw Error(ErrorKind::PreconditionViolation, "need at least #V node directions");
  const auto dense = sphere_samples(d, d == 2 ? 3600 : 4096);
  check_subadditive(phi, sphere_samples(d, default_sample_count(d)));

  CrystallineApproximation out;
  out.nodes = choose_nodes(V, N);
  if (d == 2) {
    std::vector<Vec> us;
    std::vector<double> fs;
    for (const Point& p : out.nodes) {
      us.push_back(unit(p));
      fs.push_back(phi(unit(p)));
    }
    out.density = secant_density_2d(us, fs);
  } else {
    const auto samples = sphere_samples(d, default_sample_count(d));
    const std::size_t S = samples.size(), J = out.nodes.size();
    Eigen::MatrixXd A(S, J);
    Eigen::VectorXd f(S);
    for (std::size_t s = 0; s < S; ++s) {
      f[static_cast<Eigen::Index>(s)] = phi(samples[s]);
      for (std::size_t j = 0; j < J; ++j)
        A(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = std::abs(samples[s].dot(unit(out.nodes[j])));
    }
    // min g'c s.t. A c >= f, c >= 0  (g = column sums)  via its dual
    const Eigen::VectorXd g = A.colwise().sum().transpose();
    const LpResult lp = maximize_from_origin(A.transpose(), g, f);
    if (lp.status != LpResult::Status::Optimal)
      throw Error(ErrorKind::InconsistentInput, "crystalline fit did not converge");
    std::vector<CrystallineDensity::Term> terms;
    for (std::size_t j = 0; j < J; ++j) {
      const double c = lp.duals[static_cast<Eigen::Index>(j)];
      if (c > 0) terms.push_back({c, unit(out.nodes[j])});
    }
    out.density = CrystallineDensity(3, std::move(terms));
  }
  out.dominates = true;
  for (const Vec& nu : dense) {
    const double a = out.density(nu), b = phi(nu);
    out.gap = std::max(out.gap, std::abs(a - b));
    if (a < b - 1e-9 * std::max(1.0, b)) out.dominates = false;
  }
  return out;
}

ConvexEnvelope::ConvexEnvelope(int dim, std::vector<Vec> facet_normals, std::optional<CrystallineDensity> crystalline)
    : dim_(dim), normals_(std::move(facet_normals)), crystalline_(std::move(crystalline)) {}

double ConvexEnvelope::operator()(const Vec& nu) const {
  double g = 0.0;
  for (const Vec& n : normals_) g = std::max(g, n.dot(nu));
  return g;
}

ConvexEnvelope convex_envelope_from_V(const InteractionSet& V, const std::vector<double>& values) {
  if (values.size() != V.size()) throw Error(ErrorKind::PreconditionViolation, "one value per direction required");
  const int d = V.dim();
  std::vector<Vec> pts;
  for (std::size_t k = 0; k < V.size(); ++k) {
    if (!(values[k] > 0)) throw Error(ErrorKind::PreconditionViolation, "envelope values must be positive");
    const Vec p = unit(V.direction(k)) / values[k];
    pts.push_back(p);
    pts.push_back(-p);
  }
  std::vector<Vec> normals;
  if (d == 2) {
    const auto h = hull_2d(pts);
    for (std::size_t k = 0; k < h.size(); ++k) {
      const Vec& a = h[k];
      const Vec& b = h[(k + 1) % h.size()];
      Eigen::Matrix2d M;
      M << a[0], a[1], b[0], b[1];
      normals.push_back(Vec(M.inverse() * Eigen::Vector2d(1.0, 1.0)));
    }
    // nodes: hull vertices in the upper half-plane representatives
    std::vector<Vec> nodes;
    std::vector<double> vals;
    for (const Vec& p : h) {
      if (canonical_sign(p) < 0) continue;
      nodes.push_back(p.normalized());
      vals.push_back(1.0 / p.norm());
    }
    return ConvexEnvelope(2, std::move(normals), secant_density_2d(nodes, vals));
  }
  if (d != 3) throw Error(ErrorKind::UnsupportedInput, "envelope supports d = 2, 3");
  const std::size_t n = pts.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        Eigen::Matrix3d M;
        M.row(0) = pts[a].transpose();
        M.row(1) = pts[b].transpose();
        M.row(2) = pts[c].transpose();
        if (std::abs(M.determinant()) < 1e-12) continue;
        const Vec nrm = M.inverse() * Eigen::Vector3d(1, 1, 1);
        bool facet = true;
        for (const Vec& q : pts) facet = facet && nrm.dot(q) <= 1 + 1e-9;
        if (!facet) continue;
        bool dup = false;
        for (const Vec& m : normals) dup = dup || (m - nrm).norm() < 1e-9;
        if (!dup) normals.push_back(nrm);
      }
  return ConvexEnvelope(3, std::move(normals), std::nullopt);
}

std::vector<BoundsRow> bounds_table(const BondField& field, const std::vector<Vec>& directions) {
  require_periodic(field);
  const InteractionSet& V = field.interactions();
  const auto basis = canonical_basis(field.dim());
  const auto proj = projection_coefficients(field, basis, Point::Zero(field.dim()));
  const auto lines = CrystallineDensity::on_directions(V, line_coefficients(field));
  const auto avg = averaging_density(field);
  std::vector<BoundsRow> rows;
  for (const Vec& nu : directions) {
    BoundsRow r;
    r.nu = nu;
    r.trivial_lower = V.alpha_tension(nu);
    for (std::size_t j = 0; j < proj.size(); ++j) r.projection += proj[j] * std::abs(nu[static_cast<Eigen::Index>(j)]);
    r.line = lines(nu);
    r.averaging = avg(nu);
    r.trivial_upper = V.beta_tension(nu);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace latmix

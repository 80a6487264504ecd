#include "latmix/celltension.hpp"

#include "latmix/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace latmix {

namespace {

Vec canonical(const Vec& nu) {
  const double n = nu.norm();
  if (!(std::abs(n - 1.0) <= 1e-9))
    throw Error(ErrorKind::PreconditionViolation, "direction must be a unit vector");
  return canonical_sign(nu) < 0 ? Vec(-nu) : nu;
}

void require_periodic(const BondField& field) {
  if (!field.is_periodic()) throw Error(ErrorKind::UnsupportedInput, "tension estimators need a periodic field");
}

// Unimodular B with <b_k, v> = 0 for k < d-1 and <b_{d-1}, v> = 1.
Eigen::Matrix3i transversal_basis(const Point& v) {
  const int d = static_cast<int>(v.size());
  Eigen::Matrix3i U = Eigen::Matrix3i::Identity();
  std::vector<long> r(v.data(), v.data() + d);
  for (;;) {
    int p = -1;
    for (int k = 0; k < d; ++k)
      if (r[k] != 0 && (p < 0 || std::abs(r[k]) < std::abs(r[p]))) p = k;
    if (p < 0) throw Error(ErrorKind::PreconditionViolation, "zero direction");
    bool reduced = true;
    for (int q = 0; q < d; ++q) {
      if (q == p || r[q] == 0) continue;
      const long m = r[q] / r[p];
      U.col(q) -= static_cast<int>(m) * U.col(p);
      r[q] -= m * r[p];
      reduced = false;
    }
    if (reduced) {
      if (std::abs(r[p]) != 1) throw Error(ErrorKind::PreconditionViolation, "direction is not primitive");
      if (r[p] < 0) U.col(p) = -U.col(p);
      U.col(p).swap(U.col(d - 1));
      break;
    }
  }
  return U;
}

long gcd_all(const Point& v) {
  long g = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) g = std::gcd(g, static_cast<long>(std::abs(v[k])));
  return g;
}

}  // namespace

Schedule Schedule::standard(int dim) {
  Schedule s;
  if (dim == 3) {
    s.radii = {8, 12, 16};
    s.directions = cube_directions();
  } else if (dim == 2) {
    s.radii = {16, 32, 64, 128};
    s.directions = evenly_spaced_directions(64);
  } else {
    s.radii = {16, 32, 64, 128};
    s.directions = {make_vec({1.0}), make_vec({-1.0})};
  }
  return s;
}

void Schedule::validate(int range) const {
  if (radii.empty()) throw Error(ErrorKind::PreconditionViolation, "schedule has no radii");
  if (extrapolation_order != 0 && extrapolation_order != 1)
    throw Error(ErrorKind::PreconditionViolation, "extrapolation order must be 0 or 1");
  if (extrapolation_order == 1 && radii.size() < 2)
    throw Error(ErrorKind::PreconditionViolation, "order-1 extrapolation needs at least two radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > range)) throw Error(ErrorKind::DegenerateRegion, "schedule radius below the interaction range");
    if (k > 0 && !(radii[k] > radii[k - 1]))
      throw Error(ErrorKind::PreconditionViolation, "radii must be strictly increasing");
  }
  if (directions.empty()) throw Error(ErrorKind::PreconditionViolation, "schedule has no directions");
}

std::vector<Vec> evenly_spaced_directions(int n) {
  std::vector<Vec> out(static_cast<std::size_t>(std::max(n, 0)));
  const int half = (n % 2 == 0) ? n / 2 : n;
  for (int k = 0; k < half; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    out[static_cast<std::size_t>(k)] = make_vec({std::cos(a), std::sin(a)});
  }
  if (n % 2 == 0)
    for (int k = 0; k < half; ++k) out[static_cast<std::size_t>(k + half)] = -out[static_cast<std::size_t>(k)];
  return out;
}

std::vector<Vec> cube_directions() {
  std::vector<Vec> pos;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z) {
        Vec v = make_vec({double(x), double(y), double(z)});
        if (v.isZero() || canonical_sign(v) < 0) continue;
        pos.push_back(v / v.norm());
      }
  std::vector<Vec> out = pos;
  for (const Vec& v : pos) out.push_back(-v);
  return out;
}

CutResult ball_problem(const BondField& field, const Vec& nu, double R, Solver solver) {
  require_periodic(field);
  if (nu.size() != field.dim()) throw Error(ErrorKind::PreconditionViolation, "direction has wrong dimension");
  const Vec c = canonical(nu);
  const Vec origin = Vec::Zero(field.dim());
  const HalfSpaceTrace trace(origin, c);
  return solve_min_cut(build_ball_instance(field, origin, R, trace), solver);
}

double ball_tension(const BondField& field, const Vec& nu, double R) {
  const double area = unit_ball_measure(field.dim() - 1) * std::pow(R, field.dim() - 1);
  return ball_problem(field, nu, R).value / area;
}

double extrapolate(const std::vector<double>& radii, const std::vector<double>& values, int order) {
  if (values.empty() || radii.size() != values.size())
    throw Error(ErrorKind::PreconditionViolation, "ladder and values differ in length");
  if (order == 0) return values.back();
  if (values.size() < 2) throw Error(ErrorKind::PreconditionViolation, "order-1 extrapolation needs two radii");
  const double m = static_cast<double>(values.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = 1.0 / radii[k];
    sx += x;
    sy += values[k];
    sxx += x * x;
    sxy += x * values[k];
  }
  const double den = m * sxx - sx * sx;
  if (!(std::abs(den) > 0)) return values.back();
  const double b = (m * sxy - sx * sy) / den;
  const double a = (sy - b * sx) / m;
  return std::max(a, 0.0);
}

TensionEstimate estimate_phi(const BondField& field, const Vec& nu, const std::vector<double>& radii,
                             int extrapolation_order) {
  require_periodic(field);
  Schedule s;
  s.radii = radii;
  s.directions = {nu};
  s.extrapolation_order = extrapolation_order;
  s.validate(field.interactions().range());

  TensionEstimate est;
  est.nu = nu;
  est.method = "ball";
  est.radii = radii;
  const double w = unit_ball_measure(field.dim() - 1);
  for (double R : radii) {
    const double v = ball_problem(field, nu, R).value;
    est.raw.push_back(v);
    est.normalized.push_back(v / (w * std::pow(R, field.dim() - 1)));
  }
  est.phi_hat = extrapolate(radii, est.normalized, extrapolation_order);
  est.error_gauge = std::abs(est.normalized.back() - est.phi_hat);
  return est;
}

double tension_slack(const InteractionSet& V, const Vec& nu, double R, double kappa) {
  return kappa * V.beta_tension(nu.normalized()) / R;
}

Point rational_direction(const Vec& nu) {
  const int d = static_cast<int>(nu.size());
  const double top = nu.cwiseAbs().maxCoeff();
  if (!(top > 0)) throw Error(ErrorKind::PreconditionViolation, "zero direction");
  const Vec x = nu / top;
  long lcm = 1;
  std::vector<long> num(static_cast<std::size_t>(d)), den(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    // best rational with denominator <= 64
    long best_p = 0, best_q = 1;
    double best_err = std::abs(x[k]);
    for (long q = 1; q <= 64; ++q) {
      const long p = std::lround(x[k] * q);
      const double err = std::abs(x[k] - static_cast<double>(p) / q);
      if (err < best_err - 1e-15) {
        best_err = err;
        best_p = p;
        best_q = q;
      }
    }
    if (best_err > 1e-9) throw Error(ErrorKind::RationalDirectionRequired, "direction is not rational with small denominators");
    num[static_cast<std::size_t>(k)] = best_p;
    den[static_cast<std::size_t>(k)] = best_q;
    lcm = std::lcm(lcm, best_q);
  }
  Point v(d);
  for (int k = 0; k < d; ++k)
    v[k] = static_cast<int>(num[static_cast<std::size_t>(k)] * (lcm / den[static_cast<std::size_t>(k)]));
  const long g = gcd_all(v);
  for (int k = 0; k < d; ++k) v[k] = static_cast<int>(v[k] / g);
  if (v.cwiseAbs().maxCoeff() > 64 || (to_real(v).normalized() - nu.normalized()).norm() > 1e-9)
    throw Error(ErrorKind::RationalDirectionRequired, "direction is not rational with small entries");
  return v;
}

TensionEstimate estimate_phi_affine(const BondField& field, const Vec& nu, int K, int L) {
  require_periodic(field);
  if (K < 1 || L < 1) throw Error(ErrorKind::PreconditionViolation, "K and L must be positive");
  const int d = field.dim();
  const Vec c = canonical(nu);
  const Point v = rational_direction(c);
  const Eigen::Matrix3i U = transversal_basis(v);
  const Eigen::Matrix3d Ud = U.cast<double>();
  Eigen::Matrix3i Uinv;
  {
    Eigen::MatrixXd inv = Ud.topLeftCorner(d, d).inverse();
    Uinv.setZero();
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) Uinv(r, s) = static_cast<int>(std::lround(inv(r, s)));
  }
  const InteractionSet& V = field.interactions();
  const int T = field.period();
  const int M = L * T;
  const int H = T + V.range() * static_cast<int>(v.cwiseAbs().sum()) + 1;
  const int slab = 2 * H;
  std::size_t cells = 1;
  for (int k = 0; k < d - 1; ++k) cells *= static_cast<std::size_t>(M);
  const std::size_t nodes = cells * static_cast<std::size_t>(slab);

  auto site_of = [&](std::size_t n) {
    const int h = static_cast<int>(n % static_cast<std::size_t>(slab)) - H + 1;
    std::size_t rest = n / static_cast<std::size_t>(slab);
    Point i = Point::Zero(d);
    for (int k = d - 2; k >= 0; --k) {
      const int a = static_cast<int>(rest % static_cast<std::size_t>(M));
      rest /= static_cast<std::size_t>(M);
      for (int r = 0; r < d; ++r) i[r] += a * U(r, k);
    }
    for (int r = 0; r < d; ++r) i[r] += h * U(r, d - 1);
    return i;
  };
  // node index, or -1 / -2 for the pinned -1 / +1 regions
  auto node_of = [&](const Point& j) -> long {
    std::size_t n = 0;
    int h = 0;
    for (int r = 0; r < d; ++r) {
      long coord = 0;
      for (int s = 0; s < d; ++s) coord += static_cast<long>(Uinv(r, s)) * j[s];
      if (r == d - 1) h = static_cast<int>(coord);
      else n = n * static_cast<std::size_t>(M) + static_cast<std::size_t>(positive_mod(coord, M));
    }
    if (h <= -H) return -1;
    if (h > H) return -2;
    return static_cast<long>(n * static_cast<std::size_t>(slab) + static_cast<std::size_t>(h + H - 1));
  };

  TensionEstimate est;
  est.nu = nu;
  est.method = "affine";
  const double area = std::pow(static_cast<double>(M), d - 1) * to_real(v).norm();
  for (int shift_index = 0; shift_index < K; ++shift_index) {
    const int steps = static_cast<int>((static_cast<long>(shift_index) * T) / K);
    Point shift(d);
    for (int r = 0; r < d; ++r) shift[r] = steps * U(r, d - 1);

    CutInstance inst;
    inst.scale = V.integer_scale();
    for (std::size_t n = 0; n < nodes; ++n) {
      inst.add_node();
      inst.sites.push_back(site_of(n));
    }
    auto fold = [&](std::size_t n, long pinned, double cap) {
      if (pinned == -2) inst.source_cap[n] += cap;
      else inst.sink_cap[n] += cap;
    };
    for (std::size_t n = 0; n < nodes; ++n) {
      const Point i = inst.sites[n];
      for (std::size_t k = 0; k < V.size(); ++k) {
        const Point& xi = V.direction(k);
        const double cf = field.strength(i + shift, k);
        const long fwd = node_of(i + xi);
        if (fwd >= 0) {
          if (static_cast<std::size_t>(fwd) != n && cf > 0)
            inst.edges.push_back({static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(fwd), cf});
        } else {
          fold(n, fwd, cf);
        }
        const long back = node_of(i - xi);
        if (back < 0) fold(n, back, field.strength(i - xi + shift, k));
      }
    }
    const double value = solve_min_cut(inst).value;
    est.radii.push_back(shift_index);
    est.raw.push_back(value);
    est.normalized.push_back(value / area);
  }
  est.phi_hat = std::accumulate(est.normalized.begin(), est.normalized.end(), 0.0) / K;
  for (double x : est.normalized) est.error_gauge = std::max(est.error_gauge, std::abs(x - est.phi_hat));
  return est;
}

Sweep direction_sweep(const BondField& field, const Schedule& schedule) {
  require_periodic(field);
  schedule.validate(field.interactions().range());
  Sweep sweep;
  sweep.max_radius = schedule.radii.back();
  if (schedule.directions.size() < 8)
    sweep.warnings.push_back("too-few-directions: " + std::to_string(schedule.directions.size()) + " < 8");

  // +-nu share one canonical problem
  std::map<std::vector<double>, std::size_t> slot;
  std::vector<Vec> unique;
  std::vector<std::size_t> which(schedule.directions.size());
  for (std::size_t k = 0; k < schedule.directions.size(); ++k) {
    const Vec c = canonical(schedule.directions[k]);
    const std::vector<double> key(c.data(), c.data() + c.size());
    auto [it, fresh] = slot.emplace(key, unique.size());
    if (fresh) unique.push_back(c);
    which[k] = it->second;
  }
  std::vector<TensionEstimate> results(unique.size());
  parallel_for(unique.size(), [&](std::size_t k) {
    results[k] = estimate_phi(field, unique[k], schedule.radii, schedule.extrapolation_order);
  });
  for (std::size_t k = 0; k < schedule.directions.size(); ++k) {
    TensionEstimate e = results[which[k]];
    e.nu = schedule.directions[k];
    sweep.estimates.push_back(std::move(e));
  }
  if (field.dim() == 2) {
    for (const auto& e : sweep.estimates) {
      sweep.angles.push_back(std::atan2(e.nu[1], e.nu[0]));
      sweep.polygon.push_back(e.phi_hat > 0 ? Vec(e.nu / e.phi_hat) : Vec(Vec::Zero(2)));
    }
  }
  return sweep;
}

}  // namespace latmix

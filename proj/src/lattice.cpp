#include "latmix/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace latmix {

namespace {

// Continued-fraction rationalization with denominator bound.
std::optional<std::int64_t> denominator_of(double x) {
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  double r = std::abs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (a > 1e12) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > 1'000'000) break;
    if (std::abs(std::abs(x) - static_cast<double>(p2) / static_cast<double>(q2)) <= tol) return q2;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = r - a;
    if (frac <= 0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

std::size_t sites_in_period(int dim, int period) {
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(period);
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// InteractionSet

InteractionSet::InteractionSet(int dim, std::vector<Point> directions, std::vector<double> alpha,
                               std::vector<double> beta)
    : dim_(dim), directions_(std::move(directions)), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (dim_ < 1 || dim_ > kMaxDim)
    throw Error(ErrorKind::PreconditionViolation, "dimension must be 1..3");
  if (alpha_.size() != directions_.size() || beta_.size() != directions_.size())
    throw Error(ErrorKind::PreconditionViolation, "alpha/beta must have one entry per direction");
  for (std::size_t k = 0; k < directions_.size(); ++k) {
    const Point& xi = directions_[k];
    if (xi.size() != dim_) throw Error(ErrorKind::PreconditionViolation, "direction has wrong dimension");
    if (xi.isZero()) throw Error(ErrorKind::PreconditionViolation, "zero direction in V");
    for (std::size_t m = 0; m < k; ++m)
      if (directions_[m] == xi) throw Error(ErrorKind::PreconditionViolation, "repeated direction in V");
    if (!(alpha_[k] > 0.0) || !(alpha_[k] < beta_[k]) || !std::isfinite(beta_[k]))
      throw Error(ErrorKind::PreconditionViolation, "strengths must satisfy 0 < alpha < beta");
    range_ = std::max(range_, xi.cwiseAbs().maxCoeff());
  }
  for (int j = 0; j < dim_; ++j) {
    Point e = Point::Zero(dim_);
    e[j] = 1;
    if (index_of(e) < 0) throw Error(ErrorKind::PreconditionViolation, "V must contain the canonical basis");
  }
}

InteractionSet InteractionSet::nearest_neighbour(int dim, double alpha, double beta) {
  std::vector<Point> dirs;
  for (int j = 0; j < dim; ++j) {
    Point e = Point::Zero(dim);
    e[j] = 1;
    dirs.push_back(e);
  }
  return InteractionSet(dim, dirs, std::vector<double>(dirs.size(), alpha),
                        std::vector<double>(dirs.size(), beta));
}

InteractionSet InteractionSet::nn_diagonal_2d(double alpha, double beta) {
  std::vector<Point> dirs{make_point({1, 0}), make_point({0, 1}), make_point({1, 1}),
                          make_point({1, -1})};
  return InteractionSet(2, dirs, std::vector<double>(4, alpha), std::vector<double>(4, beta));
}

int InteractionSet::index_of(const Point& xi) const {
  for (std::size_t k = 0; k < directions_.size(); ++k)
    if (directions_[k].size() == xi.size() && directions_[k] == xi) return static_cast<int>(k);
  return -1;
}

double InteractionSet::alpha_tension(const Vec& nu) const {
  double s = 0.0;
  for (std::size_t k = 0; k < size(); ++k) s += alpha_[k] * std::abs(nu.dot(to_real(directions_[k])));
  return s;
}

double InteractionSet::beta_tension(const Vec& nu) const {
  double s = 0.0;
  for (std::size_t k = 0; k < size(); ++k) s += beta_[k] * std::abs(nu.dot(to_real(directions_[k])));
  return s;
}

std::optional<std::int64_t> InteractionSet::integer_scale() const {
  std::int64_t scale = 1;
  auto absorb = [&](double x) -> bool {
    const auto q = denominator_of(x);
    if (!q) return false;
    scale = std::lcm(scale, *q);
    return scale <= 1'000'000'000;
  };
  for (std::size_t k = 0; k < size(); ++k)
    if (!absorb(alpha_[k]) || !absorb(beta_[k])) return std::nullopt;
  return scale;
}

bool InteractionSet::operator==(const InteractionSet& other) const {
  return dim_ == other.dim_ && directions_ == other.directions_ && alpha_ == other.alpha_ &&
         beta_ == other.beta_;
}

// ---------------------------------------------------------------------------
// BondField

BondField::BondField(InteractionSet interactions, bool periodic, int period, Box window,
                     std::vector<std::vector<Bond>> labels, Bond outside)
    : interactions_(std::move(interactions)),
      periodic_(periodic),
      period_(period),
      window_(std::move(window)),
      labels_(std::move(labels)),
      outside_(outside) {}

BondField BondField::periodic(InteractionSet interactions, int period,
                              std::vector<std::vector<Bond>> labels) {
  if (period < 1) throw Error(ErrorKind::PreconditionViolation, "period must be >= 1");
  const std::size_t n = sites_in_period(interactions.dim(), period);
  if (labels.size() != interactions.size())
    throw Error(ErrorKind::PreconditionViolation, "one label block per direction required");
  for (const auto& block : labels)
    if (block.size() != n) throw Error(ErrorKind::PreconditionViolation, "label block must have T^d entries");
  Box cell = Box::cube(interactions.dim(), period);
  return BondField(std::move(interactions), true, period, std::move(cell), std::move(labels), Bond::Alpha);
}

BondField BondField::windowed(InteractionSet interactions, Box window,
                              std::vector<std::vector<Bond>> labels, Bond outside) {
  if (window.dim() != interactions.dim())
    throw Error(ErrorKind::PreconditionViolation, "window dimension mismatch");
  if (labels.size() != interactions.size())
    throw Error(ErrorKind::PreconditionViolation, "one label block per direction required");
  for (const auto& block : labels)
    if (block.size() != window.size())
      throw Error(ErrorKind::PreconditionViolation, "label block must cover the window");
  return BondField(std::move(interactions), false, 0, std::move(window), std::move(labels), outside);
}

BondField BondField::translated(const Point& shift) const {
  if (!periodic_) throw Error(ErrorKind::UnsupportedInput, "translation requires a periodic field");
  auto labels = labels_;
  const Box cell = window_;
  for (std::size_t k = 0; k < labels.size(); ++k)
    cell.for_each([&](std::size_t n, const Point& i) { labels[k][n] = label(i + shift, k); });
  return periodic(interactions_, period_, std::move(labels));
}

BondField BondField::with_label(const Point& site, std::size_t k, Bond b) const {
  BondField copy = *this;
  if (periodic_) {
    copy.labels_[k][periodic_index(site)] = b;
  } else {
    if (!window_.contains(site)) throw Error(ErrorKind::PreconditionViolation, "site outside window");
    copy.labels_[k][window_.index(site)] = b;
  }
  return copy;
}

bool BondField::operator==(const BondField& other) const {
  return interactions_ == other.interactions_ && periodic_ == other.periodic_ &&
         period_ == other.period_ && window_.lo() == other.window_.lo() &&
         window_.extent() == other.window_.extent() && labels_ == other.labels_ &&
         (periodic_ || outside_ == other.outside_);
}

// ---------------------------------------------------------------------------
// Traces and states

HalfSpaceTrace::HalfSpaceTrace(Vec center, Vec normal, bool complemented)
    : center_(std::move(center)), normal_(std::move(normal)), complemented_(complemented) {
  if (center_.size() != normal_.size())
    throw Error(ErrorKind::PreconditionViolation, "trace center/normal dimension mismatch");
  const double n = normal_.norm();
  if (std::abs(n - 1.0) > 1e-9) throw Error(ErrorKind::PreconditionViolation, "trace normal must be a unit vector");
}

int HalfSpaceTrace::value(const Point& site) const {
  double s = 0.0;
  double scale = 1.0;
  for (Eigen::Index k = 0; k < normal_.size(); ++k) {
    const double y = static_cast<double>(site[k]) - center_[k];
    s += y * normal_[k];
    scale += std::abs(y);
  }
  // Sites within rounding distance of the hyperplane count as on it.
  const int v = s > 1e-12 * scale ? 1 : -1;
  return complemented_ ? -v : v;
}

SpinState::SpinState(Box window, std::int8_t fill)
    : window_(std::move(window)), values_(window_.size(), fill) {}

SpinState::SpinState(Box window, std::vector<std::int8_t> values)
    : window_(std::move(window)), values_(std::move(values)) {
  if (values_.size() != window_.size())
    throw Error(ErrorKind::PreconditionViolation, "spin values must cover the window");
  for (auto s : values_)
    if (s != 1 && s != -1) throw Error(ErrorKind::PreconditionViolation, "spins must be +-1");
}

SpinState SpinState::from_trace(const Box& window, const HalfSpaceTrace& trace) {
  SpinState state(window, std::int8_t{-1});
  window.for_each([&](std::size_t n, const Point& p) {
    state.values_[n] = static_cast<std::int8_t>(trace.value(p));
  });
  return state;
}

// ---------------------------------------------------------------------------
// Energy and fractions

double evaluate_energy(const BondField& field, const SpinState& state, const HalfSpaceTrace& trace,
                       std::span<const Point> region, BondScope scope) {
  const Box& window = state.window();
  std::vector<std::uint8_t> in_region(window.size(), 0);
  for (const Point& i : region) {
    if (i.size() != field.dim() || !window.contains(i))
      throw Error(ErrorKind::PreconditionViolation, "region must be contained in the state window");
    in_region[window.index(i)] = 1;
  }
  auto spin = [&](const Point& p) {
    return window.contains(p) ? state.value(p) : trace.value(p);
  };
  auto member = [&](const Point& p) { return window.contains(p) && in_region[window.index(p)]; };

  const InteractionSet& V = field.interactions();
  double energy = 0.0;
  for (std::size_t n = 0; n < window.size(); ++n) {
    if (!in_region[n]) continue;
    const Point i = window.site(n);
    const int ui = spin(i);
    for (std::size_t k = 0; k < V.size(); ++k) {
      const Point& xi = V.direction(k);
      const int diff = ui - spin(i + xi);
      energy += 0.25 * field.strength(i, k) * diff * diff;
      if (scope == BondScope::TouchingRegion) {
        const Point j = i - xi;
        if (!member(j)) {
          const int dj = spin(j) - ui;
          energy += 0.25 * field.strength(j, k) * dj * dj;
        }
      }
    }
  }
  return energy;
}

VolumeFractions volume_fractions(const BondField& field) {
  if (!field.is_periodic())
    throw Error(ErrorKind::UnsupportedInput, "volume fractions need a periodic field; coarse-grain windowed fields instead");
  VolumeFractions out;
  const std::size_t n = field.window().size();
  out.cell_sites = static_cast<std::int64_t>(n);
  std::int64_t total = 0;
  for (std::size_t k = 0; k < field.interactions().size(); ++k) {
    const auto labels = field.labels(k);
    const auto c = std::count(labels.begin(), labels.end(), Bond::Beta);
    out.beta_counts.push_back(c);
    out.per_direction.push_back(static_cast<double>(c) / static_cast<double>(n));
    total += c;
  }
  out.total = static_cast<double>(total) /
              (static_cast<double>(n) * static_cast<double>(field.interactions().size()));
  return out;
}

// ---------------------------------------------------------------------------
// Field construction

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % bound;
}

BondField make_field(const FieldSpec& spec, const InteractionSet& V, int period) {
  if (period < 1) throw Error(ErrorKind::PreconditionViolation, "period must be >= 1");
  const Box cell = Box::cube(V.dim(), period);
  const std::size_t n = cell.size();
  std::vector<std::vector<Bond>> labels(V.size(), std::vector<Bond>(n, Bond::Alpha));

  if (const auto* h = std::get_if<HomogeneousSpec>(&spec)) {
    for (auto& block : labels) std::fill(block.begin(), block.end(), h->label);
  } else if (const auto* lam = std::get_if<LaminateSpec>(&spec)) {
    const int width = lam->alpha_width + lam->beta_width;
    if (lam->axis < 0 || lam->axis >= V.dim() || lam->alpha_width < 0 || lam->beta_width < 0 || width < 1)
      throw Error(ErrorKind::InvalidTarget, "bad laminate geometry");
    if (period % width != 0)
      throw Error(ErrorKind::InvalidTarget, "laminate stripe period must divide T");
    for (std::size_t k : lam->bond_directions) {
      if (k >= V.size()) throw Error(ErrorKind::InvalidTarget, "laminate bond direction out of range");
      cell.for_each([&](std::size_t m, const Point& i) {
        if (positive_mod(i[lam->axis], width) >= lam->alpha_width) labels[k][m] = Bond::Beta;
      });
    }
  } else if (const auto* rnd = std::get_if<RandomSpec>(&spec)) {
    if (rnd->theta.size() != V.size())
      throw Error(ErrorKind::InvalidTarget, "one theta target per direction required");
    SplitMix64 rng(rnd->seed);
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < V.size(); ++k) {
      const double th = rnd->theta[k];
      if (!(th >= 0.0 && th <= 1.0)) throw Error(ErrorKind::InvalidTarget, "theta target outside [0,1]");
      const auto count = static_cast<std::size_t>(std::llround(th * static_cast<double>(n)));
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t m = n; m > 1; --m) std::swap(order[m - 1], order[rng.below(m)]);
      for (std::size_t m = 0; m < count; ++m) labels[k][order[m]] = Bond::Beta;
    }
  } else if (const auto* ex = std::get_if<ExplicitSpec>(&spec)) {
    labels = ex->labels;
  }
  return BondField::periodic(V, period, std::move(labels));
}

}  // namespace latmix

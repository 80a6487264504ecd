#include "latmix/core.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace latmix {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::UnsupportedInput: return "unsupported-input";
    case ErrorKind::InvalidTarget: return "invalid-target";
    case ErrorKind::DegenerateRegion: return "degenerate-region";
    case ErrorKind::SizeLimit: return "size-limit";
    case ErrorKind::RationalDirectionRequired: return "rational-direction-required";
    case ErrorKind::InvalidBasis: return "invalid-basis";
    case ErrorKind::InconsistentInput: return "inconsistent-input";
    case ErrorKind::UndefinedCount: return "undefined-count";
    case ErrorKind::PeriodSearchExhausted: return "period-search-exhausted";
    case ErrorKind::BasisConstruction: return "basis-construction";
    case ErrorKind::CapacityAccounting: return "capacity-accounting";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

Box::Box(Point lo, Point extent) : lo_(std::move(lo)), extent_(std::move(extent)) {
  if (lo_.size() != extent_.size() || lo_.size() < 1 || lo_.size() > kMaxDim)
    throw Error(ErrorKind::PreconditionViolation, "box dimension mismatch");
  size_ = 1;
  for (Eigen::Index k = 0; k < extent_.size(); ++k) {
    if (extent_[k] < 0) throw Error(ErrorKind::PreconditionViolation, "negative box extent");
    size_ *= static_cast<std::size_t>(extent_[k]);
  }
}

Box Box::cube(int dim, int side) {
  return Box(Point::Zero(dim), Point::Constant(dim, side));
}

bool Box::contains(const Point& p) const {
  for (Eigen::Index k = 0; k < lo_.size(); ++k) {
    const int r = p[k] - lo_[k];
    if (r < 0 || r >= extent_[k]) return false;
  }
  return true;
}

std::size_t Box::index(const Point& p) const {
  std::size_t n = 0;
  for (Eigen::Index k = 0; k < lo_.size(); ++k)
    n = n * static_cast<std::size_t>(extent_[k]) + static_cast<std::size_t>(p[k] - lo_[k]);
  return n;
}

Point Box::site(std::size_t index) const {
  Point p(lo_.size());
  for (Eigen::Index k = lo_.size() - 1; k >= 0; --k) {
    const auto e = static_cast<std::size_t>(extent_[k]);
    p[k] = lo_[k] + static_cast<int>(index % e);
    index /= e;
  }
  return p;
}

int canonical_sign(const Vec& nu) {
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    if (std::abs(nu[k]) > 1e-12) return nu[k] > 0 ? 1 : -1;
  }
  return 1;
}

double unit_ball_measure(int k) {
  // pi^{k/2} / Gamma(k/2 + 1)
  return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace latmix

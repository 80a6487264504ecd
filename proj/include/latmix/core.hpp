// Shared vocabulary: lattice points, real vectors, boxes and the error type.
#ifndef LATMIX_CORE_HPP
#define LATMIX_CORE_HPP

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace latmix {

inline constexpr int kMaxDim = 3;

/// Integer lattice vector (d <= 3, stack allocated).
using Point = Eigen::Matrix<int, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
/// Real vector in R^d (d <= 3, stack allocated).
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

enum class ErrorKind {
  PreconditionViolation,
  UnsupportedInput,
  InvalidTarget,
  DegenerateRegion,
  SizeLimit,
  RationalDirectionRequired,
  InvalidBasis,
  InconsistentInput,
  UndefinedCount,
  PeriodSearchExhausted,
  BasisConstruction,
  CapacityAccounting,
  OutOfDomain,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Vec to_real(const Point& p) { return p.cast<double>(); }

inline Point make_point(std::initializer_list<int> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (int x : xs) p[k++] = x;
  return p;
}

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

inline int positive_mod(long a, long m) {
  long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

/// Axis-aligned box of lattice sites [lo, lo + extent). Flat indices are
/// row-major with the last coordinate varying fastest.
class Box {
 public:
  Box() = default;
  Box(Point lo, Point extent);

  static Box cube(int dim, int side);

  int dim() const { return static_cast<int>(lo_.size()); }
  const Point& lo() const { return lo_; }
  const Point& extent() const { return extent_; }
  std::size_t size() const { return size_; }

  bool contains(const Point& p) const;
  std::size_t index(const Point& p) const;
  Point site(std::size_t index) const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t n = 0; n < size_; ++n) f(n, site(n));
  }

 private:
  Point lo_;
  Point extent_;
  std::size_t size_ = 0;
};

/// Sign used to canonicalize +-nu: +1 if the first non-negligible component
/// is positive.
int canonical_sign(const Vec& nu);

/// (d-1)-dimensional measure of the unit (d-1)-ball: w_1 = 2, w_2 = pi.
double unit_ball_measure(int k);

/// 64-bit FNV-1a digest, used for field fingerprints and manifests.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

}  // namespace latmix

#endif  // LATMIX_CORE_HPP

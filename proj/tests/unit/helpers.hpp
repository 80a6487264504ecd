#ifndef LATMIX_TEST_HELPERS_HPP
#define LATMIX_TEST_HELPERS_HPP

#include "latmix/lattice.hpp"

#include <vector>

namespace latmix::test {

inline std::vector<Point> box_points(const Box& b) {
  std::vector<Point> out;
  b.for_each([&](std::size_t, const Point& p) { out.push_back(p); });
  return out;
}

inline BondField homogeneous(const InteractionSet& V, Bond b, int T = 1) {
  return make_field(HomogeneousSpec{b}, V, T);
}

inline BondField random_field(const InteractionSet& V, int T, double theta, std::uint64_t seed) {
  return make_field(RandomSpec{std::vector<double>(V.size(), theta), seed}, V, T);
}

}  // namespace latmix::test

#endif

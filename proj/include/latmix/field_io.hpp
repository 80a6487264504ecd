// Text format for periodic bond fields.
//
//   d=2
//   T=4
//   V=(1,0),(0,1)
//   alpha=1,1
//   beta=2,2
//   <blank line>
//   one block per direction: T^(d-1) rows of T characters '0' (alpha) or
//   '1' (beta), last coordinate fastest; blocks separated by a blank line.
#ifndef LATMIX_FIELD_IO_HPP
#define LATMIX_FIELD_IO_HPP

#include "latmix/lattice.hpp"

#include <string>

namespace latmix {

std::string serialize_field(const BondField& field);
BondField parse_field(const std::string& text);

void write_field_file(const std::string& path, const BondField& field);
BondField read_field_file(const std::string& path);

/// FNV-1a of the serialized field (windowed fields: of their raw labels), as
/// 16 hex digits.
std::string field_fingerprint(const BondField& field);

/// Shortest text that is %.17g-exact: 17 significant digits.
std::string format_real(double x);

std::string format_point(const Point& p);

}  // namespace latmix

#endif  // LATMIX_FIELD_IO_HPP

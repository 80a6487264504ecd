#include "latmix/field_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace latmix {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Parse, "field file: " + what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_int(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') fail("bad integer '" + s + "'");
  return v;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') fail("bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<Point> parse_directions(const std::string& s, int dim) {
  std::vector<Point> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto open = s.find('(', pos);
    if (open == std::string::npos) break;
    const auto close = s.find(')', open);
    if (close == std::string::npos) fail("unterminated direction tuple");
    const auto parts = split(s.substr(open + 1, close - open - 1), ',');
    if (static_cast<int>(parts.size()) != dim) fail("direction tuple has wrong length");
    Point p(dim);
    for (int k = 0; k < dim; ++k) p[k] = static_cast<int>(parse_int(parts[static_cast<std::size_t>(k)]));
    out.push_back(p);
    pos = close + 1;
  }
  if (out.empty()) fail("V lists no directions");
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_point(const Point& p) {
  std::string s = "(";
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(p[k]);
  }
  return s + ")";
}

std::string serialize_field(const BondField& field) {
  if (!field.is_periodic()) throw Error(ErrorKind::UnsupportedInput, "only periodic fields have a file format");
  const InteractionSet& V = field.interactions();
  std::ostringstream out;
  out << "d=" << V.dim() << "\nT=" << field.period() << "\nV=";
  for (std::size_t k = 0; k < V.size(); ++k) out << (k ? "," : "") << format_point(V.direction(k));
  out << "\nalpha=";
  for (std::size_t k = 0; k < V.size(); ++k) out << (k ? "," : "") << format_real(V.alpha(k));
  out << "\nbeta=";
  for (std::size_t k = 0; k < V.size(); ++k) out << (k ? "," : "") << format_real(V.beta(k));
  out << '\n';
  const auto T = static_cast<std::size_t>(field.period());
  for (std::size_t k = 0; k < V.size(); ++k) {
    out << '\n';
    const auto labels = field.labels(k);
    for (std::size_t n = 0; n < labels.size(); ++n) {
      out << (labels[n] == Bond::Beta ? '1' : '0');
      if ((n + 1) % T == 0) out << '\n';
    }
  }
  return out.str();
}

BondField parse_field(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = 0;
  long period = 0;
  std::string v_text, a_text, b_text;
  // header
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) {
      if (dim && period && !v_text.empty() && !a_text.empty() && !b_text.empty()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key=value header line, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "d") dim = static_cast<int>(parse_int(value));
    else if (key == "T") period = parse_int(value);
    else if (key == "V") v_text = value;
    else if (key == "alpha") a_text = value;
    else if (key == "beta") b_text = value;
    else fail("unknown header key '" + key + "'");
  }
  if (dim < 1 || dim > kMaxDim) fail("d must be 1..3");
  if (period < 1 || period > 4096) fail("T must be 1..4096");
  const auto dirs = parse_directions(v_text, dim);
  std::vector<double> alpha, beta;
  for (const auto& s : split(a_text, ',')) alpha.push_back(parse_real(s));
  for (const auto& s : split(b_text, ',')) beta.push_back(parse_real(s));
  InteractionSet V(dim, dirs, alpha, beta);

  const auto T = static_cast<std::size_t>(period);
  std::size_t rows = 1;
  for (int k = 1; k < dim; ++k) rows *= T;
  std::vector<std::vector<Bond>> labels(V.size());
  std::size_t k = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (k < V.size() && labels[k].size() == rows * T) ++k;
    if (k >= V.size()) fail("more label blocks than directions");
    if (line.size() != T) fail("label row must have T characters");
    for (char c : line) {
      if (c != '0' && c != '1') fail("labels must be '0' or '1'");
      labels[k].push_back(c == '1' ? Bond::Beta : Bond::Alpha);
    }
    if (labels[k].size() > rows * T) fail("label block too long");
  }
  for (const auto& block : labels)
    if (block.size() != rows * T) fail("label block has wrong size");
  return BondField::periodic(V, static_cast<int>(period), std::move(labels));
}

void write_field_file(const std::string& path, const BondField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << serialize_field(field);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

BondField read_field_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_field(ss.str());
}

std::string field_fingerprint(const BondField& field) {
  if (field.is_periodic()) return hex64(fnv1a64(serialize_field(field)));
  // windowed: window, outside label and the raw label blocks
  std::string bytes = "window " + format_point(field.window().lo()) + " " + format_point(field.window().extent()) +
                      (field.outside_label() == Bond::Beta ? " 1\n" : " 0\n");
  for (std::size_t k = 0; k < field.interactions().size(); ++k) {
    for (Bond b : field.labels(k)) bytes += b == Bond::Beta ? '1' : '0';
    bytes += '\n';
  }
  return hex64(fnv1a64(bytes));
}

}  // namespace latmix

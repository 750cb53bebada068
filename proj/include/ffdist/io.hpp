#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ffdist/counting.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/point_set.hpp"

namespace ffdist::io {

// Point-set CSV:
//   # p=<modulus>
//   x,y
//   <x>,<y>       one row per point, canonical (lexicographic) order

inline void write_points(std::ostream& os, const PointSet& A) {
  os << "# p=" << A.field().p() << "\nx,y\n";
  for (const Point2& v : A) os << v.x.value << ',' << v.y.value << '\n';
}

namespace detail {

inline u64 parse_u64(std::string_view s, std::size_t line_no) {
  u64 v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorKind::kParseError,
                "line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

inline std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline PointSet read_points(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || detail::trim_cr(line).rfind("# p=", 0) != 0) {
    throw Error(ErrorKind::kParseError, "line 1: expected '# p=<modulus>'");
  }
  const PrimeField F(detail::parse_u64(detail::trim_cr(line).substr(4), 1));
  if (!std::getline(is, line) || detail::trim_cr(line) != "x,y") {
    throw Error(ErrorKind::kParseError, "line 2: expected header 'x,y'");
  }
  std::vector<Point2> pts;
  std::size_t line_no = 2;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view row = detail::trim_cr(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorKind::kParseError,
                  "line " + std::to_string(line_no) + ": expected two fields");
    }
    const u64 x = detail::parse_u64(row.substr(0, comma), line_no);
    const u64 y = detail::parse_u64(row.substr(comma + 1), line_no);
    if (!F.in_range(x) || !F.in_range(y)) {
      throw Error(ErrorKind::kRangeError,
                  "line " + std::to_string(line_no) + ": coordinate >= p");
    }
    pts.push_back({Scalar{x}, Scalar{y}});
  }
  return PointSet(F, std::move(pts));
}

inline void save_csv(const std::string& path, const PointSet& A) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::kIoError, "cannot write " + path);
  write_points(os, A);
  if (!os) throw Error(ErrorKind::kIoError, "write failed: " + path);
}

inline PointSet load_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::kIoError, "cannot read " + path);
  return read_points(is);
}

/// Histogram CSV: header `t,count`, nonzero rows sorted by t.
inline void write_histogram(std::ostream& os, const DistanceHistogram& h) {
  os << "t,count\n";
  for (const auto& [t, c] : h.entries()) os << t << ',' << c << '\n';
}

/// Line-multiset CSV: header `a,b,c,mult`, canonical residues, sorted.
inline void write_lines(std::ostream& os, const LineMultiset& L) {
  os << "a,b,c,mult\n";
  for (const auto& [l, m] : L.sorted()) {
    os << l.a.value << ',' << l.b.value << ',' << l.c.value << ',' << m << '\n';
  }
}

inline std::string to_csv(const PointSet& A) {
  std::ostringstream os;
  write_points(os, A);
  return os.str();
}

}  // namespace ffdist::io

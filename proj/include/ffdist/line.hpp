#pragma once

#include <compare>
#include <functional>

#include "ffdist/field.hpp"

namespace ffdist {

/// The affine line a*X + b*Y + c = 0, stored canonically: the first nonzero of
/// (a, b) is 1.
///
/// Sign convention: a parameter vector (a, b, c) written as a*x + b*y - c = 0
/// corresponds to the stored line (a, b, -c).
struct Line {
  Scalar a;
  Scalar b;
  Scalar c;

  constexpr auto operator<=>(const Line&) const = default;

  /// Index of the parallel class, in [0, p]: b for lines (1, b, *), p for (0, 1, *).
  [[nodiscard]] u64 direction(const PrimeField& F) const {
    return a.value == 1 ? b.value : F.p();
  }
};

[[nodiscard]] inline Line canonicalize_line(const PrimeField& F, Scalar a, Scalar b,
                                            Scalar c) {
  if (a.value == 0 && b.value == 0) {
    throw Error(ErrorKind::kDegenerateLine, "(a, b) = (0, 0) defines no line");
  }
  const Scalar s = F.inv(a.value != 0 ? a : b);
  return {F.mul(s, a), F.mul(s, b), F.mul(s, c)};
}

[[nodiscard]] inline Line canonicalize_line(const PrimeField& F, const ParamVec3& v) {
  return canonicalize_line(F, v.u1, v.u2, v.u3);
}

[[nodiscard]] inline bool on_line(const PrimeField& F, const Line& l, Point2 v) {
  return F.add(F.add(F.mul(l.a, v.x), F.mul(l.b, v.y)), l.c).value == 0;
}

/// The line of direction class `dir` (see Line::direction) passing through v.
[[nodiscard]] inline Line line_in_direction(const PrimeField& F, u64 dir, Point2 v) {
  const Scalar a{dir == F.p() ? 0U : 1U};
  const Scalar b{dir == F.p() ? 1U : dir};
  return {a, b, F.neg(F.add(F.mul(a, v.x), F.mul(b, v.y)))};
}

[[nodiscard]] inline Line line_through(const PrimeField& F, Point2 p, Point2 q) {
  if (p == q) throw Error(ErrorKind::kSamePoint, "a line needs two distinct points");
  // Normal to the direction q - p.
  const Point2 d = F.sub(q, p);
  const Scalar a = d.y;
  const Scalar b = F.neg(d.x);
  const Scalar c = F.neg(F.add(F.mul(a, p.x), F.mul(b, p.y)));
  return canonicalize_line(F, a, b, c);
}

}  // namespace ffdist

template <>
struct std::hash<ffdist::Line> {
  std::size_t operator()(const ffdist::Line& l) const noexcept {
    std::uint64_t h = l.a.value;
    h = h * 0x9E3779B97F4A7C15ULL + l.b.value;
    h = h * 0xC2B2AE3D27D4EB4FULL + l.c.value;
    return std::hash<std::uint64_t>{}(h ^ (h >> 29U));
  }
};

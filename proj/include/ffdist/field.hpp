#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffdist/error.hpp"

namespace ffdist {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// A residue in [0, p). Arithmetic goes through PrimeField, which owns p.
struct Scalar {
  u64 value = 0;

  constexpr auto operator<=>(const Scalar&) const = default;
};

struct Point2 {
  Scalar x;
  Scalar y;

  constexpr auto operator<=>(const Point2&) const = default;
};

/// Parameter vector (u1, u2, u3) of the line u1*X + u2*Y + u3 = 0.
struct ParamVec3 {
  Scalar u1;
  Scalar u2;
  Scalar u3;

  constexpr auto operator<=>(const ParamVec3&) const = default;

  [[nodiscard]] constexpr bool degenerate() const {
    return u1.value == 0 && u2.value == 0;
  }
};

namespace detail {

constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Deterministic Miller-Rabin; these twelve bases are exact below 2^64.
constexpr bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  constexpr std::array<u64, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : kBases) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

/// F_p for an odd prime p. Cheap to copy; immutable after construction.
class PrimeField {
 public:
  explicit PrimeField(u64 p) : p_(p) {
    if (p == 2) {
      throw Error(ErrorKind::kUnsupportedModulus,
                  "p = 2 collapses x^2 + y^2 to (x + y)^2");
    }
    if (p < 3 || !detail::is_prime_u64(p)) {
      throw Error(ErrorKind::kNotPrime, std::to_string(p) + " is not prime");
    }
  }

  [[nodiscard]] u64 p() const noexcept { return p_; }
  [[nodiscard]] unsigned residue_class() const noexcept {
    return static_cast<unsigned>(p_ % 4);
  }

  bool operator==(const PrimeField& other) const = default;

  [[nodiscard]] Scalar reduce(i64 v) const {
    i64 r = v % static_cast<i64>(p_);
    if (r < 0) r += static_cast<i64>(p_);
    return Scalar{static_cast<u64>(r)};
  }
  [[nodiscard]] Scalar reduce_u(u64 v) const { return Scalar{v % p_}; }
  [[nodiscard]] bool in_range(u64 v) const noexcept { return v < p_; }

  [[nodiscard]] Scalar add(Scalar a, Scalar b) const {
    u64 s = a.value + b.value;
    return Scalar{s >= p_ ? s - p_ : s};
  }
  [[nodiscard]] Scalar sub(Scalar a, Scalar b) const {
    return Scalar{a.value >= b.value ? a.value - b.value : a.value + p_ - b.value};
  }
  [[nodiscard]] Scalar neg(Scalar a) const {
    return Scalar{a.value == 0 ? 0 : p_ - a.value};
  }
  [[nodiscard]] Scalar mul(Scalar a, Scalar b) const {
    return Scalar{detail::mul_mod(a.value, b.value, p_)};
  }
  [[nodiscard]] Scalar sqr(Scalar a) const { return mul(a, a); }
  [[nodiscard]] Scalar pow(Scalar a, u64 e) const {
    return Scalar{detail::pow_mod(a.value, e, p_)};
  }
  /// Inverse by Fermat; inv(0) is 0.
  [[nodiscard]] Scalar inv(Scalar a) const { return pow(a, p_ - 2); }

  /// Euler's criterion: +1 for nonzero squares, -1 for non-squares, 0 for 0.
  [[nodiscard]] int legendre(Scalar a) const {
    if (a.value == 0) return 0;
    return pow(a, (p_ - 1) / 2).value == 1 ? 1 : -1;
  }

  [[nodiscard]] Point2 point(i64 x, i64 y) const { return {reduce(x), reduce(y)}; }
  [[nodiscard]] Point2 add(Point2 a, Point2 b) const {
    return {add(a.x, b.x), add(a.y, b.y)};
  }
  [[nodiscard]] Point2 sub(Point2 a, Point2 b) const {
    return {sub(a.x, b.x), sub(a.y, b.y)};
  }
  [[nodiscard]] Point2 neg(Point2 a) const { return {neg(a.x), neg(a.y)}; }
  [[nodiscard]] Point2 scale(Scalar s, Point2 a) const {
    return {mul(s, a.x), mul(s, a.y)};
  }

 private:
  u64 p_;
};

/// ||v|| = v.x^2 + v.y^2.
[[nodiscard]] inline Scalar sqr_norm(const PrimeField& F, Point2 v) {
  return F.add(F.sqr(v.x), F.sqr(v.y));
}

/// ||a - b||, the distance of the plane over F_p.
[[nodiscard]] inline Scalar distance(const PrimeField& F, Point2 a, Point2 b) {
  return sqr_norm(F, F.sub(a, b));
}

/// A nonzero vector of norm zero. Exists exactly when -1 is a square (p = 1 mod 4).
[[nodiscard]] inline std::optional<Point2> isotropic_witness(const PrimeField& F) {
  if (F.residue_class() == 3) return std::nullopt;
  // i = g^((p-1)/4) squares to -1 for any non-residue g.
  for (u64 g = 2; g < F.p(); ++g) {
    if (F.legendre(Scalar{g}) == -1) {
      return Point2{Scalar{1}, F.pow(Scalar{g}, (F.p() - 1) / 4)};
    }
  }
  return std::nullopt;
}

/// Row-major 2x2 matrix over F_p.
struct Matrix2 {
  Scalar m00, m01, m10, m11;

  constexpr bool operator==(const Matrix2&) const = default;
};

[[nodiscard]] inline Matrix2 matrix(const PrimeField& F, i64 a, i64 b, i64 c, i64 d) {
  return {F.reduce(a), F.reduce(b), F.reduce(c), F.reduce(d)};
}

[[nodiscard]] inline Point2 apply(const PrimeField& F, const Matrix2& R, Point2 v) {
  return {F.add(F.mul(R.m00, v.x), F.mul(R.m01, v.y)),
          F.add(F.mul(R.m10, v.x), F.mul(R.m11, v.y))};
}

/// R^T R = I, by multiplying it out.
[[nodiscard]] inline bool is_orthogonal(const PrimeField& F, const Matrix2& R) {
  const Scalar c00 = F.add(F.sqr(R.m00), F.sqr(R.m10));
  const Scalar c01 = F.add(F.mul(R.m00, R.m01), F.mul(R.m10, R.m11));
  const Scalar c11 = F.add(F.sqr(R.m01), F.sqr(R.m11));
  return c00.value == 1 && c01.value == 0 && c11.value == 1;
}

/// Same predicate from the normal form of O(2, F_p): the first column (a, b)
/// has norm 1 and the second column is +-(-b, a).
[[nodiscard]] inline bool is_orthogonal_normal_form(const PrimeField& F,
                                                    const Matrix2& R) {
  if (sqr_norm(F, {R.m00, R.m10}).value != 1) return false;
  const bool rotation = R.m01 == F.neg(R.m10) && R.m11 == R.m00;
  const bool reflection = R.m01 == R.m10 && R.m11 == F.neg(R.m00);
  return rotation || reflection;
}

/// Maps every point to R*point + t. Throws NotOrthogonal unless R^T R = I.
[[nodiscard]] inline std::vector<Point2> apply_isometry(const PrimeField& F,
                                                        const Matrix2& R,
                                                        Point2 t,
                                                        std::span<const Point2> pts) {
  if (!is_orthogonal(F, R)) {
    throw Error(ErrorKind::kNotOrthogonal, "R^T R != I mod p");
  }
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (Point2 v : pts) out.push_back(F.add(apply(F, R, v), t));
  return out;
}

}  // namespace ffdist

template <>
struct std::hash<ffdist::Point2> {
  std::size_t operator()(const ffdist::Point2& v) const noexcept {
    return std::hash<ffdist::u64>{}(v.x.value * 0x9E3779B97F4A7C15ULL ^ v.y.value);
  }
};

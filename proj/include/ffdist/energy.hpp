#pragma once

#include <compare>
#include <functional>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffdist/counting.hpp"
#include "ffdist/field.hpp"
#include "ffdist/line.hpp"
#include "ffdist/point_set.hpp"
#include "ffdist/tally.hpp"

namespace ffdist {

struct Point3 {
  Scalar x;
  Scalar y;
  Scalar z;

  constexpr auto operator<=>(const Point3&) const = default;
};

template <typename P>
struct Weighted {
  P point;
  u64 weight = 1;

  constexpr auto operator<=>(const Weighted&) const = default;
};

/// Weighted points of the paraboloid z = x^2 + y^2 in F_p^3.
struct ParaboloidSet {
  PrimeField field;
  std::vector<Weighted<Point3>> points;

  [[nodiscard]] u64 total_weight() const {
    u64 s = 0;
    for (const auto& q : points) s = checked_add(s, q.weight);
    return s;
  }
};

/// Weighted planar points, used for the parabola lift (a, b) -> (b, a^2 + b^2).
struct WeightedPoints2 {
  PrimeField field;
  std::vector<Weighted<Point2>> points;
};

namespace detail {

template <typename P>
std::vector<Weighted<P>> accumulate(std::vector<P> raw) {
  std::map<P, u64> acc;
  for (const P& q : raw) ++acc[q];
  std::vector<Weighted<P>> out;
  out.reserve(acc.size());
  for (const auto& [q, w] : acc) out.push_back({q, w});
  return out;
}

}  // namespace detail

/// (x, y) -> (x, y, x^2 + y^2). Injective, so every weight is 1.
[[nodiscard]] inline ParaboloidSet paraboloid_lift(const PointSet& A) {
  const PrimeField& F = A.field();
  std::vector<Point3> raw;
  raw.reserve(A.size());
  for (const Point2& v : A) raw.push_back({v.x, v.y, sqr_norm(F, v)});
  return {F, detail::accumulate(std::move(raw))};
}

/// (a, b) -> (b, a^2 + b^2). The points (a, b) and (-a, b) collide, so weights
/// record how many planar points share an image.
[[nodiscard]] inline WeightedPoints2 parabola_lift(const PointSet& P2) {
  const PrimeField& F = P2.field();
  std::vector<Point2> raw;
  raw.reserve(P2.size());
  for (const Point2& v : P2) raw.push_back({v.y, sqr_norm(F, v)});
  return {F, detail::accumulate(std::move(raw))};
}

/// The line Y = 2uX - u^2 + v. It holds the lift of (a, b) exactly when
/// a^2 + (b - u)^2 = v.
[[nodiscard]] inline Line lifted_circle_line(const PrimeField& F, Scalar u, Scalar v) {
  // 2u X - Y + (v - u^2) = 0
  return canonicalize_line(F, F.add(u, u), F.neg(Scalar{1}), F.sub(v, F.sqr(u)));
}

/// Weighted incidences between the lifted set and one line.
[[nodiscard]] inline u64 weighted_incidences(const WeightedPoints2& lifted, const Line& l) {
  u64 s = 0;
  for (const auto& q : lifted.points) {
    if (on_line(lifted.field, l, q.point)) s = checked_add(s, q.weight);
  }
  return s;
}

struct Diff3 {
  u64 dx, dy, dz;
  bool operator==(const Diff3&) const = default;
};

struct Diff3Hash {
  std::size_t operator()(const Diff3& d) const noexcept {
    u64 h = d.dx * 0x9E3779B97F4A7C15ULL;
    h = (h ^ d.dy) * 0xC2B2AE3D27D4EB4FULL;
    h = (h ^ d.dz) * 0x165667B19E3779F9ULL;
    return static_cast<std::size_t>(h ^ (h >> 31U));
  }
};

/// E(Q) = #{(a, b, c, d) in Q^4 : a - b = c - d}, weighted. Computed as
/// sum_d c_d^2 with c_d the weighted number of ordered pairs with difference d.
[[nodiscard]] inline u64 additive_energy(const ParaboloidSet& Q) {
  const PrimeField& F = Q.field;
  std::unordered_map<Diff3, u64, Diff3Hash> diffs;
  diffs.reserve(Q.points.size() * Q.points.size());
  for (const auto& a : Q.points) {
    for (const auto& b : Q.points) {
      const Diff3 d{F.sub(a.point.x, b.point.x).value, F.sub(a.point.y, b.point.y).value,
                    F.sub(a.point.z, b.point.z).value};
      auto& c = diffs[d];
      c = checked_add(c, checked_mul(a.weight, b.weight));
    }
  }
  u64 e = 0;
  for (const auto& [d, c] : diffs) e = checked_add(e, checked_mul(c, c));
  return e;
}

/// Quadruple-loop oracle for additive_energy. O(|Q|^4); meant for |Q| <= 40.
[[nodiscard]] inline u64 additive_energy_brute(const ParaboloidSet& Q) {
  const PrimeField& F = Q.field;
  u64 e = 0;
  for (const auto& a : Q.points) {
    for (const auto& b : Q.points) {
      for (const auto& c : Q.points) {
        for (const auto& d : Q.points) {
          // a - b = c - d  <=>  a + d = b + c
          if (F.add(a.point.x, d.point.x) == F.add(b.point.x, c.point.x) &&
              F.add(a.point.y, d.point.y) == F.add(b.point.y, c.point.y) &&
              F.add(a.point.z, d.point.z) == F.add(b.point.z, c.point.z)) {
            e += a.weight * b.weight * c.weight * d.weight;
          }
        }
      }
    }
  }
  return e;
}

struct TSum {
  u64 by_energy = 0;  ///< sum_x E(P2, x)
  u64 by_lift = 0;    ///< sum_(x, lambda) of squared weighted lifted-line incidences
};

/// T for P1 on the vertical axis, computed by both routes. The two agree on
/// every input; callers compare them.
[[nodiscard]] inline TSum t_sum(const PointSet& P1, const PointSet& P2) {
  require_same_field(P1, P2);
  require_on_axis(P1);
  const PrimeField& F = P1.field();
  TSum out;
  for (const Point2& x : P1) out.by_energy = checked_add(out.by_energy, bisector_energy(P2, x.y));

  // A lifted point (b, s) meets Y = 2uX - u^2 + lambda for the single lambda
  // s - 2ub + u^2, so each (u, point) contributes its weight to one line.
  const WeightedPoints2 lifted = parabola_lift(P2);
  Tally per_line(F.p());
  for (const Point2& x : P1) {
    const Scalar u = x.y;
    per_line.clear();
    for (const auto& q : lifted.points) {
      const Scalar lambda =
          F.add(F.sub(q.point.y, F.mul(F.add(u, u), q.point.x)), F.sqr(u));
      per_line.add(lambda.value, q.weight);
    }
    out.by_lift = checked_add(out.by_lift, per_line.sum_of_squares());
  }
  return out;
}

}  // namespace ffdist

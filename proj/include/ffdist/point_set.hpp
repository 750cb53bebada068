#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffdist/field.hpp"
#include "ffdist/line.hpp"
#include "ffdist/rng.hpp"

namespace ffdist {

/// A finite set of distinct points of F_p^2, kept in lexicographic order.
class PointSet {
 public:
  explicit PointSet(PrimeField F) : field_(F) {}

  /// Throws DuplicatePoint if `pts` repeats a point, RangeError if a coordinate
  /// is not reduced.
  PointSet(PrimeField F, std::vector<Point2> pts) : field_(F), points_(std::move(pts)) {
    for (const Point2& v : points_) {
      if (!F.in_range(v.x.value) || !F.in_range(v.y.value)) {
        throw Error(ErrorKind::kRangeError, "coordinate not reduced mod p");
      }
    }
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
      throw Error(ErrorKind::kDuplicatePoint, "point sets hold distinct points");
    }
  }

  /// Builds a set from possibly repeated points, keeping one copy of each.
  static PointSet deduplicated(PrimeField F, std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return PointSet(F, std::move(pts));
  }

  [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
  [[nodiscard]] std::span<const Point2> points() const noexcept { return points_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
  [[nodiscard]] const Point2& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] auto begin() const { return points_.begin(); }
  [[nodiscard]] auto end() const { return points_.end(); }

  [[nodiscard]] bool contains(Point2 v) const {
    return std::binary_search(points_.begin(), points_.end(), v);
  }

  bool operator==(const PointSet&) const = default;

 private:
  PrimeField field_;
  std::vector<Point2> points_;
};

inline void require_same_field(const PointSet& a, const PointSet& b) {
  if (a.field() != b.field()) {
    throw Error(ErrorKind::kFieldMismatch, "point sets live over different fields");
  }
}

namespace detail {

// Sparse partial Fisher-Yates: n distinct values of [0, universe).
inline std::vector<u64> sample_indices(Engine& eng, u64 universe, u64 n) {
  std::unordered_map<u64, u64> swapped;
  auto slot = [&](u64 i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<u64> out;
  out.reserve(n);
  for (u64 i = 0; i < n; ++i) {
    const u64 j = i + uniform_below(eng, universe - i);
    out.push_back(slot(j));
    swapped[j] = slot(i);
  }
  return out;
}

}  // namespace detail

/// n distinct points sampled uniformly without replacement from F_p^2.
[[nodiscard]] inline PointSet gen_random(const PrimeField& F, u64 n, u64 seed) {
  const u64 p = F.p();
  if (p > (u64{1} << 32U) || n > p * p) {
    throw Error(ErrorKind::kTooLarge, "cannot draw " + std::to_string(n) +
                                          " distinct points from F_p^2");
  }
  Engine eng(seed);
  std::vector<Point2> pts;
  pts.reserve(n);
  for (u64 cell : detail::sample_indices(eng, p * p, n)) {
    pts.push_back({Scalar{cell / p}, Scalar{cell % p}});
  }
  return PointSet(F, std::move(pts));
}

[[nodiscard]] inline PointSet gen_product(const PrimeField& F, std::span<const Scalar> xs,
                                          std::span<const Scalar> ys) {
  std::vector<Point2> pts;
  pts.reserve(xs.size() * ys.size());
  for (Scalar x : xs) {
    for (Scalar y : ys) pts.push_back({F.reduce_u(x.value), F.reduce_u(y.value)});
  }
  return PointSet::deduplicated(F, std::move(pts));
}

/// n distinct points on the vertical axis {0} x F_p.
[[nodiscard]] inline PointSet gen_line_subset(const PrimeField& F, u64 n, u64 seed) {
  if (n > F.p()) {
    throw Error(ErrorKind::kTooLarge, "the axis holds only p points");
  }
  Engine eng(seed);
  std::vector<Point2> pts;
  pts.reserve(n);
  for (u64 y : detail::sample_indices(eng, F.p(), n)) pts.push_back({Scalar{0}, Scalar{y}});
  return PointSet(F, std::move(pts));
}

/// All v with ||v - center|| = r.
[[nodiscard]] inline PointSet gen_circle(const PrimeField& F, Point2 center, Scalar r) {
  std::vector<Point2> pts;
  for (u64 dx = 0; dx < F.p(); ++dx) {
    for (u64 dy = 0; dy < F.p(); ++dy) {
      const Point2 d{Scalar{dx}, Scalar{dy}};
      if (sqr_norm(F, d) == r) pts.push_back(F.add(center, d));
    }
  }
  return PointSet(F, std::move(pts));
}

[[nodiscard]] inline PointSet gen_union(std::span<const PointSet> parts) {
  if (parts.empty()) throw Error(ErrorKind::kTooSmall, "union of no sets");
  std::vector<Point2> pts;
  for (const PointSet& s : parts) {
    require_same_field(parts.front(), s);
    pts.insert(pts.end(), s.begin(), s.end());
  }
  return PointSet::deduplicated(parts.front().field(), std::move(pts));
}

struct Collinearity {
  std::size_t count = 0;
  Line line;
};

/// The most points of A on one line, with a witness line. O(|A|^2).
[[nodiscard]] inline Collinearity max_collinearity(const PointSet& A) {
  if (A.size() < 2) throw Error(ErrorKind::kTooSmall, "need at least two points");
  const PrimeField& F = A.field();
  Collinearity best{0, {}};
  std::unordered_map<u64, std::size_t> by_direction;
  for (std::size_t i = 0; i < A.size(); ++i) {
    by_direction.clear();
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      const Line l = line_through(F, A[i], A[j]);
      const std::size_t k = ++by_direction[l.direction(F)] + 1;
      if (k > best.count) best = {k, l};
    }
  }
  return best;
}

}  // namespace ffdist

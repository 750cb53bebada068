#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "ffdist/field.hpp"
#include "ffdist/ntt.hpp"
#include "ffdist/point_set.hpp"
#include "ffdist/tally.hpp"

namespace ffdist {

/// t -> number of ordered pairs at distance t. Stores nonzero entries only,
/// sorted by t.
class DistanceHistogram {
 public:
  DistanceHistogram(PrimeField F, std::vector<std::pair<u64, u64>> entries)
      : field_(F), entries_(std::move(entries)) {}

  DistanceHistogram(PrimeField F, const Tally& tally) : field_(F), entries_(tally.sorted()) {}

  [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
  [[nodiscard]] const std::vector<std::pair<u64, u64>>& entries() const noexcept {
    return entries_;
  }

  [[nodiscard]] u64 count(Scalar t) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<u64, u64>{t.value, 0});
    return it != entries_.end() && it->first == t.value ? it->second : 0;
  }

  /// Number of distinct values attained.
  [[nodiscard]] std::size_t support_size() const noexcept { return entries_.size(); }

  [[nodiscard]] std::vector<Scalar> support() const {
    std::vector<Scalar> out;
    out.reserve(entries_.size());
    for (const auto& [t, c] : entries_) out.push_back(Scalar{t});
    return out;
  }

  [[nodiscard]] u64 total() const {
    u64 s = 0;
    for (const auto& e : entries_) s = checked_add(s, e.second);
    return s;
  }

  [[nodiscard]] u64 sum_of_squares() const {
    u64 s = 0;
    for (const auto& e : entries_) s = checked_add(s, checked_mul(e.second, e.second));
    return s;
  }

  bool operator==(const DistanceHistogram&) const = default;

 private:
  PrimeField field_;
  std::vector<std::pair<u64, u64>> entries_;
};

/// nu(t) over all ordered pairs (x, y) in A^2, x = y included. O(|A|^2).
[[nodiscard]] inline DistanceHistogram nu_naive(const PointSet& A) {
  const PrimeField& F = A.field();
  Tally tally(F.p());
  if (!A.empty()) tally.add(0, A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      tally.add(distance(F, A[i], A[j]).value, 2);
    }
  }
  return {F, tally};
}

/// Largest p accepted by nu_fast. The transform grid is bit_ceil(2p - 1)^2
/// words, 32 MiB at the limit.
inline constexpr u64 kFastNuMaxPrime = 1024;

/// Same histogram as nu_naive, from the autocorrelation of A's indicator over
/// (Z_p)^2. The exact Goldilocks transform makes every count exact; the
/// totals are still checked against |A| and |A|^2 before returning.
[[nodiscard]] inline DistanceHistogram nu_fast(const PointSet& A) {
  const PrimeField& F = A.field();
  const u64 p = F.p();
  if (p > kFastNuMaxPrime) {
    throw Error(ErrorKind::kBudgetExceeded,
                "nu_fast supports p <= " + std::to_string(kFastNuMaxPrime));
  }
  if (A.empty()) return {F, std::vector<std::pair<u64, u64>>{}};
  // Padding to >= 2p - 1 keeps the cyclic correlation free of wraparound.
  const std::size_t n = std::bit_ceil(static_cast<std::size_t>(2 * p - 1));
  std::vector<u64> grid(n * n, 0);
  for (const Point2& v : A) grid[v.x.value * n + v.y.value] = 1;
  const std::vector<u64> corr = ntt::autocorrelate_2d(std::move(grid), n);

  Tally tally(p);
  u64 seen = 0;
  const auto signed_p = static_cast<i64>(p);
  for (i64 dx = -(signed_p - 1); dx < signed_p; ++dx) {
    const std::size_t row = static_cast<std::size_t>(dx < 0 ? dx + static_cast<i64>(n) : dx);
    const Scalar sx = F.sqr(F.reduce(dx));
    for (i64 dy = -(signed_p - 1); dy < signed_p; ++dy) {
      const std::size_t col = static_cast<std::size_t>(dy < 0 ? dy + static_cast<i64>(n) : dy);
      const u64 c = corr[row * n + col];
      if (c == 0) continue;
      tally.add(F.add(sx, F.sqr(F.reduce(dy))).value, c);
      seen = checked_add(seen, c);
    }
  }
  const u64 size = A.size();
  if (seen != size * size || corr[0] != size) {
    throw Error(ErrorKind::kTransformCheckFailed,
                "autocorrelation totals disagree with |A| and |A|^2");
  }
  return {F, tally};
}

/// Distance set Delta(A). Contains 0 whenever A is nonempty, unless
/// include_zero is false, in which case only pairs x != y contribute.
[[nodiscard]] inline std::vector<Scalar> distance_set(const PointSet& A,
                                                      bool include_zero = true) {
  if (include_zero) return nu_naive(A).support();
  const PrimeField& F = A.field();
  Tally tally(F.p());
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i + 1; j < A.size(); ++j) tally.add(distance(F, A[i], A[j]).value);
  }
  std::vector<Scalar> out;
  for (const auto& [t, c] : tally.sorted()) out.push_back(Scalar{t});
  return out;
}

/// c(t) = #{(a, b) in P1 x P2 : ||a - b|| = t}.
[[nodiscard]] inline DistanceHistogram cross_histogram(const PointSet& P1, const PointSet& P2) {
  require_same_field(P1, P2);
  const PrimeField& F = P1.field();
  Tally tally(F.p());
  for (const Point2& a : P1) {
    for (const Point2& b : P2) tally.add(distance(F, a, b).value);
  }
  return {F, tally};
}

[[nodiscard]] inline std::vector<Scalar> distance_set_between(const PointSet& P1,
                                                              const PointSet& P2) {
  return cross_histogram(P1, P2).support();
}

struct TripleCount {
  u64 total = 0;
  u64 nondegenerate = 0;

  bool operator==(const TripleCount&) const = default;
};

/// Ordered triples (z, x, y) in A^3 with ||z - x|| = ||z - y||, as
/// sum_z sum_t r_z(t)^2. The nondegenerate count drops the |A|^2 triples with x = y.
[[nodiscard]] inline TripleCount isosceles_triples(const PointSet& A) {
  const PrimeField& F = A.field();
  Tally r(F.p());
  u64 total = 0;
  for (const Point2& z : A) {
    r.clear();
    for (const Point2& a : A) r.add(distance(F, z, a).value);
    total = checked_add(total, r.sum_of_squares());
  }
  const u64 n = A.size();
  return {total, total - n * n};
}

/// sum_t nu(t)^2, the number of distance quadruples.
[[nodiscard]] inline u64 distance_quadruples(const PointSet& A) {
  return nu_naive(A).sum_of_squares();
}

/// N = sum_t c(t)^2 over pairs of P1 x P2.
[[nodiscard]] inline u64 cross_quadruples(const PointSet& P1, const PointSet& P2) {
  return cross_histogram(P1, P2).sum_of_squares();
}

/// r_{P2}(x, lambda): points (a, b) of P2 with a^2 + (b - x)^2 = lambda, i.e. on
/// the circle of radius lambda about (0, x).
[[nodiscard]] inline u64 circle_count(const PointSet& P2, Scalar x, Scalar lambda) {
  const PrimeField& F = P2.field();
  const Point2 center{Scalar{0}, F.reduce_u(x.value)};
  u64 count = 0;
  for (const Point2& v : P2) count += distance(F, v, center) == lambda ? 1 : 0;
  return count;
}

/// E(P2, x) = sum_lambda r_{P2}(x, lambda)^2: ordered pairs of P2 equidistant from (0, x).
[[nodiscard]] inline u64 bisector_energy(const PointSet& P2, Scalar x) {
  const PrimeField& F = P2.field();
  const Point2 center{Scalar{0}, F.reduce_u(x.value)};
  Tally r(F.p());
  for (const Point2& v : P2) r.add(distance(F, v, center).value);
  return r.sum_of_squares();
}

inline void require_on_axis(const PointSet& P1) {
  for (const Point2& v : P1) {
    if (v.x.value != 0) {
      throw Error(ErrorKind::kNotOnAxis, "P1 must lie on the vertical axis {0} x F_p");
    }
  }
}

}  // namespace ffdist

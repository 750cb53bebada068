#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffdist/field.hpp"
#include "ffdist/line.hpp"
#include "ffdist/point_set.hpp"
#include "ffdist/report.hpp"
#include "ffdist/rng.hpp"
#include "ffdist/tally.hpp"

namespace ffdist {

/// Canonical lines with positive multiplicities.
class LineMultiset {
 public:
  explicit LineMultiset(PrimeField F) : field_(F) {}

  LineMultiset(PrimeField F, const std::vector<Line>& distinct) : field_(F) {
    for (const Line& l : distinct) add(l);
  }

  void add(const Line& l, u64 multiplicity = 1) {
    if (multiplicity == 0) return;
    auto& m = entries_[l];
    m = checked_add(m, multiplicity);
    total_ = checked_add(total_, multiplicity);
  }

  [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
  [[nodiscard]] const std::unordered_map<Line, u64>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t distinct_count() const noexcept { return entries_.size(); }
  [[nodiscard]] u64 total_multiplicity() const noexcept { return total_; }

  [[nodiscard]] u64 multiplicity(const Line& l) const {
    auto it = entries_.find(l);
    return it == entries_.end() ? 0 : it->second;
  }

  [[nodiscard]] bool all_distinct() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return e.second == 1; });
  }

  [[nodiscard]] std::vector<std::pair<Line, u64>> sorted() const {
    std::vector<std::pair<Line, u64>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  PrimeField field_;
  std::unordered_map<Line, u64> entries_;
  u64 total_ = 0;
};

/// f(l) = |l cap P| for every distinct line of L. Each point lies on exactly
/// one line per parallel class, so the cost is |P| times the number of
/// directions present in L.
[[nodiscard]] inline std::unordered_map<Line, u64> richness(const PointSet& P,
                                                            const LineMultiset& L) {
  if (P.field() != L.field()) {
    throw Error(ErrorKind::kFieldMismatch, "points and lines over different fields");
  }
  const PrimeField& F = P.field();
  std::unordered_map<Line, u64> f;
  f.reserve(L.distinct_count());
  std::set<u64> directions;
  for (const auto& [l, m] : L.entries()) {
    f.emplace(l, 0);
    directions.insert(l.direction(F));
  }
  for (const Point2& v : P) {
    for (u64 dir : directions) {
      auto it = f.find(line_in_direction(F, dir, v));
      if (it != f.end()) ++it->second;
    }
  }
  return f;
}

/// I(P, L) = sum over distinct l of f(l) * m(l).
[[nodiscard]] inline u64 incidences(const PointSet& P, const LineMultiset& L) {
  const auto f = richness(P, L);
  u64 total = 0;
  for (const auto& [l, m] : L.entries()) total = checked_add(total, checked_mul(f.at(l), m));
  return total;
}

/// Per-line membership test over every (point, line) pair. Oracle for incidences.
[[nodiscard]] inline u64 incidences_naive(const PointSet& P, const LineMultiset& L) {
  u64 total = 0;
  for (const auto& [l, m] : L.entries()) {
    for (const Point2& v : P) {
      if (on_line(P.field(), l, v)) total += m;
    }
  }
  return total;
}

/// Line number `index` in [0, p^2 + p): (1, index / p, index % p) for index < p^2,
/// (0, 1, index - p^2) after.
[[nodiscard]] inline Line line_by_index(const PrimeField& F, u64 index) {
  const u64 p = F.p();
  if (index < p * p) return {Scalar{1}, Scalar{index / p}, Scalar{index % p}};
  return {Scalar{0}, Scalar{1}, Scalar{index - p * p}};
}

[[nodiscard]] inline std::vector<Line> all_lines(const PrimeField& F) {
  std::vector<Line> out;
  const u64 count = F.p() * F.p() + F.p();
  out.reserve(count);
  for (u64 i = 0; i < count; ++i) out.push_back(line_by_index(F, i));
  return out;
}

/// n distinct lines drawn uniformly without replacement.
[[nodiscard]] inline std::vector<Line> random_lines(const PrimeField& F, u64 n, u64 seed) {
  const u64 count = F.p() * F.p() + F.p();
  if (n > count) throw Error(ErrorKind::kTooLarge, "F_p^2 has only p^2 + p lines");
  Engine eng(seed);
  std::vector<Line> out;
  out.reserve(n);
  for (u64 i : detail::sample_indices(eng, count, n)) out.push_back(line_by_index(F, i));
  return out;
}

struct KstRecord {
  u64 incidences = 0;
  u64 m = 0;  ///< points
  u64 n = 0;  ///< lines
  double bound_points = 0;  ///< sqrt(m) * n + m
  double bound_lines = 0;   ///< sqrt(n) * m + n
  Check check;
};

namespace detail {

// I <= sqrt(s) * t + s, decided exactly: I <= s, or (I - s)^2 <= s * t^2.
inline bool below_sqrt_bound(u64 I, u64 s, u64 t) {
  if (I <= s) return true;
  const u128 excess = I - s;
  return excess * excess <= static_cast<u128>(s) * t * t;
}

}  // namespace detail

/// Cauchy-Schwarz incidence bound I <= min(sqrt(m) n + m, sqrt(n) m + n),
/// constant 1, distinct lines only. Decided in exact integer arithmetic.
[[nodiscard]] inline KstRecord kst_check(const PointSet& P, const LineMultiset& L) {
  if (!L.all_distinct()) {
    throw Error(ErrorKind::kMultisetNotAllowed, "the bound needs distinct lines");
  }
  KstRecord r;
  r.incidences = incidences(P, L);
  r.m = P.size();
  r.n = L.distinct_count();
  const auto m = static_cast<double>(r.m);
  const auto n = static_cast<double>(r.n);
  r.bound_points = std::sqrt(m) * n + m;
  r.bound_lines = std::sqrt(n) * m + n;
  const bool holds = detail::below_sqrt_bound(r.incidences, r.m, r.n) &&
                     detail::below_sqrt_bound(r.incidences, r.n, r.m);
  const std::string ms = std::to_string(r.m);
  const std::string ns = std::to_string(r.n);
  const std::string rhs =
      "min(sqrt(" + ms + ")*" + ns + "+" + ms + ", sqrt(" + ns + ")*" + ms + "+" + ns + ")";
  r.check = {"kst", std::to_string(r.incidences), "<=", rhs, holds};
  return r;
}

/// kst_check that throws AssertionFailed on violation.
inline KstRecord kst_assert(const PointSet& P, const LineMultiset& L) {
  KstRecord r = kst_check(P, L);
  enforce(r.check);
  return r;
}

struct SdzRecord {
  u64 incidences = 0;
  u64 m = 0;
  u64 n = 0;
  double bound = 0;  ///< m^(11/15) n^(11/15)
  double ratio = 0;  ///< incidences / bound
  bool lower_range = false;  ///< m^(7/8) <= n
  bool upper_range = false;  ///< n <= m^(8/7)
  bool field_size = false;   ///< m^-2 n^13 <= p^15
};

/// Incidences against m^(11/15) n^(11/15). The asymptotic constant is
/// unknown, so this only reports; hypotheses are evaluated in long double.
[[nodiscard]] inline SdzRecord sdz_report(const PointSet& P, const LineMultiset& L) {
  SdzRecord r;
  r.incidences = incidences(P, L);
  r.m = P.size();
  r.n = L.distinct_count();
  const long double m = r.m;
  const long double n = r.n;
  const long double bound = std::pow(m * n, 11.0L / 15.0L);
  r.bound = static_cast<double>(bound);
  r.ratio = bound > 0 ? static_cast<double>(r.incidences / bound) : 0.0;
  r.lower_range = std::pow(m, 7.0L / 8.0L) <= n;
  r.upper_range = n <= std::pow(m, 8.0L / 7.0L);
  if (r.m > 0 && r.n > 0) {
    r.field_size = 13.0L * std::log(n) - 2.0L * std::log(m) <=
                   15.0L * std::log(static_cast<long double>(P.field().p()));
  }
  return r;
}

}  // namespace ffdist

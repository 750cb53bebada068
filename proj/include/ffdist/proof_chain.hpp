#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ffdist/counting.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/field.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/line.hpp"
#include "ffdist/point_set.hpp"
#include "ffdist/report.hpp"

namespace ffdist {

// ---------------------------------------------------------------------------
// Perpendicular-bisector line system
// ---------------------------------------------------------------------------

/// (x - y, ||x|| - ||y||): apexes z with ||z - x|| = ||z - y|| are exactly the
/// z for which -2z lies on the line with this parameter vector.
[[nodiscard]] inline ParamVec3 bisector_vector(const PrimeField& F, Point2 x, Point2 y) {
  const Point2 d = F.sub(x, y);
  return {d.x, d.y, F.sub(sqr_norm(F, x), sqr_norm(F, y))};
}

/// One distinct generator vector of a line, as lambda times the canonical
/// (a, b, c), plus the first ordered pair (x, y) that produced it.
struct Generator {
  std::size_t x_index = 0;
  std::size_t y_index = 0;
  Scalar lambda;
};

struct BisectorLine {
  Line line;
  u64 multiplicity = 0;               ///< m(l): generating ordered pairs
  std::vector<Generator> generators;  ///< size m'(l): distinct vectors, by lambda
};

class PerpBisectorSystem {
 public:
  PerpBisectorSystem(PointSet source, PointSet shifted, std::vector<BisectorLine> lines)
      : source_(std::move(source)), shifted_(std::move(shifted)), lines_(std::move(lines)) {}

  [[nodiscard]] const PointSet& source() const noexcept { return source_; }
  /// -2A
  [[nodiscard]] const PointSet& shifted_points() const noexcept { return shifted_; }
  /// Sorted by line.
  [[nodiscard]] const std::vector<BisectorLine>& lines() const noexcept { return lines_; }

  [[nodiscard]] LineMultiset multiset() const {
    LineMultiset L(source_.field());
    for (const auto& bl : lines_) L.add(bl.line, bl.multiplicity);
    return L;
  }

  [[nodiscard]] u64 total_multiplicity() const {
    u64 s = 0;
    for (const auto& bl : lines_) s += bl.multiplicity;
    return s;
  }

  /// The generator's parameter vector, recomputed from its source pair.
  [[nodiscard]] ParamVec3 vector_of(const Generator& g) const {
    return bisector_vector(source_.field(), source_[g.x_index], source_[g.y_index]);
  }

  /// The line with the most distinct generator vectors (first such in line order).
  [[nodiscard]] const BisectorLine& max_m_prime_line() const {
    return *std::max_element(lines_.begin(), lines_.end(), [](const auto& a, const auto& b) {
      return a.generators.size() < b.generators.size();
    });
  }

 private:
  PointSet source_;
  PointSet shifted_;
  std::vector<BisectorLine> lines_;
};

/// Every ordered pair x != y contributes its bisector line with multiplicity 1.
[[nodiscard]] inline PerpBisectorSystem build_perp_system(const PointSet& A) {
  if (A.size() < 2) throw Error(ErrorKind::kTooSmall, "need at least two points");
  const PrimeField& F = A.field();

  struct Record {
    Line line;
    Scalar lambda;
    std::size_t i, j;
  };
  std::vector<Record> records;
  records.reserve(A.size() * (A.size() - 1));
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = 0; j < A.size(); ++j) {
      if (i == j) continue;
      const ParamVec3 v = bisector_vector(F, A[i], A[j]);
      // The canonical line is v scaled by the inverse of v's first nonzero of
      // (u1, u2), so that coordinate is v's scale relative to the canonical form.
      records.push_back({canonicalize_line(F, v), v.u1.value != 0 ? v.u1 : v.u2, i, j});
    }
  }
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    return std::tie(a.line, a.lambda, a.i, a.j) < std::tie(b.line, b.lambda, b.i, b.j);
  });

  std::vector<BisectorLine> lines;
  for (const Record& r : records) {
    if (lines.empty() || lines.back().line != r.line) lines.push_back({r.line, 0, {}});
    BisectorLine& bl = lines.back();
    ++bl.multiplicity;
    if (bl.generators.empty() || bl.generators.back().lambda != r.lambda) {
      bl.generators.push_back({r.i, r.j, r.lambda});
    }
  }

  std::vector<Point2> shifted;
  shifted.reserve(A.size());
  const Scalar minus_two = F.reduce(-2);
  for (const Point2& v : A) shifted.push_back(F.scale(minus_two, v));
  return {A, PointSet(F, std::move(shifted)), std::move(lines)};
}

// ---------------------------------------------------------------------------
// Exact verifiers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string u128_text(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

/// num/den in lowest terms; integers print without a denominator.
inline std::string ratio_text(u128 num, u64 den) {
  u128 a = num;
  u128 b = den;
  while (b != 0) a = std::exchange(b, a % b);
  if (den / a == 1) return u128_text(num / a);
  return u128_text(num / a) + "/" + u128_text(den / a);
}

inline u128 pow4(u64 n) {
  const u128 sq = static_cast<u128>(n) * n;
  return sq * sq;
}

}  // namespace detail

/// Nondegenerate isosceles triples = I(-2A, L). The |A|^2 triples with x = y
/// have no line and are reported separately.
[[nodiscard]] inline ChainReport verify_incidence_identity(const PointSet& A) {
  const PerpBisectorSystem sys = build_perp_system(A);
  const TripleCount triples = isosceles_triples(A);
  const u64 I = incidences(sys.shifted_points(), sys.multiset());
  ChainReport r;
  r.set("triples", triples.total)
      .set("triples_nondegenerate", triples.nondegenerate)
      .set("triples_diagonal", triples.total - triples.nondegenerate)
      .set("incidences", I)
      .add(enforce(Check{"incidence_identity", std::to_string(triples.nondegenerate), "=",
                         std::to_string(I), triples.nondegenerate == I}));
  return r;
}

/// |A|^4 / |Delta(A)| <= sum nu^2 <= |A| * triples, compared by cross-multiplication.
[[nodiscard]] inline ChainReport cs_chain(const PointSet& A) {
  if (A.empty()) throw Error(ErrorKind::kTooSmall, "need at least one point");
  const DistanceHistogram nu = nu_naive(A);
  const u64 n = A.size();
  const u64 delta = nu.support_size();
  const u64 sigma = nu.sum_of_squares();
  const u64 triples = isosceles_triples(A).total;
  const u128 n4 = detail::pow4(n);
  ChainReport r;
  r.set("n", n).set("delta", delta).set("sigma_nu_sq", sigma).set("triples", triples);
  r.add(enforce(Check{"cs_left", detail::ratio_text(n4, delta), "<=", std::to_string(sigma),
                      n4 <= static_cast<u128>(delta) * sigma}));
  const u128 right = static_cast<u128>(n) * triples;
  r.add(enforce(Check{"cs_right", std::to_string(sigma), "<=",
                      std::to_string(static_cast<u64>(right)), sigma <= right}));
  return r;
}

struct GeneratorAudit {
  bool proportional = true;      ///< every v_i = mu_i * v_1
  bool distinct_scalars = true;  ///< the mu_i are pairwise distinct
  bool scaled_norms = true;      ///< ||x_i - y_i|| = mu_i^2 ||x_1 - y_1||
  std::vector<Scalar> scalars;   ///< mu_i, with mu_1 = 1
};

/// Re-derives the dilation structure of one line from the source points:
/// all distinct generator vectors are multiples of the first one, with
/// distinct multipliers whose squares scale the pair distances.
[[nodiscard]] inline GeneratorAudit audit_generators(const PerpBisectorSystem& sys,
                                                     const BisectorLine& bl) {
  const PrimeField& F = sys.source().field();
  GeneratorAudit audit;
  const Generator& g1 = bl.generators.front();
  const ParamVec3 v1 = sys.vector_of(g1);
  const Scalar pivot = v1.u1.value != 0 ? v1.u1 : v1.u2;
  const Scalar pivot_inv = F.inv(pivot);
  const Scalar base_norm =
      distance(F, sys.source()[g1.x_index], sys.source()[g1.y_index]);
  std::set<Scalar> seen;
  for (const Generator& g : bl.generators) {
    const ParamVec3 v = sys.vector_of(g);
    const Scalar mu = F.mul(v1.u1.value != 0 ? v.u1 : v.u2, pivot_inv);
    const ParamVec3 scaled{F.mul(mu, v1.u1), F.mul(mu, v1.u2), F.mul(mu, v1.u3)};
    audit.proportional = audit.proportional && scaled == v;
    audit.distinct_scalars = audit.distinct_scalars && seen.insert(mu).second;
    const Scalar norm = distance(F, sys.source()[g.x_index], sys.source()[g.y_index]);
    audit.scaled_norms = audit.scaled_norms && norm == F.mul(F.sqr(mu), base_norm);
    audit.scalars.push_back(mu);
  }
  return audit;
}

struct DilationRecord {
  ChainReport report;
  Line witness;
  std::vector<ParamVec3> witness_vectors;
};

/// |Delta(A)| >= (max_l m'(l) - 1) / 2, plus the per-line generator audit on
/// every line. Needs p = 3 mod 4 so the anchor norm ||x_1 - y_1|| is nonzero.
[[nodiscard]] inline DilationRecord dilation_assert(const PointSet& A) {
  if (A.field().residue_class() != 3) {
    throw Error(ErrorKind::kWrongResidueClass, "the dilation bound needs p = 3 mod 4");
  }
  const PerpBisectorSystem sys = build_perp_system(A);
  const u64 delta = nu_naive(A).support_size();
  const BisectorLine& best = sys.max_m_prime_line();
  const u64 m_prime = best.generators.size();

  bool proportional = true;
  bool distinct = true;
  bool norms = true;
  for (const auto& bl : sys.lines()) {
    const GeneratorAudit audit = audit_generators(sys, bl);
    proportional = proportional && audit.proportional;
    distinct = distinct && audit.distinct_scalars;
    norms = norms && audit.scaled_norms;
  }

  DilationRecord out;
  out.witness = best.line;
  for (const Generator& g : best.generators) out.witness_vectors.push_back(sys.vector_of(g));
  out.report.set("delta", delta)
      .set("max_m_prime", m_prime)
      .set("max_m", best.multiplicity)
      .set("distinct_lines", static_cast<u64>(sys.lines().size()));
  out.report.add(enforce(Check{"dilation", std::to_string(delta), ">=",
                               std::to_string(m_prime - 1) + "/2", 2 * delta + 1 >= m_prime}));
  out.report.add(enforce(Check{"generator_proportionality", proportional ? "1" : "0", "=",
                               "1", proportional}));
  out.report.add(enforce(
      Check{"generator_distinct_scalars", distinct ? "1" : "0", "=", "1", distinct}));
  out.report.add(
      enforce(Check{"generator_scaled_norms", norms ? "1" : "0", "=", "1", norms}));
  return out;
}

/// The upper end of the admissible epsilon range, from 16/15 + 2 eps < 8/7.
inline const Rational kEpsilonUpper(4, 105);

/// The epsilon fixed by the exponent optimisation.
inline const Rational kOptimalEpsilon(176, 31605);

/// Splits I(-2A, L) by line richness f(l): poor lines with f <= |A|^(7/15 - eps)
/// give I1, medium lines up to |A|^(7/15 + eps) give I2 (these form L2), and
/// anything richer is reported as i_rich. Thresholds are evaluated in long
/// double; the asserted bound is the integer form I1 <= |A|^2 * ceil(lo).
[[nodiscard]] inline ChainReport richness_partition(const PointSet& A, const Rational& eps) {
  if (eps <= Rational(0) || eps >= kEpsilonUpper) {
    throw Error(ErrorKind::kEpsilonOutOfRange, "need 0 < eps < 4/105, got " + to_string(eps));
  }
  const PerpBisectorSystem sys = build_perp_system(A);
  const LineMultiset L = sys.multiset();
  const auto f = richness(sys.shifted_points(), L);
  const u64 n = A.size();
  const long double e = boost::rational_cast<long double>(eps);
  const long double ln = std::log(static_cast<long double>(n));
  const long double lo = std::exp((7.0L / 15.0L - e) * ln);
  const long double hi = std::exp((7.0L / 15.0L + e) * ln);

  u64 i1 = 0, i2 = 0, i_rich = 0, l2_size = 0, l2_mult = 0, l2_max_m_prime = 0;
  for (const auto& bl : sys.lines()) {
    const u64 fl = f.at(bl.line);
    const u64 contrib = fl * bl.multiplicity;
    const auto fld = static_cast<long double>(fl);
    if (fld <= lo) {
      i1 += contrib;
    } else if (fld <= hi) {
      i2 += contrib;
      ++l2_size;
      l2_mult += bl.multiplicity;
      l2_max_m_prime = std::max<u64>(l2_max_m_prime, bl.generators.size());
    } else {
      i_rich += contrib;
    }
  }
  const u64 I = incidences(sys.shifted_points(), L);
  const auto lo_ceil = static_cast<u64>(std::ceil(lo));
  const long double case_threshold = std::exp((2.0L - 15.0L * e / 11.0L) * ln);
  const long double exponent_i1 = std::exp((37.0L / 15.0L - e) * ln);

  ChainReport r;
  r.set("epsilon", eps)
      .set("n", n)
      .set("incidences", I)
      .set("i1", i1)
      .set("i2", i2)
      .set("i_rich", i_rich)
      .set("l2_size", l2_size)
      .set("l2_mult", l2_mult)
      .set("l2_max_m_prime", l2_max_m_prime)
      .set("threshold_lo", static_cast<double>(lo))
      .set("threshold_hi", static_cast<double>(hi))
      .set("threshold_lo_ceil", lo_ceil)
      .set("case_threshold", static_cast<double>(case_threshold))
      .set("case", static_cast<u64>(static_cast<long double>(l2_mult) <= case_threshold ? 1 : 2))
      .set("l2_size_bound", static_cast<double>(std::exp((1.0L + 15.0L * e / 4.0L) * ln)))
      .set("i1_exponent_bound", static_cast<double>(exponent_i1))
      .set("i1_exponent_bound_holds", static_cast<long double>(i1) <= exponent_i1)
      .set("i1_sharp_bound", static_cast<u64>((n * n - n) * static_cast<u64>(std::floor(lo))));
  r.add(enforce(Check{"partition_exact",
                      std::to_string(i1) + "+" + std::to_string(i2) + "+" + std::to_string(i_rich),
                      "=", std::to_string(I), i1 + i2 + i_rich == I}));
  const u128 i1_bound = static_cast<u128>(n) * n * lo_ceil;
  r.add(enforce(Check{"i1_bound", std::to_string(i1), "<=",
                      std::to_string(n * n) + "*" + std::to_string(lo_ceil), i1 <= i1_bound}));
  return r;
}

/// E(Q) for the paraboloid lift of A against |Q|^(17/7). Report only.
[[nodiscard]] inline ChainReport energy_ratio(const PointSet& A) {
  if (A.empty()) throw Error(ErrorKind::kTooSmall, "need at least one point");
  const ParaboloidSet Q = paraboloid_lift(A);
  const u64 e = additive_energy(Q);
  const long double q = Q.total_weight();
  const long double bound = std::pow(q, 17.0L / 7.0L);
  const long double p = A.field().p();
  ChainReport r;
  r.set("q", Q.total_weight())
      .set("energy", e)
      .set("energy_bound", static_cast<double>(bound))
      .set("ratio_energy", static_cast<double>(e / bound))
      .set("energy_hypothesis", q <= std::pow(p, 26.0L / 21.0L));
  return r;
}

/// The exact line-to-set chain, P1 on the vertical axis:
/// |P1|^2 |P2|^2 / |Delta(P1, P2)| <= N <= |P1| T, and T agrees across both
/// routes. The energy bound and the min-of-four bound are reported only.
[[nodiscard]] inline ChainReport line_set_chain(const PointSet& P1, const PointSet& P2) {
  require_same_field(P1, P2);
  require_on_axis(P1);
  const DistanceHistogram c = cross_histogram(P1, P2);
  const u64 delta = c.support_size();
  const u64 N = c.sum_of_squares();
  const TSum T = t_sum(P1, P2);
  const u64 m1 = P1.size();
  const u64 m2 = P2.size();
  const u128 pairs_sq = static_cast<u128>(m1) * m1 * m2 * m2;

  const long double a = m1;
  const long double b = m2;
  const long double cross_bound = std::pow(a, 7.0L / 11.0L) * std::pow(b, 18.0L / 11.0L) +
                            std::pow(b, 15.0L / 8.0L);
  const long double t1 = std::pow(a * b, 4.0L / 11.0L);
  const long double t2 = a * std::pow(b, 1.0L / 8.0L);
  const long double t3 = std::pow(b, 7.0L / 8.0L);
  const long double t4 = a > 0 ? std::pow(b, 8.0L / 7.0L) / a : 0.0L;
  const long double min4 = std::min({t1, t2, t3, t4});
  const long double p = P1.field().p();

  ChainReport r;
  r.set("p1_size", m1)
      .set("p2_size", m2)
      .set("delta_between", delta)
      .set("cross_quadruples", N)
      .set("t_by_energy", T.by_energy)
      .set("t_by_lift", T.by_lift)
      .set("cross_energy_bound", static_cast<double>(cross_bound))
      .set("ratio_cross_energy", cross_bound > 0 ? static_cast<double>(T.by_energy / cross_bound) : 0.0)
      .set("min_of_four", static_cast<double>(min4))
      .set("ratio_min_of_four", min4 > 0 ? static_cast<double>(delta / min4) : 0.0)
      .set("min_of_four_hypothesis",
           std::pow(a, 4.0L / 7.0L) < b && b <= std::pow(p, 7.0L / 6.0L));
  r.add(enforce(Check{"t_routes", std::to_string(T.by_energy), "=", std::to_string(T.by_lift),
                      T.by_energy == T.by_lift}));
  r.add(enforce(Check{"cross_cs_left",
                      delta == 0 ? "0" : detail::ratio_text(pairs_sq, delta), "<=",
                      std::to_string(N), pairs_sq <= static_cast<u128>(delta) * N}));
  const u128 right = static_cast<u128>(m1) * T.by_energy;
  r.add(enforce(Check{"cross_cs_right", std::to_string(N), "<=",
                      std::to_string(static_cast<u64>(right)), N <= right}));
  return r;
}

/// r_{P2}(x, lambda) equals the weighted incidence of the parabola lift with
/// Y = 2xX - x^2 + lambda.
[[nodiscard]] inline Check lift_duality_check(const PointSet& P2, Scalar x, Scalar lambda) {
  const PrimeField& F = P2.field();
  const u64 lhs = circle_count(P2, x, lambda);
  const u64 rhs = weighted_incidences(parabola_lift(P2), lifted_circle_line(F, x, lambda));
  return enforce(Check{"lift_duality", std::to_string(lhs), "=", std::to_string(rhs), lhs == rhs});
}

// ---------------------------------------------------------------------------
// Exponent optimisation
// ---------------------------------------------------------------------------

/// delta <= intercept + slope * eps
struct LinearConstraint {
  Rational intercept;
  Rational slope;

  [[nodiscard]] Rational at(const Rational& eps) const { return intercept + slope * eps; }
};

/// The three lower-bound exponents of the case analysis, as functions of eps.
[[nodiscard]] inline std::vector<LinearConstraint> exponent_constraints() {
  return {
      {Rational(8, 15), Rational(4, 11)},                             // poor lines
      {Rational(8, 15) + Rational(1, 7), Rational(-1)},               // a rich line
      {Rational(4, 7), -(Rational(30, 11) + Rational(15, 4))},        // dilation case
  };
}

struct EpsilonSolution {
  Rational epsilon;
  Rational delta;
  std::vector<int> binding;  ///< 1-based indices of the constraints attaining delta
};

/// Maximises min_i constraint_i(eps) over 0 <= eps < upper in exact rational
/// arithmetic. The objective is concave piecewise linear, so the optimum sits
/// at eps = 0 or at a crossing of two constraints; ties keep the smaller eps.
[[nodiscard]] inline EpsilonSolution epsilon_optimize(std::span<const LinearConstraint> cs,
                                                      const Rational& upper = kEpsilonUpper) {
  if (cs.empty()) throw Error(ErrorKind::kConfigError, "no constraints");
  auto objective = [&](const Rational& eps) {
    Rational v = cs.front().at(eps);
    for (const auto& c : cs) v = std::min(v, c.at(eps));
    return v;
  };
  std::vector<Rational> candidates{Rational(0)};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (cs[i].slope == cs[j].slope) continue;
      const Rational x = (cs[j].intercept - cs[i].intercept) / (cs[i].slope - cs[j].slope);
      if (x >= Rational(0) && x < upper) candidates.push_back(x);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  EpsilonSolution best{candidates.front(), objective(candidates.front()), {}};
  for (const Rational& x : candidates) {
    const Rational v = objective(x);
    if (v > best.delta) best = {x, v, {}};
  }
  // A still-increasing objective at the open end has no maximiser.
  const Rational probe = best.epsilon + (upper - best.epsilon) / Rational(2);
  if (objective(probe) > best.delta) {
    throw Error(ErrorKind::kConfigError, "supremum approached at the open end of the range");
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].at(best.epsilon) == best.delta) best.binding.push_back(static_cast<int>(i + 1));
  }
  return best;
}

[[nodiscard]] inline EpsilonSolution epsilon_optimize() {
  const auto cs = exponent_constraints();
  return epsilon_optimize(cs);
}

// ---------------------------------------------------------------------------
// Bound table
// ---------------------------------------------------------------------------

inline const Rational kMainExponent(1128, 2107);
inline const Rational kBaselineExponent(8, 15);

/// |Delta(A)| beside the reference curves and the regime flags. Report only.
[[nodiscard]] inline ChainReport bound_table(const PointSet& A,
                                             const Rational& eps = kOptimalEpsilon) {
  if (A.size() < 2) throw Error(ErrorKind::kTooSmall, "need at least two points");
  const u64 delta = nu_naive(A).support_size();
  const long double n = A.size();
  const long double p = A.field().p();
  const long double e = boost::rational_cast<long double>(eps);
  const Collinearity col = max_collinearity(A);
  const long double big_line = std::pow(n, 7.0L / 15.0L + e);
  ChainReport r;
  r.set("n", A.size())
      .set("delta", delta)
      .set("main_exponent", kMainExponent)
      .set("baseline_exponent", kBaselineExponent)
      .set("bound_main", static_cast<double>(
                             std::pow(n, boost::rational_cast<long double>(kMainExponent))))
      .set("bound_baseline", static_cast<double>(std::pow(n, 8.0L / 15.0L)))
      .set("bound_large_set", static_cast<double>(std::pow(n, 1.5L) / p))
      .set("regime_small", n <= std::pow(p, 7.0L / 6.0L))
      .set("regime_improves_large_set", n <= std::pow(p, 4214.0L / 4065.0L))
      .set("max_collinear", static_cast<u64>(col.count))
      .set("rich_line_threshold", static_cast<double>(big_line))
      .set("has_rich_line", static_cast<long double>(col.count) >= big_line)
      .set("rich_line_bound",
           static_cast<double>(std::min(std::pow(n, 8.0L / 15.0L + 4.0L * e / 11.0L),
                                        std::pow(n, 8.0L / 15.0L + 1.0L / 7.0L - e))));
  return r;
}

}  // namespace ffdist

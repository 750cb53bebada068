// Acceptance suite. One line per criterion:
//   [PASS] C<n> <title>: <detail> (<seconds> s)
// Run with criterion numbers to select a subset, e.g. `ffdist_acceptance 2 9`.
// With --cli <path> criterion 1 also checks the command-line output.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"

namespace {

using namespace ffdist;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cli_path;

constexpr u64 kSuiteSeed = 0x5eed0001;
constexpr std::array<u64, 4> kSuitePrimes{7, 11, 19, 23};

// The shared randomized suite: 100 seeded instances, p in {7, 11, 19, 23}, |A| <= 40.
std::vector<PointSet> randomized_suite() {
  std::vector<PointSet> out;
  Engine eng(kSuiteSeed);
  for (int i = 0; i < 100; ++i) {
    const PrimeField F(kSuitePrimes[i % 4]);
    const u64 n = 2 + uniform_below(eng, 39);
    out.push_back(gen_random(F, n, eng()));
  }
  return out;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome c1_epsilon() {
  const auto t0 = Clock::now();
  const EpsilonSolution s = epsilon_optimize();
  const double ms = seconds_since(t0) * 1e3;
  bool ok = s.epsilon == Rational(176, 31605) && s.delta == Rational(1128, 2107) && ms < 1.0;
  std::string detail = "epsilon=" + to_string(s.epsilon) + " delta=" + to_string(s.delta) +
                       " in " + fmt("%.3f", ms) + " ms";
  if (!cli_path.empty()) {
    std::string text;
    if (FILE* f = popen((cli_path + " optimize-epsilon").c_str(), "r")) {
      char buf[256];
      while (std::fgets(buf, sizeof buf, f)) text += buf;
      ok = pclose(f) == 0 && ok;
    } else {
      ok = false;
    }
    const bool cli_ok = text.starts_with("epsilon=176/31605\ndelta=1128/2107\n");
    ok = ok && cli_ok;
    detail += cli_ok ? "; cli output matches" : "; cli output differs";
  }
  return {ok, detail};
}

// Both sides of the identity summed over every subset of F_7^2 with at most
// six points, by depth-first search with incremental updates. The per-triple
// indicators come from the library: equal distances for the triple count, and
// -2z on the canonical bisector line of (x, y) for the incidence count.
struct ExhaustiveIdentity {
  static constexpr int kPoints = 49;
  static constexpr int kMaxSize = 6;
  std::vector<std::uint8_t> tri, inc;
  std::vector<int> chosen;
  u64 subsets = 0;
  u64 mismatches = 0;

  static std::size_t at(int z, int x, int y) { return (z * kPoints + x) * kPoints + y; }

  ExhaustiveIdentity() : tri(kPoints * kPoints * kPoints), inc(tri.size()) {
    const PrimeField F(7);
    std::vector<Point2> pts;
    for (u64 i = 0; i < kPoints; ++i) pts.push_back(F.point(static_cast<i64>(i / 7), static_cast<i64>(i % 7)));
    const Scalar minus_two = F.reduce(-2);
    for (int x = 0; x < kPoints; ++x) {
      for (int y = 0; y < kPoints; ++y) {
        if (x == y) continue;
        const Line l = canonicalize_line(F, bisector_vector(F, pts[x], pts[y]));
        for (int z = 0; z < kPoints; ++z) {
          tri[at(z, x, y)] = distance(F, pts[z], pts[x]) == distance(F, pts[z], pts[y]);
          inc[at(z, x, y)] = on_line(F, l, F.scale(minus_two, pts[z]));
        }
      }
    }
  }

  // Triples of (S + w)^3 with x != y that involve w.
  static u64 added(const std::vector<std::uint8_t>& t, const std::vector<int>& S, int w) {
    u64 d = 0;
    for (int x : S) d += t[at(w, x, w)] + t[at(w, w, x)];
    for (int x : S)
      for (int y : S)
        if (x != y) d += t[at(w, x, y)];
    for (int z : S)
      for (int y : S) d += t[at(z, w, y)] + t[at(z, y, w)];
    return d;
  }

  void search(int next, u64 t, u64 i) {
    ++subsets;
    mismatches += t != i;
    if (static_cast<int>(chosen.size()) == kMaxSize) return;
    for (int w = next; w < kPoints; ++w) {
      const u64 dt = added(tri, chosen, w);
      const u64 di = added(inc, chosen, w);
      chosen.push_back(w);
      search(w + 1, t + dt, i + di);
      chosen.pop_back();
    }
  }
};

Outcome c2_identity() {
  const auto t0 = Clock::now();
  ExhaustiveIdentity ex;
  ex.search(0, 0, 0);

  // The full report path on every subset with two or three points.
  const PrimeField F(7);
  u64 small = 0, small_bad = 0;
  for (u64 a = 0; a < 49; ++a)
    for (u64 b = a + 1; b < 49; ++b)
      for (u64 c = b; c < 49; ++c) {
        std::vector<Point2> pts{F.point(static_cast<i64>(a / 7), static_cast<i64>(a % 7)),
                                F.point(static_cast<i64>(b / 7), static_cast<i64>(b % 7))};
        if (c != b) pts.push_back(F.point(static_cast<i64>(c / 7), static_cast<i64>(c % 7)));
        ++small;
        try {
          small_bad += !verify_incidence_identity(PointSet(F, std::move(pts))).all_hold();
        } catch (const Error&) {
          ++small_bad;
        }
      }

  u64 random_bad = 0;
  for (const PointSet& A : randomized_suite()) {
    try {
      const ChainReport r = verify_incidence_identity(A);
      random_bad += r.json()["incidences"].get<long long>() != oracle::nondegenerate_triples(A);
    } catch (const Error&) {
      ++random_bad;
    }
  }
  const double s = seconds_since(t0);
  const bool ok = ex.mismatches == 0 && small_bad == 0 && random_bad == 0 && s < 10.0;
  return {ok, std::to_string(ex.subsets) + " subsets of F_7^2 (|A|<=6), " +
                  std::to_string(ex.mismatches) + " mismatches; " + std::to_string(small) +
                  " full-path small sets, " + std::to_string(small_bad) + " bad; 100 random, " +
                  std::to_string(random_bad) + " bad"};
}

Outcome c3_cauchy_schwarz() {
  u64 bad = 0, count = 0;
  u64 i = 0;
  for (const PointSet& A : randomized_suite()) {
    const PrimeField& F = A.field();
    try {
      bad += !cs_chain(A).all_hold();
      const PointSet P1 = gen_line_subset(F, 1 + i % 8, derive_seed({kSuiteSeed, i}));
      bad += !line_set_chain(P1, A).all_hold();
    } catch (const Error&) {
      ++bad;
    }
    count += 2;
    ++i;
  }
  return {bad == 0, std::to_string(count) + " chains (100 single-set, 100 line-set), " +
                        std::to_string(bad) + " violations"};
}

Outcome c4_kst() {
  Engine eng(derive_seed({kSuiteSeed, 4}));
  u64 bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const PrimeField F(kSuitePrimes[i % 4]);
    const u64 p = F.p();
    const PointSet P = gen_random(F, uniform_below(eng, p * p + 1), eng());
    const LineMultiset L(F, random_lines(F, uniform_below(eng, p * p + p + 1), eng()));
    bad += !kst_check(P, L).check.holds;
  }
  std::string planes;
  for (u64 p : {7ULL, 11ULL, 19ULL}) {
    const PrimeField F(p);
    const KstRecord r = kst_check(gen_random(F, p * p, 0), LineMultiset(F, all_lines(F)));
    const bool exact = r.incidences == (p * p + p) * p;
    bad += !r.check.holds || !exact;
    planes += " p=" + std::to_string(p) + ":I=" + std::to_string(r.incidences);
  }
  return {bad == 0, "1000 random instances + full planes" + planes + ", " + std::to_string(bad) +
                        " violations"};
}

Outcome c5_dilation() {
  u64 bad = 0, best = 0;
  for (const PointSet& A : randomized_suite()) {
    if (A.field().residue_class() != 3) continue;
    try {
      const DilationRecord d = dilation_assert(A);
      bad += !d.report.all_hold();
      best = std::max(best, d.report.json()["max_m_prime"].get<u64>());
    } catch (const Error&) {
      ++bad;
    }
  }
  return {bad == 0, "100 instances, largest m'(l)=" + std::to_string(best) + ", " +
                        std::to_string(bad) + " violations (bound, proportionality, scaled norms)"};
}

Outcome c6_oracles() {
  const auto t0 = Clock::now();
  std::vector<u64> primes;
  for (u64 p = 3; p <= 101; p += 2)
    if (detail::is_prime_u64(p)) primes.push_back(p);
  Engine eng(derive_seed({kSuiteSeed, 6}));
  u64 nu_bad = 0;
  for (int i = 0; i < 200; ++i) {
    const PrimeField F(primes[uniform_below(eng, primes.size())]);
    const u64 n = uniform_below(eng, std::min<u64>(60, F.p() * F.p()) + 1);
    const PointSet A = gen_random(F, n, eng());
    nu_bad += nu_fast(A) != nu_naive(A);
  }
  u64 e_bad = 0;
  for (int i = 0; i < 50; ++i) {
    const PrimeField F(primes[uniform_below(eng, primes.size())]);
    const u64 n = uniform_below(eng, std::min<u64>(40, F.p() * F.p()) + 1);
    const PointSet A = gen_random(F, n, eng());
    const ParaboloidSet Q = paraboloid_lift(A);
    const u64 fast = additive_energy(Q);
    e_bad += fast != additive_energy_brute(Q) || static_cast<long long>(fast) != oracle::lifted_energy(A);
  }
  const double s = seconds_since(t0);
  return {nu_bad == 0 && e_bad == 0 && s < 60.0,
          "nu: 200 instances, " + std::to_string(nu_bad) + " mismatches; energy: 50 instances, " +
              std::to_string(e_bad) + " mismatches"};
}

Outcome c7_lift() {
  Engine eng(derive_seed({kSuiteSeed, 7}));
  const u64 primes[] = {7, 11, 13, 19, 23, 29};
  u64 bad = 0;
  for (int i = 0; i < 500; ++i) {
    const PrimeField F(primes[uniform_below(eng, 6)]);
    const PointSet P2 = gen_random(F, uniform_below(eng, std::min<u64>(60, F.p() * F.p()) + 1), eng());
    const Scalar x{uniform_below(eng, F.p())};
    const Scalar lambda{uniform_below(eng, F.p())};
    try {
      bad += !lift_duality_check(P2, x, lambda).holds;
    } catch (const Error&) {
      ++bad;
    }
  }
  return {bad == 0, "500 (P2, x, lambda) triples, " + std::to_string(bad) + " mismatches"};
}

Outcome c8_isotropy() {
  u64 bad = 0, three = 0, one = 0;
  for (u64 p = 3; p <= 101; p += 2) {
    if (!detail::is_prime_u64(p)) continue;
    const PrimeField F(p);
    bool exists = false;
    for (u64 x = 0; x < p && !exists; ++x)
      for (u64 y = 0; y < p && !exists; ++y)
        exists = (x | y) != 0 && (x * x + y * y) % p == 0;
    const auto w = isotropic_witness(F);
    const bool want = p % 4 == 1;
    bad += exists != want || w.has_value() != want;
    if (w) bad += *w == Point2{} || sqr_norm(F, *w).value != 0;
    (want ? one : three) += 1;
  }
  return {bad == 0, std::to_string(three) + " primes 3 mod 4 without, " + std::to_string(one) +
                        " primes 1 mod 4 with a witness; " + std::to_string(bad) + " errors"};
}

Outcome c9_determinism() {
  sweep::ExperimentSpec spec = sweep::parse_spec(nlohmann::json::parse(R"({
    "primes": [7, 11, 19, 23],
    "residue_class": 3,
    "constructions": [
      {"kind": "random", "sizes": [10, 20, 40]},
      {"kind": "product", "sizes": [3, 5]},
      {"kind": "circle", "sizes": [1, 3], "center": [2, 1]}
    ],
    "verify": ["identity", "cs_chain", "dilation", "kst", "line_set_chain", "lift_duality"],
    "report": ["sdz", "energy_ratio", "bounds", "richness"],
    "epsilon": "176/31605",
    "seed": 7
  })"));
  spec.jobs = 1;
  const std::string serial = sweep::to_csv(sweep::run(spec));
  spec.jobs = 8;
  const std::string parallel = sweep::to_csv(sweep::run(spec));
  const auto rows = std::count(serial.begin(), serial.end(), '\n') - 1;
  return {serial == parallel,
          std::to_string(rows) + " rows, jobs=1 vs jobs=8 " +
              (serial == parallel ? "byte-identical" : "differ")};
}

Outcome c10_fit() {
  const auto t0 = Clock::now();
  const sweep::ExperimentSpec spec = sweep::parse_spec(nlohmann::json::parse(R"({
    "primes": [1031],
    "constructions": [{"kind": "random", "sizes": [16, 32, 64, 128, 256, 512, 1024]}],
    "seed": 1031
  })"));
  const sweep::SweepResult r = sweep::run(spec);
  const sweep::FitResult f = sweep::fit_exponent(r);
  std::string deltas;
  for (const auto& row : r.rows) deltas += (deltas.empty() ? "" : ",") + std::to_string(row.delta);
  const double s = seconds_since(t0);
  return {f.slope > 0.54 && s < 300.0,
          "slope=" + fmt("%.4f", f.slope) + " (need > 0.54, reference " +
              fmt("%.6f", boost::rational_cast<double>(kMainExponent)) + "), |Delta|=" + deltas +
              " with p=1031"};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> selected;
  app.add_option("criteria", selected, "Criterion numbers (default all)");
  app.add_option("--cli", cli_path, "Path to the ffdist binary");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "epsilon/delta reproduction", c1_epsilon},
      {2, "incidence identity", c2_identity},
      {3, "Cauchy-Schwarz chains", c3_cauchy_schwarz},
      {4, "KST bound at constant 1", c4_kst},
      {5, "dilation bound", c5_dilation},
      {6, "oracle equivalence", c6_oracles},
      {7, "lift duality", c7_lift},
      {8, "isotropy boundary", c8_isotropy},
      {9, "sweep determinism", c9_determinism},
      {10, "exponent fit sanity", c10_fit},
  };

  bool all_pass = true;
  for (const Criterion& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "[PASS] C" : "[FAIL] C") << c.id << ' ' << c.title << ": " << o.detail
              << " (" << fmt("%.2f", seconds_since(t0)) << " s)" << std::endl;
  }
  return all_pass ? 0 : 1;
}

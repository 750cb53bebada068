#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "ffdist/counting.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/io.hpp"
#include "ffdist/point_set.hpp"
#include "ffdist/proof_chain.hpp"
#include "ffdist/report.hpp"
#include "ffdist/rng.hpp"

namespace ffdist::sweep {

/// One construction family. `sizes` means: n for random and line_subset, the
/// grid side q for product ({0..q-1}^2), the radius for circle. A union takes
/// its `parts` (each with one size) and produces a single instance.
struct Construction {
  std::string kind;
  std::string label;
  std::vector<u64> sizes;
  std::pair<u64, u64> center{0, 0};
  std::vector<Construction> parts;
};

inline const std::set<std::string> kVerifiers{"identity", "cs_chain",       "dilation",
                                              "kst",      "line_set_chain", "lift_duality"};
inline const std::set<std::string> kReports{"sdz", "energy_ratio", "bounds", "richness"};

struct ExperimentSpec {
  std::vector<u64> primes;
  std::optional<unsigned> residue_class;
  std::vector<Construction> constructions;
  std::set<std::string> verify;
  std::set<std::string> report;
  std::optional<Rational> epsilon;
  u64 seed = 0;
  unsigned jobs = 1;
  std::string out;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& what) {
  throw Error(ErrorKind::kConfigError, what);
}

inline Construction parse_construction(const nlohmann::json& j, bool nested) {
  if (!j.is_object() || !j.contains("kind")) config_error("construction needs a 'kind'");
  Construction c;
  c.kind = j.at("kind").get<std::string>();
  static const std::set<std::string> kinds{"random", "product", "line_subset", "circle", "union"};
  if (!kinds.contains(c.kind)) config_error("unknown construction kind '" + c.kind + "'");
  c.label = j.value("label", c.kind);
  if (j.contains("center")) {
    const auto ctr = j.at("center").get<std::vector<u64>>();
    if (ctr.size() != 2) config_error("center must be [x, y]");
    c.center = {ctr[0], ctr[1]};
  }
  if (c.kind == "union") {
    if (nested) config_error("union parts cannot nest");
    if (!j.contains("parts") || j.at("parts").empty()) config_error("union needs 'parts'");
    for (const auto& part : j.at("parts")) c.parts.push_back(parse_construction(part, true));
    c.sizes = {0};
  } else if (nested) {
    if (!j.contains("size")) config_error("union part needs 'size'");
    c.sizes = {j.at("size").get<u64>()};
  } else {
    if (!j.contains("sizes") || j.at("sizes").empty()) config_error(c.kind + " needs 'sizes'");
    c.sizes = j.at("sizes").get<std::vector<u64>>();
  }
  return c;
}

}  // namespace detail

/// Parses the JSON config. Keys: primes, residue_class (optional),
/// constructions, verify, report, epsilon ("num/den"), seed, jobs, out.
inline ExperimentSpec parse_spec(const nlohmann::json& j) {
  ExperimentSpec s;
  try {
    s.primes = j.at("primes").get<std::vector<u64>>();
    if (s.primes.empty()) detail::config_error("no primes");
    if (j.contains("residue_class")) s.residue_class = j.at("residue_class").get<unsigned>();
    for (u64 p : s.primes) {
      const PrimeField F(p);
      if (s.residue_class && F.residue_class() != *s.residue_class) {
        detail::config_error(std::to_string(p) + " is not " +
                             std::to_string(*s.residue_class) + " mod 4");
      }
    }
    for (const auto& c : j.at("constructions")) {
      s.constructions.push_back(detail::parse_construction(c, false));
    }
    if (s.constructions.empty()) detail::config_error("no constructions");
    for (const auto& v : j.value("verify", std::vector<std::string>{})) {
      if (!kVerifiers.contains(v)) detail::config_error("unknown verifier '" + v + "'");
      s.verify.insert(v);
    }
    for (const auto& v : j.value("report", std::vector<std::string>{})) {
      if (!kReports.contains(v)) detail::config_error("unknown report '" + v + "'");
      s.report.insert(v);
    }
    if (j.contains("epsilon")) {
      const auto& e = j.at("epsilon");
      s.epsilon = e.is_string() ? parse_rational(e.get<std::string>())
                                : Rational(e.get<std::int64_t>());
    }
    if (s.report.contains("richness")) {
      if (!s.epsilon) detail::config_error("richness report needs 'epsilon'");
      if (*s.epsilon <= Rational(0) || *s.epsilon >= kEpsilonUpper) {
        detail::config_error("epsilon must lie in (0, 4/105)");
      }
    }
    if (!j.contains("seed")) detail::config_error("config needs a fixed 'seed'");
    s.seed = j.at("seed").get<u64>();
    s.jobs = j.value("jobs", 1U);
    if (s.jobs == 0) detail::config_error("jobs must be positive");
    s.out = j.value("out", std::string{});
  } catch (const nlohmann::json::exception& e) {
    detail::config_error(e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfigError) throw;
    detail::config_error(e.what());
  }
  return s;
}

inline ExperimentSpec load_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kConfigError, "cannot read config " + path);
  try {
    return parse_spec(nlohmann::json::parse(is));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfigError, e.what());
  }
}

struct Row {
  u64 p = 0;
  std::string construction;
  std::size_t construction_index = 0;
  u64 size = 0;  ///< the construction's size parameter
  u64 seed = 0;
  u64 n = 0;
  u64 delta = 0;
  u64 sigma_nu_sq = 0;
  u64 triples = 0;
  std::optional<u64> incidences;
  std::optional<u64> energy;
  std::optional<double> ratio_sdz;
  std::optional<double> ratio_energy;
  bool pass = true;
  nlohmann::json report = nlohmann::json::object();
};

struct SweepResult {
  std::vector<Row> rows;
};

/// A verifier failed inside a sweep. Carries everything needed to replay the
/// instance on its own.
class InstanceFailure : public Error {
 public:
  InstanceFailure(const Row& row, const std::string& points_csv, const std::string& what)
      : Error(ErrorKind::kAssertionFailed,
              "p=" + std::to_string(row.p) + " construction=" + row.construction +
                  " size=" + std::to_string(row.size) + " seed=" + std::to_string(row.seed) +
                  " n=" + std::to_string(row.n) + ": " + what),
        points_csv_(points_csv) {}

  [[nodiscard]] const std::string& points_csv() const noexcept { return points_csv_; }

 private:
  std::string points_csv_;
};

/// Stable per-instance seed from (master seed, p, construction index, size).
constexpr u64 instance_seed(u64 master, u64 p, std::size_t construction_index, u64 size) {
  return derive_seed({master, p, construction_index, size});
}

/// Sizes past what the field holds are clamped: random to p^2 points,
/// line_subset and the product side to p. The row keeps the requested size.
inline PointSet build_instance(const PrimeField& F, const Construction& c, u64 size, u64 seed) {
  if (c.kind == "random") return gen_random(F, std::min(size, F.p() * F.p()), seed);
  if (c.kind == "line_subset") return gen_line_subset(F, std::min(size, F.p()), seed);
  if (c.kind == "product") {
    size = std::min(size, F.p());
    std::vector<Scalar> side;
    for (u64 i = 0; i < size; ++i) side.push_back(Scalar{i});
    return gen_product(F, side, side);
  }
  if (c.kind == "circle") {
    return gen_circle(F, F.point(static_cast<i64>(c.center.first), static_cast<i64>(c.center.second)),
                      F.reduce_u(size));
  }
  std::vector<PointSet> parts;
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    parts.push_back(build_instance(F, c.parts[i], c.parts[i].sizes.front(), derive_seed({seed, i})));
  }
  return gen_union(parts);
}

namespace detail {

inline void absorb(Row& row, const ChainReport& r) {
  for (const auto& [k, v] : r.json().items()) row.report[k] = v;
  row.pass = row.pass && r.all_hold();
}

}  // namespace detail

/// Runs the selected verifiers and reports on one instance. Verifier
/// violations throw AssertionFailed.
inline Row run_instance(const ExperimentSpec& spec, const PointSet& A, Row row) {
  const PrimeField& F = A.field();
  row.n = A.size();
  const DistanceHistogram nu = nu_naive(A);
  row.delta = nu.support_size();
  row.sigma_nu_sq = nu.sum_of_squares();
  row.triples = isosceles_triples(A).total;
  const bool pairs = A.size() >= 2;

  if (spec.verify.contains("cs_chain") && !A.empty()) detail::absorb(row, cs_chain(A));
  if (spec.verify.contains("identity") && pairs) {
    const ChainReport r = verify_incidence_identity(A);
    row.incidences = r.json().at("incidences").get<u64>();
    detail::absorb(row, r);
  }
  if (spec.verify.contains("dilation") && pairs) {
    if (F.residue_class() == 3) {
      detail::absorb(row, dilation_assert(A).report);
    } else {
      row.report["dilation_skipped"] = "p = 1 mod 4";
    }
  }
  if ((spec.verify.contains("kst") || spec.report.contains("sdz")) && pairs) {
    const PerpBisectorSystem sys = build_perp_system(A);
    LineMultiset distinct(F);
    for (const auto& bl : sys.lines()) distinct.add(bl.line);
    if (spec.verify.contains("kst")) {
      const KstRecord k = kst_assert(sys.shifted_points(), distinct);
      ChainReport r;
      r.set("kst_bound_points", k.bound_points).set("kst_bound_lines", k.bound_lines).add(k.check);
      detail::absorb(row, r);
    }
    if (spec.report.contains("sdz")) {
      const SdzRecord s = sdz_report(sys.shifted_points(), distinct);
      row.ratio_sdz = s.ratio;
      row.report["sdz_incidences"] = s.incidences;
      row.report["sdz_bound"] = s.bound;
      row.report["sdz_lower_range"] = s.lower_range;
      row.report["sdz_upper_range"] = s.upper_range;
      row.report["sdz_field_size"] = s.field_size;
    }
    if (!row.incidences) row.incidences = incidences(sys.shifted_points(), sys.multiset());
  }
  if (spec.verify.contains("line_set_chain") && !A.empty()) {
    // P1: ceil(sqrt|A|) axis points, capped at p; P2 = A.
    const u64 k = std::min<u64>(F.p(), static_cast<u64>(std::ceil(std::sqrt(
                                          static_cast<double>(A.size())))));
    const PointSet P1 = gen_line_subset(F, std::max<u64>(k, 1), derive_seed({row.seed, 1}));
    detail::absorb(row, line_set_chain(P1, A));
  }
  if (spec.verify.contains("lift_duality")) {
    Engine eng(derive_seed({row.seed, 2}));
    bool ok = true;
    for (int i = 0; i < 8; ++i) {
      const Scalar x{uniform_below(eng, F.p())};
      const Scalar lambda{uniform_below(eng, F.p())};
      ok = ok && lift_duality_check(A, x, lambda).holds;
    }
    row.report["lift_duality_samples"] = 8;
    row.report["lift_duality_holds"] = ok;
  }
  if (spec.report.contains("energy_ratio") && !A.empty()) {
    const ChainReport r = energy_ratio(A);
    row.energy = r.json().at("energy").get<u64>();
    row.ratio_energy = r.json().at("ratio_energy").get<double>();
    detail::absorb(row, r);
  }
  if (spec.report.contains("bounds") && pairs) detail::absorb(row, bound_table(A));
  if (spec.report.contains("richness") && pairs) {
    ChainReport r = richness_partition(A, *spec.epsilon);
    if (!row.incidences) row.incidences = r.json().at("incidences").get<u64>();
    detail::absorb(row, r);
  }
  return row;
}

/// Executes every (prime, construction, size) instance on a pool of
/// spec.jobs workers. Rows come back in canonical order whatever the schedule.
inline SweepResult run(const ExperimentSpec& spec) {
  struct Task {
    u64 p;
    std::size_t ci;
    u64 size;
  };
  std::vector<Task> tasks;
  for (u64 p : spec.primes) {
    for (std::size_t ci = 0; ci < spec.constructions.size(); ++ci) {
      for (u64 size : spec.constructions[ci].sizes) tasks.push_back({p, ci, size});
    }
  }
  std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    return std::tie(a.p, a.ci, a.size) < std::tie(b.p, b.ci, b.size);
  });

  std::vector<Row> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      const Construction& c = spec.constructions[t.ci];
      Row row;
      row.p = t.p;
      row.construction = c.label;
      row.construction_index = t.ci;
      row.size = t.size;
      row.seed = instance_seed(spec.seed, t.p, t.ci, t.size);
      try {
        const PrimeField F(t.p);
        const PointSet A = build_instance(F, c, t.size, row.seed);
        row.n = A.size();
        try {
          rows[i] = run_instance(spec, A, row);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kAssertionFailed) throw;
          throw InstanceFailure(row, io::to_csv(A), e.what());
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(spec.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return {std::move(rows)};
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "p,construction,n,delta,sigma_nu_sq,triples,incidences,energy,ratio_sdz,ratio_energy,pass";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  auto opt_u = [](const std::optional<u64>& v) { return v ? std::to_string(*v) : std::string{}; };
  auto opt_d = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
  for (const Row& r : result.rows) {
    os << r.p << ',' << r.construction << ',' << r.n << ',' << r.delta << ',' << r.sigma_nu_sq
       << ',' << r.triples << ',' << opt_u(r.incidences) << ',' << opt_u(r.energy) << ','
       << opt_d(r.ratio_sdz) << ',' << opt_d(r.ratio_energy) << ',' << (r.pass ? 1 : 0) << '\n';
  }
  return os.str();
}

inline nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& r : result.rows) {
    nlohmann::json j;
    j["p"] = r.p;
    j["construction"] = r.construction;
    j["construction_index"] = r.construction_index;
    j["size"] = r.size;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["delta"] = r.delta;
    j["sigma_nu_sq"] = r.sigma_nu_sq;
    j["triples"] = r.triples;
    j["incidences"] = r.incidences ? nlohmann::json(*r.incidences) : nlohmann::json(nullptr);
    j["energy"] = r.energy ? nlohmann::json(*r.energy) : nlohmann::json(nullptr);
    j["ratio_sdz"] = r.ratio_sdz ? nlohmann::json(*r.ratio_sdz) : nlohmann::json(nullptr);
    j["ratio_energy"] = r.ratio_energy ? nlohmann::json(*r.ratio_energy) : nlohmann::json(nullptr);
    j["pass"] = r.pass;
    j["report"] = r.report;
    rows.push_back(std::move(j));
  }
  return nlohmann::json{{"rows", std::move(rows)}};
}

inline SweepResult from_json(const nlohmann::json& j) {
  SweepResult out;
  try {
    for (const auto& jr : j.at("rows")) {
      Row r;
      r.p = jr.at("p").get<u64>();
      r.construction = jr.at("construction").get<std::string>();
      r.construction_index = jr.at("construction_index").get<std::size_t>();
      r.size = jr.at("size").get<u64>();
      r.seed = jr.at("seed").get<u64>();
      r.n = jr.at("n").get<u64>();
      r.delta = jr.at("delta").get<u64>();
      r.sigma_nu_sq = jr.at("sigma_nu_sq").get<u64>();
      r.triples = jr.at("triples").get<u64>();
      if (!jr.at("incidences").is_null()) r.incidences = jr.at("incidences").get<u64>();
      if (!jr.at("energy").is_null()) r.energy = jr.at("energy").get<u64>();
      if (!jr.at("ratio_sdz").is_null()) r.ratio_sdz = jr.at("ratio_sdz").get<double>();
      if (!jr.at("ratio_energy").is_null()) r.ratio_energy = jr.at("ratio_energy").get<double>();
      r.pass = jr.at("pass").get<bool>();
      r.report = jr.at("report");
      out.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  return out;
}

inline std::string serialize(const SweepResult& result, const std::string& format) {
  if (format == "csv") return to_csv(result);
  if (format == "json") return to_json(result).dump(2) + "\n";
  throw Error(ErrorKind::kConfigError, "format must be csv or json");
}

inline void emit(const SweepResult& result, const std::string& format, const std::string& path) {
  const std::string text = serialize(result, format);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::kIoError, "cannot write " + path);
  os << text;
  if (!os) throw Error(ErrorKind::kIoError, "write failed: " + path);
}

// ---------------------------------------------------------------------------
// Exponent fit
// ---------------------------------------------------------------------------

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::size_t n_points = 0;
};

/// Least-squares line through (log n, log delta) over points with n >= 2 and delta >= 1.
inline FitResult fit_exponent(const std::vector<std::pair<u64, u64>>& n_delta) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, d] : n_delta) {
    if (n >= 2 && d >= 1) pts.emplace_back(std::log(static_cast<double>(n)), std::log(static_cast<double>(d)));
  }
  if (pts.size() < 2) throw Error(ErrorKind::kTooFewPoints, "need two usable rows");
  const auto k = static_cast<double>(pts.size());
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw Error(ErrorKind::kTooFewPoints, "all rows share one size");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  f.n_points = pts.size();
  return f;
}

inline FitResult fit_exponent(const SweepResult& result) {
  std::vector<std::pair<u64, u64>> pts;
  for (const Row& r : result.rows) pts.emplace_back(r.n, r.delta);
  return fit_exponent(pts);
}

/// (n, delta) columns of a sweep CSV.
inline std::vector<std::pair<u64, u64>> read_csv_n_delta(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::kParseError, "empty CSV");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, ',');) header.push_back(col);
  }
  const auto find = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorKind::kParseError, "CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ni = find("n");
  const std::size_t di = find("delta");
  std::vector<std::pair<u64, u64>> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() <= std::max(ni, di)) {
      throw Error(ErrorKind::kParseError, "line " + std::to_string(line_no) + ": short row");
    }
    out.emplace_back(io::detail::parse_u64(cells[ni], line_no),
                     io::detail::parse_u64(cells[di], line_no));
  }
  return out;
}

}  // namespace ffdist::sweep

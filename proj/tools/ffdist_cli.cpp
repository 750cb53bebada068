// Command-line front end: point-set generation, single-instance counting and
// verification, sweeps, exponent fits and the exact epsilon optimisation.
//
// Exit codes: 0 all checks pass, 1 an asserted inequality failed, 2 bad
// configuration or input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ffdist/ffdist.hpp"

namespace {

using namespace ffdist;

constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  unsigned jobs = 0;
  u64 seed = 0;
  bool seed_set = false;

  // gen
  u64 p = 0;
  std::string kind = "random";
  u64 n = 0;
  std::vector<u64> xs;
  std::vector<u64> ys;
  std::vector<u64> center{0, 0};
  u64 radius = 0;

  // count / verify / fit
  std::string input;
  bool fast = false;
  std::vector<std::string> verify;
  std::vector<std::string> report;
  std::string epsilon = "176/31605";
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::kIoError, "cannot write " + path);
  os << text;
}

std::vector<Scalar> to_scalars(const PrimeField& F, const std::vector<u64>& v) {
  std::vector<Scalar> out;
  for (u64 x : v) out.push_back(F.reduce_u(x));
  return out;
}

PointSet generate(const Options& o) {
  const PrimeField F(o.p);
  if (o.kind == "random") return gen_random(F, o.n, o.seed);
  if (o.kind == "line_subset") return gen_line_subset(F, o.n, o.seed);
  if (o.kind == "product") return gen_product(F, to_scalars(F, o.xs), to_scalars(F, o.ys));
  if (o.kind == "circle") {
    if (o.center.size() != 2) throw Error(ErrorKind::kConfigError, "--center takes x,y");
    return gen_circle(F, F.point(static_cast<i64>(o.center[0]), static_cast<i64>(o.center[1])),
                      F.reduce_u(o.radius));
  }
  throw Error(ErrorKind::kConfigError, "unknown kind '" + o.kind + "'");
}

PointSet input_set(const Options& o) {
  if (!o.input.empty()) return io::load_csv(o.input);
  if (o.p == 0) throw Error(ErrorKind::kConfigError, "give --input or --p with generator flags");
  return generate(o);
}

int cmd_gen(const Options& o) {
  write_output(o.out, io::to_csv(generate(o)));
  return 0;
}

int cmd_count(const Options& o) {
  const PointSet A = input_set(o);
  const DistanceHistogram nu = o.fast ? nu_fast(A) : nu_naive(A);
  if (o.format == "json") {
    nlohmann::json j;
    j["p"] = A.field().p();
    j["n"] = A.size();
    j["delta"] = nu.support_size();
    j["sigma_nu_sq"] = nu.sum_of_squares();
    const TripleCount t = isosceles_triples(A);
    j["triples"] = t.total;
    j["triples_nondegenerate"] = t.nondegenerate;
    j["energy"] = additive_energy(paraboloid_lift(A));
    write_output(o.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    io::write_histogram(os, nu);
    write_output(o.out, os.str());
  }
  return 0;
}

int cmd_verify(const Options& o) {
  const PointSet A = input_set(o);
  sweep::ExperimentSpec spec;
  spec.primes = {A.field().p()};
  std::vector<std::string> verify = o.verify;
  if (verify.empty()) verify.assign(sweep::kVerifiers.begin(), sweep::kVerifiers.end());
  for (const auto& v : verify) {
    if (!sweep::kVerifiers.contains(v)) throw Error(ErrorKind::kConfigError, "unknown verifier " + v);
    spec.verify.insert(v);
  }
  for (const auto& r : o.report) {
    if (!sweep::kReports.contains(r)) throw Error(ErrorKind::kConfigError, "unknown report " + r);
    spec.report.insert(r);
  }
  spec.epsilon = parse_rational(o.epsilon);
  sweep::Row row;
  row.p = A.field().p();
  row.construction = o.input.empty() ? o.kind : o.input;
  row.seed = o.seed;
  row = sweep::run_instance(spec, A, row);
  nlohmann::json j = row.report;
  j["p"] = row.p;
  j["n"] = row.n;
  j["delta"] = row.delta;
  j["sigma_nu_sq"] = row.sigma_nu_sq;
  j["triples"] = row.triples;
  j["pass"] = row.pass;
  write_output(o.out, j.dump(2) + "\n");
  return row.pass ? 0 : kExitAssertion;
}

int cmd_sweep(const Options& o) {
  if (o.config.empty()) throw Error(ErrorKind::kConfigError, "sweep needs --config");
  sweep::ExperimentSpec spec = sweep::load_spec(o.config);
  if (o.jobs > 0) spec.jobs = o.jobs;
  if (o.seed_set) spec.seed = o.seed;
  const std::string out = o.out.empty() ? spec.out : o.out;
  try {
    const sweep::SweepResult result = sweep::run(spec);
    write_output(out, sweep::serialize(result, o.format));
    for (const auto& row : result.rows) {
      if (!row.pass) return kExitAssertion;
    }
    return 0;
  } catch (const sweep::InstanceFailure& f) {
    std::cerr << "error: " << f.what() << "\ninstance:\n" << f.points_csv();
    return kExitAssertion;
  }
}

int cmd_fit(const Options& o) {
  std::ifstream is(o.input);
  if (!is) throw Error(ErrorKind::kIoError, "cannot read " + o.input);
  const sweep::FitResult f = sweep::fit_exponent(sweep::read_csv_n_delta(is));
  nlohmann::json j;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["r_squared"] = f.r_squared;
  j["n_points"] = f.n_points;
  j["reference_exponent"] = to_string(kMainExponent);
  j["reference_value"] = boost::rational_cast<double>(kMainExponent);
  write_output(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_optimize(const Options& o) {
  const EpsilonSolution s = epsilon_optimize();
  std::string binding;
  for (int b : s.binding) binding += (binding.empty() ? "" : ",") + std::to_string(b);
  if (o.format == "json") {
    nlohmann::json j;
    j["epsilon"] = to_string(s.epsilon);
    j["delta"] = to_string(s.delta);
    j["binding"] = s.binding;
    write_output(o.out, j.dump(2) + "\n");
  } else {
    write_output(o.out, "epsilon=" + to_string(s.epsilon) + "\ndelta=" + to_string(s.delta) +
                            "\nbinding=" + binding + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact distance, incidence and energy counts over F_p^2"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", o.seed, "64-bit seed")->each([&](const std::string&) { o.seed_set = true; });
  };
  auto add_gen = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "Prime modulus");
    sub->add_option("--kind", o.kind, "random, product, line_subset or circle");
    sub->add_option("--n", o.n, "Number of points (random, line_subset)");
    sub->add_option("--xs", o.xs, "X coordinates (product)")->delimiter(',');
    sub->add_option("--ys", o.ys, "Y coordinates (product)")->delimiter(',');
    sub->add_option("--center", o.center, "Circle center x,y")->delimiter(',');
    sub->add_option("--radius", o.radius, "Circle radius (a residue)");
  };

  auto* gen = app.add_subcommand("gen", "Emit a point set as CSV");
  add_common(gen);
  add_gen(gen);

  auto* count = app.add_subcommand("count", "Distance histogram and counts for one instance");
  add_common(count);
  add_gen(count);
  count->add_option("--input", o.input, "Point-set CSV");
  count->add_flag("--fast", o.fast, "Use the transform path for the histogram");

  auto* verify = app.add_subcommand("verify", "Run the verifier set on one instance");
  add_common(verify);
  add_gen(verify);
  verify->add_option("--input", o.input, "Point-set CSV");
  verify->add_option("--verify", o.verify, "Verifiers (default all)")->delimiter(',');
  verify->add_option("--report", o.report, "Reports: sdz, energy_ratio, bounds, richness")->delimiter(',');
  verify->add_option("--epsilon", o.epsilon, "Epsilon for the richness report, num/den");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a JSON experiment config");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--config", o.config, "Experiment config")->required();
  sweep_cmd->add_option("--jobs", o.jobs, "Worker threads");

  auto* fit = app.add_subcommand("fit", "Fit log(delta) against log(n) from a sweep CSV");
  add_common(fit);
  fit->add_option("--input", o.input, "Sweep CSV")->required();

  auto* opt = app.add_subcommand("optimize-epsilon", "Exact epsilon/delta optimisation");
  add_common(opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*count) return cmd_count(o);
    if (*verify) return cmd_verify(o);
    if (*sweep_cmd) return cmd_sweep(o);
    if (*fit) return cmd_fit(o);
    if (*opt) return cmd_optimize(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kAssertionFailed ? kExitAssertion : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

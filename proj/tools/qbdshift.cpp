// qbdshift: solve, generate and benchmark QBD instances.
//
//   qbdshift solve model.json [--via auto] [--json] [--out report.json]
//   qbdshift gen --class null --n 8 --seed 7 [--out model.json]
//   qbdshift bench --class null --n 8 --count 50 [--json]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbdshift/errors.hpp"
#include "qbdshift/generator.hpp"
#include "qbdshift/model_io.hpp"
#include "qbdshift/pipeline.hpp"
#include "qbdshift/report.hpp"

namespace {

bool emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream file(out, std::ios::binary);
  file << text;
  if (!file) {
    std::cerr << "qbdshift: cannot write " << out << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shifted cyclic reduction for quasi-birth-and-death processes"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a model file and certify the result");
  std::string model_path;
  qbd::SolveFlags flags;
  bool solve_json = false;
  std::string solve_out;
  solve->add_option("path", model_path, "Model file (JSON)")->required();
  std::string via = "auto";
  solve->add_option("--via", via, "Route: direct, right, left, double, auto")->capture_default_str();
  solve->add_option("--tol", flags.tol, "Cyclic reduction tolerance")->capture_default_str();
  solve->add_option("--max-iter", flags.max_iter, "Cyclic reduction step limit")->capture_default_str();
  solve->add_option("--samples", flags.samples, "Unit-circle samples for factorization checks")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  solve->add_flag("--json", solve_json, "Structured output");
  solve->add_option("--out", solve_out, "Write the report here (implies --json)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a seeded random model");
  qbd::GenOptions gen_opts;
  double gen_drift = 0.0;
  std::string gen_out;
  std::string gen_class;
  gen->add_option("--class", gen_class, "positive, null or transient")->required();
  gen->add_option("--n", gen_opts.n, "Number of phases")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_opts.seed, "Random seed")->capture_default_str();
  auto* drift_opt = gen->add_option("--drift", gen_drift, "Target drift (non-null classes)");
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Direct versus shifted cyclic reduction on a batch");
  qbd::BenchFlags bench_flags;
  double bench_drift = 0.0;
  bool bench_json = false;
  std::string bench_class = "null";
  bench->add_option("--class", bench_class, "positive, null or transient")->capture_default_str();
  bench->add_option("--n", bench_flags.n, "Number of phases")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--count", bench_flags.count, "Instances")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_flags.seed, "First seed")->capture_default_str();
  bench->add_option("--tol", bench_flags.tol, "Cyclic reduction tolerance")->capture_default_str();
  bench->add_option("--max-iter", bench_flags.max_iter, "Cyclic reduction step limit")->capture_default_str();
  auto* bench_drift_opt = bench->add_option("--drift", bench_drift, "Target drift (non-null classes)");
  bench->add_flag("--json", bench_json, "Structured output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qbd::kExitUsage;
  }

  try {
    if (*solve) flags.via = qbd::parse_route(via);
    if (*gen) gen_opts.kind = qbd::parse_recurrence(gen_class);
    if (*bench) bench_flags.kind = qbd::parse_recurrence(bench_class);
  } catch (const qbd::ParseError& e) {
    std::cerr << "qbdshift: " << e.what() << "\n";
    return qbd::kExitUsage;
  }

  if (*solve) {
    qbd::ModelFile file;
    try {
      file = qbd::read_model_file(model_path);
    } catch (const qbd::ParseError& e) {
      std::cerr << "qbdshift: " << e.what() << "\n";
      return qbd::kExitParse;
    }
    const qbd::SolveReport report = qbd::run_solve(file, flags, model_path);
    const bool json = solve_json || !solve_out.empty();
    if (!emit(json ? qbd::to_json(report) : qbd::to_text(report), solve_out)) return qbd::kExitUsage;
    if (!report.error.empty() && json) std::cerr << "qbdshift: " << report.error << "\n";
    return report.exit_code;
  }

  if (*gen) {
    if (*drift_opt) gen_opts.drift = gen_drift;
    try {
      const qbd::GeneratedModel gm = qbd::generate(gen_opts);
      qbd::ModelFile file;
      file.n = gen_opts.n;
      file.a_minus = gm.a_minus;
      file.a_zero = gm.a_zero;
      file.a_plus = gm.a_plus;
      file.name = "generated " + std::string(qbd::to_string(gm.kind));
      file.seed = gm.seed;
      return emit(qbd::write_model(file), gen_out) ? qbd::kExitOk : qbd::kExitUsage;
    } catch (const qbd::Error& e) {
      std::cerr << "qbdshift: " << e.what() << "\n";
      return qbd::kExitValidation;
    }
  }

  if (*bench_drift_opt) bench_flags.drift = bench_drift;
  const qbd::BenchReport report = qbd::run_bench(bench_flags);
  std::cout << (bench_json ? qbd::to_json(report) : qbd::to_text(report));
  return report.errors ? qbd::kExitSolver : qbd::kExitOk;
}

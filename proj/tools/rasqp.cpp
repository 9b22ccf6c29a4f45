// Command-line front end: solve problem files, run benchmark grids, write
// iteration traces and generate benchmark instances.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rasqp/rasqp.hpp"

namespace {

using namespace rasqp;
using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;

constexpr int kExitOptimal = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotOptimal = 2;

double default_tol(Family family) { return family == Family::Easy ? 1e-8 : 1e-10; }

struct SolverFlags {
  std::string solver = "ras";
  double tol = 1e-8;
  std::size_t max_solves = 10000;
  std::size_t kr_max_iterations = 200;
  bool kr_no_repeat_check = false;
  std::vector<double> probs;
  double sigma = 0.5;

  void add_to(CLI::App* cmd, bool with_tol) {
    cmd->add_option("--solver", solver, "ras | generic | kr | fletcher | brute")->capture_default_str();
    if (with_tol) cmd->add_option("--tol", tol, "tolerance on dual nonnegativity violation")->capture_default_str();
    cmd->add_option("--max-solves", max_solves, "solve cap for ras / generic")->capture_default_str();
    cmd->add_option("--kr-max-iterations", kr_max_iterations, "iteration cap for kr")->capture_default_str();
    cmd->add_flag("--kr-no-repeat-check", kr_no_repeat_check, "kr runs to its cap instead of stopping on a repeat");
    cmd->add_option("--probs", probs, "six change probabilities p1..p6 for ras")->delimiter(',')->expected(6);
    cmd->add_option("--sigma", sigma, "sigma for generic (constant probability 0.5 rule)")->capture_default_str();
  }

  SolverKind kind() const {
    const auto k = parse_solver_kind(solver);
    if (!k) throw QpError(ErrorCode::InvalidArgument, "unknown solver '" + solver + "'");
    return *k;
  }

  SolverSettings settings(double tolerance) const {
    SolverSettings s;
    s.tol = tolerance;
    s.max_solves = max_solves;
    s.kr_max_iterations = kr_max_iterations;
    s.kr_detect_repeats = !kr_no_repeat_check;
    s.sigma = sigma;
    if (!probs.empty()) std::copy(probs.begin(), probs.end(), s.probs.p.begin());
    s.probs.validate();
    return s;
  }
};

struct GeneratorFlags {
  std::string family;
  Index n = 0;
  std::optional<double> cond;
  std::optional<double> density;
  std::optional<double> epsilon;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--family", family, "easy | medium | hard")->required();
    cmd->add_option("--n", n, "dimension")->required();
    cmd->add_option("--cond", cond, "condition number (medium, hard)");
    cmd->add_option("--density", density, "density (medium)");
    cmd->add_option("--epsilon", epsilon, "identity shift (easy)");
  }

  GeneratorSpec spec(std::uint64_t seed) const {
    const auto f = parse_family(family);
    if (!f) throw QpError(ErrorCode::InvalidArgument, "unknown family '" + family + "'");
    GeneratorSpec s{*f, n, epsilon, density, cond, seed};
    s.validate();
    return s;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw QpError(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

std::string format_vector(const Vector& v) {
  std::ostringstream out;
  out.precision(15);
  for (Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

int exit_code(SolveStatus status) { return status == SolveStatus::Optimal ? kExitOptimal : kExitNotOptimal; }

int cmd_solve(const std::string& path, const SolverFlags& flags, std::uint64_t seed, bool as_json, bool print_x) {
  const ProblemFile file = read_problem_file(path);
  validate_problem(file.problem);
  const SolverKind kind = flags.kind();
  const SolveResult result = run_solver(kind, file.problem, flags.settings(flags.tol), seed);
  const KktResidual res = kkt_residual(file.problem, result.point);

  if (as_json) {
    json j;
    j["solver"] = to_string(kind);
    j["status"] = to_string(result.status);
    j["objective"] = result.objective;
    j["solves"] = result.solves;
    j["avgI"] = result.avg_subsystem_size;
    j["resamples"] = result.resamples;
    j["residual"] = {{"stationarity", res.stationarity},
                     {"primal", res.primal_viol},
                     {"dual", res.dual_viol},
                     {"complementarity", res.comp_viol}};
    j["x"] = std::vector<double>(result.point.x.data(), result.point.x.data() + result.point.x.size());
    std::cout << j.dump(2) << '\n';
  } else {
    std::printf("solver      %s\n", to_string(kind));
    std::printf("status      %s\n", to_string(result.status));
    std::printf("objective   %.15g\n", result.objective);
    std::printf("solves      %zu\n", result.solves);
    std::printf("avgI        %.3f\n", result.avg_subsystem_size);
    std::printf("residual    stationarity %.3e  primal %.3e  dual %.3e  complementarity %.3e\n", res.stationarity,
                res.primal_viol, res.dual_viol, res.comp_viol);
    if (print_x || file.problem.n() <= 20) std::printf("x           %s\n", format_vector(result.point.x).c_str());
  }
  return exit_code(result.status);
}

struct BenchFlags {
  std::string plan_path;
  std::string family;
  std::vector<Index> n;
  std::vector<double> cond;
  std::vector<double> density;
  std::vector<double> epsilon;
  std::vector<std::string> solvers{"ras", "kr"};
  std::size_t trials = 10;
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> tol;
  std::string output;
  std::string table;
  std::size_t workers = 0;
  double time_limit = 300.0;
};

BenchmarkPlan plan_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw QpError(ErrorCode::InvalidArgument, "cannot open plan " + path);
  const json j = json::parse(in);
  BenchmarkPlan plan;
  plan.trials = j.value("trials", std::size_t{10});
  plan.base_seed = j.value("base_seed", kDefaultSeed);
  plan.time_limit_s = j.value("time_limit_s", 300.0);
  plan.workers = j.value("workers", std::size_t{0});
  for (const json& c : j.at("cells")) {
    BenchmarkCell cell;
    const auto f = parse_family(c.at("family").get<std::string>());
    const auto s = parse_solver_kind(c.at("solver").get<std::string>());
    if (!f || !s) throw QpError(ErrorCode::InvalidArgument, "plan cell has unknown family or solver");
    cell.family = *f;
    cell.solver = *s;
    cell.n = c.at("n").get<Index>();
    if (c.contains("cond")) cell.cond = c["cond"].get<double>();
    if (c.contains("density")) cell.density = c["density"].get<double>();
    if (c.contains("epsilon")) cell.epsilon = c["epsilon"].get<double>();
    cell.settings.tol = c.value("tol", default_tol(cell.family));
    if (c.contains("probs")) {
      const auto p = c["probs"].get<std::vector<double>>();
      if (p.size() != 6) throw QpError(ErrorCode::InvalidArgument, "probs needs six values");
      std::copy(p.begin(), p.end(), cell.settings.probs.p.begin());
      cell.settings.probs.validate();
    }
    cell.generator(0).validate();
    plan.cells.push_back(cell);
  }
  return plan;
}

BenchmarkPlan plan_from_flags(const BenchFlags& f) {
  const auto family = parse_family(f.family);
  if (!family) throw QpError(ErrorCode::InvalidArgument, "--family must be easy, medium or hard");
  if (f.n.empty()) throw QpError(ErrorCode::InvalidArgument, "--n is required");
  auto axis = [&](const std::vector<double>& v, bool needed, const char* name) {
    if (needed && v.empty()) {
      throw QpError(ErrorCode::InvalidArgument, std::string(to_string(*family)) + " needs --" + name);
    }
    if (!needed && !v.empty()) {
      throw QpError(ErrorCode::InvalidArgument, std::string(to_string(*family)) + " does not take --" + name);
    }
    std::vector<std::optional<double>> out(v.begin(), v.end());
    if (out.empty()) out.emplace_back();
    return out;
  };
  const auto conds = axis(f.cond, *family != Family::Easy, "cond");
  const auto densities = axis(f.density, *family == Family::Medium, "density");
  const auto epsilons = axis(f.epsilon, *family == Family::Easy, "epsilon");

  BenchmarkPlan plan;
  plan.trials = f.trials;
  plan.base_seed = f.seed;
  plan.workers = f.workers;
  plan.time_limit_s = f.time_limit;
  for (Index n : f.n) {
    for (const auto& d : densities) {
      for (const auto& c : conds) {
        for (const auto& e : epsilons) {
          for (const std::string& name : f.solvers) {
            const auto kind = parse_solver_kind(name);
            if (!kind) throw QpError(ErrorCode::InvalidArgument, "unknown solver '" + name + "'");
            BenchmarkCell cell;
            cell.family = *family;
            cell.n = n;
            cell.density = d;
            cell.cond = c;
            cell.epsilon = e;
            cell.solver = *kind;
            cell.settings.tol = f.tol.value_or(default_tol(*family));
            cell.generator(0).validate();
            plan.cells.push_back(cell);
          }
        }
      }
    }
  }
  return plan;
}

int cmd_bench(const BenchFlags& f) {
  const BenchmarkPlan plan = f.plan_path.empty() ? plan_from_flags(f) : plan_from_json(f.plan_path);
  const std::vector<BenchmarkRecord> records = run_plan(plan);
  const std::string csv = emit_csv(records);
  const std::string table = emit_table(records);
  if (f.output.empty()) {
    std::cout << csv << '\n';
  } else {
    write_text(f.output, csv);
  }
  if (!f.table.empty()) write_text(f.table, table);
  std::cout << table;
  for (const auto& r : records) {
    if (!r.error.empty()) std::cerr << "cell error: " << r.error << '\n';
  }
  return kExitOptimal;
}

int cmd_trace(const GeneratorFlags& gen, const SolverFlags& flags, std::uint64_t seed, const std::string& output,
              bool no_time) {
  const GeneratorSpec spec = gen.spec(seed);
  const QpProblem problem = generate(spec);
  const SolverKind kind = flags.kind();
  const SolveResult result =
      run_solver(kind, problem, flags.settings(flags.tol > 0 ? flags.tol : default_tol(spec.family)), solver_seed(seed));
  const std::string csv = trace_csv(kind, result, !no_time);
  if (output.empty()) {
    std::cout << csv;
  } else {
    write_text(output, csv);
  }
  std::cerr << to_string(kind) << ": " << to_string(result.status) << " after " << result.solves << " solves\n";
  return exit_code(result.status);
}

int cmd_gen(const GeneratorFlags& gen, std::uint64_t seed, const std::string& output) {
  const GeneratorSpec spec = gen.spec(seed);
  const QpProblem problem = generate(spec);
  std::map<std::string, std::string> meta{{"family", to_string(spec.family)}, {"seed", std::to_string(seed)}};
  if (spec.cond) meta["cond"] = detail::format_optional(spec.cond);
  if (spec.density) meta["density"] = detail::format_optional(spec.density);
  if (spec.epsilon) meta["epsilon"] = detail::format_optional(spec.epsilon);
  const std::string text = write_problem_string(problem, meta);
  if (output.empty()) {
    std::cout << text;
  } else {
    write_text(output, text);
  }
  return kExitOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active set solvers for nonnegativity-constrained strictly convex QPs"};
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultSeed;

  auto* solve = app.add_subcommand("solve", "solve a problem file");
  std::string path;
  bool as_json = false;
  bool print_x = false;
  SolverFlags solve_flags;
  solve->add_option("path", path, "problem file")->required();
  solve_flags.add_to(solve, true);
  solve->add_option("--seed", seed, "random seed")->capture_default_str();
  solve->add_flag("--json", as_json, "machine-readable report");
  solve->add_flag("--print-x", print_x, "print the solution vector for any n");

  auto* bench = app.add_subcommand("bench", "run a benchmark grid");
  BenchFlags bf;
  bench->add_option("--plan", bf.plan_path, "JSON plan file (replaces the grid flags)");
  bench->add_option("--family", bf.family, "easy | medium | hard");
  bench->add_option("--n", bf.n, "dimensions")->delimiter(',');
  bench->add_option("--cond", bf.cond, "condition numbers")->delimiter(',');
  bench->add_option("--density", bf.density, "densities")->delimiter(',');
  bench->add_option("--epsilon", bf.epsilon, "identity shifts")->delimiter(',');
  bench->add_option("--solvers", bf.solvers, "solver names")->delimiter(',')->capture_default_str();
  bench->add_option("--trials", bf.trials, "trials per cell")->capture_default_str();
  bench->add_option("--seed", bf.seed, "base seed; trial t uses seed + t")->capture_default_str();
  bench->add_option("--tol", bf.tol, "dual tolerance (default 1e-8 easy, 1e-10 otherwise)");
  bench->add_option("--output", bf.output, "machine CSV path (stdout when omitted)");
  bench->add_option("--table", bf.table, "also write the human table here");
  bench->add_option("--workers", bf.workers, "worker threads (0 = hardware)")->capture_default_str();
  bench->add_option("--time-limit", bf.time_limit, "seconds per trial before it counts as failed")->capture_default_str();

  auto* trace = app.add_subcommand("trace", "write the per-solve trace of one generated instance");
  GeneratorFlags trace_gen;
  SolverFlags trace_flags;
  trace_flags.tol = 0.0;
  std::string trace_out;
  bool no_time = false;
  trace_gen.add_to(trace);
  trace_flags.add_to(trace, false);
  trace->add_option("--tol", trace_flags.tol, "dual tolerance (default 1e-8 easy, 1e-10 otherwise)");
  trace->add_option("--seed", seed, "instance seed")->capture_default_str();
  trace->add_option("--output", trace_out, "trace CSV path (stdout when omitted)");
  trace->add_flag("--no-time", no_time, "write 0 in the elapsed column for byte-reproducible output");

  auto* gen = app.add_subcommand("gen", "write a generated instance as a problem file");
  GeneratorFlags gen_flags;
  std::string gen_out;
  gen_flags.add_to(gen);
  gen->add_option("--seed", seed, "instance seed")->capture_default_str();
  gen->add_option("--output", gen_out, "problem file path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*solve) return cmd_solve(path, solve_flags, seed, as_json, print_x);
    if (*bench) return cmd_bench(bf);
    if (*trace) return cmd_trace(trace_gen, trace_flags, seed, trace_out, no_time);
    if (*gen) return cmd_gen(gen_flags, seed, gen_out);
  } catch (const QpError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "rasqp/generators.hpp"
#include "rasqp/problem_io.hpp"
#include "rasqp/solvers.hpp"

namespace rasqp {

/// One row of the benchmark grid: a generator setting and the solver run on it.
struct BenchmarkCell {
  Family family = Family::Hard;
  Index n = 0;
  std::optional<double> density;
  std::optional<double> cond;
  std::optional<double> epsilon;
  SolverKind solver = SolverKind::Ras;
  SolverSettings settings;

  GeneratorSpec generator(std::uint64_t seed) const { return {family, n, epsilon, density, cond, seed}; }
  auto key() const { return std::tie(family, n, density, cond, epsilon, solver); }
  auto generator_key() const { return std::tie(family, n, density, cond, epsilon); }
};

struct BenchmarkPlan {
  std::vector<BenchmarkCell> cells;
  std::size_t trials = 10;
  std::uint64_t base_seed = 1;
  double time_limit_s = 300.0;
  /// 0 uses std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

struct TrialRow {
  std::size_t trial = 0;
  double time_s = 0.0;
  std::size_t solves = 0;
  double avg_inactive = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  bool timed_out = false;

  bool failed() const {
    return timed_out || status == SolveStatus::CycleDetected || status == SolveStatus::IterationCapReached;
  }
};

struct BenchmarkRecord {
  Family family = Family::Hard;
  Index n = 0;
  std::optional<double> density;
  std::optional<double> cond;
  std::optional<double> epsilon;
  SolverKind solver = SolverKind::Ras;

  std::size_t trials = 0;
  double time_mean = std::numeric_limits<double>::quiet_NaN();
  double solve_mean = std::numeric_limits<double>::quiet_NaN();
  double avg_inactive_mean = std::numeric_limits<double>::quiet_NaN();
  std::size_t fail_count = 0;
  /// Trials that contributed to the means.
  std::size_t included = 0;
  std::vector<TrialRow> rows;
  /// Non-empty when the cell could not be generated.
  std::string error;
};

/// Seeds: trial t generates its problem from base_seed + t; the solver stream
/// is a splitmix64 scramble of the same value.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) { return base_seed + trial; }

inline std::uint64_t solver_seed(std::uint64_t problem_seed) {
  std::uint64_t z = problem_seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Fills the summary fields from `rows`. KR averages only its solved trials;
/// other solvers average every trial that finished inside the time limit
/// without a numerical failure.
inline void aggregate(BenchmarkRecord& rec) {
  rec.trials = rec.rows.size();
  rec.fail_count = 0;
  rec.included = 0;
  double t = 0.0, s = 0.0, a = 0.0;
  for (const TrialRow& row : rec.rows) {
    if (row.failed()) ++rec.fail_count;
    const bool include = !row.timed_out && row.status != SolveStatus::NumericalFailure &&
                         (rec.solver != SolverKind::Kr || row.status == SolveStatus::Optimal);
    if (!include) continue;
    ++rec.included;
    t += row.time_s;
    s += static_cast<double>(row.solves);
    a += row.avg_inactive;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto m = static_cast<double>(rec.included);
  rec.time_mean = rec.included ? t / m : nan;
  rec.solve_mean = rec.included ? s / m : nan;
  rec.avg_inactive_mean = rec.included ? a / m : nan;
}

inline std::vector<BenchmarkRecord> run_plan(const BenchmarkPlan& plan) {
  if (plan.trials < 1) throw QpError(ErrorCode::InvalidArgument, "trials must be at least 1");

  std::vector<BenchmarkRecord> records(plan.cells.size());
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    const BenchmarkCell& cell = plan.cells[c];
    BenchmarkRecord& rec = records[c];
    std::tie(rec.family, rec.n, rec.density, rec.cond, rec.epsilon, rec.solver) = cell.key();
    rec.rows.resize(plan.trials);
    cell.generator(0).validate();
  }

  // One task per (generator setting, trial): the problem is generated once and
  // every solver cell sharing the setting runs on it.
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    bool placed = false;
    for (auto& grp : groups) {
      if (plan.cells[grp.front()].generator_key() == plan.cells[c].generator_key()) {
        grp.push_back(c);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({c});
  }

  struct Task {
    std::size_t group;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (std::size_t grp = 0; grp < groups.size(); ++grp) {
    for (std::size_t t = 0; t < plan.trials; ++t) tasks.push_back({grp, t});
  }

  std::mutex error_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task task = tasks[k];
      const std::vector<std::size_t>& members = groups[task.group];
      const std::uint64_t seed = trial_seed(plan.base_seed, task.trial);
      std::optional<QpProblem> problem;
      try {
        problem = generate(plan.cells[members.front()].generator(seed));
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        for (std::size_t c : members) {
          if (records[c].error.empty()) records[c].error = e.what();
        }
        continue;
      }
      for (std::size_t c : members) {
        const BenchmarkCell& cell = plan.cells[c];
        Stopwatch clock;
        const SolveResult result = run_solver(cell.solver, *problem, cell.settings, solver_seed(seed));
        TrialRow& row = records[c].rows[task.trial];
        row.trial = task.trial;
        row.time_s = clock.seconds();
        row.solves = result.solves;
        row.avg_inactive = result.avg_subsystem_size;
        row.status = result.status;
        row.timed_out = row.time_s > plan.time_limit_s;
      }
    }
  };

  std::size_t workers = plan.workers ? plan.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(tasks.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (BenchmarkRecord& rec : records) {
    if (!rec.error.empty()) rec.rows.clear();
    aggregate(rec);
  }
  return records;
}

namespace detail {

inline std::string format_optional(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

inline std::string format_g(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string format_f(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline constexpr const char* kBenchCsvHeader = "family,n,density,cond,epsilon,solver,trial,time_s,solves,avgI,status";
inline constexpr const char* kTraceCsvHeader = "solver,iter,elapsed_s,infeasible,inactive_size";

/// Machine format: one line per trial, full precision, stable field names.
inline std::string emit_csv(const std::vector<BenchmarkRecord>& records) {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  for (const BenchmarkRecord& rec : records) {
    for (const TrialRow& row : rec.rows) {
      out << to_string(rec.family) << ',' << rec.n << ',' << detail::format_optional(rec.density) << ','
          << detail::format_optional(rec.cond) << ',' << detail::format_optional(rec.epsilon) << ','
          << to_string(rec.solver) << ',' << row.trial << ',' << detail::format_optional(row.time_s) << ','
          << row.solves << ',' << detail::format_optional(row.avg_inactive) << ','
          << (row.timed_out ? "TimeLimitExceeded" : to_string(row.status)) << '\n';
    }
  }
  return out.str();
}

/// Rebuilds records from emit_csv output (rows grouped by cell, first-seen order).
inline std::vector<BenchmarkRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<BenchmarkRecord> records;
  auto fail = [&](const std::string& msg) {
    throw QpError(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + msg,
                  static_cast<std::int64_t>(line_no));
  };
  auto opt = [&](const std::string& f) -> std::optional<double> {
    if (f.empty()) return std::nullopt;
    return detail::parse_number(f, line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kBenchCsvHeader) fail("unexpected header");
      continue;
    }
    const auto f = detail::split_csv(line);
    if (f.size() != 11) fail("expected 11 fields");
    BenchmarkRecord key;
    const auto family = parse_family(f[0]);
    const auto solver = parse_solver_kind(f[5]);
    if (!family || !solver) fail("unknown family or solver");
    key.family = *family;
    key.n = detail::parse_index(f[1], line_no);
    key.density = opt(f[2]);
    key.cond = opt(f[3]);
    key.epsilon = opt(f[4]);
    key.solver = *solver;

    TrialRow row;
    row.trial = static_cast<std::size_t>(detail::parse_index(f[6], line_no));
    row.time_s = detail::parse_number(f[7], line_no);
    row.solves = static_cast<std::size_t>(detail::parse_index(f[8], line_no));
    row.avg_inactive = detail::parse_number(f[9], line_no);
    bool known = false;
    if (f[10] == "TimeLimitExceeded") {
      row.timed_out = true;
      known = true;
    }
    for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::IterationCapReached, SolveStatus::CycleDetected,
                          SolveStatus::NumericalFailure}) {
      if (f[10] == to_string(s)) {
        row.status = s;
        known = true;
      }
    }
    if (!known) fail("unknown status '" + f[10] + "'");

    auto same = [&](const BenchmarkRecord& r) {
      return std::tie(r.family, r.n, r.density, r.cond, r.epsilon, r.solver) ==
             std::tie(key.family, key.n, key.density, key.cond, key.epsilon, key.solver);
    };
    auto it = std::find_if(records.begin(), records.end(), same);
    if (it == records.end()) {
      records.push_back(key);
      it = records.end() - 1;
    }
    it->rows.push_back(row);
  }
  for (BenchmarkRecord& rec : records) aggregate(rec);
  return records;
}

/// Human table: one line per generator setting, then time / solve / avgI /
/// fail for each solver in first-seen order.
inline std::string emit_table(const std::vector<BenchmarkRecord>& records) {
  std::vector<SolverKind> solvers;
  for (const auto& r : records) {
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) solvers.push_back(r.solver);
  }
  std::ostringstream out;
  auto col = [&out](const std::string& s, int w) { out << std::setw(w) << s; };
  col("family", 8);
  col("n", 7);
  col("dens", 8);
  col("cond", 10);
  col("eps", 10);
  for (SolverKind s : solvers) {
    const std::string p = to_string(s);
    col(p + ".time", 12);
    col(p + ".solve", 11);
    col(p + ".avgI", 11);
    col(p + ".fail", 10);
  }
  out << '\n';

  std::vector<std::size_t> done(records.size(), 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (done[i]) continue;
    const auto& head = records[i];
    auto gkey = [](const BenchmarkRecord& r) { return std::tie(r.family, r.n, r.density, r.cond, r.epsilon); };
    col(to_string(head.family), 8);
    col(std::to_string(head.n), 7);
    col(head.density ? detail::format_g(*head.density, 3) : "-", 8);
    col(head.cond ? detail::format_g(*head.cond, 3) : "-", 10);
    col(head.epsilon ? detail::format_g(*head.epsilon, 3) : "-", 10);
    for (SolverKind s : solvers) {
      const BenchmarkRecord* match = nullptr;
      for (std::size_t j = i; j < records.size(); ++j) {
        if (!done[j] && records[j].solver == s && gkey(records[j]) == gkey(head)) {
          match = &records[j];
          done[j] = 1;
          break;
        }
      }
      if (!match || !match->error.empty()) {
        col(match ? "error" : "-", 12);
        col("-", 11);
        col("-", 11);
        col("-", 10);
      } else {
        col(detail::format_g(match->time_mean, 3), 12);
        col(detail::format_f(match->solve_mean, 1), 11);
        col(detail::format_f(match->avg_inactive_mean, 3), 11);
        col(std::to_string(match->fail_count), 10);
      }
    }
    out << '\n';
  }
  return out.str();
}

/// One row per counted solve: solver,iter,elapsed_s,infeasible,inactive_size.
/// Without `with_time` the elapsed column is written as 0.
inline std::string trace_csv(SolverKind solver, const SolveResult& result, bool with_time = true) {
  std::ostringstream out;
  out << kTraceCsvHeader << '\n';
  for (const IterationRecord& row : result.trace) {
    out << to_string(solver) << ',' << row.iteration << ',' << (with_time ? detail::format_g(row.elapsed_s, 9) : "0")
        << ',' << row.infeasible() << ',' << row.inactive_size << '\n';
  }
  return out.str();
}

}  // namespace rasqp

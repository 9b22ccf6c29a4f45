// Solves one hard instance with each iterative solver and prints a short report.

#include <cstdio>

#include "rasqp/rasqp.hpp"

int main() {
  using namespace rasqp;
  const QpProblem problem = gen_hard(200, 1e10, 7);

  SolverSettings settings;
  settings.tol = 1e-10;
  for (SolverKind kind : {SolverKind::Ras, SolverKind::Kr, SolverKind::Fletcher}) {
    const SolveResult r = run_solver(kind, problem, settings, 7);
    const KktResidual res = kkt_residual(problem, r.point);
    std::printf("%-9s %-20s solves %5zu  avgI %7.2f  objective %.12g  stationarity %.2e\n", to_string(kind),
                to_string(r.status), r.solves, r.avg_subsystem_size, r.objective, res.stationarity);
  }
  return 0;
}

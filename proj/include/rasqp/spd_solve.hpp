#pragma once

#include <string>

#include "rasqp/model.hpp"

namespace rasqp {

/// x_I solves Q_{I,I} x_I = -g_I; s_A = Q_{A,I} x_I + g_A.
struct SubsystemSolution {
  Vector x_inactive;
  Vector s_active;
  Index subsystem_size = 0;
};

struct SpdSolveOptions {
  /// Sparse problems switch from dense to sparse Cholesky above this |I|.
  Index dense_threshold = 1024;
};

/// Reduced KKT solve for the partition (inactive, active). One fresh Cholesky
/// factorization of Q_{I,I} per call; counting is left to the caller.
inline SubsystemSolution solve_subsystem(const QpProblem& problem, const IndexSet& inactive, const IndexSet& active,
                                         const SpdSolveOptions& options = {}) {
  const Index n = problem.n();
  if (!is_partition(n, inactive, active)) {
    throw QpError(ErrorCode::InvalidPartition, "inactive and active sets do not partition {1..n}");
  }
  const SymmetricMatrix& q = problem.q();
  const Vector& g = problem.g();

  SubsystemSolution out;
  out.subsystem_size = static_cast<Index>(inactive.size());
  const Vector g_inactive = g(inactive.values());

  if (!inactive.empty()) {
    if (q.is_sparse() && out.subsystem_size > options.dense_threshold) {
      Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<Index>> llt(q.principal_sparse(inactive));
      if (llt.info() != Eigen::Success) {
        throw QpError(ErrorCode::FactorizationFailure,
                      "sparse Cholesky of Q_II failed, |I| = " + std::to_string(inactive.size()));
      }
      out.x_inactive = llt.solve(-g_inactive);
    } else {
      Eigen::LLT<DenseMatrix> llt(q.block(inactive, inactive));
      if (llt.info() != Eigen::Success) {
        throw QpError(ErrorCode::FactorizationFailure,
                      "Cholesky of Q_II failed, |I| = " + std::to_string(inactive.size()));
      }
      out.x_inactive = llt.solve(-g_inactive);
    }
  }

  if (active.empty()) {
    out.s_active = Vector(0);
  } else if (inactive.empty()) {
    out.s_active = g(active.values());
  } else if (q.is_sparse()) {
    Vector x = Vector::Zero(n);
    x(inactive.values()) = out.x_inactive;
    out.s_active = (q.multiply(x) + g)(active.values());
  } else {
    out.s_active = q.dense_storage()(active.values(), inactive.values()) * out.x_inactive + g(active.values());
  }
  return out;
}

/// Scatters a subsystem solution to full length: x_A = 0 and s_I = 0 exactly.
inline KktPoint embed_point(Index n, const IndexSet& inactive, const IndexSet& active, const SubsystemSolution& sol) {
  if (static_cast<Index>(inactive.size()) != sol.x_inactive.size() ||
      static_cast<Index>(active.size()) != sol.s_active.size() || !is_partition(n, inactive, active)) {
    throw QpError(ErrorCode::DimensionMismatch, "subsystem solution does not match the partition");
  }
  KktPoint p{Vector::Zero(n), Vector::Zero(n)};
  p.x(inactive.values()) = sol.x_inactive;
  p.s(active.values()) = sol.s_active;
  return p;
}

}  // namespace rasqp

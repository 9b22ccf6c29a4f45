#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "rasqp/error.hpp"
#include "rasqp/index_set.hpp"

namespace rasqp {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;
using Triplet = Eigen::Triplet<double, Index>;

/// Largest tolerated |Q_ij - Q_ji| relative to max|Q| before construction
/// rejects the matrix instead of symmetrizing it.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Symmetric matrix stored either dense (contiguous) or sparse (compressed
/// columns built from canonicalized triplets). Exactly symmetric once built.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  static SymmetricMatrix dense(DenseMatrix m) {
    if (m.rows() != m.cols()) throw QpError(ErrorCode::DimensionMismatch, "matrix is not square");
    const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    const double asym = m.size() ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > kSymmetryTolerance * scale) {
      throw QpError(ErrorCode::NotSymmetric, "max asymmetry " + std::to_string(asym));
    }
    if (asym > 0.0) m = 0.5 * (m + m.transpose()).eval();
    SymmetricMatrix out;
    out.storage_ = std::move(m);
    return out;
  }

  static SymmetricMatrix sparse(SparseMatrix m) {
    if (m.rows() != m.cols()) throw QpError(ErrorCode::DimensionMismatch, "matrix is not square");
    m.makeCompressed();
    double scale = 0.0;
    for (Index k = 0; k < m.nonZeros(); ++k) scale = std::max(scale, std::abs(m.valuePtr()[k]));
    SparseMatrix mt = m.transpose();
    SparseMatrix diff = m - mt;
    double asym = 0.0;
    for (Index k = 0; k < diff.nonZeros(); ++k) asym = std::max(asym, std::abs(diff.valuePtr()[k]));
    if (asym > kSymmetryTolerance * scale) {
      throw QpError(ErrorCode::NotSymmetric, "max asymmetry " + std::to_string(asym));
    }
    if (asym > 0.0) m = (0.5 * (m + mt)).eval();
    m.prune(0.0);
    m.makeCompressed();
    SymmetricMatrix out;
    out.storage_ = std::move(m);
    return out;
  }

  /// Duplicate (i, j) entries are summed.
  static SymmetricMatrix from_triplets(Index n, const std::vector<Triplet>& entries) {
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    return sparse(std::move(m));
  }

  Index size() const {
    return std::visit([](const auto& m) { return static_cast<Index>(m.rows()); }, storage_);
  }
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(storage_); }
  const DenseMatrix& dense_storage() const { return std::get<DenseMatrix>(storage_); }
  const SparseMatrix& sparse_storage() const { return std::get<SparseMatrix>(storage_); }

  Index nonzeros() const {
    if (is_sparse()) return sparse_storage().nonZeros();
    return static_cast<Index>((dense_storage().array() != 0.0).count());
  }

  double operator()(Index i, Index j) const {
    if (is_sparse()) return sparse_storage().coeff(i, j);
    return dense_storage()(i, j);
  }

  Vector multiply(const Vector& x) const {
    if (is_sparse()) return sparse_storage() * x;
    return dense_storage() * x;
  }

  DenseMatrix to_dense() const {
    if (is_sparse()) return DenseMatrix(sparse_storage());
    return dense_storage();
  }

  /// Dense copy of Q_{rows, cols}.
  DenseMatrix block(const IndexSet& rows, const IndexSet& cols) const {
    if (!is_sparse()) return dense_storage()(rows.values(), cols.values());
    DenseMatrix out = DenseMatrix::Zero(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    const std::vector<Index> local = local_positions(rows);
    const SparseMatrix& m = sparse_storage();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (SparseMatrix::InnerIterator it(m, cols[c]); it; ++it) {
        const Index r = local[static_cast<std::size_t>(it.row())];
        if (r >= 0) out(r, static_cast<Index>(c)) = it.value();
      }
    }
    return out;
  }

  /// Sparse copy of the principal submatrix Q_{I,I}; requires sparse storage.
  SparseMatrix principal_sparse(const IndexSet& inactive) const {
    const std::vector<Index> local = local_positions(inactive);
    const SparseMatrix& m = sparse_storage();
    std::vector<Triplet> entries;
    for (std::size_t c = 0; c < inactive.size(); ++c) {
      for (SparseMatrix::InnerIterator it(m, inactive[c]); it; ++it) {
        const Index r = local[static_cast<std::size_t>(it.row())];
        if (r >= 0) entries.emplace_back(r, static_cast<Index>(c), it.value());
      }
    }
    const auto k = static_cast<Index>(inactive.size());
    SparseMatrix out(k, k);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
  }

 private:
  std::vector<Index> local_positions(const IndexSet& s) const {
    std::vector<Index> local(static_cast<std::size_t>(size()), -1);
    for (std::size_t k = 0; k < s.size(); ++k) local[static_cast<std::size_t>(s[k])] = static_cast<Index>(k);
    return local;
  }

  std::variant<DenseMatrix, SparseMatrix> storage_{DenseMatrix()};
};

/// min 1/2 x'Qx + g'x  subject to  x >= 0, with Q symmetric positive definite.
class QpProblem {
 public:
  QpProblem(SymmetricMatrix q, Vector g) : q_(std::move(q)), g_(std::move(g)) {
    if (q_.size() < 1) throw QpError(ErrorCode::InvalidArgument, "dimension must be at least 1");
    if (g_.size() != q_.size()) {
      throw QpError(ErrorCode::DimensionMismatch,
                    "g has length " + std::to_string(g_.size()) + ", Q is " + std::to_string(q_.size()));
    }
  }

  QpProblem(DenseMatrix q, Vector g) : QpProblem(SymmetricMatrix::dense(std::move(q)), std::move(g)) {}

  Index n() const { return q_.size(); }
  const SymmetricMatrix& q() const { return q_; }
  const Vector& g() const { return g_; }

 private:
  SymmetricMatrix q_;
  Vector g_;
};

/// Primal x and multipliers s of the system Qx + g - s = 0, x's = 0, x, s >= 0.
struct KktPoint {
  Vector x;
  Vector s;
};

enum class SolveStatus { Optimal, IterationCapReached, CycleDetected, NumericalFailure };

inline const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::IterationCapReached: return "IterationCapReached";
    case SolveStatus::CycleDetected: return "CycleDetected";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

/// One row per counted subsystem solve.
struct IterationRecord {
  std::size_t iteration = 0;        // 1-based solve number
  std::size_t infeasible_inactive = 0;  // |Im|
  std::size_t infeasible_active = 0;    // |Am|
  std::size_t inactive_size = 0;        // |I|
  double elapsed_s = 0.0;
  double objective = 0.0;  // objective of the iterate after this solve

  std::size_t infeasible() const { return infeasible_inactive + infeasible_active; }
};

struct SolveResult {
  KktPoint point;
  SolveStatus status = SolveStatus::NumericalFailure;
  std::size_t solves = 0;
  double avg_subsystem_size = 0.0;
  double objective = 0.0;
  std::vector<IterationRecord> trace;
  /// Uncounted redraws after an empty exchange (random active set only).
  std::size_t resamples = 0;
  /// Inactive set of every counted solve, filled when set recording is on.
  std::vector<IndexSet> inactive_sets;
  /// Primal iterate after every counted solve, filled when iterate recording is on.
  std::vector<Vector> iterates;
};

inline double objective(const QpProblem& problem, const Vector& x) {
  if (x.size() != problem.n()) throw QpError(ErrorCode::DimensionMismatch, "x has wrong length");
  return 0.5 * x.dot(problem.q().multiply(x)) + problem.g().dot(x);
}

/// Stationarity tolerance used by the residual checker and the brute-force oracle.
inline double stationarity_tolerance(const QpProblem& problem) {
  return 1e-8 * (1.0 + problem.g().cwiseAbs().maxCoeff());
}

struct KktResidual {
  double stationarity = 0.0;  // max|Qx + g - s|
  double primal_viol = 0.0;   // max(0, -min x)
  double dual_viol = 0.0;     // max(0, -min s)
  double comp_viol = 0.0;     // |x's|
};

inline KktResidual kkt_residual(const QpProblem& problem, const KktPoint& point) {
  if (point.x.size() != problem.n() || point.s.size() != problem.n()) {
    throw QpError(ErrorCode::DimensionMismatch, "point has wrong length");
  }
  KktResidual r;
  r.stationarity = (problem.q().multiply(point.x) + problem.g() - point.s).cwiseAbs().maxCoeff();
  r.primal_viol = std::max(0.0, -point.x.minCoeff());
  r.dual_viol = std::max(0.0, -point.s.minCoeff());
  r.comp_viol = std::abs(point.x.dot(point.s));
  return r;
}

/// Optimality certificate: stationarity within tolerance, x >= 0 and x's = 0
/// exactly, dual violation within `tol`.
inline bool is_kkt_point(const QpProblem& problem, const KktPoint& point, double tol) {
  const KktResidual r = kkt_residual(problem, point);
  return r.stationarity <= stationarity_tolerance(problem) && r.primal_viol == 0.0 && r.dual_viol <= tol &&
         r.comp_viol == 0.0;
}

namespace detail {

/// Unblocked Cholesky returning the 0-based column of the first non-positive
/// pivot, or -1 on success.
inline Index first_failing_pivot(DenseMatrix a) {
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j) {
    double d = a(j, j) - a.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) return j;
    d = std::sqrt(d);
    a(j, j) = d;
    for (Index i = j + 1; i < n; ++i) a(i, j) = (a(i, j) - a.row(i).head(j).dot(a.row(j).head(j))) / d;
  }
  return -1;
}

}  // namespace detail

/// Throws NotPositiveDefinite (detail() = failing pivot) unless Q is positive
/// definite. Symmetry is already guaranteed by SymmetricMatrix.
inline void validate_problem(const QpProblem& problem) {
  const SymmetricMatrix& q = problem.q();
  bool ok = false;
  if (q.is_sparse()) {
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<Index>> llt(q.sparse_storage());
    ok = llt.info() == Eigen::Success;
  } else {
    Eigen::LLT<DenseMatrix> llt(q.dense_storage());
    ok = llt.info() == Eigen::Success;
  }
  if (ok) return;
  const Index pivot = detail::first_failing_pivot(q.to_dense());
  throw QpError(ErrorCode::NotPositiveDefinite, "Cholesky breaks down at pivot " + std::to_string(pivot), pivot);
}

/// Steady-clock stopwatch started on construction.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace rasqp

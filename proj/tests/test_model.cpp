#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace rasqp;

namespace {

QpProblem one_d(double q, double g) { return QpProblem(DenseMatrix::Constant(1, 1, q), Vector::Constant(1, g)); }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

}  // namespace

TEST(Objective, Examples) {
  EXPECT_DOUBLE_EQ(objective(one_d(2, -4), vec({2})), -4.0);
  const QpProblem p(DenseMatrix{{2, 0}, {0, 2}}, vec({-2, -2}));
  EXPECT_DOUBLE_EQ(objective(p, vec({1, 1})), -2.0);
  EXPECT_EQ(objective(p, Vector::Zero(2)), 0.0);
  EXPECT_EQ(objective(testkit::random_dense_problem(7, 3), Vector::Zero(7)), 0.0);
}

TEST(KktResidual, Examples) {
  auto r = kkt_residual(one_d(2, -4), {vec({2}), vec({0})});
  EXPECT_EQ(r.stationarity, 0.0);
  EXPECT_EQ(r.primal_viol, 0.0);
  EXPECT_EQ(r.dual_viol, 0.0);
  EXPECT_EQ(r.comp_viol, 0.0);

  r = kkt_residual(one_d(2, 4), {vec({0}), vec({4})});
  EXPECT_EQ(r.stationarity, 0.0);
  EXPECT_EQ(r.comp_viol, 0.0);

  r = kkt_residual(one_d(2, 4), {vec({1}), vec({0})});
  EXPECT_DOUBLE_EQ(r.stationarity, 6.0);
  EXPECT_EQ(r.primal_viol, 0.0);
  EXPECT_EQ(r.dual_viol, 0.0);
  EXPECT_EQ(r.comp_viol, 0.0);

  r = kkt_residual(one_d(2, 4), {vec({-1}), vec({-3})});
  EXPECT_DOUBLE_EQ(r.primal_viol, 1.0);
  EXPECT_DOUBLE_EQ(r.dual_viol, 3.0);
  EXPECT_DOUBLE_EQ(r.comp_viol, 3.0);
}

TEST(KktResidual, LengthMismatchThrows) {
  try {
    kkt_residual(one_d(2, 4), {vec({1, 2}), vec({0, 0})});
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(IsKktPoint, AcceptsOnlyCertificates) {
  const QpProblem p = one_d(2, -4);
  EXPECT_TRUE(is_kkt_point(p, {vec({2}), vec({0})}, 1e-8));
  EXPECT_FALSE(is_kkt_point(p, {vec({1}), vec({0})}, 1e-8));
  EXPECT_FALSE(is_kkt_point(p, {vec({0}), vec({-4})}, 1e-8));
}

TEST(ValidateProblem, Examples) {
  EXPECT_NO_THROW(validate_problem(QpProblem(DenseMatrix::Identity(2, 2), Vector::Zero(2))));
  try {
    validate_problem(QpProblem(DenseMatrix{{1, 2}, {2, 1}}, Vector::Zero(2)));
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    EXPECT_EQ(e.detail(), 1);
  }
  try {
    validate_problem(one_d(0, 1));
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    EXPECT_EQ(e.detail(), 0);
  }
}

TEST(ValidateProblem, SparseStorage) {
  std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}};
  const QpProblem bad(SymmetricMatrix::from_triplets(2, t), Vector::Zero(2));
  EXPECT_THROW(validate_problem(bad), QpError);
  std::vector<Triplet> d{{0, 0, 3.0}, {1, 1, 1.0}};
  EXPECT_NO_THROW(validate_problem(QpProblem(SymmetricMatrix::from_triplets(2, d), Vector::Zero(2))));
}

TEST(SymmetricMatrix, RejectsAsymmetry) {
  try {
    SymmetricMatrix::dense(DenseMatrix{{1, 0.5}, {0.4, 1}});
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
  const SymmetricMatrix q = SymmetricMatrix::dense(DenseMatrix{{1, 0.5 + 1e-15}, {0.5, 1}});
  EXPECT_EQ(q(0, 1), q(1, 0));
  EXPECT_THROW(SymmetricMatrix::dense(DenseMatrix(2, 3)), QpError);
}

TEST(SymmetricMatrix, SparseAndDenseAgree) {
  const QpProblem p = testkit::random_dense_problem(9, 11);
  const DenseMatrix d = p.q().to_dense();
  SparseMatrix s = d.sparseView();
  const SymmetricMatrix sq = SymmetricMatrix::sparse(s);
  const IndexSet rows{0, 3, 4, 8};
  const IndexSet cols{1, 2, 5};
  EXPECT_EQ(sq.block(rows, cols), p.q().block(rows, cols));
  EXPECT_EQ(DenseMatrix(sq.principal_sparse(rows)), p.q().block(rows, rows));
  const Vector x = Vector::LinSpaced(9, -1, 1);
  EXPECT_LE((sq.multiply(x) - p.q().multiply(x)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(sq.nonzeros(), 81);
}

TEST(QpProblem, RejectsBadShapes) {
  EXPECT_THROW(QpProblem(DenseMatrix::Identity(2, 2), Vector::Zero(3)), QpError);
  EXPECT_THROW(QpProblem(DenseMatrix(0, 0), Vector(0)), QpError);
}

TEST(SolveStatus, Names) {
  EXPECT_STREQ(to_string(SolveStatus::Optimal), "Optimal");
  EXPECT_STREQ(to_string(SolveStatus::CycleDetected), "CycleDetected");
  EXPECT_STREQ(to_string(SolveStatus::IterationCapReached), "IterationCapReached");
  EXPECT_STREQ(to_string(SolveStatus::NumericalFailure), "NumericalFailure");
}

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/QR>

#include "rasqp/model.hpp"
#include "rasqp/rng.hpp"

namespace rasqp {

enum class Family { Easy, Medium, Hard };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Easy: return "easy";
    case Family::Medium: return "medium";
    case Family::Hard: return "hard";
  }
  return "unknown";
}

inline std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::Easy, Family::Medium, Family::Hard}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

/// Lower bandwidth kept in the easy-case factor P.
inline constexpr Index kEasyBandwidth = 100;
/// Fraction of band entries of P drawn nonzero.
inline constexpr double kEasyFactorDensity = 0.1;

/// Banded sparse family: P = (10%-dense standard normal + I) restricted to the lower
/// band of width 100, Q = P P' + epsilon I, g standard normal.
inline QpProblem gen_easy(Index n, double epsilon, std::uint64_t seed) {
  if (n < 1) throw QpError(ErrorCode::InvalidArgument, "n must be at least 1");
  if (!(epsilon > 0.0)) throw QpError(ErrorCode::InvalidArgument, "epsilon must be positive");
  Rng rng(seed);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(n) * 12);
  for (Index j = 0; j < n; ++j) {
    entries.emplace_back(j, j, 1.0);
    const Index last = std::min(n - 1, j + kEasyBandwidth);
    for (Index i = j; i <= last; ++i) {
      if (rng.uniform() < kEasyFactorDensity) entries.emplace_back(i, j, rng.normal());
    }
  }
  SparseMatrix p(n, n);
  p.setFromTriplets(entries.begin(), entries.end());
  SparseMatrix pt = p.transpose();
  SparseMatrix q = (p * pt).pruned();
  SparseMatrix shift(n, n);
  shift.setIdentity();
  q += epsilon * shift;

  Vector g(n);
  for (Index i = 0; i < n; ++i) g[i] = rng.normal();
  return QpProblem(SymmetricMatrix::sparse(std::move(q)), std::move(g));
}

struct MediumReport {
  double achieved_density = 0.0;
  bool density_reached = false;
  std::size_t rotations = 0;
};

/// Sparse family with prescribed spectrum: eigenvalues
/// geometrically spaced on [1/cond, 1] are placed on the diagonal, then random
/// plane rotations Q <- G Q G' on random index pairs fill the matrix until the
/// requested density is reached or 20 x (target nonzeros) rotations are spent.
/// Rotations preserve the spectrum, so cond(Q) = cond up to rounding.
/// g is standard normal.
inline QpProblem gen_medium(Index n, double density, double cond, std::uint64_t seed, MediumReport* report = nullptr) {
  if (n < 2) throw QpError(ErrorCode::InvalidArgument, "n must be at least 2");
  if (!(density > 0.0 && density <= 1.0)) throw QpError(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
  if (!(cond >= 1.0)) throw QpError(ErrorCode::InvalidArgument, "cond must be at least 1");
  Rng rng(seed);

  // rows[i] holds row i (== column i); kept exactly symmetric.
  std::vector<std::map<Index, double>> rows(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    rows[static_cast<std::size_t>(k)][k] = std::pow(cond, -static_cast<double>(k) / static_cast<double>(n - 1));
  }
  auto row = [&rows](Index i) -> std::map<Index, double>& { return rows[static_cast<std::size_t>(i)]; };
  auto set_entry = [&](Index i, Index j, double v, std::size_t& nnz) {
    auto& r = row(i);
    auto it = r.find(j);
    if (v == 0.0) {
      if (it != r.end()) {
        r.erase(it);
        --nnz;
      }
    } else if (it == r.end()) {
      r.emplace(j, v);
      ++nnz;
    } else {
      it->second = v;
    }
  };

  const auto target = static_cast<std::size_t>(std::ceil(density * static_cast<double>(n) * static_cast<double>(n)));
  const std::size_t budget = 20 * target;
  std::size_t nnz = static_cast<std::size_t>(n);
  std::size_t rotations = 0;

  // A scalar multiple of I is invariant under rotation.
  const bool scalar = cond == 1.0;
  while (!scalar && nnz < target && rotations < budget) {
    const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    ++rotations;

    auto value = [&](Index r, Index col) {
      const auto& m = row(r);
      auto it = m.find(col);
      return it == m.end() ? 0.0 : it->second;
    };
    const double aii = value(i, i), ajj = value(j, j), aij = value(i, j);

    std::vector<Index> support;
    for (const auto& [k, v] : row(i)) {
      if (k != i && k != j) support.push_back(k);
    }
    for (const auto& [k, v] : row(j)) {
      if (k != i && k != j) support.push_back(k);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    for (Index k : support) {
      const double aik = value(i, k), ajk = value(j, k);
      const double new_ik = c * aik - s * ajk;
      const double new_jk = s * aik + c * ajk;
      set_entry(i, k, new_ik, nnz);
      set_entry(k, i, new_ik, nnz);
      set_entry(j, k, new_jk, nnz);
      set_entry(k, j, new_jk, nnz);
    }
    // 2x2 block G B G'.
    const double new_ii = c * c * aii - 2.0 * c * s * aij + s * s * ajj;
    const double new_jj = s * s * aii + 2.0 * c * s * aij + c * c * ajj;
    const double new_ij = c * s * (aii - ajj) + (c * c - s * s) * aij;
    set_entry(i, i, new_ii, nnz);
    set_entry(j, j, new_jj, nnz);
    set_entry(i, j, new_ij, nnz);
    set_entry(j, i, new_ij, nnz);
  }

  std::vector<Triplet> entries;
  entries.reserve(nnz);
  for (Index i = 0; i < n; ++i) {
    for (const auto& [k, v] : row(i)) entries.emplace_back(i, k, v);
  }
  if (report) {
    report->achieved_density = static_cast<double>(nnz) / (static_cast<double>(n) * static_cast<double>(n));
    report->density_reached = nnz >= target;
    report->rotations = rotations;
  }

  Vector g(n);
  for (Index i = 0; i < n; ++i) g[i] = rng.normal();
  return QpProblem(SymmetricMatrix::from_triplets(n, entries), std::move(g));
}

/// Dense family: g uniform on [-0.5, 0.5]^n, O the orthogonal QR factor of a
/// standard normal n x n matrix, Q = O diag(cond^(k/(n-1))) O'.
inline QpProblem gen_hard(Index n, double cond, std::uint64_t seed) {
  if (n < 2) throw QpError(ErrorCode::InvalidArgument, "n must be at least 2");
  if (!(cond >= 1.0)) throw QpError(ErrorCode::InvalidArgument, "cond must be at least 1");
  Rng rng(seed);
  Vector g(n);
  for (Index i = 0; i < n; ++i) g[i] = rng.uniform() - 0.5;

  DenseMatrix gauss(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) gauss(i, j) = rng.normal();
  }
  const DenseMatrix o = Eigen::HouseholderQR<DenseMatrix>(gauss).householderQ();
  Vector spectrum(n);
  for (Index k = 0; k < n; ++k) spectrum[k] = std::pow(cond, static_cast<double>(k) / static_cast<double>(n - 1));
  DenseMatrix q = (o * spectrum.asDiagonal()) * o.transpose();
  q = 0.5 * (q + q.transpose()).eval();
  return QpProblem(SymmetricMatrix::dense(std::move(q)), std::move(g));
}

struct GeneratorSpec {
  Family family = Family::Hard;
  Index n = 0;
  std::optional<double> epsilon;  // easy
  std::optional<double> density;  // medium
  std::optional<double> cond;     // medium, hard
  std::uint64_t seed = 1;

  /// Throws InvalidArgument unless exactly the family's fields are present.
  void validate() const {
    const bool need_eps = family == Family::Easy;
    const bool need_density = family == Family::Medium;
    const bool need_cond = family != Family::Easy;
    auto check = [&](bool need, bool has, const char* name) {
      if (need && !has) throw QpError(ErrorCode::InvalidArgument, std::string(to_string(family)) + " needs " + name);
      if (!need && has) {
        throw QpError(ErrorCode::InvalidArgument, std::string(to_string(family)) + " does not take " + name);
      }
    };
    check(need_eps, epsilon.has_value(), "epsilon");
    check(need_density, density.has_value(), "density");
    check(need_cond, cond.has_value(), "cond");
  }
};

inline QpProblem generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::Easy: return gen_easy(spec.n, *spec.epsilon, spec.seed);
    case Family::Medium: return gen_medium(spec.n, *spec.density, *spec.cond, spec.seed);
    case Family::Hard: return gen_hard(spec.n, *spec.cond, spec.seed);
  }
  throw QpError(ErrorCode::InvalidArgument, "unknown family");
}

}  // namespace rasqp

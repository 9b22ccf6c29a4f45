#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rasqp/model.hpp"

namespace rasqp {

/// Text problem file:
///
///   # comment
///   n 3
///   meta family hard          (optional, repeatable)
///   dense                     (n rows of n numbers)   | coo (lines "i j value", 1-based)
///   ...
///   g
///   <n numbers, any line layout>
///
/// coo entries may come from either triangle; an off-diagonal entry given in
/// only one triangle is mirrored, one given in both must agree. Repeated
/// (i, j) entries are summed.
struct ProblemFile {
  QpProblem problem;
  std::map<std::string, std::string> metadata;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    const std::size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& msg) {
  throw QpError(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg, static_cast<std::int64_t>(line));
}

inline double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    parse_fail(line, "expected a finite number, got '" + std::string(tok) + "'");
  }
  return v;
}

inline Index parse_index(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return static_cast<Index>(v);
}

}  // namespace detail

inline ProblemFile parse_problem(std::istream& in) {
  enum class Section { Header, Dense, Coo, G };
  Section section = Section::Header;
  std::optional<Index> n;
  std::map<std::string, std::string> metadata;
  std::vector<std::vector<double>> dense_rows;
  std::map<std::pair<Index, Index>, double> coo;
  std::vector<double> g;
  bool saw_matrix = false;
  bool dense_kind = false;
  bool saw_g = false;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "n") {
      if (section != Section::Header || n) detail::parse_fail(line_no, "unexpected 'n'");
      if (tok.size() != 2) detail::parse_fail(line_no, "'n' takes one value");
      n = detail::parse_index(tok[1], line_no);
      if (*n < 1) detail::parse_fail(line_no, "n must be at least 1");
      continue;
    }
    if (tok[0] == "meta") {
      if (tok.size() < 3) detail::parse_fail(line_no, "'meta' takes a key and a value");
      std::string value(tok[2]);
      for (std::size_t k = 3; k < tok.size(); ++k) value += " " + std::string(tok[k]);
      metadata[std::string(tok[1])] = value;
      continue;
    }
    if (tok[0] == "dense" || tok[0] == "coo") {
      if (!n) detail::parse_fail(line_no, "matrix section before 'n'");
      if (saw_matrix) detail::parse_fail(line_no, "second matrix section");
      if (tok.size() != 1) detail::parse_fail(line_no, "unexpected tokens after section keyword");
      dense_kind = tok[0] == "dense";
      section = dense_kind ? Section::Dense : Section::Coo;
      saw_matrix = true;
      continue;
    }
    if (tok[0] == "g") {
      if (!saw_matrix) detail::parse_fail(line_no, "'g' before the matrix section");
      if (saw_g) detail::parse_fail(line_no, "second 'g' section");
      if (tok.size() != 1) detail::parse_fail(line_no, "unexpected tokens after 'g'");
      if (section == Section::Dense && static_cast<Index>(dense_rows.size()) != *n) {
        detail::parse_fail(line_no, "dense matrix has " + std::to_string(dense_rows.size()) + " rows, expected " +
                                        std::to_string(*n));
      }
      section = Section::G;
      saw_g = true;
      continue;
    }

    switch (section) {
      case Section::Header:
        detail::parse_fail(line_no, "unknown keyword '" + std::string(tok[0]) + "'");
      case Section::Dense: {
        if (static_cast<Index>(tok.size()) != *n) {
          detail::parse_fail(line_no, "dense row has " + std::to_string(tok.size()) + " entries, expected " +
                                          std::to_string(*n));
        }
        if (static_cast<Index>(dense_rows.size()) == *n) detail::parse_fail(line_no, "too many dense rows");
        std::vector<double> r;
        for (auto t : tok) r.push_back(detail::parse_number(t, line_no));
        dense_rows.push_back(std::move(r));
        break;
      }
      case Section::Coo: {
        if (tok.size() != 3) detail::parse_fail(line_no, "coo entry needs 'i j value'");
        const Index i = detail::parse_index(tok[0], line_no);
        const Index j = detail::parse_index(tok[1], line_no);
        if (i < 1 || i > *n || j < 1 || j > *n) detail::parse_fail(line_no, "coo index out of range 1..n");
        coo[{i - 1, j - 1}] += detail::parse_number(tok[2], line_no);
        break;
      }
      case Section::G:
        for (auto t : tok) {
          if (static_cast<Index>(g.size()) == *n) detail::parse_fail(line_no, "g has more than n entries");
          g.push_back(detail::parse_number(t, line_no));
        }
        break;
    }
  }

  if (!n) detail::parse_fail(line_no, "missing 'n'");
  if (!saw_matrix) detail::parse_fail(line_no, "missing matrix section");
  if (!saw_g || static_cast<Index>(g.size()) != *n) {
    detail::parse_fail(line_no, "g has " + std::to_string(g.size()) + " entries, expected " + std::to_string(*n));
  }

  Vector gv = Eigen::Map<const Vector>(g.data(), *n);
  if (dense_kind) {
    DenseMatrix q(*n, *n);
    for (Index i = 0; i < *n; ++i) {
      for (Index j = 0; j < *n; ++j) q(i, j) = dense_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return {QpProblem(SymmetricMatrix::dense(std::move(q)), std::move(gv)), std::move(metadata)};
  }

  double scale = 0.0;
  for (const auto& [ij, v] : coo) scale = std::max(scale, std::abs(v));
  std::vector<Triplet> entries;
  for (const auto& [ij, v] : coo) {
    const auto [i, j] = ij;
    if (i == j) {
      entries.emplace_back(i, j, v);
      continue;
    }
    const auto mirror = coo.find({j, i});
    if (mirror == coo.end()) {
      entries.emplace_back(i, j, v);
      entries.emplace_back(j, i, v);
    } else if (i < j) {
      if (std::abs(v - mirror->second) > kSymmetryTolerance * scale) {
        throw QpError(ErrorCode::NotSymmetric,
                      "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") and its mirror differ");
      }
      const double avg = 0.5 * (v + mirror->second);
      entries.emplace_back(i, j, avg);
      entries.emplace_back(j, i, avg);
    }
  }
  return {QpProblem(SymmetricMatrix::from_triplets(*n, entries), std::move(gv)), std::move(metadata)};
}

inline ProblemFile parse_problem_string(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

inline ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw QpError(ErrorCode::ParseError, "cannot open " + path, 0);
  return parse_problem(in);
}

namespace detail {
inline std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// Dense storage is written as `dense`, sparse storage as upper-triangle `coo`.
inline void write_problem(std::ostream& out, const QpProblem& problem,
                          const std::map<std::string, std::string>& metadata = {}) {
  const Index n = problem.n();
  out << "n " << n << '\n';
  for (const auto& [k, v] : metadata) out << "meta " << k << ' ' << v << '\n';
  const SymmetricMatrix& q = problem.q();
  if (q.is_sparse()) {
    out << "coo\n";
    const SparseMatrix& m = q.sparse_storage();
    for (Index j = 0; j < m.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
        if (it.row() <= j) out << it.row() + 1 << ' ' << j + 1 << ' ' << detail::format_exact(it.value()) << '\n';
      }
    }
  } else {
    out << "dense\n";
    const DenseMatrix& m = q.dense_storage();
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) out << (j ? " " : "") << detail::format_exact(m(i, j));
      out << '\n';
    }
  }
  out << "g\n";
  for (Index i = 0; i < n; ++i) out << (i ? " " : "") << detail::format_exact(problem.g()[i]);
  out << '\n';
}

inline std::string write_problem_string(const QpProblem& problem,
                                        const std::map<std::string, std::string>& metadata = {}) {
  std::ostringstream out;
  write_problem(out, problem, metadata);
  return out.str();
}

}  // namespace rasqp

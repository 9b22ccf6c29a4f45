#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rasqp {

using Index = Eigen::Index;

/// Sorted, duplicate-free set of 0-based variable indexes.
///
/// Every active-set quantity (I, A, Im, Ip, ...) is an IndexSet; iteration is
/// always ascending.
class IndexSet {
 public:
  using const_iterator = std::vector<Index>::const_iterator;

  IndexSet() = default;
  IndexSet(std::initializer_list<Index> values) : IndexSet(std::vector<Index>(values)) {}
  explicit IndexSet(std::vector<Index> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  }

  /// {0, ..., n-1}
  static IndexSet range(Index n) {
    IndexSet s;
    s.values_.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) s.values_[static_cast<std::size_t>(i)] = i;
    return s;
  }

  /// Wraps a vector that the caller guarantees is already sorted and unique.
  static IndexSet from_sorted(std::vector<Index> values) {
    IndexSet s;
    s.values_ = std::move(values);
    return s;
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const_iterator begin() const noexcept { return values_.begin(); }
  const_iterator end() const noexcept { return values_.end(); }
  Index operator[](std::size_t k) const { return values_[k]; }
  std::span<const Index> view() const noexcept { return values_; }
  const std::vector<Index>& values() const noexcept { return values_; }

  bool contains(Index i) const { return std::binary_search(values_.begin(), values_.end(), i); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> values_;
};

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet::from_sorted(std::move(out));
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b, const IndexSet& c) {
  return set_union(set_union(a, b), c);
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet::from_sorted(std::move(out));
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  std::vector<Index> out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet::from_sorted(std::move(out));
}

/// {0, ..., n-1} \ s
inline IndexSet complement(Index n, const IndexSet& s) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n) - std::min<std::size_t>(s.size(), static_cast<std::size_t>(n)));
  auto it = s.begin();
  for (Index i = 0; i < n; ++i) {
    while (it != s.end() && *it < i) ++it;
    if (it == s.end() || *it != i) out.push_back(i);
  }
  return IndexSet::from_sorted(std::move(out));
}

/// True when `inactive` and `active` split {0, ..., n-1} into disjoint parts.
inline bool is_partition(Index n, const IndexSet& inactive, const IndexSet& active) {
  if (static_cast<Index>(inactive.size() + active.size()) != n) return false;
  if (!inactive.empty() && (inactive.values().front() < 0 || inactive.values().back() >= n)) return false;
  if (!active.empty() && (active.values().front() < 0 || active.values().back() >= n)) return false;
  return set_intersection(inactive, active).empty();
}

}  // namespace rasqp

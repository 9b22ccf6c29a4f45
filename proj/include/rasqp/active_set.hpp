#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "rasqp/model.hpp"
#include "rasqp/rng.hpp"

namespace rasqp {

/// Sign split of the current partition after a subsystem solve.
struct Partition {
  IndexSet inactive;             // I
  IndexSet active;               // A
  IndexSet infeasible_inactive;  // Im = {i in I : x_i <= 0}
  IndexSet feasible_inactive;    // Ip
  IndexSet infeasible_active;    // Am = {j in A : s_j < -tol}
  IndexSet feasible_active;      // Ap

  bool is_optimal() const { return infeasible_inactive.empty() && infeasible_active.empty(); }
};

/// Sets remembered from the previous iteration of the random active set method.
struct History {
  IndexSet feasible_inactive;    // Ip0
  IndexSet feasible_active;      // Ap0
  IndexSet changed_inactive;     // Imc
  IndexSet changed_active;       // Amc
  IndexSet frozen_inactive;      // Imf
  IndexSet frozen_active;        // Amf

  /// Initial history: Imf = Amf = {1..n}, everything else empty.
  static History initial(Index n) {
    History h;
    h.frozen_inactive = IndexSet::range(n);
    h.frozen_active = IndexSet::range(n);
    return h;
  }
};

/// Current infeasible indexes split by where they sat in the previous iteration.
///
///               previous:  Ip      Im      Ap      Am
///   current Im            NImp0   NImf    -       NImc
///   current Am            -       NAmc    NAmp0   NAmf
struct Categories {
  IndexSet im_was_feasible;   // NImp0
  IndexSet im_was_frozen;     // NImf
  IndexSet im_was_changed;    // NImc
  IndexSet am_was_feasible;   // NAmp0
  IndexSet am_was_frozen;     // NAmf
  IndexSet am_was_changed;    // NAmc
};

/// Exchange probabilities p1..p6, one per category, in Categories order.
struct ChangeProbabilities {
  std::array<double, 6> p{0.5, 0.98, 0.98, 0.01, 0.93, 0.94};

  static ChangeProbabilities tuned() { return {}; }
  static ChangeProbabilities uniform(double value) { return {{value, value, value, value, value, value}}; }

  /// Values must lie in (0, 1]. The closed upper end admits the deterministic
  /// full-exchange configuration used to compare against KR.
  void validate() const {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!(p[k] > 0.0 && p[k] <= 1.0)) {
        throw QpError(ErrorCode::InvalidProbability, "p" + std::to_string(k + 1) + " = " + std::to_string(p[k]));
      }
    }
  }
};

/// Changed/frozen split of Im and Am drawn for one exchange.
struct Exchange {
  IndexSet changed_inactive;  // Imc
  IndexSet frozen_inactive;   // Imf
  IndexSet changed_active;    // Amc
  IndexSet frozen_active;     // Amf

  bool empty() const { return changed_inactive.empty() && changed_active.empty(); }
};

/// Im collects x_i <= 0 (zero counts as infeasible); Am collects s_j < -tol.
inline Partition classify(const KktPoint& point, const IndexSet& inactive, const IndexSet& active, double tol) {
  Partition part;
  part.inactive = inactive;
  part.active = active;
  std::vector<Index> im, ip, am, ap;
  for (Index i : inactive) (point.x[i] <= 0.0 ? im : ip).push_back(i);
  for (Index j : active) (point.s[j] < -tol ? am : ap).push_back(j);
  part.infeasible_inactive = IndexSet::from_sorted(std::move(im));
  part.feasible_inactive = IndexSet::from_sorted(std::move(ip));
  part.infeasible_active = IndexSet::from_sorted(std::move(am));
  part.feasible_active = IndexSet::from_sorted(std::move(ap));
  return part;
}

inline Categories categorize(const Partition& part, const History& history) {
  const IndexSet& im = part.infeasible_inactive;
  const IndexSet& am = part.infeasible_active;
  Categories c;
  c.im_was_feasible = set_intersection(im, history.feasible_inactive);
  c.im_was_frozen = set_intersection(im, history.frozen_inactive);
  c.im_was_changed = set_intersection(im, history.changed_active);
  c.am_was_feasible = set_intersection(am, history.feasible_active);
  c.am_was_frozen = set_intersection(am, history.frozen_active);
  c.am_was_changed = set_intersection(am, history.changed_inactive);

  const std::size_t n_im = c.im_was_feasible.size() + c.im_was_frozen.size() + c.im_was_changed.size();
  const std::size_t n_am = c.am_was_feasible.size() + c.am_was_frozen.size() + c.am_was_changed.size();
  if (n_im != im.size() || n_am != am.size() ||
      set_union(c.im_was_feasible, c.im_was_frozen, c.im_was_changed) != im ||
      set_union(c.am_was_feasible, c.am_was_frozen, c.am_was_changed) != am) {
    throw QpError(ErrorCode::CategoryLeak, "categories do not partition Im and Am");
  }
  return c;
}

/// Keeps the k-th element of `set` with probability probs[k]; probs may also
/// hold a single value applied to every element. Exactly |set| draws are
/// consumed, in ascending index order.
inline IndexSet rand_subset(const IndexSet& set, std::span<const double> probs, Rng& rng) {
  if (probs.size() != set.size() && probs.size() != 1 && !set.empty()) {
    throw QpError(ErrorCode::DimensionMismatch, "probability vector length does not match the set");
  }
  std::vector<Index> out;
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double p = probs.size() == 1 ? probs[0] : probs[k];
    if (!(p >= 0.0 && p <= 1.0)) throw QpError(ErrorCode::InvalidProbability, "probability " + std::to_string(p));
    if (rng.uniform() < p) out.push_back(set[k]);
  }
  return IndexSet::from_sorted(std::move(out));
}

inline IndexSet rand_subset(const IndexSet& set, double p, Rng& rng) {
  return rand_subset(set, std::span<const double>(&p, 1), rng);
}

/// Generic exchange: every probability must lie in [sigma, 1 - sigma].
inline Exchange select_exchange_generic(const Partition& part, std::span<const double> p_im,
                                        std::span<const double> p_am, double sigma, Rng& rng) {
  if (!(sigma > 0.0 && sigma <= 0.5)) throw QpError(ErrorCode::InvalidArgument, "sigma must lie in (0, 0.5]");
  auto check = [sigma](std::span<const double> ps) {
    for (double p : ps) {
      if (p < sigma || p > 1.0 - sigma) {
        throw QpError(ErrorCode::InvalidProbability, "probability " + std::to_string(p) + " outside [sigma, 1-sigma]");
      }
    }
  };
  check(p_im);
  check(p_am);
  Exchange ex;
  ex.changed_inactive = rand_subset(part.infeasible_inactive, p_im, rng);
  ex.frozen_inactive = set_difference(part.infeasible_inactive, ex.changed_inactive);
  ex.changed_active = rand_subset(part.infeasible_active, p_am, rng);
  ex.frozen_active = set_difference(part.infeasible_active, ex.changed_active);
  return ex;
}

/// Category-driven exchange. Each index of Im (then Am) is drawn in ascending
/// order with the probability of the category it belongs to.
inline Exchange select_exchange_ras(const Partition& part, const Categories& cats, const ChangeProbabilities& probs,
                                    Rng& rng) {
  auto per_index = [](const IndexSet& set, const std::array<const IndexSet*, 3>& groups, const double* p) {
    std::vector<double> out(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) {
      for (std::size_t c = 0; c < 3; ++c) {
        if (groups[c]->contains(set[k])) {
          out[k] = p[c];
          break;
        }
      }
    }
    return out;
  };
  const std::vector<double> p_im = per_index(
      part.infeasible_inactive, {&cats.im_was_feasible, &cats.im_was_frozen, &cats.im_was_changed}, &probs.p[0]);
  const std::vector<double> p_am = per_index(
      part.infeasible_active, {&cats.am_was_feasible, &cats.am_was_frozen, &cats.am_was_changed}, &probs.p[3]);

  Exchange ex;
  ex.changed_inactive = rand_subset(part.infeasible_inactive, p_im, rng);
  ex.frozen_inactive = set_difference(part.infeasible_inactive, ex.changed_inactive);
  ex.changed_active = rand_subset(part.infeasible_active, p_am, rng);
  ex.frozen_active = set_difference(part.infeasible_active, ex.changed_active);
  return ex;
}

/// I_new = Ip u Imf u Amc and A_new = {1..n} \ I_new.
inline std::pair<IndexSet, IndexSet> next_sets(const Partition& part, const Exchange& ex) {
  const Index n = static_cast<Index>(part.inactive.size() + part.active.size());
  IndexSet inactive = set_union(part.feasible_inactive, ex.frozen_inactive, ex.changed_active);
  IndexSet active = complement(n, inactive);
  return {std::move(inactive), std::move(active)};
}

/// Full exchange (KR step): I_new = Ip u Am.
inline Exchange full_exchange(const Partition& part) {
  return {part.infeasible_inactive, {}, part.infeasible_active, {}};
}

}  // namespace rasqp

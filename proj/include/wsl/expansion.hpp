#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wsl/formula.hpp"

namespace wsl::expansion {

/// Bipartite clause/variable adjacency with repeated occurrences collapsed.
class FactorGraph {
public:
  explicit FactorGraph(const Formula &f);

  std::size_t num_vars() const { return var_offsets_.size() - 2; }
  std::size_t num_clauses() const { return clause_offsets_.size() - 1; }

  /// Distinct variables of clause i, ascending.
  std::span<const Var> clause_vars(ClauseIndex i) const {
    return {clause_vars_.data() + clause_offsets_[i], clause_offsets_[i + 1] - clause_offsets_[i]};
  }
  /// Distinct clauses containing x, ascending.
  std::span<const ClauseIndex> var_clauses(Var x) const {
    return {var_clauses_.data() + var_offsets_[x], var_offsets_[x + 1] - var_offsets_[x]};
  }

private:
  std::vector<std::uint32_t> clause_offsets_;
  std::vector<Var> clause_vars_;
  std::vector<std::uint32_t> var_offsets_;
  std::vector<ClauseIndex> var_clauses_;
};

/// N(Phi_Z): distinct variables of the clauses in z, ascending.
std::vector<Var> neighborhood(const FactorGraph &fg, std::span<const ClauseIndex> z);

struct LFoldMatching {
  std::uint32_t fold = 0;
  /// (clause, variable) pairs; every listed clause has exactly `fold` of
  /// them and no variable appears twice.
  std::vector<std::pair<ClauseIndex, Var>> edges;
};

/// Maximum l-fold b-matching on explicit adjacency lists (one list of
/// distinct variables per left vertex). Each left vertex may take up to l
/// edges, each variable at most one. Variables are tried in list order.
std::vector<std::pair<std::size_t, Var>>
max_fold_matching(std::span<const std::vector<Var>> adjacency, std::uint32_t l);

/// Exact decision: a matching exists iff the maximum flow equals l*|z|.
std::optional<LFoldMatching> find_l_fold_matching(const FactorGraph &fg,
                                                  std::span<const ClauseIndex> z, std::uint32_t l);

inline bool has_l_fold_matching(const FactorGraph &fg, std::span<const ClauseIndex> z,
                                std::uint32_t l) {
  return find_l_fold_matching(fg, z, l).has_value();
}

/// Greedy maximal sequence of distinct clauses outside z, each sharing at
/// least `lambda` distinct variables with the neighbourhood accumulated so
/// far. Ascending scan, restarted after every addition.
std::vector<ClauseIndex> check_core_property(const FactorGraph &fg, std::span<const ClauseIndex> z,
                                             std::uint32_t lambda);

/// Least superset of y0 closed under: add i when at least `lambda` slots of
/// clause i hold a variable of N(Phi_Y). Slots are counted with
/// multiplicity. Result ascending.
std::vector<ClauseIndex> closure_y(const Formula &f, const FactorGraph &fg,
                                   std::span<const ClauseIndex> y0, std::uint32_t lambda);

enum class RichStatus { ok, no_matching, pruned_below_threshold };

struct RichResult {
  RichStatus status = RichStatus::ok;
  /// On success the rich extension of tau_prev. On failure a best-effort
  /// extension built from a maximum matching: it still agrees with
  /// tau_prev, but the richness guarantee does not hold.
  PartialAssignment tau;
  std::string detail;

  bool ok() const { return status == RichStatus::ok; }
};

struct RichThresholds {
  std::uint32_t match_fold; ///< l of the l-fold matching (ceil(0.9k) by default)
  std::uint32_t rich;       ///< satisfied occurrences needed per clause (ceil(0.8k))
};

/// Extend tau_prev (defined on n_prev) to the new clauses `z_new`: find an
/// l-fold matching from z_new into its neighbourhood, drop edges that land
/// in n_prev, and set every remaining matched variable so that its
/// lowest-slot occurrence in the matched clause is true. New variables left
/// unmatched default to true.
RichResult build_rich_assignment(std::span<const std::span<const Literal>> z_new,
                                 const VarSet &n_prev, const PartialAssignment &tau_prev,
                                 RichThresholds thresholds);

RichResult build_rich_assignment(const Formula &f, std::span<const ClauseIndex> z_new,
                                 const VarSet &n_prev, const PartialAssignment &tau_prev,
                                 RichThresholds thresholds);

/// Number of literal occurrences of `clause` that `tau` makes true
/// (undefined variables count as not true).
std::uint32_t satisfied_occurrences(std::span<const Literal> clause, const PartialAssignment &tau);

} // namespace wsl::expansion

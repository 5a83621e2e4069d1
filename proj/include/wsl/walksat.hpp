#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsl/formula.hpp"
#include "wsl/rng.hpp"

namespace wsl::walksat {

struct Occurrence {
  ClauseIndex clause;
  std::uint32_t slot;

  friend bool operator==(Occurrence, Occurrence) = default;
};

/// Set of small unsigned integers with O(1) insert, erase, membership and
/// uniform sampling. Erase swaps the last element into the hole, so the
/// element order is a deterministic function of the operation sequence.
class IndexedSet {
public:
  IndexedSet() = default;
  explicit IndexedSet(std::size_t universe) : pos_(universe, kAbsent) {}

  bool contains(std::uint32_t x) const { return pos_[x] != kAbsent; }
  void insert(std::uint32_t x);
  void erase(std::uint32_t x);
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::uint32_t operator[](std::size_t idx) const { return items_[idx]; }
  std::span<const std::uint32_t> items() const { return items_; }

private:
  static constexpr std::uint32_t kAbsent = UINT32_MAX;
  std::vector<std::uint32_t> items_;
  std::vector<std::uint32_t> pos_;
};

/// Per-literal occurrence lists in compressed form. Lists are in ascending
/// (clause, slot) order.
class OccurrenceIndex {
public:
  OccurrenceIndex() = default;
  explicit OccurrenceIndex(const Formula &f);

  std::span<const Occurrence> positive(Var v) const { return list(2 * v); }
  std::span<const Occurrence> negative(Var v) const { return list(2 * v + 1); }

private:
  std::span<const Occurrence> list(std::size_t code) const {
    return {entries_.data() + offsets_[code], offsets_[code + 1] - offsets_[code]};
  }

  std::vector<std::uint32_t> offsets_;
  std::vector<Occurrence> entries_;
};

struct FlipDelta {
  std::uint32_t made = 0;   ///< clauses that left the unsatisfied set
  std::uint32_t broken = 0; ///< clauses that entered it

  friend bool operator==(FlipDelta, FlipDelta) = default;
};

/// True-literal counters plus the unsatisfied-clause set.
///
/// Shared by the solver and by the analysis process so that both keep the
/// unsatisfied set in exactly the same order.
class UnsatTracker {
public:
  UnsatTracker() = default;
  UnsatTracker(std::vector<std::uint32_t> true_count);

  /// Apply a flip given the occurrences that turned true and those that
  /// turned false. Increments are applied first, so a clause holding both
  /// x and not-x never passes through zero.
  FlipDelta apply(std::span<const Occurrence> now_true, std::span<const Occurrence> now_false);

  std::uint32_t true_count(ClauseIndex i) const { return true_count_[i]; }
  std::span<const std::uint32_t> true_counts() const { return true_count_; }
  const IndexedSet &unsat() const { return unsat_; }

private:
  std::vector<std::uint32_t> true_count_;
  IndexedSet unsat_;
};

/// Incremental Walksat state on a fixed formula.
class SolverTracker {
public:
  SolverTracker(const Formula &f, Assignment a);

  FlipDelta flip(Var v);

  const Formula &formula() const { return *f_; }
  const Assignment &assignment() const { return a_; }
  std::uint32_t true_count(ClauseIndex i) const { return counts_.true_count(i); }
  std::span<const std::uint32_t> true_counts() const { return counts_.true_counts(); }
  const IndexedSet &unsat() const { return counts_.unsat(); }
  bool satisfied() const { return counts_.unsat().empty(); }

  /// Same assignment, counters and unsatisfied membership (order ignored).
  bool same_state(const SolverTracker &other) const;

private:
  const Formula *f_;
  OccurrenceIndex occ_;
  Assignment a_;
  UnsatTracker counts_;
};

struct FlipRecord {
  ClauseIndex clause;
  std::uint32_t slot;
  Var var;

  friend bool operator==(FlipRecord, FlipRecord) = default;
};

enum class Outcome { satisfied, failure };

struct RunResult {
  Outcome outcome = Outcome::failure;
  Assignment assignment; ///< final assignment; a model when satisfied
  std::uint64_t flips_used = 0;
  std::vector<FlipRecord> flip_log;
};

/// Walksat from the all-true assignment with at most `t_max` flips.
///
/// Every iteration draws the clause as `unsat[rng.below(|unsat|)]` and then
/// the slot as `rng.below(k)`; the analysis process reproduces this draw
/// order exactly. The assignment reached after the last flip is also
/// checked, so a run whose final flip satisfies the formula succeeds.
RunResult run(const Formula &f, std::uint64_t t_max, std::uint64_t seed);

/// Independent tries, each from a fresh uniformly random assignment drawn
/// from stream `Rng::derive(seed, try)`. Flips are summed over tries and the
/// log holds all of them.
RunResult run_with_restarts(const Formula &f, std::uint64_t tries, std::uint64_t t_max_per_try,
                            std::uint64_t seed);

} // namespace wsl::walksat

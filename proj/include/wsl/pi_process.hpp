#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wsl/expansion.hpp"
#include "wsl/formula.hpp"
#include "wsl/rng.hpp"
#include "wsl/walksat.hpp"

namespace wsl::pi {

using walksat::FlipRecord;
using walksat::Occurrence;

/// Thresholds of the revelation process. `defaults` rounds every fractional
/// threshold up; every field may be overridden afterwards.
struct ProcessParams {
  std::uint32_t k1 = 1;     ///< flipped-variable slots that pull a clause into Z
  std::uint32_t k2 = 1;     ///< active slots that make a clause active
  std::uint32_t k3 = 1;     ///< passive slots that make a clause passive
  std::uint32_t lambda = 1; ///< N-slots (strictly more than this) that pull a clause into Z
  double epsilon = 0.5;
  double theta = 1.0;
  std::uint64_t t_star = 1;
  double rich_fraction = 0.8;  ///< satisfied occurrences per Z clause, times k
  double match_fraction = 0.9; ///< fold of the matching used to build tau, times k
  std::uint64_t hard_cap = 1;  ///< instrumented runs stop here if still unsatisfied

  /// k1=ceil(0.49k), k2=ceil(0.48k), k3=ceil(0.01k), lambda=ceil(sqrt k),
  /// epsilon=exp(-k^(2/3)), theta=1/(3k), t_star=hard_cap=ceil(theta*n).
  static ProcessParams defaults(std::size_t k, std::size_t n);

  /// Recompute t_star from theta (and hard_cap when it tracked t_star).
  void set_theta(double new_theta, std::size_t n);

  std::uint32_t rich_threshold(std::size_t k) const;
  std::uint32_t match_fold(std::size_t k) const;

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Where the process learns the variables behind formula slots. Signs are
/// always known; a variable becomes known when its slot is resolved, and
/// resolving a slot fixes every occurrence of that variable at once.
class SlotSource {
public:
  virtual ~SlotSource() = default;

  virtual std::size_t num_vars() const = 0;
  virtual std::size_t width() const = 0;
  virtual std::size_t num_clauses() const = 0;

  virtual bool positive(ClauseIndex i, std::uint32_t j) const = 0;
  /// Variable of slot (i, j), or 0 if the source has not fixed it yet.
  virtual Var peek(ClauseIndex i, std::uint32_t j) const = 0;
  virtual Var resolve(ClauseIndex i, std::uint32_t j) = 0;
  /// Clause literals; only valid once every slot of clause i is resolved.
  virtual std::span<const Literal> clause(ClauseIndex i) const = 0;
  /// Occurrence lists of a resolved variable, ascending (clause, slot).
  virtual std::span<const Occurrence> positive_occurrences(Var v) const = 0;
  virtual std::span<const Occurrence> negative_occurrences(Var v) const = 0;
};

/// Source backed by a fully generated formula. The formula must outlive it.
class FormulaSource final : public SlotSource {
public:
  explicit FormulaSource(const Formula &f) : f_(&f), occ_(f) {}

  std::size_t num_vars() const override { return f_->num_vars(); }
  std::size_t width() const override { return f_->width(); }
  std::size_t num_clauses() const override { return f_->num_clauses(); }
  bool positive(ClauseIndex i, std::uint32_t j) const override { return f_->at(i, j).positive(); }
  Var peek(ClauseIndex i, std::uint32_t j) const override { return f_->at(i, j).var(); }
  Var resolve(ClauseIndex i, std::uint32_t j) override { return f_->at(i, j).var(); }
  std::span<const Literal> clause(ClauseIndex i) const override { return f_->clause(i); }
  std::span<const Occurrence> positive_occurrences(Var v) const override { return occ_.positive(v); }
  std::span<const Occurrence> negative_occurrences(Var v) const override { return occ_.negative(v); }

private:
  const Formula *f_;
  walksat::OccurrenceIndex occ_;
};

/// Deferred-decision source: signs are drawn up front, variables only when
/// the process reveals them. Each unresolved slot is uniform over the
/// variables not yet revealed, independently of the others.
///
/// `occurrence_bias` multiplies the probability that an unresolved slot
/// holds a freshly revealed variable. 1.0 is the faithful sampler; other
/// values exist only as a negative control for equivalence tests.
class LazySource final : public SlotSource {
public:
  LazySource(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed,
             double occurrence_bias = 1.0);

  std::size_t num_vars() const override { return n_; }
  std::size_t width() const override { return k_; }
  std::size_t num_clauses() const override { return m_; }
  bool positive(ClauseIndex i, std::uint32_t j) const override { return positive_[i * k_ + j] != 0; }
  Var peek(ClauseIndex i, std::uint32_t j) const override { return var_[i * k_ + j]; }
  Var resolve(ClauseIndex i, std::uint32_t j) override;
  std::span<const Literal> clause(ClauseIndex i) const override;
  std::span<const Occurrence> positive_occurrences(Var v) const override { return pos_occ_[v]; }
  std::span<const Occurrence> negative_occurrences(Var v) const override { return neg_occ_[v]; }

  std::size_t unrevealed_var_count() const { return hidden_vars_.size(); }

  /// Fill every unresolved slot uniformly from the still-hidden variables
  /// and return the resulting complete formula.
  Formula finalize();

private:
  void reveal(Var v, std::size_t first_slot);

  std::size_t n_, m_, k_;
  double bias_;
  Rng rng_;
  std::vector<std::uint8_t> positive_;
  std::vector<Var> var_;
  mutable std::vector<Literal> literals_;
  walksat::IndexedSet hidden_vars_;
  walksat::IndexedSet unresolved_slots_;
  std::vector<std::vector<Occurrence>> pos_occ_;
  std::vector<std::vector<Occurrence>> neg_occ_;
};

struct Choice {
  ClauseIndex clause;
  std::uint32_t slot;
};

/// Metrics after one step of the process (time t, 1-based in output only).
struct StepRecord {
  std::uint64_t t = 0;
  ClauseIndex i_t = 0;
  std::uint32_t j_t = 0;
  Var flipped_var = 0;
  std::size_t d_size = 0;
  std::int64_t s_pot = 0;
  std::int64_t h_pot = 0;
  std::int64_t s_prime = 0;
  std::int64_t h_prime = 0;
  std::int64_t r_pot = 0;
  std::size_t z_size = 0;
  std::size_t n_size = 0;
  std::size_t a_size = 0;
  std::size_t active_count = 0;
  std::size_t passive_count = 0;
  bool rich_ok = true;
  std::size_t u_t = 0;            ///< unsatisfied clauses outside Z
  bool chosen_in_z = false;       ///< i_t was in Z before the step
  bool fresh_slot = false;        ///< the chosen slot was unrevealed (sign -1)
  std::vector<ClauseIndex> z_added;
};

struct InjectionReport {
  std::vector<std::pair<Var, ClauseIndex>> map; ///< ascending by variable
  std::string violation;                         ///< empty when valid

  bool ok() const { return violation.empty(); }
};

/// The revelation process run in lockstep with Walksat.
///
/// Each step performs the stop check, the Walksat choice and flip, the
/// closure that grows Z and N, and the update of A and of the revealed map.
/// The potentials S, H, S', H', R, the active/passive tallies and the
/// injection from A into D are maintained incrementally.
class PiProcess {
public:
  /// Eager process on a fixed formula, which must outlive the process.
  PiProcess(const Formula &f, ProcessParams params);
  PiProcess(std::unique_ptr<SlotSource> source, ProcessParams params);

  /// Random step drawing `rng.below(|unsat|)` then `rng.below(k)`.
  /// Returns nullopt when the stop check fires. Throws std::logic_error on
  /// a stopped process.
  std::optional<StepRecord> step(Rng &rng);

  /// Step with injected choice. Throws std::invalid_argument if the clause
  /// is not unsatisfied or the slot is out of range.
  std::optional<StepRecord> step(Choice choice);

  std::uint64_t t() const { return t_; }
  bool stopped() const { return stopped_; }
  bool satisfied() const { return unsat_.unsat().empty(); }
  const ProcessParams &params() const { return params_; }
  const SlotSource &source() const { return *source_; }
  SlotSource &source() { return *source_; }

  const VarSet &a_set() const { return a_; }
  const VarSet &n_set() const { return n_; }
  std::span<const Var> n_order() const { return n_order_; }
  std::span<const ClauseIndex> z_order() const { return z_order_; }
  bool in_z(ClauseIndex i) const { return z_member_[i] != 0; }
  const Assignment &sigma() const { return sigma_; }
  const PartialAssignment &tau() const { return tau_; }
  bool rich_ok() const { return rich_ok_; }
  const std::string &rich_failure() const { return rich_failure_; }
  std::span<const FlipRecord> flip_history() const { return flips_; }
  const walksat::IndexedSet &unsat() const { return unsat_.unsat(); }

  /// Variable is in A_t or N_t (its occurrences are visible in pi_t).
  bool revealed(Var v) const { return reveal_time_[v] != kNever; }
  /// First time the variable entered A or N; kNever otherwise.
  std::uint64_t reveal_time(Var v) const { return reveal_time_[v]; }
  static constexpr std::uint64_t kNever = UINT64_MAX;

  /// pi_t(i, j) is a literal rather than a bare sign.
  bool slot_revealed(ClauseIndex i, std::uint32_t j) const;

  std::size_t d_size() const { return d_size_; }
  /// D_t by its definition: clauses that are (A_t u N_t)-negative.
  std::vector<ClauseIndex> compute_d() const;
  std::int64_t compute_h() const;
  std::int64_t s_pot() const;
  std::int64_t s_prime() const { return s_prime_; }
  std::int64_t h_prime() const { return h_prime_; }
  std::int64_t r_pot() const { return r_; }
  std::size_t active_count() const { return active_clauses_; }
  std::size_t passive_count() const { return passive_clauses_; }
  std::size_t unsat_outside_z() const;

  /// Check the injection s_t: A_t -> D_t. Every image clause must be
  /// satisfied with the mapped variable supplying a true literal.
  InjectionReport build_injection_s() const;

  /// Record for t = 0 (S_0 = |D_0|, everything else zero).
  StepRecord initial_record() const;

private:
  StepRecord advance(ClauseIndex i, std::uint32_t j);
  std::vector<ClauseIndex> closure(Var flipped);
  void mark_revealed(Var v);
  void add_to_z(ClauseIndex i, std::vector<Var> &new_n_vars);
  bool closure_candidate(ClauseIndex i, Var flipped) const;

  std::unique_ptr<SlotSource> source_;
  ProcessParams params_;
  std::size_t n_vars_, k_, m_;

  std::uint64_t t_ = 0;
  bool stopped_ = false;
  Assignment sigma_;
  walksat::UnsatTracker unsat_;

  VarSet a_;
  VarSet n_;
  std::vector<Var> n_order_;
  std::vector<std::uint8_t> z_member_;
  std::vector<ClauseIndex> z_order_;
  std::vector<std::uint64_t> reveal_time_;

  std::vector<std::uint32_t> hidden_positive_;
  std::size_t d_size_ = 0;

  PartialAssignment tau_;
  bool rich_ok_ = true;
  std::string rich_failure_;

  std::int64_t s_prime_ = 0;
  std::int64_t h_prime_ = 0;
  std::int64_t r_ = 0;

  static constexpr ClauseIndex kNoClause = UINT32_MAX;
  std::vector<ClauseIndex> injection_;

  std::vector<std::uint8_t> slot_flags_;
  std::vector<std::uint32_t> active_slots_;
  std::vector<std::uint32_t> passive_slots_;
  std::size_t active_clauses_ = 0;
  std::size_t passive_clauses_ = 0;

  std::vector<FlipRecord> flips_;
};

/// Definitional count of k2-active and k3-passive clauses at time t from
/// the flip history and the reveal times (pi_{s-1}(i,j) is a bare sign iff
/// the slot's variable was revealed at time >= s). O(t*m*k).
std::pair<std::size_t, std::size_t>
classify_active_passive(const Formula &f, std::span<const FlipRecord> flips,
                        std::span<const std::uint64_t> reveal_time, std::uint64_t t,
                        const ProcessParams &params);

enum class TraceOutcome { satisfied, cap_reached, script_exhausted };

const char *to_string(TraceOutcome outcome);

struct StepSets {
  std::vector<Var> a;
  std::vector<Var> n;
  std::vector<ClauseIndex> z; ///< insertion order
};

struct Trace {
  std::size_t n = 0, m = 0, k = 0;
  ProcessParams params;
  std::optional<std::uint64_t> seed;
  TraceOutcome outcome = TraceOutcome::cap_reached;
  std::optional<std::uint64_t> stop_time; ///< T when the process stopped
  StepRecord initial;
  std::vector<StepRecord> steps;
  std::vector<StepSets> sets; ///< per step, only when requested
};

/// Random choices from `seed` until the stop check fires or t reaches
/// params.hard_cap.
Trace run_instrumented(const Formula &f, const ProcessParams &params, std::uint64_t seed,
                       bool record_sets = false);

/// Same loop on an arbitrary source (used for the deferred-decision mode).
Trace run_instrumented(PiProcess &process, std::uint64_t seed, bool record_sets = false);

/// Replay of injected choices. Throws std::invalid_argument naming the
/// 1-based step when a choice is invalid or the process stopped early.
Trace replay(const Formula &f, const ProcessParams &params, std::span<const Choice> script,
             bool record_sets = true);

} // namespace wsl::pi

#include "wsl/pi_process.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace wsl::pi {

namespace {

// ceil(numerator * k / denominator) in exact integer arithmetic.
std::uint32_t ceil_fraction(std::size_t k, std::size_t numerator, std::size_t denominator) {
  return static_cast<std::uint32_t>((numerator * k + denominator - 1) / denominator);
}

std::uint32_t ceil_sqrt(std::size_t k) {
  auto r = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(k)));
  while (static_cast<std::size_t>(r) * r < k)
    ++r;
  while (r > 0 && static_cast<std::size_t>(r - 1) * (r - 1) >= k)
    --r;
  return r;
}

// ceil(x) that ignores representation noise such as 0.8 * 5 = 4.000...01.
std::uint64_t noisy_ceil(double x) {
  const double rounded = std::round(x);
  if (std::abs(x - rounded) <= 1e-9 * std::max(1.0, std::abs(rounded)))
    return static_cast<std::uint64_t>(std::max(0.0, rounded));
  return static_cast<std::uint64_t>(std::max(0.0, std::ceil(x)));
}

} // namespace

ProcessParams ProcessParams::defaults(std::size_t k, std::size_t n) {
  ProcessParams p;
  p.k1 = std::max<std::uint32_t>(1, ceil_fraction(k, 49, 100));
  p.k2 = std::max<std::uint32_t>(1, ceil_fraction(k, 48, 100));
  p.k3 = std::max<std::uint32_t>(1, ceil_fraction(k, 1, 100));
  p.lambda = std::max<std::uint32_t>(1, ceil_sqrt(k));
  p.epsilon = std::exp(-std::pow(static_cast<double>(k), 2.0 / 3.0));
  p.theta = k == 0 ? 1.0 : 1.0 / (3.0 * static_cast<double>(k));
  // ceil(n / (3k)) exactly.
  p.t_star = k == 0 ? n : std::max<std::uint64_t>(1, (n + 3 * k - 1) / (3 * k));
  p.hard_cap = p.t_star;
  return p;
}

void ProcessParams::set_theta(double new_theta, std::size_t n) {
  const bool cap_tracks = hard_cap == t_star;
  theta = new_theta;
  t_star = std::max<std::uint64_t>(1, noisy_ceil(theta * static_cast<double>(n)));
  if (cap_tracks)
    hard_cap = t_star;
}

std::uint32_t ProcessParams::rich_threshold(std::size_t k) const {
  return static_cast<std::uint32_t>(noisy_ceil(rich_fraction * static_cast<double>(k)));
}

std::uint32_t ProcessParams::match_fold(std::size_t k) const {
  return static_cast<std::uint32_t>(noisy_ceil(match_fraction * static_cast<double>(k)));
}

void ProcessParams::validate() const {
  if (k1 < 1 || k2 < 1 || k3 < 1 || lambda < 1)
    throw std::invalid_argument("k1, k2, k3 and lambda must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(theta > 0.0))
    throw std::invalid_argument("theta must be positive");
  if (t_star < 1)
    throw std::invalid_argument("t_star must be at least 1");
  if (!(rich_fraction > 0.0 && rich_fraction <= 1.0) ||
      !(match_fraction > 0.0 && match_fraction <= 1.0))
    throw std::invalid_argument("rich and match fractions must lie in (0, 1]");
}

// ---------------------------------------------------------------------------
// Deferred-decision source.

LazySource::LazySource(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed,
                       double occurrence_bias)
    : n_(n), m_(m), k_(k), bias_(occurrence_bias), rng_(seed), positive_(m * k),
      var_(m * k, 0), literals_(m * k), hidden_vars_(n + 1), unresolved_slots_(m * k),
      pos_occ_(n + 1), neg_occ_(n + 1) {
  if (m > 0 && (n == 0 || k == 0))
    throw FormulaError("LazySource needs n >= 1 and k >= 1 when m > 0");
  for (auto &p : positive_)
    p = static_cast<std::uint8_t>(rng_.below(2) == 0);
  for (Var v = 1; v <= n; ++v)
    hidden_vars_.insert(v);
  for (std::size_t s = 0; s < m * k; ++s)
    unresolved_slots_.insert(static_cast<std::uint32_t>(s));
}

void LazySource::reveal(Var v, std::size_t first_slot) {
  const std::size_t hidden = hidden_vars_.size();
  std::vector<std::uint32_t> hits{static_cast<std::uint32_t>(first_slot)};
  const double p = std::min(1.0, bias_ / static_cast<double>(hidden));
  for (std::uint32_t s : unresolved_slots_.items()) {
    const bool hit = bias_ == 1.0 ? rng_.below(hidden) == 0 : rng_.uniform01() < p;
    if (hit)
      hits.push_back(s);
  }
  hidden_vars_.erase(v);
  std::ranges::sort(hits);
  for (std::uint32_t s : hits) {
    unresolved_slots_.erase(s);
    var_[s] = v;
    literals_[s] = Literal(v, positive_[s] != 0);
    const Occurrence occ{static_cast<ClauseIndex>(s / k_), static_cast<std::uint32_t>(s % k_)};
    (positive_[s] ? pos_occ_ : neg_occ_)[v].push_back(occ);
  }
}

Var LazySource::resolve(ClauseIndex i, std::uint32_t j) {
  const std::size_t s = i * k_ + j;
  if (var_[s] != 0)
    return var_[s];
  const Var v = hidden_vars_[rng_.below(hidden_vars_.size())];
  unresolved_slots_.erase(static_cast<std::uint32_t>(s));
  reveal(v, s);
  return v;
}

std::span<const Literal> LazySource::clause(ClauseIndex i) const {
  return {literals_.data() + i * k_, k_};
}

Formula LazySource::finalize() {
  std::vector<Literal> lits(literals_);
  for (std::size_t s = 0; s < lits.size(); ++s) {
    if (var_[s] != 0)
      continue;
    const Var v = hidden_vars_[rng_.below(hidden_vars_.size())];
    lits[s] = Literal(v, positive_[s] != 0);
  }
  return Formula(n_, k_, std::move(lits));
}

// ---------------------------------------------------------------------------
// The process.

PiProcess::PiProcess(const Formula &f, ProcessParams params)
    : PiProcess(std::make_unique<FormulaSource>(f), params) {}

PiProcess::PiProcess(std::unique_ptr<SlotSource> source, ProcessParams params)
    : source_(std::move(source)), params_(params), n_vars_(source_->num_vars()),
      k_(source_->width()), m_(source_->num_clauses()), sigma_(Assignment::all_true(n_vars_)),
      a_(n_vars_), n_(n_vars_), z_member_(m_, 0), reveal_time_(n_vars_ + 1, kNever),
      hidden_positive_(m_, 0), tau_(n_vars_), injection_(n_vars_ + 1, kNoClause),
      slot_flags_(m_ * k_, 0), active_slots_(m_, 0), passive_slots_(m_, 0) {
  params_.validate();
  std::vector<std::uint32_t> counts(m_, 0);
  for (ClauseIndex i = 0; i < m_; ++i)
    for (std::uint32_t j = 0; j < k_; ++j)
      counts[i] += source_->positive(i, j);
  hidden_positive_ = counts;
  d_size_ = static_cast<std::size_t>(std::ranges::count(counts, 0u));
  unsat_ = walksat::UnsatTracker(std::move(counts));
}

bool PiProcess::slot_revealed(ClauseIndex i, std::uint32_t j) const {
  const Var v = source_->peek(i, j);
  return v != 0 && revealed(v);
}

void PiProcess::mark_revealed(Var v) {
  reveal_time_[v] = t_;
  for (const Occurrence &o : source_->positive_occurrences(v))
    if (--hidden_positive_[o.clause] == 0)
      ++d_size_;
}

bool PiProcess::closure_candidate(ClauseIndex i, Var flipped) const {
  std::uint32_t a_slots = 0;
  std::uint32_t n_slots = 0;
  for (std::uint32_t j = 0; j < k_; ++j) {
    const Var v = source_->peek(i, j);
    const bool in_a = v != 0 && (v == flipped || a_.contains(v));
    const bool in_n = v != 0 && n_.contains(v);
    if (source_->positive(i, j) && !in_a && !in_n)
      return false;
    a_slots += in_a;
    n_slots += in_n;
  }
  return a_slots >= params_.k1 || n_slots > params_.lambda;
}

void PiProcess::add_to_z(ClauseIndex i, std::vector<Var> &new_n_vars) {
  z_member_[i] = 1;
  z_order_.push_back(i);
  for (std::uint32_t j = 0; j < k_; ++j) {
    const Var x = source_->resolve(i, j);
    if (!revealed(x))
      mark_revealed(x);
    if (n_.insert(x)) {
      n_order_.push_back(x);
      new_n_vars.push_back(x);
    }
  }
}

// Candidates are restricted to clauses touching the flipped variable or a
// variable that joined N during this closure; no other clause can change
// status between two closures.
std::vector<ClauseIndex> PiProcess::closure(Var flipped) {
  std::set<ClauseIndex> candidates;
  auto enqueue = [&](Var v) {
    for (const Occurrence &o : source_->positive_occurrences(v))
      if (!z_member_[o.clause])
        candidates.insert(o.clause);
    for (const Occurrence &o : source_->negative_occurrences(v))
      if (!z_member_[o.clause])
        candidates.insert(o.clause);
  };
  enqueue(flipped);

  std::vector<ClauseIndex> added;
  std::vector<Var> new_n_vars;
  for (;;) {
    auto it = std::ranges::find_if(candidates, [&](ClauseIndex i) {
      return !z_member_[i] && closure_candidate(i, flipped);
    });
    if (it == candidates.end())
      break;
    const ClauseIndex chosen = *it;
    candidates.erase(it);
    added.push_back(chosen);
    new_n_vars.clear();
    add_to_z(chosen, new_n_vars);
    for (Var x : new_n_vars)
      enqueue(x);
  }
  return added;
}

std::optional<StepRecord> PiProcess::step(Rng &rng) {
  if (stopped_)
    throw std::logic_error("step on a stopped process");
  if (satisfied()) {
    stopped_ = true;
    return std::nullopt;
  }
  const auto &unsat = unsat_.unsat();
  const ClauseIndex i = unsat[rng.below(unsat.size())];
  const auto j = static_cast<std::uint32_t>(rng.below(k_));
  return advance(i, j);
}

std::optional<StepRecord> PiProcess::step(Choice choice) {
  if (stopped_)
    throw std::logic_error("step on a stopped process");
  if (satisfied()) {
    stopped_ = true;
    return std::nullopt;
  }
  if (choice.clause >= m_ || !unsat_.unsat().contains(choice.clause))
    throw std::invalid_argument("clause " + std::to_string(choice.clause + 1) +
                                " is not unsatisfied at time " + std::to_string(t_));
  if (choice.slot >= k_)
    throw std::invalid_argument("slot " + std::to_string(choice.slot + 1) + " outside 1.." +
                                std::to_string(k_));
  return advance(choice.clause, choice.slot);
}

StepRecord PiProcess::advance(ClauseIndex i, std::uint32_t j) {
  ++t_;
  StepRecord rec;
  rec.t = t_;
  rec.i_t = i;
  rec.j_t = j;
  rec.chosen_in_z = z_member_[i] != 0;

  // PI1: reveal and flip.
  const bool slot_was_hidden = !slot_revealed(i, j);
  const Var y = source_->resolve(i, j);
  rec.flipped_var = y;
  rec.fresh_slot = slot_was_hidden && !source_->positive(i, j);
  const bool y_in_old_n = n_.contains(y);

  if (slot_was_hidden) {
    mark_revealed(y);
    auto mark = [&](const Occurrence &o) {
      const std::size_t s = o.clause * k_ + o.slot;
      if (o.clause == i && o.slot == j) {
        slot_flags_[s] |= 1;
        if (++active_slots_[o.clause] == params_.k2)
          ++active_clauses_;
      } else {
        slot_flags_[s] |= 2;
        if (++passive_slots_[o.clause] == params_.k3)
          ++passive_clauses_;
      }
    };
    for (const Occurrence &o : source_->positive_occurrences(y))
      mark(o);
    for (const Occurrence &o : source_->negative_occurrences(y))
      mark(o);
  }

  sigma_.flip(y);
  if (sigma_[y])
    unsat_.apply(source_->positive_occurrences(y), source_->negative_occurrences(y));
  else
    unsat_.apply(source_->negative_occurrences(y), source_->positive_occurrences(y));

  // PI2 runs against A_{t-1}; a_ is only updated afterwards.
  const std::size_t n_size_before = n_order_.size();
  VarSet n_prev_snapshot;
  rec.z_added = closure(y);
  if (!rec.z_added.empty()) {
    // N_{t-1} is the prefix of n_order_ recorded before the closure.
    n_prev_snapshot = VarSet(n_vars_);
    for (std::size_t idx = 0; idx < n_size_before; ++idx)
      n_prev_snapshot.insert(n_order_[idx]);
  }

  // PI3.
  for (std::size_t idx = n_size_before; idx < n_order_.size(); ++idx) {
    a_.erase(n_order_[idx]);
    injection_[n_order_[idx]] = kNoClause;
  }
  if (!n_.contains(y)) {
    a_.insert(y);
    injection_[y] = i;
  }

  // Rich extension of tau over the clauses Z gained.
  if (!rec.z_added.empty()) {
    std::vector<std::span<const Literal>> clauses;
    for (ClauseIndex c : rec.z_added)
      clauses.push_back(source_->clause(c));
    auto rich = expansion::build_rich_assignment(
        clauses, n_prev_snapshot, tau_, {params_.match_fold(k_), params_.rich_threshold(k_)});
    tau_ = std::move(rich.tau);
    if (!rich.ok() && rich_ok_) {
      rich_ok_ = false;
      rich_failure_ = "t=" + std::to_string(t_) + ": " + rich.detail;
    }
  }

  // Potentials.
  if (rec.fresh_slot)
    --s_prime_;
  if (y_in_old_n)
    h_prime_ += sigma_[y] == tau_[y] ? -1 : 1;
  if (t_ <= params_.t_star)
    r_ = s_prime_ + h_prime_;
  else
    --r_;

  flips_.push_back({i, j, y});

  rec.d_size = d_size_;
  rec.s_pot = s_pot();
  rec.h_pot = compute_h();
  rec.s_prime = s_prime_;
  rec.h_prime = h_prime_;
  rec.r_pot = r_;
  rec.z_size = z_order_.size();
  rec.n_size = n_order_.size();
  rec.a_size = a_.size();
  rec.active_count = active_clauses_;
  rec.passive_count = passive_clauses_;
  rec.rich_ok = rich_ok_;
  rec.u_t = unsat_outside_z();
  return rec;
}

std::int64_t PiProcess::s_pot() const {
  return static_cast<std::int64_t>(d_size_) - static_cast<std::int64_t>(a_.size());
}

std::int64_t PiProcess::compute_h() const {
  if (t_ == 0)
    return 0;
  if (t_ > params_.t_star || !rich_ok_)
    return static_cast<std::int64_t>(n_order_.size());
  std::int64_t mismatches = 0;
  for (Var x : n_order_)
    mismatches += sigma_[x] != tau_[x];
  return mismatches;
}

std::size_t PiProcess::unsat_outside_z() const {
  std::size_t count = 0;
  for (std::uint32_t i : unsat_.unsat().items())
    count += !z_member_[i];
  return count;
}

std::vector<ClauseIndex> PiProcess::compute_d() const {
  std::vector<ClauseIndex> d;
  for (ClauseIndex i = 0; i < m_; ++i) {
    bool negative = true;
    for (std::uint32_t j = 0; j < k_ && negative; ++j) {
      if (!source_->positive(i, j))
        continue;
      const Var v = source_->peek(i, j);
      negative = v != 0 && (a_.contains(v) || n_.contains(v));
    }
    if (negative)
      d.push_back(i);
  }
  return d;
}

InjectionReport PiProcess::build_injection_s() const {
  InjectionReport report;
  std::vector<std::uint8_t> image_used(m_, 0);
  for (Var x = 1; x <= n_vars_; ++x) {
    if (!a_.contains(x))
      continue;
    const ClauseIndex c = injection_[x];
    if (c == kNoClause) {
      report.violation = "x" + std::to_string(x) + " in A has no image";
      return report;
    }
    report.map.emplace_back(x, c);
    if (image_used[c]++) {
      report.violation = "clause " + std::to_string(c + 1) + " is the image of two variables";
      return report;
    }
    bool in_d = true;
    bool witnessed = false;
    for (std::uint32_t j = 0; j < k_; ++j) {
      const Var v = source_->peek(c, j);
      const bool pos = source_->positive(c, j);
      if (pos && !(v != 0 && (a_.contains(v) || n_.contains(v))))
        in_d = false;
      if (v == x && Literal(x, pos).holds(sigma_[x]))
        witnessed = true;
    }
    if (!in_d) {
      report.violation = "image clause " + std::to_string(c + 1) + " of x" + std::to_string(x) +
                         " is not in D";
      return report;
    }
    if (!witnessed) {
      report.violation = "x" + std::to_string(x) + " has no true literal in clause " +
                         std::to_string(c + 1);
      return report;
    }
  }
  return report;
}

StepRecord PiProcess::initial_record() const {
  StepRecord rec;
  rec.d_size = d_size_;
  rec.s_pot = static_cast<std::int64_t>(d_size_);
  rec.u_t = unsat_.unsat().size();
  return rec;
}

std::pair<std::size_t, std::size_t>
classify_active_passive(const Formula &f, std::span<const FlipRecord> flips,
                        std::span<const std::uint64_t> reveal_time, std::uint64_t t,
                        const ProcessParams &params) {
  const std::size_t k = f.width();
  std::size_t active_clauses = 0;
  std::size_t passive_clauses = 0;
  const std::uint64_t horizon = std::min<std::uint64_t>(t, flips.size());
  for (std::size_t i = 0; i < f.num_clauses(); ++i) {
    std::uint32_t active = 0;
    std::uint32_t passive = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const Var v = f.at(i, j).var();
      bool is_active = false;
      bool is_passive = false;
      for (std::uint64_t s = 1; s <= horizon; ++s) {
        const FlipRecord &fr = flips[s - 1];
        // pi_{s-1}(i, j) is a bare sign iff the variable was revealed at s or later.
        const bool sign_only = reveal_time[v] >= s;
        if (!sign_only)
          continue;
        const bool same_slot = fr.clause == i && fr.slot == j;
        if (same_slot && !f.at(i, j).positive())
          is_active = true;
        if (!same_slot && f.at(fr.clause, fr.slot).var() == v)
          is_passive = true;
      }
      active += is_active;
      passive += is_passive;
    }
    active_clauses += active >= params.k2;
    passive_clauses += passive >= params.k3;
  }
  return {active_clauses, passive_clauses};
}

const char *to_string(TraceOutcome outcome) {
  switch (outcome) {
  case TraceOutcome::satisfied:
    return "satisfied";
  case TraceOutcome::cap_reached:
    return "cap_reached";
  case TraceOutcome::script_exhausted:
    return "script_exhausted";
  }
  return "unknown";
}

namespace {

Trace start_trace(const PiProcess &p) {
  Trace trace;
  trace.n = p.source().num_vars();
  trace.m = p.source().num_clauses();
  trace.k = p.source().width();
  trace.params = p.params();
  trace.initial = p.initial_record();
  return trace;
}

StepSets snapshot(const PiProcess &p) {
  StepSets sets;
  sets.a = p.a_set().to_vector();
  sets.n = p.n_set().to_vector();
  sets.z.assign(p.z_order().begin(), p.z_order().end());
  return sets;
}

} // namespace

Trace run_instrumented(PiProcess &process, std::uint64_t seed, bool record_sets) {
  Trace trace = start_trace(process);
  trace.seed = seed;
  Rng rng(seed);
  while (!process.stopped() && process.t() < process.params().hard_cap) {
    auto rec = process.step(rng);
    if (!rec)
      break;
    trace.steps.push_back(std::move(*rec));
    if (record_sets)
      trace.sets.push_back(snapshot(process));
  }
  if (process.satisfied()) {
    trace.outcome = TraceOutcome::satisfied;
    trace.stop_time = process.t();
  } else {
    trace.outcome = TraceOutcome::cap_reached;
  }
  return trace;
}

Trace run_instrumented(const Formula &f, const ProcessParams &params, std::uint64_t seed,
                       bool record_sets) {
  PiProcess process(f, params);
  return run_instrumented(process, seed, record_sets);
}

Trace replay(const Formula &f, const ProcessParams &params, std::span<const Choice> script,
             bool record_sets) {
  PiProcess process(f, params);
  Trace trace = start_trace(process);
  for (std::size_t s = 0; s < script.size(); ++s) {
    std::optional<StepRecord> rec;
    try {
      rec = process.step(script[s]);
    } catch (const std::invalid_argument &e) {
      throw std::invalid_argument("step " + std::to_string(s + 1) + ": " + e.what());
    }
    if (!rec)
      throw std::invalid_argument("step " + std::to_string(s + 1) +
                                  ": the formula is already satisfied at t=" +
                                  std::to_string(process.t()));
    trace.steps.push_back(std::move(*rec));
    if (record_sets)
      trace.sets.push_back(snapshot(process));
  }
  if (process.satisfied()) {
    trace.outcome = TraceOutcome::satisfied;
    trace.stop_time = process.t();
  } else {
    trace.outcome = TraceOutcome::script_exhausted;
  }
  return trace;
}

} // namespace wsl::pi

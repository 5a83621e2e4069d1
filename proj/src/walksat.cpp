#include "wsl/walksat.hpp"

#include <algorithm>

namespace wsl::walksat {

void IndexedSet::insert(std::uint32_t x) {
  if (pos_[x] != kAbsent)
    return;
  pos_[x] = static_cast<std::uint32_t>(items_.size());
  items_.push_back(x);
}

void IndexedSet::erase(std::uint32_t x) {
  const std::uint32_t p = pos_[x];
  if (p == kAbsent)
    return;
  const std::uint32_t last = items_.back();
  items_[p] = last;
  pos_[last] = p;
  items_.pop_back();
  pos_[x] = kAbsent;
}

OccurrenceIndex::OccurrenceIndex(const Formula &f) {
  const std::size_t codes = 2 * (f.num_vars() + 1);
  offsets_.assign(codes + 1, 0);
  auto code_of = [](Literal l) { return 2 * l.var() + (l.positive() ? 0 : 1); };
  for (Literal l : f.literals())
    ++offsets_[code_of(l) + 1];
  for (std::size_t c = 0; c < codes; ++c)
    offsets_[c + 1] += offsets_[c];
  entries_.resize(f.literals().size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < f.num_clauses(); ++i) {
    auto clause = f.clause(i);
    for (std::size_t j = 0; j < clause.size(); ++j)
      entries_[fill[code_of(clause[j])]++] = {static_cast<ClauseIndex>(i), static_cast<std::uint32_t>(j)};
  }
}

UnsatTracker::UnsatTracker(std::vector<std::uint32_t> true_count)
    : true_count_(std::move(true_count)), unsat_(true_count_.size()) {
  for (std::size_t i = 0; i < true_count_.size(); ++i)
    if (true_count_[i] == 0)
      unsat_.insert(static_cast<std::uint32_t>(i));
}

FlipDelta UnsatTracker::apply(std::span<const Occurrence> now_true,
                              std::span<const Occurrence> now_false) {
  FlipDelta delta;
  for (const Occurrence &o : now_true)
    if (true_count_[o.clause]++ == 0) {
      unsat_.erase(o.clause);
      ++delta.made;
    }
  for (const Occurrence &o : now_false)
    if (--true_count_[o.clause] == 0) {
      unsat_.insert(o.clause);
      ++delta.broken;
    }
  return delta;
}

namespace {

std::vector<std::uint32_t> count_true(const Formula &f, const Assignment &a) {
  std::vector<std::uint32_t> counts(f.num_clauses(), 0);
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    for (Literal l : f.clause(i))
      counts[i] += a.satisfies(l);
  return counts;
}

} // namespace

SolverTracker::SolverTracker(const Formula &f, Assignment a)
    : f_(&f), occ_(f), a_(std::move(a)), counts_(count_true(f, a_)) {}

FlipDelta SolverTracker::flip(Var v) {
  a_.flip(v);
  return a_[v] ? counts_.apply(occ_.positive(v), occ_.negative(v))
               : counts_.apply(occ_.negative(v), occ_.positive(v));
}

bool SolverTracker::same_state(const SolverTracker &other) const {
  if (a_ != other.a_)
    return false;
  if (!std::ranges::equal(true_counts(), other.true_counts()))
    return false;
  if (unsat().size() != other.unsat().size())
    return false;
  return std::ranges::all_of(unsat().items(),
                             [&](std::uint32_t i) { return other.unsat().contains(i); });
}

namespace {

// Steps 2-4 of the loop. Returns true once the assignment satisfies f.
bool walk(SolverTracker &tracker, std::uint64_t t_max, Rng &rng, RunResult &result) {
  const Formula &f = tracker.formula();
  for (std::uint64_t t = 0; t < t_max; ++t) {
    if (tracker.satisfied())
      return true;
    const auto &unsat = tracker.unsat();
    const ClauseIndex i = unsat[rng.below(unsat.size())];
    const auto j = static_cast<std::uint32_t>(rng.below(f.width()));
    const Var v = f.at(i, j).var();
    tracker.flip(v);
    result.flip_log.push_back({i, j, v});
    ++result.flips_used;
  }
  return tracker.satisfied();
}

} // namespace

RunResult run(const Formula &f, std::uint64_t t_max, std::uint64_t seed) {
  Rng rng(seed);
  SolverTracker tracker(f, Assignment::all_true(f.num_vars()));
  RunResult result;
  result.outcome = walk(tracker, t_max, rng, result) ? Outcome::satisfied : Outcome::failure;
  result.assignment = tracker.assignment();
  return result;
}

RunResult run_with_restarts(const Formula &f, std::uint64_t tries, std::uint64_t t_max_per_try,
                            std::uint64_t seed) {
  RunResult result;
  for (std::uint64_t attempt = 0; attempt < tries; ++attempt) {
    Rng rng(Rng::derive(seed, attempt));
    Assignment start(f.num_vars(), true);
    for (Var v = 1; v <= f.num_vars(); ++v)
      start.set(v, rng.below(2) == 1);
    SolverTracker tracker(f, std::move(start));
    const bool ok = walk(tracker, t_max_per_try, rng, result);
    result.assignment = tracker.assignment();
    if (ok) {
      result.outcome = Outcome::satisfied;
      return result;
    }
  }
  result.outcome = Outcome::failure;
  return result;
}

} // namespace wsl::walksat

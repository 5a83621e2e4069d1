#include "wsl/formula.hpp"

#include <algorithm>
#include <cmath>

#include "wsl/rng.hpp"

namespace wsl {

std::size_t PartialAssignment::defined_count() const {
  std::size_t count = 0;
  for (std::size_t v = 1; v < values_.size(); ++v)
    count += values_[v] != kUnset;
  return count;
}

bool VarSet::insert(Var v) {
  if (member_[v])
    return false;
  member_[v] = 1;
  ++count_;
  return true;
}

bool VarSet::erase(Var v) {
  if (!member_[v])
    return false;
  member_[v] = 0;
  --count_;
  return true;
}

std::vector<Var> VarSet::to_vector() const {
  std::vector<Var> out;
  out.reserve(count_);
  for (Var v = 1; v < member_.size(); ++v)
    if (member_[v])
      out.push_back(v);
  return out;
}

Formula::Formula(std::size_t num_vars, std::size_t width, std::vector<Literal> literals)
    : n_(num_vars), k_(width), literals_(std::move(literals)) {
  if (k_ == 0) {
    if (!literals_.empty())
      throw FormulaError("clause width 0 with non-empty clause list");
    m_ = 0;
    return;
  }
  if (literals_.size() % k_ != 0)
    throw FormulaError("literal count " + std::to_string(literals_.size()) +
                       " is not a multiple of width " + std::to_string(k_));
  m_ = literals_.size() / k_;
  for (std::size_t s = 0; s < literals_.size(); ++s) {
    Var v = literals_[s].var();
    if (v == 0 || v > n_)
      throw FormulaError("clause " + std::to_string(s / k_ + 1) + " uses variable " +
                         std::to_string(v) + " outside 1.." + std::to_string(n_));
  }
}

Formula generate_uniform(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
  if (m > 0 && (n == 0 || k == 0))
    throw FormulaError("generate_uniform needs n >= 1 and k >= 1 when m > 0");
  Rng rng(seed);
  std::vector<Literal> lits(m * k);
  const std::uint64_t literal_count = 2 * static_cast<std::uint64_t>(n);
  for (auto &l : lits) {
    const std::uint64_t draw = rng.below(literal_count);
    l = draw < n ? Literal(static_cast<Var>(draw + 1), true)
                 : Literal(static_cast<Var>(draw - n + 1), false);
  }
  return Formula(n, k, std::move(lits));
}

std::size_t clause_count_for_density(double r, std::size_t n) {
  const double product = r * static_cast<double>(n);
  const double rounded = std::round(product);
  if (std::abs(product - rounded) <= 1e-9 * std::max(1.0, rounded))
    return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(product));
}

std::size_t count_all_negative(const Formula &f) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    count += is_s_negative(f.clause(i), [](Var) { return false; });
  return count;
}

bool clause_satisfied(std::span<const Literal> clause, const Assignment &a) {
  for (Literal l : clause)
    if (a.satisfies(l))
      return true;
  return false;
}

std::vector<ClauseIndex> unsat_indices(const Formula &f, const Assignment &a) {
  std::vector<ClauseIndex> out;
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    if (!clause_satisfied(f.clause(i), a))
      out.push_back(static_cast<ClauseIndex>(i));
  return out;
}

} // namespace wsl

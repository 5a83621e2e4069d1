#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsl {

/// Variables are numbered 1..n, as in DIMACS. Index 0 is never a variable.
using Var = std::uint32_t;

/// Clause indices and slot indices are 0-based inside the library and
/// converted to 1-based only when written out.
using ClauseIndex = std::uint32_t;

/// A signed occurrence of a variable, stored as its DIMACS integer.
class Literal {
public:
  constexpr Literal() = default;
  constexpr Literal(Var var, bool positive)
      : code_(positive ? static_cast<std::int32_t>(var)
                       : -static_cast<std::int32_t>(var)) {}

  static constexpr Literal from_dimacs(std::int32_t code) {
    Literal l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return static_cast<Var>(code_ < 0 ? -code_ : code_); }
  constexpr bool positive() const { return code_ > 0; }
  constexpr int sign() const { return code_ > 0 ? 1 : -1; }
  constexpr std::int32_t dimacs() const { return code_; }

  /// Truth value of this literal when its variable takes `value`.
  constexpr bool holds(bool value) const { return value == positive(); }

  friend constexpr bool operator==(Literal, Literal) = default;

private:
  std::int32_t code_ = 0;
};

/// Total truth assignment over variables 1..n.
class Assignment {
public:
  Assignment() = default;
  Assignment(std::size_t num_vars, bool value) : values_(num_vars + 1, value ? 1 : 0) {}

  static Assignment all_true(std::size_t num_vars) { return Assignment(num_vars, true); }

  std::size_t num_vars() const { return values_.empty() ? 0 : values_.size() - 1; }
  bool operator[](Var v) const { return values_[v] != 0; }
  void set(Var v, bool value) { values_[v] = value ? 1 : 0; }
  void flip(Var v) { values_[v] ^= 1; }
  bool satisfies(Literal l) const { return l.holds((*this)[l.var()]); }

  friend bool operator==(const Assignment &, const Assignment &) = default;

private:
  std::vector<std::uint8_t> values_;
};

/// Assignment defined on a subset of the variables.
class PartialAssignment {
public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::size_t num_vars) : values_(num_vars + 1, kUnset) {}

  std::size_t num_vars() const { return values_.empty() ? 0 : values_.size() - 1; }
  bool defined(Var v) const { return values_[v] != kUnset; }
  bool operator[](Var v) const { return values_[v] == 1; }
  void set(Var v, bool value) { values_[v] = value ? 1 : 0; }
  std::size_t defined_count() const;

  friend bool operator==(const PartialAssignment &, const PartialAssignment &) = default;

private:
  static constexpr std::int8_t kUnset = -1;
  std::vector<std::int8_t> values_;
};

/// Dense membership set over variables 1..n with O(1) insert/erase/size.
class VarSet {
public:
  VarSet() = default;
  explicit VarSet(std::size_t num_vars) : member_(num_vars + 1, 0) {}

  bool contains(Var v) const { return member_[v] != 0; }
  bool insert(Var v);
  bool erase(Var v);
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  /// Members in ascending order. O(n).
  std::vector<Var> to_vector() const;

  friend bool operator==(const VarSet &, const VarSet &) = default;

private:
  std::vector<std::uint8_t> member_;
  std::size_t count_ = 0;
};

class FormulaError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered m-tuple of ordered k-tuples of literals over x1..xn.
///
/// Repeated literals inside a clause and repeated clauses are both legal;
/// the uniform model draws every slot independently.
class Formula {
public:
  Formula() = default;

  /// `literals` holds the clauses back to back, so its size must be a
  /// multiple of k. Throws FormulaError on out-of-range variables.
  Formula(std::size_t num_vars, std::size_t width, std::vector<Literal> literals);

  std::size_t num_vars() const { return n_; }
  std::size_t width() const { return k_; }
  std::size_t num_clauses() const { return m_; }
  double density() const { return n_ == 0 ? 0.0 : static_cast<double>(m_) / static_cast<double>(n_); }

  std::span<const Literal> clause(std::size_t i) const {
    return {literals_.data() + i * k_, k_};
  }
  Literal at(std::size_t i, std::size_t j) const { return literals_[i * k_ + j]; }
  std::span<const Literal> literals() const { return literals_; }

  friend bool operator==(const Formula &, const Formula &) = default;

private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t m_ = 0;
  std::vector<Literal> literals_;
};

/// Uniform element of the space of ordered formulas: each of the k*m slots
/// is an independent uniform draw from the 2n literals.
Formula generate_uniform(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed);

/// Clause count ceil(r*n), tolerant of floating-point noise in r*n.
std::size_t clause_count_for_density(double r, std::size_t n);

/// Number of clauses consisting of negative literals only (the clauses
/// falsified by the all-true assignment).
std::size_t count_all_negative(const Formula &f);

bool clause_satisfied(std::span<const Literal> clause, const Assignment &a);

/// Ascending 0-based indices of the clauses with no true literal under `a`.
std::vector<ClauseIndex> unsat_indices(const Formula &f, const Assignment &a);

/// True iff every positive literal of `clause` has its variable in the set.
template <class Contains>
  requires std::predicate<Contains &, Var>
bool is_s_negative(std::span<const Literal> clause, Contains &&in_set) {
  for (Literal l : clause)
    if (l.positive() && !in_set(l.var()))
      return false;
  return true;
}

inline bool is_s_negative(std::span<const Literal> clause, const VarSet &s) {
  return is_s_negative(clause, [&](Var v) { return s.contains(v); });
}

/// DIMACS CNF with the optional width comment "c k <width>".
class DimacsError : public std::runtime_error {
public:
  DimacsError(std::size_t line, const std::string &what);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

Formula parse_dimacs(std::string_view text);
std::string write_dimacs(const Formula &f);

Formula read_dimacs_file(const std::string &path);

} // namespace wsl

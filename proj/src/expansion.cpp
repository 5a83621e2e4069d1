#include "wsl/expansion.hpp"

#include <algorithm>

namespace wsl::expansion {

FactorGraph::FactorGraph(const Formula &f) {
  const std::size_t m = f.num_clauses();
  const std::size_t n = f.num_vars();
  clause_offsets_.assign(m + 1, 0);
  std::vector<Var> scratch;
  for (std::size_t i = 0; i < m; ++i) {
    scratch.clear();
    for (Literal l : f.clause(i))
      scratch.push_back(l.var());
    std::ranges::sort(scratch);
    auto last = std::unique(scratch.begin(), scratch.end());
    clause_vars_.insert(clause_vars_.end(), scratch.begin(), last);
    clause_offsets_[i + 1] = static_cast<std::uint32_t>(clause_vars_.size());
  }

  var_offsets_.assign(n + 2, 0);
  for (Var x : clause_vars_)
    ++var_offsets_[x + 1];
  for (std::size_t x = 0; x <= n; ++x)
    var_offsets_[x + 1] += var_offsets_[x];
  var_clauses_.resize(clause_vars_.size());
  std::vector<std::uint32_t> fill(var_offsets_.begin(), var_offsets_.end() - 1);
  for (std::size_t i = 0; i < m; ++i)
    for (Var x : clause_vars(static_cast<ClauseIndex>(i)))
      var_clauses_[fill[x]++] = static_cast<ClauseIndex>(i);
}

std::vector<Var> neighborhood(const FactorGraph &fg, std::span<const ClauseIndex> z) {
  std::vector<Var> out;
  for (ClauseIndex i : z) {
    auto vars = fg.clause_vars(i);
    out.insert(out.end(), vars.begin(), vars.end());
  }
  std::ranges::sort(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Kuhn's augmenting paths on l copies of every left vertex.
class FoldMatcher {
public:
  FoldMatcher(std::span<const std::vector<Var>> adjacency, std::uint32_t fold)
      : adj_(adjacency), fold_(fold) {
    Var max_var = 0;
    for (const auto &list : adj_)
      for (Var v : list)
        max_var = std::max(max_var, v);
    owner_.assign(max_var + 1, kFree);
    seen_.assign(max_var + 1, 0);
  }

  std::vector<std::pair<std::size_t, Var>> solve() {
    const std::size_t copies = adj_.size() * fold_;
    for (std::size_t u = 0; u < copies; ++u) {
      ++stamp_;
      augment(u);
    }
    std::vector<std::pair<std::size_t, Var>> edges;
    for (Var v = 0; v < owner_.size(); ++v)
      if (owner_[v] != kFree)
        edges.emplace_back(owner_[v] / fold_, v);
    std::ranges::sort(edges);
    return edges;
  }

private:
  bool augment(std::size_t copy) {
    for (Var v : adj_[copy / fold_]) {
      if (seen_[v] == stamp_)
        continue;
      seen_[v] = stamp_;
      if (owner_[v] == kFree || augment(owner_[v])) {
        owner_[v] = copy;
        return true;
      }
    }
    return false;
  }

  static constexpr std::size_t kFree = SIZE_MAX;
  std::span<const std::vector<Var>> adj_;
  std::uint32_t fold_;
  std::vector<std::size_t> owner_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t stamp_ = 0;
};

std::vector<Var> distinct_vars(std::span<const Literal> clause) {
  std::vector<Var> vars;
  for (Literal l : clause)
    vars.push_back(l.var());
  std::ranges::sort(vars);
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

} // namespace

std::vector<std::pair<std::size_t, Var>>
max_fold_matching(std::span<const std::vector<Var>> adjacency, std::uint32_t l) {
  if (l == 0 || adjacency.empty())
    return {};
  return FoldMatcher(adjacency, l).solve();
}

std::optional<LFoldMatching> find_l_fold_matching(const FactorGraph &fg,
                                                  std::span<const ClauseIndex> z, std::uint32_t l) {
  std::vector<std::vector<Var>> adjacency;
  adjacency.reserve(z.size());
  for (ClauseIndex i : z) {
    auto vars = fg.clause_vars(i);
    adjacency.emplace_back(vars.begin(), vars.end());
  }
  auto edges = max_fold_matching(adjacency, l);
  if (edges.size() != static_cast<std::size_t>(l) * z.size())
    return std::nullopt;
  LFoldMatching matching;
  matching.fold = l;
  matching.edges.reserve(edges.size());
  for (auto [left, v] : edges)
    matching.edges.emplace_back(z[left], v);
  return matching;
}

std::vector<ClauseIndex> check_core_property(const FactorGraph &fg, std::span<const ClauseIndex> z,
                                             std::uint32_t lambda) {
  std::vector<std::uint8_t> used(fg.num_clauses(), 0);
  std::vector<std::uint8_t> in_hood(fg.num_vars() + 1, 0);
  auto absorb = [&](ClauseIndex i) {
    used[i] = 1;
    for (Var x : fg.clause_vars(i))
      in_hood[x] = 1;
  };
  for (ClauseIndex i : z)
    absorb(i);

  std::vector<ClauseIndex> sequence;
  bool grew = true;
  while (grew) {
    grew = false;
    for (ClauseIndex i = 0; i < fg.num_clauses(); ++i) {
      if (used[i])
        continue;
      std::uint32_t overlap = 0;
      for (Var x : fg.clause_vars(i))
        overlap += in_hood[x];
      if (overlap >= lambda) {
        sequence.push_back(i);
        absorb(i);
        grew = true;
        break;
      }
    }
  }
  return sequence;
}

std::vector<ClauseIndex> closure_y(const Formula &f, const FactorGraph &fg,
                                   std::span<const ClauseIndex> y0, std::uint32_t lambda) {
  std::vector<std::uint8_t> in_y(f.num_clauses(), 0);
  std::vector<std::uint8_t> in_hood(f.num_vars() + 1, 0);
  auto absorb = [&](ClauseIndex i) {
    in_y[i] = 1;
    for (Var x : fg.clause_vars(i))
      in_hood[x] = 1;
  };
  for (ClauseIndex i : y0)
    absorb(i);

  bool grew = true;
  while (grew) {
    grew = false;
    for (ClauseIndex i = 0; i < f.num_clauses(); ++i) {
      if (in_y[i])
        continue;
      std::uint32_t slots = 0;
      for (Literal l : f.clause(i))
        slots += in_hood[l.var()];
      if (slots >= lambda) {
        absorb(i);
        grew = true;
        break;
      }
    }
  }
  std::vector<ClauseIndex> out;
  for (ClauseIndex i = 0; i < f.num_clauses(); ++i)
    if (in_y[i])
      out.push_back(i);
  return out;
}

std::uint32_t satisfied_occurrences(std::span<const Literal> clause, const PartialAssignment &tau) {
  std::uint32_t count = 0;
  for (Literal l : clause)
    count += tau.defined(l.var()) && l.holds(tau[l.var()]);
  return count;
}

RichResult build_rich_assignment(std::span<const std::span<const Literal>> z_new,
                                 const VarSet &n_prev, const PartialAssignment &tau_prev,
                                 RichThresholds thresholds) {
  RichResult result;
  result.tau = tau_prev;
  if (z_new.empty())
    return result;

  // Fresh variables first so the matching avoids n_prev where it can.
  std::vector<std::vector<Var>> adjacency;
  adjacency.reserve(z_new.size());
  for (auto clause : z_new) {
    auto vars = distinct_vars(clause);
    std::ranges::stable_partition(vars, [&](Var x) { return !n_prev.contains(x); });
    adjacency.push_back(std::move(vars));
  }

  auto edges = max_fold_matching(adjacency, thresholds.match_fold);
  if (edges.size() != static_cast<std::size_t>(thresholds.match_fold) * z_new.size()) {
    result.status = RichStatus::no_matching;
    result.detail = "maximum matching has " + std::to_string(edges.size()) + " edges, need " +
                    std::to_string(thresholds.match_fold * z_new.size());
  }

  std::vector<std::uint32_t> kept(z_new.size(), 0);
  for (auto [left, x] : edges) {
    if (n_prev.contains(x))
      continue;
    ++kept[left];
    for (Literal l : z_new[left])
      if (l.var() == x) {
        result.tau.set(x, l.positive());
        break;
      }
  }
  for (auto clause : z_new)
    for (Literal l : clause)
      if (!result.tau.defined(l.var()))
        result.tau.set(l.var(), true);

  if (result.ok()) {
    for (std::size_t c = 0; c < z_new.size(); ++c)
      if (kept[c] < thresholds.rich) {
        result.status = RichStatus::pruned_below_threshold;
        result.detail = "clause #" + std::to_string(c) + " keeps " + std::to_string(kept[c]) +
                        " matched edges outside the previous neighbourhood, need " +
                        std::to_string(thresholds.rich);
        break;
      }
  }
  return result;
}

RichResult build_rich_assignment(const Formula &f, std::span<const ClauseIndex> z_new,
                                 const VarSet &n_prev, const PartialAssignment &tau_prev,
                                 RichThresholds thresholds) {
  std::vector<std::span<const Literal>> clauses;
  clauses.reserve(z_new.size());
  for (ClauseIndex i : z_new)
    clauses.push_back(f.clause(i));
  return build_rich_assignment(clauses, n_prev, tau_prev, thresholds);
}

} // namespace wsl::expansion

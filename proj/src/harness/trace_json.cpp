#include "wsl/harness/trace_json.hpp"

#include <stdexcept>

namespace wsl::trace_json {

Json params_to_json(const pi::ProcessParams &p) {
  return Json{{"k1", p.k1},
              {"k2", p.k2},
              {"k3", p.k3},
              {"lambda", p.lambda},
              {"epsilon", p.epsilon},
              {"theta", p.theta},
              {"t_star", p.t_star},
              {"rich_fraction", p.rich_fraction},
              {"match_fraction", p.match_fraction},
              {"hard_cap", p.hard_cap}};
}

namespace {

template <class Ints>
Json one_based(const Ints &xs) {
  Json out = Json::array();
  for (auto x : xs)
    out.push_back(static_cast<std::uint64_t>(x) + 1);
  return out;
}

template <class Ints>
Json verbatim(const Ints &xs) {
  Json out = Json::array();
  for (auto x : xs)
    out.push_back(x);
  return out;
}

Json step_to_json(const pi::StepRecord &r) {
  return Json{{"t", r.t},
              {"i", r.i_t + 1},
              {"j", r.j_t + 1},
              {"var", r.flipped_var},
              {"D", r.d_size},
              {"S", r.s_pot},
              {"H", r.h_pot},
              {"S_prime", r.s_prime},
              {"H_prime", r.h_prime},
              {"R", r.r_pot},
              {"Z_size", r.z_size},
              {"N_size", r.n_size},
              {"A_size", r.a_size},
              {"active", r.active_count},
              {"passive", r.passive_count},
              {"rich_ok", r.rich_ok},
              {"U", r.u_t},
              {"chosen_in_Z", r.chosen_in_z},
              {"fresh_slot", r.fresh_slot},
              {"Z_added", one_based(r.z_added)}};
}

} // namespace

Json trace_to_json(const pi::Trace &trace, const Formula *formula) {
  Json header{{"schema", kTraceSchema},
              {"rng", std::string(Rng::kName)},
              {"n", trace.n},
              {"m", trace.m},
              {"k", trace.k},
              {"params", params_to_json(trace.params)},
              {"seed", trace.seed ? Json(*trace.seed) : Json(nullptr)},
              {"outcome", pi::to_string(trace.outcome)},
              {"T", trace.stop_time ? Json(*trace.stop_time) : Json(nullptr)},
              {"initial", Json{{"D", trace.initial.d_size}, {"S", trace.initial.s_pot},
                               {"U", trace.initial.u_t}}}};
  if (formula) {
    Json clauses = Json::array();
    for (std::size_t i = 0; i < formula->num_clauses(); ++i) {
      Json c = Json::array();
      for (Literal l : formula->clause(i))
        c.push_back(l.dimacs());
      clauses.push_back(std::move(c));
    }
    header["formula"] = std::move(clauses);
  }

  Json steps = Json::array();
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    Json step = step_to_json(trace.steps[s]);
    if (s < trace.sets.size()) {
      step["A"] = verbatim(trace.sets[s].a);
      step["N"] = verbatim(trace.sets[s].n);
      step["Z"] = one_based(trace.sets[s].z);
    }
    steps.push_back(std::move(step));
  }
  return Json{{"header", std::move(header)}, {"steps", std::move(steps)}};
}

std::vector<pi::Choice> parse_script(const Json &script) {
  if (!script.is_array())
    throw std::invalid_argument("choice script must be a JSON array");
  std::vector<pi::Choice> choices;
  for (std::size_t idx = 0; idx < script.size(); ++idx) {
    const Json &entry = script[idx];
    const std::string where = "script entry " + std::to_string(idx + 1);
    if (!entry.is_object())
      throw std::invalid_argument(where + " is not an object");
    for (const char *key : {"t", "i", "j"})
      if (!entry.contains(key) || !entry[key].is_number_integer() || entry[key].get<long long>() < 1)
        throw std::invalid_argument(where + ": \"" + key + "\" must be a positive integer");
    if (entry["t"].get<std::uint64_t>() != idx + 1)
      throw std::invalid_argument(where + ": expected t=" + std::to_string(idx + 1));
    choices.push_back({static_cast<ClauseIndex>(entry["i"].get<std::uint64_t>() - 1),
                       static_cast<std::uint32_t>(entry["j"].get<std::uint64_t>() - 1)});
  }
  return choices;
}

namespace {

std::string escape_token(const std::string &key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

bool walk(const Json &e, const Json &a, const std::string &path, Mismatch &m) {
  auto fail = [&](const std::string &p, const std::string &exp, const std::string &act) {
    m.equal = false;
    m.path = p.empty() ? "/" : p;
    m.expected = exp;
    m.actual = act;
    return false;
  };
  if (e.type() != a.type() && !(e.is_number() && a.is_number()))
    return fail(path, e.dump(), a.dump());
  if (e.is_object()) {
    for (auto it = e.begin(); it != e.end(); ++it) {
      const std::string child = path + "/" + escape_token(it.key());
      if (!a.contains(it.key()))
        return fail(child, it.value().dump(), "<missing>");
      if (!walk(it.value(), a.at(it.key()), child, m))
        return false;
    }
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!e.contains(it.key()))
        return fail(path + "/" + escape_token(it.key()), "<missing>", it.value().dump());
    return true;
  }
  if (e.is_array()) {
    const std::size_t common = std::min(e.size(), a.size());
    for (std::size_t i = 0; i < common; ++i)
      if (!walk(e[i], a[i], path + "/" + std::to_string(i), m))
        return false;
    if (e.size() != a.size()) {
      const std::string child = path + "/" + std::to_string(common);
      return fail(child, common < e.size() ? e[common].dump() : "<missing>",
                  common < a.size() ? a[common].dump() : "<missing>");
    }
    return true;
  }
  if (e != a)
    return fail(path, e.dump(), a.dump());
  return true;
}

} // namespace

Mismatch compare(const Json &expected, const Json &actual) {
  Mismatch m;
  walk(expected, actual, "", m);
  return m;
}

} // namespace wsl::trace_json

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "wsl/formula.hpp"

namespace wsl {

DimacsError::DimacsError(std::size_t line, const std::string &what)
    : std::runtime_error("dimacs:" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
    if (pos > start)
      out.push_back(line.substr(start, pos - start));
  }
  return out;
}

template <class Int> std::optional<Int> to_int(std::string_view token) {
  Int value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    return std::nullopt;
  return value;
}

} // namespace

Formula parse_dimacs(std::string_view text) {
  std::optional<std::size_t> width_hint;
  std::optional<std::size_t> width;
  std::size_t num_vars = 0;
  std::size_t declared_clauses = 0;
  bool have_header = false;

  std::vector<Literal> literals;
  std::vector<Literal> current;
  std::size_t clauses_read = 0;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto tokens = split_ws(line);
    if (tokens.empty())
      continue;
    if (tokens[0] == "c") {
      if (tokens.size() == 3 && tokens[1] == "k") {
        auto w = to_int<std::size_t>(tokens[2]);
        if (!w)
          throw DimacsError(line_no, "malformed width comment");
        width_hint = *w;
      }
      continue;
    }
    if (tokens[0][0] == 'c')
      continue;
    if (tokens[0] == "%")
      break;
    if (tokens[0] == "p") {
      if (have_header)
        throw DimacsError(line_no, "duplicate problem line");
      if (tokens.size() != 4 || tokens[1] != "cnf")
        throw DimacsError(line_no, "expected 'p cnf <vars> <clauses>'");
      auto n = to_int<std::size_t>(tokens[2]);
      auto m = to_int<std::size_t>(tokens[3]);
      if (!n || !m)
        throw DimacsError(line_no, "malformed problem line counts");
      num_vars = *n;
      declared_clauses = *m;
      have_header = true;
      if (width_hint)
        width = width_hint;
      literals.reserve(declared_clauses * width.value_or(3));
      continue;
    }
    if (!have_header)
      throw DimacsError(line_no, "clause data before problem line");

    for (auto token : tokens) {
      auto code = to_int<std::int32_t>(token);
      if (!code)
        throw DimacsError(line_no, "malformed literal '" + std::string(token) + "'");
      if (*code == 0) {
        if (!width)
          width = current.size();
        if (current.size() != *width)
          throw DimacsError(line_no, "clause " + std::to_string(clauses_read + 1) + " has " +
                                         std::to_string(current.size()) + " literals, expected " +
                                         std::to_string(*width));
        literals.insert(literals.end(), current.begin(), current.end());
        current.clear();
        ++clauses_read;
        continue;
      }
      const auto var = static_cast<std::size_t>(*code < 0 ? -static_cast<std::int64_t>(*code) : *code);
      if (var > num_vars)
        throw DimacsError(line_no, "variable " + std::to_string(var) + " exceeds declared " +
                                       std::to_string(num_vars));
      current.push_back(Literal::from_dimacs(*code));
    }
  }

  if (!have_header)
    throw DimacsError(line_no, "missing problem line");
  if (!current.empty())
    throw DimacsError(line_no, "last clause is not terminated by 0");
  if (clauses_read != declared_clauses)
    throw DimacsError(line_no, "declared " + std::to_string(declared_clauses) + " clauses, read " +
                                   std::to_string(clauses_read));
  if (width && *width == 0 && clauses_read > 0)
    throw DimacsError(line_no, "empty clauses are not supported");
  return Formula(num_vars, width.value_or(0), std::move(literals));
}

std::string write_dimacs(const Formula &f) {
  std::ostringstream out;
  out << "c k " << f.width() << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (std::size_t i = 0; i < f.num_clauses(); ++i) {
    for (Literal l : f.clause(i))
      out << l.dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

Formula read_dimacs_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dimacs(buf.str());
}

} // namespace wsl

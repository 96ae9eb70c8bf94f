#pragma once

#include <charconv>
#include <compare>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nbsat {

enum class Truth : unsigned char { True, False, Undef };

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A signed DIMACS literal: +v asserts variable v, -v asserts its negation.
// The code is never zero.
class Lit {
 public:
  explicit Lit(int code) : code_(code) {
    if (code == 0) throw std::invalid_argument("Lit: code must be nonzero");
  }
  int code() const { return code_; }
  int var() const { return code_ < 0 ? -code_ : code_; }
  bool positive() const { return code_ > 0; }
  Lit operator-() const { return Lit(-code_); }
  friend auto operator<=>(const Lit&, const Lit&) = default;

 private:
  int code_;
};

using Clause = std::vector<Lit>;

// A CNF formula over variables 1..num_vars. Construction validates that
// every literal is in range, no clause holds a duplicate literal, and no
// clause is tautological. Empty clauses are allowed (they make the formula
// trivially unsatisfiable).
class Formula {
 public:
  Formula() = default;
  Formula(int num_vars, std::vector<Clause> clauses)
      : num_vars_(num_vars), clauses_(std::move(clauses)) {
    if (num_vars < 0) throw std::invalid_argument("Formula: negative num_vars");
    for (const Clause& c : clauses_) {
      for (size_t i = 0; i < c.size(); ++i) {
        if (c[i].var() > num_vars_)
          throw std::invalid_argument("Formula: literal out of range");
        for (size_t j = i + 1; j < c.size(); ++j) {
          if (c[i] == c[j])
            throw std::invalid_argument("Formula: duplicate literal in clause");
          if (c[i] == -c[j])
            throw std::invalid_argument("Formula: tautological clause");
        }
      }
    }
  }

  int num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  bool operator==(const Formula&) const = default;

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
};

struct ParseStats {
  int duplicate_literals_removed = 0;
  int tautologies_dropped = 0;
};

namespace detail {

inline long long parse_int_token(std::string_view tok) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("dimacs: bad token '" + std::string(tok) + "'");
  return value;
}

}  // namespace detail

// Parses DIMACS CNF. Whitespace-tolerant: clauses may span lines and share
// lines. Comment lines start with 'c'; a line starting with '%' ends the
// input (some benchmark archives use it as a trailer). Duplicate literals
// within a clause are dropped and tautological clauses discarded, both
// counted in `stats` when given. Malformed headers, out-of-range literals,
// a clause count that disagrees with the header, and a missing final 0 all
// raise ParseError.
inline Formula parse_dimacs(std::istream& in, ParseStats* stats = nullptr) {
  ParseStats local;
  bool header_seen = false;
  long long num_vars = 0, num_clauses = 0;
  long long clauses_read = 0;
  std::vector<Clause> clauses;
  std::vector<int> cur;
  bool done = false;

  std::string line;
  while (!done && std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == 'c') continue;
    if (line[pos] == '%') break;
    if (!header_seen) {
      std::istringstream hs(line);
      std::string p, fmt;
      if (!(hs >> p >> fmt >> num_vars >> num_clauses) || p != "p" ||
          fmt != "cnf" || num_vars < 0 || num_clauses < 0)
        throw ParseError("dimacs: malformed header '" + line + "'");
      std::string extra;
      if (hs >> extra) throw ParseError("dimacs: trailing junk in header");
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok == "%") {
        done = true;
        break;
      }
      const long long v = detail::parse_int_token(tok);
      if (v == 0) {
        // end of clause: drop duplicates (stable) and tautologies
        Clause c;
        bool taut = false;
        for (size_t i = 0; i < cur.size() && !taut; ++i) {
          bool dup = false;
          for (size_t j = 0; j < i; ++j) {
            if (cur[j] == cur[i]) dup = true;
            if (cur[j] == -cur[i]) taut = true;
          }
          if (dup) {
            ++local.duplicate_literals_removed;
            continue;
          }
          if (!taut) c.push_back(Lit(cur[i]));
        }
        ++clauses_read;
        if (taut)
          ++local.tautologies_dropped;
        else
          clauses.push_back(std::move(c));
        cur.clear();
      } else {
        if (v > num_vars || -v > num_vars || v > INT32_MAX || -v > INT32_MAX)
          throw ParseError("dimacs: literal out of range: " + tok);
        cur.push_back(static_cast<int>(v));
      }
    }
  }
  if (!header_seen) throw ParseError("dimacs: missing header");
  if (!cur.empty()) throw ParseError("dimacs: missing terminating 0");
  if (clauses_read != num_clauses)
    throw ParseError("dimacs: clause count mismatch (header says " +
                     std::to_string(num_clauses) + ", found " +
                     std::to_string(clauses_read) + ")");
  if (stats) *stats = local;
  return Formula(static_cast<int>(num_vars), std::move(clauses));
}

inline Formula parse_dimacs(const std::string& text, ParseStats* stats = nullptr) {
  std::istringstream in(text);
  return parse_dimacs(in, stats);
}

inline void write_dimacs(const Formula& f, std::ostream& out,
                         const std::vector<std::string>& comments = {}) {
  for (const std::string& c : comments) out << "c " << c << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.clauses().size() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Lit& l : c) out << l.code() << ' ';
    out << "0\n";
  }
}

inline std::string write_dimacs(const Formula& f,
                                const std::vector<std::string>& comments = {}) {
  std::ostringstream out;
  write_dimacs(f, out, comments);
  return out.str();
}

// model is indexed by variable (1-based; index 0 unused).
inline bool satisfies(const Formula& f, const std::vector<bool>& model) {
  for (const Clause& c : f.clauses()) {
    bool sat = false;
    for (const Lit& l : c) {
      if (model.at(static_cast<size_t>(l.var())) == l.positive()) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace nbsat

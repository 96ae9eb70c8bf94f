#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbsat/cnf.hpp"
#include "nbsat/rng.hpp"
#include "nbsat/solver.hpp"

namespace nbsat {

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One clause of the SR(n) distribution: length k = 1 + Bernoulli(0.7) +
// Geometric(0.4) (so k >= 2, mean 4.2), over k distinct variables, each
// negated with probability 0.5. k is capped at n when the draw exceeds the
// variable count.
inline Clause sample_sr_clause(int n, SplitMix64& rng) {
  if (n < 2) throw std::invalid_argument("sample_sr_clause: need n >= 2");
  int k = 1 + (rng.bernoulli(0.7) ? 1 : 0) + rng.geometric(0.4);
  if (k > n) k = n;
  Clause c;
  c.reserve(static_cast<size_t>(k));
  for (int v : rng.sample_distinct(1, n, k))
    c.push_back(Lit(rng.bernoulli(0.5) ? -v : v));
  return c;
}

// An UNSAT/SAT pair differing only in one literal of the final clause.
struct SrPair {
  Formula unsat;
  Formula sat;
  int n = 0;
};

// Accumulates SR(n) clauses until the conjunction first becomes
// unsatisfiable (checked by solving after each clause). The satisfiable twin
// flips one uniformly chosen literal of that final clause. Throws
// GenerationError if the cap (default 100 clauses per variable) is hit
// before unsatisfiability.
inline SrPair gen_sr_pair(int n, RngSeed seed,
                          const SolverConfig& check_config = {},
                          int clause_cap = -1) {
  SplitMix64 rng(seed);
  const int cap = clause_cap < 0 ? 100 * n : clause_cap;
  std::vector<Clause> clauses;
  for (;;) {
    if (static_cast<int>(clauses.size()) >= cap)
      throw GenerationError("gen_sr_pair: clause cap reached while still satisfiable");
    clauses.push_back(sample_sr_clause(n, rng));
    Solver s(Formula(n, clauses), check_config);
    if (s.solve().status == Status::Unsat) break;
  }
  std::vector<Clause> sat_clauses = clauses;
  Clause& last = sat_clauses.back();
  const size_t flip = static_cast<size_t>(rng.below(last.size()));
  last[flip] = -last[flip];
  return SrPair{Formula(n, std::move(clauses)), Formula(n, std::move(sat_clauses)), n};
}

// Uniform random 3-SAT: every clause has three distinct variables, each
// negated with probability 0.5.
inline Formula gen_random_3sat(int nvars, int nclauses, RngSeed seed) {
  if (nvars < 3)
    throw std::invalid_argument("gen_random_3sat: need at least 3 variables");
  if (nclauses < 0)
    throw std::invalid_argument("gen_random_3sat: negative clause count");
  SplitMix64 rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(static_cast<size_t>(nclauses));
  for (int i = 0; i < nclauses; ++i) {
    Clause c;
    for (int v : rng.sample_distinct(1, nvars, 3))
      c.push_back(Lit(rng.bernoulli(0.5) ? -v : v));
    clauses.push_back(std::move(c));
  }
  return Formula(nvars, std::move(clauses));
}

// Direct encoding of k-coloring on a random simple graph with exactly
// `nedges` edges: variable (vertex i, color c) has index i*ncolors + c + 1
// for 0-based i and c. Each vertex gets an at-least-one-color clause and
// each edge a binary conflict clause per color; at-most-one-color clauses
// are deliberately absent, so a model may tag a vertex with several colors,
// any of which is a valid choice.
inline Formula gen_coloring(int nvertices, int nedges, int ncolors, RngSeed seed) {
  if (nvertices < 1 || ncolors < 1)
    throw std::invalid_argument("gen_coloring: need vertices and colors");
  const long long max_edges =
      static_cast<long long>(nvertices) * (nvertices - 1) / 2;
  if (nedges < 0 || nedges > max_edges)
    throw std::invalid_argument("gen_coloring: infeasible edge count");
  SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(max_edges));
  for (int i = 0; i < nvertices; ++i)
    for (int j = i + 1; j < nvertices; ++j) pairs.emplace_back(i, j);
  for (int i = 0; i < nedges; ++i) {
    const size_t j =
        static_cast<size_t>(i) +
        static_cast<size_t>(rng.below(pairs.size() - static_cast<size_t>(i)));
    std::swap(pairs[static_cast<size_t>(i)], pairs[j]);
  }
  const auto var = [ncolors](int vertex, int color) {
    return vertex * ncolors + color + 1;
  };
  std::vector<Clause> clauses;
  for (int i = 0; i < nvertices; ++i) {
    Clause c;
    for (int k = 0; k < ncolors; ++k) c.push_back(Lit(var(i, k)));
    clauses.push_back(std::move(c));
  }
  for (int e = 0; e < nedges; ++e) {
    const auto [a, b] = pairs[static_cast<size_t>(e)];
    for (int k = 0; k < ncolors; ++k)
      clauses.push_back(Clause{Lit(-var(a, k)), Lit(-var(b, k))});
  }
  return Formula(nvertices * ncolors, std::move(clauses));
}

}  // namespace nbsat

#pragma once

// Independent reference implementations the test suites check the real code
// against. Everything here is exhaustive and only suitable for tiny inputs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nbsat/cnf.hpp"
#include "nbsat/ossp.hpp"

namespace oracle {

struct MaskClause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

inline std::vector<MaskClause> compile_masks(const nbsat::Formula& f) {
  if (f.num_vars() > 25)
    throw std::invalid_argument("truth-table oracle: too many variables");
  std::vector<MaskClause> out;
  out.reserve(f.clauses().size());
  for (const nbsat::Clause& c : f.clauses()) {
    MaskClause mc;
    for (nbsat::Lit l : c) {
      const std::uint32_t bit = 1u << (l.var() - 1);
      if (l.positive())
        mc.pos |= bit;
      else
        mc.neg |= bit;
    }
    out.push_back(mc);
  }
  return out;
}

// First satisfying assignment by truth table, or nullopt when none exists.
// Bit v-1 of the mask is variable v. Returned model is 1-based like the
// solver's.
inline std::optional<std::vector<bool>> brute_force_model(const nbsat::Formula& f) {
  const auto masks = compile_masks(f);
  const std::uint64_t total = 1ull << f.num_vars();
  for (std::uint64_t a = 0; a < total; ++a) {
    const std::uint32_t assign = static_cast<std::uint32_t>(a);
    bool ok = true;
    for (const MaskClause& mc : masks) {
      if ((assign & mc.pos) == 0 && (~assign & mc.neg) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<bool> model(static_cast<size_t>(f.num_vars()) + 1, false);
      for (int v = 1; v <= f.num_vars(); ++v)
        model[static_cast<size_t>(v)] = (assign >> (v - 1)) & 1u;
      return model;
    }
  }
  return std::nullopt;
}

inline bool brute_force_sat(const nbsat::Formula& f) {
  return brute_force_model(f).has_value();
}

// Calls fn(model) for every satisfying assignment; fn returning false stops
// the enumeration.
template <typename Fn>
void for_each_model(const nbsat::Formula& f, Fn&& fn) {
  const auto masks = compile_masks(f);
  const std::uint64_t total = 1ull << f.num_vars();
  for (std::uint64_t a = 0; a < total; ++a) {
    const std::uint32_t assign = static_cast<std::uint32_t>(a);
    bool ok = true;
    for (const MaskClause& mc : masks) {
      if ((assign & mc.pos) == 0 && (~assign & mc.neg) == 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<bool> model(static_cast<size_t>(f.num_vars()) + 1, false);
    for (int v = 1; v <= f.num_vars(); ++v)
      model[static_cast<size_t>(v)] = (assign >> (v - 1)) & 1u;
    if (!fn(static_cast<const std::vector<bool>&>(model))) return;
  }
}

// f entails c iff no model of f falsifies every literal of c.
inline bool clause_implied(const nbsat::Formula& f, const nbsat::Clause& c) {
  bool implied = true;
  for_each_model(f, [&](const std::vector<bool>& model) {
    for (nbsat::Lit l : c) {
      const bool val = model[static_cast<size_t>(l.var())];
      if (val == l.positive()) return true;  // clause satisfied, keep looking
    }
    implied = false;
    return false;
  });
  return implied;
}

namespace detail {

struct Busy {
  std::vector<std::pair<int, int>> iv;  // sorted, disjoint [start, end)

  int earliest_fit(int from, int p) const {
    int t = from;
    for (const auto& [s, e] : iv) {
      if (t + p <= s) break;
      if (e > t) t = e;
    }
    return t;
  }

  void add(int s, int e) {
    iv.emplace_back(s, e);
    std::sort(iv.begin(), iv.end());
  }

  void remove(int s, int e) {
    auto it = std::find(iv.begin(), iv.end(), std::make_pair(s, e));
    iv.erase(it);
  }
};

inline void search(const nbsat::OsspInstance& inst, std::vector<bool>& placed,
                   std::vector<Busy>& job_busy, std::vector<Busy>& mach_busy,
                   int placed_count, int partial_end, int& best) {
  if (partial_end >= best) return;
  if (placed_count == inst.num_ops()) {
    best = partial_end;
    return;
  }
  for (int op = 0; op < inst.num_ops(); ++op) {
    if (placed[static_cast<size_t>(op)]) continue;
    const int j = inst.job_of(op), m = inst.machine_of(op), p = inst.duration(op);
    // earliest start free on both the job and machine timelines
    int t = 0;
    while (true) {
      const int tj = job_busy[static_cast<size_t>(j)].earliest_fit(t, p);
      const int tm = mach_busy[static_cast<size_t>(m)].earliest_fit(tj, p);
      if (tm == tj) {
        t = tj;
        break;
      }
      t = tm;
    }
    placed[static_cast<size_t>(op)] = true;
    job_busy[static_cast<size_t>(j)].add(t, t + p);
    mach_busy[static_cast<size_t>(m)].add(t, t + p);
    search(inst, placed, job_busy, mach_busy, placed_count + 1,
           std::max(partial_end, t + p), best);
    job_busy[static_cast<size_t>(j)].remove(t, t + p);
    mach_busy[static_cast<size_t>(m)].remove(t, t + p);
    placed[static_cast<size_t>(op)] = false;
  }
}

}  // namespace detail

// Exact minimum makespan by searching all operation placement orders with
// greedy earliest placement. Sound because for any feasible schedule,
// placing operations in order of their start times greedily reproduces a
// schedule at least as tight.
inline int brute_makespan(const nbsat::OsspInstance& inst) {
  nbsat::validate_instance(inst);
  std::vector<bool> placed(static_cast<size_t>(inst.num_ops()), false);
  std::vector<detail::Busy> job_busy(static_cast<size_t>(inst.jobs));
  std::vector<detail::Busy> mach_busy(static_cast<size_t>(inst.machines));
  int best = static_cast<int>(nbsat::total_processing(inst));
  detail::search(inst, placed, job_busy, mach_busy, 0, 0, best);
  return best;
}

}  // namespace oracle

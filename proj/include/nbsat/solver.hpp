#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nbsat/cnf.hpp"
#include "nbsat/rng.hpp"

namespace nbsat {

// i-th element of the Luby sequence, 1-based: 1, 1, 2, 1, 1, 2, 4, ...
// Defined by: luby(2^k - 1) = 2^(k-1), otherwise luby(i) = luby(i - 2^(k-1) + 1)
// for the largest k with 2^(k-1) - 1 < i < 2^k - 1.
inline std::uint64_t luby(std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("luby: index is 1-based");
  for (;;) {
    std::uint64_t k = 1;
    while (((std::uint64_t{1} << k) - 1) < i) ++k;
    if (((std::uint64_t{1} << k) - 1) == i) return std::uint64_t{1} << (k - 1);
    i -= (std::uint64_t{1} << (k - 1)) - 1;
  }
}

struct SolverConfig {
  bool restarts_enabled = true;
  int luby_base = 100;        // restart interval unit, in conflicts
  double vsids_decay = 0.95;  // bump increment grows by 1/decay per conflict
  double vsids_bump = 1.0;
  bool clause_deletion = false;  // learned-clause garbage collection
  // When set, initial saved phases are drawn from this seed instead of
  // defaulting to false.
  std::optional<std::uint64_t> phase_seed;
  // Wall-clock budget for solve(); exceeding it throws SolveTimeout.
  std::optional<double> time_limit_s;
};

enum class Status { Sat, Unsat };

struct SolveResult {
  Status status = Status::Unsat;
  // By variable, 1-based (index 0 unused); empty unless Sat.
  std::vector<bool> model;
  std::map<std::string, long long> stats;
};

// Solver state reduced under the current partial assignment: the unassigned
// variables plus every clause not yet satisfied, with falsified literals
// removed. Learned clauses are included alongside the originals.
struct MdpState {
  std::vector<int> variables;             // unassigned variables, ascending
  std::vector<std::vector<int>> clauses;  // reduced clauses, signed codes
};

class Solver;

// A branching oracle is consulted at every decision point until it returns
// Release; from then on the solver decides by VSIDS alone.
struct Decision {
  Lit lit;
};
struct Release {};
using OracleResult = std::variant<Decision, Release>;
using BranchingOracle = std::function<OracleResult(Solver&)>;

struct SolveTimeout : std::runtime_error {
  SolveTimeout() : std::runtime_error("solve: time limit exceeded") {}
};

// The oracle returned a literal over an already-assigned variable.
struct OracleContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// CDCL solver: two watched literals, first-UIP conflict analysis with
// non-chronological backjumping, VSIDS branching with phase saving, Luby
// restarts, optional learned-clause deletion.
class Solver {
 public:
  explicit Solver(const Formula& f, SolverConfig cfg = {}) : cfg_(cfg) {
    if (!(cfg_.vsids_decay > 0.0 && cfg_.vsids_decay < 1.0))
      throw std::invalid_argument("SolverConfig: vsids_decay must be in (0, 1)");
    if (!(cfg_.vsids_bump > 0.0))
      throw std::invalid_argument("SolverConfig: vsids_bump must be positive");
    if (cfg_.luby_base < 1)
      throw std::invalid_argument("SolverConfig: luby_base must be >= 1");
    n_ = f.num_vars();
    assign_.assign(static_cast<size_t>(n_), Truth::Undef);
    level_.assign(static_cast<size_t>(n_), 0);
    reason_.assign(static_cast<size_t>(n_), -1);
    activity_.assign(static_cast<size_t>(n_), 0.0);
    saved_phase_.assign(static_cast<size_t>(n_), 0);
    seen_.assign(static_cast<size_t>(n_), 0);
    watches_.assign(static_cast<size_t>(2 * n_), {});
    heap_pos_.assign(static_cast<size_t>(n_), -1);
    if (cfg_.phase_seed) {
      SplitMix64 rng(*cfg_.phase_seed);
      for (int v = 0; v < n_; ++v)
        saved_phase_[static_cast<size_t>(v)] = rng.bernoulli(0.5) ? 1 : 0;
    }
    var_inc_ = cfg_.vsids_bump;
    for (int v = 0; v < n_; ++v) heap_insert(v);
    for (const Clause& c : f.clauses()) {
      std::vector<int> lits;
      lits.reserve(c.size());
      for (const Lit& l : c) lits.push_back(to_internal(l));
      attach_clause(std::move(lits), /*learnt=*/false);
    }
    restart_limit_ = static_cast<long long>(cfg_.luby_base) *
                     static_cast<long long>(luby(1));
    learnt_cap_ = std::max<long long>(
        100, static_cast<long long>(f.clauses().size()) / 3);
  }

  int num_vars() const { return n_; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  Truth value(int var) const {
    if (var < 1 || var > n_) throw std::invalid_argument("value: bad variable");
    return assign_[static_cast<size_t>(var - 1)];
  }

  Truth value(Lit l) const {
    Truth t = value(l.var());
    if (t == Truth::Undef) return t;
    const bool is_true = (t == Truth::True) == l.positive();
    return is_true ? Truth::True : Truth::False;
  }

  bool all_assigned() const { return static_cast<int>(trail_.size()) == n_; }

  double activity(int var) const {
    if (var < 1 || var > n_) throw std::invalid_argument("activity: bad variable");
    return activity_[static_cast<size_t>(var - 1)];
  }

  long long decisions() const { return decisions_; }
  long long propagations() const { return propagations_; }
  long long conflicts() const { return conflicts_; }
  long long restarts() const { return restarts_; }
  long long learned_count() const { return learned_; }
  long long deleted_count() const { return deleted_; }

  std::map<std::string, long long> stats_map() const {
    return {{"decisions", decisions_},     {"propagations", propagations_},
            {"conflicts", conflicts_},     {"restarts", restarts_},
            {"learned_clauses", learned_}, {"deleted_clauses", deleted_}};
  }

  // Runs unit propagation to fixpoint. Returns the index of a falsified
  // clause, or nullopt when the fixpoint is conflict-free.
  std::optional<int> propagate() {
    if (root_conflict_) {
      qhead_ = trail_.size();
      return root_conflict_;
    }
    while (qhead_ < trail_.size()) {
      const int p = trail_[qhead_++];
      const int false_lit = p ^ 1;
      std::vector<int>& ws = watches_[static_cast<size_t>(false_lit)];
      size_t i = 0, j = 0;
      while (i < ws.size()) {
        const int ci = ws[i++];
        ClauseData& c = clauses_[static_cast<size_t>(ci)];
        if (c.deleted) continue;  // lazily dropped from the watch list
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        assert(c.lits[1] == false_lit);
        if (lit_value(c.lits[0]) == Truth::True) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.lits.size(); ++k) {
          if (lit_value(c.lits[k]) != Truth::False) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[static_cast<size_t>(c.lits[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (lit_value(c.lits[0]) == Truth::False) {
          // conflict: keep the remaining watchers and stop
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c.lits[0], ci);
        ++propagations_;
      }
      ws.resize(j);
    }
    return std::nullopt;
  }

  // Starts a new decision level and assigns the literal. Used internally by
  // solve() and directly by step-wise tests.
  void decide(Lit l) {
    if (value(l.var()) != Truth::Undef)
      throw std::logic_error("decide: variable already assigned");
    ++decisions_;
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(to_internal(l), -1);
  }

  // First-UIP analysis of a falsified clause. Returns the learned clause
  // (asserting literal first) and the backjump level, or nullopt when the
  // conflict is at level 0 and the formula is unsatisfiable.
  std::optional<std::pair<Clause, int>> analyze_conflict(int conflict) {
    auto internal = analyze_internal(conflict);
    if (!internal) return std::nullopt;
    Clause out;
    out.reserve(internal->first.size());
    for (int il : internal->first) out.push_back(to_external(il));
    return std::make_pair(std::move(out), internal->second);
  }

  // Undoes all assignments above `level`, saving phases.
  void backjump(int level) {
    if (level < 0 || level > decision_level())
      throw std::invalid_argument("backjump: bad level");
    if (level == decision_level()) return;
    const int bound = trail_lim_[static_cast<size_t>(level)];
    for (int i = static_cast<int>(trail_.size()) - 1; i >= bound; --i) {
      const int v = trail_[static_cast<size_t>(i)] >> 1;
      saved_phase_[static_cast<size_t>(v)] =
          assign_[static_cast<size_t>(v)] == Truth::True ? 1 : 0;
      assign_[static_cast<size_t>(v)] = Truth::Undef;
      reason_[static_cast<size_t>(v)] = -1;
      heap_insert(v);
    }
    trail_.resize(static_cast<size_t>(bound));
    trail_lim_.resize(static_cast<size_t>(level));
    qhead_ = trail_.size();
  }

  // Attaches a learned clause (asserting literal first) after the caller has
  // backjumped to `bj_level`, and asserts its first literal.
  void apply_learned(const Clause& learned, int bj_level) {
    if (decision_level() != bj_level)
      throw std::logic_error("apply_learned: backjump first");
    std::vector<int> lits;
    lits.reserve(learned.size());
    for (const Lit& l : learned) lits.push_back(to_internal(l));
    attach_and_assert(std::move(lits));
  }

  // Unassigned variable with maximal activity (ties broken by lowest index),
  // signed by its saved phase. Throws when everything is assigned.
  Lit vsids_pick() {
    while (!heap_.empty() &&
           assign_[static_cast<size_t>(heap_[0])] != Truth::Undef)
      heap_pop_top();
    if (heap_.empty())
      throw std::logic_error("vsids_pick: all variables assigned");
    const int v = heap_[0];
    return Lit(saved_phase_[static_cast<size_t>(v)] ? v + 1 : -(v + 1));
  }

  // Overwrites the activity of the given variables. Later bumps and decays
  // apply on top of the seeded values.
  void seed_activities(const std::map<int, double>& scores) {
    for (const auto& [var, score] : scores) {
      if (var < 1 || var > n_)
        throw std::invalid_argument("seed_activities: unknown variable " +
                                    std::to_string(var));
      activity_[static_cast<size_t>(var - 1)] = score;
      heap_update(var - 1);
    }
  }

  MdpState extract_mdp_state() const {
    MdpState st;
    for (int v = 1; v <= n_; ++v)
      if (value(v) == Truth::Undef) st.variables.push_back(v);
    for (const ClauseData& c : clauses_) {
      if (c.deleted) continue;
      bool sat = false;
      std::vector<int> reduced;
      for (int il : c.lits) {
        const Truth t = lit_value(il);
        if (t == Truth::True) {
          sat = true;
          break;
        }
        if (t == Truth::Undef) reduced.push_back(to_external(il).code());
      }
      if (sat) continue;
      if (reduced.empty())
        throw std::logic_error("extract_mdp_state: conflict pending");
      st.clauses.push_back(std::move(reduced));
    }
    return st;
  }

  std::vector<Truth> assignment_snapshot() const {
    std::vector<Truth> out(static_cast<size_t>(n_) + 1, Truth::Undef);
    for (int v = 1; v <= n_; ++v) out[static_cast<size_t>(v)] = value(v);
    return out;
  }

  // Invoked after every backjump in solve(), before the asserting literal is
  // enqueued: (solver, learned clause, backjump level).
  using LearnHook = std::function<void(Solver&, const Clause&, int)>;
  void set_learn_hook(LearnHook h) { learn_hook_ = std::move(h); }

  SolveResult solve(const BranchingOracle& oracle = {}) {
    backjump(0);
    bool released = !oracle;
    const auto start = std::chrono::steady_clock::now();
    const auto deadline_check = [&] {
      if (!cfg_.time_limit_s) return;
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      if (elapsed.count() > *cfg_.time_limit_s) throw SolveTimeout();
    };
    for (;;) {
      const std::optional<int> conflict = propagate();
      if (conflict) {
        ++conflicts_;
        ++conflicts_since_restart_;
        if (decision_level() == 0) return finish(Status::Unsat);
        auto learned = analyze_internal(*conflict);
        assert(learned);
        backjump(learned->second);
        if (learn_hook_) {
          Clause ext;
          for (int il : learned->first) ext.push_back(to_external(il));
          learn_hook_(*this, ext, learned->second);
        }
        attach_and_assert(std::move(learned->first));
        var_inc_ /= cfg_.vsids_decay;
        cla_inc_ /= 0.999;
        if (cfg_.clause_deletion && learnt_live_ > learnt_cap_) reduce_learnt();
        if (cfg_.restarts_enabled && conflicts_since_restart_ >= restart_limit_) {
          ++restarts_;
          conflicts_since_restart_ = 0;
          restart_limit_ =
              static_cast<long long>(cfg_.luby_base) *
              static_cast<long long>(luby(static_cast<std::uint64_t>(restarts_) + 1));
          backjump(0);
        }
        deadline_check();
      } else {
        if (all_assigned()) return finish(Status::Sat);
        deadline_check();
        std::optional<Lit> pick;
        if (!released) {
          OracleResult r = oracle(*this);
          if (std::holds_alternative<Release>(r)) {
            released = true;
          } else {
            pick = std::get<Decision>(r).lit;
            if (pick->var() < 1 || pick->var() > n_ ||
                value(pick->var()) != Truth::Undef)
              throw OracleContractViolation(
                  "branching oracle returned a literal over an assigned or "
                  "unknown variable: " +
                  std::to_string(pick->code()));
          }
        }
        if (!pick) pick = vsids_pick();
        decide(*pick);
      }
    }
  }

  // Checks trail well-formedness; throws std::logic_error on violation.
  // Used by tests after propagate/backjump; cheap enough to call freely.
  void check_trail_invariants() const {
    if (trail_lim_.size() != static_cast<size_t>(decision_level()))
      throw std::logic_error("trail: level bookkeeping broken");
    std::vector<int> seen_pos(static_cast<size_t>(n_), -1);
    for (size_t i = 0; i < trail_.size(); ++i) {
      const int v = trail_[i] >> 1;
      if (assign_[static_cast<size_t>(v)] == Truth::Undef)
        throw std::logic_error("trail: unassigned variable on trail");
      if (seen_pos[static_cast<size_t>(v)] != -1)
        throw std::logic_error("trail: variable assigned twice");
      seen_pos[static_cast<size_t>(v)] = static_cast<int>(i);
      const int ci = reason_[static_cast<size_t>(v)];
      if (ci >= 0) {
        const ClauseData& c = clauses_[static_cast<size_t>(ci)];
        if (c.lits.empty() || (c.lits[0] >> 1) != v)
          throw std::logic_error("trail: antecedent does not start with its literal");
        for (size_t k = 1; k < c.lits.size(); ++k) {
          if (lit_value(c.lits[k]) != Truth::False)
            throw std::logic_error("trail: antecedent not unit at assignment");
          const int w = c.lits[k] >> 1;
          if (seen_pos[static_cast<size_t>(w)] == -1)
            throw std::logic_error("trail: antecedent literal assigned later");
        }
      }
    }
    for (double a : activity_)
      if (!std::isfinite(a)) throw std::logic_error("trail: activity not finite");
  }

 private:
  struct ClauseData {
    std::vector<int> lits;  // internal codes; lits[0] and lits[1] are watched
    double activity = 0.0;
    bool learnt = false;
    bool deleted = false;
  };

  // internal literal code: 2*(var-1) + (1 if negative)
  static int to_internal(const Lit& l) {
    return 2 * (l.var() - 1) + (l.positive() ? 0 : 1);
  }
  static Lit to_external(int il) {
    const int v = (il >> 1) + 1;
    return Lit((il & 1) ? -v : v);
  }

  Truth lit_value(int il) const {
    const Truth t = assign_[static_cast<size_t>(il >> 1)];
    if (t == Truth::Undef) return t;
    const bool is_true = (t == Truth::True) == ((il & 1) == 0);
    return is_true ? Truth::True : Truth::False;
  }

  int level_of(int il) const { return level_[static_cast<size_t>(il >> 1)]; }

  void enqueue(int il, int reason) {
    const int v = il >> 1;
    assert(assign_[static_cast<size_t>(v)] == Truth::Undef);
    assign_[static_cast<size_t>(v)] = (il & 1) ? Truth::False : Truth::True;
    level_[static_cast<size_t>(v)] = decision_level();
    reason_[static_cast<size_t>(v)] = reason;
    trail_.push_back(il);
  }

  int attach_clause(std::vector<int> lits, bool learnt) {
    const int ci = static_cast<int>(clauses_.size());
    clauses_.push_back(ClauseData{std::move(lits), 0.0, learnt, false});
    ClauseData& c = clauses_.back();
    if (learnt) ++learnt_live_;
    if (c.lits.empty()) {
      if (!root_conflict_) root_conflict_ = ci;
      return ci;
    }
    if (c.lits.size() == 1) {
      const Truth t = lit_value(c.lits[0]);
      if (t == Truth::False) {
        if (!root_conflict_ && decision_level() == 0) root_conflict_ = ci;
      } else if (t == Truth::Undef && decision_level() == 0) {
        enqueue(c.lits[0], ci);
      }
      return ci;
    }
    watches_[static_cast<size_t>(c.lits[0])].push_back(ci);
    watches_[static_cast<size_t>(c.lits[1])].push_back(ci);
    return ci;
  }

  void attach_and_assert(std::vector<int> lits) {
    if (lits.size() >= 2) {
      size_t hi = 1;
      for (size_t k = 2; k < lits.size(); ++k)
        if (level_of(lits[k]) > level_of(lits[hi])) hi = k;
      std::swap(lits[1], lits[hi]);
    }
    const int assert_lit = lits[0];
    const int ci = attach_clause(std::move(lits), /*learnt=*/true);
    ++learned_;
    bump_clause(clauses_[static_cast<size_t>(ci)]);
    if (lit_value(assert_lit) == Truth::Undef) {
      enqueue(assert_lit, ci);
      ++propagations_;
    }
  }

  std::optional<std::pair<std::vector<int>, int>> analyze_internal(int conflict) {
    if (decision_level() == 0) return std::nullopt;
    std::vector<int> learned{0};  // slot 0 reserved for the asserting literal
    int path = 0;
    int p = -1;
    int idx = static_cast<int>(trail_.size());
    int ci = conflict;
    for (;;) {
      ClauseData& c = clauses_[static_cast<size_t>(ci)];
      if (c.learnt) bump_clause(c);
      // for reason clauses, lits[0] is the propagated literal being resolved
      for (size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
        const int il = c.lits[j];
        const int v = il >> 1;
        if (seen_[static_cast<size_t>(v)] || level_[static_cast<size_t>(v)] == 0)
          continue;
        seen_[static_cast<size_t>(v)] = 1;
        bump_var(v);
        if (level_[static_cast<size_t>(v)] == decision_level())
          ++path;
        else
          learned.push_back(il);
      }
      while (!seen_[static_cast<size_t>(trail_[static_cast<size_t>(idx - 1)] >> 1)])
        --idx;
      --idx;
      p = trail_[static_cast<size_t>(idx)] ^ 1;  // resolve on this literal
      seen_[static_cast<size_t>(p >> 1)] = 0;
      --path;
      if (path == 0) break;
      ci = reason_[static_cast<size_t>(p >> 1)];
      assert(ci >= 0);
    }
    learned[0] = p;
    int bj = 0;
    for (size_t k = 1; k < learned.size(); ++k)
      bj = std::max(bj, level_of(learned[k]));
    for (size_t k = 1; k < learned.size(); ++k)
      seen_[static_cast<size_t>(learned[k] >> 1)] = 0;
    return std::make_pair(std::move(learned), bj);
  }

  void bump_var(int v) {
    activity_[static_cast<size_t>(v)] += var_inc_;
    if (activity_[static_cast<size_t>(v)] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_update(v);
  }

  void bump_clause(ClauseData& c) {
    if (!c.learnt) return;
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
      for (ClauseData& d : clauses_)
        if (d.learnt) d.activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  void reduce_learnt() {
    std::vector<int> cand;
    for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
      const ClauseData& c = clauses_[static_cast<size_t>(ci)];
      if (!c.learnt || c.deleted) continue;
      // keep clauses currently acting as an antecedent
      if (!c.lits.empty() &&
          reason_[static_cast<size_t>(c.lits[0] >> 1)] == ci &&
          lit_value(c.lits[0]) == Truth::True)
        continue;
      cand.push_back(ci);
    }
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
      return clauses_[static_cast<size_t>(a)].activity <
             clauses_[static_cast<size_t>(b)].activity;
    });
    const size_t kill = cand.size() / 2;
    for (size_t i = 0; i < kill; ++i) {
      clauses_[static_cast<size_t>(cand[i])].deleted = true;
      --learnt_live_;
      ++deleted_;
    }
    learnt_cap_ = learnt_cap_ + learnt_cap_ / 2;  // geometric growth
  }

  SolveResult finish(Status st) {
    SolveResult r;
    r.status = st;
    if (st == Status::Sat) {
      r.model.assign(static_cast<size_t>(n_) + 1, false);
      for (int v = 1; v <= n_; ++v)
        r.model[static_cast<size_t>(v)] = value(v) == Truth::True;
    }
    r.stats = stats_map();
    return r;
  }

  // --- activity-ordered heap (max activity first, then lowest index) ---
  bool var_before(int u, int v) const {
    const double au = activity_[static_cast<size_t>(u)];
    const double av = activity_[static_cast<size_t>(v)];
    return au > av || (au == av && u < v);
  }
  void heap_insert(int v) {
    if (heap_pos_[static_cast<size_t>(v)] != -1) return;
    heap_pos_[static_cast<size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_sift_up(static_cast<int>(heap_.size()) - 1);
  }
  void heap_pop_top() {
    const int last = heap_.back();
    heap_pos_[static_cast<size_t>(heap_[0])] = -1;
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[static_cast<size_t>(last)] = 0;
      heap_sift_down(0);
    }
  }
  void heap_update(int v) {
    const int i = heap_pos_[static_cast<size_t>(v)];
    if (i == -1) return;
    heap_sift_up(i);
    heap_sift_down(heap_pos_[static_cast<size_t>(v)]);
  }
  void heap_sift_up(int i) {
    const int v = heap_[static_cast<size_t>(i)];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!var_before(v, heap_[static_cast<size_t>(parent)])) break;
      heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(parent)];
      heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
      i = parent;
    }
    heap_[static_cast<size_t>(i)] = v;
    heap_pos_[static_cast<size_t>(v)] = i;
  }
  void heap_sift_down(int i) {
    const int v = heap_[static_cast<size_t>(i)];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && var_before(heap_[static_cast<size_t>(child + 1)],
                                      heap_[static_cast<size_t>(child)]))
        ++child;
      if (!var_before(heap_[static_cast<size_t>(child)], v)) break;
      heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(child)];
      heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
      i = child;
    }
    heap_[static_cast<size_t>(i)] = v;
    heap_pos_[static_cast<size_t>(v)] = i;
  }

  SolverConfig cfg_;
  int n_ = 0;
  std::vector<ClauseData> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<Truth> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<int> trail_;      // internal literal codes, assignment order
  std::vector<int> trail_lim_;  // trail size at each decision
  size_t qhead_ = 0;
  std::optional<int> root_conflict_;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<unsigned char> saved_phase_;
  std::vector<unsigned char> seen_;

  long long decisions_ = 0;
  long long propagations_ = 0;
  long long conflicts_ = 0;
  long long restarts_ = 0;
  long long learned_ = 0;
  long long deleted_ = 0;
  long long conflicts_since_restart_ = 0;
  long long restart_limit_ = 0;
  long long learnt_cap_ = 0;
  long long learnt_live_ = 0;
  LearnHook learn_hook_;
};

}  // namespace nbsat

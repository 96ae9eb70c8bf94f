#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbsat/graph.hpp"
#include "nbsat/ossp.hpp"
#include "nbsat/policy.hpp"
#include "nbsat/solver.hpp"

namespace nbsat {

class StrategyParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when Q-activity seeding meets per-variable max-Q values on both
// sides of zero; -1/M keeps order only within one sign regime.
class MixedSignQ : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// How the branching oracle spends its model budget before handing the solver
// back to VSIDS. q_activity additionally seeds activities from the last
// forward pass at release time.
struct Strategy {
  enum class Kind { pure_vsids, fixed_steps, release_action, action_pool };
  Kind kind = Kind::pure_vsids;
  long long fixed_n = 0;      // fixed_steps
  long long min_steps = 0;    // release_action
  long long max_steps = 0;    // release_action
  long long pool_size = 1;    // action_pool
  long long max_model_runs = 1;  // action_pool
  bool q_activity = false;

  bool requires_model() const { return kind != Kind::pure_vsids; }

  void validate() const {
    switch (kind) {
      case Kind::pure_vsids:
        break;
      case Kind::fixed_steps:
        if (fixed_n < 0) throw StrategyParseError("fixed: budget must be >= 0");
        break;
      case Kind::release_action:
        if (min_steps < 0 || max_steps < min_steps)
          throw StrategyParseError("release: need 0 <= min <= max");
        break;
      case Kind::action_pool:
        if (pool_size < 1 || max_model_runs < 1)
          throw StrategyParseError("pool: need k >= 1 and r >= 1");
        break;
    }
  }

  std::string canonical() const {
    std::string s;
    switch (kind) {
      case Kind::pure_vsids: s = "vsids"; break;
      case Kind::fixed_steps: s = "fixed:" + std::to_string(fixed_n); break;
      case Kind::release_action:
        s = "release:min=" + std::to_string(min_steps) +
            ",max=" + std::to_string(max_steps);
        break;
      case Kind::action_pool:
        s = "pool:k=" + std::to_string(pool_size) +
            ",r=" + std::to_string(max_model_runs);
        break;
    }
    if (q_activity) s += "+qact";
    return s;
  }
};

namespace detail {

inline long long parse_ll(const std::string& tok, const std::string& what) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw StrategyParseError("bad " + what + " value '" + tok + "'");
  }
}

// "k=3,r=1" -> {k:3, r:1}, keys restricted to `allowed`.
inline std::map<std::string, long long> parse_kv(const std::string& body,
                                                 const std::set<std::string>& allowed) {
  std::map<std::string, long long> out;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = body.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw StrategyParseError("expected key=value in '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (!allowed.count(key))
      throw StrategyParseError("unknown key '" + key + "'");
    if (out.count(key)) throw StrategyParseError("duplicate key '" + key + "'");
    out[key] = parse_ll(item.substr(eq + 1), key);
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

// Descriptors: "vsids", "fixed:<n>", "release:min=<a>,max=<b>" (shorthand
// "release:<n>" means min=n, max=2n), "pool:k=<k>,r=<r>"; any of them may
// carry a "+qact" suffix.
inline Strategy parse_strategy(std::string desc) {
  Strategy s;
  if (desc.size() >= 5 && desc.substr(desc.size() - 5) == "+qact") {
    s.q_activity = true;
    desc.resize(desc.size() - 5);
  }
  const size_t colon = desc.find(':');
  const std::string head = desc.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? std::string() : desc.substr(colon + 1);
  if (head == "vsids") {
    if (colon != std::string::npos)
      throw StrategyParseError("vsids takes no arguments");
    s.kind = Strategy::Kind::pure_vsids;
  } else if (head == "fixed") {
    if (colon == std::string::npos)
      throw StrategyParseError("fixed needs a budget, e.g. fixed:3");
    s.kind = Strategy::Kind::fixed_steps;
    s.fixed_n = detail::parse_ll(body, "fixed budget");
  } else if (head == "release") {
    if (colon == std::string::npos)
      throw StrategyParseError("release needs bounds, e.g. release:min=2,max=4");
    s.kind = Strategy::Kind::release_action;
    if (body.find('=') == std::string::npos) {
      s.min_steps = detail::parse_ll(body, "release steps");
      s.max_steps = 2 * s.min_steps;
    } else {
      auto kv = detail::parse_kv(body, {"min", "max"});
      if (!kv.count("min") || !kv.count("max"))
        throw StrategyParseError("release needs both min= and max=");
      s.min_steps = kv["min"];
      s.max_steps = kv["max"];
    }
  } else if (head == "pool") {
    if (colon == std::string::npos)
      throw StrategyParseError("pool needs sizes, e.g. pool:k=20,r=1");
    s.kind = Strategy::Kind::action_pool;
    auto kv = detail::parse_kv(body, {"k", "r"});
    if (!kv.count("k") || !kv.count("r"))
      throw StrategyParseError("pool needs both k= and r=");
    s.pool_size = kv["k"];
    s.max_model_runs = kv["r"];
  } else {
    throw StrategyParseError("unknown strategy '" + head + "'");
  }
  s.validate();
  return s;
}

// One scored action set from one forward pass.
struct ActionScores {
  std::vector<ActionId> actions;
  std::vector<double> q;  // aligned with actions
  std::optional<double> release;
};

using Scorer = std::function<ActionScores(Solver&)>;

inline Scorer make_sat_scorer(const PolicyWeights& weights) {
  return [&weights](Solver& s) {
    const QOutput out = forward(build_sat_graph(s.extract_mdp_state()), weights);
    return ActionScores{out.actions, out.q, out.release};
  };
}

inline Scorer make_ossp_scorer(const PolicyWeights& weights,
                               const OsspInstance& inst, const CbVarMap& vm) {
  return [&weights, &inst, &vm](Solver& s) {
    std::set<std::pair<int, int>> decided;
    for (int i = 0; i < vm.num_ops(); ++i)
      for (int j = i + 1; j < vm.num_ops(); ++j) {
        if (!vm.conflicting(i, j)) continue;
        if (s.value(vm.pr(i, j)) != Truth::Undef ||
            s.value(vm.pr(j, i)) != Truth::Undef)
          decided.insert({i, j});
      }
    const auto windows =
        derive_windows(vm, [&s](int var) { return s.value(var); });
    const OpGraph g = build_op_graph(inst, vm.horizon(), decided, windows);
    const QOutput out = forward(build_ossp_graph(g), weights);
    return ActionScores{out.actions, out.q, out.release};
  };
}

struct ControllerStats {
  long long model_invocations = 0;
  long long model_decisions = 0;
  long long vsids_decisions = 0;
  long long pool_skips = 0;
  std::optional<long long> released_at;  // 1-based consult index
};

// Per-variable max-Q map from one scored action set; order_ops actions need
// the varmap to name their precedence variable.
inline std::map<int, double> per_variable_max_q(const ActionScores& scores,
                                                const CbVarMap* vm = nullptr) {
  std::map<int, double> maxq;
  for (size_t i = 0; i < scores.actions.size(); ++i) {
    const ActionId& a = scores.actions[i];
    int var = 0;
    if (a.kind == ActionId::Kind::assign_literal) {
      var = a.x;
    } else {
      if (!vm) throw std::logic_error("ordering action without an operation varmap");
      var = vm->pr_checked(a.x, a.y);
    }
    const auto [it, fresh] = maxq.try_emplace(var, scores.q[i]);
    if (!fresh) it->second = std::max(it->second, scores.q[i]);
  }
  return maxq;
}

// The activity each variable would be seeded with: -1/M with |M| clamped to
// >= 1e-9, sign preserved (M = 0 counts as positive).
inline std::map<int, double> q_activity_scores(const std::map<int, double>& maxq) {
  std::map<int, double> out;
  for (const auto& [var, m] : maxq) {
    double denom = m;
    if (denom > -1e-9 && denom < 1e-9) denom = denom < 0.0 ? -1e-9 : 1e-9;
    out[var] = -1.0 / denom;
  }
  return out;
}

// Branching oracle driving one solve. Owns the strategy state (budgets,
// action pool, last scores) and performs the Q-activity hand-back. One
// controller per solve; not reusable across solver instances.
class HandoffController {
 public:
  explicit HandoffController(Strategy strategy) : strategy_(strategy) {
    strategy_.validate();
    if (strategy_.requires_model())
      throw std::invalid_argument("strategy '" + strategy_.canonical() +
                                  "' needs model weights");
  }

  HandoffController(Strategy strategy, Scorer scorer)
      : strategy_(strategy), scorer_(std::move(scorer)) {
    strategy_.validate();
    if (strategy_.requires_model() && !scorer_)
      throw std::invalid_argument("strategy '" + strategy_.canonical() +
                                  "' needs model weights");
  }

  HandoffController(Strategy strategy, const PolicyWeights& weights)
      : HandoffController(strategy, make_sat_scorer(weights)) {
    check_release_head(weights);
  }

  HandoffController(Strategy strategy, const PolicyWeights& weights,
                    const OsspInstance& inst, const CbVarMap& vm)
      : HandoffController(strategy, make_ossp_scorer(weights, inst, vm)) {
    varmap_ = &vm;
    check_release_head(weights);
  }

  BranchingOracle oracle() {
    return [this](Solver& s) { return next_decision(s); };
  }

  OracleResult next_decision(Solver& s) {
    ++consults_;
    switch (strategy_.kind) {
      case Strategy::Kind::pure_vsids:
        return release(s);
      case Strategy::Kind::fixed_steps: {
        if (stats_.model_decisions >= strategy_.fixed_n) return release(s);
        const auto pick = best_action(s);
        if (!pick) return release(s);
        ++stats_.model_decisions;
        return Decision{*pick};
      }
      case Strategy::Kind::release_action: {
        if (stats_.model_decisions >= strategy_.max_steps) return release(s);
        const ActionScores scores = run_model(s);
        if (scores.actions.empty()) return release(s);
        const size_t best = argmax_index(scores.q);
        if (stats_.model_decisions >= strategy_.min_steps && scores.release &&
            *scores.release > scores.q[best])
          return release(s);
        ++stats_.model_decisions;
        return Decision{action_literal(scores.actions[best])};
      }
      case Strategy::Kind::action_pool: {
        while (true) {
          if (pool_.empty()) {
            if (runs_used_ >= strategy_.max_model_runs) return release(s);
            ++runs_used_;
            fill_pool(run_model(s));
            if (pool_.empty()) return release(s);
          }
          const ActionId a = pool_.front();
          pool_.pop_front();
          if (!action_valid(a, s)) {
            ++stats_.pool_skips;
            continue;
          }
          ++stats_.model_decisions;
          return Decision{action_literal(a)};
        }
      }
    }
    throw std::logic_error("unreachable strategy kind");
  }

  // Pass the solver's final decision count to fill in vsids_decisions.
  ControllerStats stats(std::optional<long long> total_decisions = std::nullopt) const {
    ControllerStats out = stats_;
    if (total_decisions)
      out.vsids_decisions = *total_decisions - out.model_decisions;
    return out;
  }

  const std::optional<ActionScores>& last_scores() const { return last_scores_; }

 private:
  void check_release_head(const PolicyWeights& weights) const {
    if (strategy_.kind == Strategy::Kind::release_action &&
        !weights.hyper.release_head)
      throw std::invalid_argument("release strategy needs a release head");
  }

  ActionScores run_model(Solver& s) {
    ++stats_.model_invocations;
    last_scores_ = scorer_(s);
    return *last_scores_;
  }

  static size_t argmax_index(const std::vector<double>& q) {
    size_t best = 0;
    for (size_t i = 1; i < q.size(); ++i)
      if (q[i] > q[best]) best = i;
    return best;
  }

  std::optional<Lit> best_action(Solver& s) {
    const ActionScores scores = run_model(s);
    if (scores.actions.empty()) return std::nullopt;
    return action_literal(scores.actions[argmax_index(scores.q)]);
  }

  void fill_pool(const ActionScores& scores) {
    std::vector<size_t> idx(scores.actions.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return scores.q[a] > scores.q[b];
    });
    const size_t take =
        std::min<size_t>(idx.size(), static_cast<size_t>(strategy_.pool_size));
    for (size_t i = 0; i < take; ++i)
      pool_.push_back(scores.actions[idx[i]]);
  }

  Lit action_literal(const ActionId& a) const {
    if (a.kind == ActionId::Kind::assign_literal)
      return Lit(a.y > 0 ? a.x : -a.x);
    if (!varmap_)
      throw std::logic_error("ordering action without an operation varmap");
    return apply_edge_action({a.x, a.y}, *varmap_);
  }

  bool action_valid(const ActionId& a, Solver& s) const {
    if (a.kind == ActionId::Kind::assign_literal)
      return s.value(a.x) == Truth::Undef;
    if (!varmap_)
      throw std::logic_error("ordering action without an operation varmap");
    return s.value(varmap_->pr_checked(a.x, a.y)) == Truth::Undef &&
           s.value(varmap_->pr_checked(a.y, a.x)) != Truth::True;
  }

  OracleResult release(Solver& s) {
    if (!stats_.released_at) stats_.released_at = consults_;
    if (strategy_.q_activity && last_scores_) seed_from_q(s);
    return Release{};
  }

  // Activities from the last forward pass; only still-unassigned variables
  // are seeded.
  void seed_from_q(Solver& s) {
    auto scores = q_activity_scores(per_variable_max_q(*last_scores_, varmap_));
    for (auto it = scores.begin(); it != scores.end();)
      it = s.value(it->first) == Truth::Undef ? std::next(it) : scores.erase(it);
    s.seed_activities(scores);
  }

  Strategy strategy_;
  Scorer scorer_;
  const CbVarMap* varmap_ = nullptr;
  ControllerStats stats_;
  long long consults_ = 0;
  long long runs_used_ = 0;
  std::deque<ActionId> pool_;
  std::optional<ActionScores> last_scores_;
};

// Checks that -1/M seeding preserves the argmax within a single sign regime
// and returns the winning variable. Mixed signs raise MixedSignQ.
inline int q_activity_argmax_check(const std::map<int, double>& maxq) {
  if (maxq.empty()) throw std::invalid_argument("q_activity_argmax_check: empty map");
  bool has_neg = false, has_nonneg = false;
  for (const auto& [var, m] : maxq) (m < 0.0 ? has_neg : has_nonneg) = true;
  if (has_neg && has_nonneg)
    throw MixedSignQ("per-variable max-Q values span both signs");
  int best_var = maxq.begin()->first;
  double best_m = maxq.begin()->second;
  for (const auto& [var, m] : maxq)
    if (m > best_m) {
      best_m = m;
      best_var = var;
    }
  const auto acts = q_activity_scores(maxq);
  double best_act = acts.begin()->second;
  for (const auto& [var, a] : acts) best_act = std::max(best_act, a);
  if (acts.at(best_var) != best_act)
    throw std::logic_error("seeded activities disagree with max-Q argmax");
  return best_var;
}

inline int q_activity_argmax_check(const ActionScores& scores,
                                   const CbVarMap* vm = nullptr) {
  return q_activity_argmax_check(per_variable_max_q(scores, vm));
}

}  // namespace nbsat

#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbsat/cnf.hpp"
#include "nbsat/rng.hpp"
#include "nbsat/solver.hpp"

namespace nbsat {

// Open-shop instance: jobs × machines processing times, all >= 1. Operation
// (job, machine) has the flat index job*machines + machine.
struct OsspInstance {
  int jobs = 0;
  int machines = 0;
  std::vector<std::vector<int>> p;  // p[job][machine]

  int num_ops() const { return jobs * machines; }
  int op_index(int job, int machine) const { return job * machines + machine; }
  int job_of(int op) const { return op / machines; }
  int machine_of(int op) const { return op % machines; }
  int duration(int op) const {
    return p[static_cast<size_t>(job_of(op))][static_cast<size_t>(machine_of(op))];
  }
};

struct OperationId {
  int job = 0;
  int machine = 0;
  friend auto operator<=>(const OperationId&, const OperationId&) = default;
};

inline void validate_instance(const OsspInstance& inst) {
  if (inst.jobs < 1 || inst.machines < 1)
    throw std::invalid_argument("ossp: need at least one job and one machine");
  if (static_cast<int>(inst.p.size()) != inst.jobs)
    throw std::invalid_argument("ossp: row count mismatch");
  for (const auto& row : inst.p) {
    if (static_cast<int>(row.size()) != inst.machines)
      throw std::invalid_argument("ossp: column count mismatch");
    for (int d : row)
      if (d < 1) throw std::invalid_argument("ossp: processing times must be >= 1");
  }
}

// Random instance with processing times uniform in [1, 99], drawn row by row
// from the documented PRNG.
inline OsspInstance gen_taillard_like(int jobs, int machines, RngSeed seed) {
  if (jobs < 1 || machines < 1)
    throw std::invalid_argument("gen_taillard_like: need jobs, machines >= 1");
  SplitMix64 rng(seed);
  OsspInstance inst;
  inst.jobs = jobs;
  inst.machines = machines;
  inst.p.assign(static_cast<size_t>(jobs), std::vector<int>());
  for (int j = 0; j < jobs; ++j) {
    inst.p[static_cast<size_t>(j)].reserve(static_cast<size_t>(machines));
    for (int m = 0; m < machines; ++m)
      inst.p[static_cast<size_t>(j)].push_back(rng.uniform_int(1, 99));
  }
  return inst;
}

// Max over job loads (row sums) and machine loads (column sums).
inline int lower_bound(const OsspInstance& inst) {
  validate_instance(inst);
  int best = 0;
  for (int j = 0; j < inst.jobs; ++j) {
    int row = 0;
    for (int m = 0; m < inst.machines; ++m) row += inst.p[static_cast<size_t>(j)][static_cast<size_t>(m)];
    best = std::max(best, row);
  }
  for (int m = 0; m < inst.machines; ++m) {
    int col = 0;
    for (int j = 0; j < inst.jobs; ++j) col += inst.p[static_cast<size_t>(j)][static_cast<size_t>(m)];
    best = std::max(best, col);
  }
  return best;
}

inline long long total_processing(const OsspInstance& inst) {
  long long total = 0;
  for (const auto& row : inst.p)
    for (int d : row) total += d;
  return total;
}

// Variable layout for the start-time encoding at horizon T. Time is 0-based
// internally: sa(i,t) for t in [0,T] reads "operation i starts at t or
// later"; eb(i,t) for t in [1,T] reads "i ends by t"; pr(i,j) orders a
// conflicting pair (same job or same machine). The reporting label
// convention adds 1 to earliest starts; see OpGraph::label.
class CbVarMap {
 public:
  CbVarMap() = default;
  CbVarMap(const OsspInstance& inst, int horizon) {
    validate_instance(inst);
    if (horizon < 1) throw std::invalid_argument("CbVarMap: horizon must be >= 1");
    jobs_ = inst.jobs;
    machines_ = inst.machines;
    horizon_ = horizon;
    ops_ = inst.num_ops();
    pr_.assign(static_cast<size_t>(ops_) * static_cast<size_t>(ops_), 0);
    int next = ops_ * (horizon_ + 1) + ops_ * horizon_ + 1;
    for (int i = 0; i < ops_; ++i)
      for (int j = 0; j < ops_; ++j)
        if (i != j && conflicting(i, j))
          pr_[static_cast<size_t>(i) * static_cast<size_t>(ops_) +
              static_cast<size_t>(j)] = next++;
    nvars_ = next - 1;
  }

  int jobs() const { return jobs_; }
  int machines() const { return machines_; }
  int horizon() const { return horizon_; }
  int num_ops() const { return ops_; }
  int num_vars() const { return nvars_; }

  bool conflicting(int i, int j) const {
    return i / machines_ == j / machines_ || i % machines_ == j % machines_;
  }

  int sa(int op, int t) const {
    if (op < 0 || op >= ops_ || t < 0 || t > horizon_)
      throw std::invalid_argument("CbVarMap::sa: out of range");
    return op * (horizon_ + 1) + t + 1;
  }

  int eb(int op, int t) const {
    if (op < 0 || op >= ops_ || t < 1 || t > horizon_)
      throw std::invalid_argument("CbVarMap::eb: out of range");
    return ops_ * (horizon_ + 1) + op * horizon_ + (t - 1) + 1;
  }

  // 0 when the pair never conflicts.
  int pr(int i, int j) const {
    if (i < 0 || i >= ops_ || j < 0 || j >= ops_ || i == j)
      throw std::invalid_argument("CbVarMap::pr: bad pair");
    return pr_[static_cast<size_t>(i) * static_cast<size_t>(ops_) +
               static_cast<size_t>(j)];
  }

  int pr_checked(int i, int j) const {
    const int v = pr(i, j);
    if (v == 0)
      throw std::invalid_argument("CbVarMap: operations do not conflict");
    return v;
  }

 private:
  int jobs_ = 0, machines_ = 0, horizon_ = 0, ops_ = 0, nvars_ = 0;
  std::vector<int> pr_;
};

struct CbEncoding {
  Formula formula;
  CbVarMap varmap;
};

// Start-time CNF encoding of the instance at horizon T (Crawford-Baker
// style). Constraint families, in emission order:
//   (a) every op starts:            sa(i,0) v ... v sa(i,T)
//   (b) every op ends in time:      eb(i,1) v ... v eb(i,T)
//   (c) conflicting pairs ordered:  pr(i,j) v pr(j,i)
//   (d) sa coherence:               sa(i,t) -> sa(i,t-1)
//   (e) eb coherence:               eb(i,t) -> eb(i,t+1)
//   (f) duration link:              sa(i,t) -> ~eb(i, t+p_i-1)
//   plus horizon boundary units:    ~sa(i,t) for all t > T - p_i + 1
//   (g) precedence propagation:     sa(i,t) & pr(i,j) -> sa(j, t+p_i)
// A horizon too small for some operation still encodes; the formula is then
// simply unsatisfiable.
inline CbEncoding encode_crawford_baker(const OsspInstance& inst, int horizon) {
  CbVarMap vm(inst, horizon);
  const int T = horizon;
  const int ops = vm.num_ops();
  std::vector<Clause> clauses;

  for (int i = 0; i < ops; ++i) {  // (a)
    Clause c;
    for (int t = 0; t <= T; ++t) c.push_back(Lit(vm.sa(i, t)));
    clauses.push_back(std::move(c));
  }
  for (int i = 0; i < ops; ++i) {  // (b)
    Clause c;
    for (int t = 1; t <= T; ++t) c.push_back(Lit(vm.eb(i, t)));
    clauses.push_back(std::move(c));
  }
  for (int i = 0; i < ops; ++i)  // (c)
    for (int j = i + 1; j < ops; ++j)
      if (vm.conflicting(i, j))
        clauses.push_back(Clause{Lit(vm.pr(i, j)), Lit(vm.pr(j, i))});
  for (int i = 0; i < ops; ++i)  // (d)
    for (int t = 1; t <= T; ++t)
      clauses.push_back(Clause{Lit(-vm.sa(i, t)), Lit(vm.sa(i, t - 1))});
  for (int i = 0; i < ops; ++i)  // (e)
    for (int t = 1; t < T; ++t)
      clauses.push_back(Clause{Lit(-vm.eb(i, t)), Lit(vm.eb(i, t + 1))});
  for (int i = 0; i < ops; ++i) {  // (f) + boundary
    const int p = inst.duration(i);
    for (int t = 0; t + p - 1 <= T; ++t)
      if (t + p - 1 >= 1)
        clauses.push_back(Clause{Lit(-vm.sa(i, t)), Lit(-vm.eb(i, t + p - 1))});
    for (int t = std::max(0, T - p + 2); t <= T; ++t)
      clauses.push_back(Clause{Lit(-vm.sa(i, t))});
  }
  for (int i = 0; i < ops; ++i) {  // (g)
    const int p = inst.duration(i);
    for (int j = 0; j < ops; ++j) {
      if (i == j || !vm.conflicting(i, j)) continue;
      for (int t = 0; t + p <= T; ++t)
        clauses.push_back(Clause{Lit(-vm.sa(i, t)), Lit(-vm.pr(i, j)),
                                 Lit(vm.sa(j, t + p))});
    }
  }
  return CbEncoding{Formula(vm.num_vars(), std::move(clauses)), vm};
}

// Start times by flat operation index.
struct Schedule {
  std::vector<int> start;
  int start_of(const OsspInstance& inst, OperationId id) const {
    return start.at(static_cast<size_t>(inst.op_index(id.job, id.machine)));
  }
};

// start(i) = greatest t with sa(i,t) true in the model.
inline Schedule decode_schedule(const std::vector<bool>& model, const CbVarMap& vm) {
  if (static_cast<int>(model.size()) < vm.num_vars() + 1)
    throw std::invalid_argument("decode_schedule: model too small for varmap");
  Schedule s;
  s.start.assign(static_cast<size_t>(vm.num_ops()), 0);
  for (int i = 0; i < vm.num_ops(); ++i)
    for (int t = 0; t <= vm.horizon(); ++t)
      if (model[static_cast<size_t>(vm.sa(i, t))])
        s.start[static_cast<size_t>(i)] = t;
  return s;
}

inline int makespan(const OsspInstance& inst, const Schedule& s) {
  int end = 0;
  for (int i = 0; i < inst.num_ops(); ++i)
    end = std::max(end, s.start[static_cast<size_t>(i)] + inst.duration(i));
  return end;
}

// True iff per-job intervals are disjoint, per-machine intervals are
// disjoint, and every completion is <= T.
inline bool validate_schedule(const Schedule& s, const OsspInstance& inst, int T) {
  if (static_cast<int>(s.start.size()) != inst.num_ops()) return false;
  for (int i = 0; i < inst.num_ops(); ++i) {
    const int st = s.start[static_cast<size_t>(i)];
    if (st < 0 || st + inst.duration(i) > T) return false;
  }
  const auto disjoint = [&](const std::vector<int>& ops) {
    std::vector<std::pair<int, int>> iv;
    for (int op : ops)
      iv.emplace_back(s.start[static_cast<size_t>(op)],
                      s.start[static_cast<size_t>(op)] + inst.duration(op));
    std::sort(iv.begin(), iv.end());
    for (size_t k = 1; k < iv.size(); ++k)
      if (iv[k].first < iv[k - 1].second) return false;
    return true;
  };
  for (int j = 0; j < inst.jobs; ++j) {
    std::vector<int> ops;
    for (int m = 0; m < inst.machines; ++m) ops.push_back(inst.op_index(j, m));
    if (!disjoint(ops)) return false;
  }
  for (int m = 0; m < inst.machines; ++m) {
    std::vector<int> ops;
    for (int j = 0; j < inst.jobs; ++j) ops.push_back(inst.op_index(j, m));
    if (!disjoint(ops)) return false;
  }
  return true;
}

struct MakespanResult {
  int makespan = 0;
  Schedule schedule;
};

// Least feasible horizon by binary search over [lower_bound, total
// processing time], plus a schedule realizing it.
inline MakespanResult solve_makespan(const OsspInstance& inst,
                                     const SolverConfig& cfg = {}) {
  validate_instance(inst);
  int lo = lower_bound(inst);
  int hi = static_cast<int>(total_processing(inst));
  std::optional<Schedule> best;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    auto enc = encode_crawford_baker(inst, mid);
    Solver solver(enc.formula, cfg);
    const SolveResult r = solver.solve();
    if (r.status == Status::Sat) {
      best = decode_schedule(r.model, enc.varmap);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (!best || makespan(inst, *best) > lo) {
    auto enc = encode_crawford_baker(inst, lo);
    Solver solver(enc.formula, cfg);
    const SolveResult r = solver.solve();
    if (r.status != Status::Sat)
      throw std::logic_error("solve_makespan: final horizon infeasible");
    best = decode_schedule(r.model, enc.varmap);
  }
  return MakespanResult{lo, std::move(*best)};
}

// Per-operation start window, internal 0-based convention: est is the
// earliest possible start time, lct the latest allowed completion time.
struct OpWindow {
  int est = 0;
  int lct = 0;
  friend bool operator==(const OpWindow&, const OpWindow&) = default;
};

inline std::vector<OpWindow> initial_windows(const OsspInstance& inst, int horizon) {
  return std::vector<OpWindow>(static_cast<size_t>(inst.num_ops()),
                               OpWindow{0, horizon});
}

// Windows read off a (partial) assignment: est(i) is the greatest t with
// sa(i,t) assigned true (0 when none), lct(i) the least t with eb(i,t)
// assigned true (T when none). Windows only narrow as the trail grows.
// `value` maps a CNF variable index to its Truth.
template <typename ValueFn>
  requires std::invocable<ValueFn&, int>
std::vector<OpWindow> derive_windows(const CbVarMap& vm, ValueFn&& value) {
  std::vector<OpWindow> w(static_cast<size_t>(vm.num_ops()),
                          OpWindow{0, vm.horizon()});
  for (int i = 0; i < vm.num_ops(); ++i) {
    for (int t = 0; t <= vm.horizon(); ++t)
      if (value(vm.sa(i, t)) == Truth::True) w[static_cast<size_t>(i)].est = t;
    for (int t = vm.horizon(); t >= 1; --t)
      if (value(vm.eb(i, t)) == Truth::True) w[static_cast<size_t>(i)].lct = t;
  }
  return w;
}

inline std::vector<OpWindow> derive_windows(const CbVarMap& vm,
                                            const std::vector<Truth>& assignment) {
  return derive_windows(vm, [&](int var) {
    return assignment.at(static_cast<size_t>(var));
  });
}

// Decision graph over operations: one vertex per operation, a directed edge
// (i, j) for every still-open ordering choice "i before j" that j's window
// admits. Windows are kept in the internal 0-based convention; label()
// exposes the 1-based reporting form, initially (p_i, 1, T).
struct OpGraph {
  int jobs = 0, machines = 0, horizon = 0;
  struct Vertex {
    int job = 0, machine = 0;
    int duration = 0;
    int est = 0;
    int lct = 0;
    bool feasible = true;
  };
  std::vector<Vertex> vertices;            // flat operation index order
  std::vector<std::pair<int, int>> edges;  // (before, after)

  std::array<int, 3> label(int op) const {
    const Vertex& v = vertices.at(static_cast<size_t>(op));
    return {v.duration, v.est + 1, v.lct};
  }
};

inline OpGraph build_op_graph(const OsspInstance& inst, int horizon,
                              const std::set<std::pair<int, int>>& decided,
                              const std::vector<OpWindow>& windows) {
  validate_instance(inst);
  if (static_cast<int>(windows.size()) != inst.num_ops())
    throw std::invalid_argument("build_op_graph: window count mismatch");
  OpGraph g;
  g.jobs = inst.jobs;
  g.machines = inst.machines;
  g.horizon = horizon;
  const int ops = inst.num_ops();
  g.vertices.reserve(static_cast<size_t>(ops));
  for (int i = 0; i < ops; ++i) {
    const OpWindow& w = windows[static_cast<size_t>(i)];
    g.vertices.push_back(OpGraph::Vertex{inst.job_of(i), inst.machine_of(i),
                                         inst.duration(i), w.est, w.lct,
                                         w.est + inst.duration(i) <= w.lct});
  }
  const auto conflicting = [&](int i, int j) {
    return inst.job_of(i) == inst.job_of(j) ||
           inst.machine_of(i) == inst.machine_of(j);
  };
  for (int i = 0; i < ops; ++i) {
    for (int j = 0; j < ops; ++j) {
      if (i == j || !conflicting(i, j)) continue;
      if (decided.count({i, j}) || decided.count({j, i})) continue;
      if (windows[static_cast<size_t>(i)].est + inst.duration(i) +
              inst.duration(j) >
          windows[static_cast<size_t>(j)].lct)
        continue;
      g.edges.emplace_back(i, j);
    }
  }
  return g;
}

inline OpGraph build_op_graph(const OsspInstance& inst, int horizon) {
  return build_op_graph(inst, horizon, {}, initial_windows(inst, horizon));
}

// The decision literal asserting "i before j".
inline Lit apply_edge_action(std::pair<int, int> edge, const CbVarMap& vm) {
  return Lit(vm.pr_checked(edge.first, edge.second));
}

// --- instance and schedule text formats ---

// Line 1: "jobs machines"; then one line of processing times per job.
inline OsspInstance read_ossp(std::istream& in) {
  OsspInstance inst;
  if (!(in >> inst.jobs >> inst.machines))
    throw ParseError("ossp: missing size header");
  if (inst.jobs < 1 || inst.machines < 1)
    throw ParseError("ossp: sizes must be positive");
  inst.p.assign(static_cast<size_t>(inst.jobs),
                std::vector<int>(static_cast<size_t>(inst.machines), 0));
  for (int j = 0; j < inst.jobs; ++j)
    for (int m = 0; m < inst.machines; ++m) {
      int d = 0;
      if (!(in >> d)) throw ParseError("ossp: missing processing time");
      if (d < 1) throw ParseError("ossp: processing times must be >= 1");
      inst.p[static_cast<size_t>(j)][static_cast<size_t>(m)] = d;
    }
  return inst;
}

inline OsspInstance read_ossp(const std::string& text) {
  std::istringstream in(text);
  return read_ossp(in);
}

inline void write_ossp(const OsspInstance& inst, std::ostream& out) {
  validate_instance(inst);
  out << inst.jobs << ' ' << inst.machines << '\n';
  for (const auto& row : inst.p) {
    for (size_t m = 0; m < row.size(); ++m)
      out << row[m] << (m + 1 == row.size() ? '\n' : ' ');
  }
}

// One line per operation: "job machine start".
inline std::string schedule_to_text(const Schedule& s, const OsspInstance& inst) {
  std::ostringstream out;
  for (int j = 0; j < inst.jobs; ++j)
    for (int m = 0; m < inst.machines; ++m)
      out << j << ' ' << m << ' '
          << s.start[static_cast<size_t>(inst.op_index(j, m))] << '\n';
  return out.str();
}

}  // namespace nbsat

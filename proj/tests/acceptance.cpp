// Acceptance suite: one pass/fail line per criterion, exit code counts the
// failures. Each criterion is self-contained and uses the exhaustive oracles
// in support/oracles.hpp as ground truth.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "nbsat/bench.hpp"
#include "nbsat/generators.hpp"
#include "nbsat/graph.hpp"
#include "nbsat/handoff.hpp"
#include "nbsat/ossp.hpp"
#include "nbsat/policy.hpp"
#include "nbsat/rng.hpp"
#include "nbsat/solver.hpp"
#include "support/oracles.hpp"

using namespace nbsat;

namespace {

int failures = 0;
std::ostringstream detail;

void report(int index, const std::string& what, bool ok) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", index, what.c_str());
  if (!ok) {
    ++failures;
    const std::string text = detail.str();
    if (!text.empty()) std::printf("%s", text.c_str());
  }
  detail.str("");
  detail.clear();
}

GnnHyper tiny_hyper(bool sat) {
  GnnHyper h = sat ? sat_hyper() : ossp_hyper();
  h.hidden = 16;
  return h;
}

// --- 1: solver status equals the truth-table oracle on 1000 small formulas ---

bool criterion_solver_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int checked = 0, sat_seen = 0, unsat_seen = 0;
  SplitMix64 rng(RngSeed{1001});

  // 500 random 3-SAT formulas around the phase transition
  for (int i = 0; i < 500; ++i) {
    const int nvars = 8 + static_cast<int>(rng.below(13));  // 8..20
    const double ratio = 3.0 + 2.5 * rng.unit();
    const int nclauses = std::max(1, static_cast<int>(ratio * nvars));
    const Formula f = gen_random_3sat(nvars, nclauses, RngSeed{2000 + static_cast<std::uint64_t>(i)});
    const bool oracle_sat = oracle::brute_force_sat(f);
    Solver s(f);
    const SolveResult r = s.solve();
    const bool solver_sat = r.status == Status::Sat;
    if (solver_sat != oracle_sat) {
      detail << "  3sat mismatch at i=" << i << " nvars=" << nvars << "\n";
      return false;
    }
    if (solver_sat && !satisfies(f, r.model)) {
      detail << "  model does not satisfy 3sat i=" << i << "\n";
      return false;
    }
    (solver_sat ? sat_seen : unsat_seen)++;
    ++checked;
  }

  // 250 SR pairs at n in 10..20 contribute 500 more formulas
  for (int i = 0; i < 250; ++i) {
    const int n = 10 + i % 11;
    const SrPair pair = gen_sr_pair(n, RngSeed{3000 + static_cast<std::uint64_t>(i)});
    for (const Formula* f : {&pair.unsat, &pair.sat}) {
      const bool oracle_sat = oracle::brute_force_sat(*f);
      Solver s(*f);
      const SolveResult r = s.solve();
      if ((r.status == Status::Sat) != oracle_sat) {
        detail << "  sr mismatch at i=" << i << " n=" << n << "\n";
        return false;
      }
      if (r.status == Status::Sat && !satisfies(*f, r.model)) {
        detail << "  model does not satisfy sr i=" << i << "\n";
        return false;
      }
      (oracle_sat ? sat_seen : unsat_seen)++;
      ++checked;
    }
  }

  const double secs = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - t0).count();
  if (checked != 1000 || sat_seen == 0 || unsat_seen == 0) {
    detail << "  checked=" << checked << " sat=" << sat_seen
           << " unsat=" << unsat_seen << "\n";
    return false;
  }
  if (secs >= 300.0) {
    detail << "  took " << secs << " s (budget 300)\n";
    return false;
  }
  return true;
}

// --- 2: SR(40) twin statuses plus the clause-length mean ---

bool criterion_sr_pairs() {
  for (int i = 0; i < 100; ++i) {
    const SrPair pair = gen_sr_pair(40, RngSeed{4000 + static_cast<std::uint64_t>(i)});
    Solver su(pair.unsat);
    if (su.solve().status != Status::Unsat) {
      detail << "  unsat twin " << i << " reported SAT\n";
      return false;
    }
    Solver ss(pair.sat);
    if (ss.solve().status != Status::Sat) {
      detail << "  sat twin " << i << " reported UNSAT\n";
      return false;
    }
  }
  SplitMix64 rng(RngSeed{4242});
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i)
    sum += static_cast<double>(sample_sr_clause(40, rng).size());
  const double mean = sum / 10000.0;
  if (mean < 4.1 || mean > 4.3) {
    detail << "  clause-length mean " << mean << " outside 4.2 +/- 0.1\n";
    return false;
  }
  return true;
}

// --- 3: makespan search equals the exhaustive scheduler ---

bool criterion_ossp_oracle() {
  SplitMix64 rng(RngSeed{5005});
  for (int i = 0; i < 70; ++i) {
    const bool small = i < 50;
    OsspInstance inst;
    inst.jobs = small ? 2 : 3;
    inst.machines = small ? 2 : 3;
    inst.p.assign(static_cast<size_t>(inst.jobs),
                  std::vector<int>(static_cast<size_t>(inst.machines), 0));
    for (auto& row : inst.p)
      for (int& d : row) d = rng.uniform_int(1, small ? 9 : 5);

    const int expect = oracle::brute_makespan(inst);
    const MakespanResult got = solve_makespan(inst);
    if (got.makespan != expect) {
      detail << "  makespan " << got.makespan << " vs oracle " << expect
             << " at i=" << i << "\n";
      return false;
    }
    if (!validate_schedule(got.schedule, inst, got.makespan)) {
      detail << "  returned schedule invalid at i=" << i << "\n";
      return false;
    }
    // a fresh solve at the optimum must decode to a valid schedule too
    auto enc = encode_crawford_baker(inst, expect);
    Solver s(enc.formula);
    const SolveResult r = s.solve();
    if (r.status != Status::Sat ||
        !validate_schedule(decode_schedule(r.model, enc.varmap), inst, expect)) {
      detail << "  optimum re-solve failed at i=" << i << "\n";
      return false;
    }
    // and one horizon below the optimum must be UNSAT
    auto below = encode_crawford_baker(inst, expect - 1);
    Solver sb(below.formula);
    if (sb.solve().status != Status::Unsat) {
      detail << "  optimal-1 satisfiable at i=" << i << "\n";
      return false;
    }
  }
  return true;
}

// --- 4: operation graph shape and initial labels ---

bool criterion_op_graph() {
  for (int j = 1; j <= 7; ++j)
    for (int m = 1; m <= 7; ++m) {
      const OsspInstance inst =
          gen_taillard_like(j, m, RngSeed{static_cast<std::uint64_t>(100 * j + m)});
      const int T = lower_bound(inst) + 5;
      const OpGraph g = build_op_graph(inst, T);
      if (static_cast<int>(g.vertices.size()) != j * m) {
        detail << "  " << j << "x" << m << " has " << g.vertices.size()
               << " vertices\n";
        return false;
      }
      for (int op = 0; op < j * m; ++op)
        if (g.label(op) != std::array<int, 3>{inst.duration(op), 1, T}) {
          detail << "  bad initial label at " << j << "x" << m << " op " << op << "\n";
          return false;
        }
      if (j == 7 && m == 7 && g.vertices.size() != 49) return false;
    }
  return true;
}

// --- 5: equivariance, determinism, and exact weight round-trips ---

GraphObservation permute_nodes(const GraphObservation& obs,
                               const std::vector<int>& perm) {
  GraphObservation out = obs;
  for (size_t i = 0; i < obs.node_features.size(); ++i)
    out.node_features[static_cast<size_t>(perm[i])] = obs.node_features[i];
  for (size_t i = 0; i < obs.edges.size(); ++i) {
    out.edges[i].a = perm[static_cast<size_t>(obs.edges[i].a)];
    out.edges[i].b = perm[static_cast<size_t>(obs.edges[i].b)];
  }
  for (size_t i = 0; i < obs.actions.size(); ++i)
    if (obs.actions[i].node >= 0)
      out.actions[i].node = perm[static_cast<size_t>(obs.actions[i].node)];
  return out;
}

bool criterion_gnn() {
  SplitMix64 rng(RngSeed{6006});
  for (int round = 0; round < 100; ++round) {
    const bool sat_side = round % 2 == 0;
    GnnHyper hyper = tiny_hyper(sat_side);
    hyper.mlp_depth = 1 + static_cast<int>(rng.below(2));
    hyper.shared_core = rng.bernoulli(0.3);
    const PolicyWeights w =
        random_init(hyper, RngSeed{7000 + static_cast<std::uint64_t>(round)});

    GraphObservation obs;
    if (sat_side) {
      const Formula f = gen_random_3sat(10, 30, RngSeed{8000 + static_cast<std::uint64_t>(round)});
      Solver s(f);
      if (s.propagate().has_value()) continue;
      obs = build_sat_graph(s.extract_mdp_state());
    } else {
      OsspInstance inst;
      inst.jobs = 2 + static_cast<int>(rng.below(2));
      inst.machines = 2 + static_cast<int>(rng.below(2));
      inst.p.assign(static_cast<size_t>(inst.jobs),
                    std::vector<int>(static_cast<size_t>(inst.machines), 0));
      for (auto& row : inst.p)
        for (int& d : row) d = rng.uniform_int(1, 9);
      obs = build_ossp_graph(build_op_graph(inst, lower_bound(inst) + 4));
    }

    const QOutput base = forward(obs, w);
    const QOutput again = forward(obs, w);
    if (base.q != again.q ||
        base.release.has_value() != again.release.has_value() ||
        (base.release && *base.release != *again.release)) {
      detail << "  forward not bitwise deterministic at round " << round << "\n";
      return false;
    }

    std::vector<int> perm(obs.node_features.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.below(i)]);
    const QOutput permuted = forward(permute_nodes(obs, perm), w);
    for (size_t i = 0; i < base.q.size(); ++i)
      if (std::abs(permuted.q[i] - base.q[i]) > 1e-9) {
        detail << "  equivariance violated at round " << round << " action " << i
               << " delta " << std::abs(permuted.q[i] - base.q[i]) << "\n";
        return false;
      }

    if (load_weights(save_weights(w)) != w) {
      detail << "  weight round-trip not exact at round " << round << "\n";
      return false;
    }
  }
  return true;
}

// --- 6: handoff budget accounting on SR(50) ---

bool criterion_budgets() {
  std::vector<Formula> instances;
  for (int i = 0; i < 50; ++i) {
    SrPair pair = gen_sr_pair(50, RngSeed{9000 + static_cast<std::uint64_t>(i)});
    instances.push_back(std::move(pair.unsat));
    instances.push_back(std::move(pair.sat));
  }
  const PolicyWeights w = random_init(tiny_hyper(true), RngSeed{61});

  for (const long long k : {20, 30}) {
    for (const long long r : {1, 2, 3}) {
      Strategy st;
      st.kind = Strategy::Kind::action_pool;
      st.pool_size = k;
      st.max_model_runs = r;
      for (size_t i = 0; i < instances.size(); ++i) {
        HandoffController ctrl(st, w);
        Solver s(instances[i]);
        const SolveResult res = s.solve(ctrl.oracle());
        const ControllerStats cs = ctrl.stats(res.stats.at("decisions"));
        if (cs.model_invocations > r || cs.model_decisions > k * r) {
          detail << "  pool k=" << k << " r=" << r << " broke budget on " << i << "\n";
          return false;
        }
        if (cs.model_decisions > r && !(cs.model_invocations < cs.model_decisions)) {
          detail << "  no amortization: k=" << k << " r=" << r << " on " << i << "\n";
          return false;
        }
        if (cs.model_decisions + cs.vsids_decisions != res.stats.at("decisions")) {
          detail << "  decision accounting broke on " << i << "\n";
          return false;
        }
      }
    }
  }

  for (const long long n : {1, 2, 3, 5}) {
    Strategy st;
    st.kind = Strategy::Kind::fixed_steps;
    st.fixed_n = n;
    for (size_t i = 0; i < instances.size(); ++i) {
      HandoffController ctrl(st, w);
      Solver s(instances[i]);
      const SolveResult res = s.solve(ctrl.oracle());
      const ControllerStats cs = ctrl.stats(res.stats.at("decisions"));
      if (cs.model_invocations > n || cs.model_decisions > n) {
        detail << "  fixed:" << n << " broke budget on " << i << "\n";
        return false;
      }
      if (res.stats.at("decisions") > n &&
          (!cs.released_at || *cs.released_at != n + 1)) {
        detail << "  fixed:" << n << " released at the wrong consult on " << i << "\n";
        return false;
      }
    }
  }
  return true;
}

// --- 7: status neutrality across strategies and restart settings ---

bool criterion_neutrality() {
  BenchmarkSpec spec;
  for (auto& item : make_sr_dataset(25, 6, 300)) spec.items.push_back(std::move(item));
  for (auto& item : make_3sat_dataset(18, 60, 2, 310)) spec.items.push_back(std::move(item));
  for (auto& item : make_3sat_dataset(18, 110, 2, 320)) spec.items.push_back(std::move(item));
  for (auto& item : make_color_dataset(6, 9, 3, 2, 330)) spec.items.push_back(std::move(item));
  for (auto& item : make_ossp_dataset(2, 2, 1, 340)) spec.items.push_back(std::move(item));

  spec.strategies = {parse_strategy("vsids"),
                     parse_strategy("fixed:3"),
                     parse_strategy("fixed:3+qact"),
                     parse_strategy("release:min=1,max=4"),
                     parse_strategy("pool:k=20,r=2"),
                     parse_strategy("pool:k=20,r=2+qact")};
  spec.trials = 1;
  spec.timeout_s = 120.0;
  spec.sat_weights = random_init(tiny_hyper(true), RngSeed{71});
  spec.ossp_weights = random_init(tiny_hyper(false), RngSeed{72});

  std::map<std::string, std::string> expected;
  for (const bool restarts : {true, false}) {
    spec.restarts = restarts;
    const BenchRun run = run_benchmark(spec);
    for (const RunRecord& rec : run.records) {
      if (rec.status == "TIMEOUT") {
        detail << "  timeout on " << rec.instance << " (" << rec.strategy << ")\n";
        return false;
      }
      const auto [it, fresh] = expected.try_emplace(rec.instance, rec.status);
      if (!fresh && it->second != rec.status) {
        detail << "  " << rec.instance << ": " << it->second << " vs "
               << rec.status << " under " << rec.strategy
               << (restarts ? " (restarts on)" : " (restarts off)") << "\n";
        return false;
      }
    }
  }
  return true;
}

// --- 8: q-activity seeding keeps the argmax ---

bool criterion_q_activity() {
  SplitMix64 rng(RngSeed{8008});
  for (int round = 0; round < 1000; ++round) {
    const int nvars = 2 + static_cast<int>(rng.below(9));
    const bool negative = round % 2 == 0;
    // at release the last forward pass scores every unassigned variable, so
    // the seeded map covers the whole pickable set
    std::map<int, double> maxq;
    for (int var = 1; var <= nvars; ++var) {
      const double mag = 0.05 + 9.95 * rng.unit();
      maxq[var] = negative ? -mag : mag;
    }

    int argmax_var = 0;
    try {
      argmax_var = q_activity_argmax_check(maxq);
    } catch (const std::exception& e) {
      detail << "  single-sign map rejected at round " << round << ": "
             << e.what() << "\n";
      return false;
    }
    int direct = maxq.begin()->first;
    for (const auto& [var, m] : maxq)
      if (m > maxq.at(direct)) direct = var;
    if (argmax_var != direct) {
      detail << "  argmax check disagreed at round " << round << "\n";
      return false;
    }

    // seeding an actual solver must surface that variable first
    Solver s(Formula(nvars, {}));
    s.seed_activities(q_activity_scores(maxq));
    if (s.vsids_pick().var() != argmax_var) {
      detail << "  first pick != argmax at round " << round << "\n";
      return false;
    }

    std::map<int, double> mixed = maxq;
    mixed[nvars + 1] = negative ? 1.0 : -1.0;
    try {
      q_activity_argmax_check(mixed);
      detail << "  mixed-sign map not flagged at round " << round << "\n";
      return false;
    } catch (const MixedSignQ&) {
    }
  }
  return true;
}

// --- 9: harness determinism and the exact CSV header ---

bool criterion_harness() {
  if (std::string(kCsvHeader) !=
      "instance,strategy,trial,status,wall_time_s,decisions,conflicts,"
      "propagations,model_invocations,model_decisions,released_at") {
    detail << "  csv header drifted\n";
    return false;
  }

  BenchmarkSpec spec;
  spec.items = make_sr_dataset(15, 6, 900);
  for (auto& item : make_3sat_dataset(12, 50, 2, 910))
    spec.items.push_back(std::move(item));
  spec.strategies = {parse_strategy("vsids"), parse_strategy("fixed:2"),
                     parse_strategy("pool:k=5,r=2")};
  spec.trials = 2;
  spec.sat_weights = random_init(tiny_hyper(true), RngSeed{91});

  const BenchRun a = run_benchmark(spec);
  const BenchRun b = run_benchmark(spec);
  if (a.records.size() != b.records.size()) return false;
  for (size_t i = 0; i < a.records.size(); ++i) {
    const RunRecord& x = a.records[i];
    const RunRecord& y = b.records[i];
    if (x.instance != y.instance || x.strategy != y.strategy ||
        x.status != y.status || x.decisions != y.decisions ||
        x.conflicts != y.conflicts || x.propagations != y.propagations ||
        x.model_invocations != y.model_invocations ||
        x.model_decisions != y.model_decisions || x.released_at != y.released_at) {
      detail << "  record " << i << " differs between identical runs\n";
      return false;
    }
  }

  const std::string csv = emit_report(a.records, ReportFormat::csv);
  if (csv.substr(0, csv.find('\n')) != std::string(kCsvHeader)) {
    detail << "  emitted csv header differs\n";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  report(1, "solver status matches the truth-table oracle on 1000 formulas",
         criterion_solver_oracle());
  report(2, "SR(40) twins solve UNSAT/SAT and clause lengths average 4.2",
         criterion_sr_pairs());
  report(3, "makespan search matches the exhaustive scheduler on 70 instances",
         criterion_ossp_oracle());
  report(4, "operation graphs have j*m vertices and (p, 1, T) initial labels",
         criterion_op_graph());
  report(5, "policy net: equivariant, deterministic, exact round-trip (100 pairs)",
         criterion_gnn());
  report(6, "handoff strategies respect their model budgets on SR(50)",
         criterion_budgets());
  report(7, "SAT/UNSAT status is identical across strategies and restarts",
         criterion_neutrality());
  report(8, "q-activity seeding preserves the argmax on 1000 Q maps",
         criterion_q_activity());
  report(9, "benchmark runs reproduce exactly and the CSV header is stable",
         criterion_harness());
  return failures;
}

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nbsat/generators.hpp"
#include "nbsat/handoff.hpp"
#include "nbsat/ossp.hpp"
#include "nbsat/solver.hpp"

namespace nbsat {

// One (instance, strategy, trial) measurement. Timeouts are data: the run
// keeps its counters and the status says TIMEOUT.
struct RunRecord {
  std::string instance;
  std::string strategy;
  int trial = 1;
  std::string status;  // SAT, UNSAT, TIMEOUT
  double wall_time_s = 0.0;
  long long decisions = 0;
  long long conflicts = 0;
  long long propagations = 0;
  long long model_invocations = 0;
  long long model_decisions = 0;
  std::optional<long long> released_at;
};

struct ReportRow {
  std::string dataset;
  std::string strategy;
  long long runs = 0;
  long long timeouts = 0;
  double mean_time_s = 0.0;     // over completed runs
  double mean_decisions = 0.0;  // over completed runs
};

struct Report {
  std::vector<ReportRow> rows;
};

// An instance the harness can run: always a CNF formula, plus the scheduling
// view when the formula encodes an operation-ordering problem.
struct BenchItem {
  std::string id;  // "<dataset>/<name>"
  Formula formula;
  std::optional<OsspInstance> ossp;
  std::optional<CbVarMap> varmap;
};

struct BenchmarkSpec {
  std::vector<BenchItem> items;
  std::vector<Strategy> strategies;
  int trials = 3;
  double timeout_s = 60.0;
  bool restarts = true;
  std::optional<PolicyWeights> sat_weights;
  std::optional<PolicyWeights> ossp_weights;
  int jobs = 1;
};

inline std::string dataset_of(const std::string& instance_id) {
  const size_t slash = instance_id.find('/');
  return slash == std::string::npos ? instance_id : instance_id.substr(0, slash);
}

inline Report aggregate(const std::vector<RunRecord>& records) {
  struct Acc {
    long long runs = 0, timeouts = 0;
    double time_sum = 0.0;
    long long decision_sum = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const RunRecord& r : records) {
    Acc& a = groups[{dataset_of(r.instance), r.strategy}];
    ++a.runs;
    if (r.status == "TIMEOUT") {
      ++a.timeouts;
    } else {
      a.time_sum += r.wall_time_s;
      a.decision_sum += r.decisions;
    }
  }
  Report rep;
  for (const auto& [key, a] : groups) {
    ReportRow row;
    row.dataset = key.first;
    row.strategy = key.second;
    row.runs = a.runs;
    row.timeouts = a.timeouts;
    const long long done = a.runs - a.timeouts;
    if (done > 0) {
      row.mean_time_s = a.time_sum / static_cast<double>(done);
      row.mean_decisions =
          static_cast<double>(a.decision_sum) / static_cast<double>(done);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

enum class ReportFormat { csv, table };

inline const char* kCsvHeader =
    "instance,strategy,trial,status,wall_time_s,decisions,conflicts,"
    "propagations,model_invocations,model_decisions,released_at";

inline std::string emit_report(const std::vector<RunRecord>& records,
                               ReportFormat format) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    out << kCsvHeader << '\n';
    for (const RunRecord& r : records) {
      out << r.instance << ',' << r.strategy << ',' << r.trial << ','
          << r.status << ',' << std::fixed << std::setprecision(6)
          << r.wall_time_s << std::defaultfloat << ',' << r.decisions << ','
          << r.conflicts << ',' << r.propagations << ','
          << r.model_invocations << ',' << r.model_decisions << ',';
      if (r.released_at)
        out << *r.released_at;
      else
        out << "never";
      out << '\n';
    }
    return out.str();
  }
  const Report rep = aggregate(records);
  std::vector<std::array<std::string, 6>> cells;
  cells.push_back({"dataset", "strategy", "runs", "timeouts", "mean_time_s",
                   "mean_decisions"});
  for (const ReportRow& row : rep.rows) {
    std::ostringstream t, d;
    const bool any_done = row.runs > row.timeouts;
    t << std::fixed << std::setprecision(4) << row.mean_time_s;
    d << std::fixed << std::setprecision(1) << row.mean_decisions;
    cells.push_back({row.dataset, row.strategy, std::to_string(row.runs),
                     std::to_string(row.timeouts), any_done ? t.str() : "-",
                     any_done ? d.str() : "-"});
  }
  std::array<size_t, 6> width{};
  for (const auto& row : cells)
    for (size_t c = 0; c < 6; ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto& row : cells) {
    for (size_t c = 0; c < 6; ++c) {
      out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      out << (c + 1 == 6 ? "" : "  ");
    }
    out << '\n';
  }
  return out.str();
}

namespace detail {

inline RunRecord run_one(const BenchmarkSpec& spec, const BenchItem& item,
                         const Strategy& strategy, int trial) {
  SolverConfig cfg;
  cfg.restarts_enabled = spec.restarts;
  if (spec.timeout_s > 0) cfg.time_limit_s = spec.timeout_s;
  Solver solver(item.formula, cfg);

  std::optional<HandoffController> controller;
  if (!strategy.requires_model()) {
    controller.emplace(strategy);
  } else if (item.ossp) {
    if (!spec.ossp_weights)
      throw std::invalid_argument("strategy '" + strategy.canonical() +
                                  "' needs scheduling-graph weights");
    controller.emplace(strategy, *spec.ossp_weights, *item.ossp, *item.varmap);
  } else {
    if (!spec.sat_weights)
      throw std::invalid_argument("strategy '" + strategy.canonical() +
                                  "' needs formula-graph weights");
    controller.emplace(strategy, *spec.sat_weights);
  }

  RunRecord rec;
  rec.instance = item.id;
  rec.strategy = strategy.canonical();
  rec.trial = trial;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const SolveResult res = solver.solve(controller->oracle());
    rec.status = res.status == Status::Sat ? "SAT" : "UNSAT";
  } catch (const SolveTimeout&) {
    rec.status = "TIMEOUT";
  }
  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  const auto stats = solver.stats_map();
  rec.decisions = stats.at("decisions");
  rec.conflicts = stats.at("conflicts");
  rec.propagations = stats.at("propagations");
  const ControllerStats cs = controller->stats();
  rec.model_invocations = cs.model_invocations;
  rec.model_decisions = cs.model_decisions;
  rec.released_at = cs.released_at;
  return rec;
}

}  // namespace detail

struct BenchRun {
  std::vector<RunRecord> records;
  Report report;
};

// Runs the full (instance × strategy × trial) matrix. Parallelism is across
// tasks only; records land at fixed positions so output order never depends
// on scheduling.
inline BenchRun run_benchmark(const BenchmarkSpec& spec) {
  if (spec.items.empty()) throw std::invalid_argument("run_benchmark: no instances");
  if (spec.strategies.empty())
    throw std::invalid_argument("run_benchmark: no strategies");
  if (spec.trials < 1) throw std::invalid_argument("run_benchmark: trials must be >= 1");
  for (const Strategy& s : spec.strategies) s.validate();

  struct Task {
    const BenchItem* item;
    const Strategy* strategy;
    int trial;
  };
  std::vector<Task> tasks;
  tasks.reserve(spec.items.size() * spec.strategies.size() *
                static_cast<size_t>(spec.trials));
  for (const BenchItem& item : spec.items)
    for (const Strategy& strategy : spec.strategies)
      for (int t = 1; t <= spec.trials; ++t)
        tasks.push_back(Task{&item, &strategy, t});

  BenchRun run;
  run.records.resize(tasks.size());
  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < tasks.size(); ++i)
      run.records[i] = detail::run_one(spec, *tasks[i].item,
                                       *tasks[i].strategy, tasks[i].trial);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            run.records[i] = detail::run_one(spec, *tasks[i].item,
                                             *tasks[i].strategy, tasks[i].trial);
          }
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  run.report = aggregate(run.records);
  return run;
}

// --- dataset construction ---

// "sr:<n>:<count>:<seed>": `count` instances, each from its own twin pair
// seeded seed+i, alternating the unsatisfiable and satisfiable twin.
inline std::vector<BenchItem> make_sr_dataset(int n, int count,
                                              std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sr dataset: count must be >= 1");
  std::vector<BenchItem> items;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    SrPair pair = gen_sr_pair(n, RngSeed{s});
    const bool take_unsat = i % 2 == 0;
    BenchItem item;
    item.id = "sr" + std::to_string(n) + "/" + std::to_string(s) +
              (take_unsat ? "-unsat" : "-sat");
    item.formula = take_unsat ? std::move(pair.unsat) : std::move(pair.sat);
    items.push_back(std::move(item));
  }
  return items;
}

inline std::vector<BenchItem> make_3sat_dataset(int nvars, int nclauses,
                                                int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("3sat dataset: count must be >= 1");
  std::vector<BenchItem> items;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    BenchItem item;
    item.id = "3sat" + std::to_string(nvars) + "x" + std::to_string(nclauses) +
              "/" + std::to_string(s);
    item.formula = gen_random_3sat(nvars, nclauses, RngSeed{s});
    items.push_back(std::move(item));
  }
  return items;
}

inline std::vector<BenchItem> make_color_dataset(int nvertices, int nedges,
                                                 int ncolors, int count,
                                                 std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("color dataset: count must be >= 1");
  std::vector<BenchItem> items;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    BenchItem item;
    item.id = "color" + std::to_string(nvertices) + "-" +
              std::to_string(nedges) + "-" + std::to_string(ncolors) + "/" +
              std::to_string(s);
    item.formula = gen_coloring(nvertices, nedges, ncolors, RngSeed{s});
    items.push_back(std::move(item));
  }
  return items;
}

// Linear horizon probes from the load bound up to the optimum, so every
// dataset carries both UNSAT horizons and the first SAT one.
inline std::vector<BenchItem> make_ossp_items(const OsspInstance& inst,
                                              const std::string& prefix,
                                              const std::string& name,
                                              const SolverConfig& cfg = {}) {
  const int lb = lower_bound(inst);
  const int opt = solve_makespan(inst, cfg).makespan;
  std::vector<BenchItem> items;
  for (int t = lb; t <= opt; ++t) {
    CbEncoding enc = encode_crawford_baker(inst, t);
    BenchItem item;
    item.id = prefix + "/" + name + "@T=" + std::to_string(t);
    item.formula = std::move(enc.formula);
    item.ossp = inst;
    item.varmap = std::move(enc.varmap);
    items.push_back(std::move(item));
  }
  return items;
}

inline std::vector<BenchItem> make_ossp_dataset(int jobs, int machines,
                                                int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("ossp dataset: count must be >= 1");
  const std::string prefix =
      "ossp" + std::to_string(jobs) + "x" + std::to_string(machines);
  std::vector<BenchItem> items;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const OsspInstance inst = gen_taillard_like(jobs, machines, RngSeed{s});
    auto probe = make_ossp_items(inst, prefix, std::to_string(s));
    for (auto& item : probe) items.push_back(std::move(item));
  }
  return items;
}

// "sr:40:10:7", "3sat:50:218:1", "color:10:15:3:1", "ossp:3x3:2:7"
inline std::vector<BenchItem> make_dataset(const std::string& descriptor) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (pos <= descriptor.size()) {
    size_t colon = descriptor.find(':', pos);
    if (colon == std::string::npos) colon = descriptor.size();
    parts.push_back(descriptor.substr(pos, colon - pos));
    pos = colon + 1;
  }
  const auto field = [&](const std::string& tok, const std::string& what) {
    try {
      return detail::parse_ll(tok, what);
    } catch (const StrategyParseError& err) {
      throw std::invalid_argument("generator '" + descriptor + "': " + err.what());
    }
  };
  const auto arg = [&](size_t i) -> long long {
    if (i >= parts.size())
      throw std::invalid_argument("generator '" + descriptor + "': missing field");
    return field(parts[i], "generator field");
  };
  const auto expect_fields = [&](size_t n) {
    if (parts.size() != n)
      throw std::invalid_argument("generator '" + descriptor +
                                  "': wrong number of fields");
  };
  if (parts.empty()) throw std::invalid_argument("empty generator descriptor");
  if (parts[0] == "sr") {
    expect_fields(4);
    return make_sr_dataset(static_cast<int>(arg(1)), static_cast<int>(arg(2)),
                           static_cast<std::uint64_t>(arg(3)));
  }
  if (parts[0] == "3sat") {
    expect_fields(5);
    return make_3sat_dataset(static_cast<int>(arg(1)), static_cast<int>(arg(2)),
                             static_cast<int>(arg(3)),
                             static_cast<std::uint64_t>(arg(4)));
  }
  if (parts[0] == "color") {
    expect_fields(6);
    return make_color_dataset(static_cast<int>(arg(1)), static_cast<int>(arg(2)),
                              static_cast<int>(arg(3)), static_cast<int>(arg(4)),
                              static_cast<std::uint64_t>(arg(5)));
  }
  if (parts[0] == "ossp") {
    expect_fields(4);
    const size_t x = parts[1].find('x');
    if (x == std::string::npos)
      throw std::invalid_argument("ossp generator needs <jobs>x<machines>");
    const int j = static_cast<int>(field(parts[1].substr(0, x), "jobs"));
    const int m = static_cast<int>(field(parts[1].substr(x + 1), "machines"));
    return make_ossp_dataset(j, m, static_cast<int>(arg(2)),
                             static_cast<std::uint64_t>(arg(3)));
  }
  throw std::invalid_argument("unknown generator '" + parts[0] + "'");
}

// Every .cnf/.dimacs file in the directory, sorted by filename.
inline std::vector<BenchItem> load_dataset_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw std::invalid_argument("dataset path is not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".cnf" || ext == ".dimacs") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::invalid_argument("no .cnf or .dimacs files in " + dir);
  const std::string prefix = fs::path(dir).filename().string();
  std::vector<BenchItem> items;
  for (const fs::path& f : files) {
    std::ifstream in(f);
    if (!in) throw std::invalid_argument("cannot open " + f.string());
    BenchItem item;
    std::string name = prefix + "/" + f.filename().string();
    for (char& c : name)
      if (c == ',') c = '_';
    item.id = std::move(name);
    item.formula = parse_dimacs(in);
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace nbsat

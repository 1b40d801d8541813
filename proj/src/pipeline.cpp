#include "smpp/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "smpp/encoder.hpp"
#include "smpp/rng.hpp"

namespace smpp {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kSolvers{"exact", "exhaustive", "sa", "qaoa"};

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
}

SyntheticSpec parse_synthetic(const json& j, std::uint64_t& seed) {
  if (!j.is_object()) throw ConfigError("generate.synthetic must be an object");
  reject_unknown(j,
                 {"requests", "stereo_fraction", "binary_constraints", "ternary_constraints",
                  "with_capacity", "max_weight", "max_item_capacity", "zero_capacity_fraction",
                  "max_cameras_per_mono", "seed"},
                 "generate.synthetic");
  SyntheticSpec s;
  read_field(j, "requests", s.requests);
  read_field(j, "stereo_fraction", s.stereo_fraction);
  read_field(j, "binary_constraints", s.binary_constraints);
  read_field(j, "ternary_constraints", s.ternary_constraints);
  read_field(j, "with_capacity", s.with_capacity);
  read_field(j, "max_weight", s.max_weight);
  read_field(j, "max_item_capacity", s.max_item_capacity);
  read_field(j, "zero_capacity_fraction", s.zero_capacity_fraction);
  read_field(j, "max_cameras_per_mono", s.max_cameras_per_mono);
  read_field(j, "seed", seed);
  if (s.requests < 1) throw ConfigError("generate.synthetic.requests must be >= 1");
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Prepared {
  Instance inst;
  Qubo qubo;
  ExactResult exact;
};

double mean_of(const CellReport& c, bool best) {
  if (c.aggregate) return best ? c.aggregate->mean_best_ar : c.aggregate->mean_expected_ar;
  double sum = 0.0;
  for (const auto& r : c.runs) sum += best ? r.metrics.best_ar : r.metrics.expected_ar;
  return sum / static_cast<double>(c.runs.size());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (reads < 1) throw ConfigError("reads must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (max_layers < 1) throw ConfigError("max_layers must be >= 1");
  if (n_inits < 1) throw ConfigError("n_inits must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (penalty && !(*penalty > 0.0)) throw ConfigError("penalty must be positive");
  if (solvers.empty()) throw ConfigError("at least one solver is required");
  std::set<std::string> seen;
  for (const auto& s : solvers) {
    if (!kSolvers.count(s)) throw ConfigError("unknown solver '" + s + "'");
    if (!seen.insert(s).second) throw ConfigError("solver '" + s + "' listed twice");
  }
  if (!(qaoa_optimizer.tolerance > 0.0)) throw ConfigError("qaoa tolerance must be positive");
  try {
    sa.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"instances", "generate", "solvers", "reads", "runs", "max_layers", "n_inits",
                  "penalty", "master_seed", "sa", "qaoa", "node_budget", "workers"},
                 "config");

  auto resolve = [&](const std::string& p) {
    return base_dir.empty() || fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).string();
  };

  ExperimentConfig cfg;
  std::vector<std::string> paths;
  read_field(doc, "instances", paths);
  for (const auto& p : paths) cfg.instance_paths.push_back(resolve(p));

  if (auto it = doc.find("generate"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("generate must be an array");
    for (const auto& g : *it) {
      if (!g.is_object()) throw ConfigError("generate entries must be objects");
      reject_unknown(g, {"source", "synthetic", "target_requests", "with_capacity", "seed"},
                     "generate");
      GenerationSpec spec;
      read_field(g, "source", spec.source);
      if (!spec.source.empty()) spec.source = resolve(spec.source);
      if (auto s = g.find("synthetic"); s != g.end())
        spec.synthetic = parse_synthetic(*s, spec.synthetic_seed);
      else if (spec.source.empty())
        throw ConfigError("generate entry needs a source or a synthetic block");
      read_field(g, "target_requests", spec.reduction.target_requests);
      read_field(g, "with_capacity", spec.reduction.with_capacity);
      read_field(g, "seed", spec.reduction.seed);
      if (spec.source.empty()) spec.synthetic.with_capacity = spec.reduction.with_capacity;
      cfg.generate.push_back(spec);
    }
  }

  read_field(doc, "solvers", cfg.solvers);
  read_field(doc, "reads", cfg.reads);
  read_field(doc, "runs", cfg.runs);
  read_field(doc, "max_layers", cfg.max_layers);
  read_field(doc, "n_inits", cfg.n_inits);
  if (auto it = doc.find("penalty"); it != doc.end() && !it->is_null()) {
    double m = 0.0;
    read_field(doc, "penalty", m);
    cfg.penalty = m;
  }
  read_field(doc, "master_seed", cfg.master_seed);
  read_field(doc, "node_budget", cfg.node_budget);
  read_field(doc, "workers", cfg.workers);
  if (auto it = doc.find("sa"); it != doc.end()) {
    reject_unknown(*it, {"sweeps", "beta_start", "beta_end", "restarts_per_read"}, "sa");
    read_field(*it, "sweeps", cfg.sa.sweeps);
    read_field(*it, "beta_start", cfg.sa.beta_start);
    read_field(*it, "beta_end", cfg.sa.beta_end);
    read_field(*it, "restarts_per_read", cfg.sa.restarts_per_read);
  }
  if (auto it = doc.find("qaoa"); it != doc.end()) {
    reject_unknown(*it, {"tolerance", "max_evals", "initial_step"}, "qaoa");
    read_field(*it, "tolerance", cfg.qaoa_optimizer.tolerance);
    read_field(*it, "max_evals", cfg.qaoa_optimizer.max_evals);
    read_field(*it, "initial_step", cfg.qaoa_optimizer.initial_step);
  }
  if (cfg.instance_paths.empty() && cfg.generate.empty())
    throw ConfigError("config lists no instances and no generation specs");
  cfg.validate();
  return cfg;
}

bool ExperimentReport::any_failure() const {
  for (const auto& i : instances) {
    if (!i.error.empty()) return true;
    for (const auto& c : i.cells)
      if (!c.error.empty()) return true;
  }
  return false;
}

std::vector<std::string> report_columns(const ExperimentConfig& cfg) {
  std::vector<std::string> cols;
  for (const auto& s : cfg.solvers) {
    if (s == "qaoa") {
      cols.push_back("qaoa_l1");
      if (cfg.max_layers > 1) cols.push_back("qaoa_l" + std::to_string(cfg.max_layers));
    } else {
      cols.push_back(s);
    }
  }
  return cols;
}

SolveOutcome solve_cell(const Instance& inst, const Qubo& q, const std::string& solver,
                        const ExperimentConfig& cfg, std::uint64_t seed, double f_max) {
  SolveOutcome out;
  if (solver == "exact") {
    auto exact = solve_exact(inst, cfg.node_budget);
    const Bits bits =
        complete_slacks(inst, q, exact.best_assignment.flatten(VariableIndex(inst)));
    out.samples = make_sample_set(q, {bits}, "exact", seed);
  } else if (solver == "exhaustive") {
    auto best = solve_exhaustive(q);
    out.samples = make_sample_set(q, {best.bits}, "exhaustive", seed);
  } else if (solver == "sa") {
    out.samples = sample_sa(q, cfg.reads, cfg.sa, seed);
  } else if (solver == "qaoa") {
    ScheduleConfig sched;
    sched.max_layers = cfg.max_layers;
    sched.n_inits = cfg.n_inits;
    sched.reads = cfg.reads;
    sched.optimizer = cfg.qaoa_optimizer;
    sched.seed = seed;
    const std::size_t n = q.registry.n();
    auto score = [&](const SampleSet& s) { return run_metrics(inst, f_max, s, n).expected_ar; };
    out.layers = run_schedule(q, sched, score);
    out.samples = out.layers.back().samples;
  } else {
    throw std::invalid_argument("unknown solver '" + solver + "'");
  }
  return out;
}

ExperimentReport run_pipeline(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.columns = report_columns(cfg);
  report.reads = cfg.reads;
  report.runs = cfg.runs;
  report.master_seed = cfg.master_seed;

  // Instances: files first, then generated ones, in config order.
  std::vector<std::optional<Prepared>> prepared;
  auto prepare = [&](const std::string& label, auto&& make) {
    InstanceReport ir;
    ir.name = label;
    try {
      Prepared p{make(), {}, {}};
      ir.name = p.inst.name;
      ir.requests = static_cast<int>(p.inst.requests.size());
      p.exact = solve_exact(p.inst, cfg.node_budget);
      ir.f_max = p.exact.best_value;
      ir.proven_optimal = p.exact.proven_optimal;
      if (!(ir.f_max > 0.0)) throw std::invalid_argument("F_max is zero; AR undefined");
      p.qubo = encode(p.inst, cfg.penalty);
      ir.n = p.qubo.registry.n();
      ir.s = p.qubo.registry.s();
      prepared.emplace_back(std::move(p));
    } catch (const std::exception& e) {
      ir.error = e.what();
      prepared.emplace_back(std::nullopt);
    }
    report.instances.push_back(std::move(ir));
  };
  for (const auto& path : cfg.instance_paths) prepare(path, [&] { return load_instance(path); });
  for (std::size_t k = 0; k < cfg.generate.size(); ++k) {
    const auto& g = cfg.generate[k];
    prepare("generate[" + std::to_string(k) + "]", [&] {
      Instance src = g.source.empty() ? random_instance(g.synthetic, g.synthetic_seed)
                                      : load_instance(g.source);
      return reduce(src, g.reduction);
    });
  }

  struct Job {
    std::size_t inst, solver;
    int run;
  };
  struct Slot {
    std::vector<RunMetrics> metrics;  // one per column the solver fills
    std::uint64_t seed = 0;
    std::string error;
  };
  std::vector<Job> jobs;
  std::vector<std::vector<std::vector<Slot>>> slots(prepared.size());
  std::vector<std::vector<std::string>> notes(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    slots[i].resize(cfg.solvers.size(), std::vector<Slot>(cfg.runs));
    notes[i].resize(cfg.solvers.size());
    if (!prepared[i]) continue;
    for (std::size_t k = 0; k < cfg.solvers.size(); ++k) {
      const auto qubits = prepared[i]->qubo.registry.size();
      if (cfg.solvers[k] == "qaoa" && qubits > static_cast<std::size_t>(kMaxQaoaQubits)) {
        notes[i][k] = "skipped: " + std::to_string(qubits) + " qubits exceeds the simulator limit";
        continue;
      }
      for (int r = 0; r < cfg.runs; ++r) jobs.push_back({i, k, r});
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto [i, k, r] = jobs[j];
      auto& slot = slots[i][k][r];
      const auto& p = *prepared[i];
      const auto& solver = cfg.solvers[k];
      slot.seed = derive_seed(cfg.master_seed, {i, stable_hash(solver), static_cast<std::uint64_t>(r)});
      try {
        const auto n = p.qubo.registry.n();
        auto outcome = solve_cell(p.inst, p.qubo, solver, cfg, slot.seed, p.exact.best_value);
        if (solver == "qaoa") {
          slot.metrics.push_back(run_metrics(p.inst, p.exact.best_value, outcome.layers.front().samples, n));
          if (cfg.max_layers > 1)
            slot.metrics.push_back(run_metrics(p.inst, p.exact.best_value, outcome.layers.back().samples, n));
        } else {
          slot.metrics.push_back(run_metrics(p.inst, p.exact.best_value, outcome.samples, n));
        }
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < prepared.size(); ++i) {
    if (!prepared[i]) continue;
    auto& ir = report.instances[i];
    for (std::size_t k = 0; k < cfg.solvers.size(); ++k) {
      const bool qaoa = cfg.solvers[k] == "qaoa";
      const std::size_t width = qaoa && cfg.max_layers > 1 ? 2 : 1;
      std::string error;
      for (const auto& slot : slots[i][k])
        if (!slot.error.empty()) {
          error = slot.error;
          break;
        }
      for (std::size_t c = 0; c < width; ++c) {
        CellReport cell;
        cell.column = qaoa ? (c == 0 ? "qaoa_l1" : "qaoa_l" + std::to_string(cfg.max_layers))
                           : cfg.solvers[k];
        cell.note = notes[i][k];
        cell.error = error;
        if (error.empty() && cell.note.empty()) {
          std::vector<RunMetrics> ms;
          for (int r = 0; r < cfg.runs; ++r) {
            const auto& slot = slots[i][k][r];
            cell.runs.push_back({r, slot.seed, slot.metrics[c]});
            ms.push_back(slot.metrics[c]);
          }
          if (ms.size() >= 2) cell.aggregate = aggregate(ms);
        }
        ir.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

json report_to_json(const ExperimentReport& report) {
  json doc;
  doc["columns"] = report.columns;
  doc["reads"] = report.reads;
  doc["runs"] = report.runs;
  doc["master_seed"] = report.master_seed;
  doc["instances"] = json::array();
  for (const auto& i : report.instances) {
    json ij;
    ij["name"] = i.name;
    ij["requests"] = i.requests;
    ij["n"] = i.n;
    ij["s"] = i.s;
    ij["f_max"] = i.f_max;
    ij["proven_optimal"] = i.proven_optimal;
    ij["error"] = i.error;
    ij["cells"] = json::array();
    for (const auto& c : i.cells) {
      json cj;
      cj["column"] = c.column;
      cj["error"] = c.error;
      cj["note"] = c.note;
      cj["runs"] = json::array();
      for (const auto& r : c.runs)
        cj["runs"].push_back({{"run", r.run},
                              {"seed", r.seed},
                              {"expected_ar", r.metrics.expected_ar},
                              {"best_ar", r.metrics.best_ar},
                              {"feasible_fraction", r.metrics.feasible_fraction},
                              {"reads", r.metrics.reads}});
      if (c.aggregate)
        cj["aggregate"] = {{"runs", c.aggregate->runs},
                           {"mean_expected_ar", c.aggregate->mean_expected_ar},
                           {"mean_best_ar", c.aggregate->mean_best_ar},
                           {"ci95_expected", c.aggregate->ci95_expected},
                           {"ci95_best", c.aggregate->ci95_best}};
      else
        cj["aggregate"] = nullptr;
      ij["cells"].push_back(cj);
    }
    doc["instances"].push_back(ij);
  }
  return doc;
}

ExperimentReport report_from_json(const json& doc) {
  try {
    ExperimentReport report;
    report.columns = doc.at("columns").get<std::vector<std::string>>();
    report.reads = doc.at("reads").get<int>();
    report.runs = doc.at("runs").get<int>();
    report.master_seed = doc.at("master_seed").get<std::uint64_t>();
    for (const auto& ij : doc.at("instances")) {
      InstanceReport i;
      i.name = ij.at("name").get<std::string>();
      i.requests = ij.at("requests").get<int>();
      i.n = ij.at("n").get<std::size_t>();
      i.s = ij.at("s").get<std::size_t>();
      i.f_max = ij.at("f_max").get<double>();
      i.proven_optimal = ij.at("proven_optimal").get<bool>();
      i.error = ij.at("error").get<std::string>();
      for (const auto& cj : ij.at("cells")) {
        CellReport c;
        c.column = cj.at("column").get<std::string>();
        c.error = cj.at("error").get<std::string>();
        c.note = cj.at("note").get<std::string>();
        for (const auto& rj : cj.at("runs")) {
          RunRecord r;
          r.run = rj.at("run").get<int>();
          r.seed = rj.at("seed").get<std::uint64_t>();
          r.metrics.expected_ar = rj.at("expected_ar").get<double>();
          r.metrics.best_ar = rj.at("best_ar").get<double>();
          r.metrics.feasible_fraction = rj.at("feasible_fraction").get<double>();
          r.metrics.reads = rj.at("reads").get<std::int64_t>();
          c.runs.push_back(r);
        }
        if (const auto& aj = cj.at("aggregate"); !aj.is_null())
          c.aggregate = AggregateMetrics{aj.at("mean_expected_ar").get<double>(),
                                         aj.at("mean_best_ar").get<double>(),
                                         aj.at("ci95_expected").get<double>(),
                                         aj.at("ci95_best").get<double>(),
                                         aj.at("runs").get<int>()};
        i.cells.push_back(std::move(c));
      }
      report.instances.push_back(std::move(i));
    }
    return report;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string results_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "instance,solver,run,expected_ar,best_ar,ci95_expected,ci95_best\n";
  for (const auto& i : report.instances)
    for (const auto& c : i.cells) {
      for (const auto& r : c.runs)
        out << csv_field(i.name) << ',' << c.column << ',' << r.run << ','
            << fmt(r.metrics.expected_ar) << ',' << fmt(r.metrics.best_ar) << ",,\n";
      if (c.aggregate)
        out << csv_field(i.name) << ',' << c.column << ",mean," << fmt(c.aggregate->mean_expected_ar)
            << ',' << fmt(c.aggregate->mean_best_ar) << ',' << fmt(c.aggregate->ci95_expected) << ','
            << fmt(c.aggregate->ci95_best) << '\n';
    }
  return out.str();
}

PlotData emit_plot_data(const ExperimentReport& report) {
  std::vector<const InstanceReport*> rows;
  for (const auto& i : report.instances)
    if (i.error.empty()) rows.push_back(&i);
  std::stable_sort(rows.begin(), rows.end(), [](const InstanceReport* a, const InstanceReport* b) {
    return a->requests < b->requests;
  });

  auto table = [&](bool best) {
    std::ostringstream out;
    out << "instance,requests";
    for (const auto& c : report.columns) out << ',' << c;
    for (const auto& c : report.columns) out << ',' << c << "_ci95";
    out << '\n';
    for (const auto* i : rows) {
      out << csv_field(i->name) << ',' << i->requests;
      std::vector<std::string> values, cis;
      for (const auto& col : report.columns) {
        auto it = std::find_if(i->cells.begin(), i->cells.end(),
                               [&](const CellReport& c) { return c.column == col; });
        if (it == i->cells.end() || it->runs.empty()) {
          values.emplace_back();
          cis.emplace_back();
          continue;
        }
        values.push_back(fmt(mean_of(*it, best)));
        cis.push_back(it->aggregate ? fmt(best ? it->aggregate->ci95_best
                                               : it->aggregate->ci95_expected)
                                    : "");
      }
      for (const auto& v : values) out << ',' << v;
      for (const auto& v : cis) out << ',' << v;
      out << '\n';
    }
    return out.str();
  };
  return {table(false), table(true)};
}

void write_report_files(const ExperimentReport& report, const std::string& dir) {
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    out << content;
  };
  write("report.json", report_to_json(report).dump(2) + "\n");
  write("results.csv", results_csv(report));
  auto plots = emit_plot_data(report);
  write("expected_ar.csv", plots.expected_csv);
  write("best_ar.csv", plots.best_csv);
}

}  // namespace smpp

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "smpp/classical.hpp"
#include "smpp/evaluation.hpp"
#include "smpp/qaoa.hpp"
#include "smpp/reductor.hpp"
#include "smpp/sampler.hpp"
#include "smpp/synthetic.hpp"

namespace smpp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One reduced instance: either reduce a file, or reduce a synthetic source.
struct GenerationSpec {
  std::string source;                   // instance file; empty means synthetic
  SyntheticSpec synthetic;
  std::uint64_t synthetic_seed = 0;
  ReductionSpec reduction;
};

struct ExperimentConfig {
  std::vector<std::string> instance_paths;
  std::vector<GenerationSpec> generate;
  std::vector<std::string> solvers{"exact", "sa", "qaoa"};
  int reads = 2000;
  int runs = 5;
  int max_layers = 10;
  int n_inits = 5;
  std::optional<double> penalty;
  std::uint64_t master_seed = 0;
  AnnealSchedule sa;
  OptimizerConfig qaoa_optimizer;
  std::int64_t node_budget = kDefaultNodeBudget;
  int workers = 1;

  void validate() const;
};

/// Parses the JSON config; relative instance paths resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = "");

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

/// One report column for one instance. QAOA fills two columns (first and
/// last layer) from the same runs.
struct CellReport {
  std::string column;
  std::vector<RunRecord> runs;
  std::optional<AggregateMetrics> aggregate;
  std::string error;
  std::string note;
};

struct InstanceReport {
  std::string name;
  int requests = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  double f_max = 0.0;
  bool proven_optimal = false;
  std::vector<CellReport> cells;
  std::string error;  // set when the instance failed entirely
};

struct ExperimentReport {
  std::vector<std::string> columns;
  int reads = 0;
  int runs = 0;
  std::uint64_t master_seed = 0;
  std::vector<InstanceReport> instances;

  bool any_failure() const;
};

/// Report column names in config order; "qaoa" expands to qaoa_l1 and
/// qaoa_l<max_layers>.
std::vector<std::string> report_columns(const ExperimentConfig& cfg);

ExperimentReport run_pipeline(const ExperimentConfig& cfg);

/// Metrics for a single (instance, solver) run: solver is one of exact,
/// exhaustive, sa, qaoa. QAOA returns one entry per layer.
struct SolveOutcome {
  SampleSet samples;
  std::vector<LayerResult> layers;  // qaoa only
};
SolveOutcome solve_cell(const Instance& inst, const Qubo& q, const std::string& solver,
                        const ExperimentConfig& cfg, std::uint64_t seed, double f_max);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& doc);

/// Flat per-run table plus aggregate rows ("mean") carrying CI half-widths.
std::string results_csv(const ExperimentReport& report);

struct PlotData {
  std::string expected_csv;
  std::string best_csv;
};

/// Instances as rows (ascending request count), columns in report order,
/// followed by one CI half-width column per report column.
PlotData emit_plot_data(const ExperimentReport& report);

/// Writes report.json, results.csv, expected_ar.csv and best_ar.csv.
void write_report_files(const ExperimentReport& report, const std::string& dir);

}  // namespace smpp

// smpp: satellite mission planning benchmark tool.
//
//   smpp generate  reduce an instance file (or a synthetic source) to N requests
//   smpp encode    instance -> QUBO JSON
//   smpp solve     run one solver once on one instance, print samples + metrics
//   smpp run       full experiment from a JSON config
//   smpp report    rebuild plot CSVs from a report.json
//
// Exit codes: 0 success, 1 partial failure, 2 configuration/input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "smpp/encoder.hpp"
#include "smpp/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw smpp::ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite mission planning: exact, annealing and QAOA benchmarks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Reduce an instance to a target request count");
  std::string gen_source, gen_out;
  smpp::ReductionSpec reduction;
  smpp::SyntheticSpec synthetic;
  std::uint64_t synthetic_seed = 0;
  int synthetic_requests = 0;
  gen->add_option("--source", gen_source, "Source instance JSON");
  gen->add_option("--synthetic-requests", synthetic_requests,
                  "Draw a synthetic source with this many requests instead of --source");
  gen->add_option("--synthetic-seed", synthetic_seed, "Seed for the synthetic source");
  gen->add_option("--pairs", synthetic.binary_constraints, "Synthetic forbidden pairs");
  gen->add_option("--triples", synthetic.ternary_constraints, "Synthetic forbidden triples");
  gen->add_option("--stereo-fraction", synthetic.stereo_fraction, "Synthetic stereo fraction");
  gen->add_option("--target", reduction.target_requests, "Requests in the output")->required();
  gen->add_flag("--capacity", reduction.with_capacity, "Emit the capacity variant");
  gen->add_option("--seed", reduction.seed, "Reduction seed");
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // encode
  auto* enc = app.add_subcommand("encode", "Encode an instance as a QUBO");
  std::string enc_instance, enc_out;
  std::optional<double> enc_penalty;
  enc->add_option("--instance", enc_instance, "Instance JSON")->required();
  enc->add_option("--penalty", enc_penalty, "Penalty magnitude M (default sum w + 1)");
  enc->add_option("-o,--out", enc_out, "Output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver once on one instance");
  std::string solve_instance, solve_solver = "sa", solve_out;
  smpp::ExperimentConfig solve_cfg;
  std::uint64_t solve_seed = 0;
  solve->add_option("--instance", solve_instance, "Instance JSON")->required();
  solve->add_option("--solver", solve_solver, "exact | exhaustive | sa | qaoa")
      ->check(CLI::IsMember({"exact", "exhaustive", "sa", "qaoa"}));
  solve->add_option("--reads", solve_cfg.reads, "Samples per run");
  solve->add_option("--seed", solve_seed, "Run seed");
  solve->add_option("--layers", solve_cfg.max_layers, "QAOA maximum depth");
  solve->add_option("--inits", solve_cfg.n_inits, "QAOA layer-1 random starts");
  solve->add_option("--sweeps", solve_cfg.sa.sweeps, "SA sweeps per read");
  solve->add_option("--penalty", solve_cfg.penalty, "Penalty magnitude M");
  solve->add_option("-o,--out", solve_out, "Output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "Run a full experiment");
  std::string run_config, run_out = "results";
  std::optional<int> o_reads, o_runs, o_layers, o_inits, o_workers;
  std::optional<std::uint64_t> o_seed;
  run->add_option("--config", run_config, "Experiment config JSON")->required();
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--reads", o_reads, "Override reads");
  run->add_option("--runs", o_runs, "Override runs");
  run->add_option("--layers", o_layers, "Override max_layers");
  run->add_option("--inits", o_inits, "Override n_inits");
  run->add_option("--seed", o_seed, "Override master_seed");
  run->add_option("--workers", o_workers, "Worker threads (else $SMPP_WORKERS, else config)");

  // report
  auto* rep = app.add_subcommand("report", "Emit plot CSVs from a report.json");
  std::string rep_in, rep_out = ".";
  rep->add_option("--report", rep_in, "report.json from `run`")->required();
  rep->add_option("--out", rep_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) {
      smpp::Instance src;
      if (!gen_source.empty()) {
        src = smpp::load_instance(gen_source);
      } else if (synthetic_requests > 0) {
        synthetic.requests = synthetic_requests;
        synthetic.with_capacity = reduction.with_capacity;
        src = smpp::random_instance(synthetic, synthetic_seed);
      } else {
        throw smpp::ConfigError("generate needs --source or --synthetic-requests");
      }
      emit(smpp::serialize_instance(smpp::reduce(src, reduction)), gen_out);
      return kOk;
    }

    if (*enc) {
      const auto inst = smpp::load_instance(enc_instance);
      const auto q = smpp::encode(inst, enc_penalty);
      for (const auto& note : q.notes) std::cerr << "warning: " << note << '\n';
      emit(smpp::qubo_to_json(q), enc_out);
      return kOk;
    }

    if (*solve) {
      solve_cfg.solvers = {solve_solver};
      solve_cfg.validate();
      const auto inst = smpp::load_instance(solve_instance);
      const auto q = smpp::encode(inst, solve_cfg.penalty);
      const auto exact = smpp::solve_exact(inst, solve_cfg.node_budget);
      auto outcome = smpp::solve_cell(inst, q, solve_solver, solve_cfg, solve_seed, exact.best_value);
      nlohmann::json doc;
      doc["instance"] = inst.name;
      doc["f_max"] = exact.best_value;
      doc["n"] = q.registry.n();
      doc["s"] = q.registry.s();
      if (outcome.layers.empty()) {
        doc["samples"] = smpp::to_json(outcome.samples);
      } else {
        doc["layers"] = nlohmann::json::array();
        for (const auto& l : outcome.layers) doc["layers"].push_back(smpp::to_json(l));
      }
      if (exact.best_value > 0.0) {
        auto m = smpp::run_metrics(inst, exact.best_value, outcome.samples, q.registry.n());
        doc["metrics"] = {{"expected_ar", m.expected_ar},
                          {"best_ar", m.best_ar},
                          {"feasible_fraction", m.feasible_fraction},
                          {"reads", m.reads}};
      }
      emit(doc.dump(2) + "\n", solve_out);
      return kOk;
    }

    if (*run) {
      auto cfg = smpp::parse_config(read_file(run_config),
                                    std::filesystem::path(run_config).parent_path().string());
      if (const char* env = std::getenv("SMPP_WORKERS")) cfg.workers = std::atoi(env);
      if (o_reads) cfg.reads = *o_reads;
      if (o_runs) cfg.runs = *o_runs;
      if (o_layers) cfg.max_layers = *o_layers;
      if (o_inits) cfg.n_inits = *o_inits;
      if (o_seed) cfg.master_seed = *o_seed;
      if (o_workers) cfg.workers = *o_workers;
      cfg.validate();
      const auto report = smpp::run_pipeline(cfg);
      smpp::write_report_files(report, run_out);
      for (const auto& i : report.instances) {
        if (!i.error.empty()) std::cerr << i.name << ": " << i.error << '\n';
        for (const auto& c : i.cells) {
          if (!c.error.empty()) std::cerr << i.name << " / " << c.column << ": " << c.error << '\n';
          if (!c.note.empty()) std::cerr << i.name << " / " << c.column << ": " << c.note << '\n';
        }
      }
      return report.any_failure() ? kPartial : kOk;
    }

    if (*rep) {
      const auto report = smpp::report_from_json(nlohmann::json::parse(read_file(rep_in)));
      const auto plots = smpp::emit_plot_data(report);
      std::filesystem::create_directories(rep_out);
      emit(plots.expected_csv, (std::filesystem::path(rep_out) / "expected_ar.csv").string());
      emit(plots.best_csv, (std::filesystem::path(rep_out) / "best_ar.csv").string());
      return kOk;
    }
  } catch (const smpp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const smpp::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPartial;
  }
  return kOk;
}

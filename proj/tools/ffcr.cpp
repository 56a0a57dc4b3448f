// Command-line harness: single clock-recovery runs and CFO sweeps with
// CSV/JSON reporting.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffcr/experiment.hpp"

namespace {

// Optional JSON config file; flags given on the command line override it.
void load_config_file(const std::string& path, ffcr::ExperimentConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
  nlohmann::json j;
  is >> j;

  if (j.contains("stimulus")) {
    const auto& s = j["stimulus"];
    auto& sc = cfg.stimulus;
    if (s.contains("symbol_rate_hz")) sc.symbol_rate_hz = s["symbol_rate_hz"];
    if (s.contains("cfo_ppm")) sc.cfo_ppm = s["cfo_ppm"];
    if (s.contains("snr_db")) sc.snr_db = s["snr_db"];
    if (s.contains("n_symbols")) sc.n_symbols = s["n_symbols"];
    if (s.contains("seed")) sc.seed = s["seed"];
    if (s.contains("rolloff")) sc.rolloff = s["rolloff"];
    if (s.contains("dense_oversampling")) sc.dense_oversampling = s["dense_oversampling"];
    if (s.contains("adc_bits")) sc.adc_bits = s["adc_bits"];
    if (s.contains("jitter_rms_ui")) sc.jitter_rms_ui = s["jitter_rms_ui"];
    if (s.contains("initial_phase")) sc.initial_phase = s["initial_phase"];
  }
  if (j.contains("pipeline")) {
    const auto& p = j["pipeline"];
    auto& pc = cfg.pipeline;
    if (p.contains("ma_cycles")) pc.ma_cycles = p["ma_cycles"];
    if (p.contains("data_delay_cycles")) pc.data_delay_cycles = p["data_delay_cycles"];
    if (p.contains("eb_capacity")) pc.eb.capacity = p["eb_capacity"];
    if (p.contains("eb_start_fill")) pc.eb.start_fill = p["eb_start_fill"];
  }
  if (j.contains("workers")) cfg.workers = j["workers"];
}

void add_stimulus_flags(CLI::App* cmd, ffcr::ExperimentConfig& cfg) {
  cmd->add_option("--symbols", cfg.stimulus.n_symbols, "Number of transmitted symbols");
  cmd->add_option("--snr-db", cfg.stimulus.snr_db, "AWGN level; omit for noiseless");
  cmd->add_option("--seed", cfg.stimulus.seed, "PRBS / noise seed");
  cmd->add_option("--rolloff", cfg.stimulus.rolloff, "Raised-cosine roll-off");
  cmd->add_option("--symbol-rate", cfg.stimulus.symbol_rate_hz, "Symbol rate in Hz");
  cmd->add_option("--jitter-rms", cfg.stimulus.jitter_rms_ui,
                  "Per-sample timing jitter, unit intervals");
  cmd->add_option("--ma-cycles", cfg.pipeline.ma_cycles, "Moving-average length");
  cmd->add_option("--data-delay", cfg.pipeline.data_delay_cycles,
                  "Data-path delay in cycles");
}

int print_fault(const ffcr::RunResult& r) {
  std::cerr << "run at " << r.cfo_ppm << " ppm faulted: " << r.status << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"All-digital feedforward clock recovery testbench"};
  app.require_subcommand(1);

  ffcr::ExperimentConfig cfg;
  std::string config_path;

  // Pre-scan for --config so explicit flags can override file values.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      config_path = argv[i + 1];
      break;
    }
  }
  try {
    if (!config_path.empty()) load_config_file(config_path, cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one CFO point");
  double cfo_ppm = cfg.stimulus.cfo_ppm;
  std::string trace_out, json_out;
  run_cmd->add_option("--config", config_path, "JSON config file (flags override it)");
  run_cmd->add_option("--cfo-ppm", cfo_ppm, "Clock frequency offset in ppm");
  run_cmd->add_option("--trace-out", trace_out, "Per-cycle trace CSV path");
  run_cmd->add_option("--json-out", json_out, "JSON result record path");
  add_stimulus_flags(run_cmd, cfg);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a CFO sweep");
  double from = -400.0, to = 400.0, step = 100.0;
  std::string list_arg, csv_out;
  sweep_cmd->add_option("--config", config_path, "JSON config file (flags override it)");
  sweep_cmd->add_option("--from", from, "Sweep start, ppm");
  sweep_cmd->add_option("--to", to, "Sweep end, ppm (inclusive)");
  sweep_cmd->add_option("--step", step, "Sweep step, ppm");
  sweep_cmd->add_option("--list", list_arg, "Comma-separated ppm values (overrides range)");
  sweep_cmd->add_option("--workers", cfg.workers, "Parallel runs");
  sweep_cmd->add_option("--csv-out", csv_out, "Sweep results CSV path");
  add_stimulus_flags(sweep_cmd, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      cfg.trace_csv_path = trace_out;
      cfg.json_path = json_out;
      const ffcr::RunResult r = ffcr::run_experiment(cfg, cfo_ppm);
      if (r.faulted()) return print_fault(r);
      std::printf("cfo_ppm=%g ber=%g errors=%lld symbols=%lld sndr_db=%.2f pauses=%lld%s\n",
                  r.cfo_ppm, r.ber.ber, static_cast<long long>(r.ber.errors),
                  static_cast<long long>(r.ber.symbols_counted), r.sndr.sndr_db,
                  static_cast<long long>(r.pause_count),
                  r.ber.alignment_failed ? " (alignment failed)" : "");
      return 0;
    }

    // sweep
    if (!list_arg.empty()) {
      cfg.sweep_ppm.clear();
      std::stringstream ss(list_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.sweep_ppm.push_back(std::stod(tok));
    } else {
      if (step <= 0.0) throw std::invalid_argument("sweep step must be positive");
      cfg.sweep_ppm.clear();
      for (double v = from; v <= to + 1e-9; v += step) cfg.sweep_ppm.push_back(v);
    }
    cfg.sweep_csv_path = csv_out;
    const std::vector<ffcr::RunResult> results = ffcr::sweep_cfo(cfg);
    int rc = 0;
    for (const auto& r : results) {
      std::printf("cfo_ppm=%g ber=%g sndr_db=%.2f pauses=%lld status=%s\n", r.cfo_ppm,
                  r.ber.ber, r.sndr.sndr_db, static_cast<long long>(r.pause_count),
                  r.status.c_str());
      if (r.faulted()) rc = 1;
    }
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

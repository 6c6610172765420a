// Command-line front end: `run` a configured case, `bench` a scaling
// matrix, or `verify` the acceptance property suite.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdns/config_file.hpp"
#include "sdns/runner.hpp"
#include "sdns/types.hpp"
#include "sdns/verification.hpp"

namespace {

struct RunArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string backend = "auto";
  sdns::ConfigOverrides overrides;
};

void add_override_flag(CLI::App* cmd, sdns::ConfigOverrides& overrides,
                       const std::string& flag, const std::string& key,
                       const std::string& help) {
  cmd->add_option_function<std::string>(
         flag,
         [&overrides, key](const std::string& v) {
           overrides.emplace_back(key, v);
         },
         help)
      ->type_name("VALUE");
}

int cmd_run(const RunArgs& args) {
  sdns::ParsedConfig parsed =
      args.config_path.empty()
          ? sdns::parse_config_text("", args.overrides)
          : sdns::parse_config_file(args.config_path, args.overrides);
  for (const std::string& note : parsed.notices)
    std::cout << "note: " << note << "\n";

  sdns::RunOptions opts;
  opts.out_dir = args.out_dir;
  opts.backend = args.backend;

  const sdns::SolverConfig& cfg = parsed.cfg;
  std::cout << "running " << cfg.initial_case << ": n=" << cfg.n << " "
            << sdns::to_string(cfg.decomp) << " p=" << cfg.p
            << " nu=" << cfg.nu << " dt=" << cfg.dt << " t_end=" << cfg.t_end
            << "\n";

  const sdns::RunResult result = sdns::run(cfg, opts);

  const auto& last = result.samples.back();
  std::cout << "completed " << result.steps << " steps; E=" << last.stats.energy
            << " Z=" << last.stats.enstrophy
            << " div_max=" << last.stats.divergence_max << "\n"
            << "mean step time " << result.timing.mean_s << " s over "
            << result.timing.timed_steps << " timed steps\n"
            << "wrote " << result.csv_path << ", " << result.checkpoint_path
            << ", " << result.manifest_path << "\n";
  return 0;
}

int cmd_bench(const std::string& matrix_path, int steps,
              const std::string& out_csv) {
  const std::vector<sdns::BenchEntry> entries =
      sdns::parse_bench_matrix_file(matrix_path);
  std::cout << "benchmarking " << entries.size() << " entries, " << steps
            << " timed steps each\n";
  const std::vector<sdns::BenchRow> rows = sdns::bench(entries, steps);
  sdns::write_bench_csv(out_csv, rows);
  for (const sdns::BenchRow& r : rows) {
    std::cout << "  n=" << r.entry.n << " " << sdns::to_string(r.entry.decomp)
              << " p=" << r.entry.p;
    if (r.status == "ok")
      std::cout << ": " << r.sec_per_step << " s/step\n";
    else
      std::cout << ": FAILED (" << r.status << ")\n";
  }
  std::cout << "wrote " << out_csv << "\n";
  bool all_ok = true;
  for (const sdns::BenchRow& r : rows) all_ok = all_ok && r.status == "ok";
  return all_ok ? 0 : 1;
}

int cmd_verify() {
  std::cout << "sdns acceptance suite (" << sdns::version() << ")\n";
  const auto results = sdns::run_acceptance_suite(std::cout);
  const bool ok = sdns::all_passed(results);
  std::cout << (ok ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral Navier-Stokes solver (Taylor-Green case)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sdns::version());

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "advance a configured case");
  run_cmd->add_option("--config", run_args.config_path,
                      "config file (key = value lines)");
  add_override_flag(run_cmd, run_args.overrides, "--n", "n",
                    "grid points per axis");
  add_override_flag(run_cmd, run_args.overrides, "--p", "p", "rank count");
  add_override_flag(run_cmd, run_args.overrides, "--p1", "p1",
                    "pencil grid rows");
  add_override_flag(run_cmd, run_args.overrides, "--p2", "p2",
                    "pencil grid cols");
  add_override_flag(run_cmd, run_args.overrides, "--decomp", "decomp",
                    "slab | pencil");
  add_override_flag(run_cmd, run_args.overrides, "--re", "re",
                    "Reynolds number (nu = 1/Re)");
  add_override_flag(run_cmd, run_args.overrides, "--nu", "nu",
                    "kinematic viscosity");
  add_override_flag(run_cmd, run_args.overrides, "--dt", "dt", "time step");
  add_override_flag(run_cmd, run_args.overrides, "--t-end", "t_end",
                    "end time");
  add_override_flag(run_cmd, run_args.overrides, "--dealias", "dealias",
                    "2/3-rule truncation (true/false)");
  add_override_flag(run_cmd, run_args.overrides, "--case", "case",
                    "initial condition name");
  add_override_flag(run_cmd, run_args.overrides, "--out-every", "out_every",
                    "diagnostics cadence in steps");
  run_cmd->add_option("--backend", run_args.backend,
                      "auto | loopback | inprocess");
  run_cmd->add_option("--out", run_args.out_dir, "output directory");

  std::string matrix_path;
  int bench_steps = 10;
  std::string bench_out = "bench.csv";
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "time a weak/strong scaling matrix");
  bench_cmd->add_option("--matrix", matrix_path, "matrix file: n decomp p [p1 p2]")
      ->required();
  bench_cmd->add_option("--steps", bench_steps, "timed steps per entry")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench_out, "output CSV path");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the acceptance property suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (bench_cmd->parsed()) return cmd_bench(matrix_path, bench_steps, bench_out);
    if (verify_cmd->parsed()) return cmd_verify();
  } catch (const sdns::DivergenceError& e) {
    std::cerr << "error: solution diverged: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "sdns/config.hpp"
#include "sdns/diagnostics.hpp"

namespace sdns {

struct RunOptions {
  std::string out_dir = "out";
  std::string backend = "auto";  ///< auto | loopback | inprocess
  std::chrono::milliseconds collective_timeout{30000};
};

/// Wall-clock seconds per step, aggregated over ranks, first-5-step
/// warmup excluded.
struct StepTiming {
  double min_s = 0.0, mean_s = 0.0, max_s = 0.0;
  std::int64_t timed_steps = 0;
};

struct SampleRow {
  std::int64_t step = 0;
  FlowStats stats;
};

struct RunResult {
  SolverConfig cfg;
  std::string backend;
  std::string status = "ok";
  std::int64_t steps = 0;
  StepTiming timing;
  std::vector<SampleRow> samples;
  std::string csv_path, checkpoint_path, manifest_path;
};

/// Runs the configured case to t_end: spawns one worker per rank (threads
/// for p > 1, the calling thread for p = 1), initializes the case,
/// advances, and writes diagnostics CSV, final checkpoint, and manifest
/// into out_dir (rank 0 does all file I/O).
///
/// On divergence the last sampled state is checkpointed, the manifest
/// records the failure, and the DivergenceError is rethrown.
RunResult run(const SolverConfig& cfg, const RunOptions& opts = {});

// --- scaling benchmark harness -------------------------------------------

struct BenchEntry {
  int n = 32;
  Decomp decomp = Decomp::Slab;
  int p = 1;
  int p1 = 0, p2 = 0;  ///< 0 = derive a near-square grid for pencil
};

struct BenchRow {
  BenchEntry entry;
  std::int64_t nodes_per_rank = 0;
  double sec_per_step = 0.0;
  std::string status = "ok";
};

/// Lines of `n, decomp, p[, p1, p2]`; '#' comments; commas or blanks.
std::vector<BenchEntry> parse_bench_matrix_text(const std::string& text);
std::vector<BenchEntry> parse_bench_matrix_file(const std::string& path);

/// Times `steps` Taylor-Green RK4 steps per entry after a 5-step warmup,
/// timing the pure step loop only (no diagnostics, no I/O inside the timed
/// region). Per-entry failures are recorded in `status`; the harness
/// continues with the next entry.
std::vector<BenchRow> bench(const std::vector<BenchEntry>& entries, int steps,
                            const RunOptions& opts = {});

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows);

/// Columns: step, t, E, Z, eps, div_max, shell_0..shell_{S-1}.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<SampleRow>& samples, int shells);

void write_manifest(const std::string& path, const RunResult& result);

}  // namespace sdns

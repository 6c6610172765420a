#include "sdns/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "sdns/checkpoint.hpp"
#include "sdns/config_file.hpp"
#include "sdns/fft.hpp"
#include "sdns/navier_stokes.hpp"
#include "sdns/rk4.hpp"

namespace sdns {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool resolve_backend(const SolverConfig& cfg, const std::string& name) {
  if (name == "auto") return cfg.p > 1;
  if (name == "loopback") {
    if (cfg.p != 1)
      throw ConfigError("loopback backend supports only p=1, got p=" +
                        std::to_string(cfg.p));
    return false;
  }
  if (name == "inprocess") return true;
  throw ConfigError("unknown backend '" + name + "' (expected auto|loopback|inprocess)");
}

StepTiming reduce_timing(const std::vector<double>& step_seconds,
                         Communicator& comm) {
  const auto warm = std::min<std::size_t>(5, step_seconds.size());
  StepTiming t;
  t.timed_steps = static_cast<std::int64_t>(step_seconds.size() - warm);
  if (t.timed_steps > 0) {
    double lo = step_seconds[warm], hi = step_seconds[warm], sum = 0.0;
    for (std::size_t i = warm; i < step_seconds.size(); ++i) {
      lo = std::min(lo, step_seconds[i]);
      hi = std::max(hi, step_seconds[i]);
      sum += step_seconds[i];
    }
    t.min_s = comm.allreduce_min(lo);
    t.max_s = comm.allreduce_max(hi);
    t.mean_s = comm.allreduce_sum(sum / static_cast<double>(t.timed_steps)) /
               static_cast<double>(comm.size());
  } else {
    // Keep the collective count identical on every rank.
    comm.allreduce_min(0.0);
    comm.allreduce_max(0.0);
    comm.allreduce_sum(0.0);
  }
  return t;
}

/// Per-rank body of run(); collective except for rank 0's file I/O.
void run_worker(const SolverConfig& cfg, const RunOptions& opts, int rank,
                std::shared_ptr<Communicator> comm, RunResult& result,
                std::mutex& result_mu) {
  const RankLayout layout = build_layout(cfg, rank);
  const PhysicalMesh mesh = physical_mesh(layout);
  const WavenumberMesh wm = wavenumbers(cfg, layout);
  DistributedFFT fft(cfg, layout, comm);
  RhsWorkspace ws(layout);
  Rk4State state(layout.spec.shape);

  RealField3 u = make_initial_condition(cfg.initial_case, layout, mesh);
  fft.forward(u, state.u_hat);
  // The discrete transform leaves rounding dust on modes the analytic field
  // does not excite; one projection makes the initial state solenoidal to
  // machine precision without measurably changing it.
  project(state.u_hat, wm);

  RealField3 snap(layout.real.shape);
  double snap_t = 0.0;
  std::int64_t snap_step = 0;
  std::vector<SampleRow> samples;
  std::vector<double> step_seconds;

  RhsFn rhs = [&](const SpectralField3& uh, SpectralField3& du) {
    compute_rhs(uh, wm, fft, ws, cfg.nu, du);
  };

  AdvanceHooks hooks;
  hooks.sample = [&](std::int64_t step, double t) {
    FlowStats st = collect_stats(t, state.u_hat, wm, cfg.nu, *comm);
    fft.inverse(state.u_hat, snap);
    snap_t = t;
    snap_step = step;
    if (rank == 0) samples.push_back({step, std::move(st)});
  };
  hooks.timing = [&](std::int64_t, double s) { step_seconds.push_back(s); };
  // Solenoidal cleanup: the update itself is projected, but modes whose
  // nonlinear contribution is annihilated outright accumulate rounding dust
  // with O(1) relative divergence.  Re-projecting the state (analytically a
  // no-op) keeps divergence_norm at machine precision for every mode.
  hooks.post_step = [&] { project(state.u_hat, wm); };

  std::optional<DivergenceError> diverged;
  try {
    advance(state, cfg, rhs, *comm, hooks);
  } catch (const DivergenceError& e) {
    diverged = e;
  }

  // Final (or last-good) state checkpoint; collective on every path because
  // divergence raises on all ranks at the same step.
  double ck_t = state.t;
  std::int64_t ck_step = state.step;
  if (!diverged) {
    fft.inverse(state.u_hat, snap);
  } else {
    ck_t = snap_t;
    ck_step = snap_step;
  }
  const std::string ckpt_path = opts.out_dir + "/checkpoint.sdns";
  write_checkpoint(ckpt_path, cfg, layout, *comm, snap, ck_t, ck_step);

  const StepTiming timing = reduce_timing(step_seconds, *comm);

  if (rank == 0) {
    std::lock_guard lk(result_mu);
    result.status = diverged ? "diverged at step " + std::to_string(diverged->step())
                             : "ok";
    result.steps = diverged ? diverged->step() - 1 : state.step;
    result.timing = timing;
    result.samples = std::move(samples);
    result.csv_path = opts.out_dir + "/diagnostics.csv";
    result.checkpoint_path = ckpt_path;
    result.manifest_path = opts.out_dir + "/manifest.txt";
    write_diagnostics_csv(result.csv_path, result.samples, spectrum_shells(cfg.n));
    write_manifest(result.manifest_path, result);
  }

  if (diverged)
    throw DivergenceError(diverged->step(),
                          std::string(diverged->what()) + "; last good state (step " +
                              std::to_string(ck_step) + ", t=" + fmt(ck_t) +
                              ") checkpointed to " + ckpt_path);
}

/// Spawns one worker per rank and funnels the first failure (by rank) back
/// to the caller. Non-collective failures poison the group so the other
/// ranks fail fast instead of hitting the collective timeout.
template <class Worker>
void drive_workers(const SolverConfig& cfg, const RunOptions& opts,
                   Worker&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.p));
  const bool inprocess = resolve_backend(cfg, opts.backend);

  if (!inprocess && cfg.p == 1) {
    body(0, make_loopback());
    return;
  }

  InProcessBackend backend(cfg.p, opts.collective_timeout);
  auto worker = [&](int rank) {
    try {
      body(rank, backend.communicator(rank));
    } catch (const DivergenceError&) {
      // Collective by construction: every rank raises it at the same step,
      // after the salvage I/O is done, so no peer is left waiting.
      errors[static_cast<std::size_t>(rank)] = std::current_exception();
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(rank)] = std::current_exception();
      backend.poison("rank " + std::to_string(rank) + " failed: " + e.what());
    } catch (...) {
      errors[static_cast<std::size_t>(rank)] = std::current_exception();
      backend.poison("rank " + std::to_string(rank) + " failed");
    }
  };

  if (cfg.p == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(cfg.p));
    for (int r = 0; r < cfg.p; ++r) threads.emplace_back(worker, r);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

RunResult run(const SolverConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  std::filesystem::create_directories(opts.out_dir);

  RunResult result;
  result.cfg = cfg;
  result.backend = resolve_backend(cfg, opts.backend) ? "inprocess" : "loopback";

  std::mutex result_mu;
  drive_workers(cfg, opts, [&](int rank, std::shared_ptr<Communicator> comm) {
    run_worker(cfg, opts, rank, std::move(comm), result, result_mu);
  });
  return result;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<SampleRow>& samples, int shells) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "step,t,E,Z,eps,div_max";
  for (int s = 0; s < shells; ++s) out << ",shell_" << s;
  out << "\n";
  for (const SampleRow& row : samples) {
    const FlowStats& st = row.stats;
    out << row.step << ',' << fmt(st.t) << ',' << fmt(st.energy) << ','
        << fmt(st.enstrophy) << ',' << fmt(st.dissipation) << ','
        << fmt(st.divergence_max);
    for (double v : st.spectrum) out << ',' << fmt(v);
    out << "\n";
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

void write_manifest(const std::string& path, const RunResult& result) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const SolverConfig& cfg = result.cfg;
  out << "format = sdns-manifest-1\n"
      << "version = " << version() << "\n"
      << "backend = " << result.backend << "\n"
      << "status = " << result.status << "\n"
      << "n = " << cfg.n << "\n"
      << "decomp = " << to_string(cfg.decomp) << "\n"
      << "p = " << cfg.p << "\n"
      << "p1 = " << cfg.p1 << "\n"
      << "p2 = " << cfg.p2 << "\n"
      << "nu = " << fmt(cfg.nu) << "\n"
      << "dt = " << fmt(cfg.dt) << "\n"
      << "t_end = " << fmt(cfg.t_end) << "\n"
      << "dealias = " << (cfg.dealias ? "true" : "false") << "\n"
      << "case = " << cfg.initial_case << "\n"
      << "out_every = " << cfg.out_every << "\n"
      << "steps = " << result.steps << "\n"
      << "step_seconds_min = " << fmt(result.timing.min_s) << "\n"
      << "step_seconds_mean = " << fmt(result.timing.mean_s) << "\n"
      << "step_seconds_max = " << fmt(result.timing.max_s) << "\n"
      << "timed_steps = " << result.timing.timed_steps << "\n"
      << "csv = " << result.csv_path << "\n"
      << "checkpoint = " << result.checkpoint_path << "\n";
  if (!out) throw IoError("short write to '" + path + "'");
}

// --- bench -----------------------------------------------------------------

std::vector<BenchEntry> parse_bench_matrix_text(const std::string& text) {
  std::vector<BenchEntry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    std::string n_s, d_s, p_s, p1_s, p2_s;
    if (!(ls >> n_s)) continue;  // blank line
    if (!(ls >> d_s >> p_s))
      throw ConfigError("bench matrix line " + std::to_string(lineno) +
                        ": expected 'n, decomp, p[, p1, p2]'");
    BenchEntry e;
    try {
      e.n = std::stoi(n_s);
      e.decomp = decomp_from_string(d_s);
      e.p = std::stoi(p_s);
      if (ls >> p1_s) {
        if (!(ls >> p2_s))
          throw ConfigError("bench matrix line " + std::to_string(lineno) +
                            ": p1 given without p2");
        e.p1 = std::stoi(p1_s);
        e.p2 = std::stoi(p2_s);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bench matrix line " + std::to_string(lineno) +
                        ": malformed entry '" + line + "'");
    }
    std::string extra;
    if (ls >> extra)
      throw ConfigError("bench matrix line " + std::to_string(lineno) +
                        ": trailing fields");
    entries.push_back(e);
  }
  return entries;
}

std::vector<BenchEntry> parse_bench_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open bench matrix '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bench_matrix_text(ss.str());
}

namespace {

SolverConfig bench_config(const BenchEntry& e) {
  SolverConfig cfg;
  cfg.n = e.n;
  cfg.decomp = e.decomp;
  cfg.p = e.p;
  if (e.decomp == Decomp::Pencil) {
    if (e.p1 > 0 && e.p2 > 0) {
      cfg.p1 = e.p1;
      cfg.p2 = e.p2;
    } else {
      std::tie(cfg.p1, cfg.p2) = default_pencil_grid(e.n, e.p);
    }
  }
  cfg.nu = 1.0 / 1600.0;
  cfg.dt = 1e-3;
  cfg.dealias = true;
  cfg.initial_case = "taylor_green";
  cfg.validate();
  return cfg;
}

double bench_entry_seconds(const SolverConfig& cfg, int steps,
                           const RunOptions& opts) {
  constexpr int kWarmup = 5;
  double sec = 0.0;
  std::mutex mu;
  drive_workers(cfg, opts, [&](int rank, std::shared_ptr<Communicator> comm) {
    const RankLayout layout = build_layout(cfg, rank);
    const PhysicalMesh mesh = physical_mesh(layout);
    const WavenumberMesh wm = wavenumbers(cfg, layout);
    DistributedFFT fft(cfg, layout, comm);
    RhsWorkspace ws(layout);
    Rk4State state(layout.spec.shape);
    RealField3 u = make_initial_condition(cfg.initial_case, layout, mesh);
    fft.forward(u, state.u_hat);
    project(state.u_hat, wm);
    RhsFn rhs = [&](const SpectralField3& uh, SpectralField3& du) {
      compute_rhs(uh, wm, fft, ws, cfg.nu, du);
    };
    // Mirror the production step loop, including the per-step solenoidal
    // cleanup, so timings reflect what `run` actually executes.
    const auto timed_step = [&] {
      rk4_step(state, cfg.dt, rhs);
      project(state.u_hat, wm);
    };
    for (int k = 0; k < kWarmup; ++k) timed_step();
    comm->barrier();
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < steps; ++k) timed_step();
    comm->barrier();
    const auto t1 = std::chrono::steady_clock::now();
    if (rank == 0) {
      std::lock_guard lk(mu);
      sec = std::chrono::duration<double>(t1 - t0).count() /
            static_cast<double>(steps);
    }
  });
  return sec;
}

}  // namespace

std::vector<BenchRow> bench(const std::vector<BenchEntry>& entries, int steps,
                            const RunOptions& opts) {
  if (steps < 1) throw ConfigError("bench steps must be >= 1");
  std::vector<BenchRow> rows;
  rows.reserve(entries.size());
  for (const BenchEntry& e : entries) {
    BenchRow row;
    row.entry = e;
    try {
      const SolverConfig cfg = bench_config(e);
      row.entry.p1 = cfg.p1;
      row.entry.p2 = cfg.p2;
      row.nodes_per_rank = static_cast<std::int64_t>(cfg.n) * cfg.n * cfg.n / cfg.p;
      row.sec_per_step = bench_entry_seconds(cfg, steps, opts);
    } catch (const std::exception& ex) {
      row.status = ex.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
  const auto dir = std::filesystem::path(path).parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "n,decomp,p,p1,p2,nodes_per_rank,sec_per_step,status\n";
  for (const BenchRow& r : rows) {
    std::string status = r.status;
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    out << r.entry.n << ',' << to_string(r.entry.decomp) << ',' << r.entry.p
        << ',' << r.entry.p1 << ',' << r.entry.p2 << ',' << r.nodes_per_rank
        << ',' << fmt(r.sec_per_step) << ',' << status << "\n";
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace sdns

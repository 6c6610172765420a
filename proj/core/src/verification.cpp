#include "sdns/verification.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "sdns/checkpoint.hpp"
#include "sdns/diagnostics.hpp"
#include "sdns/fft.hpp"
#include "sdns/navier_stokes.hpp"
#include "sdns/rk4.hpp"
#include "sdns/runner.hpp"

namespace sdns {

namespace {

namespace fs = std::filesystem;

/// Collects failure text; empty means the criterion passed.
struct Check {
  std::string fail;
  std::string note;
  int checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && fail.empty()) fail = what;
  }
  template <class T>
  static std::string str(T v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  }
};

SolverConfig tg_config(int n, Decomp decomp, int p, int p1, int p2) {
  SolverConfig cfg;
  cfg.n = n;
  cfg.decomp = decomp;
  cfg.p = p;
  cfg.p1 = p1;
  cfg.p2 = p2;
  cfg.nu = 1.0 / 1600.0;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  cfg.dealias = true;
  cfg.initial_case = "taylor_green";
  cfg.out_every = 10;
  return cfg;
}

std::vector<double> random_global_field(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> f(static_cast<std::size_t>(n) * n * n);
  for (double& v : f) v = dist(rng);
  return f;
}

RealField extract_block(const std::vector<double>& global, std::int64_t n,
                        const Extents3& ext) {
  RealField f(ext.shape);
  for (std::int64_t i = 0; i < ext.shape.n0; ++i)
    for (std::int64_t j = 0; j < ext.shape.n1; ++j)
      for (std::int64_t k = 0; k < ext.shape.n2; ++k)
        f(i, j, k) = global[static_cast<std::size_t>(
            ((ext.offset[0] + i) * n + (ext.offset[1] + j)) * n +
            (ext.offset[2] + k))];
  return f;
}

/// Forward-transforms `global` under cfg's decomposition and assembles the
/// full (n, n, nf) spectrum from the rank blocks. Also reports the worst
/// round-trip error against the original field.
void distributed_forward_global(const SolverConfig& cfg,
                                const std::vector<double>& global,
                                std::vector<Complex>& spec_global,
                                double& roundtrip_err) {
  const std::int64_t n = cfg.n;
  const std::int64_t nf = n / 2 + 1;
  spec_global.assign(static_cast<std::size_t>(n * n * nf), Complex(0.0, 0.0));
  double rt = 0.0;
  std::mutex mu;
  run_group(cfg.p, [&](int rank, std::shared_ptr<Communicator> comm) {
    const RankLayout layout = build_layout(cfg, rank);
    DistributedFFT fft(cfg, layout, comm);
    RealField u = extract_block(global, n, layout.real);
    SpectralField fu(layout.spec.shape);
    fft.forward(u, fu);
    RealField back(layout.real.shape);
    fft.inverse(fu, back);
    double local_rt = 0.0;
    for (std::size_t m = 0; m < u.data.size(); ++m)
      local_rt = std::max(local_rt, std::abs(u.data[m] - back.data[m]));
    std::lock_guard lk(mu);
    rt = std::max(rt, local_rt);
    const Extents3& ex = layout.spec;
    for (std::int64_t i = 0; i < ex.shape.n0; ++i)
      for (std::int64_t j = 0; j < ex.shape.n1; ++j)
        for (std::int64_t k = 0; k < ex.shape.n2; ++k)
          spec_global[static_cast<std::size_t>(
              ((ex.offset[0] + i) * n + (ex.offset[1] + j)) * nf +
              (ex.offset[2] + k))] = fu(i, j, k);
  });
  roundtrip_err = rt;
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const Complex& c : v) m = std::max(m, std::abs(c));
  return m;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

// --- criterion bodies ------------------------------------------------------

void criterion_fft_oracle(Check& c) {
  struct Combo {
    Decomp decomp;
    int p, p1, p2;
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {8, 16, 32}) {
    SolverConfig serial = tg_config(n, Decomp::Slab, 1, 1, 1);
    const std::vector<double> global = random_global_field(n, 42u + static_cast<unsigned>(n));
    std::vector<Complex> ref;
    double rt_serial = 0.0;
    distributed_forward_global(serial, global, ref, rt_serial);
    const double uref = max_abs(global);
    const double sref = max_abs(ref);
    c.expect(rt_serial <= 1e-12 * uref,
             "serial round-trip error " + Check::str(rt_serial) + " at n=" +
                 Check::str(n));

    std::vector<Combo> combos;
    for (int p : {1, 2, 4, 8}) combos.push_back({Decomp::Slab, p, p, 1});
    combos.push_back({Decomp::Pencil, 1, 1, 1});
    combos.push_back({Decomp::Pencil, 4, 2, 2});
    combos.push_back({Decomp::Pencil, 8, 2, 4});

    for (const Combo& combo : combos) {
      const SolverConfig cfg = tg_config(n, combo.decomp, combo.p, combo.p1, combo.p2);
      std::vector<Complex> spec;
      double rt = 0.0;
      distributed_forward_global(cfg, global, spec, rt);
      double diff = 0.0;
      for (std::size_t m = 0; m < spec.size(); ++m)
        diff = std::max(diff, std::abs(spec[m] - ref[m]));
      const std::string tag = " (n=" + Check::str(n) + ", " +
                              to_string(combo.decomp) + " p=" + Check::str(combo.p) +
                              " " + Check::str(combo.p1) + "x" + Check::str(combo.p2) + ")";
      c.expect(diff <= 1e-12 * sref,
               "forward mismatch vs serial " + Check::str(diff) + tag);
      c.expect(rt <= 1e-12 * uref, "round-trip error " + Check::str(rt) + tag);
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(elapsed < 30.0, "oracle sweep took " + Check::str(elapsed) + " s (budget 30 s)");
}

void criterion_parseval(Check& c) {
  const int n = 32;
  const SolverConfig cfg = tg_config(n, Decomp::Slab, 1, 1, 1);
  const RankLayout layout = build_layout(cfg, 0);
  const WavenumberMesh wm = wavenumbers(cfg, layout);
  auto comm = make_loopback();
  DistributedFFT fft(cfg, layout, comm);
  const double n3 = static_cast<double>(n) * n * n;
  for (int trial = 0; trial < 20; ++trial) {
    RealField3 u(layout.real.shape);
    SpectralField3 fu(layout.spec.shape);
    for (int comp = 0; comp < 3; ++comp) {
      const auto g = random_global_field(n, 1000u + 10u * static_cast<unsigned>(trial) +
                                                static_cast<unsigned>(comp));
      u[comp].data = g;
    }
    fft.forward(u, fu);
    double phys = 0.0;
    for (int comp = 0; comp < 3; ++comp)
      for (double v : u[comp].data) phys += v * v;
    phys *= 0.5 / n3;
    const double spec = energy(fu, wm, *comm);
    c.expect(std::abs(spec - phys) <= 1e-12 * phys,
             "Parseval violation at trial " + Check::str(trial) + ": spectral " +
                 Check::str(spec) + " vs physical " + Check::str(phys));
  }
}

RunResult tg_run(const fs::path& dir, SolverConfig cfg) {
  RunOptions opts;
  opts.out_dir = dir.string();
  return run(cfg, opts);
}

void criterion_divergence_free(Check& c, const RunResult& r1) {
  c.expect(r1.samples.size() == 101,
           "expected 101 samples, got " + Check::str(r1.samples.size()));
  for (const SampleRow& row : r1.samples)
    c.expect(row.stats.divergence_max <= 1e-10,
             "div_max " + Check::str(row.stats.divergence_max) + " at step " +
                 Check::str(row.step));
}

void criterion_energy_identities(Check& c, const RunResult& viscous,
                                 const fs::path& tmp) {
  // (a) analytic initial energy.
  const double e0 = viscous.samples.front().stats.energy;
  c.expect(std::abs(e0 - 0.125) <= 1e-12,
           "E(0) = " + Check::str(e0) + " != 0.125");

  // (b) inviscid energy conservation.
  SolverConfig inviscid = tg_config(32, Decomp::Slab, 1, 1, 1);
  inviscid.nu = 0.0;
  inviscid.out_every = 1;
  const RunResult ri = tg_run(tmp / "inviscid", inviscid);
  const double ei0 = ri.samples.front().stats.energy;
  for (const SampleRow& row : ri.samples)
    c.expect(std::abs(row.stats.energy - ei0) / ei0 <= 1e-8,
             "inviscid energy drift " +
                 Check::str(std::abs(row.stats.energy - ei0) / ei0) + " at step " +
                 Check::str(row.step));

  // (c) viscous decay and per-step energy balance.
  const auto& s = viscous.samples;
  for (std::size_t i = 1; i < s.size(); ++i)
    c.expect(s[i].stats.energy <= s[i - 1].stats.energy,
             "energy increased between steps " + Check::str(s[i - 1].step) +
                 " and " + Check::str(s[i].step));
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double dedt = (s[i + 1].stats.energy - s[i - 1].stats.energy) /
                        (s[i + 1].stats.t - s[i - 1].stats.t);
    const double sink = 2.0 * viscous.cfg.nu * s[i].stats.enstrophy;
    c.expect(std::abs(dedt + sink) <= 1e-3 * sink,
             "energy balance off at step " + Check::str(s[i].step) + ": dE/dt " +
                 Check::str(dedt) + " vs -2 nu Z " + Check::str(-sink));
  }
}

/// Advances TG at n=32 to t_end with the given dt and returns the final
/// physical field (p=1, no I/O).
RealField3 tg_final_field(double dt) {
  SolverConfig cfg = tg_config(32, Decomp::Slab, 1, 1, 1);
  cfg.dt = dt;
  const RankLayout layout = build_layout(cfg, 0);
  const PhysicalMesh mesh = physical_mesh(layout);
  const WavenumberMesh wm = wavenumbers(cfg, layout);
  auto comm = make_loopback();
  DistributedFFT fft(cfg, layout, comm);
  RhsWorkspace ws(layout);
  Rk4State state(layout.spec.shape);
  RealField3 u = make_initial_condition(cfg.initial_case, layout, mesh);
  fft.forward(u, state.u_hat);
  project(state.u_hat, wm);
  RhsFn rhs = [&](const SpectralField3& uh, SpectralField3& du) {
    compute_rhs(uh, wm, fft, ws, cfg.nu, du);
  };
  // No per-step solenoidal cleanup here: the order study measures pure
  // time-discretization error, and each cleanup rewrites the state at full
  // amplitude, adding rounding noise at the scale of the finest-dt error.
  // No divergence metric is evaluated on this path.
  advance(state, cfg, rhs, *comm);
  fft.inverse(state.u_hat, u);
  return u;
}

void criterion_rk4_order(Check& c) {
  auto comm = make_loopback();
  const RealField3 ref = tg_final_field(1e-3 / 16.0);
  const double dts[3] = {4e-3, 2e-3, 1e-3};
  double errs[3];
  for (int i = 0; i < 3; ++i) {
    const RealField3 u = tg_final_field(dts[i]);
    errs[i] = l2_diff(u, ref, 32, *comm);
  }
  for (int i = 0; i + 1 < 3; ++i) {
    const double order = std::log2(errs[i] / errs[i + 1]);
    c.expect(std::abs(order - 4.0) <= 0.3,
             "observed order " + Check::str(order) + " between dt=" +
                 Check::str(dts[i]) + " and dt=" + Check::str(dts[i + 1]) +
                 " (errors " + Check::str(errs[i]) + ", " + Check::str(errs[i + 1]) + ")");
  }
}

void criterion_parallel_invariance(Check& c, const fs::path& tmp) {
  auto cfg50 = [](Decomp d, int p, int p1, int p2) {
    SolverConfig cfg = tg_config(32, d, p, p1, p2);
    cfg.t_end = 0.05;
    return cfg;
  };
  const RunResult a = tg_run(tmp / "p1", cfg50(Decomp::Slab, 1, 1, 1));
  const RunResult b = tg_run(tmp / "slab4", cfg50(Decomp::Slab, 4, 4, 1));
  const RunResult d = tg_run(tmp / "pencil22", cfg50(Decomp::Pencil, 4, 2, 2));

  c.expect(a.samples.size() == b.samples.size() &&
               a.samples.size() == d.samples.size(),
           "sample count mismatch across decompositions");
  const double efloor = a.samples.front().stats.energy;
  for (const RunResult* other : {&b, &d}) {
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      const FlowStats& x = a.samples[i].stats;
      const FlowStats& y = other->samples[i].stats;
      const std::string tag = " (row " + Check::str(i) + " vs " +
                              to_string(other->cfg.decomp) + " p=" +
                              Check::str(other->cfg.p) + ")";
      c.expect(std::abs(x.energy - y.energy) <= 1e-12 * std::abs(x.energy),
               "E mismatch" + tag);
      c.expect(std::abs(x.enstrophy - y.enstrophy) <= 1e-12 * std::abs(x.enstrophy),
               "Z mismatch" + tag);
      c.expect(std::abs(x.divergence_max - y.divergence_max) <= 1e-12,
               "div_max mismatch" + tag);
      c.expect(x.spectrum.size() == y.spectrum.size(), "shell count" + tag);
      for (std::size_t s = 0; s < x.spectrum.size(); ++s)
        c.expect(std::abs(x.spectrum[s] - y.spectrum[s]) <= 1e-12 * efloor,
                 "shell " + Check::str(s) + " mismatch" + tag);
    }
  }
}

void criterion_checkpoint_portability(Check& c, const fs::path& tmp) {
  const int n = 32;
  const std::string path = (tmp / "portable.sdns").string();

  // Write the analytic Taylor-Green field under slab p=4.
  {
    const SolverConfig cfg = tg_config(n, Decomp::Slab, 4, 4, 1);
    run_group(cfg.p, [&](int rank, std::shared_ptr<Communicator> comm) {
      const RankLayout layout = build_layout(cfg, rank);
      const RealField3 u = taylor_green_init(layout, physical_mesh(layout));
      write_checkpoint(path, cfg, layout, *comm, u, 0.25, 17);
    });
  }

  // Read under pencil 2x2 and compare bitwise against the analytic field.
  {
    const SolverConfig cfg = tg_config(n, Decomp::Pencil, 4, 2, 2);
    std::mutex mu;
    std::int64_t bad = 0;
    double t_read = -1.0;
    std::int64_t step_read = -1;
    run_group(cfg.p, [&](int rank, std::shared_ptr<Communicator> comm) {
      const RankLayout layout = build_layout(cfg, rank);
      RealField3 u(layout.real.shape);
      const CheckpointInfo info =
          read_checkpoint(path, cfg, layout, *comm, u);
      const RealField3 expect = taylor_green_init(layout, physical_mesh(layout));
      std::int64_t local_bad = 0;
      for (int comp = 0; comp < 3; ++comp)
        for (std::size_t m = 0; m < u[comp].data.size(); ++m)
          if (u[comp].data[m] != expect[comp].data[m]) ++local_bad;
      std::lock_guard lk(mu);
      bad += local_bad;
      if (rank == 0) {
        t_read = info.t;
        step_read = info.step;
      }
    });
    c.expect(bad == 0, Check::str(bad) + " values differ after slab->pencil round trip");
    c.expect(t_read == 0.25 && step_read == 17,
             "header mismatch: t=" + Check::str(t_read) + " step=" + Check::str(step_read));
  }
}

void criterion_transport_conformance(Check& c) {
  std::mt19937_64 rng(20240817u);
  const auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000 && c.fail.empty(); ++trial) {
    const int size = 1 + static_cast<int>(rng() % 8);
    const int n_ops = 1 + static_cast<int>(rng() % 4);

    struct OpPlan {
      int kind;  // 0 a2a, 1 reduce, 2 bcast, 3 barrier, 4 split
      std::vector<std::vector<std::int64_t>> counts;  // a2a counts[i][j]
      ReduceOp op = ReduceOp::Sum;
      int len = 1;
      int root = 0;
      std::vector<int> jitter_us;
    };
    std::vector<OpPlan> plan(static_cast<std::size_t>(n_ops));
    for (OpPlan& op : plan) {
      op.kind = static_cast<int>(rng() % 5);
      op.jitter_us.resize(static_cast<std::size_t>(size));
      for (int& j : op.jitter_us) j = static_cast<int>(rng() % 200);
      if (op.kind == 0) {
        op.counts.assign(static_cast<std::size_t>(size),
                         std::vector<std::int64_t>(static_cast<std::size_t>(size)));
        for (auto& row : op.counts)
          for (auto& v : row) v = static_cast<std::int64_t>(rng() % 9);
      } else if (op.kind == 1) {
        const int which = static_cast<int>(rng() % 3);
        op.op = which == 0 ? ReduceOp::Sum : which == 1 ? ReduceOp::Max : ReduceOp::Min;
        op.len = 1 + static_cast<int>(rng() % 16);
      } else if (op.kind == 2) {
        op.root = static_cast<int>(rng() % static_cast<unsigned>(size));
        op.len = 1 + static_cast<int>(rng() % 64);
      }
    }

    std::mutex mu;
    std::string fail;
    // Mismatches are recorded without returning so every rank still executes
    // the full collective sequence (an early exit would stall the peers).
    auto note_fail = [&](const std::string& what) {
      std::lock_guard lk(mu);
      if (fail.empty()) fail = what;
    };
    run_group(size, [&](int rank, std::shared_ptr<Communicator> comm) {
      auto value = [](int t, int o, int from, int to, std::int64_t idx) {
        return static_cast<double>(t % 97) + 1000.0 * from + 10.0 * to +
               0.001 * static_cast<double>(idx) + 100000.0 * o;
      };
      for (std::size_t o = 0; o < plan.size(); ++o) {
        const OpPlan& op = plan[o];
        std::this_thread::sleep_for(
            std::chrono::microseconds(op.jitter_us[static_cast<std::size_t>(rank)]));
        if (op.kind == 0) {
          std::vector<std::int64_t> scounts(static_cast<std::size_t>(size));
          std::vector<std::int64_t> rcounts(static_cast<std::size_t>(size));
          for (int q = 0; q < size; ++q) {
            scounts[static_cast<std::size_t>(q)] =
                op.counts[static_cast<std::size_t>(rank)][static_cast<std::size_t>(q)];
            rcounts[static_cast<std::size_t>(q)] =
                op.counts[static_cast<std::size_t>(q)][static_cast<std::size_t>(rank)];
          }
          const BlockTable st{scounts}, rt{rcounts};
          std::vector<double> send(static_cast<std::size_t>(st.total()));
          std::vector<double> recv(static_cast<std::size_t>(rt.total()), -1.0);
          for (int q = 0; q < size; ++q)
            for (std::int64_t m = 0; m < st.counts[static_cast<std::size_t>(q)]; ++m)
              send[static_cast<std::size_t>(st.displs[static_cast<std::size_t>(q)] + m)] =
                  value(trial, static_cast<int>(o), rank, q, m);
          comm->all_to_all(send.data(), st, recv.data(), rt);
          for (int q = 0; q < size; ++q)
            for (std::int64_t m = 0; m < rt.counts[static_cast<std::size_t>(q)]; ++m) {
              const double got = recv[static_cast<std::size_t>(
                  rt.displs[static_cast<std::size_t>(q)] + m)];
              const double want = value(trial, static_cast<int>(o), q, rank, m);
              if (got != want)
                note_fail("all_to_all mismatch trial " + Check::str(trial));
            }
        } else if (op.kind == 1) {
          std::vector<double> vals(static_cast<std::size_t>(op.len));
          for (int m = 0; m < op.len; ++m)
            vals[static_cast<std::size_t>(m)] = value(trial, static_cast<int>(o), rank, 0, m);
          comm->allreduce(vals, op.op);
          for (int m = 0; m < op.len; ++m) {
            double want = value(trial, static_cast<int>(o), 0, 0, m);
            for (int r = 1; r < size; ++r) {
              const double v = value(trial, static_cast<int>(o), r, 0, m);
              if (op.op == ReduceOp::Sum) want += v;
              if (op.op == ReduceOp::Max) want = std::max(want, v);
              if (op.op == ReduceOp::Min) want = std::min(want, v);
            }
            if (vals[static_cast<std::size_t>(m)] != want)
              note_fail("allreduce mismatch trial " + Check::str(trial));
          }
        } else if (op.kind == 2) {
          std::vector<double> buf(static_cast<std::size_t>(op.len));
          if (rank == op.root)
            for (int m = 0; m < op.len; ++m)
              buf[static_cast<std::size_t>(m)] =
                  value(trial, static_cast<int>(o), op.root, op.root, m);
          comm->broadcast_bytes(buf.data(), buf.size() * sizeof(double), op.root);
          for (int m = 0; m < op.len; ++m)
            if (buf[static_cast<std::size_t>(m)] !=
                value(trial, static_cast<int>(o), op.root, op.root, m))
              note_fail("broadcast mismatch trial " + Check::str(trial));
        } else if (op.kind == 3) {
          comm->barrier();
        } else {
          // Split by parity of rank, then allreduce within the subgroup.
          auto sub = comm->split(rank % 2, -rank);  // reversed key order
          double v = rank;
          v = sub->allreduce_sum(v);
          double want = 0.0;
          for (int r = rank % 2; r < size; r += 2) want += r;
          if (v != want)
            note_fail("split/allreduce mismatch trial " + Check::str(trial));
        }
      }
    });
    c.expect(fail.empty(), fail);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(elapsed < 60.0,
           "transport suite took " + Check::str(elapsed) + " s (budget 60 s)");
}

void criterion_bench_harness(Check& c, const fs::path& tmp) {
  const std::vector<BenchEntry> weak = {{16, Decomp::Slab, 1, 0, 0},
                                        {32, Decomp::Slab, 8, 0, 0}};
  std::vector<BenchEntry> strong;
  for (int p : {1, 2, 4, 8}) strong.push_back({64, Decomp::Slab, p, 0, 0});

  const auto weak_rows = bench(weak, 3);
  const auto strong_rows = bench(strong, 3);
  write_bench_csv((tmp / "weak.csv").string(), weak_rows);
  write_bench_csv((tmp / "strong.csv").string(), strong_rows);

  c.expect(weak_rows.size() == weak.size(), "weak matrix row count");
  c.expect(strong_rows.size() == strong.size(), "strong matrix row count");
  c.expect(weak_rows.size() == 2 &&
               weak_rows[0].nodes_per_rank == weak_rows[1].nodes_per_rank,
           "weak matrix does not hold n^3/p constant");
  for (const auto* rows : {&weak_rows, &strong_rows})
    for (const BenchRow& r : *rows) {
      c.expect(r.status == "ok", "bench entry failed: " + r.status);
      c.expect(std::isfinite(r.sec_per_step) && r.sec_per_step > 0.0,
               "non-finite timing");
    }

  // Scaling direction is only meaningful with at least 4 hardware threads.
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw >= 4) {
    double t1 = 0.0, t4 = 0.0;
    for (const BenchRow& r : strong_rows) {
      if (r.entry.p == 1) t1 = r.sec_per_step;
      if (r.entry.p == 4) t4 = r.sec_per_step;
    }
    c.expect(t4 < t1, "p=4 (" + Check::str(t4) + " s/step) not faster than p=1 (" +
                          Check::str(t1) + " s/step) on " + Check::str(hw) +
                          " hardware threads");
  } else {
    c.note = "scaling-direction check skipped: " + Check::str(hw) +
             " hardware thread(s) < 4";
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::ostream& out) {
  const fs::path tmp =
      fs::temp_directory_path() /
      ("sdns-verify-" + std::to_string(static_cast<unsigned>(::getpid())));
  fs::create_directories(tmp);

  std::vector<CriterionResult> results;

  // Criteria 3 and 4 share the viscous reference run.
  RunResult viscous;
  bool viscous_ok = false;

  auto record = [&](int index, const std::string& name, auto&& body) {
    CriterionResult r;
    r.index = index;
    r.name = name;
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(c);
      r.passed = c.fail.empty();
      r.detail = c.fail.empty()
                     ? Check::str(c.checks) + " checks" +
                           (c.note.empty() ? "" : "; " + c.note)
                     : c.fail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << (r.passed ? "[PASS] " : "[FAIL] ") << index << " " << name << " ("
        << r.detail << ", " << Check::str(r.seconds) << " s)" << std::endl;
    results.push_back(std::move(r));
  };

  record(1, "fft-oracle-equivalence", [&](Check& c) { criterion_fft_oracle(c); });
  record(2, "parseval", [&](Check& c) { criterion_parseval(c); });
  record(3, "divergence-free-evolution", [&](Check& c) {
    SolverConfig cfg = tg_config(32, Decomp::Slab, 1, 1, 1);
    cfg.out_every = 1;
    const auto t0 = std::chrono::steady_clock::now();
    viscous = tg_run(tmp / "viscous", cfg);
    const double run_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    viscous_ok = true;
    criterion_divergence_free(c, viscous);
    c.expect(run_secs < 120.0,
             "run took " + Check::str(run_secs) + " s (budget 120 s)");
  });
  record(4, "energy-identities", [&](Check& c) {
    if (!viscous_ok) {
      c.expect(false, "reference run unavailable (criterion 3 crashed)");
      return;
    }
    criterion_energy_identities(c, viscous, tmp);
  });
  record(5, "rk4-order", [&](Check& c) { criterion_rk4_order(c); });
  record(6, "parallel-invariance", [&](Check& c) { criterion_parallel_invariance(c, tmp); });
  record(7, "checkpoint-portability", [&](Check& c) { criterion_checkpoint_portability(c, tmp); });
  record(8, "transport-conformance", [&](Check& c) { criterion_transport_conformance(c); });
  record(9, "benchmark-harness", [&](Check& c) { criterion_bench_harness(c, tmp); });

  std::error_code ec;
  fs::remove_all(tmp, ec);
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results)
    if (!r.passed) return false;
  return !results.empty();
}

}  // namespace sdns

// Microbenchmarks for the hot kernels: pointwise cross product, serial FFT
// passes, the distributed transform round trip, one RHS evaluation, and a
// full RK4 step (all single-rank; multi-rank scaling lives in `sdns bench`).

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "sdns/diagnostics.hpp"
#include "sdns/fft.hpp"
#include "sdns/navier_stokes.hpp"
#include "sdns/rk4.hpp"

using namespace sdns;

namespace {

SolverConfig serial_cfg(int n) {
  SolverConfig cfg;
  cfg.n = n;
  return cfg;
}

/// Everything one serial solver step needs, built once per benchmark.
struct Setup {
  SolverConfig cfg;
  RankLayout layout;
  WavenumberMesh wm;
  std::shared_ptr<Communicator> comm;
  DistributedFFT fft;
  RhsWorkspace ws;
  RealField3 u;
  SpectralField3 u_hat;

  explicit Setup(int n)
      : cfg(serial_cfg(n)),
        layout(build_layout(cfg, 0)),
        wm(wavenumbers(cfg, layout)),
        comm(make_loopback()),
        fft(cfg, layout, comm),
        ws(layout),
        u(layout.real.shape),
        u_hat(layout.spec.shape) {
    u = taylor_green_init(layout, physical_mesh(layout));
    fft.forward(u, u_hat);
    project(u_hat, wm);
  }
};

void bm_cross(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Setup s(n);
  RealField3 out(s.layout.real.shape);
  for (auto _ : state) {
    cross(s.u, s.u, out);
    benchmark::DoNotOptimize(out[0].data.data());
  }
  state.SetItemsProcessed(state.iterations() * s.layout.real.shape.size());
}

void bm_serial_r2c_yz(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  SerialFFT fft;
  const Shape3 shape{n, n, n};
  std::vector<double> in(static_cast<std::size_t>(shape.size()));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : in) v = dist(rng);
  std::vector<Complex> out(
      static_cast<std::size_t>(shape.n0 * shape.n1 * (shape.n2 / 2 + 1)));
  for (auto _ : state) {
    fft.forward_r2c_yz(shape, in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

void bm_distributed_roundtrip(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Setup s(n);
  SpectralField fu(s.layout.spec.shape);
  RealField back(s.layout.real.shape);
  for (auto _ : state) {
    s.fft.forward(s.u[0], fu);
    s.fft.inverse(fu, back);
    benchmark::DoNotOptimize(back.data.data());
  }
}

void bm_rhs(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Setup s(n);
  SpectralField3 du(s.layout.spec.shape);
  for (auto _ : state) {
    compute_rhs(s.u_hat, s.wm, s.fft, s.ws, s.cfg.nu, du);
    benchmark::DoNotOptimize(du[0].data.data());
  }
}

void bm_rk4_step(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Setup s(n);
  Rk4State st(s.layout.spec.shape);
  st.u_hat = s.u_hat;
  RhsFn rhs = [&](const SpectralField3& uh, SpectralField3& du) {
    compute_rhs(uh, s.wm, s.fft, s.ws, s.cfg.nu, du);
  };
  for (auto _ : state) rk4_step(st, s.cfg.dt, rhs);
}

void bm_collect_stats(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Setup s(n);
  for (auto _ : state) {
    const FlowStats stats = collect_stats(0.0, s.u_hat, s.wm, s.cfg.nu, *s.comm);
    benchmark::DoNotOptimize(stats.energy);
  }
}

BENCHMARK(bm_cross)->Arg(32)->Arg(64);
BENCHMARK(bm_serial_r2c_yz)->Arg(32)->Arg(64);
BENCHMARK(bm_distributed_roundtrip)->Arg(32)->Arg(64);
BENCHMARK(bm_rhs)->Arg(32)->Arg(64);
BENCHMARK(bm_rk4_step)->Arg(32)->Arg(64);
BENCHMARK(bm_collect_stats)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();

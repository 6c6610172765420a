#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include "doctest.h"
#include "sdns/fft.hpp"
#include "sdns/mesh.hpp"
#include "test_support.hpp"

using namespace sdns;

namespace {

SolverConfig cfg_for(int n, Decomp d, int p, int p1, int p2) {
  SolverConfig cfg;
  cfg.n = n;
  cfg.decomp = d;
  cfg.p = p;
  cfg.p1 = p1;
  cfg.p2 = p2;
  return cfg;
}

RealField local_block(const std::vector<double>& global, std::int64_t n,
                      const Extents3& ext) {
  RealField f(ext.shape);
  for (std::int64_t i = 0; i < ext.shape.n0; ++i)
    for (std::int64_t j = 0; j < ext.shape.n1; ++j)
      for (std::int64_t k = 0; k < ext.shape.n2; ++k)
        f(i, j, k) = global[static_cast<std::size_t>(
            ((ext.offset[0] + i) * n + ext.offset[1] + j) * n +
            ext.offset[2] + k)];
  return f;
}

/// Runs the distributed forward transform and assembles the global
/// spectrum; also reports the worst round-trip error.
void forward_global(const SolverConfig& cfg, const std::vector<double>& global,
                    std::vector<Complex>& spec, double& roundtrip) {
  const std::int64_t n = cfg.n;
  const std::int64_t nf = n / 2 + 1;
  spec.assign(static_cast<std::size_t>(n * n * nf), Complex(0.0, 0.0));
  double rt = 0.0;
  std::mutex mu;
  run_group(cfg.p, [&](int rank, std::shared_ptr<Communicator> comm) {
    const RankLayout lo = build_layout(cfg, rank);
    DistributedFFT fft(cfg, lo, comm);
    const RealField u = local_block(global, n, lo.real);
    SpectralField fu(lo.spec.shape);
    fft.forward(u, fu);
    RealField back(lo.real.shape);
    fft.inverse(fu, back);
    double err = 0.0;
    for (std::size_t m = 0; m < u.data.size(); ++m)
      err = std::max(err, std::abs(u.data[m] - back.data[m]));
    std::lock_guard lk(mu);
    rt = std::max(rt, err);
    for (std::int64_t i = 0; i < lo.spec.shape.n0; ++i)
      for (std::int64_t j = 0; j < lo.spec.shape.n1; ++j)
        for (std::int64_t k = 0; k < lo.spec.shape.n2; ++k)
          spec[static_cast<std::size_t>(
              ((lo.spec.offset[0] + i) * n + lo.spec.offset[1] + j) * nf +
              lo.spec.offset[2] + k)] = fu(i, j, k);
  });
  roundtrip = rt;
}

}  // namespace

TEST_SUITE_BEGIN("fft");

TEST_CASE("distributed transforms match the naive 3-d reference") {
  const int n = 8;
  const auto global =
      test::random_reals(static_cast<std::size_t>(n) * n * n, 321u);
  const auto ref = test::naive_rfft3(global, n, n, n);

  struct Combo {
    Decomp d;
    int p, p1, p2;
  };
  const Combo combos[] = {{Decomp::Slab, 1, 1, 1},   {Decomp::Slab, 2, 2, 1},
                          {Decomp::Slab, 4, 4, 1},   {Decomp::Slab, 8, 8, 1},
                          {Decomp::Pencil, 1, 1, 1}, {Decomp::Pencil, 4, 2, 2},
                          {Decomp::Pencil, 8, 2, 4}};
  for (const Combo& c : combos) {
    CAPTURE(static_cast<int>(c.d));
    CAPTURE(c.p);
    std::vector<Complex> spec;
    double rt = 0.0;
    forward_global(cfg_for(n, c.d, c.p, c.p1, c.p2), global, spec, rt);
    CHECK(test::max_abs_diff(spec, ref) <= 1e-11);
    CHECK(rt <= 1e-13);
  }
}

TEST_CASE("a single cosine lands on one conjugate mode pair") {
  const int n = 8;
  const SolverConfig cfg = cfg_for(n, Decomp::Slab, 2, 2, 1);
  std::vector<double> global(static_cast<std::size_t>(n) * n * n);
  const double h = 2.0 * test::kPi / n;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      for (std::int64_t k = 0; k < n; ++k)
        global[static_cast<std::size_t>((i * n + j) * n + k)] =
            std::cos(h * static_cast<double>(i));

  std::vector<Complex> spec;
  double rt = 0.0;
  forward_global(cfg, global, spec, rt);

  const std::int64_t nf = n / 2 + 1;
  const double n3 = static_cast<double>(n) * n * n;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      for (std::int64_t k = 0; k < nf; ++k) {
        const Complex v = spec[static_cast<std::size_t>((i * n + j) * nf + k)];
        // cos(x): half the mass at kx = +1, half at kx = -1 (index n-1).
        const bool spike = (j == 0 && k == 0) && (i == 1 || i == n - 1);
        if (spike) {
          CHECK(std::abs(v - Complex(n3 / 2.0, 0.0)) <= 1e-9);
        } else {
          CHECK(std::abs(v) <= 1e-9);
        }
      }
}

TEST_CASE("vector overloads transform all three components") {
  const int n = 8;
  const SolverConfig cfg = cfg_for(n, Decomp::Pencil, 4, 2, 2);
  run_group(cfg.p, [&](int rank, std::shared_ptr<Communicator> comm) {
    const RankLayout lo = build_layout(cfg, rank);
    DistributedFFT fft(cfg, lo, comm);
    RealField3 u(lo.real.shape);
    for (int comp = 0; comp < 3; ++comp)
      u[comp].data = test::random_reals(u[comp].data.size(),
                                        900u + static_cast<unsigned>(
                                                   10 * rank + comp));
    SpectralField3 fu(lo.spec.shape);
    fft.forward(u, fu);

    // Component-wise calls must agree exactly.
    for (int comp = 0; comp < 3; ++comp) {
      SpectralField one(lo.spec.shape);
      fft.forward(u[comp], one);
      CHECK(test::max_abs_diff(one.data, fu[comp].data) == 0.0);
    }

    RealField3 back(lo.real.shape);
    fft.inverse(fu, back);
    for (int comp = 0; comp < 3; ++comp)
      CHECK(test::max_abs_diff(back[comp].data, u[comp].data) <= 1e-13);
  });
}

TEST_CASE("normalization: inverse(forward(f)) == f, forward unnormalized") {
  const int n = 8;
  const SolverConfig cfg = cfg_for(n, Decomp::Slab, 1, 1, 1);
  const RankLayout lo = build_layout(cfg, 0);
  auto comm = make_loopback();
  DistributedFFT fft(cfg, lo, comm);

  // Constant field: forward puts n^3 at k = 0 (unnormalized), inverse
  // restores the constant exactly once (single 1/n^3).
  RealField u(lo.real.shape);
  u.fill(2.5);
  SpectralField fu(lo.spec.shape);
  fft.forward(u, fu);
  const double n3 = static_cast<double>(n) * n * n;
  CHECK(std::abs(fu(0, 0, 0) - Complex(2.5 * n3, 0.0)) <= 1e-9);
  RealField back(lo.real.shape);
  fft.inverse(fu, back);
  for (double v : back.data) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_SUITE_END();

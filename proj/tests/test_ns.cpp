#include <cmath>
#include <memory>

#include "doctest.h"
#include "sdns/fft.hpp"
#include "sdns/navier_stokes.hpp"
#include "test_support.hpp"

using namespace sdns;

namespace {

SolverConfig serial_cfg(int n) {
  SolverConfig cfg;
  cfg.n = n;
  cfg.p = 1;
  return cfg;
}

/// max |k . u_hat| over the local spectral block.
double max_div(const SpectralField3& fu, const WavenumberMesh& wm) {
  double m = 0.0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < wm.kx.size(); ++i)
    for (std::size_t j = 0; j < wm.ky.size(); ++j)
      for (std::size_t k = 0; k < wm.kz.size(); ++k, ++idx) {
        const Complex d = wm.kx[i] * fu[0].data[idx] +
                          wm.ky[j] * fu[1].data[idx] +
                          wm.kz[k] * fu[2].data[idx];
        m = std::max(m, std::abs(d));
      }
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("ns");

TEST_CASE("Taylor-Green values at mesh points") {
  const SolverConfig cfg = serial_cfg(8);
  const RankLayout lo = build_layout(cfg, 0);
  const PhysicalMesh mesh = physical_mesh(lo);
  const RealField3 u = taylor_green_init(lo, mesh);

  for (std::int64_t i : {0, 3, 5})
    for (std::int64_t j : {1, 4})
      for (std::int64_t k : {2, 7}) {
        const double x = mesh.x[static_cast<std::size_t>(i)];
        const double y = mesh.y[static_cast<std::size_t>(j)];
        const double z = mesh.z[static_cast<std::size_t>(k)];
        CHECK(u[0](i, j, k) ==
              doctest::Approx(std::cos(x) * std::sin(y) * std::sin(z))
                  .epsilon(1e-14));
        CHECK(u[1](i, j, k) ==
              doctest::Approx(-std::sin(x) * std::cos(y) * std::sin(z))
                  .epsilon(1e-14));
        CHECK(u[2](i, j, k) == 0.0);
      }
}

TEST_CASE("initial condition dispatch") {
  const SolverConfig cfg = serial_cfg(8);
  const RankLayout lo = build_layout(cfg, 0);
  const PhysicalMesh mesh = physical_mesh(lo);
  CHECK_NOTHROW(make_initial_condition("taylor_green", lo, mesh));
  CHECK_THROWS_AS(make_initial_condition("unknown_case", lo, mesh), ConfigError);
}

TEST_CASE("pointwise cross product") {
  const Shape3 s{2, 2, 2};
  RealField3 a(s), b(s), out(s);
  // a = (1, 2, 3), b = (4, 5, 6) everywhere: a x b = (-3, 6, -3).
  a[0].fill(1.0);
  a[1].fill(2.0);
  a[2].fill(3.0);
  b[0].fill(4.0);
  b[1].fill(5.0);
  b[2].fill(6.0);
  cross(a, b, out);
  for (std::int64_t m = 0; m < s.size(); ++m) {
    CHECK(out[0].data[static_cast<std::size_t>(m)] == -3.0);
    CHECK(out[1].data[static_cast<std::size_t>(m)] == 6.0);
    CHECK(out[2].data[static_cast<std::size_t>(m)] == -3.0);
  }
}

TEST_CASE("spectral curl of Taylor-Green matches the analytic vorticity") {
  const SolverConfig cfg = serial_cfg(16);
  const RankLayout lo = build_layout(cfg, 0);
  const PhysicalMesh mesh = physical_mesh(lo);
  const WavenumberMesh wm = wavenumbers(cfg, lo);
  auto comm = make_loopback();
  DistributedFFT fft(cfg, lo, comm);

  const RealField3 u = taylor_green_init(lo, mesh);
  SpectralField3 fu(lo.spec.shape), fo(lo.spec.shape);
  fft.forward(u, fu);
  curl_hat(fu, wm, fo);
  RealField3 omega(lo.real.shape);
  fft.inverse(fo, omega);

  // omega = (sin x cos y cos z, cos x sin y cos z, -2 cos x cos y sin z).
  double err = 0.0;
  for (std::int64_t i = 0; i < lo.real.shape.n0; ++i)
    for (std::int64_t j = 0; j < lo.real.shape.n1; ++j)
      for (std::int64_t k = 0; k < lo.real.shape.n2; ++k) {
        const double x = mesh.x[static_cast<std::size_t>(i)];
        const double y = mesh.y[static_cast<std::size_t>(j)];
        const double z = mesh.z[static_cast<std::size_t>(k)];
        err = std::max(err, std::abs(omega[0](i, j, k) -
                                     std::sin(x) * std::cos(y) * std::cos(z)));
        err = std::max(err, std::abs(omega[1](i, j, k) -
                                     std::cos(x) * std::sin(y) * std::cos(z)));
        err = std::max(err, std::abs(omega[2](i, j, k) +
                                     2.0 * std::cos(x) * std::cos(y) * std::sin(z)));
      }
  CHECK(err <= 1e-12);
}

TEST_CASE("projection removes the compressible part and is idempotent") {
  const SolverConfig cfg = serial_cfg(16);
  const RankLayout lo = build_layout(cfg, 0);
  const WavenumberMesh wm = wavenumbers(cfg, lo);
  auto comm = make_loopback();
  DistributedFFT fft(cfg, lo, comm);

  RealField3 u(lo.real.shape);
  for (int comp = 0; comp < 3; ++comp)
    u[comp].data = test::random_reals(u[comp].data.size(),
                                      500u + static_cast<unsigned>(comp));
  SpectralField3 fu(lo.spec.shape);
  fft.forward(u, fu);

  const double before = max_div(fu, wm);
  CHECK(before > 1.0);  // random field is nowhere near solenoidal

  project(fu, wm);
  const double after = max_div(fu, wm);
  CHECK(after <= 1e-9);  // relative to spectra of magnitude ~n^1.5

  SpectralField3 again = fu;
  project(again, wm);
  double delta = 0.0;
  for (int comp = 0; comp < 3; ++comp)
    delta = std::max(delta,
                     test::max_abs_diff(again[comp].data, fu[comp].data));
  CHECK(delta <= 1e-12);
}

TEST_CASE("pressure mode formula") {
  const SolverConfig cfg = serial_cfg(8);
  const RankLayout lo = build_layout(cfg, 0);
  const WavenumberMesh wm = wavenumbers(cfg, lo);

  SpectralField3 nl(lo.spec.shape);
  for (int comp = 0; comp < 3; ++comp) {
    const auto re = test::random_reals(nl[comp].data.size(),
                                       600u + static_cast<unsigned>(comp));
    const auto im = test::random_reals(nl[comp].data.size(),
                                       700u + static_cast<unsigned>(comp));
    for (std::size_t m = 0; m < nl[comp].data.size(); ++m)
      nl[comp].data[m] = Complex(re[m], im[m]);
  }
  SpectralField p(lo.spec.shape);
  pressure_hat(nl, wm, p);

  std::size_t m = 0;
  double err = 0.0;
  for (std::size_t i = 0; i < wm.kx.size(); ++i)
    for (std::size_t j = 0; j < wm.ky.size(); ++j)
      for (std::size_t k = 0; k < wm.kz.size(); ++k, ++m) {
        const Complex kdot = wm.kx[i] * nl[0].data[m] +
                             wm.ky[j] * nl[1].data[m] + wm.kz[k] * nl[2].data[m];
        const Complex want = wm.k2[m] > 0.0
                                 ? Complex(0.0, -1.0) * kdot / wm.k2[m]
                                 : Complex(0.0, 0.0);
        err = std::max(err, std::abs(p.data[m] - want));
      }
  CHECK(err <= 1e-12);
}

TEST_CASE("rhs is solenoidal and linear in viscosity") {
  const SolverConfig cfg = serial_cfg(16);
  const RankLayout lo = build_layout(cfg, 0);
  const PhysicalMesh mesh = physical_mesh(lo);
  const WavenumberMesh wm = wavenumbers(cfg, lo);
  auto comm = make_loopback();
  DistributedFFT fft(cfg, lo, comm);
  RhsWorkspace ws(lo);

  RealField3 u = taylor_green_init(lo, mesh);
  SpectralField3 fu(lo.spec.shape);
  fft.forward(u, fu);
  project(fu, wm);

  SpectralField3 du1(lo.spec.shape), du2(lo.spec.shape);
  compute_rhs(fu, wm, fft, ws, 0.01, du1);
  CHECK(max_div(du1, wm) <= 1e-9);

  // d(du)/d(nu) = -k^2 u_hat exactly, so two evaluations pin the viscous term.
  compute_rhs(fu, wm, fft, ws, 0.03, du2);
  std::size_t m = 0;
  double err = 0.0;
  for (std::size_t i = 0; i < wm.kx.size(); ++i)
    for (std::size_t j = 0; j < wm.ky.size(); ++j)
      for (std::size_t k = 0; k < wm.kz.size(); ++k, ++m)
        for (int comp = 0; comp < 3; ++comp) {
          const Complex got = du2[comp].data[m] - du1[comp].data[m];
          const Complex want = -0.02 * wm.k2[m] * fu[comp].data[m];
          err = std::max(err, std::abs(got - want));
        }
  // Unnormalized spectra are O(n^3), so the subtraction leaves ~1e-12 dust.
  CHECK(err <= 1e-10);
}

TEST_SUITE_END();

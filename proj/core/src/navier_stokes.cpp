#include "sdns/navier_stokes.hpp"

#include <cmath>

namespace sdns {

RealField3 taylor_green_init(const RankLayout& layout, const PhysicalMesh& mesh) {
  RealField3 u(layout.real.shape);
  const Shape3 s = layout.real.shape;
  for (std::int64_t i = 0; i < s.n0; ++i) {
    const double sx = std::sin(mesh.x[static_cast<std::size_t>(i)]);
    const double cx = std::cos(mesh.x[static_cast<std::size_t>(i)]);
    for (std::int64_t j = 0; j < s.n1; ++j) {
      const double sy = std::sin(mesh.y[static_cast<std::size_t>(j)]);
      const double cy = std::cos(mesh.y[static_cast<std::size_t>(j)]);
      for (std::int64_t k = 0; k < s.n2; ++k) {
        const double sz = std::sin(mesh.z[static_cast<std::size_t>(k)]);
        u[0](i, j, k) = cx * sy * sz;
        u[1](i, j, k) = -sx * cy * sz;
        u[2](i, j, k) = 0.0;
      }
    }
  }
  return u;
}

RealField3 make_initial_condition(const std::string& name,
                                  const RankLayout& layout,
                                  const PhysicalMesh& mesh) {
  if (name == "taylor_green") return taylor_green_init(layout, mesh);
  throw ConfigError("unknown initial case '" + name + "'");
}

void cross(const RealField3& a, const RealField3& b, RealField3& out) {
  const std::size_t total = a[0].data.size();
  const double* a0 = a[0].data.data();
  const double* a1 = a[1].data.data();
  const double* a2 = a[2].data.data();
  const double* b0 = b[0].data.data();
  const double* b1 = b[1].data.data();
  const double* b2 = b[2].data.data();
  double* o0 = out[0].data.data();
  double* o1 = out[1].data.data();
  double* o2 = out[2].data.data();
  for (std::size_t m = 0; m < total; ++m) {
    o0[m] = a1[m] * b2[m] - a2[m] * b1[m];
    o1[m] = a2[m] * b0[m] - a0[m] * b2[m];
    o2[m] = a0[m] * b1[m] - a1[m] * b0[m];
  }
}

void curl_hat(const SpectralField3& u_hat, const WavenumberMesh& wm,
              SpectralField3& omega_hat) {
  const Shape3 s = wm.shape;
  std::size_t m = 0;
  for (std::int64_t i = 0; i < s.n0; ++i) {
    const double kx = wm.kx[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < s.n1; ++j) {
      const double ky = wm.ky[static_cast<std::size_t>(j)];
      for (std::int64_t k = 0; k < s.n2; ++k, ++m) {
        const double kz = wm.kz[static_cast<std::size_t>(k)];
        const Complex u0 = u_hat[0].data[m];
        const Complex u1 = u_hat[1].data[m];
        const Complex u2 = u_hat[2].data[m];
        // i k x u
        omega_hat[0].data[m] = Complex(0.0, 1.0) * (ky * u2 - kz * u1);
        omega_hat[1].data[m] = Complex(0.0, 1.0) * (kz * u0 - kx * u2);
        omega_hat[2].data[m] = Complex(0.0, 1.0) * (kx * u1 - ky * u0);
      }
    }
  }
}

void pressure_hat(const SpectralField3& nl_hat, const WavenumberMesh& wm,
                  SpectralField& p_hat) {
  const std::size_t total = wm.k2.size();
  for (std::size_t m = 0; m < total; ++m) {
    const Complex kd = wm.kx_over_k2[m] * nl_hat[0].data[m] +
                       wm.ky_over_k2[m] * nl_hat[1].data[m] +
                       wm.kz_over_k2[m] * nl_hat[2].data[m];
    p_hat.data[m] = Complex(0.0, -1.0) * kd;
  }
}

void project(SpectralField3& u_hat, const WavenumberMesh& wm) {
  std::size_t m = 0;
  const Shape3 s = wm.shape;
  for (std::int64_t i = 0; i < s.n0; ++i) {
    const double kx = wm.kx[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < s.n1; ++j) {
      const double ky = wm.ky[static_cast<std::size_t>(j)];
      for (std::int64_t k = 0; k < s.n2; ++k, ++m) {
        const double kz = wm.kz[static_cast<std::size_t>(k)];
        const Complex kd = kx * u_hat[0].data[m] + ky * u_hat[1].data[m] +
                           kz * u_hat[2].data[m];
        u_hat[0].data[m] -= wm.kx_over_k2[m] * kd;
        u_hat[1].data[m] -= wm.ky_over_k2[m] * kd;
        u_hat[2].data[m] -= wm.kz_over_k2[m] * kd;
      }
    }
  }
}

void compute_rhs(const SpectralField3& u_hat, const WavenumberMesh& wm,
                 DistributedFFT& fft, RhsWorkspace& ws, double nu,
                 SpectralField3& du_hat) {
  // Rotational form: du = P[(u x omega)^] - nu |k|^2 u.
  fft.inverse(u_hat, ws.vel);
  curl_hat(u_hat, wm, ws.spec);
  fft.inverse(ws.spec, ws.vor);
  cross(ws.vel, ws.vor, ws.nl);
  fft.forward(ws.nl, du_hat);

  const Shape3 s = wm.shape;
  std::size_t m = 0;
  for (std::int64_t i = 0; i < s.n0; ++i) {
    const double kx = wm.kx[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < s.n1; ++j) {
      const double ky = wm.ky[static_cast<std::size_t>(j)];
      for (std::int64_t k = 0; k < s.n2; ++k, ++m) {
        const double kz = wm.kz[static_cast<std::size_t>(k)];
        Complex c0 = du_hat[0].data[m];
        Complex c1 = du_hat[1].data[m];
        Complex c2 = du_hat[2].data[m];
        if (!wm.dealias[m]) {
          c0 = c1 = c2 = Complex(0.0, 0.0);
        }
        const Complex kd = kx * c0 + ky * c1 + kz * c2;
        c0 -= wm.kx_over_k2[m] * kd;
        c1 -= wm.ky_over_k2[m] * kd;
        c2 -= wm.kz_over_k2[m] * kd;
        const double visc = nu * wm.k2[m];
        du_hat[0].data[m] = c0 - visc * u_hat[0].data[m];
        du_hat[1].data[m] = c1 - visc * u_hat[1].data[m];
        du_hat[2].data[m] = c2 - visc * u_hat[2].data[m];
      }
    }
  }
}

}  // namespace sdns

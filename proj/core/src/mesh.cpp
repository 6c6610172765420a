#include "sdns/mesh.hpp"

#include <cmath>
#include <numbers>

namespace sdns {

PhysicalMesh physical_mesh(const RankLayout& layout) {
  const double h = 2.0 * std::numbers::pi / static_cast<double>(layout.n);
  auto axis = [h](std::int64_t len, std::int64_t off) {
    std::vector<double> v(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i)
      v[static_cast<std::size_t>(i)] = h * static_cast<double>(off + i);
    return v;
  };
  PhysicalMesh m;
  m.x = axis(layout.real.shape.n0, layout.real.offset[0]);
  m.y = axis(layout.real.shape.n1, layout.real.offset[1]);
  m.z = axis(layout.real.shape.n2, layout.real.offset[2]);
  return m;
}

WavenumberMesh wavenumbers(const SolverConfig& cfg, const RankLayout& layout) {
  WavenumberMesh wm;
  wm.n = layout.n;
  wm.shape = layout.spec.shape;

  const std::int64_t n = layout.n;
  auto full_axis = [n](std::int64_t len, std::int64_t off) {
    std::vector<double> v(static_cast<std::size_t>(len));
    for (std::int64_t j = 0; j < len; ++j)
      v[static_cast<std::size_t>(j)] =
          static_cast<double>(axis_wavenumber(off + j, n));
    return v;
  };
  wm.kx = full_axis(wm.shape.n0, layout.spec.offset[0]);
  wm.ky = full_axis(wm.shape.n1, layout.spec.offset[1]);
  // Half axis: the wavenumber equals the global index, 0 .. n/2.
  wm.kz.resize(static_cast<std::size_t>(wm.shape.n2));
  for (std::int64_t k = 0; k < wm.shape.n2; ++k)
    wm.kz[static_cast<std::size_t>(k)] =
        static_cast<double>(layout.spec.offset[2] + k);

  const std::size_t total = static_cast<std::size_t>(wm.shape.size());
  wm.k2.resize(total);
  wm.kx_over_k2.resize(total);
  wm.ky_over_k2.resize(total);
  wm.kz_over_k2.resize(total);
  std::size_t m = 0;
  for (std::int64_t i = 0; i < wm.shape.n0; ++i) {
    const double kx = wm.kx[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < wm.shape.n1; ++j) {
      const double ky = wm.ky[static_cast<std::size_t>(j)];
      for (std::int64_t k = 0; k < wm.shape.n2; ++k, ++m) {
        const double kz = wm.kz[static_cast<std::size_t>(k)];
        const double k2 = kx * kx + ky * ky + kz * kz;
        wm.k2[m] = k2;
        const double inv = k2 > 0.0 ? 1.0 / k2 : 0.0;
        wm.kx_over_k2[m] = kx * inv;
        wm.ky_over_k2[m] = ky * inv;
        wm.kz_over_k2[m] = kz * inv;
      }
    }
  }

  if (cfg.dealias) {
    wm.dealias = dealias_mask(wm);
  } else {
    wm.dealias.assign(total, 1);
  }
  return wm;
}

std::vector<std::uint8_t> dealias_mask(const WavenumberMesh& wm) {
  const double kmax = static_cast<double>(wm.n) / 3.0;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(wm.shape.size()));
  std::size_t m = 0;
  for (std::int64_t i = 0; i < wm.shape.n0; ++i) {
    const bool okx = std::abs(wm.kx[static_cast<std::size_t>(i)]) < kmax;
    for (std::int64_t j = 0; j < wm.shape.n1; ++j) {
      const bool oky = std::abs(wm.ky[static_cast<std::size_t>(j)]) < kmax;
      for (std::int64_t k = 0; k < wm.shape.n2; ++k, ++m) {
        const bool okz = std::abs(wm.kz[static_cast<std::size_t>(k)]) < kmax;
        mask[m] = (okx && oky && okz) ? 1 : 0;
      }
    }
  }
  return mask;
}

}  // namespace sdns

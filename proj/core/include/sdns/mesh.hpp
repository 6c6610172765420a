#pragma once

#include <cstdint>
#include <vector>

#include "sdns/layout.hpp"

namespace sdns {

/// Local slice of the collocation mesh on [0, 2*pi)^3, one vector per axis.
struct PhysicalMesh {
  std::vector<double> x, y, z;
};

PhysicalMesh physical_mesh(const RankLayout& layout);

/// Integer wavenumber j for global index j on a full axis of length n:
/// 0, 1, ..., n/2-1, -n/2, ..., -1.
inline std::int64_t axis_wavenumber(std::int64_t j, std::int64_t n) {
  return j <= n / 2 - 1 ? j : j - n;
}

/// Local wavenumber mesh matching the spectral layout, plus derived arrays.
/// kx/ky/kz hold integer-valued wavenumbers per local axis index; k2 and
/// k_over_k2 are flattened over the local spectral block; dealias holds the
/// strict 2/3-rule keep mask (all ones when the rule is disabled).
struct WavenumberMesh {
  std::int64_t n = 0;
  Shape3 shape;
  std::vector<double> kx, ky, kz;
  std::vector<double> k2;
  std::vector<double> kx_over_k2, ky_over_k2, kz_over_k2;
  std::vector<std::uint8_t> dealias;
};

WavenumberMesh wavenumbers(const SolverConfig& cfg, const RankLayout& layout);

/// Keep iff |kx| < n/3 and |ky| < n/3 and |kz| < n/3.
std::vector<std::uint8_t> dealias_mask(const WavenumberMesh& wm);

}  // namespace sdns

#pragma once

#include <array>
#include <vector>

#include "sdns/config.hpp"
#include "sdns/types.hpp"

namespace sdns {

/// Local extents of a distributed 3-d array plus its global offsets.
struct Extents3 {
  Shape3 shape;
  std::array<std::int64_t, 3> offset{0, 0, 0};
};

/// Per-peer element counts for one all-to-all transpose stage, indexed by
/// group rank. Counts are in complex elements.
struct TransposeStage {
  std::vector<std::int64_t> send_counts;
  std::vector<std::int64_t> recv_counts;
};

/// Everything one rank needs to know about who owns what.
///
/// Slab (p ranks): real (n/p, n, n) split along x; spectral (n, n/p, n/2+1)
/// split along y. Pencil (p = p1*p2, rank = c1*p2 + c2): real
/// (n/p1, n/p2, n) split along x and y; spectral (n, n/p1, kz_block(c2))
/// split along y and kz, where the n/2+1 kz planes are dealt in contiguous
/// blocks of ceil for the first (n/2+1) mod p2 ranks and floor after.
struct RankLayout {
  int rank = 0;
  int p = 1;
  int p1 = 1, p2 = 1;      // slab uses p1 = p, p2 = 1
  int coord1 = 0, coord2 = 0;
  std::int64_t n = 0;
  std::int64_t nf = 0;     // n/2 + 1
  Extents3 real;
  Extents3 spec;
  std::vector<TransposeStage> stages;  // 1 stage for slab, 2 for pencil
};

/// Contiguous block rule: first (total mod parts) blocks get the ceiling.
std::int64_t block_size(std::int64_t total, int parts, int index);
std::int64_t block_start(std::int64_t total, int parts, int index);

/// Builds the layout for `rank` under `cfg`. cfg must already validate.
RankLayout build_layout(const SolverConfig& cfg, int rank);

}  // namespace sdns

#include "sdns/layout.hpp"

#include <algorithm>

namespace sdns {

std::int64_t block_size(std::int64_t total, int parts, int index) {
  const std::int64_t base = total / parts;
  return base + (index < total % parts ? 1 : 0);
}

std::int64_t block_start(std::int64_t total, int parts, int index) {
  const std::int64_t base = total / parts;
  return index * base + std::min<std::int64_t>(index, total % parts);
}

RankLayout build_layout(const SolverConfig& cfg, int rank) {
  cfg.validate();
  if (rank < 0 || rank >= cfg.p)
    throw ConfigError("rank " + std::to_string(rank) + " out of range for p=" +
                      std::to_string(cfg.p));

  RankLayout lo;
  lo.rank = rank;
  lo.p = cfg.p;
  lo.n = cfg.n;
  lo.nf = cfg.n / 2 + 1;

  const std::int64_t n = cfg.n;
  if (cfg.decomp == Decomp::Slab) {
    lo.p1 = cfg.p;
    lo.p2 = 1;
    lo.coord1 = rank;
    lo.coord2 = 0;
    const std::int64_t np = n / cfg.p;
    lo.real.shape = {np, n, n};
    lo.real.offset = {rank * np, 0, 0};
    lo.spec.shape = {n, np, lo.nf};
    lo.spec.offset = {0, rank * np, 0};

    TransposeStage st;
    st.send_counts.assign(cfg.p, np * np * lo.nf);
    st.recv_counts.assign(cfg.p, np * np * lo.nf);
    lo.stages.push_back(std::move(st));
  } else {
    lo.p1 = cfg.p1;
    lo.p2 = cfg.p2;
    lo.coord1 = rank / cfg.p2;
    lo.coord2 = rank % cfg.p2;
    const std::int64_t xl = n / cfg.p1;   // real x block
    const std::int64_t yl = n / cfg.p2;   // real y block
    const std::int64_t yl2 = n / cfg.p1;  // spectral y block
    const std::int64_t b = block_size(lo.nf, cfg.p2, lo.coord2);
    lo.real.shape = {xl, yl, n};
    lo.real.offset = {lo.coord1 * xl, lo.coord2 * yl, 0};
    lo.spec.shape = {n, yl2, b};
    lo.spec.offset = {0, lo.coord1 * yl2, block_start(lo.nf, cfg.p2, lo.coord2)};

    // Stage 0: within the p2 group (fixed coord1), trade kz planes for y.
    TransposeStage s0;
    s0.send_counts.resize(cfg.p2);
    s0.recv_counts.resize(cfg.p2);
    for (int q = 0; q < cfg.p2; ++q) {
      s0.send_counts[q] = xl * yl * block_size(lo.nf, cfg.p2, q);
      s0.recv_counts[q] = xl * yl * b;
    }
    lo.stages.push_back(std::move(s0));

    // Stage 1: within the p1 group (fixed coord2), trade y for x.
    TransposeStage s1;
    s1.send_counts.assign(cfg.p1, xl * yl2 * b);
    s1.recv_counts.assign(cfg.p1, xl * yl2 * b);
    lo.stages.push_back(std::move(s1));
  }
  return lo;
}

}  // namespace sdns

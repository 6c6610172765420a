#include "sdns/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace sdns {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payloads are written as native little-endian f64");

constexpr char kMagic[4] = {'S', 'D', 'N', 'S'};
constexpr std::uint32_t kVersion = 1;

struct Header {
  char magic[4];
  std::uint32_t version;
  std::uint32_t n;
  std::uint32_t components;
  double t;
  std::uint64_t step;
};
static_assert(sizeof(Header) == 32);

/// Gather tables: rank 0 receives every rank's block, everyone else
/// receives nothing. Counts must match on both sides of the transpose.
BlockTable gather_recv_table(const SolverConfig& cfg, int my_rank) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.p), 0);
  if (my_rank == 0)
    for (int r = 0; r < cfg.p; ++r)
      counts[static_cast<std::size_t>(r)] = build_layout(cfg, r).real.shape.size();
  return BlockTable(std::move(counts));
}

BlockTable gather_send_table(const SolverConfig& cfg, const RankLayout& layout) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.p), 0);
  counts[0] = layout.real.shape.size();
  return BlockTable(std::move(counts));
}

/// Copies one rank's row-major block into/out of the global x-major array.
template <bool kToGlobal>
void blit_block(const Extents3& ext, std::int64_t n,
                double* global, double* block) {
  const Shape3 s = ext.shape;
  for (std::int64_t i = 0; i < s.n0; ++i) {
    for (std::int64_t j = 0; j < s.n1; ++j) {
      double* g = global + ((ext.offset[0] + i) * n + (ext.offset[1] + j)) * n +
                  ext.offset[2];
      double* b = block + (i * s.n1 + j) * s.n2;
      if constexpr (kToGlobal)
        std::memcpy(g, b, static_cast<std::size_t>(s.n2) * sizeof(double));
      else
        std::memcpy(b, g, static_cast<std::size_t>(s.n2) * sizeof(double));
    }
  }
}

}  // namespace

void write_checkpoint(const std::string& path, const SolverConfig& cfg,
                      const RankLayout& layout, Communicator& comm,
                      const RealField3& u, double t, std::int64_t step) {
  const bool root = comm.rank() == 0;
  const std::int64_t n = layout.n;
  const BlockTable send = gather_send_table(cfg, layout);
  const BlockTable recv = gather_recv_table(cfg, comm.rank());

  // Root opens the file before any collective and shares the verdict, so
  // an unwritable path fails every rank instead of hanging the others.
  std::ofstream out;
  std::vector<double> gathered;
  std::vector<double> global;
  std::string err;
  if (root) {
    try {
      const auto dir = std::filesystem::path(path).parent_path();
      if (!dir.empty()) std::filesystem::create_directories(dir);
      out.open(path, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open checkpoint '" + path + "' for writing");
    } catch (const std::exception& e) {
      err = e.what();
    }
    if (err.empty()) {
      Header h{};
      std::memcpy(h.magic, kMagic, 4);
      h.version = kVersion;
      h.n = static_cast<std::uint32_t>(n);
      h.components = 3;
      h.t = t;
      h.step = static_cast<std::uint64_t>(step);
      out.write(reinterpret_cast<const char*>(&h), sizeof(h));
      gathered.resize(static_cast<std::size_t>(recv.total()));
      global.resize(static_cast<std::size_t>(n * n * n));
    }
  }
  std::uint64_t elen = err.size();
  comm.broadcast_bytes(&elen, sizeof(elen), 0);
  if (elen > 0) {
    err.resize(elen);
    comm.broadcast_bytes(err.data(), elen, 0);
    throw IoError(err);
  }

  for (int c = 0; c < 3; ++c) {
    comm.all_to_all(u[c].data.data(), send, gathered.data(), recv);
    if (root) {
      for (int r = 0; r < cfg.p; ++r) {
        const RankLayout rl = build_layout(cfg, r);
        blit_block<true>(rl.real, n, global.data(),
                         gathered.data() + recv.displs[static_cast<std::size_t>(r)]);
      }
      out.write(reinterpret_cast<const char*>(global.data()),
                static_cast<std::streamsize>(global.size() * sizeof(double)));
    }
  }
  if (root && !out) throw IoError("short write to checkpoint '" + path + "'");
}

CheckpointInfo read_checkpoint(const std::string& path, const SolverConfig& cfg,
                               const RankLayout& layout, Communicator& comm,
                               RealField3& u) {
  const bool root = comm.rank() == 0;
  const std::int64_t n = layout.n;
  // Scatter is the gather run backwards: tables swap sides.
  const BlockTable send = gather_recv_table(cfg, comm.rank());
  const BlockTable recv = gather_send_table(cfg, layout);

  // Root validates and slurps the whole file before any collective, then
  // shares the verdict, so a bad file fails every rank instead of hanging
  // the others mid-scatter.
  std::vector<double> global;
  Header h{};
  std::string err;
  if (root) {
    try {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError("cannot open checkpoint '" + path + "'");
      in.read(reinterpret_cast<char*>(&h), sizeof(h));
      if (!in || std::memcmp(h.magic, kMagic, 4) != 0)
        throw IoError("checkpoint '" + path + "': bad magic");
      if (h.version != kVersion)
        throw IoError("checkpoint '" + path + "': unsupported version " +
                      std::to_string(h.version));
      if (h.n != static_cast<std::uint32_t>(n))
        throw IoError("checkpoint '" + path + "': grid size " +
                      std::to_string(h.n) + " does not match configured n=" +
                      std::to_string(n));
      if (h.components != 3)
        throw IoError("checkpoint '" + path + "': expected 3 components");
      global.resize(static_cast<std::size_t>(3 * n * n * n));
      in.read(reinterpret_cast<char*>(global.data()),
              static_cast<std::streamsize>(global.size() * sizeof(double)));
      if (!in) throw IoError("checkpoint '" + path + "': truncated payload");
    } catch (const IoError& e) {
      err = e.what();
    }
  }
  std::uint64_t elen = err.size();
  comm.broadcast_bytes(&elen, sizeof(elen), 0);
  if (elen > 0) {
    err.resize(elen);
    comm.broadcast_bytes(err.data(), elen, 0);
    throw IoError(err);
  }

  std::vector<double> scattered(static_cast<std::size_t>(send.total()));
  const std::int64_t n3 = n * n * n;
  for (int c = 0; c < 3; ++c) {
    if (root) {
      for (int r = 0; r < cfg.p; ++r) {
        const RankLayout rl = build_layout(cfg, r);
        blit_block<false>(rl.real, n, global.data() + c * n3,
                          scattered.data() + send.displs[static_cast<std::size_t>(r)]);
      }
    }
    comm.all_to_all(scattered.data(), send, u[c].data.data(), recv);
  }

  // Everyone learns t and step from the root's header.
  double meta[2] = {h.t, static_cast<double>(h.step)};
  comm.broadcast_bytes(meta, sizeof(meta), 0);
  return CheckpointInfo{meta[0], static_cast<std::int64_t>(meta[1])};
}

}  // namespace sdns

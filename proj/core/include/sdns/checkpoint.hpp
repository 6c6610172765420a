#pragma once

#include <string>

#include "sdns/fields.hpp"
#include "sdns/layout.hpp"
#include "sdns/transport.hpp"

namespace sdns {

/// Binary checkpoint: 32-byte header (magic "SDNS", u32 format version,
/// u32 n, u32 component count, f64 t, u64 step) followed by three n^3
/// little-endian f64 payloads in global x-major (i, j, k) order.
/// The global ordering makes files independent of the writing
/// decomposition: any valid (decomp, p) reads any other bit-exactly.
struct CheckpointInfo {
  double t = 0.0;
  std::int64_t step = 0;
};

/// Collective: every rank passes its local block; rank 0 gathers through
/// the layout offsets and writes the file.
void write_checkpoint(const std::string& path, const SolverConfig& cfg,
                      const RankLayout& layout, Communicator& comm,
                      const RealField3& u, double t, std::int64_t step);

/// Collective: rank 0 reads and validates the file, then scatters each
/// rank its block. Throws IoError on magic/version/size mismatch.
CheckpointInfo read_checkpoint(const std::string& path, const SolverConfig& cfg,
                               const RankLayout& layout, Communicator& comm,
                               RealField3& u);

}  // namespace sdns

#pragma once

#include <memory>

#include "sdns/fields.hpp"
#include "sdns/layout.hpp"
#include "sdns/serial_fft.hpp"
#include "sdns/transport.hpp"

namespace sdns {

/// Distributed 3-d real-to-complex FFT over the rank layout's transpose
/// plan. Forward maps the rank's real block to its spectral block;
/// inverse maps back and applies the single 1/n^3 normalization to the
/// final real data, so forward(inverse(f)) == f up to rounding.
///
/// Slab pipeline: r2c over (y,z) -> pack y blocks -> all-to-all ->
/// c2c along x. Pencil pipeline: r2c along z -> all-to-all among the p2
/// group (kz planes for y) -> c2c along y -> all-to-all among the p1 group
/// (y for x) -> c2c along x. Inverses run the mirrored order.
///
/// Construction is collective for pencil layouts (it splits the world
/// communicator into row and column groups). All transform calls are
/// collective across the group. No buffers are allocated after
/// construction.
class DistributedFFT {
 public:
  DistributedFFT(const SolverConfig& cfg, const RankLayout& layout,
                 std::shared_ptr<Communicator> comm);

  const RankLayout& layout() const { return layout_; }
  Shape3 real_shape() const { return layout_.real.shape; }
  Shape3 spec_shape() const { return layout_.spec.shape; }

  void forward(const RealField& u, SpectralField& fu);
  void inverse(const SpectralField& fu, RealField& u);
  void forward(const RealField3& u, SpectralField3& fu);
  void inverse(const SpectralField3& fu, RealField3& u);

 private:
  void forward_slab(const RealField& u, SpectralField& fu);
  void inverse_slab(const SpectralField& fu, RealField& u);
  void forward_pencil(const RealField& u, SpectralField& fu);
  void inverse_pencil(const SpectralField& fu, RealField& u);

  RankLayout layout_;
  bool slab_ = true;
  std::shared_ptr<Communicator> world_;
  std::shared_ptr<Communicator> row_;  // pencil: fixed coord1 (size p2)
  std::shared_ptr<Communicator> col_;  // pencil: fixed coord2 (size p1)
  SerialFFT serial_;

  BlockTable send_a_, recv_a_;  // stage 0 tables
  BlockTable send_b_, recv_b_;  // stage 1 tables (pencil only)

  std::vector<Complex> work_;   // r2c output / c2r input
  std::vector<Complex> pack_a_, recv_buf_a_;
  std::vector<Complex> mid_a_, mid_b_;          // pencil y-complete arrays
  std::vector<Complex> pack_b_, recv_buf_b_;

  double norm_ = 1.0;
};

}  // namespace sdns

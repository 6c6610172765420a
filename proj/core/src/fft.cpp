#include "sdns/fft.hpp"

#include <cstring>

namespace sdns {

namespace {

void copy_block(const Complex* src, Complex* dst, std::int64_t count) {
  std::memcpy(dst, src, static_cast<std::size_t>(count) * sizeof(Complex));
}

}  // namespace

DistributedFFT::DistributedFFT(const SolverConfig& cfg, const RankLayout& layout,
                               std::shared_ptr<Communicator> comm)
    : layout_(layout), slab_(cfg.decomp == Decomp::Slab), world_(std::move(comm)) {
  if (world_->size() != cfg.p)
    throw ConfigError("communicator size " + std::to_string(world_->size()) +
                      " does not match configured p=" + std::to_string(cfg.p));
  if (world_->rank() != layout_.rank)
    throw ConfigError("communicator rank does not match layout rank");

  const std::int64_t n = layout_.n;
  const std::int64_t nf = layout_.nf;
  norm_ = 1.0 / (static_cast<double>(n) * static_cast<double>(n) *
                 static_cast<double>(n));

  if (slab_) {
    const std::int64_t np = layout_.real.shape.n0;
    send_a_ = BlockTable(layout_.stages[0].send_counts);
    recv_a_ = BlockTable(layout_.stages[0].recv_counts);
    work_.resize(static_cast<std::size_t>(np * n * nf));
    pack_a_.resize(static_cast<std::size_t>(send_a_.total()));
    recv_buf_a_.resize(static_cast<std::size_t>(recv_a_.total()));
  } else {
    // Row group: ranks sharing coord1 (trade kz for y); ordered by coord2.
    // Column group: ranks sharing coord2 (trade y for x); ordered by coord1.
    row_ = world_->split(layout_.coord1, layout_.coord2);
    col_ = world_->split(layout_.coord2, layout_.coord1);
    send_a_ = BlockTable(layout_.stages[0].send_counts);
    recv_a_ = BlockTable(layout_.stages[0].recv_counts);
    send_b_ = BlockTable(layout_.stages[1].send_counts);
    recv_b_ = BlockTable(layout_.stages[1].recv_counts);

    const std::int64_t xl = layout_.real.shape.n0;
    const std::int64_t yl = layout_.real.shape.n1;
    const std::int64_t b = layout_.spec.shape.n2;
    work_.resize(static_cast<std::size_t>(xl * yl * nf));
    pack_a_.resize(static_cast<std::size_t>(send_a_.total()));
    recv_buf_a_.resize(static_cast<std::size_t>(recv_a_.total()));
    mid_a_.resize(static_cast<std::size_t>(xl * n * b));
    mid_b_.resize(static_cast<std::size_t>(xl * n * b));
    pack_b_.resize(static_cast<std::size_t>(send_b_.total()));
    recv_buf_b_.resize(static_cast<std::size_t>(recv_b_.total()));
  }
}

void DistributedFFT::forward(const RealField& u, SpectralField& fu) {
  if (u.shape != layout_.real.shape || fu.shape != layout_.spec.shape)
    throw ConfigError("forward: field shape does not match layout");
  slab_ ? forward_slab(u, fu) : forward_pencil(u, fu);
}

void DistributedFFT::inverse(const SpectralField& fu, RealField& u) {
  if (u.shape != layout_.real.shape || fu.shape != layout_.spec.shape)
    throw ConfigError("inverse: field shape does not match layout");
  slab_ ? inverse_slab(fu, u) : inverse_pencil(fu, u);
}

void DistributedFFT::forward(const RealField3& u, SpectralField3& fu) {
  for (int i = 0; i < 3; ++i) forward(u[i], fu[i]);
}

void DistributedFFT::inverse(const SpectralField3& fu, RealField3& u) {
  for (int i = 0; i < 3; ++i) inverse(fu[i], u[i]);
}

// --- slab --------------------------------------------------------------

void DistributedFFT::forward_slab(const RealField& u, SpectralField& fu) {
  const std::int64_t n = layout_.n, nf = layout_.nf;
  const std::int64_t np = layout_.real.shape.n0;
  const int p = layout_.p;

  // (np, n, n) real -> (np, n, nf) complex, still split along x.
  serial_.forward_r2c_yz({np, n, n}, u.data.data(), work_.data());

  // Pack peer q's y planes; each (i, y-slice) is one contiguous run.
  const std::int64_t run = np * nf;
  for (int q = 0; q < p; ++q) {
    Complex* dst = pack_a_.data() + send_a_.displs[static_cast<std::size_t>(q)];
    for (std::int64_t i = 0; i < np; ++i)
      copy_block(work_.data() + (i * n + q * np) * nf, dst + i * run, run);
  }

  world_->all_to_all(pack_a_.data(), send_a_, recv_buf_a_.data(), recv_a_);

  // Received blocks are (np, np, nf) per peer in ascending x; back to back
  // they already form (n, np, nf).
  serial_.c2c({n, np, nf}, 0, FftDir::Forward, recv_buf_a_.data(),
              fu.data.data());
}

void DistributedFFT::inverse_slab(const SpectralField& fu, RealField& u) {
  const std::int64_t n = layout_.n, nf = layout_.nf;
  const std::int64_t np = layout_.real.shape.n0;
  const int p = layout_.p;

  serial_.c2c({n, np, nf}, 0, FftDir::Backward, fu.data.data(),
              recv_buf_a_.data());

  // x blocks are contiguous in the send buffer; unpack y blocks on receive.
  world_->all_to_all(recv_buf_a_.data(), recv_a_, pack_a_.data(), send_a_);

  const std::int64_t run = np * nf;
  for (int q = 0; q < p; ++q) {
    const Complex* src =
        pack_a_.data() + send_a_.displs[static_cast<std::size_t>(q)];
    for (std::int64_t i = 0; i < np; ++i)
      copy_block(src + i * run, work_.data() + (i * n + q * np) * nf, run);
  }

  serial_.inverse_c2r_yz({np, n, n}, work_.data(), u.data.data());
  for (auto& v : u.data) v *= norm_;
}

// --- pencil --------------------------------------------------------------

void DistributedFFT::forward_pencil(const RealField& u, SpectralField& fu) {
  const std::int64_t n = layout_.n, nf = layout_.nf;
  const std::int64_t xl = layout_.real.shape.n0;
  const std::int64_t yl = layout_.real.shape.n1;
  const std::int64_t yl2 = layout_.spec.shape.n1;
  const std::int64_t b = layout_.spec.shape.n2;

  // Stage 1: r2c along z, still split in x and y.
  serial_.forward_r2c_z({xl, yl, n}, u.data.data(), work_.data());

  // Trade kz planes for y within the row group: send peer q its kz block.
  for (int q = 0; q < layout_.p2; ++q) {
    const std::int64_t bq = block_size(nf, layout_.p2, q);
    const std::int64_t off = block_start(nf, layout_.p2, q);
    Complex* dst = pack_a_.data() + send_a_.displs[static_cast<std::size_t>(q)];
    for (std::int64_t i = 0; i < xl; ++i)
      for (std::int64_t j = 0; j < yl; ++j)
        copy_block(work_.data() + (i * yl + j) * nf + off,
                   dst + (i * yl + j) * bq, bq);
  }

  row_->all_to_all(pack_a_.data(), send_a_, recv_buf_a_.data(), recv_a_);

  // Assemble (xl, n, b): peer q supplied y slice [q*yl, (q+1)*yl).
  const std::int64_t run_a = yl * b;
  for (int q = 0; q < layout_.p2; ++q) {
    const Complex* src =
        recv_buf_a_.data() + recv_a_.displs[static_cast<std::size_t>(q)];
    for (std::int64_t i = 0; i < xl; ++i)
      copy_block(src + i * run_a, mid_a_.data() + (i * n + q * yl) * b, run_a);
  }

  // Stage 2: c2c along y.
  serial_.c2c({xl, n, b}, 1, FftDir::Forward, mid_a_.data(), mid_b_.data());

  // Trade y for x within the column group: send peer s its y slice.
  const std::int64_t run_b = yl2 * b;
  for (int s = 0; s < layout_.p1; ++s) {
    Complex* dst = pack_b_.data() + send_b_.displs[static_cast<std::size_t>(s)];
    for (std::int64_t i = 0; i < xl; ++i)
      copy_block(mid_b_.data() + (i * n + s * yl2) * b, dst + i * run_b, run_b);
  }

  col_->all_to_all(pack_b_.data(), send_b_, recv_buf_b_.data(), recv_b_);

  // Received x blocks already form (n, yl2, b); c2c along x finishes.
  serial_.c2c({n, yl2, b}, 0, FftDir::Forward, recv_buf_b_.data(),
              fu.data.data());
}

void DistributedFFT::inverse_pencil(const SpectralField& fu, RealField& u) {
  const std::int64_t n = layout_.n, nf = layout_.nf;
  const std::int64_t xl = layout_.real.shape.n0;
  const std::int64_t yl = layout_.real.shape.n1;
  const std::int64_t yl2 = layout_.spec.shape.n1;
  const std::int64_t b = layout_.spec.shape.n2;

  serial_.c2c({n, yl2, b}, 0, FftDir::Backward, fu.data.data(),
              recv_buf_b_.data());

  // x blocks are contiguous on send; unpack y slices on receive.
  col_->all_to_all(recv_buf_b_.data(), recv_b_, pack_b_.data(), send_b_);

  const std::int64_t run_b = yl2 * b;
  for (int s = 0; s < layout_.p1; ++s) {
    const Complex* src =
        pack_b_.data() + send_b_.displs[static_cast<std::size_t>(s)];
    for (std::int64_t i = 0; i < xl; ++i)
      copy_block(src + i * run_b, mid_b_.data() + (i * n + s * yl2) * b, run_b);
  }

  serial_.c2c({xl, n, b}, 1, FftDir::Backward, mid_b_.data(), mid_a_.data());

  // Return each peer its y slice; receive my kz planes back.
  const std::int64_t run_a = yl * b;
  for (int q = 0; q < layout_.p2; ++q) {
    Complex* dst =
        recv_buf_a_.data() + recv_a_.displs[static_cast<std::size_t>(q)];
    for (std::int64_t i = 0; i < xl; ++i)
      copy_block(mid_a_.data() + (i * n + q * yl) * b, dst + i * run_a, run_a);
  }

  row_->all_to_all(recv_buf_a_.data(), recv_a_, pack_a_.data(), send_a_);

  for (int q = 0; q < layout_.p2; ++q) {
    const std::int64_t bq = block_size(nf, layout_.p2, q);
    const std::int64_t off = block_start(nf, layout_.p2, q);
    const Complex* src =
        pack_a_.data() + send_a_.displs[static_cast<std::size_t>(q)];
    for (std::int64_t i = 0; i < xl; ++i)
      for (std::int64_t j = 0; j < yl; ++j)
        copy_block(src + (i * yl + j) * bq,
                   work_.data() + (i * yl + j) * nf + off, bq);
  }

  serial_.inverse_c2r_z({xl, yl, n}, work_.data(), u.data.data());
  for (auto& v : u.data) v *= norm_;
}

}  // namespace sdns

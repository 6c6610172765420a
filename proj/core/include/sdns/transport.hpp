#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "sdns/types.hpp"

namespace sdns {

/// Per-peer element counts (and derived displacements) for one side of a
/// variable all-to-all. counts[i] is the number of elements exchanged with
/// peer i; blocks are laid out back to back in peer order.
struct BlockTable {
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> displs;

  BlockTable() = default;
  explicit BlockTable(std::vector<std::int64_t> c) : counts(std::move(c)) {
    displs.resize(counts.size());
    std::exclusive_scan(counts.begin(), counts.end(), displs.begin(),
                        std::int64_t{0});
  }
  static BlockTable uniform(int peers, std::int64_t count) {
    return BlockTable(std::vector<std::int64_t>(static_cast<std::size_t>(peers),
                                                count));
  }
  std::int64_t total() const {
    return counts.empty() ? 0 : displs.back() + counts.back();
  }
};

enum class ReduceOp { Sum, Max, Min };

/// Rank-to-rank collective communication within one group.
///
/// All operations are collective: every rank of the group must call the same
/// operation with consistent arguments, in the same order. Violations raise
/// ProtocolError on every rank; a rank that waits longer than the backend
/// timeout raises TimeoutError. Reductions use a fixed ascending-rank order,
/// so repeated runs produce bit-identical results.
class Communicator {
 public:
  virtual ~Communicator() = default;

  int rank() const { return rank_; }
  int size() const { return size_; }

  /// Exchanges variable-size blocks; tables are in elements of `elem_size`
  /// bytes. send/recv may alias only if the backend documents it.
  virtual void all_to_all_bytes(const void* send, const BlockTable& send_blocks,
                                void* recv, const BlockTable& recv_blocks,
                                std::size_t elem_size) = 0;

  /// In-place elementwise reduction over all ranks.
  virtual void allreduce(std::span<double> values, ReduceOp op) = 0;

  virtual void broadcast_bytes(void* data, std::size_t nbytes, int root) = 0;

  virtual void barrier() = 0;

  /// Splits into disjoint subgroups by color; ranks order by (key, rank).
  virtual std::shared_ptr<Communicator> split(int color, int key) = 0;

  template <class T>
  void all_to_all(const T* send, const BlockTable& send_blocks, T* recv,
                  const BlockTable& recv_blocks) {
    all_to_all_bytes(send, send_blocks, recv, recv_blocks, sizeof(T));
  }

  double allreduce_sum(double x) {
    allreduce(std::span<double>(&x, 1), ReduceOp::Sum);
    return x;
  }
  double allreduce_max(double x) {
    allreduce(std::span<double>(&x, 1), ReduceOp::Max);
    return x;
  }
  double allreduce_min(double x) {
    allreduce(std::span<double>(&x, 1), ReduceOp::Min);
    return x;
  }

 protected:
  Communicator(int rank, int size) : rank_(rank), size_(size) {}

 private:
  int rank_ = 0;
  int size_ = 1;
};

/// Single-rank backend: collectives degenerate to local copies (one memcpy
/// per all-to-all, nothing at all for reductions and barriers).
std::shared_ptr<Communicator> make_loopback();

/// Runs body(rank, comm) for every rank of a fresh in-process group, one
/// thread per rank, and joins them. If any rank throws, the group is
/// poisoned so the rest fail fast, and the lowest-rank exception is
/// rethrown (ranks failing together rethrow rank 0's copy).
void run_group(
    int size,
    const std::function<void(int rank, std::shared_ptr<Communicator> comm)>& body,
    std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// Shared state for a group of ranks driven by threads of this process.
/// Construct once with the group size, then hand communicator(r) to the
/// thread driving rank r. Collectives rendezvous on an internal bulletin
/// board; any protocol violation or timeout poisons the group so every
/// rank fails fast instead of deadlocking.
class InProcessBackend {
 public:
  explicit InProcessBackend(
      int size, std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~InProcessBackend();

  int size() const;
  std::shared_ptr<Communicator> communicator(int rank);

  /// Marks the group failed and wakes all waiters; blocked collectives
  /// raise ProtocolError carrying `reason`.
  void poison(const std::string& reason);

  struct Impl;  // defined in transport.cpp

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace sdns

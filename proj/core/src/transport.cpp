#include "sdns/transport.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstring>
#include <map>
#include <mutex>
#include <thread>

namespace sdns {

namespace {

class LoopbackComm : public Communicator {
 public:
  LoopbackComm() : Communicator(0, 1) {}

  void all_to_all_bytes(const void* send, const BlockTable& send_blocks,
                        void* recv, const BlockTable& recv_blocks,
                        std::size_t elem_size) override {
    if (send_blocks.counts.size() != 1 || recv_blocks.counts.size() != 1)
      throw ProtocolError("loopback all_to_all expects single-peer tables");
    if (send_blocks.counts[0] != recv_blocks.counts[0])
      throw ProtocolError("loopback all_to_all count mismatch: send " +
                          std::to_string(send_blocks.counts[0]) + " recv " +
                          std::to_string(recv_blocks.counts[0]));
    const auto* src =
        static_cast<const std::byte*>(send) + send_blocks.displs[0] * static_cast<std::int64_t>(elem_size);
    auto* dst =
        static_cast<std::byte*>(recv) + recv_blocks.displs[0] * static_cast<std::int64_t>(elem_size);
    const std::size_t nbytes =
        static_cast<std::size_t>(send_blocks.counts[0]) * elem_size;
    if (dst != src && nbytes > 0) std::memcpy(dst, src, nbytes);
  }

  void allreduce(std::span<double>, ReduceOp) override {}
  void broadcast_bytes(void*, std::size_t, int root) override {
    if (root != 0) throw ProtocolError("loopback broadcast root must be 0");
  }
  void barrier() override {}
  std::shared_ptr<Communicator> split(int, int) override {
    return std::make_shared<LoopbackComm>();
  }
};

enum class OpKind { None, AllToAll, Allreduce, Broadcast, Barrier, Split };

const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::AllToAll: return "all_to_all";
    case OpKind::Allreduce: return "allreduce";
    case OpKind::Broadcast: return "broadcast";
    case OpKind::Barrier: return "barrier";
    case OpKind::Split: return "split";
    default: return "none";
  }
}

/// One rank's arguments for the collective in flight. Pointer fields refer
/// to caller-owned storage, which stays alive until the rank leaves the
/// collective -- and no rank leaves before every rank finished copying.
struct Post {
  OpKind kind = OpKind::None;
  const std::byte* send = nullptr;
  std::byte* recv = nullptr;
  const BlockTable* send_blocks = nullptr;
  const BlockTable* recv_blocks = nullptr;
  std::size_t elem = 0;
  std::vector<double> reduce_in;
  ReduceOp op = ReduceOp::Sum;
  void* bcast_data = nullptr;
  std::size_t bcast_bytes = 0;
  int root = -1;
  int color = 0;
  int key = 0;
};

}  // namespace

struct InProcessBackend::Impl {
  explicit Impl(int n, std::chrono::milliseconds t) : size(n), timeout(t) {
    posts.resize(static_cast<std::size_t>(n));
    split_out.resize(static_cast<std::size_t>(n));
  }

  const int size;
  const std::chrono::milliseconds timeout;

  std::mutex m;
  std::condition_variable cv;
  bool poisoned = false;
  bool timed_out = false;
  std::string reason;

  std::vector<Post> posts;
  std::vector<double> reduce_out;
  std::vector<std::shared_ptr<Communicator>> split_out;

  struct Gate {
    int count = 0;
    std::uint64_t gen = 0;
  };
  Gate enter, leave;

  void poison(bool timeout_flavour, std::string why) {
    poisoned = true;
    timed_out = timed_out || timeout_flavour;
    if (reason.empty()) reason = std::move(why);
    cv.notify_all();
  }

  void throw_if_poisoned() const {
    if (!poisoned) return;
    if (timed_out) throw TimeoutError(reason);
    throw ProtocolError(reason);
  }

  /// Generation-counted barrier. The last arriver runs `prepare` while still
  /// holding the lock, before releasing the others.
  template <class Prepare>
  void arrive(std::unique_lock<std::mutex>& lk, Gate& gate, int rank,
              Prepare&& prepare) {
    const std::uint64_t my_gen = gate.gen;
    if (++gate.count == size) {
      gate.count = 0;
      prepare();
      ++gate.gen;
      cv.notify_all();
      return;
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (gate.gen == my_gen && !poisoned) {
      if (cv.wait_until(lk, deadline) == std::cv_status::timeout &&
          gate.gen == my_gen && !poisoned) {
        poison(true, "collective timed out after " +
                         std::to_string(timeout.count()) + " ms waiting for peers (rank " +
                         std::to_string(rank) + ")");
      }
    }
  }
};

namespace {

class InProcessComm : public Communicator {
 public:
  InProcessComm(std::shared_ptr<InProcessBackend::Impl> g, int rank)
      : Communicator(rank, g->size), g_(std::move(g)) {}

  void all_to_all_bytes(const void* send, const BlockTable& send_blocks,
                        void* recv, const BlockTable& recv_blocks,
                        std::size_t elem_size) override {
    collective(
        OpKind::AllToAll,
        [&](Post& p) {
          p.send = static_cast<const std::byte*>(send);
          p.recv = static_cast<std::byte*>(recv);
          p.send_blocks = &send_blocks;
          p.recv_blocks = &recv_blocks;
          p.elem = elem_size;
        },
        [&] { validate_all_to_all(); },
        [&] {
          auto& g = *g_;
          const int me = rank();
          const Post& mine = g.posts[static_cast<std::size_t>(me)];
          for (int q = 0; q < size(); ++q) {
            const Post& theirs = g.posts[static_cast<std::size_t>(q)];
            const std::int64_t count = mine.recv_blocks->counts[static_cast<std::size_t>(q)];
            if (count == 0) continue;
            const std::byte* src =
                theirs.send + theirs.send_blocks->displs[static_cast<std::size_t>(me)] *
                                  static_cast<std::int64_t>(elem_size);
            std::byte* dst =
                mine.recv + mine.recv_blocks->displs[static_cast<std::size_t>(q)] *
                                static_cast<std::int64_t>(elem_size);
            std::memcpy(dst, src, static_cast<std::size_t>(count) * elem_size);
          }
        });
  }

  void allreduce(std::span<double> values, ReduceOp op) override {
    collective(
        OpKind::Allreduce,
        [&](Post& p) {
          p.reduce_in.assign(values.begin(), values.end());
          p.op = op;
        },
        [&] { validate_and_fold_reduce(); },
        [&] {
          // reduce_out was folded under the lock; read-only from here on.
          std::copy(g_->reduce_out.begin(), g_->reduce_out.end(), values.begin());
        });
  }

  void broadcast_bytes(void* data, std::size_t nbytes, int root) override {
    collective(
        OpKind::Broadcast,
        [&](Post& p) {
          p.bcast_data = data;
          p.bcast_bytes = nbytes;
          p.root = root;
        },
        [&] { validate_broadcast(); },
        [&] {
          auto& g = *g_;
          if (rank() != g.posts[0].root && nbytes > 0) {
            const Post& rp = g.posts[static_cast<std::size_t>(g.posts[0].root)];
            std::memcpy(data, rp.bcast_data, nbytes);
          }
        });
  }

  void barrier() override {
    collective(OpKind::Barrier, [](Post&) {}, [&] { validate_same_kind(); },
               [] {});
  }

  std::shared_ptr<Communicator> split(int color, int key) override {
    std::shared_ptr<Communicator> result;
    collective(
        OpKind::Split,
        [&](Post& p) {
          p.color = color;
          p.key = key;
        },
        [&] { build_subgroups(); },
        [&] {
          result = std::move(g_->split_out[static_cast<std::size_t>(rank())]);
        });
    return result;
  }

 private:
  std::shared_ptr<InProcessBackend::Impl> g_;

  template <class Fill, class Prepare, class Compute>
  void collective(OpKind kind, Fill&& fill, Prepare&& prepare,
                  Compute&& compute) {
    auto& g = *g_;
    std::unique_lock lk(g.m);
    g.throw_if_poisoned();
    Post& mine = g.posts[static_cast<std::size_t>(rank())];
    mine.kind = kind;
    fill(mine);
    g.arrive(lk, g.enter, rank(), prepare);
    g.throw_if_poisoned();
    lk.unlock();
    compute();
    lk.lock();
    g.arrive(lk, g.leave, rank(), [] {});
    g.throw_if_poisoned();
  }

  // --- prepare-phase validators; run once, under the lock ------------------

  void validate_same_kind() {
    auto& g = *g_;
    const OpKind kind = g.posts[0].kind;
    for (int r = 1; r < size(); ++r) {
      if (g.posts[static_cast<std::size_t>(r)].kind != kind) {
        g.poison(false, std::string("mismatched collectives: rank 0 called ") +
                            op_name(kind) + " while rank " + std::to_string(r) +
                            " called " +
                            op_name(g.posts[static_cast<std::size_t>(r)].kind));
        return;
      }
    }
  }

  void validate_all_to_all() {
    auto& g = *g_;
    validate_same_kind();
    if (g.poisoned) return;
    const std::size_t n = static_cast<std::size_t>(size());
    for (int r = 0; r < size(); ++r) {
      const Post& p = g.posts[static_cast<std::size_t>(r)];
      if (p.send_blocks->counts.size() != n || p.recv_blocks->counts.size() != n) {
        g.poison(false, "all_to_all block table size mismatch at rank " +
                            std::to_string(r));
        return;
      }
      if (p.elem != g.posts[0].elem) {
        g.poison(false, "all_to_all element size mismatch at rank " +
                            std::to_string(r));
        return;
      }
    }
    for (int i = 0; i < size(); ++i) {
      for (int j = 0; j < size(); ++j) {
        const std::int64_t s =
            g.posts[static_cast<std::size_t>(i)].send_blocks->counts[static_cast<std::size_t>(j)];
        const std::int64_t r =
            g.posts[static_cast<std::size_t>(j)].recv_blocks->counts[static_cast<std::size_t>(i)];
        if (s != r) {
          g.poison(false, "all_to_all table mismatch: rank " + std::to_string(i) +
                              " sends " + std::to_string(s) + " elements to rank " +
                              std::to_string(j) + " which expects " +
                              std::to_string(r));
          return;
        }
      }
    }
  }

  void validate_and_fold_reduce() {
    auto& g = *g_;
    validate_same_kind();
    if (g.poisoned) return;
    const std::size_t len = g.posts[0].reduce_in.size();
    const ReduceOp op = g.posts[0].op;
    for (int r = 1; r < size(); ++r) {
      const Post& p = g.posts[static_cast<std::size_t>(r)];
      if (p.reduce_in.size() != len || p.op != op) {
        g.poison(false, "allreduce argument mismatch at rank " + std::to_string(r));
        return;
      }
    }
    g.reduce_out = g.posts[0].reduce_in;
    for (int r = 1; r < size(); ++r) {
      const Post& p = g.posts[static_cast<std::size_t>(r)];
      for (std::size_t m = 0; m < len; ++m) {
        switch (op) {
          case ReduceOp::Sum: g.reduce_out[m] += p.reduce_in[m]; break;
          case ReduceOp::Max: g.reduce_out[m] = std::max(g.reduce_out[m], p.reduce_in[m]); break;
          case ReduceOp::Min: g.reduce_out[m] = std::min(g.reduce_out[m], p.reduce_in[m]); break;
        }
      }
    }
  }

  void validate_broadcast() {
    auto& g = *g_;
    validate_same_kind();
    if (g.poisoned) return;
    const int root = g.posts[0].root;
    const std::size_t nbytes = g.posts[0].bcast_bytes;
    if (root < 0 || root >= size()) {
      g.poison(false, "broadcast root " + std::to_string(root) + " out of range");
      return;
    }
    for (int r = 1; r < size(); ++r) {
      const Post& p = g.posts[static_cast<std::size_t>(r)];
      if (p.root != root || p.bcast_bytes != nbytes) {
        g.poison(false, "broadcast argument mismatch at rank " + std::to_string(r));
        return;
      }
    }
  }

  void build_subgroups() {
    auto& g = *g_;
    validate_same_kind();
    if (g.poisoned) return;
    std::map<int, std::vector<std::pair<int, int>>> groups;  // color -> (key, rank)
    for (int r = 0; r < size(); ++r)
      groups[g.posts[static_cast<std::size_t>(r)].color].emplace_back(
          g.posts[static_cast<std::size_t>(r)].key, r);
    for (auto& [color, members] : groups) {
      std::sort(members.begin(), members.end());
      auto sub = std::make_shared<InProcessBackend::Impl>(
          static_cast<int>(members.size()), g.timeout);
      for (std::size_t idx = 0; idx < members.size(); ++idx)
        g.split_out[static_cast<std::size_t>(members[idx].second)] =
            std::make_shared<InProcessComm>(sub, static_cast<int>(idx));
    }
  }
};

}  // namespace

std::shared_ptr<Communicator> make_loopback() {
  return std::make_shared<LoopbackComm>();
}

InProcessBackend::InProcessBackend(int size, std::chrono::milliseconds timeout) {
  if (size < 1) throw ConfigError("InProcessBackend size must be >= 1");
  impl_ = std::make_shared<Impl>(size, timeout);
}

InProcessBackend::~InProcessBackend() = default;

int InProcessBackend::size() const { return impl_->size; }

std::shared_ptr<Communicator> InProcessBackend::communicator(int rank) {
  if (rank < 0 || rank >= impl_->size)
    throw ConfigError("communicator rank " + std::to_string(rank) +
                      " out of range for size " + std::to_string(impl_->size));
  return std::make_shared<InProcessComm>(impl_, rank);
}

void InProcessBackend::poison(const std::string& reason) {
  std::lock_guard lk(impl_->m);
  impl_->poison(false, reason);
}

void run_group(
    int size,
    const std::function<void(int rank, std::shared_ptr<Communicator> comm)>& body,
    std::chrono::milliseconds timeout) {
  InProcessBackend backend(size, timeout);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(size));
  auto worker = [&](int rank) {
    try {
      body(rank, backend.communicator(rank));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(rank)] = std::current_exception();
      backend.poison("rank " + std::to_string(rank) + " failed: " + e.what());
    } catch (...) {
      errors[static_cast<std::size_t>(rank)] = std::current_exception();
      backend.poison("rank " + std::to_string(rank) + " failed");
    }
  };
  if (size == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(size));
    for (int r = 0; r < size; ++r) threads.emplace_back(worker, r);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sdns

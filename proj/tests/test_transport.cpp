#include <atomic>
#include <chrono>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdns/transport.hpp"

using namespace sdns;
using namespace std::chrono_literals;

TEST_SUITE_BEGIN("transport");

TEST_CASE("block table displacements") {
  const BlockTable t({3, 0, 5, 2});
  CHECK(t.displs == std::vector<std::int64_t>{0, 3, 3, 8});
  CHECK(t.total() == 10);
  CHECK(BlockTable{}.total() == 0);
  const BlockTable u = BlockTable::uniform(3, 4);
  CHECK(u.counts == std::vector<std::int64_t>{4, 4, 4});
}

TEST_CASE("loopback collectives degenerate to copies") {
  auto comm = make_loopback();
  CHECK(comm->rank() == 0);
  CHECK(comm->size() == 1);

  const std::vector<double> send{1.5, -2.0, 3.25};
  std::vector<double> recv(3, 0.0);
  const BlockTable t({3});
  comm->all_to_all(send.data(), t, recv.data(), t);
  CHECK(recv == send);

  CHECK(comm->allreduce_sum(4.5) == 4.5);
  CHECK(comm->allreduce_max(-1.0) == -1.0);

  std::vector<double> b{7.0, 8.0};
  comm->broadcast_bytes(b.data(), b.size() * sizeof(double), 0);
  CHECK(b == std::vector<double>{7.0, 8.0});
  comm->barrier();

  auto sub = comm->split(3, 0);
  CHECK(sub->size() == 1);
}

TEST_CASE("all_to_all routes unequal blocks") {
  // counts[i][j]: elements rank i sends to rank j.
  const std::int64_t counts[3][3] = {{2, 0, 1}, {3, 1, 2}, {0, 4, 1}};
  run_group(3, [&](int rank, std::shared_ptr<Communicator> comm) {
    std::vector<std::int64_t> sc(3), rc(3);
    for (int q = 0; q < 3; ++q) {
      sc[static_cast<std::size_t>(q)] = counts[rank][q];
      rc[static_cast<std::size_t>(q)] = counts[q][rank];
    }
    const BlockTable st(sc), rt(rc);
    std::vector<double> send(static_cast<std::size_t>(st.total()));
    for (int q = 0; q < 3; ++q)
      for (std::int64_t m = 0; m < st.counts[static_cast<std::size_t>(q)]; ++m)
        send[static_cast<std::size_t>(st.displs[static_cast<std::size_t>(q)] + m)] =
            100.0 * rank + 10.0 * q + static_cast<double>(m);
    std::vector<double> recv(static_cast<std::size_t>(rt.total()), -1.0);
    comm->all_to_all(send.data(), st, recv.data(), rt);
    for (int q = 0; q < 3; ++q)
      for (std::int64_t m = 0; m < rt.counts[static_cast<std::size_t>(q)]; ++m)
        CHECK(recv[static_cast<std::size_t>(rt.displs[static_cast<std::size_t>(q)] + m)] ==
              100.0 * q + 10.0 * rank + static_cast<double>(m));
  });
}

TEST_CASE("allreduce is correct and bit-deterministic") {
  // Values chosen so naive summation order changes the rounding.
  std::vector<double> first;
  for (int repeat = 0; repeat < 3; ++repeat) {
    std::vector<double> result(4, 0.0);
    run_group(5, [&](int rank, std::shared_ptr<Communicator> comm) {
      std::vector<double> v{1.0 / (rank + 1), 1e16 * (rank % 2), -3.0 * rank,
                            0.1 * rank};
      comm->allreduce(v, ReduceOp::Sum);
      if (rank == 0) result.assign(v.begin(), v.end());
    });
    if (repeat == 0)
      first = result;
    else
      CHECK(result == first);  // bitwise equal across repeats
  }

  run_group(4, [&](int rank, std::shared_ptr<Communicator> comm) {
    CHECK(comm->allreduce_max(static_cast<double>(rank)) == 3.0);
    CHECK(comm->allreduce_min(static_cast<double>(rank)) == 0.0);
    CHECK(comm->allreduce_sum(1.0) == 4.0);
  });
}

TEST_CASE("broadcast from a non-zero root") {
  run_group(4, [&](int rank, std::shared_ptr<Communicator> comm) {
    std::vector<std::int32_t> buf(5, 0);
    if (rank == 2)
      for (int i = 0; i < 5; ++i) buf[static_cast<std::size_t>(i)] = 10 + i;
    comm->broadcast_bytes(buf.data(), buf.size() * sizeof(std::int32_t), 2);
    for (int i = 0; i < 5; ++i) CHECK(buf[static_cast<std::size_t>(i)] == 10 + i);
  });
}

TEST_CASE("split orders subgroups by (key, rank)") {
  run_group(4, [&](int rank, std::shared_ptr<Communicator> comm) {
    auto sub = comm->split(rank % 2, -rank);  // descending parent rank
    CHECK(sub->size() == 2);
    // color 0: members {0, 2}, keys {0, -2} -> rank 2 first.
    // color 1: members {1, 3}, keys {-1, -3} -> rank 3 first.
    const int expect = (rank >= 2) ? 0 : 1;
    CHECK(sub->rank() == expect);

    // Subgroup collectives work and stay inside the subgroup.
    const double sum = sub->allreduce_sum(static_cast<double>(rank));
    CHECK(sum == (rank % 2 == 0 ? 2.0 : 4.0));
  });
}

TEST_CASE("mismatched collectives raise ProtocolError everywhere") {
  std::atomic<int> protocol_errors{0};
  CHECK_THROWS_AS(
      run_group(2,
                [&](int rank, std::shared_ptr<Communicator> comm) {
                  try {
                    if (rank == 0)
                      comm->allreduce_sum(1.0);
                    else
                      comm->barrier();
                  } catch (const ProtocolError&) {
                    ++protocol_errors;
                    throw;
                  }
                }),
      ProtocolError);
  CHECK(protocol_errors.load() == 2);
}

TEST_CASE("inconsistent all_to_all tables raise ProtocolError") {
  CHECK_THROWS_AS(
      run_group(2,
                [&](int rank, std::shared_ptr<Communicator> comm) {
                  // Rank 0 claims to send 2 elements to rank 1, but rank 1
                  // only expects 1.
                  const BlockTable st({0, rank == 0 ? 2 : 1});
                  const BlockTable rt({rank == 0 ? 1 : 1, 0});
                  std::vector<double> s(static_cast<std::size_t>(st.total()), 1.0);
                  std::vector<double> r(static_cast<std::size_t>(rt.total()), 0.0);
                  if (rank == 0)
                    comm->all_to_all(s.data(), st, r.data(), rt);
                  else
                    comm->all_to_all(s.data(), BlockTable({1, 0}), r.data(),
                                     BlockTable({2, 0}));
                }),
      ProtocolError);
}

TEST_CASE("an absent rank times out the peers") {
  const auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(run_group(
                      2,
                      [&](int rank, std::shared_ptr<Communicator> comm) {
                        if (rank == 1) return;  // never joins the barrier
                        comm->barrier();
                      },
                      200ms),
                  TimeoutError);
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(elapsed < 10s);  // fail-fast, not a hang
}

TEST_CASE("a throwing rank poisons the group with its message") {
  try {
    run_group(3, [&](int rank, std::shared_ptr<Communicator> comm) {
      if (rank == 2) throw std::runtime_error("boom at rank 2");
      comm->barrier();  // rank 0 and 1 block here until poisoned
      comm->barrier();
    });
    FAIL("expected an exception");
  } catch (const ProtocolError& e) {
    // Lowest-rank exception wins: a poisoned waiter carrying the reason.
    CHECK(std::string(e.what()).find("boom at rank 2") != std::string::npos);
  } catch (const std::runtime_error& e) {
    // ...unless rank 2's own exception propagated first (single-thread
    // scheduling can let ranks 0/1 finish the first barrier before the
    // poison lands). Either way the original message must survive.
    CHECK(std::string(e.what()).find("boom at rank 2") != std::string::npos);
  }
}

TEST_CASE("operations after poison fail immediately") {
  InProcessBackend backend(2, 500ms);
  auto c0 = backend.communicator(0);
  backend.poison("manual poison");
  CHECK_THROWS_AS(c0->barrier(), ProtocolError);
  CHECK_THROWS_AS(c0->allreduce_sum(1.0), ProtocolError);
}

TEST_CASE("empty blocks are legal in all_to_all") {
  run_group(2, [&](int rank, std::shared_ptr<Communicator> comm) {
    // Rank 0 sends everything, rank 1 sends nothing.
    const BlockTable st(rank == 0 ? std::vector<std::int64_t>{1, 3}
                                  : std::vector<std::int64_t>{0, 0});
    const BlockTable rt(rank == 0 ? std::vector<std::int64_t>{1, 0}
                                  : std::vector<std::int64_t>{3, 0});
    std::vector<double> s(static_cast<std::size_t>(st.total()));
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = static_cast<double>(i) + 1.0;
    std::vector<double> r(static_cast<std::size_t>(rt.total()), 0.0);
    comm->all_to_all(s.data(), st, r.data(), rt);
    if (rank == 0) {
      REQUIRE(r.size() == 1);
      CHECK(r[0] == 1.0);
    } else {
      REQUIRE(r.size() == 3);
      CHECK(r == std::vector<double>{2.0, 3.0, 4.0});
    }
  });
}

TEST_SUITE_END();

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "ruelle/parallel.hpp"

using namespace ruelle;

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsFirstFailure) {
  EXPECT_THROW(parallel_for(50, [](std::size_t i) {
                 if (i == 17) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Parallel, EnvironmentCapsThreads) {
  setenv("RUELLE_LAB_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3);
  setenv("RUELLE_LAB_THREADS", "zero", 1);
  EXPECT_GE(thread_count(), 1);
  unsetenv("RUELLE_LAB_THREADS");
  EXPECT_GE(thread_count(), 1);
}

TEST(Parallel, EmptyRange) {
  int calls = 0;
  parallel_for(0, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
}

#include <gtest/gtest.h>

#include <set>

#include "streamcode/channel.hpp"

using namespace streamcode;

namespace {

// Brute force over all 2^n masks: keep those that are one run of <= B or have <= N entries.
std::vector<std::vector<int>> brute_patterns(int n, int B, int N) {
  std::vector<std::vector<int>> out;
  for (uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::vector<int> e;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        e.push_back(i);
      }
    }
    const bool small = static_cast<int>(e.size()) <= N;
    const bool run = !e.empty() && e.back() - e.front() + 1 == static_cast<int>(e.size()) &&
                     static_cast<int>(e.size()) <= B;
    if (small || run) {
      out.push_back(e);
    }
  }
  return out;
}

// Sliding-window admissibility computed from scratch. A sequence shorter than W is one
// partial window.
bool brute_admissible(const ErasureSequence& e, int W, int B, int N) {
  const int len = static_cast<int>(e.size());
  for (int s = 0; s == 0 || s + W <= len; ++s) {
    std::vector<int> pos;
    for (int i = s; i < std::min(len, s + W); ++i) {
      if (e[static_cast<std::size_t>(i)]) {
        pos.push_back(i);
      }
    }
    const bool ok = static_cast<int>(pos.size()) <= N ||
                    (pos.back() - pos.front() + 1 == static_cast<int>(pos.size()) && static_cast<int>(pos.size()) <= B);
    if (!ok) {
      return false;
    }
  }
  return true;
}

} // namespace

TEST(Patterns, Validation) {
  EXPECT_THROW(ErasurePattern({1, 1}, 4), std::invalid_argument);
  EXPECT_THROW(ErasurePattern({4}, 4), std::invalid_argument);
  EXPECT_THROW(ErasurePattern({-1}, 4), std::invalid_argument);
  const ErasurePattern p({3, 1, 2}, 5);
  EXPECT_EQ(p.erased(), (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(p.consecutive());
  EXPECT_TRUE(p.contains(2));
  EXPECT_FALSE(ErasurePattern({0, 2}, 5).consecutive());
}

TEST(Patterns, EnumerationMatchesBruteForce) {
  for (int n = 1; n <= 12; ++n) {
    for (int B = 1; B <= n; ++B) {
      for (int N = 1; N <= B; ++N) {
        const auto got = enumerate_block_patterns(n, B, N);
        const auto want = brute_patterns(n, B, N);
        ASSERT_EQ(got.size(), want.size()) << n << " " << B << " " << N;
        std::set<std::vector<int>> a, b(want.begin(), want.end());
        for (const auto& p : got) {
          a.insert(p.erased());
        }
        EXPECT_EQ(a, b);
        // Sorted by size, then lexicographically.
        for (std::size_t i = 1; i < got.size(); ++i) {
          const auto& x = got[i - 1].erased();
          const auto& y = got[i].erased();
          EXPECT_TRUE(x.size() < y.size() || (x.size() == y.size() && x < y));
        }
      }
    }
  }
}

TEST(Patterns, KnownCounts) {
  EXPECT_EQ(enumerate_block_patterns(4, 2, 2).size(), 11U);
  EXPECT_EQ(enumerate_block_patterns(8, 4, 3).size(), brute_patterns(8, 4, 3).size());
  EXPECT_EQ(enumerate_block_patterns(8, 4, 3).size(), 98U);
  EXPECT_THROW(enumerate_block_patterns(25, 2, 1), GuardExceeded);
}

TEST(Window, Ok) {
  const std::vector<int> burst = {2, 3, 4};
  const std::vector<int> spread = {0, 4};
  EXPECT_TRUE(window_ok(burst, 3, 1));
  EXPECT_FALSE(window_ok(burst, 2, 2));
  EXPECT_TRUE(window_ok(spread, 3, 2));
  EXPECT_FALSE(window_ok(spread, 3, 1));
  EXPECT_TRUE(window_ok(std::vector<int>{}, 1, 1));
}

TEST(Admissible, AgreesWithBruteForce) {
  const int len = 10;
  for (auto [W, B, N] : {std::tuple{4, 2, 1}, {5, 3, 2}, {3, 3, 1}}) {
    for (uint32_t mask = 0; mask < (1U << len); ++mask) {
      ErasureSequence e(len);
      for (int i = 0; i < len; ++i) {
        e[static_cast<std::size_t>(i)] = mask >> i & 1U;
      }
      const auto res = is_admissible(e, {W, B, N});
      ASSERT_EQ(res.admissible, brute_admissible(e, W, B, N)) << sequence_to_string(e);
      if (!res.admissible) {
        ASSERT_TRUE(res.window.has_value());
        const ErasureSequence win(e.begin() + static_cast<std::ptrdiff_t>(*res.window),
                                  e.begin() + static_cast<std::ptrdiff_t>(*res.window + W));
        EXPECT_FALSE(brute_admissible(win, W, B, N));
      }
    }
  }
}

TEST(Admissible, ShortSequenceIsOnePartialWindow) {
  EXPECT_FALSE(is_admissible(sequence_from_string("111"), {5, 1, 1}).admissible);
  EXPECT_TRUE(is_admissible(sequence_from_string("111"), {5, 3, 1}).admissible);
}

TEST(Sampler, AlwaysAdmissible) {
  for (auto [W, B, N] : {std::tuple{7, 4, 3}, {3, 2, 1}, {10, 9, 9}, {2, 1, 1}}) {
    for (uint64_t seed = 0; seed < 30; ++seed) {
      for (double mix : {0.0, 0.5, 1.0}) {
        const auto e = sample_sequence({W, B, N}, 2000, seed, {0.3, mix});
        EXPECT_TRUE(brute_admissible(e, W, B, N)) << seed;
      }
    }
  }
}

TEST(Sampler, DeterministicAndKnobs) {
  const SlidingWindowSpec spec{7, 4, 3};
  EXPECT_EQ(sample_sequence(spec, 500, 9), sample_sequence(spec, 500, 9));
  EXPECT_NE(sample_sequence(spec, 500, 9), sample_sequence(spec, 500, 10));
  const auto none = sample_sequence(spec, 500, 9, {0.0, 0.5});
  EXPECT_EQ(std::count(none.begin(), none.end(), 1), 0);
  const auto busy = sample_sequence(spec, 5000, 9, {1.0, 1.0});
  EXPECT_GT(std::count(busy.begin(), busy.end(), 1), 500);
}

TEST(Sequence, StringRoundTrip) {
  const auto e = sequence_from_string("0110001");
  EXPECT_EQ(sequence_to_string(e), "0110001");
  EXPECT_THROW(sequence_from_string("01x"), std::invalid_argument);
}

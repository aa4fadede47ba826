#include "streamcode/channel.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace streamcode {

ErasurePattern::ErasurePattern(std::vector<int> erased, int length) : erased_(std::move(erased)) {
  std::sort(erased_.begin(), erased_.end());
  if (std::adjacent_find(erased_.begin(), erased_.end()) != erased_.end()) {
    throw std::invalid_argument("ErasurePattern: duplicate coordinate");
  }
  if (!erased_.empty() && (erased_.front() < 0 || erased_.back() >= length)) {
    throw std::invalid_argument("ErasurePattern: coordinate outside [0, " + std::to_string(length) + ")");
  }
}

bool ErasurePattern::contains(int i) const { return std::binary_search(erased_.begin(), erased_.end(), i); }

bool ErasurePattern::consecutive() const {
  return erased_.empty() || erased_.back() - erased_.front() + 1 == static_cast<int>(erased_.size());
}

std::vector<ErasurePattern> enumerate_block_patterns(int n, int B, int N) {
  if (n > kMaxEnumerationLength) {
    throw GuardExceeded("enumerate_block_patterns: n = " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxEnumerationLength));
  }
  std::set<std::vector<int>> seen;
  std::vector<ErasurePattern> out;
  auto push = [&](std::vector<int> v) {
    if (seen.insert(v).second) {
      out.emplace_back(std::move(v), n);
    }
  };
  const int max_size = std::min(std::max(B, N), n);
  for (int size = 0; size <= max_size; ++size) {
    if (size <= N) {
      for_each_subset(static_cast<std::size_t>(n), static_cast<std::size_t>(size), [&](const IndexList& s) {
        push(std::vector<int>(s.begin(), s.end()));
        return true;
      });
    }
    if (size >= 1 && size <= B) {
      for (int start = 0; start + size <= n; ++start) {
        std::vector<int> run(static_cast<std::size_t>(size));
        for (int j = 0; j < size; ++j) {
          run[static_cast<std::size_t>(j)] = start + j;
        }
        push(std::move(run));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ErasurePattern& a, const ErasurePattern& b) {
    if (a.count() != b.count()) {
      return a.count() < b.count();
    }
    return a.erased() < b.erased();
  });
  return out;
}

bool window_ok(std::span<const int> erased, int B, int N) {
  const auto count = static_cast<int>(erased.size());
  if (count <= N) {
    return true;
  }
  return count <= B && erased.back() - erased.front() + 1 == count;
}

AdmissibilityResult is_admissible(std::span<const uint8_t> e, const SlidingWindowSpec& spec) {
  const std::size_t w = static_cast<std::size_t>(spec.W);
  // Windows running past the end see a suffix of the last full window, which cannot be
  // worse than the full window itself.
  const std::size_t last_start = e.size() > w ? e.size() - w : 0;
  std::vector<int> erased;
  for (std::size_t start = 0; start <= last_start; ++start) {
    erased.clear();
    const std::size_t end = std::min(e.size(), start + w);
    for (std::size_t i = start; i < end; ++i) {
      if (e[i] != 0) {
        erased.push_back(static_cast<int>(i));
      }
    }
    if (!window_ok(erased, spec.B, spec.N)) {
      return {false, start};
    }
  }
  return {true, std::nullopt};
}

ErasureSequence sample_sequence(const SlidingWindowSpec& spec, std::size_t length, uint64_t seed,
                                const SamplerConfig& config) {
  if (spec.W < 1 || spec.B < 1 || spec.N < 1) {
    throw std::invalid_argument("sample_sequence: W, B, N must be >= 1");
  }
  std::mt19937_64 rng(seed);
  // Explicit mappings keep the stream identical across standard libraries.
  auto uniform01 = [&] { return static_cast<double>(rng() >> 11U) * 0x1.0p-53; };
  auto uniform_int = [&](uint64_t lo, uint64_t hi) { return lo + rng() % (hi - lo + 1); };

  ErasureSequence e(length, 0);
  const auto w = static_cast<std::size_t>(spec.W);
  std::size_t t = 0;
  while (t < length) {
    if (uniform01() >= config.event_rate) {
      ++t;
      continue;
    }
    std::size_t last = t;
    if (uniform01() < config.burst_mix) {
      const auto len = static_cast<std::size_t>(uniform_int(1, static_cast<uint64_t>(spec.B)));
      for (std::size_t j = 0; j < len && t + j < length; ++j) {
        e[t + j] = 1;
        last = t + j;
      }
    } else {
      const auto count = static_cast<std::size_t>(uniform_int(1, static_cast<uint64_t>(spec.N)));
      e[t] = 1;
      for (std::size_t j = 1; j < count; ++j) {
        const auto pos = t + static_cast<std::size_t>(uniform_int(0, w - 1));
        if (pos < length) {
          e[pos] = 1;
          last = std::max(last, pos);
        }
      }
    }
    t = last + w;
  }
  return e;
}

std::string sequence_to_string(std::span<const uint8_t> e) {
  std::string out;
  out.reserve(e.size());
  for (auto v : e) {
    out.push_back(v != 0 ? '1' : '0');
  }
  return out;
}

ErasureSequence sequence_from_string(std::string_view s) {
  ErasureSequence out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("sequence_from_string: unexpected character");
    }
    out.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

} // namespace streamcode

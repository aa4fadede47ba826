#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamcode/matrix.hpp"

namespace streamcode {

/// Erased coordinates of one block, sorted and unique.
class ErasurePattern {
public:
  ErasurePattern() = default;
  // Sorts and validates; throws std::invalid_argument on duplicates or out-of-range indices.
  ErasurePattern(std::vector<int> erased, int length);

  const std::vector<int>& erased() const { return erased_; }
  std::size_t count() const { return erased_.size(); }
  bool contains(int i) const;
  bool consecutive() const;

  friend bool operator==(const ErasurePattern&, const ErasurePattern&) = default;
  friend auto operator<=>(const ErasurePattern&, const ErasurePattern&) = default;

private:
  std::vector<int> erased_;
};

struct SlidingWindowSpec {
  int W = 0;
  int B = 0;
  int N = 0;
};

// Guard on the subset enumeration.
inline constexpr int kMaxEnumerationLength = 24;

// Every contiguous run of length 1..B plus every subset of size 0..N, deduplicated.
// Order: by size, then lexicographic. Throws GuardExceeded for n > 24.
std::vector<ErasurePattern> enumerate_block_patterns(int n, int B, int N);

// True iff `erased` (0-based sorted positions) is a single run of at most B or has at most N
// entries.
bool window_ok(std::span<const int> erased, int B, int N);

struct AdmissibilityResult {
  bool admissible = true;
  // Start of the first violating window.
  std::optional<std::size_t> window;
  explicit operator bool() const { return admissible; }
};

using ErasureSequence = std::vector<uint8_t>;

AdmissibilityResult is_admissible(std::span<const uint8_t> e, const SlidingWindowSpec& spec);

struct SamplerConfig {
  // Probability that an event starts at an eligible position; 0 gives an erasure-free sequence.
  double event_rate = 0.05;
  // Probability that an event is a burst (length uniform in [1, B]) rather than a group of up
  // to N isolated erasures scattered over one window.
  double burst_mix = 0.5;
};

// Constructive sampler: events are separated by at least W - 1 clean positions, so every
// output is admissible. Deterministic for a fixed seed.
ErasureSequence sample_sequence(const SlidingWindowSpec& spec, std::size_t length, uint64_t seed,
                                const SamplerConfig& config = {});

std::string sequence_to_string(std::span<const uint8_t> e);
// Throws std::invalid_argument on characters other than '0' / '1'.
ErasureSequence sequence_from_string(std::string_view s);

} // namespace streamcode

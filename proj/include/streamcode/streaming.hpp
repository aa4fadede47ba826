#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <stdexcept>
#include <vector>

#include "streamcode/construction.hpp"
#include "streamcode/decoder.hpp"

namespace streamcode {

class StreamOrderError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Generator matrices G_0..G_{n-1} of the convolutional code obtained by diagonal interleaving:
// G_l has entry (r, r + l) = G(r, r + l) and zeros elsewhere, so that sum_l G_l = G.
std::vector<FieldMatrix> conv_generators(const FieldMatrix& g);

/// One transmitted packet: n symbols, or nothing when the channel erased it.
struct Packet {
  uint64_t seq = 0;
  std::optional<std::vector<ExtElem>> payload;

  bool erased() const { return !payload.has_value(); }
  friend bool operator==(const Packet&, const Packet&) = default;
};

/// x_i = sum_l s_{i-l} G_l, with s_j = 0 for j < 0.
class StreamEncoder {
public:
  explicit StreamEncoder(std::shared_ptr<const CodeTables> tables);

  uint64_t clock() const { return clock_; }

  // Throws StreamOrderError when seq != clock().
  Packet encode_step(uint64_t seq, std::span<const ExtElem> message);

private:
  std::shared_ptr<const CodeTables> tables_;
  std::vector<FieldMatrix> generators_;
  std::deque<std::vector<ExtElem>> history_; // history_[0] = s_{i-1}
  uint64_t clock_ = 0;
};

struct DecodedMessage {
  uint64_t seq = 0;
  std::vector<std::optional<ExtElem>> symbols;
  // Clock at which the last symbol was recoverable, minus seq; -1 when incomplete.
  int delay = -1;
  bool complete() const;
};

struct StreamStats {
  uint64_t messages = 0;
  uint64_t missed_symbols = 0;
  uint64_t missed_messages = 0;
  uint64_t oracle_fallbacks = 0;
};

/// Reassembles one block codeword per diagonal and releases s_i at clock i + T.
class StreamDecoder {
public:
  explicit StreamDecoder(std::shared_ptr<const CodeTables> tables);

  uint64_t clock() const { return clock_; }
  const StreamStats& stats() const { return stats_; }

  // Packets must arrive with consecutive seq (erased ones included); throws
  // StreamOrderError on a late or duplicate seq. Returns the messages due at this clock.
  std::vector<DecodedMessage> decode_step(const Packet& packet);

private:
  struct Diagonal {
    std::vector<std::optional<ExtElem>> values;
    std::vector<int> times;
  };

  ReceivedBlock gather(int64_t start, int64_t now) const;
  Diagonal& diagonal(int64_t start);
  // Value and absolute recovery clock of symbol r of the diagonal starting at `start`.
  std::optional<std::pair<ExtElem, int64_t>> recover(int64_t start, int r, int64_t now);

  std::shared_ptr<const CodeTables> tables_;
  std::map<int64_t, std::optional<std::vector<ExtElem>>> packets_;
  std::map<int64_t, Diagonal> diagonals_;
  StreamStats stats_;
  uint64_t clock_ = 0;
};

} // namespace streamcode

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamcode/channel.hpp"
#include "streamcode/construction.hpp"

namespace streamcode {

/// Length-n received block; std::nullopt marks an erased (or not yet available) symbol.
struct ReceivedBlock {
  std::vector<std::optional<ExtElem>> symbols;

  static ReceivedBlock from_codeword(std::span<const ExtElem> codeword, const ErasurePattern& erased);
  ErasurePattern erasures() const;
};

enum class DecodeMethod { Trivial, BurstMds2, ArbitraryMds1, AlphaCancel, Oracle };

std::string to_string(DecodeMethod m);

struct SymbolDecode {
  int index = 0;
  ExtElem value;
  // Earliest time at which every received symbol (and every earlier message symbol) used
  // by this recovery was available.
  int time = 0;
  DecodeMethod method = DecodeMethod::Trivial;
  // Alpha-cancel path only: coefficient of u[l] after base-field cancellation.
  std::optional<ExtElem> alpha_pivot;
};

struct DecodeWindow {
  int begin = 0;
  int end = 0; // inclusive
};

struct DecodeReport {
  std::vector<std::optional<SymbolDecode>> symbols; // index l; nullopt = undecodable
  bool admissible = true;
  std::optional<DecodeWindow> violation;
  std::vector<std::string> warnings;

  bool complete() const;
  std::vector<ExtElem> values() const; // throws if incomplete
};

class InadmissiblePattern : public std::runtime_error {
public:
  InadmissiblePattern(int symbol, DecodeWindow window);
  int symbol() const { return symbol_; }
  DecodeWindow window() const { return window_; }

private:
  int symbol_;
  DecodeWindow window_;
};

class DecoderInconsistency : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// min(l + T, n - 1).
int decode_deadline(int l, const CodeParams& params);

std::vector<ExtElem> encode_block(const CodeTables& tables, std::span<const ExtElem> message);

struct OracleResult {
  std::optional<ExtElem> value;
  int time = -1; // earliest t <= deadline at which u[l] is determined
};

// Brute-force reference: u[l] is returned iff it is uniquely determined by the received
// symbols y[0..deadline]. `deadline_slack` shifts the deadline (negative = tighter).
OracleResult oracle_decode(const CodeTables& tables, const ReceivedBlock& received, int l,
                           int deadline_slack = 0);

// Recovers u[l] with the structured procedure, given u[0..l-1] in `known` and the time each
// of them became available in `known_times`. Throws InadmissiblePattern when the erasures
// inside [l, deadline(l)] are neither one burst of <= B nor <= N isolated erasures.
SymbolDecode decode_symbol(const CodeTables& tables, const ReceivedBlock& received,
                           std::span<const ExtElem> known, std::span<const int> known_times, int l);

struct DecodeOptions {
  // Compare every structured result with oracle_decode and throw DecoderInconsistency on
  // any disagreement.
  bool cross_check = false;
};

// Decodes u[0..k-1] in order. Throws InadmissiblePattern on an inadmissible pattern.
DecodeReport structured_decode(const CodeTables& tables, const ReceivedBlock& received,
                               const DecodeOptions& options = {});

// Like structured_decode, but an inadmissible pattern falls back to the oracle; the report
// is flagged non-admissible with a warning instead of throwing.
DecodeReport decode_block(const CodeTables& tables, const ReceivedBlock& received);

} // namespace streamcode

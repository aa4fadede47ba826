#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "streamcode/construction.hpp"
#include "streamcode/decoder.hpp"
#include "streamcode/streaming.hpp"

namespace streamcode {

/// Malformed input; offset is a byte offset into the file (or text).
class FormatError : public std::runtime_error {
public:
  FormatError(std::size_t offset, const std::string& what);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// {"name", "p", "r", "rows", "cols", "entries": ["a+b*w", ...]} in row-major order.
nlohmann::json matrix_to_json(const std::string& name, const FieldMatrix& m);
FieldMatrix matrix_from_json(const nlohmann::json& j);

// p, r, alpha, params and the seven matrices Gpp, M, Minv, Gp, G, Gtilde, H.
nlohmann::json code_dump(const CodeTables& tables);

struct TraceHeader {
  uint32_t p = 0;
  uint32_t r = 0;
  uint32_t T = 0;
  uint32_t B = 0;
  uint32_t N = 0;
  uint32_t W = 0;
  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

inline constexpr std::string_view kTraceMagic = "SCTRACE1";

TraceHeader trace_header(const CodeParams& params, const QuadExtField& field);

// Checks the header against freshly derived parameters; throws FormatError(0) on mismatch.
CodeParams params_from_header(const TraceHeader& h);

struct Trace {
  TraceHeader header;
  std::vector<Packet> packets;
};

// Little-endian: magic, six u32, then per record u64 seq, u8 flag (0 present, 1 erased) and,
// when present, n pairs of u32 (a, b).
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);
bool looks_like_trace(std::string_view bytes);

// One message per line, k symbols separated by whitespace.
std::vector<std::vector<ExtElem>> read_messages(std::string_view text, const QuadExtField& field, int k);
std::string write_messages(std::span<const std::vector<ExtElem>> messages);

// n whitespace-separated symbols; "?" marks an erasure.
ReceivedBlock read_block_symbols(std::string_view text, const QuadExtField& field, int n);

nlohmann::json report_to_json(const DecodeReport& report);

// Bytes -> messages of k base-field symbols: an 8-byte length prefix, then the payload, as
// base-p digits (fixed count per byte), zero-padded to a whole number of messages.
std::vector<std::vector<ExtElem>> pack_bytes(std::span<const uint8_t> bytes, const QuadExtField& field, int k);
std::vector<uint8_t> unpack_bytes(std::span<const std::vector<ExtElem>> messages, const QuadExtField& field);

} // namespace streamcode

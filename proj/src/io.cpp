#include "streamcode/io.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace streamcode {

FormatError::FormatError(std::size_t offset, const std::string& what)
    : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

nlohmann::json matrix_to_json(const std::string& name, const FieldMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries()) {
    entries.push_back(to_string(e));
  }
  return {{"name", name},         {"p", m.field().p()}, {"r", m.field().r()},
          {"rows", m.rows()},     {"cols", m.cols()},   {"entries", std::move(entries)}};
}

FieldMatrix matrix_from_json(const nlohmann::json& j) {
  const QuadExtField field(j.at("p").get<uint32_t>(), j.at("r").get<uint32_t>());
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& entries = j.at("entries");
  if (entries.size() != rows * cols) {
    throw std::invalid_argument("matrix_from_json: entry count does not match shape");
  }
  std::vector<ExtElem> data;
  data.reserve(entries.size());
  for (const auto& e : entries) {
    data.push_back(parse_ext(e.get<std::string>(), field));
  }
  return FieldMatrix(field, rows, cols, std::move(data));
}

nlohmann::json code_dump(const CodeTables& t) {
  const auto& p = t.params;
  nlohmann::json j;
  j["p"] = t.field.p();
  j["r"] = t.field.r();
  j["alpha"] = to_string(t.alpha);
  j["params"] = {{"T", p.T}, {"B", p.B}, {"N", p.N}, {"W", p.W}, {"k", p.k}, {"n", p.n}};
  j["matrices"] = nlohmann::json::array({
      matrix_to_json("Gpp", t.Gpp),
      matrix_to_json("M", t.M),
      matrix_to_json("Minv", t.Minv),
      matrix_to_json("Gp", t.Gp),
      matrix_to_json("G", t.G),
      matrix_to_json("Gtilde", t.Gtilde),
      matrix_to_json("H", t.H),
  });
  return j;
}

TraceHeader trace_header(const CodeParams& params, const QuadExtField& field) {
  return {field.p(),
          field.r(),
          static_cast<uint32_t>(params.T),
          static_cast<uint32_t>(params.B),
          static_cast<uint32_t>(params.N),
          static_cast<uint32_t>(params.W)};
}

CodeParams params_from_header(const TraceHeader& h) {
  CodeParams params;
  try {
    params = derive_params(static_cast<int>(h.T), static_cast<int>(h.B), static_cast<int>(h.N),
                           static_cast<int>(h.W));
  } catch (const ParamError& e) {
    throw FormatError(kTraceMagic.size(), std::string("trace header: ") + e.what());
  }
  if (params.p != h.p || QuadExtField(params.p).r() != h.r) {
    throw FormatError(kTraceMagic.size(), "trace header: field (p, r) does not match (T, B, N)");
  }
  return params;
}

namespace {

template <typename U>
void put_le(std::ostream& out, U v) {
  std::array<char, sizeof(U)> buf{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  out.write(buf.data(), buf.size());
}

class ByteReader {
public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  std::size_t offset() const { return offset_; }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

  template <typename U>
  U get(const char* what) {
    std::array<unsigned char, sizeof(U)> buf{};
    in_.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (in_.gcount() != static_cast<std::streamsize>(buf.size())) {
      throw FormatError(offset_ + static_cast<std::size_t>(in_.gcount()),
                        std::string("truncated trace while reading ") + what);
    }
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<U>(buf[i]) << (8 * i));
    }
    offset_ += sizeof(U);
    return v;
  }

private:
  std::istream& in_;
  std::size_t offset_ = 0;
};

} // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out.write(kTraceMagic.data(), static_cast<std::streamsize>(kTraceMagic.size()));
  const auto& h = trace.header;
  for (uint32_t v : {h.p, h.r, h.T, h.B, h.N, h.W}) {
    put_le<uint32_t>(out, v);
  }
  for (const auto& pk : trace.packets) {
    put_le<uint64_t>(out, pk.seq);
    put_le<uint8_t>(out, pk.erased() ? 1 : 0);
    if (pk.payload) {
      for (const auto& s : *pk.payload) {
        put_le<uint32_t>(out, s.a);
        put_le<uint32_t>(out, s.b);
      }
    }
  }
}

Trace read_trace(std::istream& in) {
  ByteReader rd(in);
  for (std::size_t i = 0; i < kTraceMagic.size(); ++i) {
    const auto c = rd.get<uint8_t>("magic");
    if (c != static_cast<uint8_t>(kTraceMagic[i])) {
      throw FormatError(i, "bad trace magic");
    }
  }
  Trace trace;
  auto& h = trace.header;
  h.p = rd.get<uint32_t>("header p");
  h.r = rd.get<uint32_t>("header r");
  h.T = rd.get<uint32_t>("header T");
  h.B = rd.get<uint32_t>("header B");
  h.N = rd.get<uint32_t>("header N");
  h.W = rd.get<uint32_t>("header W");
  const CodeParams params = params_from_header(h);
  const auto n = static_cast<std::size_t>(params.n);

  while (!rd.at_end()) {
    const std::size_t record_start = rd.offset();
    Packet pk;
    pk.seq = rd.get<uint64_t>("seq");
    if (pk.seq != trace.packets.size()) {
      throw FormatError(record_start, "non-consecutive seq " + std::to_string(pk.seq));
    }
    const std::size_t flag_at = rd.offset();
    const auto flag = rd.get<uint8_t>("flag");
    if (flag > 1) {
      throw FormatError(flag_at, "bad erasure flag " + std::to_string(flag));
    }
    if (flag == 0) {
      std::vector<ExtElem> payload(n);
      for (auto& s : payload) {
        const std::size_t at = rd.offset();
        s.a = rd.get<uint32_t>("symbol");
        s.b = rd.get<uint32_t>("symbol");
        if (s.a >= h.p || s.b >= h.p) {
          throw FormatError(at, "symbol coefficient outside [0, p)");
        }
      }
      pk.payload = std::move(payload);
    }
    trace.packets.push_back(std::move(pk));
  }
  return trace;
}

bool looks_like_trace(std::string_view bytes) { return bytes.substr(0, kTraceMagic.size()) == kTraceMagic; }

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Whitespace-separated tokens of one line, with their offsets in the full text.
std::vector<std::pair<std::string_view, std::size_t>> tokens(std::string_view line, std::size_t base) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) {
      ++i;
    }
    if (i > start) {
      out.emplace_back(line.substr(start, i - start), base + start);
    }
  }
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    fn(text.substr(pos, end - pos), pos);
    pos = end + 1;
  }
}

ExtElem parse_at(std::string_view tok, std::size_t offset, const QuadExtField& field) {
  try {
    return parse_ext(tok, field);
  } catch (const FieldError& e) {
    throw FormatError(offset, e.what());
  }
}

} // namespace

std::vector<std::vector<ExtElem>> read_messages(std::string_view text, const QuadExtField& field, int k) {
  std::vector<std::vector<ExtElem>> out;
  for_each_line(text, [&](std::string_view line, std::size_t base) {
    const auto toks = tokens(line, base);
    if (toks.empty()) {
      return;
    }
    if (toks.size() != static_cast<std::size_t>(k)) {
      throw FormatError(base, "expected " + std::to_string(k) + " symbols per line, got " +
                                  std::to_string(toks.size()));
    }
    std::vector<ExtElem> msg;
    for (const auto& [tok, off] : toks) {
      msg.push_back(parse_at(tok, off, field));
    }
    out.push_back(std::move(msg));
  });
  return out;
}

std::string write_messages(std::span<const std::vector<ExtElem>> messages) {
  std::string out;
  for (const auto& m : messages) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      out += (i ? " " : "") + to_string(m[i]);
    }
    out += '\n';
  }
  return out;
}

ReceivedBlock read_block_symbols(std::string_view text, const QuadExtField& field, int n) {
  ReceivedBlock block;
  std::size_t last = 0;
  for_each_line(text, [&](std::string_view line, std::size_t base) {
    for (const auto& [tok, off] : tokens(line, base)) {
      if (block.symbols.size() == static_cast<std::size_t>(n)) {
        throw FormatError(off, "more than n = " + std::to_string(n) + " symbols");
      }
      if (tok == "?") {
        block.symbols.emplace_back(std::nullopt);
      } else {
        block.symbols.emplace_back(parse_at(tok, off, field));
      }
      last = off + tok.size();
    }
  });
  if (block.symbols.size() != static_cast<std::size_t>(n)) {
    throw FormatError(last, "expected " + std::to_string(n) + " symbols, got " +
                                std::to_string(block.symbols.size()));
  }
  return block;
}

nlohmann::json report_to_json(const DecodeReport& report) {
  nlohmann::json j;
  j["admissible"] = report.admissible;
  j["complete"] = report.complete();
  if (report.violation) {
    j["violation"] = {report.violation->begin, report.violation->end};
  }
  j["warnings"] = report.warnings;
  nlohmann::json syms = nlohmann::json::array();
  for (std::size_t l = 0; l < report.symbols.size(); ++l) {
    const auto& s = report.symbols[l];
    if (!s) {
      syms.push_back({{"index", l}, {"value", nullptr}});
      continue;
    }
    nlohmann::json e{{"index", s->index}, {"value", to_string(s->value)}, {"time", s->time},
                     {"method", to_string(s->method)}};
    if (s->alpha_pivot) {
      e["alpha_pivot"] = to_string(*s->alpha_pivot);
    }
    syms.push_back(std::move(e));
  }
  j["symbols"] = std::move(syms);
  return j;
}

namespace {

// Base-p digits needed to hold `bits` bits.
std::size_t digits_for_bits(uint32_t p, int bits) {
  std::size_t d = 0;
  long double cap = 1;
  const long double target = std::ldexp(1.0L, bits);
  while (cap < target) {
    cap *= p;
    ++d;
  }
  return d;
}

void push_digits(std::vector<ExtElem>& out, uint64_t v, uint32_t p, std::size_t digits) {
  for (std::size_t i = 0; i < digits; ++i) {
    out.push_back({static_cast<uint32_t>(v % p), 0});
    v /= p;
  }
}

} // namespace

std::vector<std::vector<ExtElem>> pack_bytes(std::span<const uint8_t> bytes, const QuadExtField& field, int k) {
  const uint32_t p = field.p();
  std::vector<ExtElem> flat;
  push_digits(flat, static_cast<uint64_t>(bytes.size()), p, digits_for_bits(p, 64));
  const std::size_t per_byte = digits_for_bits(p, 8);
  for (uint8_t b : bytes) {
    push_digits(flat, b, p, per_byte);
  }
  while (flat.size() % static_cast<std::size_t>(k) != 0) {
    flat.push_back(field.zero());
  }
  std::vector<std::vector<ExtElem>> out;
  for (std::size_t i = 0; i < flat.size(); i += static_cast<std::size_t>(k)) {
    out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                     flat.begin() + static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(k)));
  }
  return out;
}

std::vector<uint8_t> unpack_bytes(std::span<const std::vector<ExtElem>> messages, const QuadExtField& field) {
  const uint32_t p = field.p();
  std::vector<ExtElem> flat;
  for (const auto& m : messages) {
    flat.insert(flat.end(), m.begin(), m.end());
  }
  std::size_t pos = 0;
  auto take = [&](std::size_t digits) {
    if (pos + digits > flat.size()) {
      throw std::invalid_argument("unpack_bytes: truncated symbol stream");
    }
    unsigned __int128 v = 0;
    unsigned __int128 scale = 1;
    for (std::size_t i = 0; i < digits; ++i) {
      const ExtElem s = flat[pos++];
      if (s.b != 0 || s.a >= p) {
        throw std::invalid_argument("unpack_bytes: symbol outside the base field");
      }
      v += scale * s.a;
      scale *= p;
    }
    return v;
  };
  const unsigned __int128 len = take(digits_for_bits(p, 64));
  const std::size_t per_byte = digits_for_bits(p, 8);
  if (len > (flat.size() - pos) / per_byte) {
    throw std::invalid_argument("unpack_bytes: length prefix exceeds the payload");
  }
  std::vector<uint8_t> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(len); ++i) {
    const unsigned __int128 b = take(per_byte);
    if (b > 0xFF) {
      throw std::invalid_argument("unpack_bytes: digit group exceeds one byte");
    }
    out.push_back(static_cast<uint8_t>(b));
  }
  return out;
}

} // namespace streamcode

#include "streamcode/streaming.hpp"

#include <algorithm>

namespace streamcode {

std::vector<FieldMatrix> conv_generators(const FieldMatrix& g) {
  const std::size_t k = g.rows();
  const std::size_t n = g.cols();
  std::vector<FieldMatrix> out;
  out.reserve(n);
  for (std::size_t lag = 0; lag < n; ++lag) {
    FieldMatrix gl(g.field(), k, n);
    for (std::size_t r = 0; r < k && r + lag < n; ++r) {
      gl(r, r + lag) = g(r, r + lag);
    }
    out.push_back(std::move(gl));
  }
  return out;
}

StreamEncoder::StreamEncoder(std::shared_ptr<const CodeTables> tables)
    : tables_(std::move(tables)), generators_(conv_generators(tables_->G)) {
  const auto k = static_cast<std::size_t>(tables_->params.k);
  const auto memory = static_cast<std::size_t>(tables_->params.n - 1);
  history_.assign(memory, std::vector<ExtElem>(k, tables_->field.zero()));
}

Packet StreamEncoder::encode_step(uint64_t seq, std::span<const ExtElem> message) {
  if (seq != clock_) {
    throw StreamOrderError("encode_step: expected seq " + std::to_string(clock_) + ", got " +
                           std::to_string(seq));
  }
  const auto k = static_cast<std::size_t>(tables_->params.k);
  if (message.size() != k) {
    throw std::invalid_argument("encode_step: message must have k symbols");
  }
  const auto& f = tables_->field;
  std::vector<ExtElem> x(static_cast<std::size_t>(tables_->params.n), f.zero());
  auto accumulate = [&](std::span<const ExtElem> s, const FieldMatrix& gl) {
    const Vector part = multiply(s, gl);
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = f.add(x[j], part[j]);
    }
  };
  accumulate(message, generators_[0]);
  for (std::size_t lag = 1; lag < generators_.size(); ++lag) {
    accumulate(history_[lag - 1], generators_[lag]);
  }
  history_.pop_back();
  history_.emplace_front(message.begin(), message.end());
  ++clock_;
  return Packet{seq, std::move(x)};
}

bool DecodedMessage::complete() const {
  return std::all_of(symbols.begin(), symbols.end(), [](const auto& s) { return s.has_value(); });
}

StreamDecoder::StreamDecoder(std::shared_ptr<const CodeTables> tables) : tables_(std::move(tables)) {}

ReceivedBlock StreamDecoder::gather(int64_t start, int64_t now) const {
  const auto n = static_cast<std::size_t>(tables_->params.n);
  ReceivedBlock block;
  block.symbols.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const int64_t t = start + static_cast<int64_t>(j);
    if (t < 0) {
      // Zero padding before time 0: the symbol is known to be zero.
      block.symbols[j] = tables_->field.zero();
    } else if (t <= now) {
      const auto it = packets_.find(t);
      if (it != packets_.end() && it->second) {
        block.symbols[j] = (*it->second)[j];
      }
    }
  }
  return block;
}

StreamDecoder::Diagonal& StreamDecoder::diagonal(int64_t start) {
  auto [it, inserted] = diagonals_.try_emplace(start);
  if (inserted) {
    const auto k = static_cast<std::size_t>(tables_->params.k);
    it->second.values.assign(k, std::nullopt);
    it->second.times.assign(k, 0);
    for (int64_t r = 0; r < static_cast<int64_t>(k) && start + r < 0; ++r) {
      it->second.values[static_cast<std::size_t>(r)] = tables_->field.zero();
    }
  }
  return it->second;
}

std::optional<std::pair<ExtElem, int64_t>> StreamDecoder::recover(int64_t start, int r, int64_t now) {
  Diagonal& diag = diagonal(start);
  const auto idx = static_cast<std::size_t>(r);
  if (diag.values[idx]) {
    return std::pair{*diag.values[idx], start + diag.times[idx]};
  }
  const ReceivedBlock block = gather(start, now);
  const bool prefix_known =
      std::all_of(diag.values.begin(), diag.values.begin() + r, [](const auto& v) { return v.has_value(); });
  if (prefix_known) {
    std::vector<ExtElem> known;
    for (int i = 0; i < r; ++i) {
      known.push_back(*diag.values[static_cast<std::size_t>(i)]);
    }
    try {
      const SymbolDecode d = decode_symbol(*tables_, block, known, diag.times, r);
      diag.values[idx] = d.value;
      diag.times[idx] = d.time;
      return std::pair{d.value, start + d.time};
    } catch (const InadmissiblePattern&) {
      // fall through to the oracle
    } catch (const DecoderInconsistency&) {
    }
  }
  ++stats_.oracle_fallbacks;
  const OracleResult res = oracle_decode(*tables_, block, r);
  if (!res.value) {
    return std::nullopt;
  }
  diag.values[idx] = res.value;
  diag.times[idx] = res.time;
  return std::pair{*res.value, start + res.time};
}

std::vector<DecodedMessage> StreamDecoder::decode_step(const Packet& packet) {
  if (packet.seq != clock_) {
    throw StreamOrderError("decode_step: expected seq " + std::to_string(clock_) + ", got " +
                           std::to_string(packet.seq));
  }
  const auto& params = tables_->params;
  if (packet.payload && packet.payload->size() != static_cast<std::size_t>(params.n)) {
    throw std::invalid_argument("decode_step: packet payload must have n symbols");
  }
  const auto now = static_cast<int64_t>(packet.seq);
  packets_[now] = packet.payload;
  ++clock_;

  std::vector<DecodedMessage> out;
  const int64_t due = now - params.T;
  if (due >= 0) {
    DecodedMessage msg;
    msg.seq = static_cast<uint64_t>(due);
    int64_t ready = due;
    for (int r = 0; r < params.k; ++r) {
      // s_due[r] is symbol r of the diagonal that starts at due - r.
      const auto rec = recover(due - r, r, now);
      msg.symbols.push_back(rec ? std::optional(rec->first) : std::nullopt);
      if (rec) {
        ready = std::max(ready, rec->second);
      }
    }
    if (msg.complete()) {
      msg.delay = static_cast<int>(ready - due);
    }
    ++stats_.messages;
    const auto missing = static_cast<uint64_t>(
        std::count_if(msg.symbols.begin(), msg.symbols.end(), [](const auto& s) { return !s; }));
    stats_.missed_symbols += missing;
    stats_.missed_messages += missing > 0 ? 1 : 0;
    out.push_back(std::move(msg));
  }

  // Diagonals older than this have released all k symbols.
  const int64_t oldest_diag = due - params.k + 1;
  diagonals_.erase(diagonals_.begin(), diagonals_.lower_bound(oldest_diag));
  packets_.erase(packets_.begin(), packets_.lower_bound(oldest_diag));
  return out;
}

} // namespace streamcode

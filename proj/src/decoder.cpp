#include "streamcode/decoder.hpp"

#include <algorithm>

namespace streamcode {

ReceivedBlock ReceivedBlock::from_codeword(std::span<const ExtElem> codeword, const ErasurePattern& erased) {
  ReceivedBlock out;
  out.symbols.assign(codeword.begin(), codeword.end());
  for (int i : erased.erased()) {
    out.symbols.at(static_cast<std::size_t>(i)) = std::nullopt;
  }
  return out;
}

ErasurePattern ReceivedBlock::erasures() const {
  std::vector<int> erased;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!symbols[i]) {
      erased.push_back(static_cast<int>(i));
    }
  }
  return ErasurePattern(std::move(erased), static_cast<int>(symbols.size()));
}

std::string to_string(DecodeMethod m) {
  switch (m) {
  case DecodeMethod::Trivial:
    return "trivial";
  case DecodeMethod::BurstMds2:
    return "burst-MDS2";
  case DecodeMethod::ArbitraryMds1:
    return "arbitrary-MDS1";
  case DecodeMethod::AlphaCancel:
    return "alpha-cancel";
  case DecodeMethod::Oracle:
    return "oracle";
  }
  return "unknown";
}

bool DecodeReport::complete() const {
  return std::all_of(symbols.begin(), symbols.end(), [](const auto& s) { return s.has_value(); });
}

std::vector<ExtElem> DecodeReport::values() const {
  std::vector<ExtElem> out;
  for (const auto& s : symbols) {
    if (!s) {
      throw std::runtime_error("DecodeReport::values: block not fully decoded");
    }
    out.push_back(s->value);
  }
  return out;
}

InadmissiblePattern::InadmissiblePattern(int symbol, DecodeWindow window)
    : std::runtime_error("inadmissible erasure pattern in window [" + std::to_string(window.begin) +
                         ", " + std::to_string(window.end) + "] while decoding u[" +
                         std::to_string(symbol) + "]"),
      symbol_(symbol), window_(window) {}

int decode_deadline(int l, const CodeParams& params) { return std::min(l + params.T, params.n - 1); }

std::vector<ExtElem> encode_block(const CodeTables& tables, std::span<const ExtElem> message) {
  if (message.size() != static_cast<std::size_t>(tables.params.k)) {
    throw std::invalid_argument("encode_block: message length must be k");
  }
  return multiply(message, tables.G);
}

OracleResult oracle_decode(const CodeTables& tables, const ReceivedBlock& received, int l,
                           int deadline_slack) {
  const auto& f = tables.field;
  const auto k = static_cast<std::size_t>(tables.params.k);
  if (received.symbols.size() != static_cast<std::size_t>(tables.params.n)) {
    throw std::invalid_argument("oracle_decode: received block has wrong length");
  }
  const int deadline = std::min(l + tables.params.T + deadline_slack, tables.params.n - 1);

  Vector target(k, f.zero());
  target[static_cast<std::size_t>(l)] = f.one();
  IndexList cols;
  for (int t = 0; t <= deadline; ++t) {
    if (!received.symbols[static_cast<std::size_t>(t)]) {
      continue;
    }
    cols.push_back(static_cast<std::size_t>(t));
    // u[l] is determined iff e_l lies in the column space of G restricted to `cols`.
    const SolveResult sol = solve(tables.G.submatrix(index_range(0, k), cols), target);
    if (sol.status == SolveStatus::Inconsistent) {
      continue;
    }
    ExtElem value = f.zero();
    for (std::size_t s = 0; s < cols.size(); ++s) {
      value = f.add(value, f.mul(*received.symbols[cols[s]], sol.x[s]));
    }
    return {value, t};
  }
  return {std::nullopt, -1};
}

namespace {

struct Context {
  const CodeTables& tables;
  const QuadExtField& f;
  int k, n, T, B, N, last_alpha_row, l, deadline;
  // Received symbols with u[0..l-1] cancelled; nullopt when erased or past the deadline.
  std::vector<std::optional<ExtElem>> reduced;
  // Time at which the cancelled prefix contributions of each column were known.
  std::vector<int> prefix_time;

  bool available(int c) const {
    return c >= 0 && c < n && reduced[static_cast<std::size_t>(c)].has_value();
  }
  ExtElem g(int r, int c) const { return tables.G(static_cast<std::size_t>(r), static_cast<std::size_t>(c)); }
  ExtElem x(int c) const { return *reduced[static_cast<std::size_t>(c)]; }

  int time_of(const std::vector<int>& cols) const {
    int t = 0;
    for (int c : cols) {
      t = std::max({t, c, prefix_time[static_cast<std::size_t>(c)]});
    }
    return t;
  }

  // First `count` available columns in [lo, hi] accepted by `keep`.
  template <typename Pred>
  std::vector<int> pick(int lo, int hi, int count, Pred keep) const {
    std::vector<int> out;
    for (int c = lo; c <= hi && static_cast<int>(out.size()) < count; ++c) {
      if (available(c) && keep(c)) {
        out.push_back(c);
      }
    }
    if (static_cast<int>(out.size()) < count) {
      throw DecoderInconsistency("decode_symbol: not enough received symbols for u[" +
                                 std::to_string(l) + "]");
    }
    return out;
  }

  // Solves v * G[rows][cols] = rhs for v (unique by the MDS sub-code properties).
  Vector solve_rows(int first_row, const std::vector<int>& cols, const Vector& rhs) const {
    if (cols.empty()) {
      return {};
    }
    IndexList rows = index_range(static_cast<std::size_t>(first_row), static_cast<std::size_t>(k));
    IndexList cidx(cols.begin(), cols.end());
    const SolveResult sol = solve(tables.G.submatrix(rows, cidx).transpose(), rhs);
    if (sol.status != SolveStatus::Unique) {
      throw DecoderInconsistency("decode_symbol: sub-code system for u[" + std::to_string(l) +
                                 "] is not uniquely solvable");
    }
    return sol.x;
  }

  Vector values(const std::vector<int>& cols) const {
    Vector out;
    for (int c : cols) {
      out.push_back(x(c));
    }
    return out;
  }

  Vector row_values(int row, const std::vector<int>& cols) const {
    Vector out;
    for (int c : cols) {
      out.push_back(g(row, c));
    }
    return out;
  }
};

} // namespace

SymbolDecode decode_symbol(const CodeTables& tables, const ReceivedBlock& received,
                           std::span<const ExtElem> known, std::span<const int> known_times, int l) {
  const auto& p = tables.params;
  if (l < 0 || l >= p.k || known.size() < static_cast<std::size_t>(l) ||
      known_times.size() < static_cast<std::size_t>(l)) {
    throw std::invalid_argument("decode_symbol: bad symbol index or missing prefix");
  }
  if (received.symbols.size() != static_cast<std::size_t>(p.n)) {
    throw std::invalid_argument("decode_symbol: received block has wrong length");
  }
  const auto& f = tables.field;
  Context ctx{tables, f, p.k, p.n, p.T, p.B, p.N, p.B - p.N, l, decode_deadline(l, p), {}, {}};

  std::vector<int> window_erasures;
  for (int c = l; c <= ctx.deadline; ++c) {
    if (!received.symbols[static_cast<std::size_t>(c)]) {
      window_erasures.push_back(c);
    }
  }
  if (!window_ok(window_erasures, p.B, p.N)) {
    throw InadmissiblePattern(l, {l, ctx.deadline});
  }

  ctx.reduced.assign(static_cast<std::size_t>(p.n), std::nullopt);
  ctx.prefix_time.assign(static_cast<std::size_t>(p.n), 0);
  for (int c = l; c <= ctx.deadline; ++c) {
    const auto& y = received.symbols[static_cast<std::size_t>(c)];
    if (!y) {
      continue;
    }
    ExtElem v = *y;
    for (int i = 0; i < l; ++i) {
      const ExtElem gic = ctx.g(i, c);
      if (!QuadExtField::is_zero(gic)) {
        v = f.sub(v, f.mul(gic, known[static_cast<std::size_t>(i)]));
        ctx.prefix_time[static_cast<std::size_t>(c)] =
            std::max(ctx.prefix_time[static_cast<std::size_t>(c)], known_times[static_cast<std::size_t>(i)]);
      }
    }
    ctx.reduced[static_cast<std::size_t>(c)] = v;
  }

  SymbolDecode out;
  out.index = l;

  // Column l only involves u[0..l] and G[l][l] = 1.
  if (ctx.available(l)) {
    out.value = f.div(ctx.x(l), ctx.g(l, l));
    out.time = ctx.time_of({l});
    out.method = DecodeMethod::Trivial;
    return out;
  }

  const int a = ctx.last_alpha_row;
  if (l > a) {
    // Rows l..k-1 form a shortened tail MDS code; deadline is n - 1 here.
    const auto cols = ctx.pick(l, ctx.deadline, p.k - l, [](int) { return true; });
    const Vector v = ctx.solve_rows(l, cols, ctx.values(cols));
    out.value = v[0];
    out.time = ctx.time_of(cols);
    out.method = DecodeMethod::BurstMds2;
    return out;
  }

  const int alpha_col = l + p.T;
  const bool burst = window_erasures.size() > static_cast<std::size_t>(p.N);

  if (burst) {
    // Columns free of u[l..a] carry only the tail symbols u[a+1..k-1].
    auto free_of_alpha_rows = [&](int c) {
      for (int i = l; i <= a; ++i) {
        if (!QuadExtField::is_zero(ctx.g(i, c))) {
          return false;
        }
      }
      return true;
    };
    auto cols = ctx.pick(l + 1, alpha_col - 1, p.tail_dim(), free_of_alpha_rows);
    const Vector tail = ctx.solve_rows(a + 1, cols, ctx.values(cols));
    if (!ctx.available(alpha_col)) {
      throw DecoderInconsistency("decode_symbol: alpha column erased inside a burst window");
    }
    ExtElem rhs = ctx.x(alpha_col);
    for (int j = l + 1; j < p.k; ++j) {
      const ExtElem coef = ctx.g(j, alpha_col);
      if (j <= a) {
        if (!QuadExtField::is_zero(coef)) {
          throw DecoderInconsistency("decode_symbol: alpha block is not diagonal");
        }
        continue;
      }
      rhs = f.sub(rhs, f.mul(coef, tail[static_cast<std::size_t>(j - a - 1)]));
    }
    out.value = f.div(rhs, ctx.g(l, alpha_col));
    cols.push_back(alpha_col);
    out.time = ctx.time_of(cols);
    out.method = DecodeMethod::BurstMds2;
    return out;
  }

  if (!ctx.available(alpha_col)) {
    // At most N - 1 erasures remain among columns l..T-1 of MDS1 shortened by l.
    const auto cols = ctx.pick(l, p.T - 1, p.k - l, [](int) { return true; });
    const Vector v = ctx.solve_rows(l, cols, ctx.values(cols));
    out.value = v[0];
    out.time = ctx.time_of(cols);
    out.method = DecodeMethod::ArbitraryMds1;
    return out;
  }

  // MDS1 shortened by l + 1 yields u[j] + w_j u[l] for every j > l, with w over the base
  // field; substituting into the alpha column leaves (alpha - base element) * u[l].
  auto cols = ctx.pick(l + 1, p.T - 1, p.k - l - 1, [](int) { return true; });
  const Vector combos = ctx.solve_rows(l + 1, cols, ctx.values(cols));
  const Vector weights = ctx.solve_rows(l + 1, cols, ctx.row_values(l, cols));
  ExtElem coef = ctx.g(l, alpha_col);
  ExtElem rhs = ctx.x(alpha_col);
  for (int j = l + 1; j < p.k; ++j) {
    const ExtElem gj = ctx.g(j, alpha_col);
    const auto idx = static_cast<std::size_t>(j - l - 1);
    coef = f.sub(coef, f.mul(gj, weights[idx]));
    rhs = f.sub(rhs, f.mul(gj, combos[idx]));
  }
  if (QuadExtField::is_zero(coef)) {
    throw DecoderInconsistency("decode_symbol: alpha coefficient of u[" + std::to_string(l) +
                               "] cancelled to zero");
  }
  out.value = f.div(rhs, coef);
  out.alpha_pivot = coef;
  cols.push_back(alpha_col);
  out.time = ctx.time_of(cols);
  out.method = DecodeMethod::AlphaCancel;
  return out;
}

DecodeReport structured_decode(const CodeTables& tables, const ReceivedBlock& received,
                               const DecodeOptions& options) {
  const auto k = static_cast<std::size_t>(tables.params.k);
  DecodeReport report;
  report.symbols.resize(k);
  std::vector<ExtElem> known;
  std::vector<int> times;
  for (int l = 0; l < tables.params.k; ++l) {
    SymbolDecode d = decode_symbol(tables, received, known, times, l);
    if (d.time > decode_deadline(l, tables.params)) {
      throw DecoderInconsistency("structured_decode: u[" + std::to_string(l) + "] recovered at time " +
                                 std::to_string(d.time) + " after its deadline");
    }
    if (options.cross_check) {
      const OracleResult ref = oracle_decode(tables, received, l);
      if (!ref.value || !(*ref.value == d.value)) {
        throw DecoderInconsistency("structured_decode: u[" + std::to_string(l) +
                                   "] disagrees with the oracle");
      }
    }
    known.push_back(d.value);
    times.push_back(d.time);
    report.symbols[static_cast<std::size_t>(l)] = d;
  }
  return report;
}

DecodeReport decode_block(const CodeTables& tables, const ReceivedBlock& received) {
  try {
    return structured_decode(tables, received);
  } catch (const InadmissiblePattern& e) {
    DecodeReport report;
    report.admissible = false;
    report.violation = e.window();
    report.warnings.emplace_back(e.what());
    report.warnings.emplace_back("pattern outside the channel model; falling back to the oracle");
    report.symbols.resize(static_cast<std::size_t>(tables.params.k));
    for (int l = 0; l < tables.params.k; ++l) {
      const OracleResult r = oracle_decode(tables, received, l);
      if (r.value) {
        report.symbols[static_cast<std::size_t>(l)] = SymbolDecode{l, *r.value, r.time, DecodeMethod::Oracle, {}};
      }
    }
    return report;
  }
}

} // namespace streamcode

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "streamcode/channel.hpp"
#include "streamcode/construction.hpp"
#include "streamcode/decoder.hpp"
#include "streamcode/io.hpp"
#include "streamcode/streaming.hpp"
#include "streamcode/verify.hpp"

using namespace streamcode;

namespace {

constexpr int kMaxT = 9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_s;
  const bool ok = out.pass && in_time;
  failures += ok ? 0 : 1;
  std::printf("[%s] %d %s: %s (%.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              out.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

std::vector<ExtElem> random_message(const CodeTables& t, std::mt19937_64& rng) {
  std::vector<ExtElem> m(static_cast<std::size_t>(t.params.k));
  for (auto& s : m) {
    s = t.field.from_index(rng() % t.field.order());
  }
  return m;
}

struct StreamRun {
  uint64_t missed = 0;
  uint64_t wrong = 0;
  std::string trace_bytes;
};

StreamRun stream(const std::shared_ptr<const CodeTables>& t, const ErasureSequence& loss, uint64_t seed) {
  std::mt19937_64 rng(seed);
  StreamEncoder enc(t);
  StreamDecoder dec(t);
  Trace trace{trace_header(t->params, t->field), {}};
  std::vector<std::vector<ExtElem>> sent;
  StreamRun out;
  for (std::size_t i = 0; i < loss.size(); ++i) {
    sent.push_back(random_message(*t, rng));
    Packet pk = enc.encode_step(i, sent.back());
    if (loss[i]) {
      pk.payload.reset();
    }
    trace.packets.push_back(pk);
    for (const auto& m : dec.decode_step(pk)) {
      if (!m.complete() || m.delay > t->params.T) {
        ++out.missed;
        continue;
      }
      for (std::size_t r = 0; r < m.symbols.size(); ++r) {
        if (!(*m.symbols[r] == sent[m.seq][r])) {
          ++out.wrong;
          break;
        }
      }
    }
  }
  std::ostringstream os(std::ios::binary);
  write_trace(os, trace);
  out.trace_bytes = os.str();
  return out;
}

FieldMatrix random_rank(const QuadExtField& f, std::size_t r, std::size_t c, std::size_t s, std::mt19937_64& rng) {
  FieldMatrix a(f, r, s), b(f, s, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      a(i, j) = f.from_index(rng() % f.order());
    }
  }
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      b(i, j) = f.from_index(rng() % f.order());
    }
  }
  return multiply(a, b);
}

} // namespace

int main() {
  const auto grid = parameter_grid(kMaxT);

  criterion(1, "rate equals capacity on the grid", 1, [&] {
    std::size_t ok = 0;
    for (const auto& p : grid) {
      // Exact cross-multiplication against the capacity formula.
      const bool eq = int64_t{p.k} * (p.T - p.N + p.B + 1) == int64_t{p.n} * (p.T - p.N + 1) &&
                      rate(p) == capacity(p);
      ok += eq ? 1 : 0;
    }
    return Outcome{ok == grid.size(), std::to_string(ok) + "/" + std::to_string(grid.size()) + " points exact"};
  });

  criterion(2, "worked example (6,4,3)", 1, [&] {
    const CodeTables t = build_code(derive_params(6, 4, 3));
    bool ok = t.params.n == 8 && t.params.k == 4 && t.field.p() == 11 && t.field.order() == 121;
    const char* pattern[4] = {"xxx000a0", "0xxx000a", "00xxx0xx", "000xxxxx"};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        const ExtElem v = t.G(i, j);
        const char c = pattern[i][j];
        ok = ok && (c == 'a' ? v == t.alpha
                             : c == '0' ? QuadExtField::is_zero(v)
                                        : !QuadExtField::is_zero(v) && QuadExtField::is_in_base(v));
      }
    }
    const FieldMatrix m1 = mds1_generator(t);
    const FieldMatrix m2 = mds2_generator(t);
    ok = ok && m1.rows() == 4 && m1.cols() == 6 && is_mds_generator(m1) && m1.all_in_base_field();
    ok = ok && m2.rows() == 2 && m2.cols() == 6 && is_mds_generator(m2) && m2.all_in_base_field();
    return Outcome{ok, "(8,4) over GF(11^2), support pattern exact, MDS1 (6,4), MDS2 (6,2)"};
  });

  criterion(3, "exhaustive delay-constrained recovery on the grid", 120, [&] {
    std::size_t patterns = 0, checks = 0, bad_points = 0;
    std::string first;
    for (const auto& p : grid) {
      const RecoveryReport r = check_recovery_exhaustive(build_code(p));
      patterns += r.patterns;
      checks += r.symbol_checks;
      if (!r.pass()) {
        ++bad_points;
        if (first.empty()) {
          first = " first failure T=" + std::to_string(p.T) + " B=" + std::to_string(p.B) + " N=" +
                  std::to_string(p.N) + ": " + r.first_failure.value_or("");
        }
      }
    }
    return Outcome{bad_points == 0, std::to_string(grid.size()) + " points, " + std::to_string(patterns) +
                                        " patterns, " + std::to_string(checks) + " symbol checks, " +
                                        std::to_string(bad_points) + " failing points" + first};
  });

  criterion(4, "tightness: deadline T-1 fails somewhere with B > N", 10, [&] {
    RecoveryOptions tight;
    tight.deadline_slack = -1;
    tight.messages_per_pattern = 1;
    std::size_t tight_fail = 0, eligible = 0;
    for (const auto& p : grid) {
      if (p.B > p.N && p.T <= 6) {
        ++eligible;
        tight_fail += check_recovery_exhaustive(build_code(p), tight).pass() ? 0 : 1;
      }
    }
    // Dropping alpha must also break recovery somewhere.
    std::size_t no_alpha_fail = 0;
    for (const auto& p : grid) {
      if (p.B > p.N && p.T <= 6) {
        RecoveryOptions o;
        o.messages_per_pattern = 1;
        no_alpha_fail += check_recovery_exhaustive(build_code_without_alpha(p), o).pass() ? 0 : 1;
      }
    }
    return Outcome{tight_fail > 0 && no_alpha_fail > 0,
                   std::to_string(tight_fail) + "/" + std::to_string(eligible) +
                       " points fail at T-1; alpha removed: " + std::to_string(no_alpha_fail) + "/" +
                       std::to_string(eligible) + " fail"};
  });

  criterion(5, "parity-check conditions B1/R1/B2/R2 on the grid", 60, [&] {
    std::size_t reports = 0, bad = 0, informational = 0;
    for (const auto& p : grid) {
      const CodeTables t = build_code(p);
      for (const auto& part : {check_B1(t), check_R1(t), check_B2(t), check_R2(t)}) {
        for (const auto& r : part) {
          if (r.informational) {
            ++informational;
            continue;
          }
          ++reports;
          bad += r.pass ? 0 : 1;
        }
      }
    }
    return Outcome{bad == 0, std::to_string(reports) + " condition reports, " + std::to_string(bad) + " failing (" +
                                 std::to_string(informational) + " informational B+1-column reports)"};
  });

  criterion(6, "rank and span properties, product rank bounds", 10, [&] {
    std::size_t bad = 0;
    for (const auto& p : grid) {
      const CodeTables t = build_code(p);
      for (const auto& r : check_code_properties(t)) {
        if ((r.id == "tail-rank" || r.id == "span" || r.id == "alpha-diagonal") && !r.pass) {
          ++bad;
        }
      }
    }
    std::mt19937_64 rng(2024);
    const QuadExtField f(11);
    std::size_t rank_bad = 0;
    for (int i = 0; i < 200; ++i) {
      const std::size_t m = 1 + rng() % 6, k = 1 + rng() % 6, n = 1 + rng() % 6;
      const FieldMatrix a = random_rank(f, m, k, 1 + rng() % k, rng);
      const FieldMatrix b = random_rank(f, k, n, 1 + rng() % k, rng);
      const std::size_t ra = rank(a), rb = rank(b), rab = rank(multiply(a, b));
      rank_bad += (rab <= std::min(ra, rb) && rab + k >= ra + rb) ? 0 : 1;
    }
    return Outcome{bad == 0 && rank_bad == 0, std::to_string(bad) + " property failures on the grid, " +
                                                  std::to_string(rank_bad) + "/200 rank-inequality violations"};
  });

  criterion(7, "streaming lift", 60, [&] {
    std::size_t sum_bad = 0;
    for (const auto& p : grid) {
      const CodeTables t = build_code(p);
      FieldMatrix sum(t.field, t.G.rows(), t.G.cols());
      for (const auto& g : conv_generators(t.G)) {
        sum = add(sum, g);
      }
      sum_bad += sum == t.G ? 0 : 1;
    }
    auto t = std::make_shared<const CodeTables>(build_code(derive_params(6, 4, 3, 7)));
    uint64_t missed = 0, wrong = 0;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      const auto loss = sample_sequence({7, 4, 3}, 10000 + 6, seed);
      const StreamRun r = stream(t, loss, seed);
      missed += r.missed;
      wrong += r.wrong;
    }
    uint64_t burst_missed = 0;
    for (int phase = 0; phase < t->params.n; ++phase) {
      ErasureSequence loss(200, 0);
      for (int j = 0; j < 4; ++j) {
        loss[static_cast<std::size_t>(50 + phase + j)] = 1;
      }
      const StreamRun r = stream(t, loss, 100 + static_cast<uint64_t>(phase));
      burst_missed += r.missed + r.wrong;
    }
    return Outcome{sum_bad == 0 && missed == 0 && wrong == 0 && burst_missed == 0,
                   "sum of lag generators = G at " + std::to_string(grid.size() - sum_bad) + "/" +
                       std::to_string(grid.size()) + " points; 20 seeds x 1e4 steps: missed_deadlines=" +
                       std::to_string(missed) + " wrong=" + std::to_string(wrong) +
                       "; bursts at phases 0..7: missed=" + std::to_string(burst_missed)};
  });

  criterion(8, "field size quadratic in the delay", 1, [&] {
    std::size_t ok = 0;
    for (const auto& p : grid) {
      const uint64_t q = uint64_t{p.p} * p.p;
      const uint64_t n = static_cast<uint64_t>(p.T + p.B - p.N + 1);
      const uint64_t t1 = static_cast<uint64_t>(p.T + 1);
      ok += (p.p <= 2 * static_cast<uint64_t>(p.n) && q <= 4 * n * n && 4 * n * n <= 16 * t1 * t1) ? 1 : 0;
    }
    return Outcome{ok == grid.size(), std::to_string(ok) + "/" + std::to_string(grid.size()) +
                                          " points with p <= 2n and p^2 <= 4n^2 <= 16(T+1)^2"};
  });

  criterion(9, "round trip and determinism", 10, [&] {
    auto t = std::make_shared<const CodeTables>(build_code(derive_params(6, 4, 3)));
    std::mt19937_64 rng(9);
    std::vector<std::vector<ExtElem>> msgs;
    for (int i = 0; i < 300; ++i) {
      msgs.push_back(random_message(*t, rng));
    }
    const std::string text = write_messages(msgs);
    // Encode from text, pad with T zero messages, serialize, parse, decode, re-serialize.
    const auto parsed = read_messages(text, t->field, t->params.k);
    StreamEncoder enc(t);
    Trace tr{trace_header(t->params, t->field), {}};
    const std::vector<ExtElem> zero(4, t->field.zero());
    for (std::size_t i = 0; i < parsed.size() + 6; ++i) {
      tr.packets.push_back(enc.encode_step(i, i < parsed.size() ? parsed[i] : zero));
    }
    std::ostringstream os(std::ios::binary);
    write_trace(os, tr);
    std::istringstream is(os.str(), std::ios::binary);
    const Trace back = read_trace(is);
    StreamDecoder dec(t);
    std::vector<std::vector<ExtElem>> out;
    for (const auto& pk : back.packets) {
      for (const auto& m : dec.decode_step(pk)) {
        std::vector<ExtElem> v;
        for (const auto& s : m.symbols) {
          v.push_back(s.value_or(ExtElem{999, 999}));
        }
        out.push_back(v);
      }
    }
    const bool identity = write_messages(out) == text;

    const auto loss = sample_sequence({7, 4, 3}, 3000, 5);
    const bool same_loss = loss == sample_sequence({7, 4, 3}, 3000, 5);
    const bool same_trace = stream(t, loss, 5).trace_bytes == stream(t, loss, 5).trace_bytes;
    const bool same_dump = code_dump(*t).dump() == code_dump(build_code(derive_params(6, 4, 3))).dump();
    return Outcome{identity && same_loss && same_trace && same_dump,
                   std::string("encode->decode identity ") + (identity ? "yes" : "no") + ", repeated seeded runs " +
                       (same_loss && same_trace && same_dump ? "byte-identical" : "differ")};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

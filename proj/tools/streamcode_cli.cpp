#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "streamcode/channel.hpp"
#include "streamcode/construction.hpp"
#include "streamcode/decoder.hpp"
#include "streamcode/io.hpp"
#include "streamcode/streaming.hpp"
#include "streamcode/verify.hpp"

using namespace streamcode;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kParamError = 2, kFormatError = 3, kGuard = 4 };

struct CodeArgs {
  int T = 0;
  int B = 0;
  int N = 0;
  std::optional<int> W;

  void add_to(CLI::App* app, bool positional = false) {
    app->add_option(positional ? "T,--T" : "--T", T, "decoding delay")->required();
    app->add_option(positional ? "B,--B" : "--B", B, "burst length")->required();
    app->add_option(positional ? "N,--N" : "--N", N, "isolated erasures per window")->required();
    app->add_option(positional ? "W,--W" : "--W", W, "window length (default T+1)");
  }
  CodeParams params() const { return derive_params(T, B, N, W); }
};

class IoFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoFailure("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_file(path);
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoFailure("cannot write " + path);
  }
  out << data;
}

std::string status(bool ok) { return ok ? "ok" : "FAIL"; }

int cmd_params(const CodeArgs& a) {
  const CodeParams p = a.params();
  std::cout << "n=" << p.n << " k=" << p.k << " p=" << p.p << " rate=" << to_string(rate(p))
            << " capacity=" << to_string(capacity(p)) << "\n";
  return kOk;
}

int cmd_gen(const CodeArgs& a, const std::string& out) {
  const CodeTables t = build_code(a.params());
  write_output(out, code_dump(t).dump(2) + "\n");
  return kOk;
}

int cmd_encode(const CodeArgs& a, const std::string& in, const std::string& out) {
  auto tables = std::make_shared<const CodeTables>(build_code(a.params()));
  const auto& p = tables->params;
  auto messages = read_messages(read_input(in), tables->field, p.k);
  // T trailing zero messages flush the last real message past its deadline.
  const std::vector<ExtElem> zero(static_cast<std::size_t>(p.k), tables->field.zero());
  Trace trace{trace_header(p, tables->field), {}};
  StreamEncoder enc(tables);
  const std::size_t total = messages.size() + static_cast<std::size_t>(p.T);
  for (std::size_t i = 0; i < total; ++i) {
    trace.packets.push_back(enc.encode_step(i, i < messages.size() ? messages[i] : zero));
  }
  std::ostringstream os(std::ios::binary);
  write_trace(os, trace);
  write_output(out, os.str());
  return kOk;
}

std::string message_line(const DecodedMessage& m) {
  std::string line;
  for (std::size_t i = 0; i < m.symbols.size(); ++i) {
    line += (i ? " " : "") + (m.symbols[i] ? to_string(*m.symbols[i]) : std::string("?"));
  }
  return line + "\n";
}

int cmd_decode(const std::optional<CodeArgs>& a, const std::string& in, const std::string& out,
               const std::string& report_path) {
  const std::string data = read_input(in);
  if (looks_like_trace(data)) {
    std::istringstream is(data, std::ios::binary);
    const Trace trace = read_trace(is);
    auto tables = std::make_shared<const CodeTables>(build_code(params_from_header(trace.header)));
    StreamDecoder dec(tables);
    std::string text;
    nlohmann::json delays = nlohmann::json::array();
    int max_delay = 0;
    for (const auto& pk : trace.packets) {
      for (const auto& m : dec.decode_step(pk)) {
        text += message_line(m);
        delays.push_back({{"seq", m.seq}, {"delay", m.complete() ? nlohmann::json(m.delay) : nlohmann::json()}});
        max_delay = std::max(max_delay, m.delay);
      }
    }
    write_output(out, text);
    const auto& s = dec.stats();
    std::cerr << "messages=" << s.messages << " missed_messages=" << s.missed_messages
              << " max_delay=" << max_delay << "\n";
    if (!report_path.empty()) {
      nlohmann::json rep{{"messages", s.messages},
                         {"missed_messages", s.missed_messages},
                         {"missed_symbols", s.missed_symbols},
                         {"oracle_fallbacks", s.oracle_fallbacks},
                         {"delays", std::move(delays)}};
      write_output(report_path, rep.dump(2) + "\n");
    }
    return s.missed_messages == 0 ? kOk : kVerifyFailed;
  }
  if (!a) {
    throw ParamError("decoding a block symbol file requires --T --B --N");
  }
  const CodeTables tables = build_code(a->params());
  const ReceivedBlock rx = read_block_symbols(data, tables.field, tables.params.n);
  const DecodeReport rep = decode_block(tables, rx);
  write_output(out, report_to_json(rep).dump(2) + "\n");
  return rep.complete() ? kOk : kVerifyFailed;
}

int cmd_simulate(const CodeArgs& a, uint64_t seed, std::size_t len, double mix, double rate_,
                 const std::string& out) {
  auto tables = std::make_shared<const CodeTables>(build_code(a.params()));
  const auto& p = tables->params;
  const SlidingWindowSpec spec{p.W, p.B, p.N};
  const std::size_t total = len + static_cast<std::size_t>(p.T);
  const ErasureSequence loss = sample_sequence(spec, total, seed, {rate_, mix});
  const AdmissibilityResult adm = is_admissible(loss, spec);

  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::vector<ExtElem>> sent;
  StreamEncoder enc(tables);
  StreamDecoder dec(tables);
  Trace trace{trace_header(p, tables->field), {}};
  uint64_t missed = 0;
  uint64_t wrong = 0;
  std::size_t erased = 0;
  const std::vector<ExtElem> zero(static_cast<std::size_t>(p.k), tables->field.zero());
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<ExtElem> msg = zero;
    if (i < len) {
      for (auto& s : msg) {
        s = tables->field.from_index(rng() % tables->field.order());
      }
    }
    sent.push_back(msg);
    Packet pk = enc.encode_step(i, msg);
    if (loss[i]) {
      pk.payload.reset();
      ++erased;
    }
    trace.packets.push_back(pk);
    for (const auto& m : dec.decode_step(pk)) {
      if (m.seq >= len) {
        continue;
      }
      if (!m.complete()) {
        ++missed;
        continue;
      }
      for (std::size_t r = 0; r < m.symbols.size(); ++r) {
        if (!(*m.symbols[r] == sent[m.seq][r])) {
          ++wrong;
          break;
        }
      }
    }
  }
  if (!out.empty()) {
    std::ostringstream os(std::ios::binary);
    write_trace(os, trace);
    write_output(out, os.str());
  }
  std::cout << "steps=" << len << " erased_packets=" << erased << " admissible=" << (adm ? 1 : 0)
            << " oracle_fallbacks=" << dec.stats().oracle_fallbacks << " wrong_messages=" << wrong << "\n";
  std::cout << "missed_deadlines=" << missed << "\n";
  return missed == 0 && wrong == 0 ? kOk : kVerifyFailed;
}

void print_conditions(const std::vector<ConditionReport>& reps) {
  for (const auto& r : reps) {
    std::cout << "  " << r.id;
    if (r.param >= 0) {
      std::cout << "[l=" << r.param << "]";
    }
    std::cout << " " << (r.informational ? (r.pass ? "holds" : "fails (informational)") : status(r.pass));
    if (!r.note.empty()) {
      std::cout << "  " << r.note;
    }
    if (!r.pass && !r.witness.empty()) {
      std::cout << "  witness:";
      for (const auto& w : r.witness) {
        std::cout << " " << to_string(w);
      }
    }
    std::cout << "\n";
  }
}

std::string recovery_line(const RecoveryReport& r) {
  std::ostringstream os;
  os << "recovery " << status(r.pass()) << " patterns=" << r.patterns << " checks=" << r.symbol_checks
     << " failures=" << r.failures;
  if (r.first_failure) {
    os << " first: " << *r.first_failure;
  }
  return os.str();
}

int cmd_verify_point(const CodeArgs& a, bool recovery) {
  const CodeTables t = build_code(a.params());
  const auto& p = t.params;
  std::cout << "T=" << p.T << " B=" << p.B << " N=" << p.N << " n=" << p.n << " k=" << p.k << " p=" << p.p
            << "\n";
  std::vector<ConditionReport> reps;
  for (auto part : {check_B1(t), check_R1(t), check_B2(t), check_R2(t), check_code_properties(t)}) {
    reps.insert(reps.end(), part.begin(), part.end());
  }
  print_conditions(reps);
  bool ok = all_pass(reps);
  if (recovery) {
    const RecoveryReport r = check_recovery_exhaustive(t);
    std::cout << "  " << recovery_line(r) << "\n";
    ok = ok && r.pass();
  }
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kOk : kVerifyFailed;
}

int cmd_grid(int max_T, bool recovery) {
  if (max_T < 1) {
    throw ParamError("--grid must be >= 1");
  }
  const auto reports = run_grid({max_T, recovery, 0});
  std::size_t failures = 0;
  for (const auto& g : reports) {
    const auto& p = g.params;
    std::cout << "T=" << p.T << " B=" << p.B << " N=" << p.N << " n=" << p.n << " p=" << p.p
              << " rate=" << to_string(rate(p)) << " capacity=" << to_string(capacity(p));
    for (const char* id : {"B1", "R1", "B2", "R2", "base-mds", "mds1", "mds2", "tail-rank", "span", "alpha-diagonal"}) {
      bool ok = true;
      for (const auto& c : g.conditions) {
        if (c.id == id && !c.pass) {
          ok = false;
        }
      }
      std::cout << " " << id << "=" << status(ok);
    }
    if (g.recovery) {
      std::cout << " recovery=" << status(g.recovery->pass()) << "(" << g.recovery->patterns << ")";
    }
    std::cout << "\n";
    if (!g.pass()) {
      ++failures;
      for (const auto& c : g.conditions) {
        if (!c.pass && !c.informational) {
          print_conditions({c});
        }
      }
      if (g.recovery && !g.recovery->pass()) {
        std::cout << "  " << recovery_line(*g.recovery) << "\n";
      }
    }
  }
  std::cout << "points=" << reports.size() << " failures=" << failures << "\n";
  return failures == 0 ? kOk : kVerifyFailed;
}

int cmd_pack(const CodeArgs& a, const std::string& in, const std::string& out) {
  const CodeParams p = a.params();
  const QuadExtField field(p.p);
  const std::string data = read_input(in);
  const std::vector<uint8_t> bytes(data.begin(), data.end());
  write_output(out, write_messages(pack_bytes(bytes, field, p.k)));
  return kOk;
}

int cmd_unpack(const CodeArgs& a, const std::string& in, const std::string& out) {
  const CodeParams p = a.params();
  const QuadExtField field(p.p);
  const auto messages = read_messages(read_input(in), field, p.k);
  std::vector<uint8_t> bytes;
  try {
    bytes = unpack_bytes(messages, field);
  } catch (const std::invalid_argument& e) {
    throw FormatError(0, e.what());
  }
  write_output(out, std::string(bytes.begin(), bytes.end()));
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-optimal streaming erasure codes for burst and isolated losses"};
  app.require_subcommand(1);

  CodeArgs params_args, gen_args, enc_args, dec_args, sim_args, ver_args, pack_args, unpack_args;
  std::string in, out, report;
  uint64_t seed = 1;
  std::size_t len = 10000;
  double loss_mix = 0.5;
  double loss_rate = 0.05;
  int grid = 0;
  bool no_recovery = false;

  auto* params = app.add_subcommand("params", "print n, k, p, rate and capacity");
  params_args.add_to(params, true);

  auto* gen = app.add_subcommand("gen", "dump the construction matrices as JSON");
  gen_args.add_to(gen);
  gen->add_option("--out", out, "output file (default stdout)");

  auto* encode = app.add_subcommand("encode", "encode a message file into a packet trace");
  enc_args.add_to(encode);
  encode->add_option("--in", in, "message file, k symbols per line")->required();
  encode->add_option("--out", out, "trace file (default stdout)");

  auto* decode = app.add_subcommand("decode", "decode a packet trace or a single block");
  decode->add_option("--T", dec_args.T);
  decode->add_option("--B", dec_args.B);
  decode->add_option("--N", dec_args.N);
  decode->add_option("--W", dec_args.W);
  decode->add_option("--in", in, "trace file or block symbol file")->required();
  decode->add_option("--out", out, "output (default stdout)");
  decode->add_option("--report", report, "per-message delay report (JSON), trace input only");

  auto* simulate = app.add_subcommand("simulate", "stream random messages through sampled losses");
  sim_args.add_to(simulate);
  simulate->add_option("--seed", seed);
  simulate->add_option("--len", len, "messages");
  simulate->add_option("--loss-mix", loss_mix, "probability an event is a burst")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--loss-rate", loss_rate, "probability an event starts")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--out", out, "write the lossy trace");

  auto* verify = app.add_subcommand("verify", "check conditions and exhaustive recovery");
  verify->add_option("--T", ver_args.T);
  verify->add_option("--B", ver_args.B);
  verify->add_option("--N", ver_args.N);
  verify->add_option("--W", ver_args.W);
  verify->add_option("--grid", grid, "sweep every T <= grid instead of one point");
  verify->add_flag("--no-recovery", no_recovery, "skip exhaustive recovery");

  auto* sweep = app.add_subcommand("sweep", "verify the whole grid T <= --grid");
  sweep->add_option("--grid", grid, "largest T")->required();
  sweep->add_flag("--no-recovery", no_recovery, "skip exhaustive recovery");

  auto* pack = app.add_subcommand("pack", "bytes to message symbols");
  pack_args.add_to(pack);
  pack->add_option("--in", in)->required();
  pack->add_option("--out", out);

  auto* unpack = app.add_subcommand("unpack", "message symbols back to bytes");
  unpack_args.add_to(unpack);
  unpack->add_option("--in", in)->required();
  unpack->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParamError;
  }

  try {
    if (*params) {
      return cmd_params(params_args);
    }
    if (*gen) {
      return cmd_gen(gen_args, out);
    }
    if (*encode) {
      return cmd_encode(enc_args, in, out);
    }
    if (*decode) {
      const bool have = decode->count("--T") && decode->count("--B") && decode->count("--N");
      return cmd_decode(have ? std::optional(dec_args) : std::nullopt, in, out, report);
    }
    if (*simulate) {
      return cmd_simulate(sim_args, seed, len, loss_mix, loss_rate, out);
    }
    if (*verify) {
      if (grid > 0) {
        return cmd_grid(grid, !no_recovery);
      }
      if (!(verify->count("--T") && verify->count("--B") && verify->count("--N"))) {
        throw ParamError("verify needs --T --B --N or --grid");
      }
      return cmd_verify_point(ver_args, !no_recovery);
    }
    if (*sweep) {
      return cmd_grid(grid, !no_recovery);
    }
    if (*pack) {
      return cmd_pack(pack_args, in, out);
    }
    if (*unpack) {
      return cmd_unpack(unpack_args, in, out);
    }
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParamError;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormatError;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFormatError;
  } catch (const GuardExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGuard;
  }
  return kParamError;
}

#include "streamcode/verify.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "streamcode/channel.hpp"
#include "streamcode/decoder.hpp"

namespace streamcode {

namespace {

IndexList span_of(int lo, int hi) {
  if (hi < lo) {
    return {};
  }
  return index_range(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi) + 1);
}

// Coefficients expressing `target` through the columns `cols` of m, if it lies in their span.
std::optional<Vector> span_witness(const FieldMatrix& m, const IndexList& cols, std::size_t target) {
  const Vector t = m.column(target);
  if (cols.empty()) {
    const bool zero = std::all_of(t.begin(), t.end(), QuadExtField::is_zero);
    return zero ? std::optional<Vector>(Vector{}) : std::nullopt;
  }
  const SolveResult sol = solve(m.submatrix(index_range(0, m.rows()), cols), t);
  if (sol.status == SolveStatus::Inconsistent) {
    return std::nullopt;
  }
  return sol.x;
}

// A nonzero dependence among the columns `cols` of m, if any.
std::optional<Vector> dependence_witness(const FieldMatrix& m, const IndexList& cols) {
  const auto null = right_null_space(m.submatrix(index_range(0, m.rows()), cols));
  if (null.empty()) {
    return std::nullopt;
  }
  return null.front();
}

std::string list_to_string(const IndexList& cols) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << cols[i];
  }
  os << "}";
  return os.str();
}

ConditionReport mds_report(const std::string& id, const FieldMatrix& g, const std::string& shape) {
  ConditionReport rep;
  rep.id = id;
  rep.note = shape;
  if (g.rows() == 0) {
    rep.note += " (trivial)";
    return rep;
  }
  // Any k columns independent; search explicitly so a failure carries its witness.
  for_each_subset(g.cols(), g.rows(), [&](const IndexList& cols) {
    if (auto w = dependence_witness(g, cols)) {
      rep.pass = false;
      rep.columns = cols;
      rep.witness = *w;
      return false;
    }
    return true;
  });
  return rep;
}

} // namespace

std::vector<ConditionReport> check_B1(const CodeTables& t) {
  const auto& p = t.params;
  std::vector<ConditionReport> out;
  for (int l = 0; l <= p.B - p.N; ++l) {
    const FieldMatrix hl = parity_slice(t, l);
    ConditionReport rep;
    rep.id = "B1";
    rep.param = l;
    rep.columns = span_of(l, l + p.B - 1);
    const IndexList rest = span_of(l + 1, l + p.B - 1);
    if (auto w = span_witness(hl, rest, static_cast<std::size_t>(l))) {
      rep.pass = false;
      rep.witness = *w;
      rep.note = "column " + std::to_string(l) + " lies in the span of " + list_to_string(rest);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<ConditionReport> check_R1(const CodeTables& t, double guard) {
  const auto& p = t.params;
  const double count = binomial(static_cast<std::size_t>(p.T), static_cast<std::size_t>(p.N - 1));
  if (count > guard) {
    throw GuardExceeded("check_R1: C(T, N-1) = " + std::to_string(static_cast<long long>(count)) + " exceeds guard");
  }
  std::vector<ConditionReport> out;
  for (int l = 0; l <= p.B - p.N; ++l) {
    const FieldMatrix hl = parity_slice(t, l);
    ConditionReport rep;
    rep.id = "R1";
    rep.param = l;
    rep.columns = span_of(l + 1, l + p.T);
    for_each_subset(static_cast<std::size_t>(p.T), static_cast<std::size_t>(p.N - 1), [&](const IndexList& s) {
      IndexList cols;
      for (std::size_t i : s) {
        cols.push_back(static_cast<std::size_t>(l + 1) + i);
      }
      if (auto w = span_witness(hl, cols, static_cast<std::size_t>(l))) {
        rep.pass = false;
        rep.columns = cols;
        rep.witness = *w;
        rep.note = "column " + std::to_string(l) + " lies in the span of " + list_to_string(cols);
        return false;
      }
      return true;
    });
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<ConditionReport> check_B2(const CodeTables& t) {
  const auto& p = t.params;
  std::vector<ConditionReport> out;
  for (int l = p.B - p.N + 1; l <= p.T - p.N + 1; ++l) {
    ConditionReport rep;
    rep.id = "B2";
    rep.param = l;
    rep.columns = span_of(l, l + p.B - 1);
    if (auto w = dependence_witness(t.H, rep.columns)) {
      rep.pass = false;
      rep.witness = *w;
    }
    out.push_back(rep);

    // B + 1 columns of a rank-B matrix; kept for the record only.
    ConditionReport wide;
    wide.id = "B2+1";
    wide.param = l;
    wide.informational = true;
    wide.columns = span_of(l, std::min(l + p.B, p.n - 1));
    if (l + p.B > p.n - 1) {
      wide.note = "upper column clamped to n-1";
    }
    if (auto w = dependence_witness(t.H, wide.columns)) {
      wide.pass = false;
      wide.witness = *w;
    }
    out.push_back(std::move(wide));
  }
  return out;
}

std::vector<ConditionReport> check_R2(const CodeTables& t, double guard) {
  const auto& p = t.params;
  const double count = binomial(static_cast<std::size_t>(p.T + 1), static_cast<std::size_t>(p.N));
  if (count > guard) {
    throw GuardExceeded("check_R2: C(T+1, N) = " + std::to_string(static_cast<long long>(count)) + " exceeds guard");
  }
  const int lo = p.B - p.N + 1;
  const int hi = std::min(p.T + p.B - p.N + 1, p.n - 1);
  ConditionReport rep;
  rep.id = "R2";
  rep.columns = span_of(lo, hi);
  rep.note = "upper column " + std::to_string(p.T + p.B - p.N + 1) + " clamped to " + std::to_string(hi);
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  for_each_subset(width, static_cast<std::size_t>(p.N), [&](const IndexList& s) {
    IndexList cols;
    for (std::size_t i : s) {
      cols.push_back(static_cast<std::size_t>(lo) + i);
    }
    if (auto w = dependence_witness(t.H, cols)) {
      rep.pass = false;
      rep.columns = cols;
      rep.witness = *w;
      return false;
    }
    return true;
  });
  return {rep};
}

std::vector<ConditionReport> check_code_properties(const CodeTables& t) {
  const auto& p = t.params;
  const auto k = static_cast<std::size_t>(p.k);
  std::vector<ConditionReport> out;

  out.push_back(mds_report("base-mds", t.Gp, "(" + std::to_string(p.n) + "," + std::to_string(p.k) + ") code of G'"));
  out.push_back(mds_report("mds1", mds1_generator(t),
                           "(" + std::to_string(p.k + p.N - 1) + "," + std::to_string(p.k) + ") MDS1"));
  out.push_back(mds_report("mds2", mds2_generator(t),
                           "(" + std::to_string(p.T) + "," + std::to_string(p.T - p.B) + ") MDS2"));

  {
    // Tail block rank, and every w-column subset has rank min(T - B, w).
    const FieldMatrix tail = g_tail_block(t);
    ConditionReport rep;
    rep.id = "tail-rank";
    const auto rows = tail.rows();
    for (std::size_t w = 1; w <= tail.cols() && rep.pass; ++w) {
      for_each_subset(tail.cols(), w, [&](const IndexList& cols) {
        const FieldMatrix sub = tail.submatrix(index_range(0, rows), cols);
        if (rank(sub) != std::min(rows, w)) {
          rep.pass = false;
          rep.columns = cols;
          if (auto wit = dependence_witness(sub, index_range(0, cols.size()))) {
            rep.witness = *wit;
          }
          rep.note = "rank deficit on tail columns " + list_to_string(cols);
          return false;
        }
        return true;
      });
    }
    if (rep.pass) {
      rep.note = "rank " + std::to_string(std::min(rows, tail.cols()));
    }
    out.push_back(std::move(rep));
  }

  {
    // Upper-right B x (T - B) block of Minv, rows clamped to k.
    ConditionReport rep;
    rep.id = "span";
    const std::size_t first_col = static_cast<std::size_t>(p.alpha_rows());
    const std::size_t block_rows = std::min(static_cast<std::size_t>(p.B), k);
    const std::size_t lead = std::min(static_cast<std::size_t>(p.alpha_rows()), block_rows);
    const FieldMatrix blk = t.Minv.block(0, block_rows, first_col, k);
    if (blk.cols() > 0) {
      const FieldMatrix rest_t = blk.block(lead, block_rows, 0, blk.cols()).transpose();
      for (std::size_t i = 0; i < lead; ++i) {
        const Vector row(blk.row(i).begin(), blk.row(i).end());
        if (rest_t.cols() == 0) {
          if (!std::all_of(row.begin(), row.end(), QuadExtField::is_zero)) {
            rep.pass = false;
          }
        } else {
          const SolveResult sol = solve(rest_t, row);
          if (sol.status == SolveStatus::Inconsistent) {
            rep.pass = false;
          }
        }
        if (!rep.pass) {
          rep.param = static_cast<int>(i);
          rep.witness = row;
          rep.note = "row " + std::to_string(i) + " outside the span of the trailing rows";
          break;
        }
      }
    } else {
      rep.note = "empty block (T = B)";
    }
    out.push_back(std::move(rep));
  }

  {
    ConditionReport rep;
    rep.id = "alpha-diagonal";
    for (int i = 0; i < p.alpha_rows(); ++i) {
      const ExtElem f = t.Gtilde(static_cast<std::size_t>(i), static_cast<std::size_t>(p.T + i));
      if (f.b == 0) {
        rep.pass = false;
        rep.witness = {f};
        rep.note = "Gtilde diagonal entry in column " + std::to_string(p.T + i) + " has no extension part";
        break;
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

RecoveryReport check_recovery_exhaustive(const CodeTables& t, const RecoveryOptions& opt) {
  const auto& p = t.params;
  const auto patterns = enumerate_block_patterns(p.n, p.B, p.N);
  if (patterns.size() > opt.pattern_guard) {
    throw GuardExceeded("check_recovery_exhaustive: " + std::to_string(patterns.size()) +
                        " patterns exceed guard");
  }
  std::mt19937_64 rng(opt.seed);
  RecoveryReport rep;
  rep.patterns = patterns.size();

  auto fail = [&](const ErasurePattern& e, int l, const std::string& why) {
    ++rep.failures;
    if (!rep.first_failure) {
      std::vector<std::size_t> idx(e.erased().begin(), e.erased().end());
      rep.first_failure = "erasures " + list_to_string(idx) + ", u[" + std::to_string(l) + "]: " + why;
    }
  };

  for (const auto& e : patterns) {
    for (int m = 0; m < opt.messages_per_pattern; ++m) {
      std::vector<ExtElem> msg(static_cast<std::size_t>(p.k));
      for (auto& s : msg) {
        s = t.field.from_index(rng() % t.field.order());
      }
      const auto codeword = encode_block(t, msg);
      const ReceivedBlock rx = ReceivedBlock::from_codeword(codeword, e);

      const bool use_oracle = opt.oracle_only || opt.deadline_slack != 0;
      if (use_oracle) {
        for (int l = 0; l < p.k; ++l) {
          ++rep.symbol_checks;
          const OracleResult r = oracle_decode(t, rx, l, opt.deadline_slack);
          if (!r.value) {
            fail(e, l, "not determined by its deadline");
          } else if (!(*r.value == msg[static_cast<std::size_t>(l)])) {
            fail(e, l, "oracle value differs from the message");
          } else {
            ++rep.method_counts[static_cast<int>(DecodeMethod::Oracle)];
          }
        }
        continue;
      }

      DecodeReport dr;
      try {
        dr = structured_decode(t, rx);
      } catch (const std::exception& ex) {
        rep.symbol_checks += static_cast<std::size_t>(p.k);
        fail(e, 0, std::string("structured decoder threw: ") + ex.what());
        continue;
      }
      for (int l = 0; l < p.k; ++l) {
        ++rep.symbol_checks;
        const auto& d = dr.symbols[static_cast<std::size_t>(l)];
        const OracleResult r = oracle_decode(t, rx, l);
        if (!d) {
          fail(e, l, "structured decoder gave no value");
        } else if (d->time > decode_deadline(l, p)) {
          fail(e, l, "recovered at time " + std::to_string(d->time) + " after the deadline");
        } else if (!(d->value == msg[static_cast<std::size_t>(l)])) {
          fail(e, l, "structured value differs from the message");
        } else if (!r.value || !(*r.value == d->value)) {
          fail(e, l, "oracle disagrees with the structured decoder");
        } else {
          ++rep.method_counts[static_cast<int>(d->method)];
        }
      }
    }
  }
  return rep;
}

bool all_pass(const std::vector<ConditionReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass || r.informational; });
}

bool GridPointReport::pass() const { return all_pass(conditions) && (!recovery || recovery->pass()); }

std::vector<CodeParams> parameter_grid(int max_T) {
  std::vector<CodeParams> out;
  for (int T = 1; T <= max_T; ++T) {
    for (int B = 1; B <= T; ++B) {
      for (int N = 1; N <= B; ++N) {
        out.push_back(derive_params(T, B, N));
      }
    }
  }
  return out;
}

std::vector<GridPointReport> run_grid(const GridOptions& opt) {
  const auto grid = parameter_grid(opt.max_T);
  std::vector<GridPointReport> out(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      const CodeTables t = build_code(grid[i]);
      GridPointReport& rep = out[i];
      rep.params = grid[i];
      auto append = [&](std::vector<ConditionReport> r) {
        rep.conditions.insert(rep.conditions.end(), r.begin(), r.end());
      };
      append(check_B1(t));
      append(check_R1(t));
      append(check_B2(t));
      append(check_R2(t));
      append(check_code_properties(t));
      if (opt.recovery) {
        rep.recovery = check_recovery_exhaustive(t);
      }
    }
  };
  unsigned threads = opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) {
    pool.emplace_back(worker);
  }
  for (auto& th : pool) {
    th.join();
  }
  return out;
}

} // namespace streamcode

#include "streamcode/construction.hpp"

#include <numeric>
#include <vector>

namespace streamcode {

CodeParams derive_params(int T, int B, int N, std::optional<int> W) {
  if (T < 1 || B < 1 || N < 1) {
    throw ParamError("parameters must be >= 1 (N >= 1 violated)");
  }
  if (!(T >= B)) {
    throw ParamError("T >= B violated (T=" + std::to_string(T) + ", B=" + std::to_string(B) + ")");
  }
  if (!(B >= N)) {
    throw ParamError("B >= N violated (B=" + std::to_string(B) + ", N=" + std::to_string(N) + ")");
  }
  const int w = W.value_or(T + 1);
  if (!(w > T)) {
    throw ParamError("W > T violated (W=" + std::to_string(w) + ", T=" + std::to_string(T) + ")");
  }
  CodeParams params;
  params.W = w;
  params.T = T;
  params.B = B;
  params.N = N;
  params.k = T - N + 1;
  params.n = params.k + B;
  params.p = smallest_prime_at_least(static_cast<uint32_t>(std::max(params.n, 3)));
  return params;
}

Rational make_rational(int64_t num, int64_t den) {
  if (den == 0) {
    throw std::invalid_argument("make_rational: zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::string to_string(const Rational& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

Rational rate(const CodeParams& params) { return make_rational(params.k, params.n); }

Rational capacity(const CodeParams& params) {
  return make_rational(params.T - params.N + 1, params.T - params.N + params.B + 1);
}

FieldMatrix build_gpp(const CodeParams& params, const QuadExtField& field) {
  const auto k = static_cast<std::size_t>(params.k);
  const auto b = static_cast<std::size_t>(params.B);
  std::vector<uint32_t> xs(k);
  std::vector<uint32_t> ys(b);
  std::iota(xs.begin(), xs.end(), 0U);
  std::iota(ys.begin(), ys.end(), static_cast<uint32_t>(k));
  return hstack(FieldMatrix::identity(field, k), cauchy_matrix(field, xs, ys));
}

SpreadingMatrix build_spreading_matrix(const FieldMatrix& gpp, const CodeParams& params) {
  const auto& f = gpp.field();
  const int k = params.k;
  const int N = params.N;
  FieldMatrix m = FieldMatrix::identity(f, static_cast<std::size_t>(k));

  for (int i = 0; i < k; ++i) {
    const int unknowns = std::min(N - 1, k - 1 - i);
    if (unknowns <= 0) {
      continue;
    }
    // Spread columns k .. k+N-2 must vanish beyond the band of row i.
    IndexList zero_cols;
    for (int c = k; c <= k + N - 2; ++c) {
      if (c > i + N - 1) {
        zero_cols.push_back(static_cast<std::size_t>(c));
      }
    }
    if (static_cast<int>(zero_cols.size()) != unknowns) {
      throw std::logic_error("build_spreading_matrix: staircase system is not square");
    }
    // sum_t m_t * Gpp[i+t][c] = -Gpp[i][c] for every constrained c.
    FieldMatrix system(f, zero_cols.size(), static_cast<std::size_t>(unknowns));
    Vector rhs(zero_cols.size());
    for (std::size_t s = 0; s < zero_cols.size(); ++s) {
      for (int t = 0; t < unknowns; ++t) {
        system(s, static_cast<std::size_t>(t)) = gpp(static_cast<std::size_t>(i + 1 + t), zero_cols[s]);
      }
      rhs[s] = f.neg(gpp(static_cast<std::size_t>(i), zero_cols[s]));
    }
    const SolveResult sol = solve(system, rhs);
    if (sol.status != SolveStatus::Unique) {
      throw std::logic_error("build_spreading_matrix: singular staircase system at row " +
                             std::to_string(i));
    }
    for (int t = 0; t < unknowns; ++t) {
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1 + t)) = sol.x[static_cast<std::size_t>(t)];
    }
  }
  FieldMatrix minv = invert(m);
  return {std::move(m), std::move(minv)};
}

FieldMatrix build_g(const FieldMatrix& gp, const CodeParams& params, ExtElem alpha) {
  if (QuadExtField::is_in_base(alpha)) {
    throw std::invalid_argument("build_g: alpha " + to_string(alpha) + " lies in the base field");
  }
  FieldMatrix g = gp;
  const auto span = static_cast<std::size_t>(params.alpha_rows());
  const auto first_col = static_cast<std::size_t>(params.n) - span;
  for (std::size_t i = 0; i < span; ++i) {
    for (std::size_t j = 0; j < span; ++j) {
      g(i, first_col + j) = i == j ? alpha : gp.field().zero();
    }
  }
  return g;
}

FieldMatrix systematic_form(const FieldMatrix& g, const FieldMatrix& minv) { return multiply(minv, g); }

FieldMatrix parity_check(const FieldMatrix& gtilde) {
  const auto& f = gtilde.field();
  const std::size_t k = gtilde.rows();
  const std::size_t b = gtilde.cols() - k;
  FieldMatrix h(f, b, gtilde.cols());
  for (std::size_t r = 0; r < b; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      h(r, c) = f.neg(gtilde(c, k + r));
    }
    h(r, k + r) = f.one();
  }
  return h;
}

namespace {

CodeTables assemble(const CodeParams& params, bool with_alpha) {
  const QuadExtField field(params.p);
  const ExtElem alpha = field.generator();
  FieldMatrix gpp = build_gpp(params, field);
  SpreadingMatrix spread = build_spreading_matrix(gpp, params);
  FieldMatrix gp = multiply(spread.M, gpp);
  FieldMatrix g = with_alpha ? build_g(gp, params, alpha) : gp;
  FieldMatrix gtilde = systematic_form(g, spread.Minv);
  FieldMatrix h = parity_check(gtilde);
  return CodeTables{params,          field,           alpha,        std::move(gpp),
                    std::move(spread.M), std::move(spread.Minv), std::move(gp), std::move(g),
                    std::move(gtilde),   std::move(h)};
}

} // namespace

CodeTables build_code(const CodeParams& params) { return assemble(params, true); }

CodeTables build_code_without_alpha(const CodeParams& params) { return assemble(params, false); }

FieldMatrix mds1_generator(const CodeTables& t) {
  const auto k = static_cast<std::size_t>(t.params.k);
  return t.G.block(0, k, 0, k + static_cast<std::size_t>(t.params.N) - 1);
}

FieldMatrix mds2_generator(const CodeTables& t) {
  const auto skip = static_cast<std::size_t>(t.params.alpha_rows());
  return t.G.block(skip, static_cast<std::size_t>(t.params.k), skip, static_cast<std::size_t>(t.params.n));
}

FieldMatrix g_tail_block(const CodeTables& t) {
  const auto k = static_cast<std::size_t>(t.params.k);
  const auto n = static_cast<std::size_t>(t.params.n);
  const auto rows = static_cast<std::size_t>(t.params.T - t.params.B);
  return t.G.block(k - rows, k, n - static_cast<std::size_t>(t.params.B), n);
}

FieldMatrix parity_slice(const CodeTables& t, int l) {
  if (l < 0 || l > t.params.B - t.params.N) {
    throw std::out_of_range("parity_slice: l outside [0, B - N]");
  }
  return t.H.block(0, static_cast<std::size_t>(t.params.N + l), 0,
                   static_cast<std::size_t>(l + t.params.T + 1));
}

} // namespace streamcode

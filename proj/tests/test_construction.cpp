#include <gtest/gtest.h>

#include "streamcode/construction.hpp"

using namespace streamcode;

namespace {

bool nonzero(const FieldMatrix& m, std::size_t r, std::size_t c) { return !QuadExtField::is_zero(m(r, c)); }

} // namespace

TEST(Params, DerivedShape) {
  const CodeParams p = derive_params(6, 4, 3);
  EXPECT_EQ(p.k, 4);
  EXPECT_EQ(p.n, 8);
  EXPECT_EQ(p.p, 11U);
  EXPECT_EQ(p.W, 7);
  EXPECT_EQ(p.alpha_rows(), 2);
  EXPECT_EQ(p.tail_dim(), 2);

  const CodeParams q = derive_params(1, 1, 1);
  EXPECT_EQ(q.n, 2);
  EXPECT_EQ(q.k, 1);
  EXPECT_EQ(q.p, 3U);
}

TEST(Params, ViolationsNamed) {
  auto message = [](int T, int B, int N, std::optional<int> W) {
    try {
      derive_params(T, B, N, W);
    } catch (const ParamError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(2, 3, 1, {}).find("T >= B"), std::string::npos);
  EXPECT_NE(message(4, 2, 3, {}).find("B >= N"), std::string::npos);
  EXPECT_NE(message(4, 2, 1, 4).find("W > T"), std::string::npos);
  EXPECT_NE(message(4, 2, 0, {}).find("N >= 1"), std::string::npos);
}

TEST(Rates, Examples) {
  EXPECT_EQ(rate(derive_params(6, 4, 3)), (Rational{1, 2}));
  EXPECT_EQ(rate(derive_params(2, 1, 1)), (Rational{2, 3}));
  EXPECT_EQ(rate(derive_params(3, 2, 2)), (Rational{1, 2}));
  EXPECT_EQ(to_string(make_rational(6, -8)), "-3/4");
}

TEST(Rates, RateEqualsCapacityOnGrid) {
  for (int T = 1; T <= 12; ++T) {
    for (int B = 1; B <= T; ++B) {
      for (int N = 1; N <= B; ++N) {
        const CodeParams p = derive_params(T, B, N);
        // Cross-multiplied, independent of reduction.
        EXPECT_EQ(int64_t{p.k} * (T - N + B + 1), int64_t{p.n} * (T - N + 1));
        EXPECT_EQ(rate(p), capacity(p));
      }
    }
  }
}

TEST(Gpp, SystematicCauchy) {
  const CodeParams p = derive_params(6, 4, 3);
  const QuadExtField f(p.p);
  const FieldMatrix g = build_gpp(p, f);
  EXPECT_EQ(g.block(0, 4, 0, 4), FieldMatrix::identity(f, 4));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      // (x_i - y_j) * entry = 1 with x_i = i, y_j = k + j.
      EXPECT_EQ(f.mul(g(i, 4 + j), f.make(static_cast<int64_t>(i) - static_cast<int64_t>(4 + j))), f.one());
    }
  }
  EXPECT_TRUE(is_mds_parity(g.block(0, 4, 4, 8)));
}

TEST(Spreading, BandedUnitUpperTriangular) {
  for (auto [T, B, N] : {std::tuple{6, 4, 3}, {7, 5, 2}, {8, 8, 4}, {5, 3, 1}}) {
    const CodeParams p = derive_params(T, B, N);
    const QuadExtField f(p.p);
    const auto s = build_spreading_matrix(build_gpp(p, f), p);
    for (int i = 0; i < p.k; ++i) {
      for (int j = 0; j < p.k; ++j) {
        const ExtElem v = s.M(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (i == j) {
          EXPECT_EQ(v, f.one());
        } else if (j < i || j > i + N - 1) {
          EXPECT_TRUE(QuadExtField::is_zero(v)) << T << B << N << " " << i << "," << j;
        }
      }
    }
    EXPECT_EQ(multiply(s.M, s.Minv), FieldMatrix::identity(f, static_cast<std::size_t>(p.k)));
  }
}

TEST(Construction, WorkedExampleSupport) {
  const CodeTables t = build_code(derive_params(6, 4, 3));
  ASSERT_EQ(t.G.rows(), 4U);
  ASSERT_EQ(t.G.cols(), 8U);
  // 'x' = nonzero base element, '0' = zero, 'a' = alpha.
  const char* pattern[4] = {"xxx000a0", "0xxx000a", "00xxx0xx", "000xxxxx"};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      const ExtElem v = t.G(i, j);
      switch (pattern[i][j]) {
      case 'x':
        EXPECT_TRUE(nonzero(t.G, i, j) && QuadExtField::is_in_base(v)) << i << "," << j;
        break;
      case '0':
        EXPECT_TRUE(QuadExtField::is_zero(v)) << i << "," << j;
        break;
      case 'a':
        EXPECT_EQ(v, t.alpha);
        break;
      }
    }
  }
  EXPECT_EQ(t.field.p(), 11U);
  EXPECT_FALSE(QuadExtField::is_in_base(t.alpha));
}

TEST(Construction, AlphaBlockOnlyDifference) {
  for (auto [T, B, N] : {std::tuple{6, 4, 3}, {5, 5, 1}, {4, 2, 2}, {9, 7, 3}}) {
    const CodeTables t = build_code(derive_params(T, B, N));
    const auto& p = t.params;
    const int span = p.alpha_rows();
    for (int i = 0; i < p.k; ++i) {
      for (int j = 0; j < p.n; ++j) {
        const auto r = static_cast<std::size_t>(i), c = static_cast<std::size_t>(j);
        const bool in_block = i < span && j >= p.n - span;
        if (!in_block) {
          EXPECT_EQ(t.G(r, c), t.Gp(r, c));
        } else {
          EXPECT_EQ(t.G(r, c), i == j - (p.n - span) ? t.alpha : t.field.zero());
        }
      }
    }
    EXPECT_TRUE(t.Gp.all_in_base_field());
  }
  const CodeParams p = derive_params(3, 2, 1);
  const QuadExtField f(p.p);
  const FieldMatrix gp = multiply(build_spreading_matrix(build_gpp(p, f), p).M, build_gpp(p, f));
  EXPECT_THROW(build_g(gp, p, f.make(3)), std::invalid_argument);
}

TEST(Construction, SystematicAndParity) {
  for (int T = 1; T <= 8; ++T) {
    for (int B = 1; B <= T; ++B) {
      for (int N = 1; N <= B; ++N) {
        const CodeTables t = build_code(derive_params(T, B, N));
        const auto& p = t.params;
        const auto k = static_cast<std::size_t>(p.k);
        EXPECT_EQ(t.Gtilde.block(0, k, 0, k), FieldMatrix::identity(t.field, k));
        const FieldMatrix prod = multiply(t.Gtilde, t.H.transpose());
        EXPECT_TRUE(std::all_of(prod.entries().begin(), prod.entries().end(), QuadExtField::is_zero));
        EXPECT_EQ(t.H.block(0, static_cast<std::size_t>(B), k, static_cast<std::size_t>(p.n)),
                  FieldMatrix::identity(t.field, static_cast<std::size_t>(B)));
        // Columns before the first alpha column carry no extension part.
        EXPECT_TRUE(t.Gtilde.block(0, k, 0, static_cast<std::size_t>(p.T)).all_in_base_field());
        for (int i = 0; i < p.alpha_rows(); ++i) {
          EXPECT_EQ(t.Gtilde(static_cast<std::size_t>(i), static_cast<std::size_t>(p.T + i)).b, 1U);
        }
        EXPECT_EQ(multiply(t.M, t.Gtilde), t.G);
      }
    }
  }
}

TEST(Construction, SubBlocks) {
  const CodeTables t = build_code(derive_params(6, 4, 3));
  const FieldMatrix m1 = mds1_generator(t);
  EXPECT_EQ(m1.rows(), 4U);
  EXPECT_EQ(m1.cols(), 6U);
  EXPECT_TRUE(m1.all_in_base_field());
  EXPECT_TRUE(is_mds_generator(m1));
  const FieldMatrix m2 = mds2_generator(t);
  EXPECT_EQ(m2.rows(), 2U);
  EXPECT_EQ(m2.cols(), 6U);
  EXPECT_TRUE(is_mds_generator(m2));
  EXPECT_EQ(g_tail_block(t).rows(), 2U);
  EXPECT_EQ(g_tail_block(t).cols(), 4U);
  const FieldMatrix h1 = parity_slice(t, 1);
  EXPECT_EQ(h1.rows(), 4U);
  EXPECT_EQ(h1.cols(), 8U);
  EXPECT_THROW(parity_slice(t, 2), std::out_of_range);
}

TEST(Construction, DegenerateTEqualsB) {
  const CodeTables t = build_code(derive_params(4, 4, 2));
  EXPECT_EQ(t.params.tail_dim(), 0);
  EXPECT_EQ(mds2_generator(t).rows(), 0U);
  EXPECT_EQ(g_tail_block(t).rows(), 0U);
}

TEST(Construction, ParitySliceMatchesShortening) {
  // H^(l) spans the dual of the code restricted to [0, l+T] (coordinates past it shortened).
  for (auto [T, B, N] : {std::tuple{6, 4, 3}, {5, 4, 2}, {7, 6, 1}}) {
    const CodeTables t = build_code(derive_params(T, B, N));
    const auto& p = t.params;
    for (int l = 0; l <= p.B - p.N; ++l) {
      const auto width = static_cast<std::size_t>(l + p.T + 1);
      const FieldMatrix hl = parity_slice(t, l);
      // Rows of H supported inside [0, l+T] are exactly the first N + l rows.
      for (std::size_t r = 0; r < t.H.rows(); ++r) {
        bool inside = true;
        for (std::size_t c = width; c < t.H.cols(); ++c) {
          inside = inside && QuadExtField::is_zero(t.H(r, c));
        }
        EXPECT_EQ(inside, r < hl.rows());
      }
      const FieldMatrix gl = t.Gtilde.block(0, static_cast<std::size_t>(p.k), 0, width);
      const FieldMatrix prod = multiply(gl, hl.transpose());
      EXPECT_TRUE(std::all_of(prod.entries().begin(), prod.entries().end(), QuadExtField::is_zero));
      EXPECT_EQ(rank(hl), hl.rows());
    }
  }
}

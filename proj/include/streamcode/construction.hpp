#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "streamcode/gf.hpp"
#include "streamcode/matrix.hpp"

namespace streamcode {

class ParamError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Channel/delay parameters and the derived block-code shape.
///
/// The channel allows, in every window of W consecutive packets, either one burst of at
/// most B erasures or at most N erasures anywhere. T is the decoding delay.
struct CodeParams {
  int W = 0;
  int T = 0;
  int B = 0;
  int N = 0;
  int k = 0; // T - N + 1
  int n = 0; // k + B
  uint32_t p = 0;

  // Rows carrying the extension element: 0 .. B - N.
  int alpha_rows() const { return B - N + 1; }
  // Dimension of the tail MDS code left after the alpha rows are known (T - B).
  int tail_dim() const { return k - alpha_rows(); }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

// Requires W > T >= B >= N >= 1; W defaults to T + 1.
CodeParams derive_params(int T, int B, int N, std::optional<int> W = std::nullopt);

struct Rational {
  int64_t num = 0;
  int64_t den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(int64_t num, int64_t den);
std::string to_string(const Rational& r);

// k / n of the constructed code.
Rational rate(const CodeParams& params);
// (T - N + 1) / (T - N + B + 1), the sliding-window channel capacity.
Rational capacity(const CodeParams& params);

/// The matrix family of the construction, all over GF(p^2) with base entries embedded.
struct CodeTables {
  CodeParams params;
  QuadExtField field;
  ExtElem alpha;
  FieldMatrix Gpp;    // k x n, [I | Cauchy]
  FieldMatrix M;      // k x k spreading matrix, unit upper triangular, band N - 1
  FieldMatrix Minv;   // k x k
  FieldMatrix Gp;     // M * Gpp
  FieldMatrix G;      // Gp with its top-right (B-N+1)^2 block replaced by alpha * I
  FieldMatrix Gtilde; // Minv * G, systematic
  FieldMatrix H;      // B x n parity check of Gtilde
};

FieldMatrix build_gpp(const CodeParams& params, const QuadExtField& field);

struct SpreadingMatrix {
  FieldMatrix M;
  FieldMatrix Minv;
};

SpreadingMatrix build_spreading_matrix(const FieldMatrix& gpp, const CodeParams& params);

// Throws std::invalid_argument when alpha lies in the base field.
FieldMatrix build_g(const FieldMatrix& gp, const CodeParams& params, ExtElem alpha);

FieldMatrix systematic_form(const FieldMatrix& g, const FieldMatrix& minv);

// H = [-P^T | I] for a systematic k x n generator [I | P].
FieldMatrix parity_check(const FieldMatrix& gtilde);

CodeTables build_code(const CodeParams& params);

// Same pipeline with the alpha block left at its base-field values (G = G'). Only used
// as a negative control.
CodeTables build_code_without_alpha(const CodeParams& params);

// Upper-left k x (k + N - 1) block: generator of MDS1.
FieldMatrix mds1_generator(const CodeTables& tables);
// Lower-right (k - (B-N+1)) x (n - (B-N+1)) block: generator of MDS2.
FieldMatrix mds2_generator(const CodeTables& tables);
// Lower-right (T - B) x B block of G.
FieldMatrix g_tail_block(const CodeTables& tables);
// Parity check of the code restricted to coordinates [0, l + T]: top-left
// (N + l) x (l + T + 1) block of H.
FieldMatrix parity_slice(const CodeTables& tables, int l);

} // namespace streamcode

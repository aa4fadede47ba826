#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace streamcode {

class FieldError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

bool is_prime(uint64_t n);

// Smallest prime >= n (n >= 1).
uint32_t smallest_prime_at_least(uint32_t n);

// Smallest r in [2, p) with r^((p-1)/2) == -1 mod p. Throws for p == 2 or composite p.
uint32_t find_nonresidue(uint32_t p);

/// Element of GF(p), always held in canonical form [0, p).
struct FieldElem {
  uint32_t value = 0;
  friend bool operator==(FieldElem, FieldElem) = default;
};

/// Element a + b*w of GF(p^2) with w^2 = r.
struct ExtElem {
  uint32_t a = 0;
  uint32_t b = 0;
  friend bool operator==(ExtElem, ExtElem) = default;
};

class PrimeField {
public:
  explicit PrimeField(uint32_t p);

  uint32_t modulus() const { return p_; }

  FieldElem elem(int64_t v) const;
  FieldElem add(FieldElem x, FieldElem y) const;
  FieldElem sub(FieldElem x, FieldElem y) const;
  FieldElem mul(FieldElem x, FieldElem y) const;
  FieldElem neg(FieldElem x) const;
  FieldElem inv(FieldElem x) const;
  FieldElem pow(FieldElem x, uint64_t e) const;

private:
  uint32_t p_;
};

/// GF(p)[w]/(w^2 - r) for an odd prime p and a quadratic non-residue r.
///
/// The base field GF(p) sits inside as the elements with b == 0. All values are
/// plain structs; the field object only carries (p, r), so copies are cheap.
class QuadExtField {
public:
  // Uses the smallest non-residue mod p.
  explicit QuadExtField(uint32_t p);
  QuadExtField(uint32_t p, uint32_t r);

  uint32_t p() const { return p_; }
  uint32_t r() const { return r_; }
  uint64_t order() const { return uint64_t{p_} * p_; }
  PrimeField base() const { return PrimeField(p_); }

  ExtElem zero() const { return {0, 0}; }
  ExtElem one() const { return {1, 0}; }
  // The adjoined root w; never in the base field.
  ExtElem generator() const { return {0, 1}; }

  ExtElem make(int64_t a, int64_t b = 0) const;
  ExtElem embed(FieldElem x) const { return {x.value, 0}; }
  static bool is_in_base(ExtElem x) { return x.b == 0; }
  static bool is_zero(ExtElem x) { return x.a == 0 && x.b == 0; }
  bool contains(ExtElem x) const { return x.a < p_ && x.b < p_; }

  ExtElem add(ExtElem x, ExtElem y) const;
  ExtElem sub(ExtElem x, ExtElem y) const;
  ExtElem mul(ExtElem x, ExtElem y) const;
  ExtElem neg(ExtElem x) const;
  ExtElem inv(ExtElem x) const;
  ExtElem div(ExtElem x, ExtElem y) const { return mul(x, inv(y)); }
  ExtElem pow(ExtElem x, uint64_t e) const;

  // x -> x^p; fixes exactly the base field.
  ExtElem frobenius(ExtElem x) const { return pow(x, p_); }

  // Integer index a + b*p in [0, p^2), used for enumeration and the CLI.
  uint64_t to_index(ExtElem x) const { return x.a + uint64_t{x.b} * p_; }
  ExtElem from_index(uint64_t i) const;

  friend bool operator==(const QuadExtField&, const QuadExtField&) = default;

private:
  uint32_t p_;
  uint32_t r_;
};

// Text form "a+b*w".
std::string to_string(ExtElem x);

// Accepts "a+b*w" or a bare integer "a". Throws FieldError on malformed text or
// coefficients outside [0, p).
ExtElem parse_ext(std::string_view text, const QuadExtField& field);

} // namespace streamcode

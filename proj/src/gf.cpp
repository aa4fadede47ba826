#include "streamcode/gf.hpp"

#include <charconv>

namespace streamcode {

namespace {

uint64_t powmod(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1U) {
      result = result * base % m;
    }
    base = base * base % m;
    e >>= 1U;
  }
  return result;
}

uint32_t reduce(int64_t v, uint32_t p) {
  int64_t m = v % static_cast<int64_t>(p);
  if (m < 0) {
    m += p;
  }
  return static_cast<uint32_t>(m);
}

} // namespace

bool is_prime(uint64_t n) {
  if (n < 2) {
    return false;
  }
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

uint32_t smallest_prime_at_least(uint32_t n) {
  uint32_t c = n < 2 ? 2 : n;
  while (!is_prime(c)) {
    ++c;
  }
  return c;
}

uint32_t find_nonresidue(uint32_t p) {
  if (p == 2) {
    throw FieldError("find_nonresidue: p = 2 has no odd quadratic extension");
  }
  if (!is_prime(p)) {
    throw FieldError("find_nonresidue: " + std::to_string(p) + " is not prime");
  }
  for (uint32_t r = 2; r < p; ++r) {
    if (powmod(r, (p - 1) / 2, p) == p - 1) {
      return r;
    }
  }
  throw FieldError("find_nonresidue: no non-residue found"); // unreachable for odd primes
}

PrimeField::PrimeField(uint32_t p) : p_(p) {
  if (!is_prime(p)) {
    throw FieldError("PrimeField: " + std::to_string(p) + " is not prime");
  }
}

FieldElem PrimeField::elem(int64_t v) const { return {reduce(v, p_)}; }

FieldElem PrimeField::add(FieldElem x, FieldElem y) const {
  return {static_cast<uint32_t>((uint64_t{x.value} + y.value) % p_)};
}

FieldElem PrimeField::sub(FieldElem x, FieldElem y) const {
  return {static_cast<uint32_t>((uint64_t{x.value} + p_ - y.value) % p_)};
}

FieldElem PrimeField::mul(FieldElem x, FieldElem y) const {
  return {static_cast<uint32_t>(uint64_t{x.value} * y.value % p_)};
}

FieldElem PrimeField::neg(FieldElem x) const { return {x.value == 0 ? 0 : p_ - x.value}; }

FieldElem PrimeField::inv(FieldElem x) const {
  if (x.value == 0) {
    throw FieldError("PrimeField::inv: zero has no inverse");
  }
  return {static_cast<uint32_t>(powmod(x.value, p_ - 2, p_))};
}

FieldElem PrimeField::pow(FieldElem x, uint64_t e) const {
  return {static_cast<uint32_t>(powmod(x.value, e, p_))};
}

QuadExtField::QuadExtField(uint32_t p) : QuadExtField(p, find_nonresidue(p)) {}

QuadExtField::QuadExtField(uint32_t p, uint32_t r) : p_(p), r_(r) {
  if (p == 2 || !is_prime(p)) {
    throw FieldError("QuadExtField: modulus must be an odd prime, got " + std::to_string(p));
  }
  if (r == 0 || r >= p || powmod(r, (p - 1) / 2, p) != p - 1) {
    throw FieldError("QuadExtField: " + std::to_string(r) + " is not a non-residue mod " +
                     std::to_string(p));
  }
}

ExtElem QuadExtField::make(int64_t a, int64_t b) const { return {reduce(a, p_), reduce(b, p_)}; }

ExtElem QuadExtField::add(ExtElem x, ExtElem y) const {
  return {static_cast<uint32_t>((uint64_t{x.a} + y.a) % p_),
          static_cast<uint32_t>((uint64_t{x.b} + y.b) % p_)};
}

ExtElem QuadExtField::sub(ExtElem x, ExtElem y) const {
  return {static_cast<uint32_t>((uint64_t{x.a} + p_ - y.a) % p_),
          static_cast<uint32_t>((uint64_t{x.b} + p_ - y.b) % p_)};
}

ExtElem QuadExtField::mul(ExtElem x, ExtElem y) const {
  // (a + b w)(c + d w) = (ac + bd r) + (ad + bc) w
  const uint64_t p = p_;
  const uint64_t ac = uint64_t{x.a} * y.a % p;
  const uint64_t bd = uint64_t{x.b} * y.b % p;
  const uint64_t ad = uint64_t{x.a} * y.b % p;
  const uint64_t bc = uint64_t{x.b} * y.a % p;
  return {static_cast<uint32_t>((ac + bd * r_) % p), static_cast<uint32_t>((ad + bc) % p)};
}

ExtElem QuadExtField::neg(ExtElem x) const {
  return {x.a == 0 ? 0 : p_ - x.a, x.b == 0 ? 0 : p_ - x.b};
}

ExtElem QuadExtField::inv(ExtElem x) const {
  if (is_zero(x)) {
    throw FieldError("QuadExtField::inv: zero has no inverse");
  }
  // (a + b w)^-1 = (a - b w) / (a^2 - r b^2); the norm is nonzero since r is a non-residue.
  const uint64_t p = p_;
  const uint64_t a2 = uint64_t{x.a} * x.a % p;
  const uint64_t rb2 = uint64_t{x.b} * x.b % p * r_ % p;
  const uint64_t norm = (a2 + p - rb2) % p;
  const uint64_t ninv = powmod(norm, p - 2, p);
  return {static_cast<uint32_t>(x.a * ninv % p),
          static_cast<uint32_t>((p - x.b) % p * ninv % p)};
}

ExtElem QuadExtField::pow(ExtElem x, uint64_t e) const {
  ExtElem result = one();
  while (e > 0) {
    if (e & 1U) {
      result = mul(result, x);
    }
    x = mul(x, x);
    e >>= 1U;
  }
  return result;
}

ExtElem QuadExtField::from_index(uint64_t i) const {
  if (i >= order()) {
    throw FieldError("QuadExtField::from_index: index out of range");
  }
  return {static_cast<uint32_t>(i % p_), static_cast<uint32_t>(i / p_)};
}

std::string to_string(ExtElem x) { return std::to_string(x.a) + "+" + std::to_string(x.b) + "*w"; }

ExtElem parse_ext(std::string_view text, const QuadExtField& field) {
  auto parse_uint = [&](std::string_view s) -> uint32_t {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw FieldError("malformed field element '" + std::string(text) + "'");
    }
    if (v >= field.p()) {
      throw FieldError("coefficient out of range in '" + std::string(text) + "'");
    }
    return static_cast<uint32_t>(v);
  };

  const auto plus = text.find('+');
  if (plus == std::string_view::npos) {
    return {parse_uint(text), 0};
  }
  std::string_view rest = text.substr(plus + 1);
  if (rest.size() < 3 || rest.substr(rest.size() - 2) != "*w") {
    throw FieldError("malformed field element '" + std::string(text) + "'");
  }
  return {parse_uint(text.substr(0, plus)), parse_uint(rest.substr(0, rest.size() - 2))};
}

} // namespace streamcode

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "lowtw/rng.hpp"

namespace lowtw {

class FieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(std::uint64_t x);
// Smallest prime >= lo, or 0 if none below 2^63.
std::uint64_t next_prime(std::uint64_t lo);
// Random prime in [lo, hi); throws FieldError when the range has none.
std::uint64_t sample_prime(std::uint64_t lo, std::uint64_t hi, Rng& rng);

inline constexpr std::uint64_t kLargePrime = (1ULL << 62) - 57;

// Integers modulo a prime below 2^62, elements kept canonical.
class PrimeField {
 public:
  using Element = std::uint64_t;

  PrimeField() : p_(2) {}
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }
  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Element>(r < 0 ? r + static_cast<std::int64_t>(p_) : r);
  }
  Element add(Element a, Element b) const {
    Element s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const { return a >= b ? a - b : a + p_ - b; }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  Element mul(Element a, Element b) const {
    return static_cast<Element>(static_cast<unsigned __int128>(a) * b % p_);
  }
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  bool is_zero(Element a) const { return a == 0; }
  bool equal(Element a, Element b) const { return a == b; }
  Element random(Rng& rng) const { return rng.below(p_); }
  Element random_nonzero(Rng& rng) const { return 1 + rng.below(p_ - 1); }
  std::string to_string(Element a) const { return std::to_string(a); }
  // Accepts decimal integers (possibly negative) and num/den.
  Element parse(const std::string& text) const;

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint64_t p_;
};

// Exact rationals.
class RationalField {
 public:
  using Element = mpq_class;

  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(std::int64_t v) const { return mpq_class(mpz_class(std::to_string(v))); }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const {
    if (sgn(a) == 0) throw FieldError("inverse of zero");
    return 1 / a;
  }
  Element div(const Element& a, const Element& b) const { return a * inv(b); }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  bool equal(const Element& a, const Element& b) const { return a == b; }
  std::string to_string(const Element& a) const { return a.get_str(); }
  Element parse(const std::string& text) const;

  bool operator==(const RationalField&) const { return true; }
};

}  // namespace lowtw

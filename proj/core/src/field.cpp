#include "lowtw/field.hpp"

#include <cctype>

namespace lowtw {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool valid_integer(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (x % q == 0) return x == q;
  }
  std::uint64_t d = x - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t y = powmod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      y = mulmod(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t lo) {
  for (std::uint64_t x = lo < 2 ? 2 : lo; x < (1ULL << 63); ++x)
    if (is_prime(x)) return x;
  return 0;
}

std::uint64_t sample_prime(std::uint64_t lo, std::uint64_t hi, Rng& rng) {
  if (lo >= hi) throw FieldError("sample_prime: empty range");
  const std::uint64_t width = hi - lo;
  for (int attempt = 0; attempt < 4096; ++attempt) {
    std::uint64_t x = lo + rng.below(width);
    if (is_prime(x)) return x;
  }
  std::uint64_t start = lo + rng.below(width);
  for (std::uint64_t i = 0; i < width; ++i) {
    std::uint64_t x = lo + (start - lo + i) % width;
    if (is_prime(x)) return x;
  }
  throw FieldError("sample_prime: range contains no prime");
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= (1ULL << 62) || !is_prime(p)) throw FieldError("modulus must be a prime below 2^62");
}

PrimeField::Element PrimeField::inv(Element a) const {
  if (a == 0) throw FieldError("inverse of zero");
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(p_), nr = static_cast<std::int64_t>(a);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return t < 0 ? static_cast<Element>(t + static_cast<std::int64_t>(p_)) : static_cast<Element>(t);
}

PrimeField::Element PrimeField::parse(const std::string& text) const {
  auto slash = text.find('/');
  auto one = [&](const std::string& s) -> Element {
    if (!valid_integer(s)) throw FieldError("not an integer: " + s);
    mpz_class z(s[0] == '+' ? s.substr(1) : s);
    mpz_class r = z % mpz_class(std::to_string(p_));
    if (r < 0) r += mpz_class(std::to_string(p_));
    return std::stoull(r.get_str());
  };
  if (slash == std::string::npos) return one(text);
  Element den = one(text.substr(slash + 1));
  if (den == 0) throw FieldError("zero denominator: " + text);
  return div(one(text.substr(0, slash)), den);
}

RationalField::Element RationalField::parse(const std::string& text) const {
  auto slash = text.find('/');
  std::string num = slash == std::string::npos ? text : text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den)) throw FieldError("not a rational: " + text);
  if (num[0] == '+') num = num.substr(1);
  if (den[0] == '+') den = den.substr(1);
  mpz_class d(den);
  if (d == 0) throw FieldError("zero denominator: " + text);
  mpq_class q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

}  // namespace lowtw

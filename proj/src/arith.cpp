#include "formlab/arith.hpp"

#include <cmath>
#include <limits>

#include "formlab/error.hpp"

namespace formlab {

Rat parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s.empty()) throw Error("ParseError", "empty rational");
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw Error("ParseError", "not a rational: " + text);
    return Rat(Int(strip_plus(s)));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den)) throw Error("ParseError", "not a rational: " + text);
  Int d(strip_plus(den));
  if (d == 0) throw Error("ParseError", "zero denominator: " + text);
  Rat q(Int(strip_plus(num)), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) { return q.get_str(); }
std::string to_string(const Int& z) { return z.get_str(); }

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
  std::string out;
  while (u > 0) {
    out += char('0' + int(u % 10));
    u /= 10;
  }
  if (neg) out += '-';
  return std::string(out.rbegin(), out.rend());
}

bool is_integer(const Rat& q) { return q.get_den() == 1; }

long double to_long_double(const Int& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::ldexp((long double)mant, (int)exp);
}

long double to_long_double(const Rat& q) {
  if (q == 0) return 0.0L;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  // Use more bits than a double holds when the operands are small enough.
  if (mpz_sizeinbase(q.get_num_mpz_t(), 2) <= 63 && mpz_sizeinbase(q.get_den_mpz_t(), 2) <= 63) {
    long double n = (long double)mpz_get_si(q.get_num_mpz_t());
    if (!mpz_fits_slong_p(q.get_num_mpz_t())) n = std::ldexp((long double)mn, (int)en);
    long double d = mpz_fits_slong_p(q.get_den_mpz_t()) ? (long double)mpz_get_si(q.get_den_mpz_t())
                                                        : std::ldexp((long double)md, (int)ed);
    return n / d;
  }
  return std::ldexp((long double)mn / (long double)md, (int)(en - ed));
}

long double log_abs(const Int& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::fabs((long double)mant)) + (long double)exp * std::log(2.0L);
}

std::optional<i128> to_i128(const Int& z) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 126) return std::nullopt;
  Int a = abs(z);
  Int hi = a >> 64;
  Int lo = a - (hi << 64);
  unsigned __int128 u = ((unsigned __int128)mpz_get_ui(hi.get_mpz_t()) << 64) |
                        (unsigned __int128)mpz_get_ui(lo.get_mpz_t());
  i128 v = (i128)u;
  return z < 0 ? -v : v;
}

Int from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
  Int hi((unsigned long)(u >> 64));
  Int lo((unsigned long)(u & 0xFFFFFFFFFFFFFFFFull));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

Rat rat_pow(const Rat& base, unsigned long exponent) {
  Int n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), exponent);
  return Rat(n, d);
}

Int iroot_floor(const Int& n, unsigned long k) {
  if (n < 0) throw Error("DomainError", "negative radicand");
  Int r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

bool is_perfect_power(const Int& n, unsigned long k, Int* root) {
  Int a = abs(n);
  Int r;
  int exact = mpz_root(r.get_mpz_t(), a.get_mpz_t(), k);
  if (!exact) return false;
  if (n < 0) {
    if (k % 2 == 0) return false;
    r = -r;
  }
  if (root) *root = r;
  return true;
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return (std::uint64_t)((unsigned __int128)a * b % m);
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

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> sieve(n + 1, true);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return out;
}

bool is_squarefree(std::uint64_t n) {
  if (n == 0) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

Rat best_rational(long double x, const Int& max_den) {
  if (!std::isfinite(x)) throw Error("DomainError", "non-finite value");
  // Convergents p_k/q_k, stopping before the denominator exceeds the bound,
  // then the best semiconvergent.
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  long double r = x;
  for (int iter = 0; iter < 80; ++iter) {
    long double a_ld = std::floor(r);
    Int a;
    mpz_set_d(a.get_mpz_t(), (double)a_ld);
    if (std::fabs(a_ld) > 9e15L) break;
    Int p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) {
      Int t = (max_den - q0) / q1;
      Int ps = t * p1 + p0, qs = t * q1 + q0;
      Rat conv(p1, q1), semi(ps, qs);
      conv.canonicalize();
      semi.canonicalize();
      if (qs > 0 && std::fabs(to_long_double(semi) - x) < std::fabs(to_long_double(conv) - x)) return semi;
      return conv;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    long double frac = r - a_ld;
    if (frac == 0) break;
    r = 1.0L / frac;
    if (!std::isfinite(r)) break;
  }
  Rat q(p1, q1);
  q.canonicalize();
  return q;
}

}  // namespace formlab

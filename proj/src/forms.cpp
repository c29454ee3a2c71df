#include "formlab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "formlab/error.hpp"

namespace formlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mod_of(const Int& z, u64 p) {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return mpz_get_ui(r.get_mpz_t());
}

u64 mulm(u64 a, u64 b, u64 p) { return (u64)((u128)a * b % p); }

u64 powm(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulm(r, a, p);
    a = mulm(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

void trim(std::vector<u64>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// Polynomials mod p in ascending order; returns the degree of gcd(a, b).
int gcd_degree_mod(std::vector<u64> a, std::vector<u64> b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    u64 inv = invm(b.back(), p);
    while (a.size() >= b.size()) {
      u64 factor = mulm(a.back(), inv, p);
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        u64 t = mulm(factor, b[i], p);
        a[i + shift] = (a[i + shift] + p - t) % p;
      }
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return (int)a.size() - 1;
}

const std::vector<u64>& large_primes() {
  static const std::vector<u64> primes = [] {
    std::vector<u64> out;
    for (u64 n = (1ull << 61) - 1; out.size() < 6; n -= 2)
      if (is_prime(n)) out.push_back(n);
    return out;
  }();
  return primes;
}

// Integer form G equivalent to F up to a unimodular substitution and a
// positive scalar, with nonzero leading coefficient.
std::vector<Int> integral_shifted(const BinaryForm& F, Int* scale_out) {
  Int L = 1;
  for (const auto& c : F.coeffs()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.get_den_mpz_t());
  BinaryForm G = F;
  if (F.coeff(0) == 0) {
    for (long j = 1;; j = (j > 0 ? -j : -j + 1)) {
      if (F.at(Rat(1), Rat(j)) != 0) {
        G = compose(F, RationalMatrix(1, 0, j, 1));
        break;
      }
    }
  }
  std::vector<Int> out;
  for (const auto& c : G.coeffs()) {
    Rat v = c * L;
    out.push_back(v.get_num());
  }
  if (scale_out) *scale_out = L;
  return out;
}

bool squarefree_by_modular(const std::vector<Int>& c) {
  int d = (int)c.size() - 1;
  for (u64 p : large_primes()) {
    if (mod_of(c[0], p) == 0) continue;
    std::vector<u64> f(d + 1), df(d);
    for (int i = 0; i <= d; ++i) f[d - i] = mod_of(c[i], p);
    for (int k = 1; k <= d; ++k) df[k - 1] = mulm(f[k], (u64)k % p, p);
    if (gcd_degree_mod(f, df, p) == 0) return true;
  }
  return false;
}

// Fraction-free Gaussian elimination.
Int bareiss_det(std::vector<std::vector<Int>> m) {
  int n = (int)m.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = t;
      }
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

Int resultant_with_derivative(const std::vector<Int>& c) {
  int d = (int)c.size() - 1;
  std::vector<Int> dc(d);
  for (int i = 0; i < d; ++i) dc[i] = c[i] * (d - i);
  int n = 2 * d - 1;
  std::vector<std::vector<Int>> m(n, std::vector<Int>(n, 0));
  for (int r = 0; r < d - 1; ++r)
    for (int i = 0; i <= d; ++i) m[r][r + i] = c[i];
  for (int r = 0; r < d; ++r)
    for (int i = 0; i < d; ++i) m[d - 1 + r][r + i] = dc[i];
  return bareiss_det(m);
}

}  // namespace

BinaryForm::BinaryForm(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error("EmptyOrZero", "no coefficients");
  bool all_zero = true;
  for (auto& c : coeffs_) {
    c.canonicalize();
    if (c != 0) all_zero = false;
  }
  if (all_zero) throw Error("EmptyOrZero", "all coefficients vanish");
  integral_ = std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rat& c) { return is_integer(c); });
  if (integral_)
    for (const auto& c : coeffs_) int_coeffs_.push_back(c.get_num());
  int d = degree();
  if (d == 0) {
    nonzero_disc_ = true;
  } else if (d == 1) {
    nonzero_disc_ = true;
  } else {
    Int scale;
    auto shifted = integral_shifted(*this, &scale);
    nonzero_disc_ = squarefree_by_modular(shifted) || resultant_with_derivative(shifted) != 0;
  }
}

const std::vector<Int>& BinaryForm::int_coeffs() const {
  if (!integral_) throw Error("NonIntegralForm", "form has non-integer coefficients: " + to_string());
  return int_coeffs_;
}

Rat BinaryForm::at(const Rat& x, const Rat& y) const {
  Rat h = coeffs_[0];
  Rat ypow = 1;
  for (int i = 1; i <= degree(); ++i) {
    ypow *= y;
    h = h * x + coeffs_[i] * ypow;
  }
  return h;
}

BinaryForm BinaryForm::scaled(const Rat& c) const {
  std::vector<Rat> out;
  for (const auto& a : coeffs_) out.push_back(a * c);
  return BinaryForm(out);
}

std::string BinaryForm::to_string() const {
  std::ostringstream os;
  int d = degree();
  bool first = true;
  for (int i = 0; i <= d; ++i) {
    const Rat& c = coeffs_[i];
    if (c == 0) continue;
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    std::string mono;
    if (d - i > 0) mono += "X" + (d - i > 1 ? "^" + std::to_string(d - i) : std::string());
    if (i > 0) mono += (mono.empty() ? "" : "*") + std::string("Y") + (i > 1 ? "^" + std::to_string(i) : std::string());
    Rat a = abs(c);
    if (mono.empty())
      os << a.get_str();
    else if (a == 1)
      os << mono;
    else
      os << a.get_str() << "*" << mono;
  }
  return os.str();
}

BinaryForm make_form(const std::vector<Rat>& coeffs) { return BinaryForm(coeffs); }

BinaryForm make_form_int(const std::vector<long long>& coeffs) {
  std::vector<Rat> c;
  for (long long v : coeffs) c.emplace_back((long)v);
  return BinaryForm(c);
}

BinaryForm multiply(const BinaryForm& a, const BinaryForm& b) {
  std::vector<Rat> c(a.degree() + b.degree() + 1, Rat(0));
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) c[i + j] += a.coeff(i) * b.coeff(j);
  return BinaryForm(c);
}

RationalMatrix::RationalMatrix(Rat a1, Rat a2, Rat a3, Rat a4) : a_{a1, a2, a3, a4} {
  for (auto& x : a_) x.canonicalize();
  det_ = a_[0] * a_[3] - a_[1] * a_[2];
  if (det_ == 0) throw Error("SingularMatrix", "determinant is zero");
}

RationalMatrix RationalMatrix::identity() { return RationalMatrix(1, 0, 0, 1); }

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  return RationalMatrix(a_[0] * o.a_[0] + a_[1] * o.a_[2], a_[0] * o.a_[1] + a_[1] * o.a_[3],
                        a_[2] * o.a_[0] + a_[3] * o.a_[2], a_[2] * o.a_[1] + a_[3] * o.a_[3]);
}

RationalMatrix RationalMatrix::inverse() const {
  return RationalMatrix(a_[3] / det_, -a_[1] / det_, -a_[2] / det_, a_[0] / det_);
}

RationalMatrix RationalMatrix::scaled(const Rat& s) const {
  return RationalMatrix(a_[0] * s, a_[1] * s, a_[2] * s, a_[3] * s);
}

std::string RationalMatrix::to_string() const {
  return "[[" + a_[0].get_str() + ", " + a_[1].get_str() + "], [" + a_[2].get_str() + ", " + a_[3].get_str() + "]]";
}

BinaryForm compose(const BinaryForm& F, const RationalMatrix& g) {
  int d = F.degree();
  // Powers of the two linear forms as coefficient vectors in (X, Y).
  auto lin_pows = [d](const Rat& u, const Rat& v) {
    std::vector<std::vector<Rat>> pw(d + 1);
    pw[0] = {Rat(1)};
    for (int k = 1; k <= d; ++k) {
      pw[k].assign(k + 1, Rat(0));
      for (int i = 0; i < k; ++i) {
        pw[k][i] += pw[k - 1][i] * u;
        pw[k][i + 1] += pw[k - 1][i] * v;
      }
    }
    return pw;
  };
  auto P = lin_pows(g.a1(), g.a2());
  auto Q = lin_pows(g.a3(), g.a4());
  std::vector<Rat> out(d + 1, Rat(0));
  for (int i = 0; i <= d; ++i) {
    if (F.coeff(i) == 0) continue;
    const auto& p = P[d - i];
    const auto& q = Q[i];
    for (std::size_t a = 0; a < p.size(); ++a) {
      if (p[a] == 0) continue;
      for (std::size_t b = 0; b < q.size(); ++b) out[a + b] += F.coeff(i) * p[a] * q[b];
    }
  }
  return BinaryForm(out);
}

Int default_cap() { return Int(1) << 126; }

CappedInteger evaluate(const BinaryForm& F, const Int& x, const Int& y, const Int& cap) {
  const auto& c = F.int_coeffs();
  Int h = c[0];
  Int ypow = 1;
  for (int i = 1; i <= F.degree(); ++i) {
    ypow *= y;
    h = h * x + c[i] * ypow;
  }
  CappedInteger out;
  out.sign = sgn(h);
  if (abs(h) > cap) {
    out.over_cap = true;
  } else {
    out.value = h;
  }
  return out;
}

CappedInteger evaluate(const BinaryForm& F, long long x, long long y) {
  return evaluate(F, Int((long)x), Int((long)y), default_cap());
}

Rat discriminant(const BinaryForm& F) {
  int d = F.degree();
  if (d < 2) throw Error("DegreeTooSmall", "discriminant needs degree >= 2");
  Int L;
  auto c = integral_shifted(F, &L);
  Int res = resultant_with_derivative(c);
  Rat disc(res, c[0]);
  disc.canonicalize();
  if ((d * (d - 1) / 2) % 2 == 1) disc = -disc;
  Int Lp;
  mpz_pow_ui(Lp.get_mpz_t(), L.get_mpz_t(), 2 * d - 2);
  disc /= Lp;
  disc.canonicalize();
  return disc;
}

std::vector<Rat> dehomogenize(const BinaryForm& F) {
  std::vector<Rat> out = F.coeffs();
  std::size_t k = 0;
  while (k < out.size() && out[k] == 0) ++k;
  out.erase(out.begin(), out.begin() + k);
  return out;
}

IntegerEvaluator::IntegerEvaluator(const BinaryForm& F) : d_(F.degree()), c_(F.int_coeffs()) {
  for (const auto& c : c_) {
    auto v = to_i128(c);
    if (!v || mpz_sizeinbase(c.get_mpz_t(), 2) > 120) fits128_ = false;
    c128_.push_back(v ? *v : 0);
    double dv = c.get_d();
    if (!std::isfinite(dv) || std::fabs(dv) > 1e300) fits_double_ = false;
    cd_.push_back(dv);
  }
}

std::optional<i128> IntegerEvaluator::exact128(std::int64_t x, std::int64_t y) const {
  if (!fits128_) return std::nullopt;
  i128 h = c128_[0];
  i128 ypow = 1;
  for (int i = 1; i <= d_; ++i) {
    i128 t;
    if (__builtin_mul_overflow(ypow, (i128)y, &ypow)) return std::nullopt;
    if (__builtin_mul_overflow(h, (i128)x, &h)) return std::nullopt;
    if (__builtin_mul_overflow(c128_[i], ypow, &t)) return std::nullopt;
    if (__builtin_add_overflow(h, t, &h)) return std::nullopt;
  }
  return h;
}

CappedInteger IntegerEvaluator::exact(std::int64_t x, std::int64_t y, const Int& cap) const {
  if (auto v = exact128(x, y)) {
    CappedInteger out;
    out.sign = (*v > 0) - (*v < 0);
    Int z = from_i128(*v);
    if (abs(z) > cap)
      out.over_cap = true;
    else
      out.value = z;
    return out;
  }
  Int h = c_[0];
  Int ypow = 1;
  Int X((long)x), Y((long)y);
  for (int i = 1; i <= d_; ++i) {
    ypow *= Y;
    h = h * X + c_[i] * ypow;
  }
  CappedInteger out;
  out.sign = sgn(h);
  if (abs(h) > cap)
    out.over_cap = true;
  else
    out.value = h;
  return out;
}

std::optional<std::int64_t> IntegerEvaluator::value_within(std::int64_t x, std::int64_t y,
                                                           std::int64_t bound) const {
  if (fits_double_ && std::llabs(x) < (1ll << 52) && std::llabs(y) < (1ll << 52)) {
    double xd = (double)x, yd = (double)y, ax = std::fabs(xd), ay = std::fabs(yd);
    double h = cd_[0], s = std::fabs(cd_[0]);
    double ypow = 1, aypow = 1;
    for (int i = 1; i <= d_; ++i) {
      ypow *= yd;
      aypow *= ay;
      h = h * xd + cd_[i] * ypow;
      s = s * ax + std::fabs(cd_[i]) * aypow;
    }
    if (std::isfinite(s)) {
      double err = s * (4.0 * (d_ + 2)) * 0x1p-52 + 1e-300;
      if (std::fabs(h) - err > (double)bound) return std::nullopt;
    }
  }
  if (auto v = exact128(x, y)) {
    if (*v > bound || *v < -(i128)bound) return std::nullopt;
    return (std::int64_t)*v;
  }
  CappedInteger e = exact(x, y, Int((long)bound));
  if (e.over_cap) return std::nullopt;
  return e.value.get_si();
}

}  // namespace formlab

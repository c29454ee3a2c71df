#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "formlab/error.hpp"
#include "formlab/forms.hpp"
#include "mp.hpp"

namespace formlab {

namespace mp {

Rat best_rational(const Real& x, const Int& max_den) {
  mpfr_prec_t prec = x.prec();
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Real r = x;
  for (int iter = 0; iter < 4000; ++iter) {
    Real fl(prec);
    mpfr_floor(fl.get(), r.get());
    Int a;
    mpfr_get_z(a.get_mpz_t(), fl.get(), MPFR_RNDN);
    Int p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) {
      Int t = (max_den - q0) / q1;
      Rat conv(p1, q1);
      conv.canonicalize();
      if (t > 0) {
        Rat semi(t * p1 + p0, t * q1 + q0);
        semi.canonicalize();
        Real ds = abs(Real(semi, prec) - x), dc = abs(Real(conv, prec) - x);
        if (ds < dc) return semi;
      }
      return conv;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Real frac = r - fl;
    if (frac.is_zero() || frac.exponent() < -(long)prec + 8) break;
    Real one(1.0L, prec);
    r = one / frac;
  }
  Rat q(p1, q1);
  q.canonicalize();
  return q;
}

}  // namespace mp

namespace {

using cld = std::complex<long double>;

std::vector<Int> integer_poly(const std::vector<Rat>& f) {
  Int L = 1;
  for (const auto& c : f) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Int> out;
  for (const auto& c : f) out.push_back(Rat(c * L).get_num());
  return out;
}

// Aberth iteration in long double, used to seed the high-precision pass.
std::vector<cld> aberth_ld(const std::vector<Int>& a) {
  int n = (int)a.size() - 1;
  std::vector<long double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = to_long_double(a[i]);
  long double radius = 0;
  for (int i = 1; i <= n; ++i)
    radius = std::max(radius, std::pow(std::fabs(c[i] / c[0]), 1.0L / i));
  radius = std::max(2 * radius, 1e-3L);
  std::vector<cld> z(n);
  const long double two_pi = 6.283185307179586476925286766559L;
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius * 0.9L, two_pi * k / n + 0.4L);
  std::vector<char> done(n, 0);
  for (int iter = 0; iter < 800; ++iter) {
    long double max_step = 0;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      cld p = c[0], dp = 0;
      for (int i = 1; i <= n; ++i) {
        dp = dp * z[k] + p;
        p = p * z[k] + c[i];
      }
      if (p == cld(0)) continue;
      cld w = p / dp;
      cld s = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0L / (z[k] - z[j]);
      cld step = w / (1.0L - w * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      long double rel = std::abs(step) / std::max(1.0L, std::abs(z[k]));
      max_step = std::max(max_step, rel);
      if (rel < 1e-15L) done[k] = 1;
    }
    if (max_step < 1e-15L) break;
  }
  return z;
}

struct MpRoots {
  std::vector<mp::Complex> z;
  bool converged = false;
};

MpRoots aberth_mp(const std::vector<Int>& a, const std::vector<cld>& seed, mpfr_prec_t prec) {
  int n = (int)a.size() - 1;
  std::vector<mp::Real> c;
  for (const auto& v : a) c.emplace_back(v, prec);
  MpRoots out;
  for (const auto& s : seed) out.z.emplace_back(mp::Real(s.real(), prec), mp::Real(s.imag(), prec));
  // Separate seeds that coincide in long double.
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j)
      if (seed[j] == seed[k]) out.z[k].im += mp::Real(1e-6L * (k + 1), prec);
  mp::Real one(1.0L, prec);
  mp::Real tiny(std::ldexp(1.0L, -(int)std::min<mpfr_prec_t>(prec * 3 / 4, 16000)), prec);
  auto& z = out.z;
  std::vector<char> done(n, 0);
  for (int iter = 0; iter < 400; ++iter) {
    bool small = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      mp::Complex p(c[0], mp::Real(prec)), dp(prec);
      for (int i = 1; i <= n; ++i) {
        dp = dp * z[k] + p;
        p = p * z[k];
        p.re += c[i];
      }
      if (p.re.is_zero() && p.im.is_zero()) continue;
      mp::Complex w = p / dp;
      mp::Complex s(prec);
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        mp::Complex diff = z[k] - z[j];
        mp::Real den = diff.re * diff.re + diff.im * diff.im;
        s.re += diff.re / den;
        s.im -= diff.im / den;
      }
      mp::Complex ws = w * s;
      mp::Complex denom(one - ws.re, -ws.im);
      mp::Complex step = w / denom;
      if (!mpfr_number_p(step.re.get()) || !mpfr_number_p(step.im.get())) continue;
      z[k] = z[k] - step;
      mp::Real mag = mp::cabs(z[k]);
      mp::Real scale = mag < one ? one : mag;
      if (tiny * scale < mp::cabs(step))
        small = false;
      else if (iter > 0)
        done[k] = 1;
    }
    if (small) {
      out.converged = true;
      break;
    }
  }
  return out;
}

int bits_of(const Int& z) { return z == 0 ? 0 : (int)mpz_sizeinbase(z.get_mpz_t(), 2); }

bool is_rational_root(const std::vector<Int>& a, const Rat& r) {
  const Int& p = r.get_num();
  const Int& q = r.get_den();
  int n = (int)a.size() - 1;
  Int acc = 0, qpow = 1;
  std::vector<Int> ppow(n + 1);
  ppow[0] = 1;
  for (int i = 1; i <= n; ++i) ppow[i] = ppow[i - 1] * p;
  for (int i = 0; i <= n; ++i) {
    acc += a[i] * ppow[n - i] * qpow;
    qpow *= q;
  }
  return acc == 0;
}

// Does t^2 - S t + P divide the polynomial a (descending coefficients)?
bool divides_quadratic(const std::vector<Int>& a, const Rat& S, const Rat& P) {
  int n = (int)a.size() - 1;
  std::vector<Rat> r(a.begin(), a.end());
  for (int i = 0; i + 2 <= n; ++i) {
    Rat q = r[i];
    if (q == 0) continue;
    r[i] = 0;
    r[i + 1] += q * S;
    r[i + 2] -= q * P;
  }
  return r[n - 1] == 0 && r[n] == 0;
}

void square_part(const Int& m, Int* square_root_part, Int* rest) {
  Int k = 1, r = abs(m);
  for (unsigned long p = 2; p < 100000; ++p) {
    Int pp = Int(p) * p;
    if (pp > r) break;
    while (mpz_divisible_p(r.get_mpz_t(), pp.get_mpz_t())) {
      r /= pp;
      k *= p;
    }
  }
  if (mpz_perfect_square_p(r.get_mpz_t())) {
    Int s;
    mpz_sqrt(s.get_mpz_t(), r.get_mpz_t());
    k *= s;
    r = 1;
  }
  *square_root_part = k;
  *rest = m < 0 ? Int(-r) : r;
}

}  // namespace

Int QuadSurd::radicand() const { return abs(m); }

std::string QuadSurd::to_string() const {
  std::string root = m < 0 ? "i*sqrt(" + Int(abs(m)).get_str() + ")" : "sqrt(" + m.get_str() + ")";
  std::string out = r == 0 ? "" : r.get_str();
  Rat as = abs(s);
  std::string coef = as == 1 ? "" : as.get_str() + "*";
  if (out.empty())
    return (s < 0 ? "-" : "") + coef + root;
  return out + (s < 0 ? " - " : " + ") + coef + root;
}

bool RootSet::all_rational() const {
  return std::all_of(points.begin(), points.end(),
                     [](const ProjRoot& p) { return p.infinite || p.tag.kind == TagKind::Rational; });
}

bool RootSet::has_real_point() const {
  return std::any_of(points.begin(), points.end(), [](const ProjRoot& p) { return p.real; });
}

RootSet roots(const BinaryForm& F, long double tol) {
  if (!F.nonzero_disc()) throw Error("RepeatedRoot", "form has a repeated projective root");
  RootSet out;
  std::vector<Rat> f = dehomogenize(F);
  int n = (int)f.size() - 1;
  bool at_infinity = n < F.degree();
  std::vector<Int> a = integer_poly(f);
  const Int lead = abs(a[0]);

  if (n == 1) {
    ProjRoot r;
    r.real = true;
    r.tag.kind = TagKind::Rational;
    r.tag.value = Rat(-a[1], a[0]);
    r.tag.value.canonicalize();
    r.z = to_long_double(r.tag.value);
    out.points.push_back(r);
  } else if (n >= 2) {
    int maxbits = 0;
    for (const auto& c : a) maxbits = std::max(maxbits, bits_of(c));
    int extra = (int)std::ceil(-std::log2(std::max(tol, 1e-300L)));
    mpfr_prec_t prec = std::max(128, maxbits + 192 + 4 * n + std::max(0, extra - 53));
    auto seed = aberth_ld(a);
    MpRoots mr = aberth_mp(a, seed, prec);
    if (!mr.converged) {
      prec *= 2;
      mr = aberth_mp(a, seed, prec);
      if (!mr.converged) throw Error("NumericFailure", "root iteration did not converge");
    }
    out.precision_bits = (int)prec;
    mp::Real real_eps(std::ldexp(1.0L, -(int)(prec / 2)), prec);
    std::vector<ProjRoot> pts(n);
    for (int k = 0; k < n; ++k) {
      auto& z = mr.z[k];
      mp::Real mag = mp::cabs(z);
      mp::Real one(1.0L, prec);
      mp::Real scale = mag < one ? one : mag;
      pts[k].real = mp::abs(z.im) < real_eps * scale;
      if (pts[k].real) z.im = mp::Real(prec);
      pts[k].z = cld(z.re.ld(), z.im.ld());
    }
    // Rational roots: denominators divide the leading coefficient.
    for (int k = 0; k < n; ++k) {
      if (!pts[k].real) continue;
      Rat r = mp::best_rational(mr.z[k].re, lead);
      if (is_rational_root(a, r)) {
        pts[k].tag.kind = TagKind::Rational;
        pts[k].tag.value = r;
        pts[k].z = to_long_double(r);
      }
    }
    // Quadratic factors: conjugate pairs and pairs of irrational real roots.
    auto try_pair = [&](int i, int j) {
      mp::Complex s = mr.z[i] + mr.z[j];
      mp::Complex p = mr.z[i] * mr.z[j];
      Rat S = mp::best_rational(s.re, lead);
      Rat P = mp::best_rational(p.re, lead);
      // The rounded S, P must belong to this pair and not to some other factor.
      mp::Real tol_sp(std::ldexp(1.0L, -(int)(prec / 4)), prec);
      mp::Real one(1.0L, prec);
      auto near = [&](const mp::Real& x, const Rat& q) {
        mp::Real qv(q, prec);
        mp::Real scale = mp::abs(qv) < one ? one : mp::abs(qv);
        return mp::abs(x - qv) < tol_sp * scale;
      };
      if (!near(s.re, S) || !near(p.re, P)) return false;
      if (!divides_quadratic(a, S, P)) return false;
      Rat D = S * S - 4 * P;
      if (D == 0) return false;
      Int num = D.get_num(), den = D.get_den();
      Int m0 = num * den;
      if (m0 > 0 && mpz_perfect_square_p(m0.get_mpz_t())) return false;
      Int k, m;
      square_part(m0, &k, &m);
      Rat half_s(k, 2 * den);
      half_s.canonicalize();
      for (int idx : {i, j}) {
        QuadSurd q;
        q.r = S / 2;
        q.m = m;
        bool plus = m < 0 ? (mr.z[idx].im.sign() > 0) : (mr.z[idx].re > (s.re / mp::Real(2.0L, prec)));
        q.s = plus ? half_s : Rat(-half_s);
        pts[idx].tag.kind = TagKind::QuadraticSurd;
        pts[idx].tag.surd = q;
      }
      return true;
    };
    for (int i = 0; i < n; ++i) {
      if (pts[i].tag.kind != TagKind::NumericOnly || pts[i].real || mr.z[i].im.sign() < 0) continue;
      int best = -1;
      long double best_d = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i || pts[j].tag.kind != TagKind::NumericOnly || pts[j].real) continue;
        long double dd = std::abs(pts[j].z - std::conj(pts[i].z));
        if (best < 0 || dd < best_d) {
          best = j;
          best_d = dd;
        }
      }
      if (best >= 0) try_pair(i, best);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (pts[i].real && pts[j].real && pts[i].tag.kind == TagKind::NumericOnly &&
            pts[j].tag.kind == TagKind::NumericOnly)
          try_pair(i, j);
    out.points = pts;
  }
  std::sort(out.points.begin(), out.points.end(), [](const ProjRoot& x, const ProjRoot& y) {
    if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
    return x.z.imag() < y.z.imag();
  });
  if (at_infinity) {
    ProjRoot r;
    r.infinite = true;
    r.real = true;
    r.tag.kind = TagKind::Rational;
    out.points.push_back(r);
  }
  return out;
}

ProximityConstants root_proximity_constants(const BinaryForm& F) {
  if (F.degree() < 2) throw Error("DegreeTooSmall", "proximity constants need degree >= 2");
  return root_proximity_constants(F, roots(F));
}

ProximityConstants root_proximity_constants(const BinaryForm& F, const RootSet& rs) {
  if (F.degree() < 2) throw Error("DegreeTooSmall", "proximity constants need degree >= 2");
  std::vector<cld> finite;
  for (const auto& p : rs.points)
    if (!p.infinite) finite.push_back(p.z);
  std::vector<Rat> f = dehomogenize(F);
  int n = (int)f.size() - 1;
  ProximityConstants pc;
  if (n <= 1) {
    pc.delta = 1;
    pc.c2 = 1 / std::min(1.0L, std::fabs(to_long_double(f[0])));
    pc.c1 = 1;
    return pc;
  }
  long double delta = INFINITY;
  for (std::size_t i = 0; i < finite.size(); ++i)
    for (std::size_t j = i + 1; j < finite.size(); ++j) delta = std::min(delta, std::abs(finite[i] - finite[j]));
  delta *= (1 - 1e-9L);
  pc.delta = delta;
  long double lead = std::fabs(to_long_double(f[0]));
  pc.c2 = std::pow(2 / delta, (long double)(n - 1)) / std::min(1.0L, lead);
  bool any_real = false, any_complex = false;
  long double min_im = INFINITY;
  for (const auto& p : rs.points) {
    if (p.infinite) continue;
    if (p.real) {
      any_real = true;
    } else {
      any_complex = true;
      min_im = std::min(min_im, std::fabs(p.z.imag()));
    }
  }
  if (!any_complex) {
    pc.c1 = 1;
  } else if (any_real) {
    pc.c1 = min_im / pc.c2;
  } else {
    // inf over the real line of |f|: scan then refine by golden section.
    std::vector<long double> fl;
    for (const auto& c : f) fl.push_back(to_long_double(c));
    auto absf = [&](long double t) {
      long double h = 0;
      for (long double c : fl) h = h * t + c;
      return std::fabs(h);
    };
    long double R = 1;
    for (const auto& z : finite) R = std::max(R, 2 * std::abs(z));
    const int grid = 4000;
    long double best_t = -R, best_v = absf(-R);
    for (int i = 1; i <= grid; ++i) {
      long double t = -R + 2 * R * i / grid;
      long double v = absf(t);
      if (v < best_v) {
        best_v = v;
        best_t = t;
      }
    }
    long double lo = best_t - 2 * R / grid, hi = best_t + 2 * R / grid;
    const long double g = 0.6180339887498948482L;
    for (int it = 0; it < 200; ++it) {
      long double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
      if (absf(m1) < absf(m2))
        hi = m2;
      else
        lo = m1;
    }
    pc.c1 = std::min(best_v, absf((lo + hi) / 2)) * (1 - 1e-9L);
  }
  return pc;
}

}  // namespace formlab

#include "formlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "formlab/counting.hpp"
#include "formlab/error.hpp"
#include "formlab/families.hpp"
#include "mp.hpp"

namespace formlab {

namespace {

constexpr mpfr_prec_t kPrec = 256;

using mp::Real;

Real real(long double x) { return Real(x, kPrec); }
Real real_int(long long x) { return Real(Int((long)x), kPrec); }

Real euler_e() { return mp::exp(real(1)); }

// Comparisons between quantities that may agree exactly get this much room.
Real slack() { return Real(std::ldexp(1.0L, -200), kPrec); }

std::string fmt(const Real& x) {
  std::ostringstream os;
  os.precision(18);
  os << x.ld();
  return os.str();
}

std::vector<Real> log_factorials(int n) {
  std::vector<Real> out;
  out.push_back(Real(kPrec));
  for (int k = 1; k <= n; ++k) out.push_back(out.back() + mp::log(real_int(k)));
  return out;
}

void fail_once(CheckOutcome& c, const std::string& witness) {
  if (c.pass) c.witness = witness;
  c.pass = false;
}

}  // namespace

CheckOutcome stirling_check(int n_max) {
  if (n_max < 1) throw Error("BadArgument", "n_max must be >= 1");
  CheckOutcome c;
  c.name = "stirling";
  c.parameters = "n_max=" + std::to_string(n_max);
  c.pass = true;
  Int fact = 1;
  const Real two_pi = mp::pi(kPrec) * real(2);
  Real worst(kPrec);
  bool first = true;
  for (int N = 1; N <= n_max; ++N) {
    fact *= N;
    Real lf = mp::log(Real(fact, kPrec));
    Real n = real_int(N);
    Real base = n * mp::log(n) - n + mp::log(two_pi * n) / real(2);
    Real upper = base + real(1) / (real(12) * n);
    Real m = std::min(lf - base, upper - lf, [](const Real& a, const Real& b) { return a < b; });
    if (first || m < worst) worst = m;
    first = false;
    if (!(base < lf) || !(lf < upper))
      fail_once(c, "N=" + std::to_string(N) + " log N!=" + fmt(lf) + " lower=" + fmt(base) + " upper=" + fmt(upper));
  }
  c.observed = worst.ld();
  c.bound = 0;
  return c;
}

CheckOutcome zeta_tail_check(long double delta, long long B, long long terms) {
  if (!(delta > 1)) throw Error("BadArgument", "delta must exceed 1");
  if (B < 1) throw Error("BadArgument", "B must be >= 1");
  if (terms < 1) throw Error("BadArgument", "terms must be >= 1");
  CheckOutcome c;
  c.name = "zeta-tail";
  std::ostringstream ps;
  ps << "delta=" << (double)delta << ",B=" << B << ",terms=" << terms;
  c.parameters = ps.str();
  Real dl = real(delta);
  Real zeta(kPrec);
  mpfr_zeta(zeta.get(), dl.get(), MPFR_RNDN);
  auto term = [&](long long n) { return mp::exp(-dl * mp::log(real_int(n))); };
  Real head(kPrec);
  for (long long n = 1; n < B; ++n) head += term(n);
  Real tail = zeta - head;
  Real partial(kPrec);
  for (long long n = B; n < B + terms; ++n) partial += term(n);
  Real last = real_int(B + terms - 1);
  Real majorant = partial + mp::exp((real(1) - dl) * mp::log(last)) / (dl - real(1));
  Real bound = zeta * mp::exp((real(1) - dl) * mp::log(real_int(B)));
  c.observed = tail.ld();
  c.bound = bound.ld();
  bool consistent = partial <= tail + slack() && tail <= majorant + slack();
  c.pass = tail <= bound && consistent;
  if (!c.pass)
    c.witness = "tail=" + fmt(tail) + " bound=" + fmt(bound) + " partial=" + fmt(partial) + " majorant=" + fmt(majorant);
  return c;
}

CheckOutcome hooley_count_check(long double xi, long double kappa, long double s, long long q_lo, long long q_hi) {
  if (!(s > 2) || !(kappa > 0) || !(q_hi > q_lo) || q_lo < 1)
    throw Error("BadArgument", "need s > 2, kappa > 0 and q_hi > q_lo >= 1");
  CheckOutcome c;
  c.name = "hooley";
  std::ostringstream ps;
  ps.precision(17);
  ps << "xi=" << (double)xi << ",kappa=" << (double)kappa << ",s=" << (double)s << ",Q1=" << q_lo << ",Q2=" << q_hi;
  c.parameters = ps.str();
  std::set<std::pair<long long, long long>> found;
  for (long long q = q_lo; q <= q_hi; ++q) {
    long double reach = kappa / std::pow((long double)q, s - 1);  // on |xi q - p|
    long long lo = (long long)std::ceil(xi * q - reach), hi = (long long)std::floor(xi * q + reach);
    for (long long p = lo; p <= hi; ++p) {
      if (std::fabs(xi * q - p) > reach) continue;
      long long g = std::gcd(std::llabs(p), q);
      found.insert({p / g, q / g});
    }
  }
  long double bound = std::pow(2.0L, s + 1) * kappa / ((std::pow(2.0L, s - 2) - 1) * std::pow((long double)q_lo, s - 2)) +
                      std::ceil(std::log2((long double)q_hi / q_lo) - 1e-15L);
  c.observed = (long double)found.size();
  c.bound = bound;
  c.pass = c.observed <= bound;
  if (!c.pass) c.witness = c.parameters + " count=" + std::to_string(found.size());
  return c;
}

CheckOutcome hooley_sweep(int instances, std::uint64_t seed) {
  CheckOutcome c;
  c.name = "hooley-sweep";
  c.parameters = "instances=" + std::to_string(instances) + ",seed=" + std::to_string(seed);
  c.pass = true;
  CheckOutcome worked = hooley_count_check(std::sqrt(2.0L), 1, 3, 1, 8);
  if (!worked.pass || worked.observed != 3 || worked.bound != 19)
    fail_once(c, "sqrt(2) example: count=" + std::to_string((long long)worked.observed) +
                     " bound=" + std::to_string((double)worked.bound));
  long double worst = worked.observed / worked.bound;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<long double> xi_d(-3, 3), kappa_d(0, 2), s_d(2.1L, 5);
  std::uniform_int_distribution<long long> den(1, 20), q1(1, 64);
  for (int i = 0; i < instances; ++i) {
    long double xi = xi_d(rng);
    if (i % 4 == 3) {
      // rational xi, which every multiple of its denominator approximates exactly
      long long b = den(rng);
      xi = std::round(xi * b) / b;
    }
    long double kappa = kappa_d(rng);
    if (kappa == 0) kappa = 1;
    long double s = s_d(rng);
    long long lo = q1(rng);
    long long hi = std::uniform_int_distribution<long long>(lo + 1, 512)(rng);
    CheckOutcome one = hooley_count_check(xi, kappa, s, lo, hi);
    worst = std::max(worst, one.observed / one.bound);
    if (!one.pass) fail_once(c, *one.witness);
  }
  c.observed = worst;
  c.bound = 1;
  return c;
}

CheckOutcome minoration_check(int d_max) {
  if (d_max < 2) throw Error("BadArgument", "d_max must be >= 2");
  CheckOutcome c;
  c.name = "minoration";
  c.parameters = "d_max=" + std::to_string(d_max);
  c.pass = true;
  std::vector<Real> lf = log_factorials(d_max);
  const Real inv_e = real(1) / euler_e();
  Real worst(kPrec);
  bool first = true;
  auto track = [&](const Real& margin, const std::string& where) {
    if (first || margin < worst) worst = margin;
    first = false;
    if (margin < -slack()) fail_once(c, where + " margin=" + fmt(margin));
  };
  for (int d = 2; d <= d_max; ++d) {
    Real dr = real_int(d);
    for (int m = 1; m < d; ++m) {
      Real lhs = real_int(d - m) * mp::log(real_int(d - m) / real_int(m));
      Real rhs = -real_int(m) * inv_e;
      track(lhs - rhs, "first d=" + std::to_string(d) + " m=" + std::to_string(m));
    }
    for (int n = 1; n <= d; ++n) {
      Real lp = lf[n] + lf[d - n];
      Real second = lp - dr * mp::log(real_int(n)) + (real(1) + inv_e) * dr;
      track(second, "second d=" + std::to_string(d) + " n=" + std::to_string(n));
      Real root = lp / dr;
      Real step1 = -real(1) - inv_e + mp::log(real_int(std::max(n, d - n)));
      std::string at = " d=" + std::to_string(d) + " n=" + std::to_string(n);
      track(root - step1, "chain[0]" + at);
      // the last two links reduce to 2 max(n, d-n) >= d and 1 + 1/e <= 2
      track(mp::log(real_int(2 * std::max(n, d - n)) / dr), "chain[1]" + at);
      track(real(1) - inv_e, "chain[2]" + at);
    }
  }
  c.observed = worst.ld();
  c.bound = 0;
  return c;
}

CheckOutcome factorielles_check(const std::vector<int>& ds) {
  CheckOutcome c;
  c.name = "factorielles";
  std::string ps = "d=";
  for (int d : ds) ps += std::to_string(d) + (d == ds.back() ? "" : ";");
  c.parameters = ps;
  c.pass = true;
  std::vector<int> sorted = ds;
  std::sort(sorted.begin(), sorted.end());
  const Real e = euler_e();
  const Real half_log2 = mp::log(real(2)) / real(2);
  long double prev_dev = -1;
  for (int d : sorted) {
    if (d < 3) throw Error("BadArgument", "factorielles needs d >= 3");
    Int prod = 1;
    for (int k = 1; k <= d - 1; ++k) prod *= 2 * k - 1;
    Real lp = mp::log(Real(prod, kPrec));
    Real dr = real_int(d);
    Real base = dr * mp::log(real(2) * dr / e) + half_log2 - mp::log(real_int(2 * d - 1));
    Real lower = base - real(1) / (real(12) * dr);
    Real upper = base + real(1) / (real(24) * dr);
    std::string at = "d=" + std::to_string(d);
    if (!(lower <= lp) || !(lp <= upper))
      fail_once(c, at + " log product=" + fmt(lp) + " lower=" + fmt(lower) + " upper=" + fmt(upper));
    long double ratio = mp::exp(lp / dr - mp::log(real(2) * dr / e)).ld();
    long double dev = std::fabs(ratio - 1);
    if (d >= 50) {
      if (dev > 0.1L) fail_once(c, at + " ratio=" + std::to_string((double)ratio));
      if (prev_dev >= 0 && !(dev < prev_dev)) fail_once(c, at + " ratio did not move toward 1");
      prev_dev = dev;
    }
    c.observed = ratio;
  }
  c.bound = 1.1L;
  return c;
}

namespace {

// Polynomials in (X, U, Y) with integer coefficients.
using Mono = std::tuple<int, int, int>;
using Poly3 = std::map<Mono, Int>;

void add_to(Poly3& p, const Mono& m, const Int& v) {
  Int& slot = p[m];
  slot += v;
  if (slot == 0) p.erase(m);
}

Poly3 mul(const Poly3& a, const Poly3& b) {
  Poly3 out;
  for (const auto& [ma, va] : a)
    for (const auto& [mb, vb] : b)
      add_to(out,
             {std::get<0>(ma) + std::get<0>(mb), std::get<1>(ma) + std::get<1>(mb), std::get<2>(ma) + std::get<2>(mb)},
             va * vb);
  return out;
}

// F(X, Y) when first_is_x, otherwise F(U, Y).
Poly3 lift(const BinaryForm& F, bool first_is_x) {
  Poly3 out;
  int d = F.degree();
  for (int i = 0; i <= d; ++i) {
    if (F.coeff(i) == 0) continue;
    Mono m = first_is_x ? Mono{d - i, 0, i} : Mono{0, d - i, i};
    add_to(out, m, F.coeff(i).get_num());
  }
  return out;
}

}  // namespace

CheckOutcome jb_identity_check(int triple_count) {
  if (triple_count < 1) throw Error("BadArgument", "triple_count must be >= 1");
  CheckOutcome c;
  c.name = "jb-identity";
  c.parameters = "triples=" + std::to_string(triple_count);
  c.pass = true;
  SquarefreeSequence seq = squarefree_prefix(3);
  BinaryForm q3 = qplus(2, 3, seq), q1 = qplus(2, 1, seq);

  Poly3 lhs = lift(q3, true);
  for (const auto& [m, v] : lift(q1, false)) add_to(lhs, m, -v);
  Poly3 left{{{2, 0, 0}, Int(1)}, {{0, 2, 0}, Int(-1)}, {{0, 0, 2}, Int(-1)}};
  Poly3 right{{{2, 0, 0}, Int(1)}, {{0, 2, 0}, Int(1)}, {{0, 0, 2}, Int(4)}};
  if (lhs != mul(left, right)) fail_once(c, "expansion of both sides differs");

  // (y, u, x) with y^2 + u^2 = x^2, both leg orders, by x then y
  std::vector<std::tuple<long long, long long, long long>> triples;
  for (long long a = 2; (long long)triples.size() < 4 * triple_count + 8; ++a)
    for (long long b = 1; b < a; ++b) {
      if ((a - b) % 2 == 0 || std::gcd(a, b) != 1) continue;
      long long odd = a * a - b * b, even = 2 * a * b, hyp = a * a + b * b;
      triples.push_back({hyp, odd, even});
      triples.push_back({hyp, even, odd});
    }
  std::sort(triples.begin(), triples.end());
  triples.resize(triple_count);
  std::set<long long> values;
  int confirmed = 0;
  for (const auto& [x, y, u] : triples) {
    Int m3 = evaluate(q3, x, y).value, m1 = evaluate(q1, u, y).value;
    std::string at = "(y,u,x)=(" + std::to_string(y) + "," + std::to_string(u) + "," + std::to_string(x) + ")";
    if (m3 != m1 || !m3.fits_slong_p()) {
      fail_once(c, at + " values differ");
      continue;
    }
    long long m = m3.get_si();
    if (!common_values(q3, q1, m).contains(m)) {
      fail_once(c, at + " m=" + std::to_string(m) + " missing from the common values");
      continue;
    }
    values.insert(m);
    ++confirmed;
  }
  if ((int)values.size() != triple_count) fail_once(c, "common values are not distinct");
  if (!values.count(1462)) fail_once(c, "1462 not among the common values");
  c.observed = confirmed;
  c.bound = triple_count;
  return c;
}

CheckOutcome root_proximity_check(const std::vector<BinaryForm>& forms, int samples, std::uint64_t seed) {
  CheckOutcome c;
  c.name = "root-proximity";
  c.parameters = "forms=" + std::to_string(forms.size()) + ",samples=" + std::to_string(samples) +
                 ",seed=" + std::to_string(seed);
  c.pass = true;
  std::mt19937_64 rng(seed);
  long double worst = 0;
  for (const auto& F : forms) {
    RootSet rs = roots(F);
    ProximityConstants pc = root_proximity_constants(F, rs);
    std::vector<std::complex<long double>> zs;
    long double R = 1;
    for (const auto& p : rs.points)
      if (!p.infinite) {
        zs.push_back(p.z);
        R = std::max(R, std::abs(p.z));
      }
    std::vector<Rat> f = dehomogenize(F);
    std::uniform_real_distribution<long double> wide(-2 * R, 2 * R), near(-1e-3L, 1e-3L);
    std::uniform_int_distribution<std::size_t> pick(0, zs.size() - 1);
    for (int i = 0; i < samples; ++i) {
      long double t = i % 2 == 0 ? wide(rng) : zs[pick(rng)].real() + near(rng);
      Real tv = real(t), acc(kPrec);
      for (const auto& a : f) acc = acc * tv + Real(a, kPrec);
      long double ft = std::fabs(acc.ld());
      long double dist = INFINITY;
      for (const auto& z : zs) dist = std::min(dist, std::abs(std::complex<long double>(t, 0) - z));
      long double rhs = pc.c2 * ft;
      if (rhs > 0) worst = std::max(worst, dist / rhs);
      if (dist > rhs * (1 + 1e-12L)) {
        std::ostringstream os;
        os.precision(18);
        os << F.to_string() << " t=" << (double)t << " dist=" << (double)dist << " c2|f(t)|=" << (double)rhs;
        fail_once(c, os.str());
      }
    }
  }
  c.observed = worst;
  c.bound = 1;
  return c;
}

std::vector<std::string> check_names() {
  return {"stirling", "zeta-tail", "hooley", "minoration", "factorielles", "jb-identity", "root-proximity"};
}

std::vector<CheckOutcome> run_checks(const std::string& name, std::uint64_t seed) {
  std::vector<CheckOutcome> out;
  bool all = name == "all";
  bool known = all;
  auto want = [&](const char* n) {
    if (all || name == n) {
      known = true;
      return true;
    }
    return false;
  };
  if (want("stirling")) out.push_back(stirling_check(1000));
  if (want("zeta-tail")) {
    out.push_back(zeta_tail_check(2, 2, 100000));
    out.push_back(zeta_tail_check(2, 1, 100000));
    out.push_back(zeta_tail_check(1.5L, 100, 100000));
  }
  if (want("hooley")) out.push_back(hooley_sweep(100, seed));
  if (want("minoration")) out.push_back(minoration_check(200));
  if (want("factorielles")) out.push_back(factorielles_check({50, 200}));
  if (want("jb-identity")) out.push_back(jb_identity_check(50));
  if (want("root-proximity")) {
    SquarefreeSequence seq = squarefree_prefix(3);
    std::vector<BinaryForm> forms{qplus(2, 3, seq), lform(5, 5), make_form_int({1, 0, 0, 2}), cyclotomic_form(7),
                                  qminus(2, 1, shifted_squarefree_prefix(3))};
    out.push_back(root_proximity_check(forms, 1000, seed));
  }
  if (!known) throw Error("BadArgument", "unknown check '" + name + "'");
  return out;
}

}  // namespace formlab

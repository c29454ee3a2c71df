#include "formlab/areas.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "formlab/error.hpp"
#include "formlab/families.hpp"

namespace formlab {

namespace {

using cld = std::complex<long double>;
constexpr long double kInf = std::numeric_limits<long double>::infinity();

// h(u) on the real line with integrable singularities |u - s_k|^(-a), a < 1, at the points s_k.
// Near s_k the caller receives the exact offset u - s_k, so no cancellation happens there.
struct Integrand {
  std::vector<long double> sing;  // sorted
  int power = 3;                  // substitution u = s_k + w * t^power, needs power * (1 - a) >= 1
  std::function<long double(long double u, int k, long double off)> eval;
};

struct Segment {
  long double value = 0, error = 0;
};

Segment gk(const std::function<long double(long double)>& f, long double a, long double b, long double rel_tol) {
  Segment s;
  long double L1 = 0;
  s.value = boost::math::quadrature::gauss_kronrod<long double, 31>::integrate(f, a, b, 24, rel_tol, &s.error, &L1);
  return s;
}

int singular_index(const Integrand& g, long double x) {
  for (std::size_t k = 0; k < g.sing.size(); ++k)
    if (g.sing[k] == x) return (int)k;
  return -1;
}

// [l, r] with no singular point inside; either end may be one.
Segment smooth_or_endpoint(const Integrand& g, long double l, long double r, long double rel_tol) {
  int kl = singular_index(g, l), kr = singular_index(g, r);
  if (kl >= 0 && kr >= 0) {
    long double m = (l + r) / 2;
    Segment a = smooth_or_endpoint(g, l, m, rel_tol), b = smooth_or_endpoint(g, m, r, rel_tol);
    return {a.value + b.value, a.error + b.error};
  }
  const long double w = r - l;
  const int m = g.power;
  if (kl >= 0) {
    return gk(
        [&](long double t) {
          long double off = w * std::pow(t, (long double)m);
          return w * m * std::pow(t, (long double)(m - 1)) * g.eval(l + off, kl, off);
        },
        0, 1, rel_tol);
  }
  if (kr >= 0) {
    return gk(
        [&](long double t) {
          long double off = w * std::pow(t, (long double)m);
          return w * m * std::pow(t, (long double)(m - 1)) * g.eval(r - off, kr, -off);
        },
        0, 1, rel_tol);
  }
  return gk([&](long double u) { return g.eval(u, -1, 0); }, l, r, rel_tol);
}

// Integral over [a, b]; infinite ends are mapped by u = 1/t and need every singular point strictly
// inside the finite side (a > 0 for b = +inf, b < 0 for a = -inf).
Segment integrate(const Integrand& g, long double a, long double b, long double rel_tol) {
  if (std::isinf(b) && std::isinf(a)) throw Error("BadArgument", "split the real line first");
  if (std::isinf(b)) {
    if (a <= 0 || (!g.sing.empty() && g.sing.back() >= a)) throw Error("BadArgument", "bad right tail");
    return gk(
        [&](long double t) {
          long double u = 1 / t;
          return g.eval(u, -1, 0) * u * u;
        },
        0, 1 / a, rel_tol);
  }
  if (std::isinf(a)) {
    if (b >= 0 || (!g.sing.empty() && g.sing.front() <= b)) throw Error("BadArgument", "bad left tail");
    return gk(
        [&](long double t) {
          long double u = -1 / t;
          return g.eval(u, -1, 0) * u * u;
        },
        0, -1 / b, rel_tol);
  }
  std::vector<long double> cuts{a};
  for (long double s : g.sing)
    if (s > a && s < b) cuts.push_back(s);
  cuts.push_back(b);
  Segment total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = smooth_or_endpoint(g, cuts[i], cuts[i + 1], rel_tol);
    total.value += s.value;
    total.error += s.error;
  }
  return total;
}

// Integrates the labelled pieces, tightening the relative tolerance until the summed error
// estimate is within tol.
QuadratureResult run_pieces(const Integrand& g, std::vector<AreaPiece> pieces, long double tol) {
  if (!(tol > 0)) throw Error("BadArgument", "tolerance must be positive");
  long double rel = std::max(tol / (4 * (long double)pieces.size()), 1e-17L);
  for (int attempt = 0; attempt < 4; ++attempt, rel = std::max(rel / 16, 1e-18L)) {
    QuadratureResult out;
    for (auto& p : pieces) {
      Segment s = integrate(g, p.lo, p.hi, rel);
      p.value = s.value;
      p.error = s.error;
      out.value += s.value;
      out.abs_error_estimate += s.error;
    }
    out.pieces = pieces;
    if (std::isfinite(out.value) && out.abs_error_estimate <= tol) return out;
  }
  throw Error("ToleranceNotMet", "quadrature did not reach the requested tolerance");
}

// Pieces for a generic integrand: tails beyond +-T and windows of half-width min(1/2, gap/2) around
// each singular point, with the stretches between them.
std::vector<AreaPiece> generic_pieces(const std::vector<long double>& sing, long double T) {
  std::vector<AreaPiece> out;
  out.push_back({"tail_minus", -kInf, -T});
  long double cur = -T;
  for (std::size_t k = 0; k < sing.size(); ++k) {
    long double gap_l = k == 0 ? sing[k] + T : sing[k] - sing[k - 1];
    long double gap_r = k + 1 == sing.size() ? T - sing[k] : sing[k + 1] - sing[k];
    long double h = std::min({0.5L, gap_l / 2, gap_r / 2});
    long double lo = sing[k] - h, hi = sing[k] + h;
    if (lo > cur) out.push_back({"between", cur, lo});
    out.push_back({"window", lo, hi});
    cur = hi;
  }
  if (T > cur) out.push_back({"between", cur, T});
  out.push_back({"tail_plus", T, kInf});
  return out;
}

// |F(u,1)|^(-2/d) from the roots of F(u,1) and its leading coefficient.
Integrand root_integrand(const std::vector<cld>& zs, long double lead, int d, std::vector<long double>* real_out) {
  std::vector<long double> real;
  std::vector<int> real_pos;
  for (std::size_t j = 0; j < zs.size(); ++j)
    if (zs[j].imag() == 0) real.push_back(zs[j].real());
  std::sort(real.begin(), real.end());
  Integrand g;
  g.sing = real;
  g.power = d;
  const long double log_lead = std::log(std::fabs(lead));
  g.eval = [zs, real, log_lead, d](long double u, int k, long double off) {
    long double acc = log_lead;
    bool used = false;
    for (const auto& z : zs) {
      if (k >= 0 && !used && z.imag() == 0 && z.real() == real[k]) {
        acc += std::log(std::fabs(off));
        used = true;
      } else {
        acc += std::log(std::abs(cld(u, 0) - z));
      }
    }
    return std::exp(-2 * acc / d);
  };
  if (real_out) *real_out = real;
  return g;
}

long double tail_cut(const std::vector<cld>& zs) {
  long double T = 2;
  for (const auto& z : zs) T = std::max(T, 2 * std::abs(z));
  return T;
}

void label_windows(std::vector<AreaPiece>& pieces) {
  int w = 0;
  for (auto& p : pieces)
    if (p.label == "window") p.label = "window_" + std::to_string(w++);
}

}  // namespace

long double default_area_tol(int degree) { return degree <= 10 ? 1e-8L : 1e-6L; }

QuadratureResult area(const BinaryForm& F, long double tol) {
  int d = F.degree();
  if (d < 3) throw Error("DegreeTooSmall", "areas need degree >= 3");
  if (!F.nonzero_disc()) throw Error("RepeatedRoot", "form has a repeated projective root");
  BinaryForm G = F;
  if (G.coeff(0) == 0) {
    // F(X, kX + Y) has the same area and a nonzero X^d coefficient for some small k
    for (long k = 1;; ++k) {
      G = compose(F, RationalMatrix(Rat(1), Rat(0), Rat(k), Rat(1)));
      if (G.coeff(0) != 0) break;
    }
  }
  std::vector<cld> zs;
  for (const auto& p : roots(G).points) {
    cld z = p.z;
    if (p.real) z = cld(z.real(), 0);
    zs.push_back(z);
  }
  std::vector<long double> real;
  Integrand g = root_integrand(zs, to_long_double(G.coeff(0)), d, &real);
  auto pieces = generic_pieces(real, tail_cut(zs));
  label_windows(pieces);
  return run_pieces(g, pieces, tol);
}

namespace {

// Sum over n of prod_{m != n} |u^2 + sign * mu_m|^(-1/d), n, m = 1..d+1.
QuadratureResult coef_combined(int d, const std::vector<long long>& mu, int sign, long double tol) {
  Integrand g;
  std::vector<std::pair<long double, int>> sing;  // point, index of its factor
  if (sign < 0)
    for (std::size_t m = 0; m < mu.size(); ++m) {
      long double r = std::sqrt((long double)mu[m]);
      sing.push_back({-r, (int)m});
      sing.push_back({r, (int)m});
    }
  std::sort(sing.begin(), sing.end());
  for (const auto& s : sing) g.sing.push_back(s.first);
  g.power = d;
  g.eval = [mu, sing, sign, d](long double u, int k, long double off) {
    std::vector<long double> logs(mu.size());
    long double total = 0;
    for (std::size_t m = 0; m < mu.size(); ++m) {
      long double v;
      if (k >= 0 && sing[k].second == (int)m)
        v = std::fabs(off) * std::fabs(2 * sing[k].first + off);
      else
        v = std::fabs(u * u + sign * (long double)mu[m]);
      logs[m] = std::log(v);
      total += logs[m];
    }
    long double acc = 0;
    for (std::size_t n = 0; n < mu.size(); ++n) acc += std::exp(-(total - logs[n]) / d);
    return acc;
  };
  long double T = 2;
  for (long long m : mu) T = std::max(T, 2 * std::sqrt((long double)m));
  auto pieces = generic_pieces(g.sing, T);
  label_windows(pieces);
  return run_pieces(g, pieces, tol);
}

QuadratureResult coef_family(int d, long double tol, bool plus) {
  if (d < 2) throw Error("DegreeTooSmall", "area sums need d >= 2");
  SquarefreeSequence seq = plus ? squarefree_prefix(d + 1) : shifted_squarefree_prefix(d + 1);
  std::vector<long long> mu(seq.values.begin(), seq.values.begin() + d + 1);
  QuadratureResult combined = coef_combined(d, mu, plus ? 1 : -1, tol);
  QuadratureResult out;
  out.value = combined.value;
  out.abs_error_estimate = combined.abs_error_estimate;
  long double sum = 0, sum_err = 0;
  for (int nu = 1; nu <= d + 1; ++nu) {
    BinaryForm F = plus ? qplus(d, nu, seq) : qminus(d, nu, seq);
    QuadratureResult a = area(F, tol);
    out.pieces.push_back({"nu=" + std::to_string(nu), -kInf, kInf, a.value, a.abs_error_estimate});
    sum += a.value;
    sum_err += a.abs_error_estimate;
  }
  if (std::fabs(sum - combined.value) > 10 * tol + sum_err + combined.abs_error_estimate)
    throw Error("ToleranceNotMet", "combined integral and per-form areas disagree");
  return out;
}

}  // namespace

QuadratureResult coef_qplus(int d, long double tol) { return coef_family(d, tol, true); }
QuadratureResult coef_qminus(int d, long double tol) { return coef_family(d, tol, false); }

QuadratureResult area_L(int d, long p, long double tol) {
  lform(d, p);  // validates (d, p)
  std::vector<cld> zs;
  for (int n = 0; n <= d - 2; ++n) zs.emplace_back((long double)n, 0.0L);
  zs.emplace_back((long double)p, 0.0L);
  Integrand g = root_integrand(zs, 1, d, nullptr);
  std::vector<AreaPiece> pieces;
  pieces.push_back({"tail_minus", -kInf, -0.5L});
  for (int nu = 0; nu <= d - 2; ++nu) pieces.push_back({"window_" + std::to_string(nu), nu - 0.5L, nu + 0.5L});
  pieces.push_back({"middle", d - 1.5L, p - 0.5L});
  pieces.push_back({"window_p", p - 0.5L, p + 0.5L});
  pieces.push_back({"tail_plus", p + 0.5L, kInf});
  return run_pieces(g, pieces, tol);
}

std::vector<std::pair<std::string, long double>> area_L_pieces(int d, long p, long double tol) {
  std::vector<std::pair<std::string, long double>> out;
  for (const auto& piece : area_L(d, p, tol).pieces) out.push_back({piece.label, piece.value});
  return out;
}

Rat w_coeff(AutClass c) {
  switch (c) {
    case AutClass::Trivial:
      return Rat(1);
    case AutClass::PlusMinus:
      return Rat(1, 2);
    case AutClass::Klein:
      return Rat(1, 4);
    case AutClass::Other:
      break;
  }
  throw Error("UnsupportedGroup", "weight is only defined for {Id}, {+-Id} and the Klein group");
}

}  // namespace formlab

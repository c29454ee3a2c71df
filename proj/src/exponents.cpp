#include "formlab/exponents.hpp"

#include <cmath>
#include <functional>

#include "formlab/error.hpp"

namespace formlab {

namespace {

void require_degree(int d) {
  if (d < 3) throw Error("DegreeTooSmall", "exponents are defined for d >= 3, got " + std::to_string(d));
}

std::optional<long> exact_sqrt(long d) {
  long s = std::lround(std::sqrt((double)d));
  for (long t = std::max(0L, s - 1); t <= s + 1; ++t)
    if (t * t == d) return t;
  return std::nullopt;
}

Rat theta_of(const Rat& eta_value, int d) {
  Rat de = eta_value * d;
  return de / (de + (d - 2));
}

}  // namespace

long double eta(int d) {
  require_degree(d);
  if (d == 3) return 2.0L / 9 + 73.0L / (108 * std::sqrt(3.0L));
  if (d <= 20) return 1.0L / (2 * d) + 9.0L / (4 * d * std::sqrt((long double)d));
  return 1.0L / d;
}

long double kappa(int d) {
  require_degree(d);
  if (d == 3) return 12.0L / 19;
  if (d <= 8) return 3.0L / ((d - 2) * std::sqrt((long double)d) + 3);
  return 1.0L / (d - 1);
}

long double theta(int d) {
  long double de = d * eta(d);
  return de / (de + d - 2);
}

long double eta_prime(int d, bool pair_has_real_projective_zero) {
  return pair_has_real_projective_zero ? theta(d) : eta(d);
}

std::optional<Rat> eta_exact(int d) {
  require_degree(d);
  if (d == 3) return std::nullopt;
  if (d <= 20) {
    auto s = exact_sqrt(d);
    if (!s) return std::nullopt;
    return Rat(1, 2 * d) + Rat(9, 4L * d * *s);
  }
  return Rat(1, d);
}

std::optional<Rat> kappa_exact(int d) {
  require_degree(d);
  if (d == 3) return Rat(12, 19);
  if (d <= 8) {
    auto s = exact_sqrt(d);
    if (!s) return std::nullopt;
    return Rat(3, (d - 2) * *s + 3);
  }
  return Rat(1, d - 1);
}

std::optional<Rat> theta_exact(int d) {
  auto e = eta_exact(d);
  if (!e) return std::nullopt;
  return theta_of(*e, d);
}

std::vector<ExponentRow> exponent_table(int dmax) {
  std::vector<ExponentRow> rows;
  for (int d = 3; d <= dmax; ++d) rows.push_back({d, eta(d), kappa(d), theta(d)});
  return rows;
}

std::string three_decimals(long double x) {
  long long milli = (long long)std::floor(x * 1000 + 1e-12L);
  std::string sign = milli < 0 ? "-" : "";
  long long a = std::llabs(milli);
  std::string frac = std::to_string(a % 1000);
  while (frac.size() < 3) frac = "0" + frac;
  return sign + std::to_string(a / 1000) + "." + frac;
}

InequalityReport verify_inequalities(int dmax) {
  if (dmax < 21) throw Error("DegreeTooSmall", "the chains need dmax >= 21");
  InequalityReport rep;
  auto run = [&](const std::string& name, int from, int to, const std::function<bool(int)>& ok) {
    ChainCheck c;
    c.name = name;
    for (int d = from; d <= to; ++d) {
      ++c.checked;
      if (!ok(d) && c.pass) {
        c.pass = false;
        c.first_failure = d;
      }
    }
    rep.pass = rep.pass && c.pass;
    rep.chains.push_back(c);
  };
  // Exact comparisons whenever both sides are rational.
  auto less = [](const std::optional<Rat>& a, long double af, const Rat& b) {
    return a ? *a < b : af < to_long_double(b);
  };
  auto leq = [](const Rat& a, const std::optional<Rat>& b, long double bf) {
    return b ? a <= *b : to_long_double(a) <= bf;
  };

  run("1/d <= eta_d <= eta'_d <= theta_d < 2/d", 3, dmax, [&](int d) {
    auto e = eta_exact(d), t = theta_exact(d);
    bool ok = leq(Rat(1, d), e, eta(d)) && less(t, theta(d), Rat(2, d));
    for (bool real_zero : {false, true}) {
      long double ep = eta_prime(d, real_zero);
      ok = ok && eta(d) <= ep && ep <= theta(d);
    }
    if (e && t) ok = ok && *e <= *t;
    else ok = ok && eta(d) <= theta(d);
    return ok;
  });
  run("kappa_d < theta_d (d <= 20), kappa_d = theta_d = 1/(d-1) (d >= 21)", 3, dmax, [&](int d) {
    if (d <= 20) {
      auto k = kappa_exact(d), t = theta_exact(d);
      if (k && t) return *k < *t;
      return kappa(d) < theta(d);
    }
    auto k = kappa_exact(d), t = theta_exact(d);
    return k && t && *k == *t && *t == Rat(1, d - 1);
  });
  run("theta_2d > 1/(d+1) (d = 2,3), theta_2d < 1/(d+1) (d >= 4)", 2, dmax / 2, [&](int d) {
    auto t = theta_exact(2 * d);
    Rat bound(1, d + 1);
    if (d <= 3) return t ? *t > bound : theta(2 * d) > to_long_double(bound);
    return less(t, theta(2 * d), bound);
  });
  run("theta_d > 2/(d+1) (d = 4,5), theta_d < 2/(d+1) (d >= 6)", 4, dmax, [&](int d) {
    auto t = theta_exact(d);
    Rat bound(2, d + 1);
    if (d <= 5) return t ? *t > bound : theta(d) > to_long_double(bound);
    return less(t, theta(d), bound);
  });
  return rep;
}

}  // namespace formlab

#include "formlab/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <thread>

#include "formlab/error.hpp"

namespace formlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_bound(long long B) {
  if (B < 0) throw Error("BadArgument", "B must be nonnegative");
  if (B > kMaxBound) throw Error("CapExceeded", "B exceeds the evaluation cap 2^61");
}

template <class Fn>
void run_workers(int threads, Fn&& fn) {
  threads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(fn, w);
  fn(0);
  for (auto& t : pool) t.join();
}

// Ascending coefficients of g(t + c).
std::vector<Rat> taylor_shift(std::vector<Rat> a, const Rat& c) {
  int n = (int)a.size() - 1;
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) a[j] += c * a[j + 1];
  return a;
}

// Certified lower bound for |g| on [-1, 1], or nothing if g may vanish there.
std::optional<Rat> certify_interval_min(const std::vector<Rat>& g) {
  struct Piece {
    Rat c, r;
    int depth;
  };
  std::vector<Piece> stack{{Rat(0), Rat(1), 0}};
  std::optional<Rat> best;
  while (!stack.empty()) {
    Piece p = stack.back();
    stack.pop_back();
    std::vector<Rat> b = taylor_shift(g, p.c);
    Rat tail = 0, rk = 1;
    for (std::size_t k = 1; k < b.size(); ++k) {
      rk *= p.r;
      tail += abs(b[k]) * rk;
    }
    Rat lower = abs(b[0]) - tail;
    if ((lower > 0 && 16 * tail <= abs(b[0])) || (lower > 0 && p.depth >= 20)) {
      if (!best || lower < *best) best = lower;
      continue;
    }
    if (p.depth >= 40) return std::nullopt;
    Rat h = p.r / 2;
    stack.push_back({p.c - h, h, p.depth + 1});
    stack.push_back({p.c + h, h, p.depth + 1});
  }
  return best;
}

// Smallest X >= 0 with lhs_scale * X^e >= rhs.
long long least_power_at_least(const Rat& lhs_scale, int e, const Rat& rhs) {
  if (rhs <= 0) return 0;
  long double guess = std::pow(to_long_double(rhs / lhs_scale), 1.0L / e);
  long long X = std::max(0LL, (long long)std::floor(guess) - 2);
  for (;;) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), (unsigned long)X, e);
    if (lhs_scale * Rat(p) >= rhs) return X;
    ++X;
  }
}

long long default_cap(const BinaryForm& F, long long B) {
  long double r = std::pow((long double)std::max(1LL, B), 1.0L / F.degree());
  return std::max(100LL, (long long)std::ceil(4 * r));
}

struct Stripes {
  std::vector<std::complex<long double>> roots;
  long double c2 = 0;
  int d = 0;
};

Stripes plan(const BinaryForm& F) {
  Stripes s;
  s.d = F.degree();
  RootSet rs = roots(F);
  for (const auto& p : rs.points)
    if (!p.infinite) s.roots.push_back(p.z);
  if (s.d >= 2) {
    s.c2 = root_proximity_constants(F, rs).c2;
  } else {
    std::vector<Rat> f = dehomogenize(F);
    s.c2 = 1 / std::min(1.0L, std::fabs(to_long_double(f[0])));
  }
  return s;
}

// L members split over the integers 0, 1, ..., d-2 and p.
Stripes plan_lform(const BinaryForm& F) {
  Stripes s;
  s.d = F.degree();
  Int sum = -F.coeff(1).get_num();
  long long p = sum.get_si() - (long long)(s.d - 2) * (s.d - 1) / 2;
  for (int n = 0; n <= s.d - 2; ++n) s.roots.emplace_back((long double)n, 0.0L);
  s.roots.emplace_back((long double)p, 0.0L);
  // distinct integer roots are at least 1 apart
  s.c2 = std::pow(2.0L, (long double)(s.d - 1));
  return s;
}

// x-intervals of the stripe at height y > 0 that can hold |F(x,y)| <= B.
std::vector<std::pair<long long, long long>> windows(const Stripes& s, long long y, long long B, long long X) {
  std::vector<std::pair<long long, long long>> iv;
  long double yd = (long double)y;
  long double ypow = std::pow(yd, (long double)s.d);
  long double reach = s.c2 * (long double)B / ypow * (1 + 1e-9L);
  for (const auto& z : s.roots) {
    if (std::fabs(z.imag()) > reach * (1 + 1e-9L) + 1e-15L) continue;
    long double centre = yd * z.real();
    long double w = reach * yd + 2 + yd * (std::fabs(z.real()) + 1) * 1e-15L;
    long double lo = std::ceil(centre - w), hi = std::floor(centre + w);
    if (hi < -(long double)X || lo > (long double)X) continue;
    iv.push_back({std::max((long long)lo, -X), std::min((long long)hi, X)});
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<long long, long long>> merged;
  for (const auto& p : iv) {
    if (!merged.empty() && p.first <= merged.back().second + 1)
      merged.back().second = std::max(merged.back().second, p.second);
    else
      merged.push_back(p);
  }
  return merged;
}

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool has_rational_root(const BinaryForm& F) {
  if (F.coeff(0) == 0 || F.coeff(F.degree()) == 0) return true;
  for (const auto& p : roots(F).points)
    if (p.tag.kind == TagKind::Rational) return true;
  return false;
}

}  // namespace

ValueSet::ValueSet(std::vector<std::int64_t> values) : values_(sorted_unique(std::move(values))) {}

bool ValueSet::contains(std::int64_t m) const { return std::binary_search(values_.begin(), values_.end(), m); }

ValueSet ValueSet::intersect(const ValueSet& o) const {
  std::vector<std::int64_t> out;
  std::set_intersection(values_.begin(), values_.end(), o.values_.begin(), o.values_.end(), std::back_inserter(out));
  ValueSet r;
  r.values_ = std::move(out);
  return r;
}

ValueSet ValueSet::unite(const ValueSet& o) const {
  std::vector<std::int64_t> out;
  std::set_union(values_.begin(), values_.end(), o.values_.begin(), o.values_.end(), std::back_inserter(out));
  ValueSet r;
  r.values_ = std::move(out);
  return r;
}

std::optional<Rat> definite_minimum(const BinaryForm& F) {
  if (roots(F).has_real_point()) return std::nullopt;
  int d = F.degree();
  std::vector<Rat> g1(d + 1), g2(d + 1);
  for (int i = 0; i <= d; ++i) {
    g1[i] = F.coeff(i);      // F(1, t)
    g2[i] = F.coeff(d - i);  // F(t, 1)
  }
  auto m1 = certify_interval_min(g1), m2 = certify_interval_min(g2);
  if (!m1 || !m2) return std::nullopt;
  return std::min(*m1, *m2);
}

BoxBound search_box(const BinaryForm& F, long long B, const std::optional<RegularityTuple>& reg, long long box_cap) {
  require_bound(B);
  BoxBound box;
  box.form = F.to_string();
  int d = F.degree();
  if (reg && d >= reg->d1 && d > reg->d0) {
    int e = d - reg->d0;
    long long X;
    if (reg->kappa.exact) {
      const Rat& k = *reg->kappa.exact;
      // X^e >= kappa^e * B
      X = least_power_at_least(Rat(1), e, rat_pow(k, e) * Rat(Int((long)B)));
    } else {
      long double v = reg->kappa.value * std::pow((long double)B, 1.0L / e);
      X = (long long)std::ceil(v * (1 + 1e-12L)) + 1;
    }
    box.X = std::max<long long>(X, reg->A - 1);
    box.rigorous = true;
    box.source = BoxSource::ConditionV;
    return box;
  }
  if (F.integral() && d >= 1) {
    if (auto c = definite_minimum(F)) {
      box.c_F = *c;
      box.X = least_power_at_least(*c, d, Rat(Int((long)B)));
      box.rigorous = true;
      box.source = BoxSource::DefiniteMinimum;
      return box;
    }
  }
  box.X = box_cap > 0 ? box_cap : default_cap(F, B);
  box.rigorous = false;
  box.source = BoxSource::UserCap;
  return box;
}

namespace {

ValueSet scan(const BinaryForm& F, const Stripes& s, long long B, const BoxBound& box, long long min_max,
              int threads) {
  IntegerEvaluator ev(F);
  const long long X = box.X;
  const int d = F.degree();
  threads = std::max(1, threads);
  std::vector<std::vector<std::int64_t>> found(threads);
  run_workers(threads, [&](int w) {
    auto& out = found[w];
    auto visit = [&](long long x, long long y) {
      if (std::max(std::llabs(x), std::llabs(y)) < min_max) return;
      auto v = ev.value_within(x, y, B);
      if (!v) return;
      out.push_back(*v);
      out.push_back(d % 2 == 0 ? *v : -*v);  // the point (-x, -y)
    };
    // y = 0 in full, then y > 0 through the stripe windows.
    if (w == 0)
      for (long long x = 0; x <= X; ++x) visit(x, 0);
    for (long long y = 1 + w; y <= X; y += threads)
      for (const auto& [lo, hi] : windows(s, y, B, X))
        for (long long x = lo; x <= hi; ++x) visit(x, y);
  });
  std::vector<std::int64_t> all;
  for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
  return ValueSet(std::move(all));
}

}  // namespace

ValueSet represented_values(const BinaryForm& F, long long B, const BoxBound& box, long long min_max, int threads) {
  require_bound(B);
  if (!F.integral()) throw Error("NonIntegralForm", "counting needs integer coefficients");
  return scan(F, plan(F), B, box, min_max, threads);
}

CountReport count_nn(const BinaryForm& F, long long B, const CountOptions& opt) {
  auto t0 = Clock::now();
  CountReport rep;
  rep.B = B;
  BoxBound box = search_box(F, B, std::nullopt, opt.box_cap);
  ValueSet vs = represented_values(F, B, box, 0, opt.threads);
  rep.count = (long long)vs.size();
  rep.boxes.push_back(box);
  rep.rigorous = box.rigorous;
  rep.zero_included = vs.contains_zero();
  rep.elapsed = seconds_since(t0);
  return rep;
}

namespace {

ValueSet common_scan(const BinaryForm& F1, const BinaryForm& F2, long long N, const CountOptions& opt,
                     CountReport* rep) {
  BoxBound b1 = search_box(F1, N, std::nullopt, opt.box_cap), b2 = search_box(F2, N, std::nullopt, opt.box_cap);
  ValueSet v = represented_values(F1, N, b1, 0, opt.threads).intersect(represented_values(F2, N, b2, 0, opt.threads));
  if (rep) {
    rep->boxes = {b1, b2};
    rep->rigorous = b1.rigorous && b2.rigorous;
  }
  return v;
}

}  // namespace

ValueSet common_values(const BinaryForm& F1, const BinaryForm& F2, long long N, const CountOptions& opt) {
  return common_scan(F1, F2, N, opt, nullptr);
}

CountReport count_common(const BinaryForm& F1, const BinaryForm& F2, long long N, const CountOptions& opt) {
  auto t0 = Clock::now();
  CountReport rep;
  rep.B = N;
  ValueSet v = common_scan(F1, F2, N, opt, &rep);
  rep.count = (long long)v.size();
  rep.zero_included = v.contains_zero();
  rep.elapsed = seconds_since(t0);
  return rep;
}

CountReport count_m(const BinaryForm& F1, const BinaryForm& F2, long long B, bool star, const CountOptions& opt) {
  auto t0 = Clock::now();
  if (F1.degree() != F2.degree()) throw Error("DegreeMismatch", "count_m needs forms of the same degree");
  if (B < 0) throw Error("BadArgument", "B must be nonnegative");
  if (B > 100000) throw Error("CapExceeded", "count_m box too large");
  auto values = [&](const BinaryForm& F) {
    IntegerEvaluator ev(F);
    int threads = std::max(1, opt.threads);
    std::vector<std::vector<i128>> parts(threads);
    run_workers(threads, [&](int w) {
      for (long long y = -B + w; y <= B; y += threads)
        for (long long x = -B; x <= B; ++x) {
          auto v = ev.exact128(x, y);
          if (!v) throw Error("CapExceeded", "form value exceeds 128 bits");
          parts[w].push_back(*v);
        }
    });
    std::vector<i128> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    return all;
  };
  std::vector<i128> a = values(F1), b = values(F2);
  long long count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      i128 v = a[i];
      long long ca = 0, cb = 0;
      while (i < a.size() && a[i] == v) ++i, ++ca;
      while (j < b.size() && b[j] == v) ++j, ++cb;
      if (!(star && v == 0)) count += ca * cb;
    }
  }
  CountReport rep;
  rep.B = B;
  rep.count = count;
  rep.rigorous = true;
  rep.zero_included = !star;
  rep.elapsed = seconds_since(t0);
  return rep;
}

CountReport count_r(const FamilyId& fam, int d, long long B, long long A, const CountOptions& opt) {
  auto t0 = Clock::now();
  require_bound(B);
  if (A < 0) throw Error("BadArgument", "A must be nonnegative");
  RegularityTuple reg = regularity(fam);
  long long Aeff = std::max<long long>(A, reg.A);
  int cutoff = degree_cutoff(fam, B, Aeff);
  CountReport rep;
  rep.B = B;
  rep.rigorous = A >= reg.A;
  std::vector<std::int64_t> all;
  bool zero = A == 0;

  for (int deg = std::max(1, d); deg <= cutoff; ++deg) {
    for (const auto& F : members(fam, deg)) {
      BoxBound box = search_box(F, B, reg, opt.box_cap);
      bool split = fam.kind == FamilyKind::Lfamily;
      ValueSet vs = scan(F, split ? plan_lform(F) : plan(F), B, box, A, opt.threads);
      all.insert(all.end(), vs.values().begin(), vs.values().end());
      rep.rigorous = rep.rigorous && box.rigorous;
      rep.boxes.push_back(box);
      if (!zero && !split && has_rational_root(F)) zero = true;
    }
  }
  // Beyond the cutoff, points with max >= Aeff only contribute zeros.
  if (fam.kind == FamilyKind::Lfamily) zero = true;
  if (fam.kind == FamilyKind::Binomial)
    for (const auto& e : fam.catalog)
      if (e.d >= d && e.d > cutoff && has_rational_root(binomial_form(e.a, e.b, e.d))) zero = true;

  // Small points A <= max < Aeff at degrees past the cutoff.
  if (A < Aeff) {
    std::vector<std::pair<long long, long long>> small;
    for (long long x = -(Aeff - 1); x <= Aeff - 1; ++x)
      for (long long y = 0; y <= Aeff - 1; ++y) {
        if (y == 0 && x < 0) continue;
        if (std::max(std::llabs(x), y) >= A && (x != 0 || y != 0)) small.push_back({x, y});
      }
    std::vector<std::int64_t> seen = sorted_unique(all);
    const int patience = 3;
    int quiet_run = 0;
    bool stopped = false;
    int deg = std::max(d, cutoff + 1);
    for (; deg <= opt.degree_cap; ++deg) {
      auto ms = members(fam, deg);
      if (ms.empty()) continue;
      bool quiet = true;
      std::vector<std::int64_t> fresh;
      for (const auto& F : ms) {
        IntegerEvaluator ev(F);
        for (const auto& [x, y] : small) {
          auto v = ev.value_within(x, y, B);
          if (!v) continue;
          if (*v == 0) {
            zero = true;
            continue;
          }
          bool axis = x == 0 || y == 0;
          bool known = std::binary_search(seen.begin(), seen.end(), *v);
          if (!axis || !known) quiet = false;
          fresh.push_back(*v);
          fresh.push_back(deg % 2 == 0 ? *v : -*v);
        }
      }
      all.insert(all.end(), fresh.begin(), fresh.end());
      seen = sorted_unique(all);
      quiet_run = quiet ? quiet_run + 1 : 0;
      if (quiet_run >= patience) {
        stopped = true;
        break;
      }
    }
    if (!stopped) {
      rep.rigorous = false;
      rep.warning = "SmallPointUnbounded: small-point values kept appearing up to degree " +
                    std::to_string(opt.degree_cap);
    }
  }
  if (zero) all.push_back(0);
  ValueSet vs(std::move(all));
  rep.count = (long long)vs.size();
  rep.zero_included = vs.contains_zero();
  rep.elapsed = seconds_since(t0);
  return rep;
}

CountReport count_large_y(const BinaryForm& F, long long A, long double delta, long long y_cap,
                          const CountOptions& opt) {
  auto t0 = Clock::now();
  require_bound(A);
  if (!F.integral()) throw Error("NonIntegralForm", "counting needs integer coefficients");
  IntegerEvaluator ev(F);
  Stripes s = plan(F);
  // least y >= 1 with y^d >= A * delta^d, ties resolved inclusively
  const int d = F.degree();
  long double target = (long double)std::max(A, 1LL) * std::pow(delta, (long double)d) * (1 - 1e-15L);
  long long y_min = std::max(1LL, (long long)std::floor(std::pow(target, 1.0L / d)) - 1);
  while (std::pow((long double)y_min, (long double)d) < target) ++y_min;
  int threads = std::max(1, opt.threads);
  std::vector<long long> counts(threads, 0);
  long long X = std::numeric_limits<long long>::max() / 4;
  run_workers(threads, [&](int w) {
    for (long long y = y_min + w; y <= y_cap; y += threads)
      for (const auto& [lo, hi] : windows(s, y, A, X))
        for (long long x = lo; x <= hi; ++x) {
          auto v = ev.value_within(x, y, A);
          if (v && *v != 0) counts[w] += 2;  // (x, y) and (-x, -y)
        }
  });
  CountReport rep;
  rep.B = A;
  for (long long c : counts) rep.count += c;
  rep.rigorous = false;
  rep.zero_included = false;
  rep.elapsed = seconds_since(t0);
  return rep;
}

std::vector<FitRow> fit_report(const std::function<CountReport(long long)>& counter, const std::vector<long long>& Bs,
                               const Rat& exponent) {
  for (std::size_t i = 1; i < Bs.size(); ++i)
    if (Bs[i] <= Bs[i - 1]) throw Error("BadArgument", "B values must increase");
  std::vector<FitRow> rows;
  long double e = to_long_double(exponent);
  for (long long B : Bs) {
    CountReport r = counter(B);
    FitRow row;
    row.B = B;
    row.count = r.count;
    row.ratio = exponent == 0 ? (long double)r.count : (long double)r.count / std::pow((long double)B, e);
    row.rigorous = r.rigorous;
    rows.push_back(row);
  }
  return rows;
}

std::string to_string(BoxSource s) {
  switch (s) {
    case BoxSource::ConditionV:
      return "ConditionV";
    case BoxSource::DefiniteMinimum:
      return "DefiniteMinimum";
    case BoxSource::UserCap:
      return "UserCap";
  }
  return "?";
}

}  // namespace formlab

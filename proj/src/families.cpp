#include "formlab/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "formlab/error.hpp"
#include "formlab/structure.hpp"

namespace formlab {

namespace {

std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> c(a.size() + b.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Exact division by a monic divisor; both in descending order.
std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den) {
  std::size_t n = num.size(), m = den.size();
  std::vector<Int> q(n - m + 1, Int(0));
  for (std::size_t i = 0; i + m <= n; ++i) {
    q[i] = num[i];
    if (q[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) num[i + j] -= q[i] * den[j];
  }
  for (std::size_t i = n - m + 1; i < n; ++i)
    if (num[i] != 0) throw Error("InternalError", "inexact cyclotomic division");
  return q;
}

const std::vector<Int>& cyclotomic_poly(long n) {
  static std::map<long, std::vector<Int>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  std::vector<Int> num(n + 1, Int(0));
  num[0] = 1;
  num[n] = -1;
  for (long k = 1; k < n; ++k) {
    if (n % k != 0) continue;
    num = poly_div_exact(num, cyclotomic_poly(k));
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, std::move(num)).first->second;
}

BinaryForm from_ints(const std::vector<Int>& c) {
  std::vector<Rat> r;
  for (const auto& v : c) r.emplace_back(v);
  return BinaryForm(r);
}

BinaryForm quadratic_product(int d, int nu, const SquarefreeSequence& seq, int sign) {
  if (d < 2) throw Error("IndexOutOfRange", "half-degree must be at least 2");
  if (nu < 1 || nu > d + 1) throw Error("IndexOutOfRange", "nu must lie in [1, d+1]");
  if (seq.size() < d + 1) throw Error("IndexOutOfRange", "sequence too short");
  std::vector<Int> c{Int(1)};
  for (int n = 1; n <= d + 1; ++n) {
    if (n == nu) continue;
    c = poly_mul(c, {Int(1), Int(0), Int(sign) * Int((long)seq.mu(n))});
  }
  return from_ints(c);
}

long kv_int(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& spec) {
  auto it = kv.find(key);
  if (it == kv.end()) throw Error("ParseError", "missing '" + key + "' in " + spec);
  try {
    std::size_t used = 0;
    long v = std::stol(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error("ParseError", "bad integer for '" + key + "' in " + spec);
  }
}

}  // namespace

long long SquarefreeSequence::mu(int n) const {
  if (n < 1 || n > (int)values.size()) throw Error("IndexOutOfRange", "sequence index " + std::to_string(n));
  return values[n - 1];
}

SquarefreeSequence squarefree_prefix(int N) {
  if (N < 1) throw Error("IndexOutOfRange", "N must be positive");
  SquarefreeSequence s;
  s.variant = SeqVariant::FullSquarefree;
  s.lambda = 0;
  for (long long k = 1; (int)s.values.size() < N; ++k) {
    if (!is_squarefree(k)) continue;
    s.values.push_back(k);
    Rat r((long)k, (long)s.values.size());
    r.canonicalize();
    if (r > s.lambda) s.lambda = r;
  }
  return s;
}

SquarefreeSequence shifted_squarefree_prefix(int N) {
  if (N < 1) throw Error("IndexOutOfRange", "N must be positive");
  SquarefreeSequence full = squarefree_prefix(N + 1);
  SquarefreeSequence s;
  s.variant = SeqVariant::Shifted;
  s.values.assign(full.values.begin() + 1, full.values.end());
  s.lambda = 0;
  for (int n = 1; n <= N; ++n) {
    Rat r((long)s.values[n - 1], (long)n);
    r.canonicalize();
    if (r > s.lambda) s.lambda = r;
  }
  return s;
}

SquarefreeSequence custom_sequence(const std::vector<long long>& values) {
  SquarefreeSequence s;
  s.variant = SeqVariant::Custom;
  s.values = values;
  s.lambda = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0 || !is_squarefree((std::uint64_t)values[i]))
      throw Error("BadSequence", "not a positive squarefree integer: " + std::to_string(values[i]));
    if (i > 0 && values[i] <= values[i - 1]) throw Error("BadSequence", "sequence not increasing");
    Rat r((long)values[i], (long)(i + 1));
    r.canonicalize();
    if (r > s.lambda) s.lambda = r;
  }
  return s;
}

Rat qplus_lambda() { return Rat(381, 230); }

FamilyId FamilyId::cyclotomic() {
  FamilyId f;
  f.kind = FamilyKind::Cyclotomic;
  return f;
}

FamilyId FamilyId::qplus() {
  FamilyId f;
  f.kind = FamilyKind::QPlus;
  f.seq_variant = SeqVariant::FullSquarefree;
  return f;
}

FamilyId FamilyId::qminus() {
  FamilyId f;
  f.kind = FamilyKind::QMinus;
  f.seq_variant = SeqVariant::Shifted;
  return f;
}

FamilyId FamilyId::lfamily() {
  FamilyId f;
  f.kind = FamilyKind::Lfamily;
  return f;
}

FamilyId FamilyId::binomial(std::vector<BinomialEntry> catalog, bool validate) {
  for (const auto& e : catalog) {
    if (e.d < 1 || e.a == 0 || e.b == 0) throw Error("BadCatalog", "binomial entries need d >= 1 and nonzero a, b");
  }
  if (validate) {
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      for (std::size_t j = i + 1; j < catalog.size(); ++j) {
        const auto &u = catalog[i], &v = catalog[j];
        if (u.d != v.d) continue;
        if (u.a == v.a && u.b == v.b) throw Error("BadCatalog", "repeated binomial entry");
        auto ratio_power = [&](const Int& p, const Int& q) {
          Rat r(p, q);
          r.canonicalize();
          return rational_dth_root(r, u.d).has_value();
        };
        bool straight = ratio_power(u.a, v.a) && ratio_power(u.b, v.b);
        bool swapped = ratio_power(u.a, v.b) && ratio_power(u.b, v.a);
        if (straight || swapped)
          throw Error("BadCatalog", "entries " + std::to_string(i) + " and " + std::to_string(j) +
                                        " violate the d-th power hypotheses");
      }
    }
  }
  FamilyId f;
  f.kind = FamilyKind::Binomial;
  f.catalog = std::move(catalog);
  return f;
}

SquarefreeSequence FamilyId::sequence(int N) const {
  switch (seq_variant) {
    case SeqVariant::FullSquarefree:
      return squarefree_prefix(N);
    case SeqVariant::Shifted:
      return shifted_squarefree_prefix(N);
    case SeqVariant::Custom: {
      if ((int)custom_mu.size() < N) throw Error("IndexOutOfRange", "custom sequence too short");
      return custom_sequence(std::vector<long long>(custom_mu.begin(), custom_mu.begin() + N));
    }
  }
  throw Error("InternalError", "unknown sequence variant");
}

std::string FamilyId::name() const {
  switch (kind) {
    case FamilyKind::Cyclotomic:
      return "cyclo";
    case FamilyKind::Binomial:
      return "binom";
    case FamilyKind::QPlus:
      return "qplus";
    case FamilyKind::QMinus:
      return "qminus";
    case FamilyKind::Lfamily:
      return "L";
  }
  return "?";
}

BinaryForm cyclotomic_form(long n) {
  if (n < 1) throw Error("IndexOutOfRange", "cyclotomic index must be positive");
  return from_ints(cyclotomic_poly(n));
}

BinaryForm qplus(int d, int nu, const SquarefreeSequence& seq) { return quadratic_product(d, nu, seq, +1); }

BinaryForm qminus(int d, int nu, const SquarefreeSequence& seq) {
  if (!seq.values.empty() && seq.values[0] < 2) throw Error("BadSequence", "minus family needs mu_1 >= 2");
  return quadratic_product(d, nu, seq, -1);
}

BinaryForm lform(int d, long p) {
  if (d < 5) throw Error("IndexOutOfRange", "L family needs d >= 5");
  if (p < d || p >= 2L * d || !is_prime((std::uint64_t)p))
    throw Error("BadPrime", "need a prime p with d <= p < 2d, got " + std::to_string(p));
  std::vector<Int> c{Int(1), Int(-p)};
  for (int n = 0; n <= d - 2; ++n) c = poly_mul(c, {Int(1), Int(-n)});
  return from_ints(c);
}

BinaryForm binomial_form(const Int& a, const Int& b, int d) {
  std::vector<Rat> c(d + 1, Rat(0));
  c[0] = a;
  c[d] = b;
  return BinaryForm(c);
}

std::vector<BinaryForm> members(const FamilyId& fam, int d) {
  std::vector<BinaryForm> out;
  if (d < 1) return out;
  switch (fam.kind) {
    case FamilyKind::Cyclotomic:
      for (long n = 1; n <= 2L * d * d + 2; ++n)
        if ((long)euler_phi(n) == d) out.push_back(cyclotomic_form(n));
      break;
    case FamilyKind::Binomial:
      for (const auto& e : fam.catalog)
        if (e.d == d) out.push_back(binomial_form(e.a, e.b, d));
      break;
    case FamilyKind::QPlus:
    case FamilyKind::QMinus: {
      if (d % 2 != 0 || d < 4) break;
      int h = d / 2;
      SquarefreeSequence seq = fam.sequence(h + 1);
      for (int nu = 1; nu <= h + 1; ++nu)
        out.push_back(fam.kind == FamilyKind::QPlus ? qplus(h, nu, seq) : qminus(h, nu, seq));
      break;
    }
    case FamilyKind::Lfamily:
      if (d < 5) break;
      for (long p = d; p < 2L * d; ++p)
        if (is_prime((std::uint64_t)p)) out.push_back(lform(d, p));
      break;
  }
  return out;
}

RegularityTuple regularity(const FamilyId& fam) {
  RegularityTuple t;
  switch (fam.kind) {
    case FamilyKind::QPlus:
      t = {2, 1, 0, 4, {Rat(1), 1.0L, "1"}};
      break;
    case FamilyKind::QMinus: {
      Rat lambda;
      if (fam.seq_variant == SeqVariant::Shifted)
        lambda = 2;
      else if (fam.seq_variant == SeqVariant::Custom)
        lambda = custom_sequence(fam.custom_mu).lambda;
      else
        throw Error("BadSequence", "minus family needs mu_1 >= 2");
      long double k = 2 * std::numbers::e_v<long double> * to_long_double(lambda);
      t.A = (long)std::floor(k) + 1;
      t.A1 = 1;
      t.d0 = 2;
      t.d1 = 2;
      t.kappa = {std::nullopt, k, "2*e*" + lambda.get_str()};
      break;
    }
    case FamilyKind::Lfamily:
      t = {10, 1, 1, 5, {Rat(9), 9.0L, "9"}};
      break;
    case FamilyKind::Binomial: {
      std::map<int, long> per_degree;
      for (const auto& e : fam.catalog) per_degree[e.d]++;
      long A1 = 1;
      for (const auto& [d, count] : per_degree) {
        if (d < 2) continue;
        long k = 1;
        long double pw = d;
        while (pw < count) {
          pw *= d;
          ++k;
        }
        A1 = std::max(A1, k);
      }
      t = {2, A1, 0, 4, {Rat(1), 1.0L, "1"}};
      break;
    }
    case FamilyKind::Cyclotomic:
      t = {2, 2, 0, 4, {std::nullopt, 2.0L / std::sqrt(3.0L), "2/sqrt(3)"}};
      break;
  }
  return t;
}

int degree_cutoff(const FamilyId& fam, long long B, long long A) {
  RegularityTuple t = regularity(fam);
  if ((long double)A <= t.kappa.value) throw Error("AtooSmall", "A must exceed kappa = " + t.kappa.text);
  if (B <= 1) return t.d0;
  int k = 0;
  if (t.kappa.exact) {
    Rat ratio = Rat((long)A) / *t.kappa.exact;
    Rat pw = ratio;
    Rat bound((long)B);
    while (pw <= bound) {
      ++k;
      pw *= ratio;
    }
  } else {
    long double q = std::log((long double)B) / std::log((long double)A / t.kappa.value);
    k = (int)std::floor(q + 1e-12L);
  }
  return t.d0 + k;
}

bool condition_v_holds(const Int& value, long long max_coord, int exponent, const Kappa& kappa) {
  if (exponent <= 0) return true;
  Int av = abs(value);
  if (kappa.exact) {
    // (q * max)^e <= p^e * |F|
    const Int& p = kappa.exact->get_num();
    const Int& q = kappa.exact->get_den();
    Int lhs, rhs;
    Int qm = q * Int((long)max_coord);
    mpz_pow_ui(lhs.get_mpz_t(), qm.get_mpz_t(), exponent);
    mpz_pow_ui(rhs.get_mpz_t(), p.get_mpz_t(), exponent);
    rhs *= av;
    return lhs <= rhs;
  }
  long double lhs = exponent * std::log((long double)max_coord);
  long double rhs = exponent * std::log(kappa.value) + log_abs(av);
  return lhs <= rhs + 1e-12L * std::max(1.0L, std::fabs(rhs));
}

ConditionVReport check_condition_v(const FamilyId& fam, int dmax, long long box, int threads) {
  RegularityTuple t = regularity(fam);
  if (box < t.A) throw Error("BoxTooSmall", "box must be at least A");
  ConditionVReport rep;
  std::vector<BinaryForm> forms;
  for (int d = std::max(1, t.d1); d <= dmax; ++d)
    for (auto& F : members(fam, d)) forms.push_back(F);
  threads = std::max(1, threads);
  // Integer fast path for exact kappa: compare max^e * q^e against p^e * |F|.
  for (const auto& F : forms) {
    ++rep.forms_checked;
    IntegerEvaluator ev(F);
    int e = F.degree() - t.d0;
    struct Hit {
      bool found = false;
      long long x = 0, y = 0;
      Int value;
      long long points = 0;
    };
    std::vector<Hit> hits(threads);
    auto work = [&](int w) {
      Hit& h = hits[w];
      for (long long x = -box + w; x <= box; x += threads) {
        for (long long y = -box; y <= box; ++y) {
          long long m = std::max(std::llabs(x), std::llabs(y));
          if (m < t.A) continue;
          CappedInteger v = ev.exact(x, y, Int(1) << 4000);
          if (v.sign == 0) continue;
          ++h.points;
          if (h.found) continue;
          if (!condition_v_holds(v.value, m, e, t.kappa)) {
            h.found = true;
            h.x = x;
            h.y = y;
            h.value = v.value;
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();
    const Hit* first = nullptr;
    for (const auto& h : hits) {
      rep.points_checked += h.points;
      if (h.found && (!first || h.x < first->x || (h.x == first->x && h.y < first->y))) first = &h;
    }
    if (first && !rep.has_counterexample) {
      rep.pass = false;
      rep.has_counterexample = true;
      rep.form = F.to_string();
      rep.x = first->x;
      rep.y = first->y;
      rep.value = first->value;
    }
  }
  return rep;
}

BinaryForm parse_form_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error("ParseError", "form spec needs 'name:key=value,...': " + spec);
  std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("ParseError", "expected key=value in " + spec);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (name == "qplus") {
    long d = kv_int(kv, "d", spec), nu = kv_int(kv, "nu", spec);
    if (d < 2 || d > 10000) throw Error("IndexOutOfRange", "d out of range");
    return qplus((int)d, (int)nu, squarefree_prefix((int)d + 1));
  }
  if (name == "qminus") {
    long d = kv_int(kv, "d", spec), nu = kv_int(kv, "nu", spec);
    if (d < 2 || d > 10000) throw Error("IndexOutOfRange", "d out of range");
    return qminus((int)d, (int)nu, shifted_squarefree_prefix((int)d + 1));
  }
  if (name == "L") return lform((int)kv_int(kv, "d", spec), kv_int(kv, "p", spec));
  if (name == "cyclo") return cyclotomic_form(kv_int(kv, "n", spec));
  if (name == "binom") {
    auto need = [&](const std::string& k) {
      auto it = kv.find(k);
      if (it == kv.end()) throw Error("ParseError", "missing '" + k + "' in " + spec);
      return it->second;
    };
    Rat a = parse_rational(need("a")), b = parse_rational(need("b"));
    long d = kv_int(kv, "d", spec);
    if (d < 1 || d > 10000) throw Error("IndexOutOfRange", "d out of range");
    std::vector<Rat> c(d + 1, Rat(0));
    c[0] = a;
    c[d] = b;
    return BinaryForm(c);
  }
  throw Error("ParseError", "unknown family '" + name + "'");
}

}  // namespace formlab

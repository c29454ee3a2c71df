#include <boost/math/special_functions/ellint_1.hpp>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "formlab/areas.hpp"
#include "formlab/checks.hpp"
#include "formlab/counting.hpp"
#include "formlab/exponents.hpp"
#include "formlab/families.hpp"
#include "formlab/structure.hpp"

using namespace formlab;

namespace {

const long double kE = std::exp(1.0L);
const long double kPi = std::acos(-1.0L);

struct Verdict {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) note << "; ";
      note << what;
      pass = false;
    }
  }
};

std::mt19937_64 seeded() { return std::mt19937_64(kDefaultSeed); }

RationalMatrix random_gamma(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> e(-3, 3);
  for (;;) {
    int a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    if (a * d - b * c != 0) return RationalMatrix{Rat(a), Rat(b), Rat(c), Rat(d)};
  }
}

template <class T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// Members grouped by family, used by the isomorphism and oracle criteria.
std::vector<std::pair<std::string, std::vector<BinaryForm>>> family_pools(std::mt19937_64& rng) {
  std::vector<std::pair<std::string, std::vector<BinaryForm>>> pools{
      {"qplus", {}}, {"qminus", {}}, {"L", {}}, {"cyclo", {}}, {"binom", {}}};
  for (int deg = 4; deg <= 8; deg += 2) {
    for (auto& F : members(FamilyId::qplus(), deg)) pools[0].second.push_back(F);
    for (auto& F : members(FamilyId::qminus(), deg)) pools[1].second.push_back(F);
  }
  for (int deg = 5; deg <= 7; ++deg)
    for (auto& F : members(FamilyId::lfamily(), deg)) pools[2].second.push_back(F);
  for (int deg = 2; deg <= 8; ++deg)
    for (auto& F : members(FamilyId::cyclotomic(), deg)) pools[3].second.push_back(F);
  std::uniform_int_distribution<int> ab(1, 20), sign(0, 1), deg(3, 8);
  for (int i = 0; i < 12; ++i) {
    Int a = ab(rng), b = ab(rng) * (sign(rng) ? 1 : -1);
    pools[4].second.push_back(binomial_form(a, b, deg(rng)));
  }
  return pools;
}

// The printed table for d = 3..8 as (eta, theta, kappa).
const char* kTable[6][3] = {{"0.612", "0.647", "0.631"}, {"0.406", "0.448", "0.428"}, {"0.301", "0.334", "0.309"},
                            {"0.236", "0.261", "0.234"}, {"0.192", "0.211", "0.184"}, {"0.161", "0.177", "0.150"}};

void exponent_table_criterion(Verdict& v) {
  int matches = 0;
  for (const auto& row : exponent_table(8)) {
    const char* const* want = kTable[row.d - 3];
    std::string got[3] = {three_decimals(row.eta), three_decimals(row.theta), three_decimals(row.kappa)};
    const char* names[3] = {"eta", "theta", "kappa"};
    for (int k = 0; k < 3; ++k) {
      if (got[k] == want[k])
        ++matches;
      else
        v.require(false, std::string(names[k]) + "_" + std::to_string(row.d) + " = " + got[k] + " vs table " + want[k]);
    }
  }
  v.note << (v.pass ? "" : "; ") << matches << "/18 entries match";
}

void inequality_criterion(Verdict& v) {
  InequalityReport r = verify_inequalities(200);
  for (const auto& c : r.chains)
    v.require(c.pass, c.name + " fails at d=" + std::to_string(c.first_failure));
  v.require(r.chains.size() == 4, "expected four chains");
  for (int d = 21; d <= 200; ++d) {
    auto t = theta_exact(d), k = kappa_exact(d);
    Rat want(1, d - 1);
    v.require(t && k && *t == want && *k == want, "theta = kappa = 1/(d-1) fails at d=" + std::to_string(d));
  }
  if (v.pass) v.note << "4 chains, exact equality on 21..200";
}

void aut_criterion(Verdict& v) {
  auto expect = [&](const BinaryForm& F, AutClass want, const std::string& label) {
    AutGroup g = automorphisms(F);
    v.require(g.complete && g.classification == want, label + " gives " + to_string(g.classification));
  };
  int n = 0;
  for (int d = 2; d <= 4; ++d) {
    for (int nu = 1; nu <= d + 1; ++nu, n += 2) {
      std::string at = std::to_string(d) + "," + std::to_string(nu);
      expect(qplus(d, nu, squarefree_prefix(d + 1)), AutClass::Klein, "Q+_" + at);
      expect(qminus(d, nu, shifted_squarefree_prefix(d + 1)), AutClass::Klein, "Q-_" + at);
    }
  }
  for (auto [d, p] : std::vector<std::pair<int, long>>{{5, 5}, {5, 7}, {7, 7}})
    expect(lform(d, p), AutClass::Trivial, "L_" + std::to_string(d) + "," + std::to_string(p));
  for (auto [d, p] : std::vector<std::pair<int, long>>{{6, 7}, {6, 11}})
    expect(lform(d, p), AutClass::PlusMinus, "L_" + std::to_string(d) + "," + std::to_string(p));
  if (v.pass) v.note << n + 5 << " groups classified";
}

void iso_criterion(Verdict& v) {
  int unknowns = 0, negatives = 0, positives = 0;
  auto no = [&](const BinaryForm& a, const BinaryForm& b, const std::string& label) {
    IsoVerdict r = is_isomorphic(a, b);
    unknowns += r.kind == IsoKind::Unknown;
    v.require(r.kind == IsoKind::No, label + " gives " + to_string(r.kind));
    ++negatives;
  };
  no(make_form_int({1, 0, 0, 0, 1}), make_form_int({1, 0, 0, 0, 2}), "X^4+Y^4 vs X^4+2Y^4");
  for (FamilyId fam : {FamilyId::qplus(), FamilyId::qminus()}) {
    auto m = members(fam, 4);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (i != j) no(m[i], m[j], fam.name() + " members " + std::to_string(i + 1) + "," + std::to_string(j + 1));
  }
  no(lform(5, 5), lform(5, 7), "L_5,5 vs L_5,7");

  std::mt19937_64 rng = seeded();
  for (const auto& [name, pool] : family_pools(rng)) {
    for (int t = 0; t < 20; ++t) {
      const BinaryForm& F = pick(pool, rng);
      BinaryForm G = compose(F, random_gamma(rng));
      IsoVerdict r = is_isomorphic(G, F);
      unknowns += r.kind == IsoKind::Unknown;
      bool exact = r.kind == IsoKind::Yes && r.gamma && compose(F, *r.gamma) == G;
      v.require(exact, name + " positive " + std::to_string(t) + " " + F.to_string() + " gives " + to_string(r.kind));
      ++positives;
    }
  }
  v.require(unknowns == 0, std::to_string(unknowns) + " Unknown verdicts");
  v.note << (v.pass ? "" : "; ") << negatives << " No, " << positives << " Yes with verified gamma, " << unknowns
         << " Unknown";
}

void condition_v_criterion(Verdict& v) {
  RegularityTuple lt = regularity(FamilyId::lfamily());
  v.require(lt.kappa.exact && *lt.kappa.exact == 9 && lt.d0 == 1, "L tuple is not kappa=9, d0=1");
  ConditionVReport l = check_condition_v(FamilyId::lfamily(), 7, 300);
  v.require(l.pass, "L counterexample " + l.form + " at (" + std::to_string(l.x) + "," + std::to_string(l.y) + ")");
  RegularityTuple qt = regularity(FamilyId::qminus());
  v.require(std::fabs(qt.kappa.value - 4 * kE) < 1e-15L && qt.d0 == 2, "Q- tuple is not kappa=2e*lambda, d0=2");
  ConditionVReport q = check_condition_v(FamilyId::qminus(), 8, 300);
  v.require(q.pass, "Q- counterexample " + q.form + " at (" + std::to_string(q.x) + "," + std::to_string(q.y) + ")");
  v.require(l.forms_checked == 7 && q.forms_checked == 12, "unexpected member counts");
  v.note << (v.pass ? "" : "; ") << l.forms_checked << " L forms, " << q.forms_checked << " Q- forms, "
         << l.points_checked + q.points_checked << " points";
}

void leading_constant_criterion(Verdict& v) {
  BinaryForm F = qplus(2, 3, squarefree_prefix(3));
  long double A = area(F, 1e-8L).value;
  long double K = std::sqrt(2.0L) * boost::math::ellint_1(1 / std::sqrt(2.0L));
  v.require(std::fabs(A - K) < 1e-7L, "A_F disagrees with sqrt(2) K(1/sqrt(2))");
  long double target = A / 4;
  auto deviation = [&](long long B) {
    CountReport r = count_nn(F, B);
    v.require(r.rigorous, "count at B=" + std::to_string(B) + " is not rigorous");
    return std::fabs(r.count / std::sqrt((long double)B) / target - 1);
  };
  long double small = deviation(10000), large = deviation(100000000);
  v.require(large < 0.15L, "deviation at 1e8 is " + std::to_string((double)large));
  v.require(large < small, "deviation does not shrink from 1e4 to 1e8");
  v.note << (v.pass ? "" : "; ") << "A_F=" << (double)A << ", deviation " << (double)small << " at 1e4, "
         << (double)large << " at 1e8";
}

void family_fit_criterion(Verdict& v) {
  const long long B = 100000000;
  CountReport r = count_r(FamilyId::qplus(), 4, B, 0);
  long double ratio = r.count / std::sqrt((long double)B);
  long double target = coef_qplus(2, 1e-8L).value / 4;
  long double dev = std::fabs(ratio / target - 1);
  v.require(dev <= 0.20L, "deviation " + std::to_string((double)dev));
  v.note << (v.pass ? "" : "; ") << "ratio " << (double)ratio << " vs " << (double)target << " (" << (double)(dev * 100)
         << "%)";
}

void area_sum_criterion(Verdict& v) {
  const long double lp = 381.0L / 230, lm = 2;
  long double worst_plus = 1e9L, worst_minus = 1e9L;
  for (int d = 2; d <= 12; ++d) {
    long double c = coef_qplus(d, 1e-6L).value;
    long double lo = kPi * std::sqrt((long double)d) / std::sqrt(lp);
    long double hi = kPi * std::sqrt(kE) * (std::sqrt((long double)d) + 1);
    v.require(lo < c && c < hi, "coef_qplus(" + std::to_string(d) + ") = " + std::to_string((double)c));
    worst_plus = std::min({worst_plus, c - lo, hi - c});
  }
  for (int d = 2; d <= 10; ++d) {
    long double c = coef_qminus(d, 1e-6L).value;
    long double lo = kPi * std::sqrt((long double)d) / std::sqrt(lm);
    v.require(c >= lo, "coef_qminus(" + std::to_string(d) + ") = " + std::to_string((double)c));
    worst_minus = std::min(worst_minus, c - lo);
  }
  v.note << (v.pass ? "" : "; ") << "smallest margins " << (double)worst_plus << " (plus), " << (double)worst_minus
         << " (minus)";
}

void l_area_criterion(Verdict& v) {
  const long double slack = 0.3L;
  std::vector<std::pair<int, long>> cases{{20, 23}, {40, 41}, {60, 61}};
  std::vector<long double> logd, logp;
  std::ostringstream scaled;
  for (auto [d, p] : cases) {
    long double dl = d;
    QuadratureResult r = area_L(d, p, 1e-6L);
    long double s = dl * r.value;
    scaled << (scaled.tellp() ? ", " : "") << s;
    v.require(5.1L <= s && s <= 55.1L, "d*area_L(" + std::to_string(d) + ") = " + std::to_string((double)s));
    long double window_p = 0;
    for (const auto& piece : r.pieces) {
      const std::string& label = piece.label;
      std::string at = " (d=" + std::to_string(d) + ")";
      if (label == "window_p") window_p = piece.value;
      if (d == 20) continue;
      bool window = label.rfind("window_", 0) == 0 && label != "window_p";
      if (d == 60 && !window) continue;
      if (label == "tail_minus" || label == "tail_plus")
        v.require(piece.value <= (1 + slack) * kE / dl, label + at);
      else if (label == "middle")
        v.require(piece.value <= (1 + slack) * kE * kE / dl, label + at);
      else if (window)
        v.require((1 - slack) * kE * kE / (dl * dl) <= piece.value && piece.value <= (1 + slack) * 4 * kE * kE / (dl * dl),
                  label + at);
    }
    v.require(window_p > 0, "no window around p");
    logd.push_back(std::log(dl));
    logp.push_back(std::log(window_p));
  }
  // least-squares slope of log(window_p) against log d; O(1/d^2) allows at most -2 * (1 - slack)
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < logd.size(); ++i) mx += logd[i] / logd.size(), my += logp[i] / logd.size();
  long double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < logd.size(); ++i) sxy += (logd[i] - mx) * (logp[i] - my), sxx += (logd[i] - mx) * (logd[i] - mx);
  long double slope = sxy / sxx, C = std::exp(my - slope * mx);
  v.require(slope <= -2 * (1 - slack), "window_p slope " + std::to_string((double)slope));
  long double wp40 = std::exp(logp[1]);
  long double C2 = std::exp(my + 2 * mx);  // best constant for an exact 1/d^2 law
  v.require(wp40 <= (1 + slack) * C2 / 1600, "window_p at d=40 above the fitted C/d^2");
  v.note << (v.pass ? "" : "; ") << "d*area " << scaled.str() << "; window_p slope " << (double)slope
         << ", C=" << (double)C2 << " (free fit C=" << (double)C << ")";
}

void jb_criterion(Verdict& v) {
  BinaryForm q3 = qplus(2, 3, squarefree_prefix(3)), q1 = qplus(2, 1, squarefree_prefix(3));
  v.require(evaluate(q3, 5, 3).value == 1462 && evaluate(q1, 4, 3).value == 1462, "(3,4,5) does not give 1462");
  v.require(common_values(q3, q1, 1462).contains(1462), "1462 missing from the common values");
  CheckOutcome c = jb_identity_check(50);
  v.require(c.pass && c.observed == 50, c.witness.value_or("jb check failed"));
  v.note << (v.pass ? "" : "; ") << (long long)c.observed << " common values confirmed";
}

void lemma_criterion(Verdict& v) {
  int n = 0;
  for (const std::string name : {"stirling", "zeta-tail", "hooley", "minoration", "factorielles", "root-proximity"})
    for (const auto& c : run_checks(name, kDefaultSeed)) {
      ++n;
      v.require(c.pass, c.name + " [" + c.parameters + "] " + c.witness.value_or(""));
      if (c.name == "hooley-sweep") v.require(c.parameters.find("instances=100") != std::string::npos, "sweep size");
    }
  CheckOutcome ex = hooley_count_check(std::sqrt(2.0L), 1, 3, 1, 8);
  v.require(ex.observed == 3 && ex.bound == 19, "sqrt(2) example");
  v.require(n == 8, "expected 8 outcomes, got " + std::to_string(n));
  v.note << (v.pass ? "" : "; ") << n << " outcomes";
}

void oracle_criterion(Verdict& v) {
  std::mt19937_64 rng = seeded();
  std::uniform_int_distribution<long long> Bdist(0, 10000), Xdist(1, 50);
  int compared = 0;
  for (const auto& [name, pool] : family_pools(rng)) {
    for (int t = 0; t < 10; ++t) {
      const BinaryForm& F = pick(pool, rng);
      long long B = Bdist(rng), X = Xdist(rng);
      std::set<std::int64_t> naive;
      for (long long x = -X; x <= X; ++x)
        for (long long y = -X; y <= X; ++y) {
          Int val = evaluate(F, x, y).value;
          if (abs(val) <= Int((long)B)) naive.insert(val.get_si());
        }
      BoxBound box;
      box.X = X;
      ValueSet got = represented_values(F, B, box);
      v.require(got.values() == std::vector<std::int64_t>(naive.begin(), naive.end()),
                name + " form " + F.to_string() + " B=" + std::to_string(B) + " X=" + std::to_string(X));
      ++compared;
    }
  }
  int primes = 0;
  for (std::uint64_t p : primes_up_to(99)) {
    ++primes;
    v.require(evaluate(cyclotomic_form((long)p), 1, 1).value == (long)p, "Phi_" + std::to_string(p) + "(1,1)");
  }
  v.note << (v.pass ? "" : "; ") << compared << " scans equal the naive loop, " << primes << " primes";
}

struct Criterion {
  int id;
  std::string title;
  double budget;  // seconds
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> all{
      {1, "exponent table", 1, exponent_table_criterion},
      {2, "inequality chains", 1, inequality_criterion},
      {3, "automorphism groups", 30, aut_criterion},
      {4, "isomorphism verdicts", 600, iso_criterion},
      {5, "condition (v) exhaustive", 300, condition_v_criterion},
      {6, "leading constant for Q+_{2,3}", 120, leading_constant_criterion},
      {7, "R_{>=4}(Q+) fit", 300, family_fit_criterion},
      {8, "area-sum bounds", 300, area_sum_criterion},
      {9, "L-area window and pieces", 300, l_area_criterion},
      {10, "Pythagorean common values", 60, jb_criterion},
      {11, "lemma suites", 120, lemma_criterion},
      {12, "oracle equivalence", 120, oracle_criterion},
  };
  int failed = 0;
  for (const auto& c : all) {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget) v.require(false, "took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget));
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << v.note.str() << " ["
              << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s]" << std::endl;
    std::cout.unsetf(std::ios::fixed);
    std::cout.precision(6);
  }
  std::cout << (all.size() - failed) << "/" << all.size() << " criteria pass" << std::endl;
  return failed ? 1 : 0;
}

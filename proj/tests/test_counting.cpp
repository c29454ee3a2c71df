#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "formlab/counting.hpp"
#include "formlab/error.hpp"
#include "formlab/families.hpp"

using namespace formlab;

namespace {

// Plain double loop with exact big-integer evaluation.
std::set<long long> naive_values(const BinaryForm& F, long long B, long long X, long long min_max = 0) {
  std::set<long long> out;
  for (long long x = -X; x <= X; ++x)
    for (long long y = -X; y <= X; ++y) {
      if (std::max(std::llabs(x), std::llabs(y)) < min_max) continue;
      Int v = evaluate(F, x, y).value;
      if (abs(v) <= Int((long)B)) out.insert(v.get_si());
    }
  return out;
}

BinaryForm random_form(std::mt19937_64& rng, int d, int height) {
  std::uniform_int_distribution<int> coef(-height, height);
  for (;;) {
    std::vector<Rat> c;
    for (int i = 0; i <= d; ++i) c.emplace_back(coef(rng));
    if (c[0] == 0) c[0] = 1;
    BinaryForm F(c);
    if (F.nonzero_disc()) return F;
  }
}

BinaryForm pick(const std::vector<BinaryForm>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

}  // namespace

TEST_CASE("search boxes") {
  BinaryForm q = make_form_int({1, 0, 3, 0, 2});
  BoxBound b = search_box(q, 100, std::nullopt);
  CHECK(b.X == 4);
  CHECK(b.rigorous);
  CHECK(b.source == BoxSource::DefiniteMinimum);
  CHECK(*b.c_F <= 1);
  CHECK(*b.c_F > Rat(9, 10));

  BoxBound l = search_box(lform(5, 5), 10, regularity(FamilyId::lfamily()));
  CHECK(l.X == 17);
  CHECK(l.rigorous);
  CHECK(l.source == BoxSource::ConditionV);

  BoxBound cubic = search_box(make_form_int({1, 0, 0, 1}), 10, std::nullopt);
  CHECK_FALSE(cubic.rigorous);
  CHECK(cubic.source == BoxSource::UserCap);
  CHECK_FALSE(definite_minimum(make_form_int({1, 0, 0, 1})).has_value());
}

TEST_CASE("certified definite minimum") {
  // min over the square boundary by dense sampling is an upper bound for the certificate
  std::vector<BinaryForm> forms{make_form_int({1, 0, 3, 0, 2}), make_form_int({1, 1, 1}), make_form_int({3, -2, 5, 1, 4}),
                                make_form_int({1, 0, 0, 0, 1}), qplus(3, 2, squarefree_prefix(4))};
  for (const auto& F : forms) {
    auto c = definite_minimum(F);
    REQUIRE(c.has_value());
    long double sampled = INFINITY;
    for (int i = -4000; i <= 4000; ++i) {
      Rat t(i, 4000);
      sampled = std::min({sampled, std::fabs(to_long_double(F.at(1, t))), std::fabs(to_long_double(F.at(t, 1)))});
    }
    CHECK(to_long_double(*c) <= sampled);
    CHECK(to_long_double(*c) >= 0.9L * sampled - 1e-9L);
  }
}

TEST_CASE("represented values examples") {
  BinaryForm q = make_form_int({1, 0, 3, 0, 2});
  ValueSet v = represented_values(q, 100, search_box(q, 100, std::nullopt));
  CHECK(v.values() == std::vector<std::int64_t>{0, 1, 2, 6, 16, 30, 32, 45, 81, 96});
  CHECK(count_nn(q, 100).count == 10);
  CHECK(count_nn(q, 100).rigorous);
  CHECK(count_nn(q, 0).count == 1);
  BinaryForm L = lform(5, 5);
  ValueSet lv = represented_values(L, 10, search_box(L, 10, regularity(FamilyId::lfamily())));
  CHECK(lv.values() == std::vector<std::int64_t>{-1, 0, 1});
}

TEST_CASE("common values") {
  CountReport c = count_common(make_form_int({1, 0, 0, 1}), make_form_int({1, 0, 0, 2}), 2);
  CHECK(c.count == 5);
  CHECK_FALSE(c.rigorous);
  SquarefreeSequence seq = squarefree_prefix(3);
  BinaryForm q3 = qplus(2, 3, seq), q1 = qplus(2, 1, seq);
  CHECK(evaluate(q3, 5, 3).value == 1462);
  CHECK(evaluate(q1, 4, 3).value == 1462);
  BoxBound b3 = search_box(q3, 1462, std::nullopt), b1 = search_box(q1, 1462, std::nullopt);
  ValueSet both = represented_values(q3, 1462, b3).intersect(represented_values(q1, 1462, b1));
  CHECK(both.contains(1462));
  CHECK(count_common(q3, q1, 1462).count == (long long)both.size());
  CHECK(count_common(q3, q3, 5000).count == count_nn(q3, 5000).count);
}

TEST_CASE("count_m small cases") {
  BinaryForm F = make_form_int({1, 0, 0, 2});
  CHECK(count_m(F, F, 0, false).count == 1);
  CHECK(count_m(F, F, 0, true).count == 0);
  // brute force over the 81 pairs of points
  long long want = 0, want_star = 0;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c)
        for (int e = -1; e <= 1; ++e) {
          Int v1 = evaluate(F, a, b).value, v2 = evaluate(F, c, e).value;
          if (v1 == v2) {
            ++want;
            if (v1 != 0) ++want_star;
          }
        }
  CHECK(count_m(F, F, 1, false).count == want);
  CHECK(count_m(F, F, 1, true).count == want_star);
  CHECK_THROWS_AS(count_m(F, make_form_int({1, 0, 1}), 1, false), Error);
}

TEST_CASE("count_r examples") {
  CountReport r = count_r(FamilyId::lfamily(), 5, 10, 0);
  CHECK(r.count == 3);
  CHECK_FALSE(r.rigorous);
  CHECK(r.warning.empty());
  CountReport rig = count_r(FamilyId::lfamily(), 5, 1000, 10);
  CHECK(rig.rigorous);
  CountReport cy = count_r(FamilyId::cyclotomic(), 4, 1000, 0, {1, 0, 60});
  CHECK_FALSE(cy.rigorous);
  CHECK(cy.warning.rfind("SmallPointUnbounded", 0) == 0);
  // no members of degree 3 in Q+, nothing below the cutoff at B = 1 apart from units and zero
  CountReport tiny = count_r(FamilyId::qplus(), 4, 1, 0);
  CHECK(tiny.count == 2);
}

TEST_CASE("count_r against a naive union") {
  // Q+, degrees >= 4, B = 2000, A = 2: exact union over every member with a box of its own
  const long long B = 2000, A = 2;
  std::set<long long> want;
  for (int deg = 4; deg <= 12; ++deg)
    for (const auto& F : members(FamilyId::qplus(), deg)) {
      auto s = naive_values(F, B, 12, A);
      want.insert(s.begin(), s.end());
    }
  CountReport r = count_r(FamilyId::qplus(), 4, B, A);
  CHECK(r.rigorous);
  CHECK(r.count == (long long)want.size());

  std::set<long long> lwant;
  for (int deg = 5; deg <= 9; ++deg)
    for (const auto& F : members(FamilyId::lfamily(), deg)) {
      auto s = naive_values(F, 500, 40, 10);
      lwant.insert(s.begin(), s.end());
    }
  lwant.insert(0);
  CountReport lr = count_r(FamilyId::lfamily(), 5, 500, 10);
  CHECK(lr.rigorous);
  CHECK(lr.count == (long long)lwant.size());
}

TEST_CASE("stripe scan equals naive oracle") {
  std::mt19937_64 rng(0xF0EB);
  std::uniform_int_distribution<long long> Bdist(0, 10000), Xdist(1, 50);
  std::vector<std::vector<BinaryForm>> fams(5);
  for (int deg = 4; deg <= 8; deg += 2) {
    for (auto& F : members(FamilyId::qplus(), deg)) fams[0].push_back(F);
    for (auto& F : members(FamilyId::qminus(), deg)) fams[1].push_back(F);
  }
  for (int deg = 5; deg <= 8; ++deg)
    for (auto& F : members(FamilyId::lfamily(), deg)) fams[2].push_back(F);
  for (int deg = 2; deg <= 8; ++deg)
    for (auto& F : members(FamilyId::cyclotomic(), deg)) fams[3].push_back(F);
  for (int i = 0; i < 10; ++i) fams[4].push_back(random_form(rng, 3 + i % 4, 30));
  for (const auto& fam : fams) {
    for (int t = 0; t < 10; ++t) {
      BinaryForm F = pick(fam, rng);
      long long B = Bdist(rng), X = Xdist(rng);
      BoxBound box;
      box.X = X;
      auto want = naive_values(F, B, X);
      ValueSet got = represented_values(F, B, box);
      CHECK(got.values() == std::vector<std::int64_t>(want.begin(), want.end()));
      ValueSet par = represented_values(F, B, box, 0, 3);
      CHECK(par.values() == got.values());
    }
  }
}

TEST_CASE("counting properties") {
  SquarefreeSequence seq = squarefree_prefix(4);
  std::vector<BinaryForm> forms{qplus(2, 3, seq), qplus(2, 1, seq), make_form_int({1, 0, 0, 2}),
                                make_form_int({1, -1, 0, 3}), qminus(2, 1, shifted_squarefree_prefix(3))};
  CountOptions opt;
  opt.box_cap = 60;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    long long prev = -1;
    for (long long B : {0LL, 10LL, 100LL, 1000LL, 5000LL}) {
      long long c = count_nn(forms[i], B, opt).count;
      CHECK(c >= prev);
      prev = c;
    }
    for (std::size_t j = 0; j < forms.size(); ++j) {
      if (forms[i].degree() != forms[j].degree()) continue;
      long long ab = count_common(forms[i], forms[j], 3000, opt).count;
      CHECK(ab == count_common(forms[j], forms[i], 3000, opt).count);
      CHECK(ab <= std::min(count_nn(forms[i], 3000, opt).count, count_nn(forms[j], 3000, opt).count));
    }
  }
  // Q+ values are nonnegative
  ValueSet qv = represented_values(forms[0], 100000, search_box(forms[0], 100000, std::nullopt));
  CHECK(qv.values().front() >= 0);
  // count_r is monotone in B, d and A
  CHECK(count_r(FamilyId::qplus(), 4, 500, 2).count <= count_r(FamilyId::qplus(), 4, 5000, 2).count);
  CHECK(count_r(FamilyId::qplus(), 6, 5000, 2).count <= count_r(FamilyId::qplus(), 4, 5000, 2).count);
  CHECK(count_r(FamilyId::lfamily(), 5, 5000, 12).count <= count_r(FamilyId::lfamily(), 5, 5000, 10).count);
}

TEST_CASE("large-y counts") {
  // X^2 + Y^2 type definite form: |f| >= 1 on R, so delta > 1 leaves nothing
  CHECK(count_large_y(make_form_int({1, 0, 3, 0, 2}), 1000, 1.5L, 10000).count == 0);
  CHECK(count_large_y(make_form_int({1, 0, 0, 2}), 1000, 1e9L, 100).count == 0);
  BinaryForm F = make_form_int({1, 0, 0, 2});
  long long c1 = count_large_y(F, 1000, 10, 100000).count;
  long long c2 = count_large_y(F, 1000, 10, 1000000).count;
  CHECK(c1 <= c2);
  CHECK(c2 == count_large_y(F, 1000, 10, 1000000, {2, 0, 0}).count);
  // naive check on a short range
  long long y_lo = (long long)std::ceil(std::cbrt(1000.0) * 3);
  long long naive = 0;
  for (long long y = y_lo; y <= 300; ++y)
    for (long long x = -2 * y; x <= 2 * y; ++x) {
      Int v = evaluate(F, x, y).value;
      if (v != 0 && abs(v) <= Int(1000)) naive += 2;
    }
  CHECK(count_large_y(F, 1000, 3, 300).count == naive);
}

TEST_CASE("fit rows") {
  BinaryForm q = make_form_int({1, 0, 3, 0, 2});
  auto rows = fit_report([&](long long B) { return count_nn(q, B); }, {100, 10000}, Rat(0));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ratio == rows[0].count);
  auto half = fit_report([&](long long B) { return count_nn(q, B); }, {10000}, Rat(1, 2));
  CHECK((double)half[0].ratio == doctest::Approx(half[0].count / 100.0));
  CHECK_THROWS_AS(fit_report([&](long long B) { return count_nn(q, B); }, {100, 100}, Rat(0)), Error);
}

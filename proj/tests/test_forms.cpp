#include <cmath>
#include <random>

#include "doctest.h"
#include "formlab/error.hpp"
#include "formlab/forms.hpp"

using namespace formlab;

namespace {

// Cubic discriminant by the classical closed formula.
Rat cubic_disc(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

BinaryForm random_form(std::mt19937_64& rng, int d, int height) {
  std::uniform_int_distribution<int> coef(-height, height);
  for (;;) {
    std::vector<Rat> c;
    for (int i = 0; i <= d; ++i) c.emplace_back(coef(rng));
    if (c[0] == 0) c[0] = 1;
    try {
      BinaryForm F(c);
      if (F.nonzero_disc()) return F;
    } catch (const Error&) {
    }
  }
}

RationalMatrix random_matrix(std::mt19937_64& rng, int h) {
  std::uniform_int_distribution<int> e(-h, h);
  for (;;) {
    int a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    if (a * d - b * c != 0) return RationalMatrix(a, b, c, d);
  }
}

}  // namespace

TEST_CASE("make_form flags") {
  BinaryForm f1 = make_form_int({1, 0, 1});
  CHECK(f1.degree() == 2);
  CHECK(f1.integral());
  CHECK(f1.nonzero_disc());
  BinaryForm f2 = make_form_int({1, 0, 0, 2});
  CHECK(f2.degree() == 3);
  CHECK(f2.to_string() == "X^3 + 2*Y^3");
  BinaryForm f3 = make_form_int({1, -2, 1});
  CHECK_FALSE(f3.nonzero_disc());
  CHECK_THROWS_AS(make_form_int({0, 0, 0}), Error);
  BinaryForm half = make_form({Rat(1, 2), Rat(0), Rat(1)});
  CHECK_FALSE(half.integral());
  CHECK_THROWS_AS(half.int_coeffs(), Error);
}

TEST_CASE("evaluate examples") {
  // L_{5,5} as a product of its linear factors.
  BinaryForm L = make_form_int({1, -5});
  for (int n = 0; n <= 3; ++n) L = multiply(L, make_form_int({1, -n}));
  CHECK(evaluate(L, 4, 1).value == -24);
  CHECK(evaluate(L, 0, 0).value == 0);
  BinaryForm phi5 = make_form_int({1, 1, 1, 1, 1});
  CHECK(evaluate(phi5, 1, 1).value == 5);
  CappedInteger big = evaluate(L, Int(1000), Int(1), Int(1000));
  CHECK(big.over_cap);
  CHECK(big.sign == 1);
  CappedInteger neg = evaluate(make_form_int({-1, 0}), Int(5000), Int(0), Int(10));
  CHECK(neg.over_cap);
  CHECK(neg.sign == -1);
}

TEST_CASE("discriminant examples and oracle") {
  CHECK(discriminant(make_form_int({1, 0, 0, 2})) == -108);
  CHECK(discriminant(make_form_int({1, 0, 1})) == -4);
  CHECK(discriminant(make_form_int({1, -2, 1, 0})) == 0);  // (X-Y)^2 X
  CHECK_THROWS_AS(discriminant(make_form_int({1, 1})), Error);
  std::mt19937_64 rng(0xF0EB);
  std::uniform_int_distribution<int> coef(-20, 20);
  for (int trial = 0; trial < 50; ++trial) {
    Rat a(coef(rng)), b(coef(rng)), c(coef(rng)), d(coef(rng));
    if (a == 0 && b == 0 && c == 0 && d == 0) continue;
    BinaryForm F({a, b, c, d});
    CHECK(discriminant(F) == cubic_disc(a, b, c, d));
    CHECK(F.nonzero_disc() == (cubic_disc(a, b, c, d) != 0));
  }
}

TEST_CASE("compose examples") {
  BinaryForm F = make_form_int({3, 1, -4, 7});
  CHECK(compose(F, RationalMatrix::identity()) == F);
  BinaryForm bin = make_form_int({3, 0, 0, 0, 5});
  BinaryForm got = compose(bin, RationalMatrix(2, 0, 0, 7));
  CHECK(got == make_form_int({3 * 16, 0, 0, 0, 5 * 2401}));
  std::mt19937_64 rng(0xF0EB);
  for (int trial = 0; trial < 20; ++trial) {
    BinaryForm G = random_form(rng, 4, 9);
    RationalMatrix g1 = random_matrix(rng, 3), g2 = random_matrix(rng, 3);
    CHECK(compose(compose(G, g1), g2) == compose(G, g1 * g2));
  }
}

TEST_CASE("homogeneity and parity") {
  std::mt19937_64 rng(0xF0EB);
  std::uniform_int_distribution<int> pt(-40, 40);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + trial % 6;
    BinaryForm F = random_form(rng, d, 50);
    long long x = pt(rng), y = pt(rng);
    Int base = evaluate(F, x, y).value;
    for (int lam = -3; lam <= 3; ++lam) {
      Int lp;
      mpz_pow_ui(lp.get_mpz_t(), Int(lam).get_mpz_t(), d);
      CHECK(evaluate(F, lam * x, lam * y).value == lp * base);
    }
    Int sign = (d % 2 == 0) ? 1 : -1;
    CHECK(evaluate(F, -x, -y).value == sign * base);
  }
}

TEST_CASE("discriminant transformation law") {
  std::mt19937_64 rng(0xF0EB);
  for (int trial = 0; trial < 25; ++trial) {
    int d = 2 + trial % 4;
    BinaryForm F = random_form(rng, d, 12);
    RationalMatrix g = random_matrix(rng, 3);
    Rat lhs = discriminant(compose(F, g));
    Rat rhs = rat_pow(g.det(), d * (d - 1)) * discriminant(F);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("roots with exact tags") {
  BinaryForm q = make_form_int({1, 0, 3, 0, 2});  // (X^2+Y^2)(X^2+2Y^2)
  RootSet rs = roots(q);
  REQUIRE(rs.points.size() == 4);
  std::vector<Int> ms;
  for (const auto& p : rs.points) {
    CHECK(p.tag.kind == TagKind::QuadraticSurd);
    CHECK(p.tag.surd.r == 0);
    CHECK(p.tag.surd.imaginary());
    CHECK(std::fabs(std::abs(p.z) - std::sqrt((long double)(-p.tag.surd.m.get_si())) * std::fabs(to_long_double(p.tag.surd.s))) < 1e-15L);
    ms.push_back(p.tag.surd.m);
  }
  std::sort(ms.begin(), ms.end());
  CHECK(ms == std::vector<Int>{-2, -2, -1, -1});

  BinaryForm L = make_form_int({1, -5});
  for (int n = 0; n <= 3; ++n) L = multiply(L, make_form_int({1, -n}));
  RootSet lr = roots(L);
  std::vector<Rat> vals;
  for (const auto& p : lr.points) {
    CHECK(p.tag.kind == TagKind::Rational);
    vals.push_back(p.tag.value);
  }
  CHECK(vals == std::vector<Rat>{0, 1, 2, 3, 5});

  BinaryForm xyxmy = make_form_int({0, 1, -1, 0});  // XY(X-Y)
  RootSet r3 = roots(xyxmy);
  REQUIRE(r3.points.size() == 3);
  CHECK(r3.points.back().infinite);
  CHECK(r3.points[0].tag.value == 0);
  CHECK(r3.points[1].tag.value == 1);

  CHECK_THROWS_AS(roots(make_form_int({1, -2, 1})), Error);

  BinaryForm irr = make_form_int({1, 0, 0, -2});  // t^3 - 2
  RootSet ir = roots(irr);
  int real_count = 0;
  for (const auto& p : ir.points) {
    CHECK(p.tag.kind == TagKind::NumericOnly);
    real_count += p.real;
  }
  CHECK(real_count == 1);

  BinaryForm mixed = make_form_int({2, -1, -6});  // (2t+3)(t-2)
  RootSet mr = roots(mixed);
  CHECK(mr.points[0].tag.value == Rat(-3, 2));
  CHECK(mr.points[1].tag.value == 2);

  BinaryForm realsurd = make_form_int({3, 0, -10, 0, 3});  // (3t^2-1)(t^2-3)
  RootSet rr = roots(realsurd);
  for (const auto& p : rr.points) {
    CHECK(p.tag.kind == TagKind::QuadraticSurd);
    CHECK(p.tag.surd.m == 3);
  }
}

TEST_CASE("root coefficient duality") {
  std::mt19937_64 rng(0xF0EB);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 3 + (trial * 7) % 18;
    BinaryForm F = random_form(rng, d, 1000000);
    RootSet rs = roots(F);
    std::vector<std::complex<long double>> poly{1};
    for (const auto& p : rs.points) {
      std::vector<std::complex<long double>> next(poly.size() + 1, 0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i] += poly[i];
        next[i + 1] -= poly[i] * p.z;
      }
      poly = next;
    }
    long double lead = to_long_double(F.coeff(0));
    long double scale = 0;
    for (const auto& c : F.coeffs()) scale = std::max(scale, std::fabs(to_long_double(c)));
    for (int i = 0; i <= d; ++i) {
      long double diff = std::abs(poly[i] * lead - (std::complex<long double>)to_long_double(F.coeff(i)));
      CHECK(diff <= 1e-8L * scale);
    }
  }
}

TEST_CASE("root proximity constants") {
  ProximityConstants pc = root_proximity_constants(make_form_int({1, 0, 1}));
  CHECK(pc.c1 == doctest::Approx(1.0).epsilon(1e-6));
  BinaryForm t3 = make_form_int({1, -3, 2, 0});  // t(t-1)(t-2)
  ProximityConstants pt = root_proximity_constants(t3);
  CHECK(pt.c1 == 1);
  CHECK((double)pt.c2 == doctest::Approx(4.0).epsilon(1e-8));

  std::mt19937_64 rng(0xF0EB);
  std::uniform_real_distribution<double> tdist(-10, 10);
  for (const auto& F : {t3, make_form_int({1, 0, 0, 2}), make_form_int({2, 1, -5, 3, 1}),
                        make_form_int({1, 0, 3, 0, 2}), make_form_int({1, 0, -7, 0, 1})}) {
    ProximityConstants c = root_proximity_constants(F);
    RootSet rs = roots(F);
    for (int i = 0; i < 1000; ++i) {
      long double t = tdist(rng);
      long double ft = 0;
      for (const auto& co : F.coeffs()) ft = ft * t + to_long_double(co);
      long double best = INFINITY;
      for (const auto& p : rs.points) best = std::min(best, std::abs(std::complex<long double>(t) - p.z));
      CHECK(best <= c.c2 * std::fabs(ft) * (1 + 1e-12L));
    }
  }
}

TEST_CASE("integer evaluator agrees with exact evaluation") {
  std::mt19937_64 rng(0xF0EB);
  std::uniform_int_distribution<int> pt(-300, 300);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 3 + trial % 9;
    BinaryForm F = random_form(rng, d, 1000);
    IntegerEvaluator ev(F);
    for (int k = 0; k < 500; ++k) {
      long long x = pt(rng), y = pt(rng) / (1 + k % 50);
      Int v = evaluate(F, x, y).value;
      std::int64_t bound = (k % 2) ? 1000000 : 4000000000000ll;
      auto got = ev.value_within(x, y, bound);
      if (abs(v) <= bound) {
        REQUIRE(got.has_value());
        CHECK(Int((long)*got) == v);
      } else {
        CHECK_FALSE(got.has_value());
      }
    }
  }
}

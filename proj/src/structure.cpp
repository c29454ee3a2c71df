#include "formlab/structure.hpp"

#include <algorithm>
#include <numeric>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <set>

#include "formlab/error.hpp"

namespace formlab {

namespace {

using cld = std::complex<long double>;

// Element alpha + beta * w of Q(w), w^2 = m.
struct QuadPoint {
  bool infinite = false;
  Rat alpha, beta;
  Int m = 0;  // 0 for rational points
  cld z;
};

QuadPoint from_root(const ProjRoot& r) {
  QuadPoint p;
  p.z = r.z;
  if (r.infinite) {
    p.infinite = true;
    return p;
  }
  if (r.tag.kind == TagKind::Rational) {
    p.alpha = r.tag.value;
  } else {
    p.alpha = r.tag.surd.r;
    p.beta = r.tag.surd.s;
    p.m = r.tag.surd.m;
  }
  return p;
}

bool same_field(const Int& m1, const Int& m2) {
  if (m1 == 0 || m2 == 0) return m1 == m2;
  Int prod = m1 * m2;
  if (prod < 0) return false;
  return mpz_perfect_square_p(prod.get_mpz_t()) != 0;
}

// Rational t with sqrt(m2) = t * sqrt(m1).
Rat field_ratio(const Int& m1, const Int& m2) {
  Int prod = m1 * m2, root;
  mpz_sqrt(root.get_mpz_t(), prod.get_mpz_t());
  Rat t(root, abs(m1));
  t.canonicalize();
  return t;
}

using Row = std::array<Rat, 4>;

// Rational linear conditions on (a1..a4) forcing h(x) = y.
void add_conditions(const QuadPoint& x, const QuadPoint& y, std::vector<Row>& rows) {
  Rat ya = y.alpha, yb = y.beta;
  if (y.m != 0 && x.m != 0 && y.m != x.m) yb *= field_ratio(x.m, y.m);
  Int m = x.m != 0 ? x.m : y.m;
  if (x.infinite && y.infinite) {
    rows.push_back({0, 0, 1, 0});
  } else if (x.infinite) {
    rows.push_back({1, 0, -ya, 0});
    rows.push_back({0, 0, -yb, 0});
  } else if (y.infinite) {
    rows.push_back({0, 0, x.alpha, 1});
    rows.push_back({0, 0, x.beta, 0});
  } else {
    const Rat &a = x.alpha, &b = x.beta;
    Rat mm(m);
    rows.push_back({a, 1, -(ya * a + yb * b * mm), -ya});
    rows.push_back({b, 0, -(ya * b + yb * a), -yb});
  }
}

// One-dimensional kernel of the rows, or nothing.
std::optional<Row> kernel_line(std::vector<Row> rows) {
  int rank = 0;
  std::array<int, 4> pivot_col{-1, -1, -1, -1};
  for (int col = 0; col < 4 && rank < (int)rows.size(); ++col) {
    int piv = -1;
    for (int r = rank; r < (int)rows.size(); ++r)
      if (rows[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    Rat inv = 1 / rows[rank][col];
    for (auto& v : rows[rank]) v *= inv;
    for (int r = 0; r < (int)rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Rat f = rows[r][col];
      for (int c = 0; c < 4; ++c) rows[r][c] -= f * rows[rank][c];
    }
    pivot_col[rank] = col;
    ++rank;
  }
  if (rank != 3) return std::nullopt;
  int free_col = -1;
  for (int c = 0; c < 4; ++c) {
    bool used = false;
    for (int r = 0; r < rank; ++r) used |= pivot_col[r] == c;
    if (!used) free_col = c;
  }
  Row v{0, 0, 0, 0};
  v[free_col] = 1;
  for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -rows[r][free_col];
  return v;
}

RationalMatrix canonical(const RationalMatrix& g) {
  for (int i = 0; i < 4; ++i)
    if (g.entry(i) != 0) return g.scaled(1 / g.entry(i));
  throw Error("InternalError", "zero matrix");
}

cld apply_numeric(const RationalMatrix& g, const cld& z, bool infinite, bool& out_inf) {
  cld a1 = (long double)to_long_double(g.a1()), a2 = to_long_double(g.a2());
  cld a3 = to_long_double(g.a3()), a4 = to_long_double(g.a4());
  cld num = infinite ? a1 : a1 * z + a2;
  cld den = infinite ? a3 : a3 * z + a4;
  long double scale = std::max(std::abs(num), std::abs(den));
  out_inf = std::abs(den) <= 1e-14L * scale;
  return out_inf ? cld(0) : num / den;
}

// Does h send every root of the source set near some root of the target set?
bool numerically_plausible(const RationalMatrix& g, const RootSet& src, const RootSet& dst) {
  for (const auto& p : src.points) {
    bool inf = false;
    cld w = apply_numeric(g, p.z, p.infinite, inf);
    bool hit = false;
    for (const auto& q : dst.points) {
      if (inf || q.infinite) {
        if (inf && q.infinite) hit = true;
        else if (q.infinite && std::abs(w) > 1e12L) hit = true;
        else if (inf && std::abs(q.z) > 1e12L) hit = true;
      } else if (std::abs(w - q.z) <= 1e-7L * std::max(1.0L, std::abs(q.z))) {
        hit = true;
      }
      if (hit) break;
    }
    if (!hit) return false;
  }
  return true;
}

// Scalar lifts of a canonical homography g with F2 o (lambda g) = F1.
std::vector<RationalMatrix> lifts(const BinaryForm& F1, const BinaryForm& F2, const RationalMatrix& g) {
  BinaryForm G = compose(F2, g);
  int d = F1.degree();
  int k = 0;
  while (F1.coeff(k) == 0) ++k;
  if (G.coeff(k) == 0) return {};
  Rat c = G.coeff(k) / F1.coeff(k);
  for (int i = 0; i <= d; ++i)
    if (G.coeff(i) != c * F1.coeff(i)) return {};
  auto lam = rational_dth_root(1 / c, d);
  if (!lam) return {};
  std::vector<RationalMatrix> out{g.scaled(*lam)};
  if (d % 2 == 0) out.push_back(g.scaled(-*lam));
  return out;
}

struct Anchors {
  std::vector<QuadPoint> points;  // a quadratic point pins down two conditions
  bool exact = false;
};

long double magnitude(const ProjRoot& r) { return r.infinite ? INFINITY : std::abs(r.z); }

std::vector<QuadPoint> tagged(const RootSet& rs, bool rational) {
  std::vector<std::pair<long double, QuadPoint>> v;
  for (const auto& r : rs.points) {
    if (rational ? r.tag.kind == TagKind::Rational : r.tag.kind == TagKind::QuadraticSurd)
      v.push_back({magnitude(r), from_root(r)});
  }
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<QuadPoint> out;
  for (auto& e : v) out.push_back(e.second);
  return out;
}

bool conjugate(const QuadPoint& a, const QuadPoint& b) { return a.m == b.m && a.alpha == b.alpha && a.beta == -b.beta; }

Anchors choose_anchors(const RootSet& rs) {
  Anchors an;
  auto rat = tagged(rs, true);
  auto quad = tagged(rs, false);
  if (rat.size() >= 3) {
    an.points = {rat[0], rat[1], rat[2]};
    an.exact = true;
  } else if (!quad.empty() && !rat.empty()) {
    an.points = {quad[0], rat[0]};
    an.exact = true;
  } else if (!quad.empty()) {
    for (std::size_t j = 1; j < quad.size(); ++j) {
      if (!conjugate(quad[0], quad[j])) {
        an.points = {quad[0], quad[j]};
        an.exact = true;
        break;
      }
    }
  }
  return an;
}

// Exact search over every admissible image of the anchors; complete when the
// anchors are exact.
std::vector<RationalMatrix> exact_candidates(const BinaryForm& F1, const RootSet& r1, const BinaryForm& F2,
                                             const RootSet& r2, const Anchors& an, bool first_only) {
  std::vector<QuadPoint> targets;
  for (const auto& r : r2.points)
    if (r.tag.kind != TagKind::NumericOnly) targets.push_back(from_root(r));
  std::vector<RationalMatrix> found;
  std::set<std::string> seen;
  std::vector<std::size_t> pick(an.points.size());
  auto compatible = [&](const QuadPoint& x, const QuadPoint& y) {
    if ((x.m == 0) != (y.m == 0)) return false;
    return x.m == 0 || same_field(x.m, y.m);
  };
  std::function<bool(std::size_t)> rec = [&](std::size_t level) -> bool {
    if (level == an.points.size()) {
      std::vector<Row> rows;
      for (std::size_t i = 0; i < level; ++i) add_conditions(an.points[i], targets[pick[i]], rows);
      auto v = kernel_line(rows);
      if (!v) return false;
      Rat det = (*v)[0] * (*v)[3] - (*v)[1] * (*v)[2];
      if (det == 0) return false;
      RationalMatrix g = canonical(RationalMatrix((*v)[0], (*v)[1], (*v)[2], (*v)[3]));
      if (!numerically_plausible(g, r1, r2)) return false;
      for (auto& lift : lifts(F1, F2, g)) {
        if (seen.insert(lift.to_string()).second) found.push_back(lift);
      }
      return first_only && !found.empty();
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!compatible(an.points[level], targets[t])) continue;
      bool clash = false;
      for (std::size_t i = 0; i < level; ++i) {
        if (pick[i] == t) clash = true;
        // Conjugate anchors were excluded, so their images may not be conjugate either.
        if (an.points[i].m != 0 && conjugate(targets[pick[i]], targets[t])) clash = true;
      }
      if (clash) continue;
      pick[level] = t;
      if (rec(level + 1)) return true;
    }
    return false;
  };
  rec(0);
  return found;
}

std::array<cld, 2> proj(const ProjRoot& r) {
  if (r.infinite) return {cld(1), cld(0)};
  return {r.z, cld(1)};
}

// Matrix sending (1:0), (0:1), (1:1) to the three given points.
std::array<cld, 4> frame(const std::array<cld, 2>& u1, const std::array<cld, 2>& u2, const std::array<cld, 2>& u3) {
  cld det = u1[0] * u2[1] - u2[0] * u1[1];
  cld l1 = (u3[0] * u2[1] - u2[0] * u3[1]) / det;
  cld l2 = (u1[0] * u3[1] - u3[0] * u1[1]) / det;
  return {l1 * u1[0], l2 * u2[0], l1 * u1[1], l2 * u2[1]};
}

std::array<cld, 4> mul(const std::array<cld, 4>& a, const std::array<cld, 4>& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

std::array<cld, 4> inv(const std::array<cld, 4>& a) {
  cld det = a[0] * a[3] - a[1] * a[2];
  return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

// Numeric triples, rational reconstruction, exact verification.
std::vector<RationalMatrix> numeric_candidates(const BinaryForm& F1, const RootSet& r1, const BinaryForm& F2,
                                               const RootSet& r2, long long den_bound, bool first_only) {
  std::vector<const ProjRoot*> src;
  for (const auto& p : r1.points) src.push_back(&p);
  std::stable_sort(src.begin(), src.end(),
                   [](const ProjRoot* a, const ProjRoot* b) { return magnitude(*a) < magnitude(*b); });
  std::vector<RationalMatrix> found;
  std::set<std::string> seen;
  if (src.size() < 3 || r2.points.size() < 3) return found;
  auto S = inv(frame(proj(*src[0]), proj(*src[1]), proj(*src[2])));
  std::size_t n = r2.points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        auto M = mul(frame(proj(r2.points[i]), proj(r2.points[j]), proj(r2.points[k])), S);
        std::size_t big = 0;
        for (std::size_t e = 1; e < 4; ++e)
          if (std::abs(M[e]) > std::abs(M[big])) big = e;
        cld scale = M[big];
        bool real = true;
        std::array<long double, 4> re;
        for (std::size_t e = 0; e < 4; ++e) {
          cld v = M[e] / scale;
          if (std::fabs(v.imag()) > 1e-9L) real = false;
          re[e] = v.real();
        }
        if (!real) continue;
        std::size_t first = 0;
        while (first < 4 && std::fabs(re[first]) < 1e-12L) ++first;
        if (first == 4) continue;
        long double f = re[first];
        std::array<Rat, 4> q;
        for (std::size_t e = 0; e < 4; ++e)
          q[e] = std::fabs(re[e] / f) < 1e-12L ? Rat(0) : best_rational(re[e] / f, Int((long)den_bound));
        if (q[0] * q[3] - q[1] * q[2] == 0) continue;
        RationalMatrix g(q[0], q[1], q[2], q[3]);
        if (!numerically_plausible(g, r1, r2)) continue;
        for (auto& lift : lifts(F1, F2, g))
          if (seen.insert(lift.to_string()).second) found.push_back(lift);
        if (first_only && !found.empty()) return found;
      }
  return found;
}

bool is_binomial(const BinaryForm& F) {
  int d = F.degree();
  if (F.coeff(0) == 0 || F.coeff(d) == 0) return false;
  for (int i = 1; i < d; ++i)
    if (F.coeff(i) != 0) return false;
  return true;
}

bool all_split(const RootSet& rs) { return rs.all_rational(); }

std::vector<ProjPoint> proj_points(const RootSet& rs) {
  std::vector<ProjPoint> pts;
  for (const auto& r : rs.points) pts.push_back(r.infinite ? ProjPoint::inf() : ProjPoint::of(r.tag.value));
  return pts;
}

std::vector<Rat> bir_of(const std::vector<ProjPoint>& pts) {
  std::vector<Rat> out;
  std::size_t n = pts.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          auto cr = cross_ratio(pts[a], pts[b], pts[c], pts[d]);
          if (cr) out.push_back(*cr);
        }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void collect_primes(const Int& z, std::set<long>& primes) {
  Int n = abs(z);
  for (long p = 2; n > 1 && p < 100000; ++p) {
    if (n % p != 0) continue;
    primes.insert(p);
    while (n % p == 0) n /= p;
  }
}

std::vector<int> valuation_multiset(const std::vector<Rat>& bir, long p) {
  std::vector<int> s;
  for (const auto& t : bir) s.push_back(vp(t, p));
  std::sort(s.begin(), s.end());
  return s;
}

IsoVerdict no(NoCertificate c, std::string details, long prime = 0) {
  IsoVerdict v;
  v.kind = IsoKind::No;
  v.certificate = c;
  v.prime = prime;
  v.details = std::move(details);
  return v;
}

IsoVerdict yes(const RationalMatrix& g) {
  IsoVerdict v;
  v.kind = IsoKind::Yes;
  v.gamma = g;
  return v;
}

void require_squarefree(const BinaryForm& F) {
  if (!F.nonzero_disc()) throw Error("RepeatedRoot", "form has a repeated root: " + F.to_string());
}

IsoVerdict decide(const BinaryForm& F1, const BinaryForm& F2, const IsoOptions& opts, bool allow_swap);

// Quadratics: F2 o gamma has discriminant det(gamma)^2 disc(F2), so the ratio of discriminants must be a
// square. When it is, any v with F2(v) = F1(1,0) extends to gamma = [v | s v + t v'] with v' orthogonal to v.
IsoVerdict decide_quadratic(const BinaryForm& F1, const BinaryForm& F2, long long height) {
  if (!rational_dth_root(discriminant(F1) / discriminant(F2), 2))
    return no(NoCertificate::DiscriminantClass, "discriminant ratio is not a rational square");
  // move a point where F1 does not vanish to (1,0)
  const RationalMatrix shifts[3] = {RationalMatrix::identity(), RationalMatrix(0, 1, 1, 0), RationalMatrix(1, 0, 1, 1)};
  for (const auto& delta : shifts) {
    BinaryForm G = compose(F1, delta);
    const Rat a = G.coeff(0), half_b = G.coeff(1) / 2, c = G.coeff(2);
    if (a == 0) continue;
    const Rat &al = F2.coeff(0), half_be = F2.coeff(1) / 2, ga = F2.coeff(2);
    for (long long r = 1; r <= height; ++r) {
      const Rat target = a * Rat((long)(r * r));
      for (long long p = -height; p <= height; ++p)
        for (long long q = -height; q <= height; ++q) {
          if (std::gcd(std::gcd(std::llabs(p), std::llabs(q)), r) != 1) continue;
          if (F2.at(Rat((long)p), Rat((long)q)) != target) continue;
          Rat vx((long)p, (long)r), vy((long)q, (long)r);
          vx.canonicalize();
          vy.canonicalize();
          // Gram(F2) v, rotated by a quarter turn, is orthogonal to v
          Rat g1 = al * vx + half_be * vy, g2 = half_be * vx + ga * vy;
          Rat ox = -g2, oy = g1;
          Rat fo = F2.at(ox, oy);
          if (fo == 0) continue;
          Rat s = half_b / a;
          auto t = rational_dth_root((c - s * s * a) / fo, 2);
          if (!t) continue;
          RationalMatrix g(vx, s * vx + *t * ox, vy, s * vy + *t * oy);
          RationalMatrix gamma = g * delta.inverse();
          if (compose(F2, gamma) == F1) return yes(gamma);
        }
    }
  }
  IsoVerdict v;
  v.kind = IsoKind::Unknown;
  v.details = "no representation of the leading value found within the search height";
  return v;
}

}  // namespace

std::optional<Rat> rational_dth_root(const Rat& c, int d) {
  if (d < 1) throw Error("BadDegree", "root order must be positive");
  if (c == 0) throw Error("ZeroInput", "zero has no canonical root here");
  bool neg = c < 0;
  if (neg && d % 2 == 0) return std::nullopt;
  Int rn, rd;
  if (!is_perfect_power(abs(c.get_num()), d, &rn)) return std::nullopt;
  if (!is_perfect_power(c.get_den(), d, &rd)) return std::nullopt;
  Rat out(neg ? Int(-rn) : rn, rd);
  out.canonicalize();
  return out;
}

std::optional<Rat> cross_ratio(const ProjPoint& x1, const ProjPoint& x2, const ProjPoint& x3, const ProjPoint& x4) {
  const ProjPoint* pts[4] = {&x1, &x2, &x3, &x4};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (*pts[i] == *pts[j]) throw Error("NotDistinct", "cross-ratio needs four distinct points");
  // Bracket [i j] of projective coordinates (p:q); each index appears once
  // above and once below, so the representatives cancel.
  auto br = [&](int i, int j) {
    Rat pi = pts[i]->infinite ? Rat(1) : pts[i]->value, qi = pts[i]->infinite ? Rat(0) : Rat(1);
    Rat pj = pts[j]->infinite ? Rat(1) : pts[j]->value, qj = pts[j]->infinite ? Rat(0) : Rat(1);
    return Rat(pi * qj - pj * qi);
  };
  Rat num = br(2, 0) * br(3, 1);
  Rat den = br(2, 1) * br(3, 0);
  if (den == 0) return std::nullopt;
  return Rat(num / den);
}

std::vector<Rat> bir_set(const BinaryForm& F) {
  if (F.degree() < 4) throw Error("DegreeTooSmall", "Bir needs at least four roots");
  require_squarefree(F);
  RootSet rs = roots(F);
  if (!rs.all_rational()) throw Error("NonRationalRoots", "form does not split over Q");
  return bir_of(proj_points(rs));
}

int vp(const Rat& t, long p) {
  if (t == 0) throw Error("ZeroInput", "valuation of zero");
  if (p < 2 || !is_prime((std::uint64_t)p)) throw Error("BadPrime", "not a prime: " + std::to_string(p));
  int v = 0;
  Int n = abs(t.get_num()), d = t.get_den();
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

Homography::Homography(const RationalMatrix& m) : m_(canonical(m)) {}

ProjPoint Homography::apply(const ProjPoint& z) const {
  Rat num = z.infinite ? m_.a1() : m_.a1() * z.value + m_.a2();
  Rat den = z.infinite ? m_.a3() : m_.a3() * z.value + m_.a4();
  if (den == 0) return ProjPoint::inf();
  return ProjPoint::of(num / den);
}

Homography homography_from_triple(const ProjPoint src[3], const ProjPoint dst[3]) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (src[i] == src[j] || dst[i] == dst[j]) throw Error("DegenerateTriple", "triple points must be distinct");
  std::vector<Row> rows;
  for (int i = 0; i < 3; ++i) {
    QuadPoint x, y;
    x.infinite = src[i].infinite;
    x.alpha = src[i].value;
    y.infinite = dst[i].infinite;
    y.alpha = dst[i].value;
    add_conditions(x, y, rows);
  }
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [](const Row& r) { return r[0] == 0 && r[1] == 0 && r[2] == 0 && r[3] == 0; }),
             rows.end());
  auto v = kernel_line(rows);
  if (!v) throw Error("DegenerateTriple", "no unique homography");
  return Homography(RationalMatrix((*v)[0], (*v)[1], (*v)[2], (*v)[3]));
}

namespace {

IsoVerdict decide(const BinaryForm& F1, const BinaryForm& F2, const IsoOptions& opts, bool allow_swap) {
  int d = F1.degree();
  if (d != F2.degree())
    return no(NoCertificate::DegreeMismatch,
              "degrees " + std::to_string(d) + " and " + std::to_string(F2.degree()));
  require_squarefree(F1);
  require_squarefree(F2);
  if (d == 1) {
    // p a1 + q a3 = a and p a2 + q a4 = b, with the free column chosen invertible.
    const Rat &a = F1.coeff(0), &b = F1.coeff(1), &p = F2.coeff(0), &q = F2.coeff(1);
    const int options[3][2] = {{0, 1}, {1, 0}, {1, 1}};
    for (const auto& o : options) {
      Rat a1, a2, a3, a4;
      if (p != 0) {
        a3 = o[0], a4 = o[1];
        a1 = (a - q * a3) / p, a2 = (b - q * a4) / p;
      } else {
        a1 = o[0], a2 = o[1];
        a3 = a / q, a4 = b / q;
      }
      if (a1 * a4 - a2 * a3 == 0) continue;
      return yes(RationalMatrix(a1, a2, a3, a4));
    }
    throw Error("InternalError", "no invertible linear lift");
  }
  if (d == 2) return decide_quadratic(F1, F2, 24);
  if (d >= 3 && is_binomial(F1) && is_binomial(F2)) {
    const Rat &a = F1.coeff(0), &b = F1.coeff(d), &a2 = F2.coeff(0), &b2 = F2.coeff(d);
    auto u = rational_dth_root(a / a2, d), v = rational_dth_root(b / b2, d);
    if (u && v) return yes(RationalMatrix(*u, 0, 0, *v));
    auto s = rational_dth_root(b / a2, d), t = rational_dth_root(a / b2, d);
    if (s && t) return yes(RationalMatrix(0, *s, *t, 0));
    return no(NoCertificate::BinomialCriterion, "coefficient ratios are not d-th powers");
  }
  RootSet r1 = roots(F1), r2 = roots(F2);
  auto count_rational = [](const RootSet& rs) {
    int k = 0;
    for (const auto& p : rs.points) k += p.tag.kind == TagKind::Rational;
    return k;
  };
  if (count_rational(r1) != count_rational(r2))
    return no(NoCertificate::ExhaustedCandidatesExact, "different numbers of rational roots");
  if (all_split(r1) && all_split(r2) && d >= 4 && d <= 12) {
    auto b1 = bir_of(proj_points(r1)), b2 = bir_of(proj_points(r2));
    if (b1 != b2) {
      std::set<long> primes;
      for (const auto& t : b1) collect_primes(t.get_num(), primes), collect_primes(t.get_den(), primes);
      for (const auto& t : b2) collect_primes(t.get_num(), primes), collect_primes(t.get_den(), primes);
      for (long p : primes)
        if (valuation_multiset(b1, p) != valuation_multiset(b2, p))
          return no(NoCertificate::CrossRatioInvariant, "valuation multisets of cross-ratios differ", p);
      return no(NoCertificate::CrossRatioInvariant, "cross-ratio sets differ", 0);
    }
  }
  Anchors an = choose_anchors(r1);
  if (an.exact) {
    auto found = exact_candidates(F1, r1, F2, r2, an, true);
    if (!found.empty()) return yes(found.front());
    return no(NoCertificate::ExhaustedCandidatesExact, "no root triple image lifts to an isomorphism");
  }
  if (allow_swap && choose_anchors(r2).exact) {
    IsoVerdict v = decide(F2, F1, opts, false);
    if (v.gamma) v.gamma = v.gamma->inverse();
    return v;
  }
  auto found = numeric_candidates(F1, r1, F2, r2, opts.denominator_bound, true);
  if (!found.empty()) return yes(found.front());
  IsoVerdict v;
  v.kind = IsoKind::Unknown;
  v.details = "no rational reconstruction within the denominator bound";
  return v;
}

AutClass classify(const std::vector<RationalMatrix>& els, int& other_order) {
  RationalMatrix id = RationalMatrix::identity(), neg = id.scaled(-1);
  other_order = 0;
  if (els.size() == 1) return AutClass::Trivial;
  if (els.size() == 2 && std::find(els.begin(), els.end(), neg) != els.end()) return AutClass::PlusMinus;
  if (els.size() == 4) {
    bool klein = true;
    for (const auto& g : els) klein &= (g * g == id);
    if (klein) return AutClass::Klein;
  }
  other_order = (int)els.size();
  return AutClass::Other;
}

}  // namespace

AutGroup automorphisms(const BinaryForm& F) {
  if (F.degree() < 3) throw Error("DegreeTooSmall", "automorphism groups need degree at least 3");
  require_squarefree(F);
  RootSet rs = roots(F);
  AutGroup grp;
  Anchors an = choose_anchors(rs);
  if (an.exact) {
    grp.elements = exact_candidates(F, rs, F, rs, an, false);
  } else if (is_binomial(F)) {
    int d = F.degree();
    const Rat &a = F.coeff(0), &b = F.coeff(d);
    for (int sx : {1, -1})
      for (int sy : {1, -1}) {
        RationalMatrix g(sx, 0, 0, sy);
        if (compose(F, g) == F) grp.elements.push_back(g);
      }
    // Swaps X <-> u Y exist only when a/b is a d-th power.
    auto u = rational_dth_root(a / b, d);
    if (u) {
      for (int s1 : {1, -1})
        for (int s2 : {1, -1}) {
          RationalMatrix g(0, s1 / *u, s2 * *u, 0);
          if (compose(F, g) == F) grp.elements.push_back(g);
        }
    }
  } else {
    grp.elements = numeric_candidates(F, rs, F, rs, 1000000, false);
    grp.complete = false;
  }
  if (std::find(grp.elements.begin(), grp.elements.end(), RationalMatrix::identity()) == grp.elements.end())
    grp.elements.push_back(RationalMatrix::identity());
  std::sort(grp.elements.begin(), grp.elements.end(), [](const RationalMatrix& x, const RationalMatrix& y) {
    for (int i = 0; i < 4; ++i)
      if (x.entry(i) != y.entry(i)) return x.entry(i) > y.entry(i);
    return false;
  });
  grp.classification = classify(grp.elements, grp.other_order);
  return grp;
}

IsoVerdict is_isomorphic(const BinaryForm& F1, const BinaryForm& F2, const IsoOptions& opts) {
  IsoVerdict v = decide(F1, F2, opts, true);
  if (v.kind == IsoKind::Yes && compose(F2, *v.gamma) != F1)
    throw Error("InternalError", "isomorphism failed re-verification");
  return v;
}

std::string to_string(IsoKind k) {
  switch (k) {
    case IsoKind::Yes:
      return "Yes";
    case IsoKind::No:
      return "No";
    case IsoKind::Unknown:
      return "Unknown";
  }
  return "?";
}

std::string to_string(NoCertificate c) {
  switch (c) {
    case NoCertificate::None:
      return "None";
    case NoCertificate::DegreeMismatch:
      return "DegreeMismatch";
    case NoCertificate::CrossRatioInvariant:
      return "CrossRatioInvariant";
    case NoCertificate::ExhaustedCandidatesExact:
      return "ExhaustedCandidatesExact";
    case NoCertificate::BinomialCriterion:
      return "BinomialCriterion";
    case NoCertificate::DiscriminantClass:
      return "DiscriminantClass";
  }
  return "?";
}

std::string to_string(AutClass c) {
  switch (c) {
    case AutClass::Trivial:
      return "Trivial";
    case AutClass::PlusMinus:
      return "PlusMinus";
    case AutClass::Klein:
      return "Klein";
    case AutClass::Other:
      return "Other";
  }
  return "?";
}

}  // namespace formlab

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "formlab/arith.hpp"

namespace formlab {

// F(X,Y) = sum_i c_i X^(d-i) Y^i with exact rational coefficients.
class BinaryForm {
 public:
  explicit BinaryForm(std::vector<Rat> coeffs);

  int degree() const { return (int)coeffs_.size() - 1; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }
  const Rat& coeff(int i) const { return coeffs_[i]; }
  bool integral() const { return integral_; }
  bool nonzero_disc() const { return nonzero_disc_; }
  bool in_bin_z() const { return integral_ && nonzero_disc_; }

  // Integer coefficients; throws NonIntegralForm when the form is not integral.
  const std::vector<Int>& int_coeffs() const;

  Rat at(const Rat& x, const Rat& y) const;
  BinaryForm scaled(const Rat& c) const;
  std::string to_string() const;

  bool operator==(const BinaryForm& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const BinaryForm& o) const { return !(*this == o); }

 private:
  std::vector<Rat> coeffs_;
  std::vector<Int> int_coeffs_;
  bool integral_ = false;
  bool nonzero_disc_ = false;
};

BinaryForm make_form(const std::vector<Rat>& coeffs);
BinaryForm make_form_int(const std::vector<long long>& coeffs);

// Product of two forms (coefficient convolution).
BinaryForm multiply(const BinaryForm& a, const BinaryForm& b);

class RationalMatrix {
 public:
  RationalMatrix(Rat a1, Rat a2, Rat a3, Rat a4);
  static RationalMatrix identity();

  const Rat& a1() const { return a_[0]; }
  const Rat& a2() const { return a_[1]; }
  const Rat& a3() const { return a_[2]; }
  const Rat& a4() const { return a_[3]; }
  const Rat& entry(int i) const { return a_[i]; }
  const Rat& det() const { return det_; }

  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix inverse() const;
  RationalMatrix scaled(const Rat& s) const;
  bool operator==(const RationalMatrix& o) const { return a_[0] == o.a_[0] && a_[1] == o.a_[1] && a_[2] == o.a_[2] && a_[3] == o.a_[3]; }
  bool operator!=(const RationalMatrix& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  Rat a_[4];
  Rat det_;
};

// (F o g)(X,Y) = F(a1 X + a2 Y, a3 X + a4 Y)
BinaryForm compose(const BinaryForm& F, const RationalMatrix& g);

struct CappedInteger {
  bool over_cap = false;
  int sign = 0;
  Int value;  // meaningful only when !over_cap
};

CappedInteger evaluate(const BinaryForm& F, const Int& x, const Int& y, const Int& cap);
CappedInteger evaluate(const BinaryForm& F, long long x, long long y);
Int default_cap();

Rat discriminant(const BinaryForm& F);

// f(t) = F(t, 1) as a coefficient vector in descending powers, trimmed of
// leading zeros (so its degree drops by one for every vanishing c_0, c_1, ...).
std::vector<Rat> dehomogenize(const BinaryForm& F);

// r + s*sqrt(m) with m a non-square integer; for m < 0 the square root is
// i*sqrt(|m|). radicand() gives the reduced positive part used for display.
struct QuadSurd {
  Rat r;
  Rat s;
  Int m;
  Int radicand() const;
  bool imaginary() const { return m < 0; }
  std::string to_string() const;
};

enum class TagKind { Rational, QuadraticSurd, NumericOnly };

struct RootTag {
  TagKind kind = TagKind::NumericOnly;
  Rat value;      // Rational
  QuadSurd surd;  // QuadraticSurd
};

struct ProjRoot {
  bool infinite = false;
  bool real = false;  // true for the point at infinity as well
  std::complex<long double> z;
  RootTag tag;
};

struct RootSet {
  std::vector<ProjRoot> points;
  int precision_bits = 0;

  bool all_rational() const;
  bool has_real_point() const;
};

RootSet roots(const BinaryForm& F, long double tol = 1e-15L);

struct ProximityConstants {
  long double c1 = 0;
  long double c2 = 0;
  long double delta = 0;
};

ProximityConstants root_proximity_constants(const BinaryForm& F);
ProximityConstants root_proximity_constants(const BinaryForm& F, const RootSet& rs);

// Evaluation on machine integers for the counting hot paths.
class IntegerEvaluator {
 public:
  explicit IntegerEvaluator(const BinaryForm& F);

  int degree() const { return d_; }

  // F(x,y) when |F(x,y)| <= bound (bound < 2^62), nothing otherwise.
  std::optional<std::int64_t> value_within(std::int64_t x, std::int64_t y, std::int64_t bound) const;

  // Exact value, saturating at the cap.
  CappedInteger exact(std::int64_t x, std::int64_t y, const Int& cap) const;

  // Exact value in 128 bits when it fits.
  std::optional<i128> exact128(std::int64_t x, std::int64_t y) const;

 private:
  int d_;
  std::vector<Int> c_;
  std::vector<i128> c128_;
  std::vector<double> cd_;
  bool fits128_ = true;
  bool fits_double_ = true;
};

}  // namespace formlab

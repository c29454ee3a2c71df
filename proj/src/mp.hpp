#pragma once

#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <utility>

#include "formlab/arith.hpp"

namespace formlab::mp {

// Thin RAII wrapper over mpfr_t; results take the larger operand precision.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(long double x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_ld(v_, x, MPFR_RNDN);
  }
  Real(const Int& z, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  Real(const Rat& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  long double ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  long exponent() const { return mpfr_zero_p(v_) ? LONG_MIN / 2 : mpfr_get_exp(v_); }

  Real& operator+=(const Real& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(const Real& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(const Real& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(const Real& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

 private:
  mpfr_t v_;
};

inline mpfr_prec_t pmax(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

inline Real operator+(const Real& a, const Real& b) {
  Real r(pmax(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator-(const Real& a, const Real& b) {
  Real r(pmax(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator*(const Real& a, const Real& b) {
  Real r(pmax(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator/(const Real& a, const Real& b) {
  Real r(pmax(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator-(const Real& a) {
  Real r(a.prec());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }

inline Real abs(const Real& a) {
  Real r(a.prec());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real sqrt(const Real& a) {
  Real r(a.prec());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real hypot(const Real& a, const Real& b) {
  Real r(pmax(a, b));
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real exp(const Real& a) {
  Real r(a.prec());
  mpfr_exp(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real log(const Real& a) {
  Real r(a.prec());
  mpfr_log(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, const Real& b) {
  Real r(pmax(a, b));
  mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

struct Complex {
  Real re, im;
  explicit Complex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
};

inline Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
inline Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
inline Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator/(const Complex& a, const Complex& b) {
  Real den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline Real cabs(const Complex& a) { return hypot(a.re, a.im); }

// Best rational approximation with denominator at most max_den.
Rat best_rational(const Real& x, const Int& max_den);

}  // namespace formlab::mp

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace bartnik::sym {

/// Exact Gaussian rational a + b*i with arbitrary-precision components.
/// mpq_class keeps every value as a canonical reduced fraction, so equality
/// is plain component equality and no rounding ever occurs.
struct GaussRational {
  mpq_class re;
  mpq_class im;

  GaussRational() : re(0), im(0) {}
  GaussRational(long r) : re(r), im(0) {}
  GaussRational(const mpq_class& r) : re(r), im(0) {}
  GaussRational(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}

  static GaussRational i() { return GaussRational(mpq_class(0), mpq_class(1)); }
  static GaussRational ratio(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return GaussRational(q);
  }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussRational conj() const { return {re, mpq_class(-im)}; }
  /// re^2 + im^2, the norm over the rationals.
  mpq_class norm() const { return re * re + im * im; }

  GaussRational operator-() const { return {mpq_class(-re), mpq_class(-im)}; }

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    mpq_class n = o.norm();
    mpq_class r = (re * o.re + im * o.im) / n;
    mpq_class i = (im * o.re - re * o.im) / n;
    re = r;
    im = i;
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

  double to_double_re() const { return re.get_d(); }
  double to_double_im() const { return im.get_d(); }

  /// Canonical text form: "3", "(1/2)", "(-3/4)", "(0+3i)", "(1/2-1i)".
  std::string str() const;
};

std::string rational_str(const mpq_class& q);

}  // namespace bartnik::sym

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bartnik/rational.hpp"

namespace bartnik::sym {

/// Variable slots of the polynomial ring.  t is the radical with
/// t^2 = eta2^2 + eta3^2, kept reduced so every stored term has t-degree <= 1.
enum Var : int { VZ = 0, VETA2 = 1, VETA3 = 2, VXI1 = 3, VXI2 = 4, VXI3 = 5, VT = 6 };
inline constexpr int kNumVars = 7;

using Monomial = std::array<std::uint16_t, kNumVars>;

inline int total_degree(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

/// Graded lexicographic order over (z, eta2, eta3, xi1, xi2, xi3, t).
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    for (int v = 0; v < kNumVars; ++v) {
      if (a[v] != b[v]) return a[v] < b[v];  // lex with z highest precedence
    }
    return false;
  }
};

/// Exact multivariate polynomial over Gaussian rationals in the quotient ring
/// Q(i)[z, eta2, eta3, xi1, xi2, xi3, t] / (t^2 - eta2^2 - eta3^2).
///
/// Invariants: no zero coefficients stored; every term has t-degree <= 1;
/// the term map is ordered by GrlexLess so equal polynomials have identical
/// representations.
class MultiPoly {
 public:
  using TermMap = std::map<Monomial, GaussRational, GrlexLess>;

  MultiPoly() = default;
  explicit MultiPoly(const GaussRational& c);
  explicit MultiPoly(long c) : MultiPoly(GaussRational(c)) {}

  static MultiPoly var(Var v, int exp = 1);
  static MultiPoly constant(const GaussRational& c) { return MultiPoly(c); }
  /// i (the imaginary unit) as a polynomial.
  static MultiPoly imag_unit() { return MultiPoly(GaussRational::i()); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GaussRational constant_value() const;  // 0 if zero, else the degree-0 coeff

  int degree() const;          // total degree, -1 for the zero polynomial
  int degree_in(Var v) const;  // -1 for zero

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
  MultiPoly scaled(const GaussRational& c) const;
  MultiPoly pow(int k) const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  /// Partial derivative with respect to z (t is treated as an independent
  /// generator; the reduced representation keeps this well defined because t
  /// never carries z-dependence).
  MultiPoly d_dz() const;

  /// Substitute z -> i*t and renormalize.
  MultiPoly subst_z_it() const;

  /// Substitute a subset of variables by polynomials; unlisted variables stay.
  MultiPoly subst(const std::array<std::optional<MultiPoly>, kNumVars>& images) const;

  /// Numeric evaluation with complex values per variable (re, im pairs).
  std::pair<double, double> eval_complex(const std::array<std::pair<double, double>, kNumVars>& x) const;

  /// Largest |coefficient| (max of |re|,|im| over terms), as double; 0 for 0.
  double coeff_scale() const;

  /// Exact division in the quotient ring.  Returns the quotient when *this is
  /// exactly divisible by d, std::nullopt otherwise.  d must be nonzero.
  std::optional<MultiPoly> exact_divide(const MultiPoly& d) const;

  /// View as a polynomial in z with coefficients in the other variables.
  /// coeffs[k] multiplies z^k.
  std::vector<MultiPoly> z_coefficients() const;
  static MultiPoly from_z_coefficients(const std::vector<MultiPoly>& coeffs);

  /// Canonical sorted text form, e.g. "(1/2)*z^2*t + (0+3i)*eta2".
  std::string str() const;

  void add_term(const Monomial& m, const GaussRational& c);  // reduces t powers

 private:
  TermMap terms_;
};

/// poly_normalize: reduce a raw term map modulo t^2 - eta2^2 - eta3^2 and drop
/// zero coefficients.  Normalization is idempotent and is applied eagerly by
/// every constructor and operator, so this is mostly useful for building
/// polynomials from explicit (monomial, coefficient) lists in tests.
MultiPoly poly_normalize(const std::vector<std::pair<Monomial, GaussRational>>& raw_terms);

/// Division with remainder viewing p and d as univariate in z.
/// Requires d monic in z (or a nonzero constant).  Guarantees p = q*d + r with
/// deg_z r < deg_z d, all exact.
struct DivModZ {
  MultiPoly q;
  MultiPoly r;
};
DivModZ divmod_z(const MultiPoly& p, const MultiPoly& d);

/// Recognition of c * (xi1^2+xi2^2+xi3^2)^k ("c*|xi|^(2k)") and of
/// c * (eta2^2+eta3^2)^k ("c*t^(2k)").  Used for proper-ellipticity
/// certificates and report pretty-printing.
struct PowerForm {
  GaussRational coeff;
  int half_degree = 0;  // k
};
std::optional<PowerForm> recognize_xi_power(const MultiPoly& p);
std::optional<PowerForm> recognize_eta_power(const MultiPoly& p);
std::string power_form_str(const PowerForm& f, const std::string& base);  // base: "|xi|" or "t"

}  // namespace bartnik::sym

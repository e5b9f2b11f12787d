#include "bartnik/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace bartnik::sym {

std::string rational_str(const mpq_class& q) {
  return q.get_str();
}

std::string GaussRational::str() const {
  if (im == 0) {
    std::string s = rational_str(re);
    // plain digits for nonnegative integers, parenthesized otherwise
    if (re >= 0 && re.get_den() == 1) return s;
    return "(" + s + ")";
  }
  std::string rs = rational_str(re);
  std::string is = rational_str(im);
  if (im >= 0) return "(" + rs + "+" + is + "i)";
  return "(" + rs + is + "i)";  // is carries its own minus sign
}

MultiPoly::MultiPoly(const GaussRational& c) {
  if (!c.is_zero()) {
    Monomial m{};
    terms_[m] = c;
  }
}

MultiPoly MultiPoly::var(Var v, int exp) {
  MultiPoly p;
  Monomial m{};
  m[v] = static_cast<std::uint16_t>(exp);
  p.add_term(m, GaussRational(1));
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

GaussRational MultiPoly::constant_value() const {
  Monomial m{};
  auto it = terms_.find(m);
  return it == terms_.end() ? GaussRational() : it->second;
}

int MultiPoly::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.rbegin()->first);  // grlex: last term has max degree
}

int MultiPoly::degree_in(Var v) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[v]));
  return d;
}

void MultiPoly::add_term(const Monomial& m, const GaussRational& c) {
  if (c.is_zero()) return;
  if (m[VT] <= 1) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
    return;
  }
  // reduce one factor of t^2 into eta2^2 + eta3^2 and recurse
  Monomial base = m;
  base[VT] = static_cast<std::uint16_t>(m[VT] - 2);
  Monomial m2 = base, m3 = base;
  m2[VETA2] = static_cast<std::uint16_t>(m2[VETA2] + 2);
  m3[VETA3] = static_cast<std::uint16_t>(m3[VETA3] + 2);
  add_term(m2, c);
  add_term(m3, c);
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m;
      for (int v = 0; v < kNumVars; ++v) m[v] = static_cast<std::uint16_t>(ma[v] + mb[v]);
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

MultiPoly MultiPoly::scaled(const GaussRational& c) const {
  MultiPoly r;
  if (c.is_zero()) return r;
  for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
  return r;
}

MultiPoly MultiPoly::pow(int k) const {
  MultiPoly r(GaussRational(1));
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

MultiPoly MultiPoly::d_dz() const {
  MultiPoly r;
  for (const auto& [m, c] : terms_) {
    if (m[VZ] == 0) continue;
    Monomial d = m;
    d[VZ] = static_cast<std::uint16_t>(m[VZ] - 1);
    r.add_term(d, c * GaussRational(static_cast<long>(m[VZ])));
  }
  return r;
}

MultiPoly MultiPoly::subst_z_it() const {
  std::array<std::optional<MultiPoly>, kNumVars> images{};
  images[VZ] = MultiPoly::imag_unit() * MultiPoly::var(VT);
  return subst(images);
}

MultiPoly MultiPoly::subst(const std::array<std::optional<MultiPoly>, kNumVars>& images) const {
  MultiPoly result;
  for (const auto& [m, c] : terms_) {
    MultiPoly term(c);
    for (int v = 0; v < kNumVars; ++v) {
      if (m[v] == 0) continue;
      if (images[v].has_value()) {
        term *= images[v]->pow(m[v]);
      } else {
        Monomial mv{};
        mv[v] = m[v];
        MultiPoly pv;
        pv.add_term(mv, GaussRational(1));
        term *= pv;
      }
    }
    result += term;
  }
  return result;
}

std::pair<double, double> MultiPoly::eval_complex(
    const std::array<std::pair<double, double>, kNumVars>& x) const {
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [m, c] : terms_) {
    std::complex<double> t(c.to_double_re(), c.to_double_im());
    for (int v = 0; v < kNumVars; ++v) {
      std::complex<double> xv(x[v].first, x[v].second);
      for (int e = 0; e < m[v]; ++e) t *= xv;
    }
    acc += t;
  }
  return {acc.real(), acc.imag()};
}

double MultiPoly::coeff_scale() const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    s = std::max(s, std::abs(c.to_double_re()));
    s = std::max(s, std::abs(c.to_double_im()));
  }
  return s;
}

namespace {

// Leading term in grlex order (largest).  Polynomial must be nonzero.
std::pair<Monomial, GaussRational> leading_term(const MultiPoly::TermMap& t) {
  auto it = t.rbegin();
  return {it->first, it->second};
}

bool monomial_divides(const Monomial& d, const Monomial& m) {
  for (int v = 0; v < kNumVars; ++v)
    if (d[v] > m[v]) return false;
  return true;
}

Monomial monomial_quotient(const Monomial& m, const Monomial& d) {
  Monomial q;
  for (int v = 0; v < kNumVars; ++v) q[v] = static_cast<std::uint16_t>(m[v] - d[v]);
  return q;
}

// Exact division when the divisor has no t part (a genuine polynomial in the
// free variables).  Long division by the grlex leading term; exactness of the
// quotient makes every reduction step land on a divisible leading monomial
// when the division is possible at all.
std::optional<MultiPoly> divide_no_t(const MultiPoly& p, const MultiPoly& d) {
  MultiPoly rem = p;
  MultiPoly quot;
  auto [dlm, dlc] = leading_term(d.terms());
  while (!rem.is_zero()) {
    auto [rlm, rlc] = leading_term(rem.terms());
    if (!monomial_divides(dlm, rlm)) return std::nullopt;
    Monomial qm = monomial_quotient(rlm, dlm);
    GaussRational qc = rlc / dlc;
    MultiPoly step;
    step.add_term(qm, qc);
    quot += step;
    rem -= step * d;
  }
  return quot;
}

}  // namespace

std::optional<MultiPoly> MultiPoly::exact_divide(const MultiPoly& d) const {
  if (d.is_zero()) throw std::invalid_argument("exact_divide: division by zero polynomial");
  if (is_zero()) return MultiPoly();
  if (d.degree_in(VT) == 0) return divide_no_t(*this, d);
  // Divisor a + b*t with b != 0: multiply by the conjugate a - b*t and divide
  // by the t-free norm a^2 - b^2 (eta2^2+eta3^2).
  MultiPoly a, b;
  for (const auto& [m, c] : d.terms_) {
    if (m[VT] == 0) {
      a.add_term(m, c);
    } else {
      Monomial mm = m;
      mm[VT] = 0;
      b.add_term(mm, c);
    }
  }
  MultiPoly tau = MultiPoly::var(VETA2, 2) + MultiPoly::var(VETA3, 2);
  MultiPoly norm = a * a - b * b * tau;
  if (norm.is_zero()) throw std::invalid_argument("exact_divide: divisor has zero norm");
  MultiPoly conj = a - b * MultiPoly::var(VT);
  MultiPoly numerator = *this * conj;
  auto q = divide_no_t(numerator, norm);
  if (!q) return std::nullopt;
  // verify exactness (guards against divisible-norm but non-divisible input)
  if (*q * d != *this) return std::nullopt;
  return q;
}

std::vector<MultiPoly> MultiPoly::z_coefficients() const {
  int dz = std::max(0, degree_in(VZ));
  std::vector<MultiPoly> coeffs(dz + 1);
  for (const auto& [m, c] : terms_) {
    Monomial mm = m;
    int k = m[VZ];
    mm[VZ] = 0;
    coeffs[k].add_term(mm, c);
  }
  return coeffs;
}

MultiPoly MultiPoly::from_z_coefficients(const std::vector<MultiPoly>& coeffs) {
  MultiPoly r;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    r += coeffs[k] * MultiPoly::var(VZ, static_cast<int>(k));
  }
  return r;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  static const char* names[kNumVars] = {"z", "eta2", "eta3", "xi1", "xi2", "xi3", "t"};
  std::ostringstream os;
  bool first = true;
  // descending canonical order: leading term first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    const auto& [m, c] = *it;
    os << c.str();
    for (int v = 0; v < kNumVars; ++v) {
      if (m[v] == 0) continue;
      os << "*" << names[v];
      if (m[v] > 1) os << "^" << static_cast<int>(m[v]);
    }
  }
  return os.str();
}

MultiPoly poly_normalize(const std::vector<std::pair<Monomial, GaussRational>>& raw_terms) {
  MultiPoly p;
  for (const auto& [m, c] : raw_terms) p.add_term(m, c);
  return p;
}

DivModZ divmod_z(const MultiPoly& p, const MultiPoly& d) {
  if (d.is_zero()) throw std::invalid_argument("divmod_z: zero divisor");
  int dd = d.degree_in(VZ);
  if (dd == 0) {
    if (!d.is_constant()) {
      throw std::invalid_argument("divmod_z: divisor of z-degree zero is not a unit");
    }
    GaussRational c = d.constant_value();
    DivModZ out;
    out.q = p.scaled(GaussRational(1) / c);
    out.r = MultiPoly();
    return out;
  }
  std::vector<MultiPoly> dc = d.z_coefficients();
  const MultiPoly& lead = dc[dd];
  if (!(lead.is_constant() && lead.constant_value() == GaussRational(1))) {
    throw std::invalid_argument("divmod_z: divisor is not monic in z");
  }
  std::vector<MultiPoly> rc = p.z_coefficients();
  int pd = static_cast<int>(rc.size()) - 1;
  std::vector<MultiPoly> qc;
  if (pd >= dd) qc.assign(pd - dd + 1, MultiPoly());
  for (int k = pd; k >= dd; --k) {
    MultiPoly factor = rc[k];
    if (factor.is_zero()) continue;
    qc[k - dd] = factor;
    for (int j = 0; j <= dd; ++j) {
      rc[k - dd + j] -= factor * dc[j];
    }
  }
  DivModZ out;
  out.q = MultiPoly::from_z_coefficients(qc);
  rc.resize(std::max(1, dd));
  out.r = MultiPoly::from_z_coefficients(rc);
  return out;
}

std::optional<PowerForm> recognize_xi_power(const MultiPoly& p) {
  if (p.is_zero()) return std::nullopt;
  int deg = p.degree();
  if (deg % 2 != 0) return std::nullopt;
  int k = deg / 2;
  Monomial probe{};
  probe[VXI1] = static_cast<std::uint16_t>(2 * k);
  auto it = p.terms().find(probe);
  if (it == p.terms().end()) return std::nullopt;
  GaussRational c = it->second;
  MultiPoly xi2 = MultiPoly::var(VXI1, 2) + MultiPoly::var(VXI2, 2) + MultiPoly::var(VXI3, 2);
  if (xi2.pow(k).scaled(c) != p) return std::nullopt;
  return PowerForm{c, k};
}

std::optional<PowerForm> recognize_eta_power(const MultiPoly& p) {
  if (p.is_zero()) return std::nullopt;
  int deg = p.degree();
  if (deg % 2 != 0) return std::nullopt;
  int k = deg / 2;
  Monomial probe{};
  probe[VETA2] = static_cast<std::uint16_t>(2 * k);
  auto it = p.terms().find(probe);
  if (it == p.terms().end()) return std::nullopt;
  GaussRational c = it->second;
  MultiPoly tau = MultiPoly::var(VETA2, 2) + MultiPoly::var(VETA3, 2);
  if (tau.pow(k).scaled(c) != p) return std::nullopt;
  return PowerForm{c, k};
}

std::string power_form_str(const PowerForm& f, const std::string& base) {
  std::string c = f.coeff.str();
  if (f.half_degree == 0) return c;
  return c + "*" + base + "^" + std::to_string(2 * f.half_degree);
}

}  // namespace bartnik::sym

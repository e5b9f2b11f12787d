#include "bartnik/adn.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bartnik::adn {

using sym::GaussRational;
using sym::Monomial;
using sym::PowerForm;
using sym::Var;

namespace {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

constexpr int kSampleCount = 512;
constexpr double kRelTol = 1e-9;

MultiPoly xi_norm_sq() {
  return MultiPoly::var(sym::VXI1, 2) + MultiPoly::var(sym::VXI2, 2) +
         MultiPoly::var(sym::VXI3, 2);
}

MultiPoly z2_plus_eta2() {
  return MultiPoly::var(sym::VZ, 2) + MultiPoly::var(sym::VETA2, 2) +
         MultiPoly::var(sym::VETA3, 2);
}

std::array<std::optional<MultiPoly>, sym::kNumVars> xi_to_boundary_frame() {
  // xi = z*mu + eta with mu the first coordinate direction
  std::array<std::optional<MultiPoly>, sym::kNumVars> images{};
  images[sym::VXI1] = MultiPoly::var(sym::VZ);
  images[sym::VXI2] = MultiPoly::var(sym::VETA2);
  images[sym::VXI3] = MultiPoly::var(sym::VETA3);
  return images;
}

void validate_homogeneity(const BvpOperatorSpec& op, EllipticityReport& rep) {
  for (int i = 0; i < op.interior.rows(); ++i) {
    for (int j = 0; j < op.interior.cols(); ++j) {
      const MultiPoly& e = op.interior.at(i, j);
      if (e.is_zero()) continue;
      for (const auto& [m, c] : e.terms()) {
        if (sym::total_degree(m) != op.interior_order) {
          rep.warnings.push_back("interior entry (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") not homogeneous of order " +
                                 std::to_string(op.interior_order));
          return;
        }
      }
    }
  }
  for (int i = 0; i < op.boundary.rows(); ++i) {
    int order = op.boundary_orders.empty() ? 1 : op.boundary_orders[i];
    for (int j = 0; j < op.boundary.cols(); ++j) {
      const MultiPoly& e = op.boundary.at(i, j);
      if (e.is_zero()) continue;
      for (const auto& [m, c] : e.terms()) {
        if (sym::total_degree(m) != order) {
          rep.warnings.push_back("boundary row " + std::to_string(i) +
                                 " not homogeneous of order " + std::to_string(order));
          return;
        }
      }
    }
  }
}

// ----- numeric helpers for sampled mode --------------------------------

using cplx = std::complex<double>;

// Roots of a complex-coefficient polynomial by the Durand-Kerner iteration.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
  int n = static_cast<int>(coeffs.size()) - 1;
  while (n > 0 && std::abs(coeffs[n]) == 0.0) --n;
  if (n <= 0) return {};
  std::vector<cplx> c(coeffs.begin(), coeffs.begin() + n + 1);
  for (auto& v : c) v /= c[n];
  std::vector<cplx> w(n);
  cplx seed(0.4, 0.9);
  cplx p(1.0, 0.0);
  for (int j = 0; j < n; ++j) {
    p *= seed;
    w[j] = p;
  }
  for (int iter = 0; iter < 400; ++iter) {
    double move = 0.0;
    for (int j = 0; j < n; ++j) {
      cplx num(0.0, 0.0);
      // Horner evaluation
      cplx val = c[n];
      for (int k = n - 1; k >= 0; --k) val = val * w[j] + c[k];
      num = val;
      cplx den(1.0, 0.0);
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        den *= (w[j] - w[k]);
      }
      cplx delta = num / den;
      w[j] -= delta;
      move = std::max(move, std::abs(delta));
    }
    if (move < 1e-13) break;
  }
  return w;
}

// Remainder of a complex z-polynomial modulo a monic divisor.
std::vector<cplx> poly_mod(std::vector<cplx> p, const std::vector<cplx>& d) {
  int dd = static_cast<int>(d.size()) - 1;
  int pd = static_cast<int>(p.size()) - 1;
  for (int k = pd; k >= dd; --k) {
    cplx f = p[k];
    if (std::abs(f) == 0.0) continue;
    for (int j = 0; j <= dd; ++j) p[k - dd + j] -= f * d[j];
    p[k] = cplx(0, 0);
  }
  p.resize(std::max(1, dd));
  return p;
}

// Smallest Gram-Schmidt pivot of the rows relative to the largest entry.
double relative_row_rank_margin(std::vector<std::vector<cplx>> rows) {
  double scale = 0.0;
  for (const auto& r : rows)
    for (const auto& v : r) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double min_pivot = 1e300;
  std::size_t q = rows.size();
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      cplx proj(0, 0);
      for (std::size_t c = 0; c < rows[i].size(); ++c) proj += std::conj(rows[k][c]) * rows[i][c];
      for (std::size_t c = 0; c < rows[i].size(); ++c) rows[i][c] -= proj * rows[k][c];
    }
    double nrm = 0.0;
    for (const auto& v : rows[i]) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    min_pivot = std::min(min_pivot, nrm);
    if (nrm > 0) {
      for (auto& v : rows[i]) v /= nrm;
    }
  }
  // each row has at most `cols * scale^2` energy; normalize per entry scale
  return min_pivot / (scale * std::sqrt(static_cast<double>(rows[0].size())));
}

std::array<std::pair<double, double>, sym::kNumVars> numeric_point_eta(double e2, double e3) {
  std::array<std::pair<double, double>, sym::kNumVars> x{};
  for (auto& v : x) v = {0.0, 0.0};
  x[sym::VETA2] = {e2, 0.0};
  x[sym::VETA3] = {e3, 0.0};
  x[sym::VT] = {std::sqrt(e2 * e2 + e3 * e3), 0.0};
  return x;
}

// ----- exact helpers ----------------------------------------------------

// Strip every entry of M by the factor f as long as all entries divide.
int strip_common_factor(SymbolMatrix& M, const MultiPoly& f, int max_strips) {
  int stripped = 0;
  while (stripped < max_strips) {
    std::vector<MultiPoly> quo;
    quo.reserve(M.rows() * M.cols());
    bool ok = true;
    for (int i = 0; i < M.rows() && ok; ++i) {
      for (int j = 0; j < M.cols() && ok; ++j) {
        if (M.at(i, j).is_zero()) {
          quo.push_back(MultiPoly());
          continue;
        }
        auto q = M.at(i, j).exact_divide(f);
        if (!q) {
          ok = false;
          break;
        }
        quo.push_back(std::move(*q));
      }
    }
    if (!ok) break;
    int idx = 0;
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j) M.at(i, j) = std::move(quo[idx++]);
    ++stripped;
  }
  return stripped;
}

// Recognize c * t^j * (eta2^2+eta3^2)^k in reduced form (nonvanishing for
// every real eta != 0 when c != 0).
bool recognize_radial_power(const MultiPoly& p, std::string* pretty) {
  if (p.is_zero()) return false;
  bool all_t1 = true, all_t0 = true;
  for (const auto& [m, c] : p.terms()) {
    if (m[sym::VT] == 0) all_t1 = false;
    if (m[sym::VT] == 1) all_t0 = false;
  }
  if (all_t0) {
    auto f = sym::recognize_eta_power(p);
    if (!f) return false;
    if (pretty) *pretty = sym::power_form_str(*f, "t");
    return true;
  }
  if (all_t1) {
    MultiPoly q;
    for (const auto& [m, c] : p.terms()) {
      Monomial mm = m;
      mm[sym::VT] = 0;
      q.add_term(mm, c);
    }
    auto f = sym::recognize_eta_power(q);
    if (!f) return false;
    if (pretty) *pretty = sym::power_form_str(*f, "t") + "*t";
    return true;
  }
  return false;
}

// Exact row rank of a matrix of polynomials via fraction-free elimination.
// Also returns the last nonzero pivot (a minor determinant) through *pivot.
int exact_row_rank(std::vector<std::vector<MultiPoly>> m, MultiPoly* pivot) {
  std::size_t rows = m.size();
  if (rows == 0) return 0;
  std::size_t cols = m[0].size();
  MultiPoly prev(GaussRational(1));
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && m[sel][c].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        MultiPoly num = m[i][j] * m[r][c] - m[i][c] * m[r][j];
        auto q = num.exact_divide(prev);
        if (!q) throw std::logic_error("exact_row_rank: non-exact division");
        m[i][j] = std::move(*q);
      }
      m[i][c] = MultiPoly();
    }
    prev = m[r][c];
    if (pivot) *pivot = prev;
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace

EllipticityReport check_proper_ellipticity(const BvpOperatorSpec& op, CheckMode mode) {
  if (!op.interior.square()) {
    throw std::invalid_argument("check_proper_ellipticity: interior symbol is not square");
  }
  EllipticityReport rep;
  rep.operator_name = op.name;
  rep.mode = mode;
  rep.notes = op.notes;
  validate_homogeneity(op, rep);

  rep.det_symbol = mat_det(op.interior);
  if (rep.det_symbol.is_zero()) {
    rep.properly_elliptic = false;
    rep.proper_witness = "det L(xi) vanishes identically";
    return rep;
  }

  auto form = sym::recognize_xi_power(rep.det_symbol);
  if (form && !form->coeff.is_zero()) {
    rep.det_pretty = sym::power_form_str(*form, "|xi|");
    rep.upper_multiplicity = form->half_degree;
    rep.ell_plus_pretty = "(z - i*t)^" + std::to_string(form->half_degree);
  } else {
    rep.det_pretty = rep.det_symbol.str();
  }

  bool want_sampling = (mode == CheckMode::Sampled);
  if (mode == CheckMode::Exact) {
    if (form && !form->coeff.is_zero()) {
      rep.properly_elliptic = true;
      rep.proper_witness =
          "det L(xi) = " + rep.det_pretty + ": the only real zero is xi = 0";
    } else {
      rep.exact_recognition_failed = true;
      rep.warnings.push_back(
          "exact recognition of det L(xi) as c*|xi|^(2k) failed; falling back to sampling");
      want_sampling = true;
    }
  }

  if (want_sampling) {
    double scale = rep.det_symbol.coeff_scale();
    double min_abs = 1e300;
    for (int s = 0; s < kSampleCount; ++s) {
      double u = halton(s + 1, 2), v = halton(s + 1, 3);
      double th = std::acos(std::clamp(1.0 - 2.0 * u, -1.0, 1.0));
      double ph = 2.0 * M_PI * v;
      std::array<std::pair<double, double>, sym::kNumVars> x{};
      x[sym::VXI1] = {std::sin(th) * std::cos(ph), 0.0};
      x[sym::VXI2] = {std::sin(th) * std::sin(ph), 0.0};
      x[sym::VXI3] = {std::cos(th), 0.0};
      auto [re, im] = rep.det_symbol.eval_complex(x);
      min_abs = std::min(min_abs, std::hypot(re, im));
    }
    SampledStats st;
    st.samples = kSampleCount;
    st.min_value = min_abs;
    st.tolerance = kRelTol * scale;
    rep.proper_sampling = st;
    rep.properly_elliptic = min_abs > st.tolerance;
    if (rep.proper_witness.empty()) {
      std::ostringstream os;
      os << "min |det L(xi)| over " << kSampleCount << " unit directions = " << min_abs
         << " (tolerance " << st.tolerance << ")";
      rep.proper_witness = os.str();
    }
    if (rep.upper_multiplicity == 0 && rep.properly_elliptic) {
      // generic multiplicity count from sampled roots at one eta
      MultiPoly det_z = rep.det_symbol.subst(xi_to_boundary_frame());
      auto zc = det_z.z_coefficients();
      auto x = numeric_point_eta(0.6, 0.8);
      std::vector<cplx> coeffs;
      for (const auto& p : zc) {
        auto [re, im] = p.eval_complex(x);
        coeffs.emplace_back(re, im);
      }
      auto roots = poly_roots(coeffs);
      int ups = 0;
      for (const auto& r : roots)
        if (r.imag() > 1e-9) ++ups;
      rep.upper_multiplicity = ups;
    }
  }
  return rep;
}

MultiPoly compute_ell_plus(const BvpOperatorSpec& op, const EllipticityReport& proper) {
  if (!proper.properly_elliptic) {
    throw std::invalid_argument("compute_ell_plus: operator is not properly elliptic");
  }
  auto form = sym::recognize_xi_power(proper.det_symbol);
  if (form && !form->coeff.is_zero()) {
    MultiPoly lin = MultiPoly::var(sym::VZ) - MultiPoly::imag_unit() * MultiPoly::var(sym::VT);
    return lin.pow(form->half_degree);
  }
  // Sampled classification: count roots above the real axis per eta direction
  // to certify a stable multiplicity; there is no exact symbolic factor in
  // this branch.
  MultiPoly det_z = proper.det_symbol.subst(xi_to_boundary_frame());
  auto zc = det_z.z_coefficients();
  int common = -1;
  for (int s = 0; s < 32; ++s) {
    double psi = 2.0 * M_PI * halton(s + 1, 2);
    auto x = numeric_point_eta(std::cos(psi), std::sin(psi));
    std::vector<cplx> coeffs;
    for (const auto& p : zc) {
      auto [re, im] = p.eval_complex(x);
      coeffs.emplace_back(re, im);
    }
    auto roots = poly_roots(coeffs);
    int ups = 0;
    for (const auto& r : roots) {
      if (std::abs(r.imag()) < 1e-9) {
        throw std::runtime_error("compute_ell_plus: not properly elliptic at eta (near-real root)");
      }
      if (r.imag() > 0) ++ups;
    }
    if (common < 0) common = ups;
    if (common != ups) {
      throw std::runtime_error("compute_ell_plus: unstable upper root count across eta samples");
    }
  }
  throw std::runtime_error(
      "compute_ell_plus: determinant not recognized as c*|xi|^(2k); upper multiplicity " +
      std::to_string(common) + " certified by sampling only (use sampled mode reports)");
}

EllipticityReport check_complementing(const BvpOperatorSpec& op, CheckMode mode) {
  EllipticityReport rep = check_proper_ellipticity(op, mode);
  if (!rep.properly_elliptic) {
    rep.complementing = false;
    rep.warnings.push_back("complementing check skipped: not properly elliptic");
    return rep;
  }
  const int n = op.interior.rows();
  const int q = op.boundary.rows();
  if (op.boundary.cols() != n) {
    throw std::invalid_argument("check_complementing: boundary symbol has wrong column count");
  }

  // determinant degree bookkeeping: q should equal half the total z-degree
  auto frame = xi_to_boundary_frame();
  MultiPoly det_z = rep.det_symbol.subst(frame);
  int degz = det_z.degree_in(sym::VZ);
  if (2 * q != degz) {
    rep.warnings.push_back("boundary row count " + std::to_string(q) +
                           " != half the z-degree " + std::to_string(degz) + " of det L(z mu + eta)");
  }

  auto da = mat_det_adj(op.interior);
  SymbolMatrix adj_z = da.adj.subst(frame);
  SymbolMatrix B_z = op.boundary.subst(frame);
  if (op.row_reduction) {
    if (op.row_reduction->rows() != q || op.row_reduction->cols() != q) {
      throw std::invalid_argument("check_complementing: row reduction hint has wrong shape");
    }
    MultiPoly rdet = mat_det(*op.row_reduction);
    if (rdet.is_zero()) {
      throw std::invalid_argument("check_complementing: row reduction hint is singular");
    }
    B_z = (*op.row_reduction) * B_z;
  }
  SymbolMatrix M = B_z * adj_z;

  int m = rep.upper_multiplicity;
  if (m <= 0) {
    rep.complementing = false;
    rep.warnings.push_back("upper multiplicity unavailable");
    return rep;
  }

  int stripped = 0;
  MultiPoly factor = z2_plus_eta2();
  if (op.strip_scalar) {
    // divide out the declared scalar and count its (z^2+|eta|^2) content
    std::vector<MultiPoly> divided;
    for (int i = 0; i < M.rows(); ++i) {
      for (int j = 0; j < M.cols(); ++j) {
        if (M.at(i, j).is_zero()) {
          divided.push_back(MultiPoly());
          continue;
        }
        auto d = M.at(i, j).exact_divide(*op.strip_scalar);
        if (!d) throw std::logic_error("check_complementing: strip scalar does not divide product");
        divided.push_back(std::move(*d));
      }
    }
    int idx = 0;
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j) M.at(i, j) = std::move(divided[idx++]);
    MultiPoly g = *op.strip_scalar;
    while (true) {
      auto qf = g.exact_divide(factor);
      if (!qf) break;
      g = std::move(*qf);
      ++stripped;
    }
  }
  stripped += strip_common_factor(M, factor, m - 1 - stripped);
  int mhat = m - stripped;

  if (mode == CheckMode::Exact) {
    MultiPoly lin = MultiPoly::var(sym::VZ) - MultiPoly::imag_unit() * MultiPoly::var(sym::VT);
    MultiPoly ellp = lin.pow(mhat);
    SymbolMatrix Mr(q, n);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < n; ++j) Mr.at(i, j) = sym::divmod_z(M.at(i, j), ellp).r;

    auto finish = [&](const char* kind, MultiPoly cert) {
      rep.complementing = true;
      rep.certificate_kind = kind;
      rep.certificate_positive = recognize_radial_power(cert, &rep.certificate_pretty);
      if (!rep.certificate_positive) rep.certificate_pretty = cert.str();
      rep.certificate = std::move(cert);
    };

    if (q == n) {
      MultiPoly d0 = mat_det(Mr.subst_z_it());
      if (!d0.is_zero()) {
        finish("boundary-det", std::move(d0));
        return rep;
      }
      if (mhat >= 2) {
        MultiPoly d1 = mat_det(Mr.d_dz().subst_z_it());
        if (!d1.is_zero()) {
          finish("derivative-trick", std::move(d1));
          return rep;
        }
      }
    }
    // general stacked-coefficient rank over the polynomial ring
    std::vector<std::vector<MultiPoly>> stacked(q);
    for (int i = 0; i < q; ++i) {
      stacked[i].reserve(n * mhat);
      for (int j = 0; j < n; ++j) {
        auto zc = Mr.at(i, j).z_coefficients();
        zc.resize(mhat);
        for (int d = 0; d < mhat; ++d) stacked[i].push_back(zc[d]);
      }
    }
    MultiPoly pivot;
    int rank = exact_row_rank(std::move(stacked), &pivot);
    if (rank == q) {
      finish("stacked-rank", std::move(pivot));
    } else {
      rep.complementing = false;
      rep.certificate_kind = "rank-deficient";
      rep.certificate_pretty =
          "symbolic row rank " + std::to_string(rank) + " < " + std::to_string(q);
      rep.warnings.push_back("rows of B*adj(L) are linearly dependent modulo ell^+(z)");
    }
    return rep;
  }

  // ---- sampled mode: numeric reduction and rank scan over eta directions ----
  std::vector<std::vector<std::vector<MultiPoly>>> zcoeffs(q);
  int max_len = 0;
  for (int i = 0; i < q; ++i) {
    zcoeffs[i].resize(n);
    for (int j = 0; j < n; ++j) {
      zcoeffs[i][j] = M.at(i, j).z_coefficients();
      max_len = std::max<int>(max_len, static_cast<int>(zcoeffs[i][j].size()));
    }
  }
  bool recognized = !rep.exact_recognition_failed &&
                    sym::recognize_xi_power(rep.det_symbol).has_value();
  auto det_zc = det_z.z_coefficients();

  double min_margin = 1e300;
  for (int s = 0; s < kSampleCount; ++s) {
    double psi = 2.0 * M_PI * halton(s + 1, 2);
    auto x = numeric_point_eta(std::cos(psi), std::sin(psi));
    std::vector<cplx> ellp;
    if (recognized) {
      // (z - i)^mhat against the stripped matrix
      ellp.assign(1, cplx(1, 0));
      for (int k = 0; k < mhat; ++k) {
        std::vector<cplx> next(ellp.size() + 1, cplx(0, 0));
        for (std::size_t a = 0; a < ellp.size(); ++a) {
          next[a + 1] += ellp[a];
          next[a] += ellp[a] * cplx(0, -1);
        }
        ellp = std::move(next);
      }
    } else {
      std::vector<cplx> coeffs;
      for (const auto& p : det_zc) {
        auto [re, im] = p.eval_complex(x);
        coeffs.emplace_back(re, im);
      }
      auto roots = poly_roots(coeffs);
      std::vector<cplx> up;
      for (const auto& r : roots)
        if (r.imag() > 1e-9) up.push_back(r);
      ellp.assign(1, cplx(1, 0));
      for (const auto& r : up) {
        std::vector<cplx> next(ellp.size() + 1, cplx(0, 0));
        for (std::size_t a = 0; a < ellp.size(); ++a) {
          next[a + 1] += ellp[a];
          next[a] -= ellp[a] * r;
        }
        ellp = std::move(next);
      }
    }
    int red = static_cast<int>(ellp.size()) - 1;
    if (red == 0) continue;
    std::vector<std::vector<cplx>> rows(q);
    for (int i = 0; i < q; ++i) {
      rows[i].reserve(n * red);
      for (int j = 0; j < n; ++j) {
        std::vector<cplx> pc;
        pc.reserve(zcoeffs[i][j].size());
        for (const auto& p : zcoeffs[i][j]) {
          auto [re, im] = p.eval_complex(x);
          pc.emplace_back(re, im);
        }
        if (pc.empty()) pc.emplace_back(0, 0);
        auto rem = poly_mod(pc, ellp);
        rem.resize(red, cplx(0, 0));
        for (int d = 0; d < red; ++d) rows[i].push_back(rem[d]);
      }
    }
    min_margin = std::min(min_margin, relative_row_rank_margin(std::move(rows)));
  }
  SampledStats st;
  st.samples = kSampleCount;
  st.min_value = min_margin;
  st.tolerance = kRelTol;
  rep.complementing_sampling = st;
  rep.complementing = min_margin > kRelTol;
  rep.certificate_kind = "sampled-rank";
  std::ostringstream os;
  os << "min relative rank margin " << min_margin << " over " << kSampleCount
     << " eta directions";
  rep.certificate_pretty = os.str();
  return rep;
}

std::string EllipticityReport::to_json() const {
  nlohmann::ordered_json j;
  j["operator"] = operator_name;
  j["mode"] = (mode == CheckMode::Exact) ? "exact" : "sampled";
  j["det"] = det_pretty;
  j["det_canonical"] = det_symbol.str();
  j["properly_elliptic"] = properly_elliptic;
  j["proper_witness"] = proper_witness;
  if (proper_sampling) {
    j["proper_sampling"] = {{"samples", proper_sampling->samples},
                            {"min", proper_sampling->min_value},
                            {"tolerance", proper_sampling->tolerance}};
  }
  j["exact_recognition_failed"] = exact_recognition_failed;
  j["upper_multiplicity"] = upper_multiplicity;
  j["ell_plus"] = ell_plus_pretty;
  j["complementing"] = complementing;
  j["certificate_kind"] = certificate_kind;
  j["certificate"] = certificate_pretty;
  j["certificate_canonical"] = certificate.str();
  j["certificate_positive"] = certificate_positive;
  if (complementing_sampling) {
    j["complementing_sampling"] = {{"samples", complementing_sampling->samples},
                                   {"min", complementing_sampling->min_value},
                                   {"tolerance", complementing_sampling->tolerance}};
  }
  j["notes"] = notes;
  j["warnings"] = warnings;
  return j.dump(2);
}

std::string EllipticityReport::to_text() const {
  std::ostringstream os;
  os << "operator " << operator_name << " ["
     << ((mode == CheckMode::Exact) ? "exact" : "sampled") << "]\n";
  os << "  det = " << det_pretty << "\n";
  os << "  properly elliptic: " << (properly_elliptic ? "yes" : "no") << " (" << proper_witness
     << ")\n";
  if (!ell_plus_pretty.empty()) os << "  ell_plus = " << ell_plus_pretty << "\n";
  os << "  complementing: " << (complementing ? "yes" : "no");
  if (!certificate_kind.empty()) os << " via " << certificate_kind;
  os << "\n";
  if (certificate_kind == "derivative-trick") {
    os << "  derivative-trick det = " << certificate_pretty << "\n";
  } else if (!certificate_pretty.empty()) {
    os << "  certificate = " << certificate_pretty << "\n";
  }
  for (const auto& nte : notes) os << "  note: " << nte << "\n";
  for (const auto& w : warnings) os << "  warning: " << w << "\n";
  return os.str();
}

}  // namespace bartnik::adn

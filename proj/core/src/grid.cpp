#include "bartnik/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bartnik::grid {

namespace {

// Fornberg finite-difference weights for the m-th derivative at z from the
// nodes xs[0..n-1]; exact for polynomials of degree <= n-1.
std::vector<double> fornberg_weights(double z, const double* xs, int n, int m) {
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = xs[i] - z;
    for (int j = 0; j < i; ++j) {
      double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

// Circulant rows for trigonometric differentiation on an even number of
// uniformly spaced periodic nodes.  row[m] multiplies f_{i+m mod N}.
std::vector<double> spectral_d1_row(int N) {
  double h = 2.0 * M_PI / N;
  std::vector<double> row(N, 0.0);
  for (int m = 1; m < N; ++m) {
    double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    row[m] = -0.5 * sgn / std::tan(0.5 * m * h);
  }
  return row;
}

std::vector<double> spectral_d2_row(int N) {
  double h = 2.0 * M_PI / N;
  std::vector<double> row(N, 0.0);
  row[0] = -M_PI * M_PI / (3.0 * h * h) - 1.0 / 6.0;
  for (int m = 1; m < N; ++m) {
    double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    double s = std::sin(0.5 * m * h);
    row[m] = -sgn / (2.0 * s * s);
  }
  return row;
}

}  // namespace

Grid::Grid(int n_r, int n_theta, int n_phi, double r_max)
    : nr_(n_r), nt_(n_theta), np_(n_phi), rmax_(r_max) {
  if (nr_ < 4 || nt_ < 4 || np_ < 4) {
    throw std::invalid_argument("Grid: all resolutions must be >= 4");
  }
  if (np_ % 2 != 0) {
    throw std::invalid_argument("Grid: n_phi must be even (pole-crossing pairs)");
  }
  if (!(rmax_ > 2.0)) {
    throw std::invalid_argument("Grid: r_max must exceed 2");
  }
  ds_ = std::log(rmax_) / (nr_ - 1);
  dth_ = M_PI / nt_;
  dph_ = 2.0 * M_PI / np_;

  r_.resize(nr_);
  for (int i = 0; i < nr_; ++i) r_[i] = std::exp(i * ds_);
  r_[0] = 1.0;
  r_[nr_ - 1] = rmax_;
  theta_.resize(nt_);
  for (int j = 0; j < nt_; ++j) theta_[j] = (j + 0.5) * dth_;
  phi_.resize(np_);
  for (int k = 0; k < np_; ++k) phi_[k] = k * dph_;

  std::size_t nn = num_nodes();
  for (auto& xc : x_) xc.resize(nn);
  jac_.resize(nn * 9);
  hess_.resize(nn * 18);
  for (int ir = 0; ir < nr_; ++ir) {
    double rr = r_[ir];
    for (int it = 0; it < nt_; ++it) {
      double st = std::sin(theta_[it]), ct = std::cos(theta_[it]);
      for (int ip = 0; ip < np_; ++ip) {
        double cp = std::cos(phi_[ip]), sp = std::sin(phi_[ip]);
        std::size_t n = node(ir, it, ip);
        double X = rr * st * cp, Y = rr * st * sp, Z = rr * ct;
        x_[0][n] = X;
        x_[1][n] = Y;
        x_[2][n] = Z;
        double r2 = rr * rr;
        double rho = rr * st;  // > 0, no polar nodes
        double rho2 = rho * rho;
        double* J = &jac_[n * 9];
        // dr/dx
        J[0 * 3 + 0] = X / rr;
        J[0 * 3 + 1] = Y / rr;
        J[0 * 3 + 2] = Z / rr;
        // dtheta/dx
        J[1 * 3 + 0] = X * Z / (r2 * rho);
        J[1 * 3 + 1] = Y * Z / (r2 * rho);
        J[1 * 3 + 2] = -rho / r2;
        // dphi/dx
        J[2 * 3 + 0] = -Y / rho2;
        J[2 * 3 + 1] = X / rho2;
        J[2 * 3 + 2] = 0.0;
        double* H = &hess_[n * 18];
        // chart r: (delta_ij - xhat_i xhat_j)/r
        double xh[3] = {X / rr, Y / rr, Z / rr};
        int s = 0;
        for (int i = 0; i < 3; ++i) {
          for (int j = i; j < 3; ++j, ++s) {
            H[0 * 6 + s] = ((i == j ? 1.0 : 0.0) - xh[i] * xh[j]) / rr;
          }
        }
        // chart theta
        double A = Z / (r2 * rho);
        double B = (2.0 * rho2 + r2) / (r2 * r2 * rho * rho2);  // (2 rho^2 + r^2)/(r^4 rho^3)
        double Cz = (r2 - 2.0 * Z * Z) / (r2 * r2 * rho);
        H[1 * 6 + 0] = A - X * X * Z * B;        // xx
        H[1 * 6 + 1] = -X * Y * Z * B;           // xy
        H[1 * 6 + 2] = X * Cz;                   // xz
        H[1 * 6 + 3] = A - Y * Y * Z * B;        // yy
        H[1 * 6 + 4] = Y * Cz;                   // yz
        H[1 * 6 + 5] = 2.0 * rho * Z / (r2 * r2);  // zz
        // chart phi
        double rho4 = rho2 * rho2;
        H[2 * 6 + 0] = 2.0 * X * Y / rho4;
        H[2 * 6 + 1] = (Y * Y - X * X) / rho4;
        H[2 * 6 + 2] = 0.0;
        H[2 * 6 + 3] = -2.0 * X * Y / rho4;
        H[2 * 6 + 4] = 0.0;
        H[2 * 6 + 5] = 0.0;
      }
    }
  }

  // radial quadrature over s (uniform): fourth-order Gregory end corrections
  wr_.assign(nr_, ds_);
  if (nr_ >= 8) {
    const double e0 = 3.0 / 8.0, e1 = 7.0 / 6.0, e2 = 23.0 / 24.0;
    wr_[0] = e0 * ds_;
    wr_[1] = e1 * ds_;
    wr_[2] = e2 * ds_;
    wr_[nr_ - 1] = e0 * ds_;
    wr_[nr_ - 2] = e1 * ds_;
    wr_[nr_ - 3] = e2 * ds_;
  } else {
    wr_[0] = 0.5 * ds_;
    wr_[nr_ - 1] = 0.5 * ds_;
  }

  // theta quadrature absorbing sin(theta): interpolatory positive weights at
  // the cell-centered (Chebyshev-angle) nodes, exact for smooth integrands of
  // low band limit
  wth_.resize(nt_);
  for (int j = 0; j < nt_; ++j) {
    double acc = 1.0;
    for (int m = 1; m <= nt_ / 2; ++m) {
      acc -= 2.0 * std::cos(2.0 * m * theta_[j]) / (4.0 * m * m - 1.0);
    }
    wth_[j] = 2.0 * acc / nt_;
  }

  // radial derivative stencils against physical r offsets
  if (nr_ >= 5) {
    dr1_.resize(nr_ * 5);
    dr1_start_.resize(nr_);
    for (int i = 0; i < nr_; ++i) {
      int start = std::clamp(i - 2, 0, nr_ - 5);
      dr1_start_[i] = start;
      auto w = fornberg_weights(r_[i], &r_[start], 5, 1);
      for (int k = 0; k < 5; ++k) dr1_[i * 5 + k] = w[k];
    }
  }
  if (nr_ >= 6) {
    dr2_width_ = 6;
    dr2_.resize(nr_ * dr2_width_);
    dr2_start_.resize(nr_);
    for (int i = 0; i < nr_; ++i) {
      int start = std::clamp(i - 2, 0, nr_ - dr2_width_);
      dr2_start_[i] = start;
      auto w = fornberg_weights(r_[i], &r_[start], dr2_width_, 2);
      for (int k = 0; k < dr2_width_; ++k) dr2_[i * dr2_width_ + k] = w[k];
    }
  }

  dth_row_ = spectral_d1_row(2 * nt_);
  dth2_row_ = spectral_d2_row(2 * nt_);
  dph_row_ = spectral_d1_row(np_);
  dph2_row_ = spectral_d2_row(np_);
}

bool Field::finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

Grid build_grid(int n_r, int n_theta, int n_phi, double r_max) {
  return Grid(n_r, n_theta, n_phi, r_max);
}

namespace {

void require_radial_stencils(const Grid& g, int m) {
  if (m == 1 && g.dr1_weights().empty())
    throw std::runtime_error("differentiate: radial stencil does not fit (n_r < 5)");
  if (m == 2 && g.dr2_weights().empty())
    throw std::runtime_error("differentiate: radial stencil does not fit (n_r < 6)");
}

Field radial_deriv(const Field& f, int m) {
  const Grid& g = *f.g;
  require_radial_stencils(g, m);
  Field out(g, f.ncomp);
  int nr = g.nr(), nt = g.ntheta(), np = g.nphi();
  int width = (m == 1) ? 5 : g.dr2_width();
  const auto& W = (m == 1) ? g.dr1_weights() : g.dr2_weights();
  const auto& S = (m == 1) ? g.dr1_start() : g.dr2_start();
  for (int ir = 0; ir < nr; ++ir) {
    const double* w = &W[ir * width];
    int start = S[ir];
    for (int it = 0; it < nt; ++it) {
      for (int ip = 0; ip < np; ++ip) {
        std::size_t n = g.node(ir, it, ip);
        for (int c = 0; c < f.ncomp; ++c) {
          double acc = 0.0;
          for (int k = 0; k < width; ++k) {
            acc += w[k] * f.at(g.node(start + k, it, ip), c);
          }
          out.at(n, c) = acc;
        }
      }
    }
  }
  return out;
}

// theta derivative through the pole-crossing extension: each meridian circle
// combines the column at phi with the reversed column at phi + pi.
Field theta_deriv(const Field& f, int m) {
  const Grid& g = *f.g;
  Field out(g, f.ncomp);
  int nr = g.nr(), nt = g.ntheta(), np = g.nphi();
  const auto& row = (m == 1) ? g.dtheta_row() : g.dtheta2_row();
  int N = 2 * nt;
  std::vector<double> ext(N);
  for (int ir = 0; ir < nr; ++ir) {
    for (int ip = 0; ip < np; ++ip) {
      int ipo = (ip + np / 2) % np;
      for (int c = 0; c < f.ncomp; ++c) {
        for (int j = 0; j < nt; ++j) ext[j] = f.at(g.node(ir, j, ip), c);
        for (int j = nt; j < N; ++j) ext[j] = f.at(g.node(ir, 2 * nt - 1 - j, ipo), c);
        for (int j = 0; j < nt; ++j) {
          double acc = (m == 1) ? 0.0 : row[0] * ext[j];
          for (int d = 1; d < N; ++d) {
            acc += row[d] * ext[(j + d) % N];
          }
          out.at(g.node(ir, j, ip), c) = acc;
        }
      }
    }
  }
  return out;
}

Field phi_deriv(const Field& f, int m) {
  const Grid& g = *f.g;
  Field out(g, f.ncomp);
  int nr = g.nr(), nt = g.ntheta(), np = g.nphi();
  const auto& row = (m == 1) ? g.dphi_row() : g.dphi2_row();
  for (int ir = 0; ir < nr; ++ir) {
    for (int it = 0; it < nt; ++it) {
      for (int c = 0; c < f.ncomp; ++c) {
        for (int j = 0; j < np; ++j) {
          double acc = (m == 1) ? 0.0 : row[0] * f.at(g.node(ir, it, j), c);
          for (int d = 1; d < np; ++d) {
            acc += row[d] * f.at(g.node(ir, it, (j + d) % np), c);
          }
          out.at(g.node(ir, it, j), c) = acc;
        }
      }
    }
  }
  return out;
}

}  // namespace

ChartDerivs chart_derivs(const Field& f) {
  ChartDerivs cd;
  cd.dr = radial_deriv(f, 1);
  cd.dth = theta_deriv(f, 1);
  cd.dph = phi_deriv(f, 1);
  return cd;
}

std::array<Field, 3> partials(const Field& f) {
  const Grid& g = *f.g;
  ChartDerivs cd = chart_derivs(f);
  std::array<Field, 3> out{Field(g, f.ncomp), Field(g, f.ncomp), Field(g, f.ncomp)};
  std::size_t nn = g.num_nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    for (int i = 0; i < 3; ++i) {
      double jr = g.jac(n, 0, i), jt = g.jac(n, 1, i), jp = g.jac(n, 2, i);
      for (int c = 0; c < f.ncomp; ++c) {
        out[i].at(n, c) = jr * cd.dr.at(n, c) + jt * cd.dth.at(n, c) + jp * cd.dph.at(n, c);
      }
    }
  }
  return out;
}

Field differentiate(const Field& f, int direction, int count) {
  if (direction < 0 || direction > 2) throw std::invalid_argument("differentiate: direction");
  if (count == 1) {
    const Grid& g = *f.g;
    ChartDerivs cd = chart_derivs(f);
    Field out(g, f.ncomp);
    std::size_t nn = g.num_nodes();
    for (std::size_t n = 0; n < nn; ++n) {
      double jr = g.jac(n, 0, direction), jt = g.jac(n, 1, direction),
             jp = g.jac(n, 2, direction);
      for (int c = 0; c < f.ncomp; ++c) {
        out.at(n, c) = jr * cd.dr.at(n, c) + jt * cd.dth.at(n, c) + jp * cd.dph.at(n, c);
      }
    }
    return out;
  }
  if (count == 2) return partial2(f, direction, direction);
  throw std::invalid_argument("differentiate: count must be 1 or 2");
}

namespace {

struct ChartSecond {
  ChartDerivs first;
  Field d2[3][3];  // chart-pair second derivatives, symmetric
};

ChartSecond chart_second(const Field& f) {
  ChartSecond cs;
  cs.first = chart_derivs(f);
  cs.d2[0][0] = radial_deriv(f, 2);
  cs.d2[1][1] = theta_deriv(f, 2);
  cs.d2[2][2] = phi_deriv(f, 2);
  cs.d2[0][1] = radial_deriv(cs.first.dth, 1);
  cs.d2[0][2] = radial_deriv(cs.first.dph, 1);
  cs.d2[1][2] = theta_deriv(cs.first.dph, 1);
  cs.d2[1][0] = cs.d2[0][1];
  cs.d2[2][0] = cs.d2[0][2];
  cs.d2[2][1] = cs.d2[1][2];
  return cs;
}

Field combine_second(const Grid& g, const ChartSecond& cs, int ncomp, int i, int j) {
  Field out(g, ncomp);
  std::size_t nn = g.num_nodes();
  const Field* first[3] = {&cs.first.dr, &cs.first.dth, &cs.first.dph};
  for (std::size_t n = 0; n < nn; ++n) {
    double J[3][2];
    for (int c = 0; c < 3; ++c) {
      J[c][0] = g.jac(n, c, i);
      J[c][1] = g.jac(n, c, j);
    }
    for (int cc = 0; cc < ncomp; ++cc) {
      double acc = 0.0;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          acc += J[a][0] * J[b][1] * cs.d2[a][b].at(n, cc);
        }
        acc += g.chart_hess(n, a, i, j) * first[a]->at(n, cc);
      }
      out.at(n, cc) = acc;
    }
  }
  return out;
}

}  // namespace

Field partial2(const Field& f, int i, int j) {
  ChartSecond cs = chart_second(f);
  return combine_second(*f.g, cs, f.ncomp, i, j);
}

std::array<Field, 6> second_partials(const Field& f) {
  ChartSecond cs = chart_second(f);
  std::array<Field, 6> out;
  for (int s = 0; s < 6; ++s) {
    out[s] = combine_second(*f.g, cs, f.ncomp, kSymPair[s][0], kSymPair[s][1]);
  }
  return out;
}

double integrate_volume(const Field& f, const Field* weight) {
  if (f.ncomp != 1) throw std::invalid_argument("integrate_volume: scalar field expected");
  const Grid& g = *f.g;
  double total = 0.0;
  for (int ir = 0; ir < g.nr(); ++ir) {
    double rw = g.radial_weights()[ir] * std::pow(g.r(ir), 3);
    for (int it = 0; it < g.ntheta(); ++it) {
      double tw = g.theta_weights()[it];
      for (int ip = 0; ip < g.nphi(); ++ip) {
        std::size_t n = g.node(ir, it, ip);
        double v = f.at(n, 0);
        if (weight) v *= weight->at(n, 0);
        total += rw * tw * g.phi_weight() * v;
      }
    }
  }
  return total;
}

double integrate_inner_boundary(const Field& f, const Field* weight) {
  if (f.ncomp != 1) throw std::invalid_argument("integrate_inner_boundary: scalar expected");
  const Grid& g = *f.g;
  double total = 0.0;
  for (int it = 0; it < g.ntheta(); ++it) {
    for (int ip = 0; ip < g.nphi(); ++ip) {
      std::size_t n = g.node(0, it, ip);
      double v = f.at(n, 0);
      if (weight) v *= weight->at(n, 0);
      total += g.theta_weights()[it] * g.phi_weight() * v;
    }
  }
  return total;  // r = 1 on the inner boundary
}

std::vector<double> interp_to_sphere(const Field& f, double rs) {
  const Grid& g = *f.g;
  if (rs < 1.0 || rs > g.rmax() * (1 + 1e-12)) {
    throw std::invalid_argument("interp_to_sphere: radius outside the grid");
  }
  rs = std::min(rs, g.rmax());
  int nr = g.nr();
  // bracketing index in s = ln r
  double s = std::log(rs) / g.ds();
  int ic = std::clamp(static_cast<int>(std::lround(s)), 0, nr - 1);
  int start = std::clamp(ic - 2, 0, nr - 5);
  double L[5];
  for (int a = 0; a < 5; ++a) {
    L[a] = 1.0;
    for (int b = 0; b < 5; ++b) {
      if (a == b) continue;
      L[a] *= (rs - g.r(start + b)) / (g.r(start + a) - g.r(start + b));
    }
  }
  std::vector<double> out(static_cast<std::size_t>(g.ntheta()) * g.nphi() * f.ncomp);
  for (int it = 0; it < g.ntheta(); ++it) {
    for (int ip = 0; ip < g.nphi(); ++ip) {
      std::size_t m = (static_cast<std::size_t>(it) * g.nphi() + ip) * f.ncomp;
      for (int c = 0; c < f.ncomp; ++c) {
        double acc = 0.0;
        for (int a = 0; a < 5; ++a) acc += L[a] * f.at(g.node(start + a, it, ip), c);
        out[m + c] = acc;
      }
    }
  }
  return out;
}

double integrate_sphere(const Field& f, double rs, const Field* weight) {
  if (f.ncomp != 1) throw std::invalid_argument("integrate_sphere: scalar expected");
  const Grid& g = *f.g;
  std::vector<double> vals = interp_to_sphere(f, rs);
  std::vector<double> wvals;
  if (weight) wvals = interp_to_sphere(*weight, rs);
  double total = 0.0;
  for (int it = 0; it < g.ntheta(); ++it) {
    for (int ip = 0; ip < g.nphi(); ++ip) {
      std::size_t m = static_cast<std::size_t>(it) * g.nphi() + ip;
      double v = vals[m];
      if (weight) v *= wvals[m];
      total += g.theta_weights()[it] * g.phi_weight() * v;
    }
  }
  return total * rs * rs;
}

TailCorrectedIntegral integrate_volume_with_tail(const Field& f) {
  if (f.ncomp != 1) throw std::invalid_argument("integrate_volume_with_tail: scalar expected");
  const Grid& g = *f.g;
  TailCorrectedIntegral out;
  std::vector<double> flux(g.nr(), 0.0);
  for (int ir = 0; ir < g.nr(); ++ir) {
    double acc = 0.0;
    for (int it = 0; it < g.ntheta(); ++it) {
      for (int ip = 0; ip < g.nphi(); ++ip) {
        acc += g.theta_weights()[it] * g.phi_weight() * f.at(g.node(ir, it, ip), 0);
      }
    }
    flux[ir] = acc * std::pow(g.r(ir), 3);  // s-line integrand
    out.truncated += g.radial_weights()[ir] * flux[ir];
  }
  // fit |flux| ~ C r^-q over the outer window and integrate the tail in s
  std::vector<double> xs, ys;
  double scale = 0.0;
  for (double v : flux) scale = std::max(scale, std::abs(v));
  for (int ir = 0; ir < g.nr(); ++ir) {
    if (g.r(ir) < g.rmax() / 4.0) continue;
    if (std::abs(flux[ir]) < 1e-13 * scale || flux[ir] * flux[g.nr() - 1] <= 0.0) continue;
    xs.push_back(std::log(g.r(ir)));
    ys.push_back(std::log(std::abs(flux[ir])));
  }
  out.value = out.truncated;
  if (xs.size() >= 4) {
    auto [a, b, res] = line_fit(xs, ys);
    (void)a;
    (void)res;
    double q = -b;
    out.fitted_rate = q;
    if (q > 0.05) {
      out.tail = flux[g.nr() - 1] / q;
      out.value += out.tail;
    }
  }
  return out;
}

std::array<double, 3> line_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("line_fit: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double det = n * sxx - sx * sx;
  double b = (n * sxy - sx * sy) / det;
  double a = (sy - b * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = ys[i] - a - b * xs[i];
    rss += e * e;
  }
  return {a, b, std::sqrt(rss / n)};
}

DecayFit fit_power_decay(const Field& f, double rmin, double rmax) {
  const Grid& g = *f.g;
  if (rmin <= 0.0) rmin = g.rmax() / 4.0;
  if (rmax <= 0.0) rmax = g.rmax();
  std::vector<double> xs, ys;
  int shells = 0;
  for (int ir = 0; ir < g.nr(); ++ir) {
    if (g.r(ir) < rmin || g.r(ir) > rmax * (1 + 1e-12)) continue;
    double acc = 0.0, wsum = 0.0;
    for (int it = 0; it < g.ntheta(); ++it) {
      for (int ip = 0; ip < g.nphi(); ++ip) {
        std::size_t n = g.node(ir, it, ip);
        double q = 0.0;
        for (int c = 0; c < f.ncomp; ++c) q += f.at(n, c) * f.at(n, c);
        double w = g.theta_weights()[it] * g.phi_weight();
        acc += w * q;
        wsum += w;
      }
    }
    double norm = std::sqrt(acc / wsum);
    ++shells;
    if (norm < 1e-280) continue;
    xs.push_back(std::log(g.r(ir)));
    ys.push_back(std::log(norm));
  }
  if (shells < 4) throw std::invalid_argument("fit_power_decay: fewer than 4 shells in window");
  if (xs.size() < 4) throw std::runtime_error("fit_power_decay: shell norms below machine floor");
  auto [a, b, res] = line_fit(xs, ys);
  DecayFit fit;
  fit.rate = -b;
  fit.coeff = std::exp(a);
  fit.residual = res;
  fit.shells = static_cast<int>(xs.size());
  return fit;
}

KillingAsymptotics fit_killing(const Field& x0, const Field& xvec) {
  const Grid& g = *x0.g;
  if (x0.ncomp != 1 || xvec.ncomp != 3) throw std::invalid_argument("fit_killing: ranks");
  double rmin = g.rmax() / 4.0;
  // normal equations for f = A + M . x per component
  auto fit_component = [&](const Field& f, int c, std::array<double, 4>& coef) {
    double N[4][4] = {};
    double rhs[4] = {};
    for (int ir = 0; ir < g.nr(); ++ir) {
      if (g.r(ir) < rmin) continue;
      for (int it = 0; it < g.ntheta(); ++it) {
        for (int ip = 0; ip < g.nphi(); ++ip) {
          std::size_t n = g.node(ir, it, ip);
          auto X = g.x(n);
          double basis[4] = {1.0, X[0], X[1], X[2]};
          double w = g.theta_weights()[it] * g.phi_weight();
          for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) N[a][b] += w * basis[a] * basis[b];
            rhs[a] += w * basis[a] * f.at(n, c);
          }
        }
      }
    }
    // solve the 4x4 system by Gaussian elimination with partial pivoting
    double M[4][5];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) M[a][b] = N[a][b];
      M[a][4] = rhs[a];
    }
    for (int col = 0; col < 4; ++col) {
      int piv = col;
      for (int rr = col + 1; rr < 4; ++rr)
        if (std::abs(M[rr][col]) > std::abs(M[piv][col])) piv = rr;
      std::swap(M[col], M[piv]);
      for (int rr = 0; rr < 4; ++rr) {
        if (rr == col) continue;
        double fkt = M[rr][col] / M[col][col];
        for (int b = col; b < 5; ++b) M[rr][b] -= fkt * M[col][b];
      }
    }
    for (int a = 0; a < 4; ++a) coef[a] = M[a][4] / M[a][a];
  };

  std::array<double, 4> c0{};
  fit_component(x0, 0, c0);
  std::array<std::array<double, 4>, 3> cs{};
  for (int i = 0; i < 3; ++i) fit_component(xvec, i, cs[i]);

  KillingAsymptotics ka;
  ka.A[0] = c0[0];
  for (int i = 0; i < 3; ++i) ka.A[i + 1] = cs[i][0];
  for (int i = 0; i < 3; ++i) {
    ka.Lambda[0][i + 1] = c0[i + 1];
    ka.Lambda[i + 1][0] = -c0[i + 1];
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ka.Lambda[i + 1][j + 1] = 0.5 * (cs[i][j + 1] - cs[j][i + 1]);
    }
  }
  // remainder decay of the residual after removing the affine model
  Field resid(g, 4);
  for (std::size_t n = 0; n < g.num_nodes(); ++n) {
    auto X = g.x(n);
    double m0 = ka.A[0];
    for (int j = 0; j < 3; ++j) m0 += ka.Lambda[0][j + 1] * X[j];
    resid.at(n, 0) = x0.at(n, 0) - m0;
    for (int i = 0; i < 3; ++i) {
      double mi = ka.A[i + 1];
      for (int j = 0; j < 3; ++j) mi += ka.Lambda[i + 1][j + 1] * X[j];
      resid.at(n, i + 1) = xvec.at(n, i) - mi;
    }
  }
  try {
    DecayFit df = fit_power_decay(resid);
    ka.remainder_rate = df.rate;
    ka.remainder_norm = df.coeff;
  } catch (const std::exception&) {
    ka.remainder_rate = 0.0;
    ka.remainder_norm = 0.0;
  }
  return ka;
}

double richardson_extrapolate(const std::vector<double>& rs, const std::vector<double>& vs) {
  std::size_t n = rs.size();
  if (n == 0 || n != vs.size()) throw std::invalid_argument("richardson_extrapolate: sizes");
  // fit v = sum_k c_k u^k with u = 1/r and return c_0
  std::vector<std::vector<double>> M(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double u = 1.0 / rs[i];
    double p = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      M[i][k] = p;
      p *= u;
    }
    M[i][n] = vs[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t rr = col + 1; rr < n; ++rr)
      if (std::abs(M[rr][col]) > std::abs(M[piv][col])) piv = rr;
    std::swap(M[col], M[piv]);
    for (std::size_t rr = 0; rr < n; ++rr) {
      if (rr == col) continue;
      double f = M[rr][col] / M[col][col];
      for (std::size_t b = col; b <= n; ++b) M[rr][b] -= f * M[col][b];
    }
  }
  return M[0][n] / M[0][0];
}

}  // namespace bartnik::grid

#include "bartnik/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace bartnik::geometry {

namespace {

// inverse and determinant of a symmetric 3x3 in 6-component storage
double sym_inv_det(const double* s, double* inv) {
  double a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5];
  double A = d * f - e * e;
  double B = c * e - b * f;
  double C = b * e - c * d;
  double det = a * A + b * B + c * C;
  inv[0] = A / det;
  inv[1] = B / det;
  inv[2] = C / det;
  inv[3] = (a * f - c * c) / det;
  inv[4] = (b * c - a * e) / det;
  inv[5] = (a * d - b * b) / det;
  return det;
}

inline double sym_at(const double* s, int i, int j) { return s[kSym[i][j]]; }

}  // namespace

double sym_contract(const double* a_inv, const double* t) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += sym_at(a_inv, i, j) * sym_at(t, i, j);
  return acc;
}

void mat_vec_sym(const double* s, const double* v, double* out) {
  for (int i = 0; i < 3; ++i) {
    out[i] = 0.0;
    for (int j = 0; j < 3; ++j) out[i] += sym_at(s, i, j) * v[j];
  }
}

MetricCache metric_cache(const Field& metric) {
  if (metric.ncomp != 6) throw std::invalid_argument("metric_cache: 6-component field expected");
  MetricCache mc;
  mc.g = metric.g;
  const Grid& G = *metric.g;
  mc.met = metric;
  mc.inv = Field(G, 6);
  mc.sqrtg = Field(G, 1);
  std::size_t nn = G.num_nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    double inv6[6];
    double det = sym_inv_det(&metric.data[n * 6], inv6);
    if (!(det > 0.0)) {
      throw std::runtime_error("metric_cache: metric not positive definite at node " +
                               std::to_string(n));
    }
    for (int c = 0; c < 6; ++c) mc.inv.at(n, c) = inv6[c];
    mc.sqrtg.at(n, 0) = std::sqrt(det);
  }
  auto d = grid::partials(metric);
  mc.dmet = {std::move(d[0]), std::move(d[1]), std::move(d[2])};
  mc.gamma = Field(G, 18);
  for (std::size_t n = 0; n < nn; ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* dg[3] = {&mc.dmet[0].data[n * 6], &mc.dmet[1].data[n * 6],
                           &mc.dmet[2].data[n * 6]};
    for (int k = 0; k < 3; ++k) {
      for (int s = 0; s < 6; ++s) {
        int i = kSymPair[s][0], j = kSymPair[s][1];
        double acc = 0.0;
        for (int m = 0; m < 3; ++m) {
          double chr = dg[i][kSym[m][j]] + dg[j][kSym[m][i]] - dg[m][kSym[i][j]];
          acc += 0.5 * sym_at(gi, k, m) * chr;
        }
        mc.gamma.at(n, k * 6 + s) = acc;
      }
    }
  }
  return mc;
}

CurvatureBundle connection_curvature(const MetricCache& mc) {
  const Grid& G = *mc.g;
  std::size_t nn = G.num_nodes();
  CurvatureBundle cb;
  cb.gamma = mc.gamma;
  cb.riem = Field(G, 81);
  cb.ric = Field(G, 6);
  cb.scal = Field(G, 1);
  cb.ein = Field(G, 6);

  auto d2 = grid::second_partials(mc.met);  // d2[sym(a,b)] = d_a d_b g (6 comps)

  for (std::size_t n = 0; n < nn; ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* dg[3] = {&mc.dmet[0].data[n * 6], &mc.dmet[1].data[n * 6],
                           &mc.dmet[2].data[n * 6]};
    // derivative of the inverse metric: d_a g^{lm} = -g^{lp} d_a g_{pq} g^{qm}
    double dgi[3][6];
    for (int a = 0; a < 3; ++a) {
      for (int s = 0; s < 6; ++s) {
        int l = kSymPair[s][0], m = kSymPair[s][1];
        double acc = 0.0;
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q)
            acc -= sym_at(gi, l, p) * sym_at(dg[a], p, q) * sym_at(gi, q, m);
        dgi[a][s] = acc;
      }
    }
    // dGamma[a][l][sym(j,k)] = d_a Gamma^l_{jk}
    double dGamma[3][3][6];
    for (int a = 0; a < 3; ++a) {
      for (int l = 0; l < 3; ++l) {
        for (int s = 0; s < 6; ++s) {
          int j = kSymPair[s][0], k = kSymPair[s][1];
          double acc = 0.0;
          for (int m = 0; m < 3; ++m) {
            double chr = sym_at(dg[j], m, k) + sym_at(dg[k], m, j) - sym_at(dg[m], j, k);
            double d2chr = sym_at(&d2[kSym[a][j]].data[n * 6], m, k) +
                           sym_at(&d2[kSym[a][k]].data[n * 6], m, j) -
                           sym_at(&d2[kSym[a][m]].data[n * 6], j, k);
            acc += 0.5 * dgi[a][kSym[l][m]] * chr + 0.5 * sym_at(gi, l, m) * d2chr;
          }
          dGamma[a][l][s] = acc;
        }
      }
    }
    const double* Ga = &mc.gamma.data[n * 18];
    auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
    // R^l_{jk m}: R(d_j, d_k) d_m = R^l d_l
    double Rup[3][3][3][3];
    for (int l = 0; l < 3; ++l) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          for (int m = 0; m < 3; ++m) {
            double acc = dGamma[j][l][kSym[k][m]] - dGamma[k][l][kSym[j][m]];
            for (int a = 0; a < 3; ++a) {
              acc += gam(l, j, a) * gam(a, k, m) - gam(l, k, a) * gam(a, j, m);
            }
            Rup[l][j][k][m] = acc;
          }
        }
      }
    }
    const double* gg = &mc.met.data[n * 6];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          for (int m = 0; m < 3; ++m) {
            double acc = 0.0;
            for (int l = 0; l < 3; ++l) acc += sym_at(gg, i, l) * Rup[l][j][k][m];
            cb.riem.at(n, ((i * 3 + j) * 3 + k) * 3 + m) = acc;
          }
        }
      }
    }
    double ric[6];
    for (int s = 0; s < 6; ++s) {
      int k = kSymPair[s][0], m = kSymPair[s][1];
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += Rup[j][j][k][m];
      ric[s] = acc;
      cb.ric.at(n, s) = acc;
    }
    double R = sym_contract(gi, ric);
    cb.scal.at(n, 0) = R;
    for (int s = 0; s < 6; ++s) cb.ein.at(n, s) = ric[s] - 0.5 * R * gg[s];
  }
  return cb;
}

Field covariant_deriv_sym2(const MetricCache& mc, const Field& T) {
  const Grid& G = *mc.g;
  auto dT = grid::partials(T);
  Field out(G, 18);
  std::size_t nn = G.num_nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    const double* Ga = &mc.gamma.data[n * 18];
    auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
    const double* t = &T.data[n * 6];
    for (int k = 0; k < 3; ++k) {
      for (int s = 0; s < 6; ++s) {
        int i = kSymPair[s][0], j = kSymPair[s][1];
        double acc = dT[k].at(n, s);
        for (int m = 0; m < 3; ++m) {
          acc -= gam(m, k, i) * sym_at(t, m, j) + gam(m, k, j) * sym_at(t, i, m);
        }
        out.at(n, k * 6 + s) = acc;
      }
    }
  }
  return out;
}

Field divergence_sym2(const MetricCache& mc, const Field& T) {
  const Grid& G = *mc.g;
  Field cov = covariant_deriv_sym2(mc, T);
  Field out(G, 3);
  std::size_t nn = G.num_nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    const double* gi = &mc.inv.data[n * 6];
    for (int i = 0; i < 3; ++i) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) acc += sym_at(gi, k, l) * cov.at(n, k * 6 + kSym[l][i]);
      out.at(n, i) = -acc;
    }
  }
  return out;
}

Field divergence_oneform(const MetricCache& mc, const Field& w) {
  const Grid& G = *mc.g;
  auto dw = grid::partials(w);
  Field out(G, 1);
  std::size_t nn = G.num_nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* Ga = &mc.gamma.data[n * 18];
    auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        double cov = dw[k].at(n, l);
        for (int m = 0; m < 3; ++m) cov -= gam(m, k, l) * w.at(n, m);
        acc += sym_at(gi, k, l) * cov;
      }
    }
    out.at(n, 0) = -acc;
  }
  return out;
}

Field delta_star(const MetricCache& mc, const Field& Y) {
  const Grid& G = *mc.g;
  Field ylow = lower_vector(mc, Y);
  auto dy = grid::partials(ylow);
  Field out(G, 6);
  std::size_t nn = G.num_nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    const double* Ga = &mc.gamma.data[n * 18];
    auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      double a = dy[i].at(n, j), b = dy[j].at(n, i);
      double chr = 0.0;
      for (int m = 0; m < 3; ++m) chr += gam(m, i, j) * ylow.at(n, m);
      out.at(n, s) = 0.5 * (a + b) - chr;
    }
  }
  return out;
}

Field bianchi_operator(const MetricCache& mc, const Field& h) {
  const Grid& G = *mc.g;
  Field div = divergence_sym2(mc, h);
  Field tr = trace_sym2(mc, h);
  auto dtr = grid::partials(tr);
  Field out(G, 3);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    for (int i = 0; i < 3; ++i) out.at(n, i) = div.at(n, i) + 0.5 * dtr[i].at(n, 0);
  }
  return out;
}

Field hessian_scalar(const MetricCache& mc, const Field& f) {
  const Grid& G = *mc.g;
  auto df = grid::partials(f);
  auto d2f = grid::second_partials(f);
  Field out(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* Ga = &mc.gamma.data[n * 18];
    for (int s = 0; s < 6; ++s) {
      double acc = d2f[s].at(n, 0);
      for (int m = 0; m < 3; ++m) acc -= Ga[m * 6 + s] * df[m].at(n, 0);
      out.at(n, s) = acc;
    }
  }
  return out;
}

Field laplacian(const MetricCache& mc, const Field& f) {
  const Grid& G = *mc.g;
  Field hess = hessian_scalar(mc, f);
  Field out(G, 1);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    out.at(n, 0) = -sym_contract(&mc.inv.data[n * 6], &hess.data[n * 6]);
  }
  return out;
}

Field lie_sym2(const MetricCache& mc, const Field& X, const Field& T) {
  const Grid& G = *mc.g;
  auto dT = grid::partials(T);
  auto dX = grid::partials(X);
  Field out(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* t = &T.data[n * 6];
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        acc += X.at(n, k) * dT[k].at(n, s);
        acc += sym_at(t, k, j) * dX[i].at(n, k) + sym_at(t, i, k) * dX[j].at(n, k);
      }
      out.at(n, s) = acc;
    }
  }
  return out;
}

Field trace_sym2(const MetricCache& mc, const Field& T) {
  const Grid& G = *mc.g;
  Field out(G, 1);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    out.at(n, 0) = sym_contract(&mc.inv.data[n * 6], &T.data[n * 6]);
  }
  return out;
}

Field raise_oneform(const MetricCache& mc, const Field& w) {
  const Grid& G = *mc.g;
  Field out(G, 3);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double v[3];
    mat_vec_sym(&mc.inv.data[n * 6], &w.data[n * 3], v);
    for (int i = 0; i < 3; ++i) out.at(n, i) = v[i];
  }
  return out;
}

Field lower_vector(const MetricCache& mc, const Field& X) {
  const Grid& G = *mc.g;
  Field out(G, 3);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double v[3];
    mat_vec_sym(&mc.met.data[n * 6], &X.data[n * 3], v);
    for (int i = 0; i < 3; ++i) out.at(n, i) = v[i];
  }
  return out;
}

Field raise_sym2(const MetricCache& mc, const Field& T) {
  const Grid& G = *mc.g;
  Field out(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* t = &T.data[n * 6];
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      double acc = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) acc += sym_at(gi, i, k) * sym_at(gi, j, l) * sym_at(t, k, l);
      out.at(n, s) = acc;
    }
  }
  return out;
}

Field lower_sym2(const MetricCache& mc, const Field& T) {
  const Grid& G = *mc.g;
  Field out(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gg = &mc.met.data[n * 6];
    const double* t = &T.data[n * 6];
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      double acc = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) acc += sym_at(gg, i, k) * sym_at(gg, j, l) * sym_at(t, k, l);
      out.at(n, s) = acc;
    }
  }
  return out;
}

Field inner_sym2(const MetricCache& mc, const Field& S, const Field& T) {
  const Grid& G = *mc.g;
  Field Sup = raise_sym2(mc, S);
  Field out(G, 1);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double acc = 0.0;
    for (int s = 0; s < 6; ++s) {
      double mult = (kSymPair[s][0] == kSymPair[s][1]) ? 1.0 : 2.0;
      acc += mult * Sup.at(n, s) * T.at(n, s);
    }
    out.at(n, 0) = acc;
  }
  return out;
}

ShellGeometry shell_geometry(const MetricCache& mc) {
  const Grid& G = *mc.g;
  std::size_t nn = G.num_nodes();
  ShellGeometry sg;
  sg.n_up = Field(G, 3);
  sg.n_dn = Field(G, 3);
  sg.H = Field(G, 1);
  sg.A = Field(G, 6);
  sg.proj_dn = Field(G, 6);

  // n_i = lambda * dr_i with dr_i = x_i/r analytic; lambda = |dr|_g^{-1}
  Field lambda(G, 1);
  for (std::size_t n = 0; n < nn; ++n) {
    const double* gi = &mc.inv.data[n * 6];
    double dr[3] = {G.jac(n, 0, 0), G.jac(n, 0, 1), G.jac(n, 0, 2)};
    double q = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) q += sym_at(gi, i, j) * dr[i] * dr[j];
    lambda.at(n, 0) = 1.0 / std::sqrt(q);
  }
  auto dlam = grid::partials(lambda);
  for (std::size_t n = 0; n < nn; ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* gg = &mc.met.data[n * 6];
    double dr[3] = {G.jac(n, 0, 0), G.jac(n, 0, 1), G.jac(n, 0, 2)};
    double lam = lambda.at(n, 0);
    double ndn[3], nup[3];
    for (int i = 0; i < 3; ++i) ndn[i] = lam * dr[i];
    mat_vec_sym(gi, ndn, nup);
    for (int i = 0; i < 3; ++i) {
      sg.n_dn.at(n, i) = ndn[i];
      sg.n_up.at(n, i) = nup[i];
    }
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      sg.proj_dn.at(n, s) = sym_at(gg, i, j) - ndn[i] * ndn[j];
    }
    // nabla_k n_l = d_k(lam) dr_l + lam d_k d_l r - Gamma^m_{kl} n_m
    const double* Ga = &mc.gamma.data[n * 18];
    auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
    double covn[3][3];
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        double v = dlam[k].at(n, 0) * dr[l] + lam * G.chart_hess(n, 0, k, l);
        for (int m = 0; m < 3; ++m) v -= gam(m, k, l) * ndn[m];
        covn[k][l] = v;
      }
    }
    double H = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) H += sym_at(gi, k, l) * covn[k][l];
    sg.H.at(n, 0) = H;
    // tangential projector (mixed): P^m_k = delta^m_k - n^m n_k
    double covsym[3][3];
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) covsym[k][l] = 0.5 * (covn[k][l] + covn[l][k]);
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          double Pki = (k == i ? 1.0 : 0.0) - nup[k] * ndn[i];
          double Plj = (l == j ? 1.0 : 0.0) - nup[l] * ndn[j];
          acc += Pki * Plj * covsym[k][l];
        }
      }
      sg.A.at(n, s) = acc;
    }
  }
  return sg;
}

BoundaryData boundary_geometry(const MetricCache& mc) {
  const Grid& G = *mc.g;
  ShellGeometry sg = shell_geometry(mc);
  int nt = G.ntheta(), np = G.nphi();
  BoundaryData bd;
  bd.n.resize(static_cast<std::size_t>(nt) * np * 3);
  bd.gammaT.resize(static_cast<std::size_t>(nt) * np * 3);
  bd.A.resize(static_cast<std::size_t>(nt) * np * 6);
  bd.H.resize(static_cast<std::size_t>(nt) * np);
  bd.area.resize(static_cast<std::size_t>(nt) * np);
  for (int it = 0; it < nt; ++it) {
    double st = std::sin(G.theta(it)), ct = std::cos(G.theta(it));
    for (int ip = 0; ip < np; ++ip) {
      double cp = std::cos(G.phi(ip)), sp = std::sin(G.phi(ip));
      std::size_t n = G.node(0, it, ip);
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      for (int i = 0; i < 3; ++i) bd.n[b * 3 + i] = sg.n_up.at(n, i);
      for (int s = 0; s < 6; ++s) bd.A[b * 6 + s] = sg.A.at(n, s);
      bd.H[b] = sg.H.at(n, 0);
      // coordinate frames on the unit sphere
      double eth[3] = {ct * cp, ct * sp, -st};
      double eph[3] = {-st * sp, st * cp, 0.0};
      const double* gg = &mc.met.data[n * 6];
      double gtt = 0, gtp = 0, gpp = 0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double gij = sym_at(gg, i, j);
          gtt += gij * eth[i] * eth[j];
          gtp += gij * eth[i] * eph[j];
          gpp += gij * eph[i] * eph[j];
        }
      }
      bd.gammaT[b * 3 + 0] = gtt;
      bd.gammaT[b * 3 + 1] = gtp;
      bd.gammaT[b * 3 + 2] = gpp;
      bd.area[b] = std::sqrt(std::max(0.0, gtt * gpp - gtp * gtp)) / st;
    }
  }
  return bd;
}

BartnikData bartnik_data(const MetricCache& mc, const Field& K) {
  const Grid& G = *mc.g;
  ShellGeometry sg = shell_geometry(mc);
  BoundaryData bd = boundary_geometry(mc);
  int nt = G.ntheta(), np = G.nphi();
  BartnikData out;
  out.gammaT = bd.gammaT;
  out.H = bd.H;
  out.trK.resize(static_cast<std::size_t>(nt) * np);
  out.omega.resize(static_cast<std::size_t>(nt) * np * 3);
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      std::size_t n = G.node(0, it, ip);
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      const double* gi = &mc.inv.data[n * 6];
      const double* k6 = &K.data[n * 6];
      // tr^T K = g^{ij} K_ij - K(n,n)
      double trg = sym_contract(gi, k6);
      double nn[3] = {sg.n_up.at(n, 0), sg.n_up.at(n, 1), sg.n_up.at(n, 2)};
      double kn[3];
      mat_vec_sym(k6, nn, kn);  // K_{jk} n^k
      double knn = kn[0] * nn[0] + kn[1] * nn[1] + kn[2] * nn[2];
      out.trK[b] = trg - knn;
      double ndn[3] = {sg.n_dn.at(n, 0), sg.n_dn.at(n, 1), sg.n_dn.at(n, 2)};
      for (int j = 0; j < 3; ++j) out.omega[b * 3 + j] = kn[j] - knn * ndn[j];
    }
  }
  return out;
}

// ----- two-dimensional boundary machinery ---------------------------------

namespace {

// parity-aware spectral theta derivative of a (nt x np) boundary array;
// parity = +1/-1 is the sign picked up when continuing across the poles
// (one factor of -1 per theta index of the represented component).
std::vector<double> btheta_deriv(const Grid& G, const std::vector<double>& a, double parity,
                                 int order) {
  int nt = G.ntheta(), np = G.nphi();
  const auto& row = (order == 1) ? G.dtheta_row() : G.dtheta2_row();
  int N = 2 * nt;
  std::vector<double> out(a.size());
  std::vector<double> ext(N);
  for (int ip = 0; ip < np; ++ip) {
    int ipo = (ip + np / 2) % np;
    for (int j = 0; j < nt; ++j) ext[j] = a[static_cast<std::size_t>(j) * np + ip];
    for (int j = nt; j < N; ++j)
      ext[j] = parity * a[static_cast<std::size_t>(2 * nt - 1 - j) * np + ipo];
    for (int j = 0; j < nt; ++j) {
      double acc = (order == 1) ? 0.0 : row[0] * ext[j];
      for (int d = 1; d < N; ++d) acc += row[d] * ext[(j + d) % N];
      out[static_cast<std::size_t>(j) * np + ip] = acc;
    }
  }
  return out;
}

std::vector<double> bphi_deriv(const Grid& G, const std::vector<double>& a, int order) {
  int nt = G.ntheta(), np = G.nphi();
  const auto& row = (order == 1) ? G.dphi_row() : G.dphi2_row();
  std::vector<double> out(a.size());
  for (int it = 0; it < nt; ++it) {
    for (int j = 0; j < np; ++j) {
      double acc = (order == 1) ? 0.0 : row[0] * a[static_cast<std::size_t>(it) * np + j];
      for (int d = 1; d < np; ++d)
        acc += row[d] * a[static_cast<std::size_t>(it) * np + (j + d) % np];
      out[static_cast<std::size_t>(it) * np + j] = acc;
    }
  }
  return out;
}

}  // namespace

std::vector<double> boundary_scalar_curvature(const MetricCache& mc) {
  const Grid& G = *mc.g;
  BoundaryData bd = boundary_geometry(mc);
  int nt = G.ntheta(), np = G.nphi();
  std::size_t nb = static_cast<std::size_t>(nt) * np;
  std::vector<double> E(nb), F(nb), Gm(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    E[b] = bd.gammaT[b * 3 + 0];
    F[b] = bd.gammaT[b * 3 + 1];
    Gm[b] = bd.gammaT[b * 3 + 2];
  }
  // Brioschi formula for the Gauss curvature; R = 2K.
  auto Eu = btheta_deriv(G, E, +1.0, 1);
  auto Ev = bphi_deriv(G, E, 1);
  auto Evv = bphi_deriv(G, E, 2);
  auto Fu = btheta_deriv(G, F, -1.0, 1);
  auto Fv = bphi_deriv(G, F, 1);
  auto Fuv = bphi_deriv(G, Fu, 1);  // Fu has theta-parity +1; phi derivative keeps layout
  auto Gu = btheta_deriv(G, Gm, +1.0, 1);
  auto Gv = bphi_deriv(G, Gm, 1);
  auto Guu = btheta_deriv(G, Gm, +1.0, 2);
  std::vector<double> R(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    double det = E[b] * Gm[b] - F[b] * F[b];
    double m1[3][3] = {
        {-0.5 * Evv[b] + Fuv[b] - 0.5 * Guu[b], 0.5 * Eu[b], Fu[b] - 0.5 * Ev[b]},
        {Fv[b] - 0.5 * Gu[b], E[b], F[b]},
        {0.5 * Gv[b], F[b], Gm[b]}};
    double m2[3][3] = {{0.0, 0.5 * Ev[b], 0.5 * Gu[b]},
                       {0.5 * Ev[b], E[b], F[b]},
                       {0.5 * Gu[b], F[b], Gm[b]}};
    auto det3 = [](double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double Kg = (det3(m1) - det3(m2)) / (det * det);
    R[b] = 2.0 * Kg;
  }
  return R;
}

std::vector<double> boundary_tangential_divergence(const MetricCache& mc,
                                                   const ShellGeometry& sg, const Field& w) {
  const Grid& G = *mc.g;
  auto dw = grid::partials(w);
  int nt = G.ntheta(), np = G.nphi();
  std::vector<double> out(static_cast<std::size_t>(nt) * np);
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      std::size_t n = G.node(0, it, ip);
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      const double* gi = &mc.inv.data[n * 6];
      const double* Ga = &mc.gamma.data[n * 18];
      auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
      double nup[3] = {sg.n_up.at(n, 0), sg.n_up.at(n, 1), sg.n_up.at(n, 2)};
      double ndn[3] = {sg.n_dn.at(n, 0), sg.n_dn.at(n, 1), sg.n_dn.at(n, 2)};
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double covw = dw[i].at(n, j);
          for (int m = 0; m < 3; ++m) covw -= gam(m, i, j) * w.at(n, m);
          // P^{ij} = g^{ij} - n^i n^j
          double Pij = sym_at(gi, i, j) - nup[i] * nup[j];
          acc += Pij * covw;
          (void)ndn;
        }
      }
      out[b] = -acc;
    }
  }
  return out;
}

LinearizedBoundary linearized_boundary(const MetricCache& mc, const ShellGeometry& sg,
                                       const Field& h) {
  const Grid& G = *mc.g;
  std::size_t nn = G.num_nodes();
  // tr^T h = tr_g h - h(n,n) and the tangential 1-form h(n)^T, both as collar fields
  Field trTh(G, 1), hnT(G, 3), hnn(G, 1);
  for (std::size_t n = 0; n < nn; ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* h6 = &h.data[n * 6];
    double nup[3] = {sg.n_up.at(n, 0), sg.n_up.at(n, 1), sg.n_up.at(n, 2)};
    double ndn[3] = {sg.n_dn.at(n, 0), sg.n_dn.at(n, 1), sg.n_dn.at(n, 2)};
    double hn[3];
    mat_vec_sym(h6, nup, hn);  // h_{jk} n^k
    double v = hn[0] * nup[0] + hn[1] * nup[1] + hn[2] * nup[2];
    hnn.at(n, 0) = v;
    trTh.at(n, 0) = sym_contract(gi, h6) - v;
    for (int j = 0; j < 3; ++j) hnT.at(n, j) = hn[j] - v * ndn[j];
  }
  auto dtr = grid::partials(trTh);
  auto divT = boundary_tangential_divergence(mc, sg, hnT);
  int nt = G.ntheta(), np = G.nphi();
  LinearizedBoundary lb;
  lb.dH.resize(static_cast<std::size_t>(nt) * np);
  lb.dn.resize(static_cast<std::size_t>(nt) * np * 3);
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      std::size_t n = G.node(0, it, ip);
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      double ndtr = 0.0;
      for (int i = 0; i < 3; ++i) ndtr += sg.n_up.at(n, i) * dtr[i].at(n, 0);
      lb.dH[b] = 0.5 * ndtr + divT[b] - 0.5 * hnn.at(n, 0) * sg.H.at(n, 0);
      const double* gi = &mc.inv.data[n * 6];
      double wup[3];
      mat_vec_sym(gi, &hnT.data[n * 3], wup);
      for (int i = 0; i < 3; ++i) {
        lb.dn[b * 3 + i] = -0.5 * hnn.at(n, 0) * sg.n_up.at(n, i) - wup[i];
      }
    }
  }
  return lb;
}

IdentityResiduals identity_residuals(const MetricCache& mc) {
  const Grid& G = *mc.g;
  CurvatureBundle cb = connection_curvature(mc);
  ShellGeometry sg = shell_geometry(mc);
  auto Rg = boundary_scalar_curvature(mc);
  auto dH = grid::partials(sg.H);
  int nt = G.ntheta(), np = G.nphi();
  IdentityResiduals out;
  out.gauss.resize(static_cast<std::size_t>(nt) * np);
  out.riccati.resize(static_cast<std::size_t>(nt) * np);
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      std::size_t n = G.node(0, it, ip);
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      const double* gi = &mc.inv.data[n * 6];
      double nup[3] = {sg.n_up.at(n, 0), sg.n_up.at(n, 1), sg.n_up.at(n, 2)};
      // |A|^2 with both indices raised by g (A is tangential)
      double Aup[6];
      {
        const double* a6 = &sg.A.data[n * 6];
        for (int s = 0; s < 6; ++s) {
          int i = kSymPair[s][0], j = kSymPair[s][1];
          double acc = 0.0;
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
              acc += sym_at(gi, i, k) * sym_at(gi, j, l) * sym_at(a6, k, l);
          Aup[s] = acc;
        }
      }
      double A2 = 0.0;
      for (int s = 0; s < 6; ++s) {
        double mult = (kSymPair[s][0] == kSymPair[s][1]) ? 1.0 : 2.0;
        A2 += mult * Aup[s] * sg.A.at(n, s);
      }
      double ricnn = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ricnn += sym_at(&cb.ric.data[n * 6], i, j) * nup[i] * nup[j];
      double H = sg.H.at(n, 0);
      out.gauss[b] = A2 - H * H + Rg[b] - (cb.scal.at(n, 0) - 2.0 * ricnn);
      double nH = 0.0;
      for (int i = 0; i < 3; ++i) nH += nup[i] * dH[i].at(n, 0);
      out.riccati[b] = nH + A2 + ricnn;
    }
  }
  out.bianchi = divergence_sym2(mc, cb.ein);
  return out;
}

double collar_cutoff(double u) {
  if (u <= 0.25) return 1.0;
  if (u >= 0.5) return 0.0;
  double w = (0.5 - u) / 0.25;  // 1 at u=0.25, 0 at u=0.5
  return w * w * w * (10.0 - 15.0 * w + 6.0 * w * w);
}

Field collar_distance(const MetricCache& mc) {
  const Grid& G = *mc.g;
  Field out(G, 1);
  int nr = G.nr(), nt = G.ntheta(), np = G.nphi();
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      double acc = 0.0;
      double prev = 0.0;
      for (int ir = 0; ir < nr; ++ir) {
        std::size_t n = G.node(ir, it, ip);
        const double* gg = &mc.met.data[n * 6];
        double xh[3] = {G.jac(n, 0, 0), G.jac(n, 0, 1), G.jac(n, 0, 2)};
        double grr = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) grr += sym_at(gg, i, j) * xh[i] * xh[j];
        double v = std::sqrt(grr);
        if (ir > 0) acc += 0.5 * (v + prev) * (G.r(ir) - G.r(ir - 1));
        prev = v;
        out.at(n, 0) = acc;
      }
    }
  }
  return out;
}

namespace {

// per-column collar parameter u = s_g / s_g(r = 2)
Field collar_parameter(const MetricCache& mc) {
  const Grid& G = *mc.g;
  Field sdist = collar_distance(mc);
  Field out(G, 1);
  int nr = G.nr(), nt = G.ntheta(), np = G.nphi();
  // bracket r = 2
  int i2 = 0;
  while (i2 + 1 < nr && G.r(i2 + 1) < 2.0) ++i2;
  double w = (2.0 - G.r(i2)) / (G.r(i2 + 1) - G.r(i2));
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      double s2 = (1.0 - w) * sdist.at(G.node(i2, it, ip), 0) +
                  w * sdist.at(G.node(i2 + 1, it, ip), 0);
      for (int ir = 0; ir < nr; ++ir) {
        std::size_t n = G.node(ir, it, ip);
        out.at(n, 0) = sdist.at(n, 0) / s2;
      }
    }
  }
  return out;
}

}  // namespace

Field collar_extend_e1(const MetricCache& mc, const ShellGeometry& sg,
                       const std::vector<double>& tau) {
  const Grid& G = *mc.g;
  Field sdist = collar_distance(mc);
  Field u = collar_parameter(mc);
  Field h(G, 6);
  int nr = G.nr(), nt = G.ntheta(), np = G.nphi();
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      for (int ir = 0; ir < nr; ++ir) {
        std::size_t n = G.node(ir, it, ip);
        double f = collar_cutoff(u.at(n, 0));
        if (f == 0.0) continue;
        // transport tau radially, project tangentially, ramp linearly in s_g
        double nup[3] = {sg.n_up.at(n, 0), sg.n_up.at(n, 1), sg.n_up.at(n, 2)};
        double ndn[3] = {sg.n_dn.at(n, 0), sg.n_dn.at(n, 1), sg.n_dn.at(n, 2)};
        double tdot = 0.0;
        for (int k = 0; k < 3; ++k) tdot += nup[k] * tau[b * 3 + k];
        double w[3];
        for (int k = 0; k < 3; ++k) w[k] = -sdist.at(n, 0) * (tau[b * 3 + k] - tdot * ndn[k]);
        for (int s = 0; s < 6; ++s) {
          int i = kSymPair[s][0], j = kSymPair[s][1];
          h.at(n, s) = f * (ndn[i] * w[j] + ndn[j] * w[i]);
        }
      }
    }
  }
  return h;
}

Field collar_extend_e2(const MetricCache& mc, const ShellGeometry& sg, const Field& K,
                       const Field& h) {
  const Grid& G = *mc.g;
  Field u = collar_parameter(mc);
  Field out(G, 6);
  std::size_t nn = G.num_nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    double f = collar_cutoff(u.at(n, 0));
    if (f == 0.0) continue;
    const double* gi = &mc.inv.data[n * 6];
    double nup[3] = {sg.n_up.at(n, 0), sg.n_up.at(n, 1), sg.n_up.at(n, 2)};
    double ndn[3] = {sg.n_dn.at(n, 0), sg.n_dn.at(n, 1), sg.n_dn.at(n, 2)};
    double hn[3];
    mat_vec_sym(&h.data[n * 6], nup, hn);
    double hnn = hn[0] * nup[0] + hn[1] * nup[1] + hn[2] * nup[2];
    // n'_h = -h(n,n) n / 2 - (h(n)^T)^sharp
    double wlow[3], wup[3];
    for (int j = 0; j < 3; ++j) wlow[j] = hn[j] - hnn * ndn[j];
    mat_vec_sym(gi, wlow, wup);
    double nphp[3];
    for (int i = 0; i < 3; ++i) nphp[i] = -0.5 * hnn * nup[i] - wup[i];
    // zeta = -(K(n'_h))^T
    double kn[3];
    mat_vec_sym(&K.data[n * 6], nphp, kn);
    double kdot = kn[0] * nup[0] + kn[1] * nup[1] + kn[2] * nup[2];
    double zeta[3];
    for (int j = 0; j < 3; ++j) zeta[j] = -(kn[j] - kdot * ndn[j]);
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      out.at(n, s) = f * (ndn[i] * zeta[j] + ndn[j] * zeta[i]);
    }
  }
  return out;
}

}  // namespace bartnik::geometry

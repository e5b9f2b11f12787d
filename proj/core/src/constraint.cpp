#include "bartnik/constraint.hpp"

#include <cmath>
#include <stdexcept>

namespace bartnik::constraint {

using geometry::CurvatureBundle;
using geometry::ShellGeometry;
using grid::kSym;
using grid::kSymPair;

namespace {

inline double sym_at(const double* s, int i, int j) { return s[kSym[i][j]]; }

// raise both indices of a (0,2) at one node
void raise2(const double* gi, const double* t, double* out) {
  for (int s = 0; s < 6; ++s) {
    int i = kSymPair[s][0], j = kSymPair[s][1];
    double acc = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) acc += sym_at(gi, i, k) * sym_at(gi, j, l) * sym_at(t, k, l);
    out[s] = acc;
  }
}

void lower2(const double* gg, const double* t, double* out) { raise2(gg, t, out); }

double dot6(const double* a_up, const double* b_dn) {
  double acc = 0.0;
  for (int s = 0; s < 6; ++s) {
    double mult = (kSymPair[s][0] == kSymPair[s][1]) ? 1.0 : 2.0;
    acc += mult * a_up[s] * b_dn[s];
  }
  return acc;
}

// covariant derivative of a symmetric (2,0) tensor:
// nabla_k T^{ij} = d_k T^{ij} + Gamma^i_{km} T^{mj} + Gamma^j_{km} T^{im}
Field covariant_deriv_sym2_up(const MetricCache& mc, const Field& T) {
  const Grid& G = *mc.g;
  auto dT = grid::partials(T);
  Field out(G, 18);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* Ga = &mc.gamma.data[n * 18];
    auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
    const double* t = &T.data[n * 6];
    for (int k = 0; k < 3; ++k) {
      for (int s = 0; s < 6; ++s) {
        int i = kSymPair[s][0], j = kSymPair[s][1];
        double acc = dT[k].at(n, s);
        for (int m = 0; m < 3; ++m) {
          acc += gam(i, k, m) * sym_at(t, m, j) + gam(j, k, m) * sym_at(t, i, m);
        }
        out.at(n, k * 6 + s) = acc;
      }
    }
  }
  return out;
}

// covariant derivative of a raised vector: nabla_k Y^i
Field covariant_deriv_vec(const MetricCache& mc, const Field& Y) {
  const Grid& G = *mc.g;
  auto dY = grid::partials(Y);
  Field out(G, 9);  // k * 3 + i
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* Ga = &mc.gamma.data[n * 18];
    auto gam = [&](int l, int i, int j) { return Ga[l * 6 + kSym[i][j]]; };
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        double acc = dY[k].at(n, i);
        for (int m = 0; m < 3; ++m) acc += gam(i, k, m) * Y.at(n, m);
        out.at(n, k * 3 + i) = acc;
      }
    }
  }
  return out;
}

}  // namespace

Field momentum_of(const MetricCache& mc, const Field& K) {
  const Grid& G = *mc.g;
  Field out(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* k6 = &K.data[n * 6];
    double kup[6];
    raise2(gi, k6, kup);
    double trk = geometry::sym_contract(gi, k6);
    double sg = mc.sqrtg.at(n, 0);
    for (int s = 0; s < 6; ++s) out.at(n, s) = (kup[s] - trk * gi[s]) * sg;
  }
  return out;
}

Field extrinsic_of(const MetricCache& mc, const Field& pi) {
  const Grid& G = *mc.g;
  Field out(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gg = &mc.met.data[n * 6];
    const double* p6 = &pi.data[n * 6];
    double plow[6];
    lower2(gg, p6, plow);
    double trp = dot6(p6, gg);
    double sg = mc.sqrtg.at(n, 0);
    for (int s = 0; s < 6; ++s) out.at(n, s) = (plow[s] - 0.5 * trp * gg[s]) / sg;
  }
  return out;
}

InitialData make_initial_data(const Field& g, const Field& K) {
  InitialData d;
  d.mc = geometry::metric_cache(g);
  d.K = K;
  d.pi = momentum_of(d.mc, K);
  return d;
}

ConstraintValues evaluate_phi(const InitialData& data, PhiForm form) {
  const Grid& G = *data.mc.g;
  ConstraintValues cv;
  cv.u = Field(G, 1);
  cv.Z = Field(G, 3);
  CurvatureBundle cb = geometry::connection_curvature(data.mc);
  if (form == PhiForm::GK) {
    Field divK = geometry::divergence_sym2(data.mc, data.K);
    Field trK = geometry::trace_sym2(data.mc, data.K);
    auto dtrK = grid::partials(trK);
    for (std::size_t n = 0; n < G.num_nodes(); ++n) {
      const double* gi = &data.mc.inv.data[n * 6];
      const double* k6 = &data.K.data[n * 6];
      double kup[6];
      raise2(gi, k6, kup);
      double k2 = dot6(kup, k6);
      double tk = trK.at(n, 0);
      double sg = data.mc.sqrtg.at(n, 0);
      cv.u.at(n, 0) = (cb.scal.at(n, 0) - k2 + tk * tk) * sg;
      for (int i = 0; i < 3; ++i) {
        cv.Z.at(n, i) = -2.0 * (divK.at(n, i) + dtrK[i].at(n, 0)) * sg;
      }
    }
    return cv;
  }
  // momentum form: pi-hat = pi / sqrt(g)
  Field pihat(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double sg = data.mc.sqrtg.at(n, 0);
    for (int s = 0; s < 6; ++s) pihat.at(n, s) = data.pi.at(n, s) / sg;
  }
  Field covp = covariant_deriv_sym2_up(data.mc, pihat);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gg = &data.mc.met.data[n * 6];
    double sg = data.mc.sqrtg.at(n, 0);
    double plow[6];
    lower2(gg, &pihat.data[n * 6], plow);
    double p2 = dot6(&pihat.data[n * 6], plow);
    double trp = dot6(&pihat.data[n * 6], gg);
    cv.u.at(n, 0) = (cb.scal.at(n, 0) - (p2 - 0.5 * trp * trp)) * sg;
    for (int i = 0; i < 3; ++i) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
          acc += sym_at(gg, i, j) * covp.at(n, k * 6 + kSym[j][k]);
        }
      }
      cv.Z.at(n, i) = 2.0 * acc * sg;
    }
  }
  return cv;
}

ConstraintValues linearize_phi(const InitialData& data, const Deformation& def) {
  const Grid& G = *data.mc.g;
  const MetricCache& mc = data.mc;
  CurvatureBundle cb = geometry::connection_curvature(mc);
  ConstraintValues base = evaluate_phi(data, PhiForm::GK);

  Field trh = geometry::trace_sym2(mc, def.h);
  Field lap_trh = geometry::laplacian(mc, trh);
  Field divh = geometry::divergence_sym2(mc, def.h);
  Field divdivh = geometry::divergence_oneform(mc, divh);
  Field trp = geometry::trace_sym2(mc, def.p);
  auto dtrp = grid::partials(trp);
  Field divp = geometry::divergence_sym2(mc, def.p);
  Field beta_h = geometry::bianchi_operator(mc, def.h);
  Field covK = geometry::covariant_deriv_sym2(mc, data.K);
  Field covh = geometry::covariant_deriv_sym2(mc, def.h);

  // <K, h> field for its exterior derivative
  Field KdotH(G, 1);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gi = &mc.inv.data[n * 6];
    double kup[6];
    raise2(gi, &data.K.data[n * 6], kup);
    KdotH.at(n, 0) = dot6(kup, &def.h.data[n * 6]);
  }
  auto dKdotH = grid::partials(KdotH);

  ConstraintValues out;
  out.u = Field(G, 1);
  out.Z = Field(G, 3);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* k6 = &data.K.data[n * 6];
    const double* h6 = &def.h.data[n * 6];
    const double* p6 = &def.p.data[n * 6];
    double sg = mc.sqrtg.at(n, 0);
    double kup[6], hup[6], pup[6];
    raise2(gi, k6, kup);
    raise2(gi, h6, hup);
    raise2(gi, p6, pup);
    double trK = dot6(kup, &mc.met.data[n * 6]);
    double ricdoth = dot6(hup, &cb.ric.data[n * 6]);
    double Rprime = lap_trh.at(n, 0) + divdivh.at(n, 0) - ricdoth;
    // K o K contracted with h^ij: K_ik K_j^k h^ij
    double kkh = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double kk = 0.0;
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            kk += sym_at(k6, i, k) * sym_at(gi, k, l) * sym_at(k6, l, j);
        kkh += kk * sym_at(hup, i, j);
      }
    }
    double kh = dot6(kup, h6);
    double kp = dot6(kup, p6);
    double trp_v = trp.at(n, 0);
    out.u.at(n, 0) = Rprime * sg + (2.0 * kkh - 2.0 * trK * kh) * sg -
                     2.0 * (kp - trK * trp_v) * sg + 0.5 * trh.at(n, 0) * base.u.at(n, 0);
    for (int i = 0; i < 3; ++i) {
      // (delta'_h K)_i = h^jk nabla_j K_ki - K_i^j (beta h)_j + K^jk nabla_i h_jk / 2
      double t1 = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) t1 += sym_at(hup, j, k) * covK.at(n, j * 6 + kSym[k][i]);
      double t2 = 0.0;
      for (int j = 0; j < 3; ++j) {
        double kij = 0.0;
        for (int m = 0; m < 3; ++m) kij += sym_at(k6, i, m) * sym_at(gi, m, j);
        t2 += kij * beta_h.at(n, j);
      }
      double t3 = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) t3 += sym_at(kup, j, k) * covh.at(n, i * 6 + kSym[j][k]);
      double dprime = t1 - t2 + 0.5 * t3;
      out.Z.at(n, i) = -2.0 * (divp.at(n, i) + dtrp[i].at(n, 0)) * sg -
                       2.0 * (dprime - dKdotH[i].at(n, 0)) * sg +
                       0.5 * trh.at(n, 0) * base.Z.at(n, i);
    }
  }
  return out;
}

ConstraintValues linearize_phi_momentum(const InitialData& data, const MomentumDeformation& def) {
  const Grid& G = *data.mc.g;
  const MetricCache& mc = data.mc;
  CurvatureBundle cb = geometry::connection_curvature(mc);

  Field pihat(G, 6), sigmahat(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double sg = mc.sqrtg.at(n, 0);
    for (int s = 0; s < 6; ++s) {
      pihat.at(n, s) = data.pi.at(n, s) / sg;
      sigmahat.at(n, s) = def.sigma.at(n, s) / sg;
    }
  }
  Field trh = geometry::trace_sym2(mc, def.h);
  Field lap_trh = geometry::laplacian(mc, trh);
  Field divh = geometry::divergence_sym2(mc, def.h);
  Field divdivh = geometry::divergence_oneform(mc, divh);
  Field covh = geometry::covariant_deriv_sym2(mc, def.h);
  Field covpi = covariant_deriv_sym2_up(mc, pihat);
  Field covsig = covariant_deriv_sym2_up(mc, sigmahat);

  ConstraintValues out;
  out.u = Field(G, 1);
  out.Z = Field(G, 3);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* gg = &mc.met.data[n * 6];
    const double* h6 = &def.h.data[n * 6];
    const double* ph = &pihat.data[n * 6];
    const double* sh = &sigmahat.data[n * 6];
    double sg = mc.sqrtg.at(n, 0);
    double hup[6], plow[6];
    raise2(gi, h6, hup);
    lower2(gg, ph, plow);
    double trpi = dot6(ph, gg);
    double trsig = dot6(sh, gg);
    double p2 = dot6(ph, plow);
    double ricdoth = dot6(hup, &cb.ric.data[n * 6]);
    double Rprime = lap_trh.at(n, 0) + divdivh.at(n, 0) - ricdoth;
    // <h, pihat o pihat> = h_ij pihat^{ik} pihat_k^j
    double hpp = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double pp = 0.0;
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            pp += sym_at(ph, i, k) * sym_at(gg, k, l) * sym_at(ph, l, j);
        hpp += pp * sym_at(h6, i, j);
      }
    }
    double hpi = dot6(ph, h6);
    double pisig = dot6(sh, plow);
    out.u.at(n, 0) =
        (Rprime + 0.5 * cb.scal.at(n, 0) * trh.at(n, 0) - 2.0 * hpp + trpi * hpi +
         0.5 * trh.at(n, 0) * (p2 - 0.5 * trpi * trpi) - 2.0 * pisig + trpi * trsig) *
        sg;
    for (int i = 0; i < 3; ++i) {
      // 2[nabla_k sigmahat_i^k + h_ij nabla_k pihat^{jk}
      //   + pihat^{kl} nabla_k h_il - pihat^{kl} nabla_i h_kl / 2]
      double t1 = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
          t1 += sym_at(gg, i, j) * covsig.at(n, k * 6 + kSym[j][k]);
      double t2 = 0.0;
      for (int j = 0; j < 3; ++j) {
        double dpi = 0.0;
        for (int k = 0; k < 3; ++k) dpi += covpi.at(n, k * 6 + kSym[j][k]);
        t2 += sym_at(h6, i, j) * dpi;
      }
      double t3 = 0.0, t4 = 0.0;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          t3 += sym_at(ph, k, l) * covh.at(n, k * 6 + kSym[i][l]);
          t4 += sym_at(ph, k, l) * covh.at(n, i * 6 + kSym[k][l]);
        }
      }
      out.Z.at(n, i) = 2.0 * (t1 + t2 + t3 - 0.5 * t4) * sg;
    }
  }
  return out;
}

Deformation from_momentum_deformation(const InitialData& data, const MomentumDeformation& def) {
  const Grid& G = *data.mc.g;
  Deformation out;
  out.h = def.h;
  out.p = Field(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gg = &data.mc.met.data[n * 6];
    const double* gi = &data.mc.inv.data[n * 6];
    const double* h6 = &def.h.data[n * 6];
    const double* pi6 = &data.pi.data[n * 6];
    const double* s6 = &def.sigma.data[n * 6];
    double sg = data.mc.sqrtg.at(n, 0);
    double slow[6], pilow[6];
    lower2(gg, s6, slow);
    lower2(gg, pi6, pilow);
    double trs = dot6(s6, gg);
    double trpi = dot6(pi6, gg);
    double pih = dot6(pi6, h6);
    double trh = geometry::sym_contract(gi, h6);
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      double mixed = 0.0;  // pi_i^k h_kj + pi_j^k h_ki
      for (int k = 0; k < 3; ++k) {
        double pik_i = 0.0, pik_j = 0.0;
        for (int m = 0; m < 3; ++m) {
          pik_i += sym_at(gg, i, m) * sym_at(pi6, m, k);
          pik_j += sym_at(gg, j, m) * sym_at(pi6, m, k);
        }
        mixed += pik_i * sym_at(h6, k, j) + pik_j * sym_at(h6, k, i);
      }
      double v = slow[s] - 0.5 * trs * gg[s] + mixed - 0.5 * trpi * sym_at(h6, i, j) -
                 0.5 * pih * gg[s] - 0.5 * trh * (pilow[s] - 0.5 * trpi * gg[s]);
      out.p.at(n, s) = v / sg;
    }
  }
  return out;
}

MomentumDeformation to_momentum_deformation(const InitialData& data, const Deformation& def) {
  const Grid& G = *data.mc.g;
  MomentumDeformation out;
  out.h = def.h;
  out.sigma = Field(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gg = &data.mc.met.data[n * 6];
    const double* gi = &data.mc.inv.data[n * 6];
    const double* h6 = &def.h.data[n * 6];
    const double* pi6 = &data.pi.data[n * 6];
    double sg = data.mc.sqrtg.at(n, 0);
    double pilow[6];
    lower2(gg, pi6, pilow);
    double trpi = dot6(pi6, gg);
    double pih = dot6(pi6, h6);
    double trh = geometry::sym_contract(gi, h6);
    // W = sigma^flat - tr(sigma) g / 2 solved from the forward formula
    double W[6];
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      double mixed = 0.0;
      for (int k = 0; k < 3; ++k) {
        double pik_i = 0.0, pik_j = 0.0;
        for (int m = 0; m < 3; ++m) {
          pik_i += sym_at(gg, i, m) * sym_at(pi6, m, k);
          pik_j += sym_at(gg, j, m) * sym_at(pi6, m, k);
        }
        mixed += pik_i * sym_at(h6, k, j) + pik_j * sym_at(h6, k, i);
      }
      W[s] = sg * def.p.at(n, s) - mixed + 0.5 * trpi * sym_at(h6, i, j) + 0.5 * pih * gg[s] +
             0.5 * trh * (pilow[s] - 0.5 * trpi * gg[s]);
    }
    double trW = geometry::sym_contract(gi, W);
    double slow[6];
    for (int s = 0; s < 6; ++s) slow[s] = W[s] - trW * gg[s];
    double sup[6];
    raise2(gi, slow, sup);
    for (int s = 0; s < 6; ++s) out.sigma.at(n, s) = sup[s];
  }
  return out;
}

KidValues kid_operator(const InitialData& data, const Field& u_undensitized,
                       const SpacetimeVector& xi) {
  const Grid& G = *data.mc.g;
  const MetricCache& mc = data.mc;
  CurvatureBundle cb = geometry::connection_curvature(mc);
  Field dstar = geometry::delta_star(mc, xi.X);
  Field lieK = geometry::lie_sym2(mc, xi.X, data.K);
  Field hess = geometry::hessian_scalar(mc, xi.X0);
  KidValues out;
  out.E1 = Field(G, 6);
  out.E2 = Field(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* gg = &mc.met.data[n * 6];
    const double* k6 = &data.K.data[n * 6];
    double kup[6];
    raise2(gi, k6, kup);
    double trK = dot6(kup, gg);
    double x0 = xi.X0.at(n, 0);
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      out.E1.at(n, s) = 2.0 * x0 * k6[s] + 2.0 * dstar.at(n, s);
      double kok = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          kok += sym_at(k6, i, k) * sym_at(gi, k, l) * sym_at(k6, l, j);
      double bracket = -cb.ric.at(n, s) + 2.0 * kok - trK * k6[s] +
                       0.25 * u_undensitized.at(n, 0) * gg[s];
      out.E2.at(n, s) = hess.at(n, s) + lieK.at(n, s) + x0 * bracket;
    }
  }
  return out;
}

AdjointValues adjoint_phi_momentum(const InitialData& data, const SpacetimeVector& xi) {
  const Grid& G = *data.mc.g;
  const MetricCache& mc = data.mc;
  CurvatureBundle cb = geometry::connection_curvature(mc);
  Field pihat(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double sg = mc.sqrtg.at(n, 0);
    for (int s = 0; s < 6; ++s) pihat.at(n, s) = data.pi.at(n, s) / sg;
  }
  Field lap = geometry::laplacian(mc, xi.X0);
  Field hess = geometry::hessian_scalar(mc, xi.X0);
  Field dstar = geometry::delta_star(mc, xi.X);
  Field covpi = covariant_deriv_sym2_up(mc, pihat);
  Field covY = covariant_deriv_vec(mc, xi.X);

  AdjointValues out;
  out.a = Field(G, 6);
  out.b = Field(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    const double* gi = &mc.inv.data[n * 6];
    const double* gg = &mc.met.data[n * 6];
    const double* ph = &pihat.data[n * 6];
    double sg = mc.sqrtg.at(n, 0);
    double mu = xi.X0.at(n, 0);
    double plow[6];
    lower2(gg, ph, plow);
    double trpi = dot6(ph, gg);
    double p2 = dot6(ph, plow);
    double hessup[6], ricup[6];
    raise2(gi, &hess.data[n * 6], hessup);
    raise2(gi, &cb.ric.data[n * 6], ricup);
    double divY = 0.0;
    for (int k = 0; k < 3; ++k) divY += covY.at(n, k * 3 + k);
    for (int s = 0; s < 6; ++s) {
      int i = kSymPair[s][0], j = kSymPair[s][1];
      // b pairs with sigma^{ij}: -(2 mu K + Lie_Y g)_ij
      double Kij = plow[s] - 0.5 * trpi * gg[s];  // K from pihat, times sqrt(g)/sqrt(g)
      out.b.at(n, s) = -(2.0 * mu * Kij + 2.0 * dstar.at(n, s));
      // a pairs with h_ij
      double pp = 0.0;  // (pihat o pihat)^{ij}
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          pp += sym_at(ph, i, k) * sym_at(gg, k, l) * sym_at(ph, l, j);
      double sym_piDY = 0.0;  // pihat^{kj} nabla_k Y^i + pihat^{ki} nabla_k Y^j
      for (int k = 0; k < 3; ++k) {
        sym_piDY += sym_at(ph, k, j) * covY.at(n, k * 3 + i) +
                    sym_at(ph, k, i) * covY.at(n, k * 3 + j);
      }
      double YdP = 0.0;  // Y^k nabla_k pihat^{ij}
      for (int k = 0; k < 3; ++k) YdP += xi.X.at(n, k) * covpi.at(n, k * 6 + s);
      double a = lap.at(n, 0) * sym_at(gi, i, j) + hessup[s] - mu * ricup[s] +
                 0.5 * mu * cb.scal.at(n, 0) * sym_at(gi, i, j) - 2.0 * mu * pp +
                 mu * trpi * ph[s] + 0.5 * mu * (p2 - 0.5 * trpi * trpi) * sym_at(gi, i, j) -
                 sym_piDY + divY * ph[s] + YdP;
      out.a.at(n, s) = a * sg;
    }
  }
  return out;
}

double pair_constraint(const ConstraintValues& cv, const SpacetimeVector& xi) {
  const Grid& G = *cv.u.g;
  Field integrand(G, 1);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double acc = cv.u.at(n, 0) * xi.X0.at(n, 0);
    for (int i = 0; i < 3; ++i) acc += cv.Z.at(n, i) * xi.X.at(n, i);
    integrand.at(n, 0) = acc;
  }
  return grid::integrate_volume(integrand);
}

double pair_deformation(const MomentumDeformation& def, const AdjointValues& av) {
  const Grid& G = *def.h.g;
  Field integrand(G, 1);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double acc = 0.0;
    for (int s = 0; s < 6; ++s) {
      double mult = (kSymPair[s][0] == kSymPair[s][1]) ? 1.0 : 2.0;
      acc += mult * (def.h.at(n, s) * av.a.at(n, s) + def.sigma.at(n, s) * av.b.at(n, s));
    }
    integrand.at(n, 0) = acc;
  }
  return grid::integrate_volume(integrand);
}

BoundaryFormResult boundary_form_B(const InitialData& data, const SpacetimeVector& muY,
                                   const MomentumDeformation& def) {
  const Grid& G = *data.mc.g;
  const MetricCache& mc = data.mc;
  Field trh = geometry::trace_sym2(mc, def.h);
  auto dtrh = grid::partials(trh);
  Field covh = geometry::covariant_deriv_sym2(mc, def.h);
  auto dmu = grid::partials(muY.X0);
  int nt = G.ntheta(), np = G.nphi();
  BoundaryFormResult out;
  out.density.resize(static_cast<std::size_t>(nt) * np);
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      std::size_t n = G.node(0, it, ip);
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      const double* gi = &mc.inv.data[n * 6];
      const double* gg = &mc.met.data[n * 6];
      double sg = mc.sqrtg.at(n, 0);
      // flux direction: raised gradient of r (flat radial covector x-hat)
      double xh[3] = {G.jac(n, 0, 0), G.jac(n, 0, 1), G.jac(n, 0, 2)};
      double m[3];
      geometry::mat_vec_sym(gi, xh, m);
      double mu = muY.X0.at(n, 0);
      // line 1: m^i [ mu (nabla^j h_ij - nabla_i tr h) - h_ij nabla^j mu
      //              + tr h nabla_i mu ] sqrt(g)
      double line1 = 0.0;
      for (int i = 0; i < 3; ++i) {
        double divlike = 0.0;  // nabla^j h_ij
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            divlike += sym_at(gi, j, k) * covh.at(n, k * 6 + kSym[j][i]);
        double hgradmu = 0.0;  // h_ij nabla^j mu
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            hgradmu += sym_at(&def.h.data[n * 6], i, j) * sym_at(gi, j, k) * dmu[k].at(n, 0);
        line1 += m[i] * (mu * (divlike - dtrh[i].at(n, 0)) - hgradmu + trh.at(n, 0) * dmu[i].at(n, 0));
      }
      // line 2: 2 m^i [ Y_j sigma_i^j + Y^j pi^k_i h_jk - Y_i pi^{jk} h_jk / 2 ]
      // sigma and pi are densities, so no extra sqrt(g) on this line
      double ylow[3];
      geometry::mat_vec_sym(gg, &muY.X.data[n * 3], ylow);
      double line2 = 0.0;
      const double* s6 = &def.sigma.data[n * 6];
      const double* pi6 = &data.pi.data[n * 6];
      double pih = dot6(pi6, &def.h.data[n * 6]);
      for (int i = 0; i < 3; ++i) {
        double t1 = 0.0;  // Y_j sigma_i^j = Y_j g_ik sigma^{kj}
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) t1 += ylow[j] * sym_at(gg, i, k) * sym_at(s6, k, j);
        double t2 = 0.0;  // Y^j pi^k_i h_jk = Y^j g_im pi^{mk} h_jk
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            for (int mm = 0; mm < 3; ++mm)
              t2 += muY.X.at(n, j) * sym_at(gg, i, mm) * sym_at(pi6, mm, k) *
                    sym_at(&def.h.data[n * 6], j, k);
        double t3 = 0.5 * ylow[i] * pih;
        line2 += 2.0 * m[i] * (t1 + t2 - t3);
      }
      out.density[b] = line1 * sg + line2;
    }
  }
  // integral against the flat boundary measure (theta weights absorb sin)
  double total = 0.0;
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      total += G.theta_weights()[it] * G.phi_weight() *
               out.density[static_cast<std::size_t>(it) * np + ip];
    }
  }
  out.integral = total;
  return out;
}

double adjoint_check(const InitialData& data, const MomentumDeformation& def,
                     const SpacetimeVector& xi) {
  const Grid& G = *data.mc.g;
  ConstraintValues dphi = linearize_phi_momentum(data, def);
  double left = pair_constraint(dphi, xi);
  AdjointValues av = adjoint_phi_momentum(data, xi);
  double right = pair_deformation(def, av);
  SpacetimeVector minus_xi;
  minus_xi.X0 = Field(G, 1);
  minus_xi.X = Field(G, 3);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    minus_xi.X0.at(n, 0) = -xi.X0.at(n, 0);
    for (int i = 0; i < 3; ++i) minus_xi.X.at(n, i) = -xi.X.at(n, i);
  }
  BoundaryFormResult bf = boundary_form_B(data, minus_xi, def);
  return left - right - bf.integral;
}

Field q_operator(const MetricCache& mc, const Field& Y) {
  const Grid& G = *mc.g;
  Field dstar = geometry::delta_star(mc, Y);
  Field covY = covariant_deriv_vec(mc, Y);
  Field out(G, 6);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    double divY = 0.0;
    for (int k = 0; k < 3; ++k) divY += covY.at(n, k * 3 + k);
    double deltaY = -divY;
    for (int s = 0; s < 6; ++s) {
      out.at(n, s) = dstar.at(n, s) + deltaY * mc.met.at(n, s);
    }
  }
  return out;
}

Field q_adjoint(const MetricCache& mc, const Field& p) {
  const Grid& G = *mc.g;
  Field divp = geometry::divergence_sym2(mc, p);
  Field trp = geometry::trace_sym2(mc, p);
  auto dtr = grid::partials(trp);
  Field out(G, 3);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    for (int i = 0; i < 3; ++i) out.at(n, i) = divp.at(n, i) + dtr[i].at(n, 0);
  }
  return out;
}

Deformation boundary_surjectivity_data(const InitialData& data,
                                       const std::vector<double>& u_target,
                                       const std::vector<double>& z_target) {
  const Grid& G = *data.mc.g;
  const MetricCache& mc = data.mc;
  ShellGeometry sg = geometry::shell_geometry(mc);
  Field sdist = geometry::collar_distance(mc);
  int nt = G.ntheta(), np = G.nphi();
  if (u_target.size() != static_cast<std::size_t>(nt) * np ||
      z_target.size() != static_cast<std::size_t>(nt) * np * 3) {
    throw std::invalid_argument("boundary_surjectivity_data: target size mismatch");
  }
  // collar normalization radius: reuse the quintic cutoff against s_g(r=2)
  Deformation out;
  out.h = Field(G, 6);
  out.p = Field(G, 6);
  // per-column boundary coefficients
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      std::size_t nb = G.node(0, it, ip);
      std::size_t b = static_cast<std::size_t>(it) * np + ip;
      const double* gi0 = &mc.inv.data[nb * 6];
      const double* gg0 = &mc.met.data[nb * 6];
      double sgv = mc.sqrtg.at(nb, 0);
      double xh0[3] = {G.jac(nb, 0, 0), G.jac(nb, 0, 1), G.jac(nb, 0, 2)};
      double m0[3];
      geometry::mat_vec_sym(gi0, xh0, m0);
      double invN2 = 0.0;  // |dr|_g^2 = 1/N^2
      for (int i = 0; i < 3; ++i) invN2 += m0[i] * xh0[i];
      double N = 1.0 / std::sqrt(invN2);
      double grr = 0.0;  // g_ij xhat^i xhat^j
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) grr += sym_at(gg0, i, j) * xh0[i] * xh0[j];
      double a = -u_target[b] * N * N / (2.0 * grr * sgv);
      // split Z into normal and tangential parts against the unit normal
      double ndn0[3] = {sg.n_dn.at(nb, 0), sg.n_dn.at(nb, 1), sg.n_dn.at(nb, 2)};
      double nup0[3] = {sg.n_up.at(nb, 0), sg.n_up.at(nb, 1), sg.n_up.at(nb, 2)};
      double zn = 0.0;
      for (int i = 0; i < 3; ++i) zn += z_target[b * 3 + i] * nup0[i];
      double zt[3];
      for (int i = 0; i < 3; ++i) zt[i] = z_target[b * 3 + i] - zn * ndn0[i];
      double srr = std::sqrt(grr);
      double A = -zn * N / (4.0 * srr * sgv);
      double w[3];
      for (int i = 0; i < 3; ++i) w[i] = zt[i] * N / (2.0 * srr * sgv);
      // fill the radial column with the second/first order profiles
      double s2ref = 0.0;
      {
        int i2 = 0;
        while (i2 + 1 < G.nr() && G.r(i2 + 1) < 2.0) ++i2;
        double wgt = (2.0 - G.r(i2)) / (G.r(i2 + 1) - G.r(i2));
        s2ref = (1.0 - wgt) * sdist.at(G.node(i2, it, ip), 0) +
                wgt * sdist.at(G.node(i2 + 1, it, ip), 0);
      }
      for (int ir = 0; ir < G.nr(); ++ir) {
        std::size_t n = G.node(ir, it, ip);
        double s = sdist.at(n, 0);
        double f = geometry::collar_cutoff(s / s2ref);
        if (f == 0.0) continue;
        double psi = 0.5 * s * s * f;
        double rho = s * f;
        double ndn[3] = {sg.n_dn.at(n, 0), sg.n_dn.at(n, 1), sg.n_dn.at(n, 2)};
        for (int ss = 0; ss < 6; ++ss) {
          int i = kSymPair[ss][0], j = kSymPair[ss][1];
          out.h.at(n, ss) += a * psi * sg.proj_dn.at(n, ss);
          double q = A * sg.proj_dn.at(n, ss) + (ndn[i] * w[j] + ndn[j] * w[i]);
          out.p.at(n, ss) += rho * q;
        }
      }
    }
  }
  return out;
}

double kid_residual_norm(const InitialData& data, const Field& u_undensitized,
                         const SpacetimeVector& xi) {
  const Grid& G = *data.mc.g;
  KidValues kv = kid_operator(data, u_undensitized, xi);
  Field e1sq = geometry::inner_sym2(data.mc, kv.E1, kv.E1);
  Field e2sq = geometry::inner_sym2(data.mc, kv.E2, kv.E2);
  Field integrand(G, 1);
  for (std::size_t n = 0; n < G.num_nodes(); ++n) {
    integrand.at(n, 0) = (e1sq.at(n, 0) + e2sq.at(n, 0)) * data.mc.sqrtg.at(n, 0);
  }
  return std::sqrt(std::max(0.0, grid::integrate_volume(integrand)));
}

}  // namespace bartnik::constraint

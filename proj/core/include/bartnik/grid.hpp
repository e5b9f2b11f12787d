#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace bartnik::grid {

/// Spherical-shell grid on the exterior region: log-uniform radial nodes with
/// r = 1 exactly on the inner boundary and r = rmax on the outer one,
/// cell-centered theta on (0, pi) (no node at the poles), periodic phi.
/// Tensor fields are stored in Cartesian components, so every stored
/// component is a smooth scalar on each sphere.
class Grid {
 public:
  Grid(int n_r, int n_theta, int n_phi, double r_max);

  int nr() const { return nr_; }
  int ntheta() const { return nt_; }
  int nphi() const { return np_; }
  double rmax() const { return rmax_; }
  std::size_t num_nodes() const { return static_cast<std::size_t>(nr_) * nt_ * np_; }

  double r(int ir) const { return r_[ir]; }
  double theta(int it) const { return theta_[it]; }
  double phi(int ip) const { return phi_[ip]; }
  double ds() const { return ds_; }
  double dtheta() const { return dth_; }
  double dphi() const { return dph_; }

  std::size_t node(int ir, int it, int ip) const {
    return (static_cast<std::size_t>(ir) * nt_ + it) * np_ + ip;
  }
  /// Cartesian coordinates of a node.
  std::array<double, 3> x(std::size_t n) const { return {x_[0][n], x_[1][n], x_[2][n]}; }
  const std::vector<double>& coord(int axis) const { return x_[axis]; }

  /// Analytic chart derivatives at a node: jac(c, i) = d(chart_c)/d(x_i) with
  /// chart order (r, theta, phi); hess2(c, i, j) the second derivatives.
  double jac(std::size_t n, int c, int i) const { return jac_[(n * 3 + c) * 3 + i]; }
  double chart_hess(std::size_t n, int c, int i, int j) const {
    static constexpr int sym[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return hess_[(n * 3 + c) * 6 + sym[i][j]];
  }

  /// Quadrature weights: radial (for ds), theta (absorbing sin(theta)), phi.
  const std::vector<double>& radial_weights() const { return wr_; }
  const std::vector<double>& theta_weights() const { return wth_; }
  double phi_weight() const { return dph_; }

  // internals used by the derivative kernels
  const std::vector<double>& dr1_weights() const { return dr1_; }
  const std::vector<int>& dr1_start() const { return dr1_start_; }
  int dr1_width() const { return 5; }
  const std::vector<double>& dr2_weights() const { return dr2_; }
  const std::vector<int>& dr2_start() const { return dr2_start_; }
  int dr2_width() const { return dr2_width_; }
  const std::vector<double>& dtheta_row() const { return dth_row_; }   // 2*nt circulant
  const std::vector<double>& dtheta2_row() const { return dth2_row_; }
  const std::vector<double>& dphi_row() const { return dph_row_; }     // np circulant
  const std::vector<double>& dphi2_row() const { return dph2_row_; }

 private:
  int nr_, nt_, np_;
  double rmax_, ds_, dth_, dph_;
  std::vector<double> r_, theta_, phi_;
  std::array<std::vector<double>, 3> x_;
  std::vector<double> jac_, hess_;
  std::vector<double> wr_, wth_;
  std::vector<double> dr1_, dr2_;
  std::vector<int> dr1_start_, dr2_start_;
  int dr2_width_ = 6;
  std::vector<double> dth_row_, dth2_row_, dph_row_, dph2_row_;
};

/// Dense field of Cartesian components, node-major storage.
/// ncomp: 1 scalar, 3 vector/1-form, 6 symmetric 2-tensor.
struct Field {
  const Grid* g = nullptr;
  int ncomp = 0;
  std::vector<double> data;

  Field() = default;
  Field(const Grid& grid, int nc)
      : g(&grid), ncomp(nc), data(grid.num_nodes() * static_cast<std::size_t>(nc), 0.0) {}

  double& at(std::size_t n, int c) { return data[n * ncomp + c]; }
  double at(std::size_t n, int c) const { return data[n * ncomp + c]; }
  bool finite() const;
};

/// Index map for symmetric 2-tensors stored as 6 components.
inline constexpr int kSym[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
inline constexpr int kSymPair[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

/// build_grid: validates resolutions (all >= 4, n_phi even, r_max > 2).
Grid build_grid(int n_r, int n_theta, int n_phi, double r_max);

/// Chart-direction derivative data for one field, shared by the partial
/// derivative kernels: D_r f, D_theta f, D_phi f per component.
struct ChartDerivs {
  Field dr, dth, dph;
};
ChartDerivs chart_derivs(const Field& f);

/// Cartesian partial derivative of every component: result has the same
/// component count, d(f_c)/d(x_dir).  count = 1 or 2 (2 = repeated same
/// direction).  Mixed second partials: partial2.
Field differentiate(const Field& f, int direction, int count = 1);

/// All three Cartesian partials at once (one chart pass).
std::array<Field, 3> partials(const Field& f);

/// Symmetric second partial d^2 f / dx_i dx_j; exact symmetry in (i, j) by
/// construction.
Field partial2(const Field& f, int i, int j);

/// All six second partials of a field (per component, symmetric storage in
/// the leading index pair): result[kSym[i][j]] = d_i d_j f.
std::array<Field, 6> second_partials(const Field& f);

enum class Domain { Volume, InnerBoundary };

/// Integral of a scalar field with the flat measure.  Optional weight field
/// multiplies the integrand (used for induced-measure surface integrals and
/// metric volume densities).
double integrate_volume(const Field& f, const Field* weight = nullptr);
double integrate_inner_boundary(const Field& f, const Field* weight = nullptr);
/// Integral over the coordinate sphere of radius rs (interpolating radially
/// when rs is not a node), flat round measure rs^2 sin(theta).
double integrate_sphere(const Field& f, double rs, const Field* weight = nullptr);

/// Volume integral with a fitted power-law tail correction for the region
/// beyond rmax.  Returns the corrected value plus diagnostics.
struct TailCorrectedIntegral {
  double value = 0.0;       // truncated + tail
  double truncated = 0.0;   // integral over the grid
  double tail = 0.0;        // fitted correction
  double fitted_rate = 0.0; // decay rate of the shell flux
};
TailCorrectedIntegral integrate_volume_with_tail(const Field& f);

/// Interpolate all components of f onto the sphere of radius rs.
/// Output layout: (theta, phi) node-major, ncomp components per node.
std::vector<double> interp_to_sphere(const Field& f, double rs);

/// Power-law decay fit of shell RMS norms over the window [rmin, rmax].
struct DecayFit {
  double rate = 0.0;       // delta_est: f ~ coeff * r^(-rate)
  double coeff = 0.0;
  double residual = 0.0;   // RMS log residual
  int shells = 0;
};
DecayFit fit_power_decay(const Field& f, double rmin = 0.0, double rmax = 0.0);

/// Affine Killing-type asymptotics A^mu + Lambda_{mu nu} x^nu fitted over the
/// outer shells; Lambda is exactly antisymmetric by construction.
struct KillingAsymptotics {
  std::array<std::array<double, 4>, 4> Lambda{};  // Lambda[mu][nu]
  std::array<double, 4> A{};
  double remainder_rate = 0.0;
  double remainder_norm = 0.0;
};
KillingAsymptotics fit_killing(const Field& x0, const Field& xvec);

/// Least squares straight line y = a + b x; returns (a, b, rms residual).
std::array<double, 3> line_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/// Richardson extrapolation to 1/r -> 0 through (r_k, v_k) samples: fits a
/// polynomial in 1/r of degree n-1 and evaluates at 0.
double richardson_extrapolate(const std::vector<double>& rs, const std::vector<double>& vs);

}  // namespace bartnik::grid

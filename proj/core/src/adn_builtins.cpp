#include <stdexcept>

#include "bartnik/adn.hpp"

namespace bartnik::adn {

using sym::GaussRational;
using sym::MultiPoly;
using sym::Var;

namespace {

MultiPoly xi(int i) { return MultiPoly::var(static_cast<Var>(sym::VXI1 + i)); }
MultiPoly xi2() {
  return MultiPoly::var(sym::VXI1, 2) + MultiPoly::var(sym::VXI2, 2) +
         MultiPoly::var(sym::VXI3, 2);
}
MultiPoly eta(int a) {  // a = 2 or 3
  return MultiPoly::var(a == 2 ? sym::VETA2 : sym::VETA3);
}
MultiPoly I() { return MultiPoly::imag_unit(); }
MultiPoly C(long n) { return MultiPoly(GaussRational(n)); }
MultiPoly Q(long n, long d) { return MultiPoly(GaussRational::ratio(n, d)); }

// symmetric 2-tensor slot order: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
constexpr int kSymIdx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
const int kSymPair[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

/// Gauge-fixed linearized-Einstein style interior block acting on
/// (h11,h12,h13,h22,h23,h33,v).  The tensor rows are
///   a*|xi|^2 h_ij + b*xi_i xi_j tr h + c*|xi|^2 tr h delta_ij
///   + d*(xi^k xi^l h_kl) delta_ij + f*xi_i xi_j v + g*|xi|^2 delta_ij v
/// and the scalar row is
///   rh_tr*|xi|^2 tr h + rh_dd*(xi^k xi^l h_kl) + rv*|xi|^2 v.
SymbolMatrix interior_from_coeffs(const GaussRational& a, const GaussRational& b,
                                  const GaussRational& c, const GaussRational& d,
                                  const GaussRational& f, const GaussRational& g,
                                  const GaussRational& rh_tr, const GaussRational& rh_dd,
                                  const GaussRational& rv) {
  SymbolMatrix L(7, 7);
  MultiPoly nsq = xi2();
  for (int row = 0; row < 6; ++row) {
    int i = kSymPair[row][0], j = kSymPair[row][1];
    for (int col = 0; col < 6; ++col) {
      int k = kSymPair[col][0], l = kSymPair[col][1];
      long mult = (k == l) ? 1 : 2;  // h_kl and h_lk both contribute
      MultiPoly e;
      if (row == col) e += nsq.scaled(a);
      if (k == l) e += (xi(i) * xi(j)).scaled(b);
      if (i == j && k == l) e += nsq.scaled(c);
      if (i == j) e += (xi(k) * xi(l)).scaled(d * GaussRational(mult));
      L.at(row, col) = std::move(e);
    }
    L.at(row, 6) = (xi(i) * xi(j)).scaled(f) + (i == j ? nsq.scaled(g) : MultiPoly());
  }
  for (int col = 0; col < 6; ++col) {
    int k = kSymPair[col][0], l = kSymPair[col][1];
    long mult = (k == l) ? 1 : 2;
    MultiPoly e = (xi(k) * xi(l)).scaled(rh_dd * GaussRational(mult));
    if (k == l) e += nsq.scaled(rh_tr);
    L.at(6, col) = std::move(e);
  }
  L.at(6, 6) = nsq.scaled(rv);
  return L;
}

/// Rows (delta h - c_tr * d(tr h) - c_v * dv)_j for j = 0,1,2.
void fill_divergence_rows(SymbolMatrix& B, long c_tr, long c_v) {
  for (int j = 0; j < 3; ++j) {
    for (int col = 0; col < 6; ++col) {
      int k = kSymPair[col][0], l = kSymPair[col][1];
      MultiPoly e;
      if (k == j) e -= I() * xi(l);
      if (l == j && l != k) e -= I() * xi(k);
      if (k == l) e -= (I() * xi(j)).scaled(GaussRational(c_tr));
      B.at(j, col) = std::move(e);
    }
    B.at(j, 6) = -(I() * xi(j)).scaled(GaussRational(c_v));
  }
}

/// Rows h^T + c * v g^T on slots (22) (23) (33).
void fill_tangential_rows(SymbolMatrix& B, long c) {
  B.at(3, 3) = C(1);
  B.at(3, 6) = C(c);
  B.at(4, 4) = C(1);
  B.at(5, 5) = C(1);
  B.at(5, 6) = C(c);
}

/// Row H'_h + c * n(v): (1/2) n(tr^T h) + delta^T(h(n)^T) + c n(v).
/// Coefficients: h12 -> -i xi2, h13 -> -i xi3, h22 -> (i/2) xi1,
/// h33 -> (i/2) xi1, v -> c i xi1.  h11 carries no derivative term.
void fill_mean_curvature_row(SymbolMatrix& B, int row, long c) {
  B.at(row, 1) = -(I() * xi(1));
  B.at(row, 2) = -(I() * xi(2));
  B.at(row, 3) = Q(1, 2) * I() * xi(0);
  B.at(row, 5) = Q(1, 2) * I() * xi(0);
  B.at(row, 6) = (I() * xi(0)).scaled(GaussRational(c));
}

BvpOperatorSpec make_p1() {
  BvpOperatorSpec op;
  op.name = "P1";
  op.interior = SymbolMatrix(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      MultiPoly e = (xi(i) * xi(j)).scaled(GaussRational::ratio(3, 2));
      if (i == j) e += xi2().scaled(GaussRational::ratio(1, 2));
      op.interior.at(i, j) = std::move(e);
    }
  }
  op.boundary = SymbolMatrix(3, 3);
  op.boundary.at(0, 0) = I() * xi(0).scaled(GaussRational(-2));
  op.boundary.at(0, 1) = -(I() * xi(1));
  op.boundary.at(0, 2) = -(I() * xi(2));
  op.boundary.at(1, 0) = I() * xi(1);
  op.boundary.at(1, 1) = I() * xi(0);
  op.boundary.at(2, 0) = I() * xi(2);
  op.boundary.at(2, 2) = I() * xi(0);
  op.boundary_orders = {1, 1, 1};
  // dividing out (i/4)(z^2+|eta|^2) reproduces the classical reduced matrix
  // whose derivative determinant is 240*t^6
  op.strip_scalar = (MultiPoly::var(sym::VZ, 2) + MultiPoly::var(sym::VETA2, 2) +
                     MultiPoly::var(sym::VETA3, 2))
                        .scaled(GaussRational(mpq_class(0), mpq_class(1, 4)));
  op.notes.push_back(
      "rows: tr^T[delta*Y + (delta Y)g] and the two components of 2*delta*Y(n)^T; "
      "the factor 2 on the normal-tangential rows is an invertible row scaling");
  return op;
}

BvpOperatorSpec make_p2() {
  BvpOperatorSpec op;
  op.name = "P2";
  using R = GaussRational;
  op.interior = interior_from_coeffs(R::ratio(1, 2), R::ratio(1, 2), R::ratio(-1, 2),
                                     R::ratio(3, 2), R(4), R(2), R(1), R(-1), R(0));
  op.boundary = SymbolMatrix(7, 7);
  fill_divergence_rows(op.boundary, 0, 3);
  fill_tangential_rows(op.boundary, 0);
  fill_mean_curvature_row(op.boundary, 6, 0);
  op.boundary_orders = {1, 1, 1, 0, 0, 0, 1};
  return op;
}

BvpOperatorSpec make_l0_btilde() {
  BvpOperatorSpec op;
  op.name = "L0-Btilde";
  op.interior = SymbolMatrix(7, 7);
  for (int k = 0; k < 6; ++k) op.interior.at(k, k) = xi2().scaled(GaussRational::ratio(1, 2));
  op.interior.at(6, 6) = xi2();
  op.boundary = SymbolMatrix(7, 7);
  fill_divergence_rows(op.boundary, 0, 1);
  fill_tangential_rows(op.boundary, -2);
  fill_mean_curvature_row(op.boundary, 6, -2);
  op.boundary_orders = {1, 1, 1, 0, 0, 0, 1};
  op.notes.push_back(
      "mean-curvature row: h13 coefficient is -i*xi3 and h11 carries no derivative term");
  return op;
}

BvpOperatorSpec make_ptilde() {
  BvpOperatorSpec op;
  op.name = "Ptilde";
  using R = GaussRational;
  op.interior = interior_from_coeffs(R::ratio(1, 2), R::ratio(1, 2), R::ratio(-1, 2),
                                     R::ratio(3, 2), R(1), R(1), R(0), R(8), R(4));
  op.boundary = SymbolMatrix(7, 7);
  fill_divergence_rows(op.boundary, 0, 1);
  fill_tangential_rows(op.boundary, -2);
  fill_mean_curvature_row(op.boundary, 6, -2);
  op.boundary_orders = {1, 1, 1, 0, 0, 0, 1};
  return op;
}

BvpOperatorSpec make_pbar() {
  BvpOperatorSpec op;
  op.name = "Pbar";
  using R = GaussRational;
  op.interior = interior_from_coeffs(R::ratio(1, 2), R::ratio(3, 2), R::ratio(-1, 2),
                                     R::ratio(1, 2), R(8), R(0), R(1), R(1), R(4));
  op.boundary = SymbolMatrix(7, 7);
  fill_divergence_rows(op.boundary, 1, 8);
  fill_tangential_rows(op.boundary, 2);
  fill_mean_curvature_row(op.boundary, 6, 2);
  op.boundary_orders = {1, 1, 1, 0, 0, 0, 1};
  return op;
}

BvpOperatorSpec make_lbar0_bbar() {
  BvpOperatorSpec op;
  op.name = "Lbar0-Bbar";
  op.interior = SymbolMatrix(7, 7);
  for (int k = 0; k < 6; ++k) op.interior.at(k, k) = xi2();
  op.interior.at(6, 6) = xi2();
  // scalar row couples to h through 2*delta delta h, transcribed as the row
  // vector 2[-xi1^2, -xi1 xi2, -xi1 xi3, -xi2^2, -xi2 xi3, -xi3^2]
  op.interior.at(6, 0) = (xi(0) * xi(0)).scaled(GaussRational(-2));
  op.interior.at(6, 1) = (xi(0) * xi(1)).scaled(GaussRational(-2));
  op.interior.at(6, 2) = (xi(0) * xi(2)).scaled(GaussRational(-2));
  op.interior.at(6, 3) = (xi(1) * xi(1)).scaled(GaussRational(-2));
  op.interior.at(6, 4) = (xi(1) * xi(2)).scaled(GaussRational(-2));
  op.interior.at(6, 5) = (xi(2) * xi(2)).scaled(GaussRational(-2));

  op.boundary = SymbolMatrix(7, 7);
  fill_divergence_rows(op.boundary, 1, 8);
  fill_tangential_rows(op.boundary, 2);
  fill_mean_curvature_row(op.boundary, 6, 2);
  op.boundary_orders = {1, 1, 1, 0, 0, 0, 1};

  // invertible row operations reproducing the classical reduced boundary
  // matrix; determinant of this matrix is 1
  SymbolMatrix R(7, 7);
  R.at(0, 0) = -I();
  R.at(0, 6) = I().scaled(GaussRational(-4));
  R.at(1, 1) = I();
  R.at(1, 3) = eta(2).scaled(GaussRational(-2));
  R.at(1, 4) = -eta(3);
  R.at(1, 5) = eta(2).scaled(GaussRational(-2));
  R.at(2, 2) = I();
  R.at(2, 3) = eta(3).scaled(GaussRational(-2));
  R.at(2, 4) = -eta(2);
  R.at(2, 5) = eta(3).scaled(GaussRational(-2));
  R.at(3, 3) = C(1);
  R.at(4, 4) = C(1);
  R.at(5, 5) = C(1);
  R.at(6, 0) = I().scaled(GaussRational::ratio(1, 2));
  R.at(6, 6) = I();
  op.row_reduction = R;
  op.strip_scalar = (MultiPoly::var(sym::VZ, 2) + MultiPoly::var(sym::VETA2, 2) +
                     MultiPoly::var(sym::VETA3, 2))
                        .pow(5);
  op.notes.push_back("row reduction chosen so the reduced product matches the classical "
                     "seven-row reduced matrix; its determinant is 1");
  return op;
}

BvpOperatorSpec make_laplacian_dirichlet() {
  BvpOperatorSpec op;
  op.name = "laplacian-dirichlet";
  op.interior = SymbolMatrix(1, 1);
  op.interior.at(0, 0) = xi2();
  op.boundary = SymbolMatrix(1, 1);
  op.boundary.at(0, 0) = C(1);
  op.boundary_orders = {0};
  return op;
}

}  // namespace

BvpOperatorSpec builtin_operator(const std::string& name) {
  if (name == "P1") return make_p1();
  if (name == "P2") return make_p2();
  if (name == "L0-Btilde") return make_l0_btilde();
  if (name == "Ptilde") return make_ptilde();
  if (name == "Pbar") return make_pbar();
  if (name == "Lbar0-Bbar") return make_lbar0_bbar();
  if (name == "laplacian-dirichlet") return make_laplacian_dirichlet();
  throw std::invalid_argument("unknown builtin operator: " + name);
}

std::vector<std::string> builtin_operator_names() {
  return {"P1", "P2", "L0-Btilde", "Ptilde", "Pbar", "Lbar0-Bbar", "laplacian-dirichlet"};
}

}  // namespace bartnik::adn

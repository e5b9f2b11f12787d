#include "bartnik/symbol_matrix.hpp"

#include <stdexcept>

namespace bartnik::sym {

SymbolMatrix SymbolMatrix::identity(int n) {
  SymbolMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = MultiPoly(GaussRational(1));
  return m;
}

SymbolMatrix SymbolMatrix::operator*(const SymbolMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("SymbolMatrix: dimension mismatch");
  SymbolMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < o.cols_; ++j) {
      MultiPoly acc;
      for (int k = 0; k < cols_; ++k) acc += at(i, k) * o.at(k, j);
      r.at(i, j) = std::move(acc);
    }
  }
  return r;
}

SymbolMatrix SymbolMatrix::operator-(const SymbolMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("SymbolMatrix: dimension mismatch");
  SymbolMatrix r(rows_, cols_);
  for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

SymbolMatrix SymbolMatrix::scaled(const MultiPoly& f) const {
  SymbolMatrix r(rows_, cols_);
  for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i] * f;
  return r;
}

SymbolMatrix SymbolMatrix::transposed() const {
  SymbolMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

SymbolMatrix SymbolMatrix::subst(
    const std::array<std::optional<MultiPoly>, kNumVars>& images) const {
  SymbolMatrix r(rows_, cols_);
  for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i].subst(images);
  return r;
}

SymbolMatrix SymbolMatrix::subst_z_it() const {
  SymbolMatrix r(rows_, cols_);
  for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i].subst_z_it();
  return r;
}

SymbolMatrix SymbolMatrix::d_dz() const {
  SymbolMatrix r(rows_, cols_);
  for (int i = 0; i < rows_ * cols_; ++i) r.e_[i] = e_[i].d_dz();
  return r;
}

namespace {

MultiPoly det_cofactor(const SymbolMatrix& m) {
  int n = m.rows();
  if (n == 1) return m.at(0, 0);
  if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  MultiPoly det;
  for (int j = 0; j < n; ++j) {
    if (m.at(0, j).is_zero()) continue;
    SymbolMatrix minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor.at(r - 1, cc++) = m.at(r, c);
      }
    }
    MultiPoly term = m.at(0, j) * det_cofactor(minor);
    if (j % 2 == 0) {
      det += term;
    } else {
      det -= term;
    }
  }
  return det;
}

// Fraction-free Bareiss elimination.  Every division is exact in the
// polynomial ring, so the result is the exact determinant.
MultiPoly det_bareiss(SymbolMatrix m) {
  int n = m.rows();
  MultiPoly prev(GaussRational(1));
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k).is_zero()) {
      int swap = -1;
      for (int r = k + 1; r < n; ++r) {
        if (!m.at(r, k).is_zero()) {
          swap = r;
          break;
        }
      }
      if (swap < 0) return MultiPoly();  // singular
      for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(swap, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        MultiPoly num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        auto q = num.exact_divide(prev);
        if (!q) throw std::logic_error("Bareiss: non-exact division");
        m.at(i, j) = std::move(*q);
      }
    }
    for (int i = k + 1; i < n; ++i) m.at(i, k) = MultiPoly();
    prev = m.at(k, k);
    if (prev.is_zero()) return MultiPoly();
  }
  MultiPoly det = m.at(n - 1, n - 1);
  return sign > 0 ? det : -det;
}

}  // namespace

MultiPoly mat_det(const SymbolMatrix& m) {
  if (!m.square()) throw std::invalid_argument("mat_det: non-square matrix");
  if (m.rows() == 0) return MultiPoly(GaussRational(1));
  if (m.rows() <= 4) return det_cofactor(m);
  return det_bareiss(m);
}

DetAdj mat_det_adj(const SymbolMatrix& m) {
  if (!m.square()) throw std::invalid_argument("mat_det_adj: non-square matrix");
  int n = m.rows();
  DetAdj out;
  out.det = mat_det(m);
  out.adj = SymbolMatrix(n, n);
  if (n == 1) {
    out.adj.at(0, 0) = MultiPoly(GaussRational(1));
    return out;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      SymbolMatrix minor(n - 1, n - 1);
      int rr = 0;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        int cc = 0;
        for (int c = 0; c < n; ++c) {
          if (c == j) continue;
          minor.at(rr, cc++) = m.at(r, c);
        }
        ++rr;
      }
      MultiPoly cof = mat_det(minor);
      if ((i + j) % 2 != 0) cof = -cof;
      out.adj.at(j, i) = std::move(cof);  // adjugate = transposed cofactors
    }
  }
  return out;
}

}  // namespace bartnik::sym

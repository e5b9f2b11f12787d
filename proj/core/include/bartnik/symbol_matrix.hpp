#pragma once

#include <initializer_list>
#include <vector>

#include "bartnik/multipoly.hpp"

namespace bartnik::sym {

/// Dense rectangular matrix of exact polynomials.
class SymbolMatrix {
 public:
  SymbolMatrix() = default;
  SymbolMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

  static SymbolMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  MultiPoly& at(int r, int c) { return e_[r * cols_ + c]; }
  const MultiPoly& at(int r, int c) const { return e_[r * cols_ + c]; }

  SymbolMatrix operator*(const SymbolMatrix& o) const;
  SymbolMatrix operator-(const SymbolMatrix& o) const;
  SymbolMatrix scaled(const MultiPoly& f) const;
  SymbolMatrix transposed() const;

  /// Apply a substitution entry-wise.
  SymbolMatrix subst(const std::array<std::optional<MultiPoly>, kNumVars>& images) const;
  SymbolMatrix subst_z_it() const;
  SymbolMatrix d_dz() const;

  friend bool operator==(const SymbolMatrix& a, const SymbolMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<MultiPoly> e_;
};

/// Exact determinant of a square matrix.  Cofactor expansion for n <= 4,
/// fraction-free Bareiss elimination above.
MultiPoly mat_det(const SymbolMatrix& m);

/// Exact determinant and adjugate with adj*m = m*adj = det*I.
struct DetAdj {
  MultiPoly det;
  SymbolMatrix adj;
};
DetAdj mat_det_adj(const SymbolMatrix& m);

}  // namespace bartnik::sym

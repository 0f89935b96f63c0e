#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "fontaine/errors.hpp"

namespace fontaine {

using Int = mpz_class;
using Vec = std::vector<Int>;

// Dense integer matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
  static Matrix from_columns(const std::vector<Vec>& cols, std::size_t nrows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec column(std::size_t j) const;
  void set_column(std::size_t j, const Vec& v);
  Matrix hconcat(const Matrix& other) const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& b) const;
  Vec operator*(const Vec& v) const;
  bool operator==(const Matrix& b) const { return rows_ == b.rows_ && cols_ == b.cols_ && a_ == b.a_; }
  bool is_diagonal() const;

  // Bareiss; square only.
  Int det() const;

  std::string str() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

struct SnfResult {
  Matrix U, S, V;  // U * A * V = S
};

// Smith normal form with minimal-|entry| pivoting, ties broken by lowest (row, col).
SnfResult snf(const Matrix& a);

// Diagonal of the SNF, length = rows, padded with zeros; nonnegative and divisibility-ordered.
std::vector<Int> invariant_factors(const Matrix& a);

// Column Hermite normal form of the lattice spanned by the columns of `a` (must have full row
// rank). Upper triangular, positive diagonal, 0 <= H(i,j) < H(i,i) for j > i.  If `modulus` is
// nonzero it must satisfy modulus * Z^n inside the lattice; entries are then kept reduced.
Matrix hnf(const Matrix& a, const Int& modulus = 0);

// Rank over the field with two elements of the columns of `a` reduced mod 2.
std::size_t rank_mod2(const Matrix& a);

// Solve H x = v for upper-triangular H; returns false if no integral solution.
bool solve_upper(const Matrix& h, const Vec& v, Vec& x);

class FinAbGroup {
 public:
  FinAbGroup() = default;
  // ngens x nrels; each column is a relation among the abstract generators.
  explicit FinAbGroup(Matrix relations);

  static FinAbGroup cyclic(const Int& n);
  static FinAbGroup direct_sum(const FinAbGroup& a, const FinAbGroup& b);

  std::size_t ngens() const { return rel_.rows(); }
  const Matrix& relations() const { return rel_; }
  const std::vector<Int>& invariants() const { return inv_; }
  std::vector<Int> cyclic_factors() const;  // invariants without the 1s

  bool is_finite() const;
  Int order() const;
  std::size_t two_rank() const;
  bool is_two_group() const;
  Int odd_part_order() const;
  Int two_part_order() const;

  // Coordinates with respect to the SNF basis: entry i reduced into [0, d_i) when d_i > 0.
  Vec reduce(const Vec& x) const;
  bool is_zero(const Vec& x) const;
  bool in_twice(const Vec& x) const;  // x in 2G

  FinAbGroup quotient(const std::vector<Vec>& sub) const;
  // dim over F2 of G / (2G + <sub>)
  std::size_t elementary_quotient_dim(const std::vector<Vec>& sub) const;

  std::vector<std::string> labels;

 private:
  Matrix rel_;
  Matrix u_;
  std::vector<Int> inv_;
};

}  // namespace fontaine

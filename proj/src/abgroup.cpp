#include "fontaine/abgroup.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace fontaine {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InfiniteGroup: return "InfiniteGroup";
    case ErrorCode::BadModulus: return "BadModulus";
    case ErrorCode::NonCoprimeArtinQuery: return "NonCoprimeArtinQuery";
    case ErrorCode::FactorizationMismatch: return "FactorizationMismatch";
    case ErrorCode::RamifiedAtTwo: return "RamifiedAtTwo";
    case ErrorCode::MissingExtensionData: return "MissingExtensionData";
    case ErrorCode::EmptyS: return "EmptyS";
    case ErrorCode::UnsortableContext: return "UnsortableContext";
    case ErrorCode::RootDiscTooLarge: return "RootDiscTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::SchemaDrift: return "SchemaDrift";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::NoGenerator: return "NoGenerator";
  }
  return "Error";
}

// ------------------------------------------------------------------ Matrix

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t r = rows.size(), c = r ? rows.begin()->size() : 0;
  Matrix m(r, c);
  std::size_t i = 0;
  for (auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, std::size_t nrows) {
  Matrix m(nrows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < nrows; ++i) m(i, j) = cols[j][i];
  return m;
}

Vec Matrix::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, const Vec& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::hconcat(const Matrix& o) const {
  std::size_t r = rows_ ? rows_ : o.rows_;
  Matrix m(r, cols_ + o.cols_);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < o.cols_; ++j) m(i, cols_ + j) = o(i, j);
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& b) const {
  Matrix c(rows_, b.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& x = (*this)(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
    }
  return c;
}

Vec Matrix::operator*(const Vec& v) const {
  Vec r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) r[i] += (*this)(i, k) * v[k];
  return r;
}

bool Matrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

Int Matrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
  std::size_t n = rows_;
  if (n == 0) return 1;
  Matrix m = *this;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  Int d = m(n - 1, n - 1);
  return sign > 0 ? d : Int(-d);
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
  }
  os << "]";
  return os.str();
}

// --------------------------------------------------------------------- SNF

namespace {

void row_swap(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void col_swap(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row_a -= q * row_b
void row_axpy(Matrix& m, std::size_t a, std::size_t b, const Int& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (m(b, j) != 0) m(a, j) -= q * m(b, j);
}
void col_axpy(Matrix& m, std::size_t a, std::size_t b, const Int& q) {
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (m(i, b) != 0) m(i, a) -= q * m(i, b);
}

Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SnfResult snf(const Matrix& a) {
  const std::size_t r = a.rows(), c = a.cols();
  SnfResult res{Matrix::identity(r), a, Matrix::identity(c)};
  Matrix& S = res.S;
  Matrix& U = res.U;
  Matrix& V = res.V;
  const std::size_t lim = std::min(r, c);
  for (std::size_t t = 0; t < lim; ++t) {
    for (;;) {
      // pivot: minimal nonzero |entry| in the active block, lowest (row, col) on ties
      bool found = false;
      std::size_t pi = 0, pj = 0;
      Int best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j) {
          if (S(i, j) == 0) continue;
          Int v = abs(S(i, j));
          if (!found || v < best) {
            found = true;
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (!found) return res;
      row_swap(S, t, pi);
      row_swap(U, t, pi);
      col_swap(S, t, pj);
      col_swap(V, t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (S(i, t) == 0) continue;
        Int q = fdiv(S(i, t), S(t, t));
        row_axpy(S, i, t, q);
        row_axpy(U, i, t, q);
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (S(t, j) == 0) continue;
        Int q = fdiv(S(t, j), S(t, t));
        col_axpy(S, j, t, q);
        col_axpy(V, j, t, q);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: fold an offending row into row t and go again
      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (S(i, j) % S(t, t) != 0) {
            row_axpy(S, t, i, -1);
            row_axpy(U, t, i, -1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (S(t, t) < 0) {
      for (std::size_t j = 0; j < c; ++j) S(t, j) = -S(t, j);
      for (std::size_t j = 0; j < r; ++j) U(t, j) = -U(t, j);
    }
  }
  return res;
}

std::vector<Int> invariant_factors(const Matrix& a) {
  if (a.cols() == 0) return std::vector<Int>(a.rows(), Int(0));
  SnfResult s = snf(a);
  std::vector<Int> d(a.rows());
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) d[i] = s.S(i, i);
  return d;
}

// --------------------------------------------------------------------- HNF

namespace {

void reduce_mod(Vec& v, const Int& m) {
  for (auto& x : v) {
    if (x >= m || x <= -m) x %= m;
  }
}

}  // namespace

Matrix hnf(const Matrix& a, const Int& modulus) {
  const std::size_t n = a.rows();
  std::vector<Vec> work;
  for (std::size_t j = 0; j < a.cols(); ++j) work.push_back(a.column(j));
  // With D*Z^n inside the lattice, D*e_k is appended when row k is reached, so entries may be
  // reduced mod D at any time without changing the span.
  if (modulus != 0)
    for (auto& w : work) reduce_mod(w, modulus);
  std::vector<Vec> out(n);
  for (std::size_t ii = n; ii-- > 0;) {
    if (modulus != 0) {
      Vec e(n);
      e[ii] = modulus;
      work.push_back(std::move(e));
    }
    std::size_t p = work.size();
    for (std::size_t j = 0; j < work.size(); ++j)
      if (work[j][ii] != 0) {
        p = j;
        break;
      }
    if (p == work.size()) throw std::invalid_argument("hnf: lattice not of full rank");
    for (std::size_t j = p + 1; j < work.size(); ++j) {
      if (work[j][ii] == 0) continue;
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), work[p][ii].get_mpz_t(),
                 work[j][ii].get_mpz_t());
      Int ap = work[p][ii] / g, bj = work[j][ii] / g;
      Vec np(n), nj(n);
      for (std::size_t k = 0; k <= ii; ++k) {
        np[k] = s * work[p][k] + t * work[j][k];
        nj[k] = ap * work[j][k] - bj * work[p][k];
      }
      if (modulus != 0) {
        for (std::size_t k = 0; k < ii; ++k) {
          np[k] %= modulus;
          nj[k] %= modulus;
        }
      }
      work[p] = std::move(np);
      work[j] = std::move(nj);
    }
    Vec col = std::move(work[p]);
    work.erase(work.begin() + static_cast<long>(p));
    if (col[ii] < 0)
      for (auto& x : col) x = -x;
    out[ii] = std::move(col);
    // drop columns that became zero
    work.erase(std::remove_if(work.begin(), work.end(),
                              [](const Vec& v) {
                                return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
                              }),
               work.end());
  }
  Matrix h = Matrix::from_columns(out, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i-- > 0;) {
      Int q = fdiv(h(i, j), h(i, i));
      if (q != 0)
        for (std::size_t k = 0; k <= i; ++k) h(k, j) -= q * h(k, i);
    }
  return h;
}

std::size_t rank_mod2(const Matrix& a) {
  std::vector<std::vector<char>> m(a.rows(), std::vector<char>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = mpz_odd_p(a(i, j).get_mpz_t()) ? 1 : 0;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < a.cols() && rank < a.rows(); ++j) {
    std::size_t p = rank;
    while (p < a.rows() && !m[p][j]) ++p;
    if (p == a.rows()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != rank && m[i][j])
        for (std::size_t k = 0; k < a.cols(); ++k) m[i][k] ^= m[rank][k];
    ++rank;
  }
  return rank;
}

bool solve_upper(const Matrix& h, const Vec& v, Vec& x) {
  const std::size_t n = h.rows();
  Vec r = v;
  x.assign(n, Int(0));
  for (std::size_t i = n; i-- > 0;) {
    if (h(i, i) == 0) return false;
    if (r[i] % h(i, i) != 0) return false;
    x[i] = r[i] / h(i, i);
    for (std::size_t k = 0; k <= i; ++k) r[k] -= x[i] * h(k, i);
  }
  return true;
}

// -------------------------------------------------------------- FinAbGroup

FinAbGroup::FinAbGroup(Matrix relations) : rel_(std::move(relations)) {
  const std::size_t k = rel_.rows();
  if (rel_.cols() == 0) {
    u_ = Matrix::identity(k);
    inv_.assign(k, Int(0));
    return;
  }
  SnfResult s = snf(rel_);
  u_ = std::move(s.U);
  inv_.assign(k, Int(0));
  for (std::size_t i = 0; i < std::min(k, rel_.cols()); ++i) inv_[i] = s.S(i, i);
}

FinAbGroup FinAbGroup::cyclic(const Int& n) {
  Matrix m(1, 1);
  m(0, 0) = n;
  return FinAbGroup(m);
}

FinAbGroup FinAbGroup::direct_sum(const FinAbGroup& a, const FinAbGroup& b) {
  Matrix m(a.ngens() + b.ngens(), a.rel_.cols() + b.rel_.cols());
  for (std::size_t i = 0; i < a.ngens(); ++i)
    for (std::size_t j = 0; j < a.rel_.cols(); ++j) m(i, j) = a.rel_(i, j);
  for (std::size_t i = 0; i < b.ngens(); ++i)
    for (std::size_t j = 0; j < b.rel_.cols(); ++j) m(a.ngens() + i, a.rel_.cols() + j) = b.rel_(i, j);
  FinAbGroup g(m);
  g.labels = a.labels;
  g.labels.insert(g.labels.end(), b.labels.begin(), b.labels.end());
  return g;
}

std::vector<Int> FinAbGroup::cyclic_factors() const {
  std::vector<Int> r;
  for (auto& d : inv_)
    if (d != 1) r.push_back(d);
  return r;
}

bool FinAbGroup::is_finite() const {
  return std::none_of(inv_.begin(), inv_.end(), [](const Int& d) { return d == 0; });
}

Int FinAbGroup::order() const {
  if (!is_finite()) throw Error(ErrorCode::InfiniteGroup, "group has free part");
  Int o = 1;
  for (auto& d : inv_) o *= d;
  return o;
}

std::size_t FinAbGroup::two_rank() const {
  if (!is_finite()) throw Error(ErrorCode::InfiniteGroup, "group has free part");
  std::size_t r = 0;
  for (auto& d : inv_)
    if (mpz_even_p(d.get_mpz_t())) ++r;
  return r;
}

Int FinAbGroup::odd_part_order() const {
  Int o = order();
  while (mpz_even_p(o.get_mpz_t())) o /= 2;
  return o;
}

Int FinAbGroup::two_part_order() const { return order() / odd_part_order(); }

bool FinAbGroup::is_two_group() const { return odd_part_order() == 1; }

Vec FinAbGroup::reduce(const Vec& x) const {
  Vec y = u_ * x;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (inv_[i] != 0) mpz_fdiv_r(y[i].get_mpz_t(), y[i].get_mpz_t(), inv_[i].get_mpz_t());
  return y;
}

bool FinAbGroup::is_zero(const Vec& x) const {
  Vec y = reduce(x);
  return std::all_of(y.begin(), y.end(), [](const Int& v) { return v == 0; });
}

bool FinAbGroup::in_twice(const Vec& x) const {
  Vec y = reduce(x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    // in Z/d with d odd everything is a double; with d even or 0 need y even
    if (inv_[i] != 0 && mpz_odd_p(inv_[i].get_mpz_t())) continue;
    if (mpz_odd_p(y[i].get_mpz_t())) return false;
  }
  return true;
}

FinAbGroup FinAbGroup::quotient(const std::vector<Vec>& sub) const {
  Matrix extra = Matrix::from_columns(sub, ngens());
  FinAbGroup q(rel_.hconcat(extra));
  q.labels = labels;
  return q;
}

std::size_t FinAbGroup::elementary_quotient_dim(const std::vector<Vec>& sub) const {
  std::vector<std::size_t> even;
  for (std::size_t i = 0; i < inv_.size(); ++i)
    if (inv_[i] == 0 || mpz_even_p(inv_[i].get_mpz_t())) even.push_back(i);
  if (even.empty()) return 0;
  Matrix m(even.size(), sub.size());
  for (std::size_t j = 0; j < sub.size(); ++j) {
    Vec y = reduce(sub[j]);
    for (std::size_t i = 0; i < even.size(); ++i) m(i, j) = y[even[i]];
  }
  return even.size() - rank_mod2(m);
}

}  // namespace fontaine

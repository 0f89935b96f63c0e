#include <algorithm>
#include <numeric>

#include "fontaine/fieldcore.hpp"

namespace fontaine {

Int Ideal::norm() const {
  Int n = 1;
  for (std::size_t i = 0; i < basis.rows(); ++i) n *= basis(i, i);
  return n;
}

bool Ideal::contains(const Vec& x) const {
  Vec sol;
  return solve_upper(basis, x, sol);
}

std::vector<Int> Ideal::encoding() const {
  std::vector<Int> e;
  e.reserve(basis.rows() * basis.cols());
  for (std::size_t i = 0; i < basis.rows(); ++i)
    for (std::size_t j = 0; j < basis.cols(); ++j) e.push_back(basis(i, j));
  return e;
}

Ideal NumberField::ideal(const std::vector<Vec>& gens, const Int& multiple) const {
  std::vector<Vec> cols;
  for (auto& g : gens) {
    Matrix m = mult_matrix(g);
    for (int j = 0; j < n_; ++j) cols.push_back(m.column(j));
  }
  Int d = abs(multiple);
  if (d != 0)
    for (int j = 0; j < n_; ++j) {
      Vec e(n_);
      e[j] = d;
      cols.push_back(e);
    }
  if (cols.empty()) throw Error(ErrorCode::BadModulus, "ideal with no generators");
  Matrix a = Matrix::from_columns(cols, n_);
  return Ideal{hnf(a, d)};
}

Ideal NumberField::unit_ideal() const { return Ideal{Matrix::identity(n_)}; }

Ideal NumberField::principal(const Vec& x) const {
  Int nx = abs(norm(x));
  if (nx == 0) throw Error(ErrorCode::BadModulus, "principal ideal of zero");
  return ideal({x}, nx);
}

Ideal NumberField::mul(const Ideal& a, const Ideal& b) const {
  std::vector<Vec> cols;
  for (int i = 0; i < n_; ++i) {
    Vec ai = a.basis.column(i);
    for (int j = 0; j < n_; ++j) cols.push_back(mul(ai, b.basis.column(j)));
  }
  Int d = a.norm() * b.norm();
  for (int j = 0; j < n_; ++j) {
    Vec e(n_);
    e[j] = d;
    cols.push_back(e);
  }
  return Ideal{hnf(Matrix::from_columns(cols, n_), d)};
}

Ideal NumberField::pow(const Ideal& a, int k) const {
  Ideal r = unit_ideal();
  for (int i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

Ideal NumberField::sum(const Ideal& a, const Ideal& b) const {
  Int d = gcd(a.norm(), b.norm());
  Matrix c = a.basis.hconcat(b.basis);
  return Ideal{hnf(c, d)};
}

Ideal NumberField::prime(const PrimeAboveTwo& p) const {
  return ideal({p.two_generators.first, p.two_generators.second}, 0);
}

bool NumberField::is_ideal(const Ideal& a) const {
  if (a.basis.rows() != static_cast<std::size_t>(n_) || a.basis.cols() != static_cast<std::size_t>(n_)) return false;
  for (int j = 0; j < n_; ++j) {
    Vec c = a.basis.column(j);
    for (int i = 0; i < n_; ++i) {
      Vec e(n_);
      e[i] = 1;
      if (!a.contains(mul(e, c))) return false;
    }
  }
  return true;
}

bool NumberField::comaximal(const Ideal& a, const Ideal& b) const { return sum(a, b).norm() == 1; }

Vec NumberField::reduce(const Vec& x, const Ideal& m) const {
  Vec r = x;
  for (int j = n_ - 1; j >= 0; --j) {
    const Int& d = m.basis(j, j);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r[j].get_mpz_t(), d.get_mpz_t());
    if (q == 0) continue;
    for (int i = 0; i <= j; ++i) r[i] -= q * m.basis(i, j);
  }
  return r;
}

std::vector<int> valuations(const NumberField& k, const Ideal& m, const std::vector<Ideal>& primes) {
  std::vector<int> v(primes.size(), 0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const Ideal& p = primes[i];
    Ideal pe = k.unit_ideal();
    for (;;) {
      Ideal next = k.mul(pe, p);
      bool inside = true;
      for (std::size_t j = 0; j < m.basis.cols() && inside; ++j) inside = next.contains(m.basis.column(j));
      if (!inside) break;
      pe = next;
      ++v[i];
      if (pe.norm() > m.norm()) break;
    }
  }
  Ideal prod = k.unit_ideal();
  for (std::size_t i = 0; i < primes.size(); ++i) prod = k.mul(prod, k.pow(primes[i], v[i]));
  if (!(prod == m)) throw Error(ErrorCode::BadModulus, "modulus is not supported on the given primes");
  return v;
}

}  // namespace fontaine

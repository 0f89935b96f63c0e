#include <algorithm>
#include <cassert>

#include "fontaine/fieldcore.hpp"

namespace fontaine {

// ------------------------------------------------------------ polynomials

namespace poly {

QPoly trim(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return trim(c);
}

QPoly divmod(const QPoly& a, const QPoly& b0, QPoly* quotient) {
  QPoly b = trim(b0);
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  QPoly r = trim(a);
  QPoly q;
  if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, Rat(0));
  const Rat lead = b.back();
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    Rat c = r.back() / lead;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    r.pop_back();
    r = trim(r);
  }
  if (quotient) *quotient = trim(q);
  return r;
}

QPoly derivative(const QPoly& p) {
  if (p.size() <= 1) return {};
  QPoly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long>(i);
  return trim(d);
}

QPoly gcd(QPoly a, QPoly b) {
  a = trim(a);
  b = trim(b);
  while (!b.empty()) {
    QPoly r = divmod(a, b, nullptr);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat l = a.back();
    for (auto& c : a) c /= l;
  }
  return a;
}

Rat eval(const QPoly& p, const Rat& x) {
  Rat r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

std::vector<QPoly> sturm_sequence(const QPoly& p0) {
  std::vector<QPoly> s;
  QPoly p = trim(p0);
  if (p.empty()) return s;
  s.push_back(p);
  QPoly d = derivative(p);
  if (d.empty()) return s;
  s.push_back(d);
  for (;;) {
    QPoly r = divmod(s[s.size() - 2], s.back(), nullptr);
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    s.push_back(std::move(r));
  }
  return s;
}

int sign_changes(const std::vector<QPoly>& seq, const Rat& x) {
  int changes = 0, last = 0;
  for (auto& q : seq) {
    int s = sgn(eval(q, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace poly

// -------------------------------------------------------- rational linalg

namespace {

using QMat = std::vector<std::vector<Rat>>;  // row-major

bool q_inverse(QMat a, QMat& inv) {
  const std::size_t n = a.size();
  inv.assign(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rat d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat m = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= m * a[c][j];
        inv[i][j] -= m * inv[c][j];
      }
    }
  }
  return true;
}

Rat q_det(QMat a) {
  const std::size_t n = a.size();
  Rat d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat m = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= m * a[c][j];
    }
  }
  return d;
}

Error invalid(const std::string& label, const std::string& what) {
  return Error(ErrorCode::ValidationError, label + ": " + what);
}

}  // namespace

// ------------------------------------------------------------ NumberField

NumberField::NumberField(FieldRecord rec) : rec_(std::move(rec)), n_(rec_.degree) {
  const std::size_t n = static_cast<std::size_t>(n_);
  const std::string& L = rec_.label;
  if (n_ < 1) throw invalid(L, "degree must be positive");
  if (rec_.poly.size() != n + 1) throw invalid(L, "poly has wrong length");
  if (rec_.poly.back() != 1) throw invalid(L, "poly not monic");
  if (rec_.r1 < 0 || rec_.r2 < 0 || rec_.r1 + 2 * rec_.r2 != n_) throw invalid(L, "signature does not match degree");
  if (rec_.integral_basis.size() != n) throw invalid(L, "integral_basis has wrong size");
  for (auto& w : rec_.integral_basis)
    if (w.size() != n) throw invalid(L, "integral_basis element has wrong length");
  fq_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fq_[i] = Rat(rec_.poly[i]);

  basis_ = rec_.integral_basis;
  QMat b(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i][j] = basis_[j][i];
  if (!q_inverse(b, binv_)) throw invalid(L, "integral_basis is singular");
  for (std::size_t i = 0; i < n; ++i)
    if (basis_[0][i] != (i == 0 ? 1 : 0)) throw invalid(L, "first basis element must be 1");

  // Newton power sums p_0 .. p_{2n-2}
  newton_.assign(2 * n, Rat(0));
  newton_[0] = static_cast<long>(n);
  for (std::size_t k = 1; k < 2 * n; ++k) {
    Rat s = 0;
    for (std::size_t i = 1; i <= std::min(k, n); ++i) {
      // coefficient c_{n-i} times p_{k-i}
      if (i < k || k > n) s += fq_[n - i] * newton_[k - i];
    }
    if (k <= n) s += fq_[n - k] * static_cast<long>(k);
    newton_[k] = -s;
  }

  table_.assign(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      QPoly p = poly::mul(basis_[i], basis_[j]);
      QPoly r = poly::divmod(p, fq_, nullptr);
      r.resize(n);
      Vec c(n);
      for (std::size_t a = 0; a < n; ++a) {
        Rat s = 0;
        for (std::size_t k2 = 0; k2 < n; ++k2) s += binv_[a][k2] * r[k2];
        if (s.get_den() != 1) throw invalid(L, "integral basis is not closed under multiplication");
        c[a] = s.get_num();
      }
      table_[i][j] = c;
      table_[j][i] = c;
    }

  if (rec_.r1 > 0) {
    if (n_ == 1) {
      roots_.push_back({-fq_[0], -fq_[0]});
    } else {
      f_sturm_ = poly::sturm_sequence(fq_);
      Rat bound = 1;
      for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, Rat(abs(fq_[i]) + 1));
      std::vector<std::pair<Rat, Rat>> stack{{-bound, bound}};
      while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        int cnt = poly::sign_changes(f_sturm_, lo) - poly::sign_changes(f_sturm_, hi);
        if (cnt == 0) continue;
        if (cnt == 1) {
          roots_.push_back({lo, hi});
          continue;
        }
        Rat mid = (lo + hi) / 2;
        if (poly::eval(fq_, mid) == 0) throw invalid(L, "poly has a rational root");
        stack.push_back({lo, mid});
        stack.push_back({mid, hi});
      }
      std::sort(roots_.begin(), roots_.end(),
                [](const auto& a, const auto& b) { return a.first + a.second < b.first + b.second; });
    }
  }
  if (static_cast<int>(roots_.size()) != rec_.r1) throw invalid(L, "number of real roots differs from r1");
}

Vec NumberField::one() const {
  Vec v(n_);
  v[0] = 1;
  return v;
}

Vec NumberField::from_int(const Int& a) const {
  Vec v(n_);
  v[0] = a;
  return v;
}

Vec NumberField::add(const Vec& a, const Vec& b) const {
  Vec r(n_);
  for (int i = 0; i < n_; ++i) r[i] = a[i] + b[i];
  return r;
}

Vec NumberField::sub(const Vec& a, const Vec& b) const {
  Vec r(n_);
  for (int i = 0; i < n_; ++i) r[i] = a[i] - b[i];
  return r;
}

Vec NumberField::mul(const Vec& a, const Vec& b) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  Vec r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      Int c = a[i] * b[j];
      const Vec& t = table_[i][j];
      for (std::size_t k = 0; k < n; ++k)
        if (t[k] != 0) r[k] += c * t[k];
    }
  }
  return r;
}

Vec NumberField::pow(const Vec& a, unsigned long e) const {
  Vec r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

Matrix NumberField::mult_matrix(const Vec& x) const {
  Matrix m(n_, n_);
  for (int j = 0; j < n_; ++j) {
    Vec e(n_);
    e[j] = 1;
    Vec c = mul(x, e);
    for (int i = 0; i < n_; ++i) m(i, j) = c[i];
  }
  return m;
}

Int NumberField::norm(const Vec& x) const { return mult_matrix(x).det(); }

Rat NumberField::trace(const Vec& x) const {
  QPoly p = to_power_basis(x);
  Rat t = 0;
  for (std::size_t k = 0; k < p.size(); ++k) t += p[k] * newton_[k];
  return t;
}

QPoly NumberField::to_power_basis(const Vec& x) const {
  QPoly p(n_, Rat(0));
  for (int j = 0; j < n_; ++j) {
    if (x[j] == 0) continue;
    for (int i = 0; i < n_; ++i) p[i] += basis_[j][i] * Rat(x[j]);
  }
  return p;
}

Vec NumberField::from_power_basis(const QPoly& p0) const {
  QPoly p = poly::divmod(p0, fq_, nullptr);
  p.resize(n_);
  Vec c(n_);
  for (int a = 0; a < n_; ++a) {
    Rat s = 0;
    for (int k = 0; k < n_; ++k) s += binv_[a][k] * p[k];
    if (s.get_den() != 1) throw invalid(rec_.label, "element is not integral");
    c[a] = s.get_num();
  }
  return c;
}

Int NumberField::poly_disc() const {
  Matrix h(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) h(i, j) = newton_[i + j].get_num();
  return h.det();
}

Int NumberField::field_disc() const {
  Matrix t(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      Rat tr = 0;
      const Vec& c = table_[i][j];
      for (int k = 0; k < n_; ++k) {
        Vec e(n_);
        e[k] = 1;
        if (c[k] != 0) tr += Rat(c[k]) * trace(e);
      }
      t(i, j) = tr.get_num();
    }
  return t.det();
}

Rat NumberField::basis_det() const {
  QMat b(n_, std::vector<Rat>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) b[i][j] = basis_[j][i];
  return q_det(b);
}

std::vector<int> NumberField::real_signs(const Vec& x) const {
  std::vector<int> out;
  out.reserve(roots_.size());
  QPoly g = poly::trim(to_power_basis(x));
  if (g.empty()) throw std::domain_error("real_signs of zero");
  if (g.size() == 1) {
    out.assign(roots_.size(), sgn(g[0]));
    return out;
  }
  if (n_ == 1) {
    out.push_back(sgn(poly::eval(g, roots_[0].first)));
    return out;
  }
  QPoly gs = g;
  QPoly d = poly::gcd(g, poly::derivative(g));
  if (d.size() > 1) poly::divmod(g, d, &gs);
  auto gseq = poly::sturm_sequence(gs);
  for (auto [lo, hi] : roots_) {
    for (;;) {
      Rat glo = poly::eval(gs, lo), ghi = poly::eval(gs, hi);
      if (glo != 0 && ghi != 0 && poly::sign_changes(gseq, lo) == poly::sign_changes(gseq, hi)) {
        // gs and g share their roots, but not their signs when g has repeated factors
        out.push_back(sgn(poly::eval(g, lo)));
        break;
      }
      Rat mid = (lo + hi) / 2;
      Rat fl = poly::eval(fq_, lo), fm = poly::eval(fq_, mid);
      if (sgn(fl) * sgn(fm) < 0)
        hi = mid;
      else
        lo = mid;
    }
  }
  return out;
}

}  // namespace fontaine

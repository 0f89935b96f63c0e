#include "fontaine/fieldcore.hpp"

namespace fontaine {

namespace {

Vec powmod(const NumberField& k, const Vec& x, Int e, const Ideal& m) {
  Vec r = k.reduce(k.one(), m), b = k.reduce(x, m);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = k.reduce(k.mul(r, b), m);
    e >>= 1;
    if (e > 0) b = k.reduce(k.mul(b, b), m);
  }
  return r;
}

// mixed-radix index of a reduced representative mod an HNF lattice
std::size_t residue_index(const Vec& r, const Ideal& p) {
  std::size_t idx = 0, radix = 1;
  for (std::size_t j = 0; j < r.size(); ++j) {
    idx += r[j].get_ui() * radix;
    radix *= p.basis(j, j).get_ui();
  }
  return idx;
}

}  // namespace

// (O/P^k)^x, presented by a primitive root of O/P and the 1 + P^i filtration.
struct ResidueUnitGroup::Component {
  Ideal p, pk;
  int k = 0;
  Int q;                   // N(P)
  Int m;                   // q - 1
  bool has_gamma = false;  // false when q = 2
  Vec gamma;
  std::vector<long> log_table;  // residue index -> exponent of gamma, -1 for 0
  struct Level {
    Matrix a;        // HNF of P^i
    Matrix u;        // left SNF transform of a^{-1} P^{i+1}
    std::vector<std::size_t> pos;
    std::vector<Int> order;  // size of each cyclic piece (2 when 2 is unramified)
    std::vector<Vec> gens;   // 1 + b
  };
  std::vector<Level> levels;  // i = 1 .. k-1
  std::size_t ngens = 0;
  FinAbGroup group;

  std::size_t level_offset(std::size_t li) const {
    std::size_t off = has_gamma ? 1 : 0;
    for (std::size_t t = 0; t < li; ++t) off += levels[t].gens.size();
    return off;
  }

  // coordinates of y in U_1 w.r.t. the level generators; y * prod g^c lands one level deeper, so
  // each step contributes -c
  Vec dlog_u1(const NumberField& K, Vec y) const {
    Vec out(ngens);
    for (std::size_t li = 0; li < levels.size(); ++li) {
      const Level& L = levels[li];
      Vec z = K.sub(y, K.one());
      Vec w;
      if (!solve_upper(L.a, z, w)) throw std::logic_error("residue filtration: element not in level");
      Vec uw = L.u * w;
      std::size_t off = level_offset(li);
      Vec yy = y;
      for (std::size_t t = 0; t < L.pos.size(); ++t) {
        Int c;
        mpz_fdiv_r(c.get_mpz_t(), uw[L.pos[t]].get_mpz_t(), L.order[t].get_mpz_t());
        if (c == 0) continue;
        out[off + t] -= c;
        Vec g = powmod(K, L.gens[t], c, pk);
        yy = K.reduce(K.mul(yy, g), pk);
      }
      y = yy;
    }
    Vec r = K.reduce(y, pk);
    if (!(r == K.reduce(K.one(), pk))) throw std::logic_error("residue filtration did not terminate at 1");
    return out;
  }

  Vec dlog(const NumberField& K, const Vec& x) const {
    Vec out(ngens);
    Vec y = K.reduce(x, pk);
    if (has_gamma) {
      Vec r = K.reduce(x, p);
      long a = log_table[residue_index(r, p)];
      if (a < 0) throw Error(ErrorCode::NonCoprimeArtinQuery, "element not coprime to the modulus");
      if (levels.empty()) {
        out[0] = a;
        return out;
      }
      // x = gamma^a * v with v in U_1;  x * gamma^(m-a) = v * gamma^m
      Vec t = K.reduce(K.mul(y, powmod(K, gamma, m - a, pk)), pk);
      Vec d = dlog_u1(K, t);
      Vec dg = dlog_u1(K, powmod(K, gamma, m, pk));
      for (std::size_t i = 0; i < ngens; ++i) out[i] = d[i] - dg[i];
      out[0] = a;
      return out;
    }
    Vec r = K.reduce(x, p);
    bool zero = true;
    for (auto& c : r) zero = zero && c == 0;
    if (zero) throw Error(ErrorCode::NonCoprimeArtinQuery, "element not coprime to the modulus");
    if (levels.empty()) return out;
    return dlog_u1(K, y);
  }
};

ResidueUnitGroup::ResidueUnitGroup(const NumberField& K, const std::vector<std::pair<Ideal, int>>& prime_powers)
    : k_(&K), modulus_(K.unit_ideal()) {
  const int n = K.degree();
  std::vector<Ideal> pks;
  for (auto& [p, k] : prime_powers) {
    if (k < 0) throw Error(ErrorCode::BadModulus, "negative exponent");
    if (k == 0) continue;
    if (!p.contains(K.from_int(2))) throw Error(ErrorCode::BadModulus, "modulus has an odd prime factor");
    auto c = std::make_shared<Component>();
    c->p = p;
    c->k = k;
    c->pk = K.pow(p, k);
    c->q = p.norm();
    c->m = c->q - 1;
    if (!c->q.fits_ulong_p() || c->q > (1u << 20)) throw Error(ErrorCode::BadModulus, "residue field too large");
    const std::size_t q = c->q.get_ui();

    // primitive root of O/P by brute force over reduced representatives
    if (q > 2) {
      c->has_gamma = true;
      Vec rep(n);
      for (std::size_t idx = 1; idx < q && c->gamma.empty(); ++idx) {
        std::size_t t = idx;
        for (int j = 0; j < n; ++j) {
          std::size_t d = p.basis(j, j).get_ui();
          rep[j] = static_cast<unsigned long>(t % d);
          t /= d;
        }
        std::vector<long> table(q, -1);
        Vec cur = K.reduce(K.one(), p);
        long e = 0;
        bool ok = true;
        do {
          std::size_t ci = residue_index(cur, p);
          if (table[ci] >= 0) {
            ok = false;
            break;
          }
          table[ci] = e++;
          cur = K.reduce(K.mul(cur, rep), p);
        } while (!(cur == K.reduce(K.one(), p)));
        if (ok && static_cast<std::size_t>(e) == q - 1) {
          c->gamma = rep;
          c->log_table = std::move(table);
          c->log_table[0] = -1;
        }
      }
      if (c->gamma.empty()) throw Error(ErrorCode::BadModulus, "residue ring at a prime is not a field");
    }

    Ideal pi = p;
    for (int i = 1; i < k; ++i) {
      Ideal pn = K.mul(pi, p);
      Component::Level L;
      L.a = pi.basis;
      // C = A_i^{-1} A_{i+1} is integral since P^{i+1} is inside P^i
      Matrix cm(n, n);
      for (int j = 0; j < n; ++j) {
        Vec w;
        if (!solve_upper(pi.basis, pn.basis.column(j), w)) throw std::logic_error("filtration not nested");
        cm.set_column(j, w);
      }
      SnfResult s = snf(cm);
      L.u = s.U;
      SnfResult su = snf(s.U);
      for (int j = 0; j < n; ++j) {
        Int d = abs(s.S(j, j));
        if (d == 1) continue;
        if (d == 0) throw std::logic_error("filtration step is infinite");
        L.pos.push_back(j);
        L.order.push_back(d);
        // x = U^{-1} e_j, from su: Uu * U * Vu = Su (diagonal of units)
        Vec e(n);
        e[j] = 1;
        Vec y = su.U * e;
        for (int t = 0; t < n; ++t) y[t] *= su.S(t, t);  // Su entries are +-1
        Vec x = su.V * y;
        Vec b = L.a * x;
        L.gens.push_back(K.reduce(K.add(K.one(), b), c->pk));
      }
      c->levels.push_back(std::move(L));
      pi = pn;
    }

    c->ngens = c->has_gamma ? 1 : 0;
    for (auto& L : c->levels) c->ngens += L.gens.size();
    std::vector<Vec> rels;
    if (c->has_gamma) {
      Vec r(c->ngens);
      if (!c->levels.empty()) r = c->dlog_u1(K, powmod(K, c->gamma, c->m, c->pk));
      for (auto& v : r) v = -v;
      r[0] = c->m;
      rels.push_back(r);
    }
    for (std::size_t li = 0; li < c->levels.size(); ++li) {
      auto& L = c->levels[li];
      std::size_t off = c->level_offset(li);
      for (std::size_t t = 0; t < L.gens.size(); ++t) {
        Vec r = c->dlog_u1(K, powmod(K, L.gens[t], L.order[t], c->pk));
        for (auto& v : r) v = -v;
        r[off + t] += L.order[t];
        rels.push_back(r);
      }
    }
    c->group = FinAbGroup(Matrix::from_columns(rels, c->ngens));
    comps_.push_back(c);
    pks.push_back(c->pk);
    modulus_ = K.mul(modulus_, c->pk);
  }

  // direct sum, with CRT-lifted generators
  group_ = FinAbGroup(Matrix(0, 0));
  bool first = true;
  for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
    auto& c = *comps_[ci];
    group_ = first ? c.group : FinAbGroup::direct_sum(group_, c.group);
    first = false;
    Vec eps = K.one();
    if (comps_.size() > 1) {
      Ideal other = K.unit_ideal();
      for (std::size_t cj = 0; cj < comps_.size(); ++cj)
        if (cj != ci) other = K.mul(other, pks[cj]);
      // eps in other, eps = 1 mod P^k:  other.basis u + pk.basis v = e_1
      Matrix mm = other.basis.hconcat(c.pk.basis);
      SnfResult s = snf(mm);
      Vec rhs = s.U * K.one();
      Vec z(2 * n);
      for (int t = 0; t < n; ++t) {
        if (abs(s.S(t, t)) != 1) throw std::logic_error("CRT components not comaximal");
        z[t] = rhs[t] * s.S(t, t);
      }
      Vec y = s.V * z;
      Vec u(y.begin(), y.begin() + n);
      eps = other.basis * u;
    }
    auto lift = [&](const Vec& g) { return K.add(K.one(), K.mul(eps, K.sub(g, K.one()))); };
    if (c.has_gamma) gens_.push_back(lift(c.gamma));
    for (auto& L : c.levels)
      for (auto& g : L.gens) gens_.push_back(lift(g));
  }
  for (std::size_t i = 0; i < gens_.size(); ++i) gens_[i] = K.reduce(gens_[i], modulus_);
}

Int ResidueUnitGroup::expected_order() const {
  Int o = 1;
  for (auto& c : comps_) {
    Int t = c->m;
    for (int i = 1; i < c->k; ++i) t *= c->q;
    o *= t;
  }
  return o;
}

std::vector<std::size_t> ResidueUnitGroup::component_sizes() const {
  std::vector<std::size_t> out;
  for (auto& c : comps_) out.push_back(c->ngens);
  return out;
}

bool ResidueUnitGroup::coprime(const Vec& x) const {
  for (auto& c : comps_) {
    Vec r = k_->reduce(x, c->p);
    bool zero = true;
    for (auto& v : r) zero = zero && v == 0;
    if (zero) return false;
  }
  return true;
}

Vec ResidueUnitGroup::dlog(const Vec& x) const {
  Vec out;
  for (auto& c : comps_) {
    Vec d = c->dlog(*k_, x);
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

ResidueUnitGroup residue_unit_group(const NumberField& k, const Ideal& m) {
  std::vector<Ideal> primes;
  for (auto& p : canonical_primes(k, k.record().two_factorization)) primes.push_back(k.prime(p));
  std::vector<int> v = valuations(k, m, primes);
  std::vector<std::pair<Ideal, int>> pp;
  for (std::size_t i = 0; i < primes.size(); ++i) pp.push_back({primes[i], v[i]});
  return ResidueUnitGroup(k, pp);
}

}  // namespace fontaine

#include <algorithm>
#include <cstdint>
#include <set>

#include "fontaine/fieldcore.hpp"

namespace fontaine {

namespace {

using Bits = std::uint64_t;  // F2 polynomials / vectors, bit i = coefficient i

int bdeg(Bits a) { return a ? 63 - __builtin_clzll(a) : -1; }

Bits bmod(Bits a, Bits b) {
  int db = bdeg(b);
  while (bdeg(a) >= db) a ^= b << (bdeg(a) - db);
  return a;
}

Bits bdiv(Bits a, Bits b) {
  Bits q = 0;
  int db = bdeg(b);
  while (bdeg(a) >= db) {
    int s = bdeg(a) - db;
    q |= Bits(1) << s;
    a ^= b << s;
  }
  return q;
}

bool birreducible(Bits g) {
  int d = bdeg(g);
  for (Bits h = 2; bdeg(h) <= d / 2; ++h)
    if (bmod(g, h) == 0) return false;
  return d >= 1;
}

// rank over F2 of the columns given as bitmasks
std::size_t f2_rank(std::vector<Bits> cols) {
  std::size_t r = 0;
  for (int bit = 0; bit < 64; ++bit) {
    std::size_t p = r;
    while (p < cols.size() && !((cols[p] >> bit) & 1)) ++p;
    if (p == cols.size()) continue;
    std::swap(cols[p], cols[r]);
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (i != r && ((cols[i] >> bit) & 1)) cols[i] ^= cols[r];
    ++r;
  }
  return r;
}

// kernel of an n x n F2 matrix given by columns
std::vector<Bits> f2_kernel(const std::vector<Bits>& cols, int n) {
  // row-reduce the augmented system [A^T | I]: rows with zero A-part span the kernel
  std::vector<std::pair<Bits, Bits>> rows;
  for (int j = 0; j < n; ++j) rows.push_back({cols[j], Bits(1) << j});
  std::size_t r = 0;
  for (int bit = 0; bit < n; ++bit) {
    std::size_t p = r;
    while (p < rows.size() && !((rows[p].first >> bit) & 1)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && ((rows[i].first >> bit) & 1)) {
        rows[i].first ^= rows[r].first;
        rows[i].second ^= rows[r].second;
      }
    ++r;
  }
  std::vector<Bits> ker;
  for (std::size_t i = r; i < rows.size(); ++i) ker.push_back(rows[i].second);
  return ker;
}

Bits to_bits(const Vec& v) {
  Bits b = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mpz_odd_p(v[i].get_mpz_t())) b |= Bits(1) << i;
  return b;
}

Vec from_bits(Bits b, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = (b >> i) & 1;
  return v;
}

Error mismatch(const std::string& label, const std::string& what) {
  return Error(ErrorCode::FactorizationMismatch, label + ": " + what);
}

Ideal two_ideal(const NumberField& k) { return k.ideal({k.from_int(2)}, 2); }

}  // namespace

bool residue_is_field(const NumberField& k, const Ideal& p) {
  const int n = k.degree();
  if (!p.contains(k.from_int(2))) return false;
  std::vector<int> pos;
  for (int j = 0; j < n; ++j)
    if (p.basis(j, j) == 2) pos.push_back(j);
  if (pos.empty()) return false;
  std::vector<Bits> frob, frob_minus_id;
  for (std::size_t a = 0; a < pos.size(); ++a) {
    Vec e(n);
    e[pos[a]] = 1;
    Vec sq = k.reduce(k.mul(e, e), p);
    Bits col = 0;
    for (std::size_t b = 0; b < pos.size(); ++b)
      if (mpz_odd_p(sq[pos[b]].get_mpz_t())) col |= Bits(1) << b;
    frob.push_back(col);
    frob_minus_id.push_back(col ^ (Bits(1) << a));
  }
  if (f2_rank(frob) != pos.size()) return false;  // nilpotents present
  return pos.size() - f2_rank(frob_minus_id) == 1;
}

std::optional<std::vector<Ideal>> kummer_dedekind_two(const NumberField& k) {
  const int n = k.degree();
  if (n > 62) return std::nullopt;
  Rat d = k.basis_det();
  if (mpz_even_p(d.get_den().get_mpz_t())) return std::nullopt;  // 2 divides the index of Z[theta]
  const auto& f = k.record().poly;
  Bits fb = 0;
  for (int i = 0; i <= n; ++i)
    if (mpz_odd_p(f[i].get_mpz_t())) fb |= Bits(1) << i;
  std::vector<Bits> factors;
  Bits rest = fb;
  for (Bits g = 2; bdeg(rest) > 0 && bdeg(g) <= n; ++g) {
    if (!birreducible(g)) continue;
    int mult = 0;
    while (bdeg(rest) >= bdeg(g) && bmod(rest, g) == 0) {
      rest = bdiv(rest, g);
      ++mult;
    }
    if (mult > 1) return std::nullopt;
    if (mult == 1) factors.push_back(g);
  }
  std::vector<Ideal> out;
  for (Bits g : factors) {
    QPoly gp(bdeg(g) + 1, Rat(0));
    for (int i = 0; i <= bdeg(g); ++i) gp[i] = (g >> i) & 1;
    Vec ge = k.from_power_basis(gp);
    out.push_back(k.ideal({k.from_int(2), ge}, 2));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PrimeAboveTwo> canonical_primes(const NumberField& k, std::vector<PrimeAboveTwo> ps) {
  std::vector<std::pair<std::pair<int, std::vector<Int>>, std::size_t>> keys;
  for (std::size_t i = 0; i < ps.size(); ++i) keys.push_back({{ps[i].f, k.prime(ps[i]).encoding()}, i});
  std::sort(keys.begin(), keys.end());
  std::vector<PrimeAboveTwo> out;
  for (auto& kv : keys) out.push_back(ps[kv.second]);
  return out;
}

std::vector<PrimeAboveTwo> factor_two_check(const NumberField& k, bool allow_ramified) {
  const auto& rec = k.record();
  const std::string& L = rec.label;
  const int n = k.degree();
  const auto& ps = rec.two_factorization;
  if (ps.empty()) throw mismatch(L, "no primes over 2 supplied");
  int total = 0;
  std::vector<Ideal> ideals;
  Ideal prod = k.unit_ideal();
  for (auto& p : ps) {
    if (p.e < 1 || p.f < 1) throw mismatch(L, "nonpositive e or f");
    if (p.e > 1 && !allow_ramified) throw Error(ErrorCode::RamifiedAtTwo, L + ": prime over 2 with e > 1");
    if (static_cast<int>(p.two_generators.first.size()) != n || static_cast<int>(p.two_generators.second.size()) != n)
      throw mismatch(L, "generator has wrong length");
    Ideal P = k.prime(p);
    if (!P.contains(k.from_int(2))) throw mismatch(L, "listed ideal does not contain 2");
    if (!k.is_ideal(P)) throw mismatch(L, "listed lattice is not an ideal");
    if (P.norm() != Int(1) << p.f) throw mismatch(L, "residue degree does not match the norm");
    if (!residue_is_field(k, P)) throw mismatch(L, "listed ideal is not prime");
    if (p.generator) {
      if (static_cast<int>(p.generator->size()) != n) throw mismatch(L, "generator has wrong length");
      if (abs(k.norm(*p.generator)) != Int(1) << p.f) throw mismatch(L, "generator norm is not 2^f");
      if (!(k.principal(*p.generator) == P)) throw mismatch(L, "generator does not generate the prime");
    }
    total += p.e * p.f;
    ideals.push_back(P);
    prod = k.mul(prod, k.pow(P, p.e));
  }
  if (total != n) throw mismatch(L, "sum of e*f differs from the degree");
  for (std::size_t i = 0; i < ideals.size(); ++i)
    for (std::size_t j = i + 1; j < ideals.size(); ++j)
      if (!k.comaximal(ideals[i], ideals[j])) throw mismatch(L, "listed primes are not distinct");
  if (!(prod == two_ideal(k))) throw mismatch(L, "product of prime powers is not 2O");
  if (auto kd = kummer_dedekind_two(k)) {
    std::vector<Ideal> mine = ideals;
    std::sort(mine.begin(), mine.end());
    if (mine != *kd) throw mismatch(L, "disagrees with the factorization of f mod 2");
  }
  return canonical_primes(k, ps);
}

std::vector<PrimeAboveTwo> derive_two_factorization(const NumberField& k, bool want_generators) {
  const int n = k.degree();
  if (n > 20) throw Error(ErrorCode::ValidationError, "degree too large for factorization search");
  if (mpz_even_p(k.record().disc.get_mpz_t())) throw Error(ErrorCode::RamifiedAtTwo, "even discriminant");
  std::vector<Bits> frob_minus_id;
  for (int j = 0; j < n; ++j) {
    Vec e(n);
    e[j] = 1;
    frob_minus_id.push_back(to_bits(k.mul(e, e)) ^ (Bits(1) << j));
  }
  std::vector<Bits> ker = f2_kernel(frob_minus_id, n);
  const std::size_t g = ker.size();
  auto mul2 = [&](Bits a, Bits b) { return to_bits(k.mul(from_bits(a, n), from_bits(b, n))); };
  std::vector<Bits> elems;
  for (Bits c = 1; c < (Bits(1) << g); ++c) {
    Bits x = 0;
    for (std::size_t i = 0; i < g; ++i)
      if ((c >> i) & 1) x ^= ker[i];
    elems.push_back(x);
  }
  std::vector<Bits> primitive;
  for (Bits e : elems) {
    bool prim = true;
    for (Bits e2 : elems)
      if (e2 != e && mul2(e, e2) == e2) {
        prim = false;
        break;
      }
    if (prim) primitive.push_back(e);
  }
  const Bits one = to_bits(k.one());
  std::vector<PrimeAboveTwo> out;
  for (Bits e : primitive) {
    PrimeAboveTwo p;
    p.two_generators = {k.from_int(2), from_bits(e ^ one, n)};
    Ideal P = k.prime(p);
    Int nm = P.norm();
    p.f = static_cast<int>(mpz_sizeinbase(nm.get_mpz_t(), 2)) - 1;
    p.e = 1;
    if (want_generators) {
      const Int target = Int(1) << p.f;
      // growing boxes, shell only, up to about 4e6 points
      for (int B = 1; !p.generator; ++B) {
        long side = 2 * B + 1, total = 1;
        for (int i = 0; i < n && total <= 4000000; ++i) total *= side;
        if (total > 4000000) break;
        Vec x(n);
        for (long idx = 0; idx < total && !p.generator; ++idx) {
          long t = idx;
          bool shell = false;
          for (int i = 0; i < n; ++i) {
            long c = t % side - B;
            shell = shell || c == B || c == -B;
            x[i] = c;
            t /= side;
          }
          if (!shell || !P.contains(x)) continue;
          if (abs(k.norm(x)) == target) p.generator = x;
        }
      }
    }
    out.push_back(p);
  }
  return canonical_primes(k, out);
}

}  // namespace fontaine

#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fontaine/abgroup.hpp"

namespace fontaine {

using Rat = mpq_class;
using QPoly = std::vector<Rat>;  // coefficients, lowest degree first

struct PrimeAboveTwo {
  std::pair<Vec, Vec> two_generators;
  int e = 1;
  int f = 1;
  std::optional<Vec> generator;
  int local_degree() const { return e * f; }
};

struct FieldRecord {
  std::string label;
  int degree = 0;
  std::vector<Int> poly;                        // monic, lowest degree first
  std::vector<std::vector<Rat>> integral_basis;  // integral_basis[j] = omega_j in the power basis
  Int disc;
  int r1 = 0, r2 = 0;
  Int h = 1, h_plus = 1;
  std::vector<Vec> units;  // fundamental units, integral-basis coordinates
  Vec torsion_generator;
  int torsion_order = 2;
  std::vector<PrimeAboveTwo> two_factorization;
};

// Integral ideal as a column HNF w.r.t. the integral basis.
struct Ideal {
  Matrix basis;
  Int norm() const;
  bool contains(const Vec& x) const;
  std::vector<Int> encoding() const;  // row-major entries; the canonical comparison key
  bool operator==(const Ideal& o) const { return basis == o.basis; }
  bool operator<(const Ideal& o) const { return encoding() < o.encoding(); }
};

// Polynomial helpers over Q (exposed for tests).
namespace poly {
QPoly trim(QPoly p);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly divmod(const QPoly& a, const QPoly& b, QPoly* quotient);
QPoly derivative(const QPoly& p);
QPoly gcd(QPoly a, QPoly b);
Rat eval(const QPoly& p, const Rat& x);
std::vector<QPoly> sturm_sequence(const QPoly& p);
int sign_changes(const std::vector<QPoly>& seq, const Rat& x);
}  // namespace poly

class NumberField {
 public:
  // Builds multiplication tables; throws ValidationError on structural problems.
  explicit NumberField(FieldRecord rec);

  const FieldRecord& record() const { return rec_; }
  int degree() const { return n_; }
  int r1() const { return rec_.r1; }
  int r2() const { return rec_.r2; }

  Vec zero() const { return Vec(n_); }
  Vec one() const;
  Vec from_int(const Int& a) const;
  Vec add(const Vec& a, const Vec& b) const;
  Vec sub(const Vec& a, const Vec& b) const;
  Vec mul(const Vec& a, const Vec& b) const;
  Vec pow(const Vec& a, unsigned long e) const;
  bool is_one(const Vec& a) const { return a == one(); }

  Matrix mult_matrix(const Vec& x) const;
  Int norm(const Vec& x) const;
  Rat trace(const Vec& x) const;

  QPoly to_power_basis(const Vec& x) const;
  // Throws ValidationError if the result is not integral.
  Vec from_power_basis(const QPoly& p) const;

  Int poly_disc() const;   // disc of the defining polynomial
  Int field_disc() const;  // det of the trace form on the integral basis
  Rat basis_det() const;   // det of the integral-basis matrix in the power basis

  // Sign of each real embedding, roots ordered by ascending isolating interval.
  std::vector<int> real_signs(const Vec& x) const;
  std::size_t real_root_count() const { return roots_.size(); }

  // Ideals
  Ideal ideal(const std::vector<Vec>& gens, const Int& multiple = 0) const;
  Ideal unit_ideal() const;
  Ideal principal(const Vec& x) const;
  Ideal mul(const Ideal& a, const Ideal& b) const;
  Ideal pow(const Ideal& a, int k) const;
  Ideal sum(const Ideal& a, const Ideal& b) const;
  Ideal prime(const PrimeAboveTwo& p) const;
  bool is_ideal(const Ideal& a) const;
  bool comaximal(const Ideal& a, const Ideal& b) const;
  Vec reduce(const Vec& x, const Ideal& m) const;  // canonical representative

 private:
  FieldRecord rec_;
  int n_;
  std::vector<std::vector<Rat>> basis_;  // columns omega_j in power basis
  std::vector<std::vector<Rat>> binv_;   // inverse
  std::vector<std::vector<Vec>> table_;  // table_[i][j] = coords of omega_i omega_j
  std::vector<Rat> newton_;              // power sums p_0..p_{2n-2}
  std::vector<std::pair<Rat, Rat>> roots_;
  std::vector<QPoly> f_sturm_;
  QPoly fq_;
};

struct ResidueRing {
  Ideal modulus;
  Int size;
  Vec reduce(const NumberField& k, const Vec& x) const { return k.reduce(x, modulus); }
};

// (O/m)^x for m a product of powers of primes over 2.
class ResidueUnitGroup {
 public:
  ResidueUnitGroup(const NumberField& k, const std::vector<std::pair<Ideal, int>>& prime_powers);

  const FinAbGroup& group() const { return group_; }
  const Ideal& modulus() const { return modulus_; }
  Int expected_order() const;
  bool coprime(const Vec& x) const;
  // Throws NonCoprimeArtinQuery when x is not a unit mod m.
  Vec dlog(const Vec& x) const;
  const std::vector<Vec>& generators() const { return gens_; }  // lifts in O
  std::vector<std::size_t> component_sizes() const;               // generators per prime power

 private:
  struct Component;
  const NumberField* k_;
  std::vector<std::shared_ptr<Component>> comps_;
  FinAbGroup group_;
  Ideal modulus_;
  std::vector<Vec> gens_;
};

// Exponents of m at the given primes; throws BadModulus if m is not supported on them.
std::vector<int> valuations(const NumberField& k, const Ideal& m, const std::vector<Ideal>& primes);

// Residue unit group for an HNF modulus supported at the record's primes over 2.
ResidueUnitGroup residue_unit_group(const NumberField& k, const Ideal& m);

// Verifies the ingested factorization of 2; returns it in canonical order
// (ascending residue degree, then HNF encoding).  With allow_ramified the e = 1 requirement is
// dropped (extension records).
std::vector<PrimeAboveTwo> factor_two_check(const NumberField& k, bool allow_ramified = false);

// Canonical ordering used throughout.
std::vector<PrimeAboveTwo> canonical_primes(const NumberField& k, std::vector<PrimeAboveTwo> ps);

// Recomputes the primes over 2 from the ring structure (odd discriminant only), searching a small
// coefficient box for generators when `want_generators` is set.
std::vector<PrimeAboveTwo> derive_two_factorization(const NumberField& k, bool want_generators);

// Kummer-Dedekind factorization from f mod 2; nullopt if f mod 2 is not squarefree.
std::optional<std::vector<Ideal>> kummer_dedekind_two(const NumberField& k);

// F2-dimension of the fixed space of Frobenius on O/P (1 iff P is prime, given O/P reduced).
bool residue_is_field(const NumberField& k, const Ideal& p);

}  // namespace fontaine

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fontaine/fieldcore.hpp"

namespace fontaine {

// A number field together with its primes over 2 in canonical order.
class FieldData {
 public:
  // Base fields: factorization verified with e = 1.  Extension fields: ramification allowed.
  static std::shared_ptr<const FieldData> make(FieldRecord rec, bool extension = false);

  const NumberField& field() const { return k_; }
  const FieldRecord& record() const { return k_.record(); }
  std::size_t prime_count() const { return primes_.size(); }
  const std::vector<PrimeAboveTwo>& primes() const { return primes_; }
  const std::vector<Ideal>& prime_ideals() const { return ideals_; }
  // index into record().two_factorization of canonical prime i
  std::size_t record_index(std::size_t i) const { return record_index_[i]; }
  std::vector<Vec> global_units() const;  // torsion generator, then fundamental units
  int unit_rank() const { return record().r1 + record().r2 - 1; }

  FieldData(NumberField k, std::vector<PrimeAboveTwo> primes, std::vector<std::size_t> idx);

 private:
  NumberField k_;
  std::vector<PrimeAboveTwo> primes_;
  std::vector<Ideal> ideals_;
  std::vector<std::size_t> record_index_;
};

using FieldPtr = std::shared_ptr<const FieldData>;

// Finite part by exponents at the canonical primes; `infinite` = all real places.
struct Modulus {
  std::vector<int> exponents;
  bool infinite = true;
  std::string str() const;
  static Modulus uniform(std::size_t t, int e, bool infinite = true);
};

// ((O/m)^x + {+-1}^{r1}) / <global units>; this is the narrow ray class group when h = 1 and the
// unit cokernel in general.
class RayClassGroup {
 public:
  RayClassGroup(FieldPtr f, Modulus m);

  const FinAbGroup& group() const { return group_; }
  const Modulus& modulus() const { return mod_; }
  const FieldData& field() const { return *f_; }
  // Class of the principal ideal xO, x coprime to the finite part.
  Vec artin(const Vec& x) const;
  // Images of the residue generators at canonical prime i (zero signs).
  std::vector<Vec> local_generators(std::size_t i) const;

 private:
  FieldPtr f_;
  Modulus mod_;
  std::vector<std::size_t> active_;  // canonical prime indices with positive exponent
  std::unique_ptr<ResidueUnitGroup> res_;
  std::size_t nres_ = 0, nsign_ = 0;
  std::vector<std::size_t> comp_offset_;
  std::vector<std::size_t> comp_size_;
  FinAbGroup group_;
};

// dim over F2 of R / (2R + <artin(pi) : pi in split_at>)
std::size_t quadratic_quotient_dim(const RayClassGroup& r, const std::vector<std::size_t>& split_at);

// Some quadratic extension of conductor dividing m is split at every prime in split_at.
bool exists_quadratic(FieldPtr f, const Modulus& m, const std::vector<std::size_t>& split_at);

// ----------------------------------------------------------------- witness

enum class Dichotomy { D1, D2, Neither };
const char* dichotomy_name(Dichotomy d);

struct WitnessReport {
  std::size_t prime = 0;   // canonical index
  int witness_degree = 1;  // [K^p : K]
  std::optional<bool> inert;
  Dichotomy dichotomy = Dichotomy::Neither;
  int cross_check_degree = 1;  // same construction at conductor 4 c^2 (infinite places included)
  std::vector<Int> invariants;  // of the ray class group at c^2
};

// Modulus c^2 with c = 2/p, i.e. exponent 2 at every prime other than p.
Modulus witness_modulus(const FieldData& f, std::size_t p);
WitnessReport witness_field(FieldPtr f, std::size_t p);
// All primes, with dichotomy filled in.
std::vector<WitnessReport> witness_all(FieldPtr f);

// Decomposition of prime q in the quadratic witness field K^p (witness_degree must be 2).
enum class Decomposition { Split, Inert, Ramified };
const char* decomposition_name(Decomposition d);
Decomposition decompose_in_witness(FieldPtr f, std::size_t p, std::size_t q);

// ------------------------------------------------------------------- tower

enum class TowerStatus { Finite, Infinite, Inconclusive };
const char* tower_status_name(TowerStatus s);

struct TowerReport {
  std::vector<std::size_t> rho;  // canonical prime indices
  TowerStatus status = TowerStatus::Inconclusive;
  int level = 0;                // certificate level for Finite
  std::vector<Int> levels;      // 2-part orders at n = 1..cap (empty for Infinite)
  int local_degree_sum = 0;
  int cap = 0;
};

// g_n for n = 1..cap, no early exit.
std::vector<Int> tower_levels(FieldPtr f, const std::vector<std::size_t>& rho, int cap);
TowerReport tower_test(FieldPtr f, const std::vector<std::size_t>& rho, int cap = 20);

// -------------------------------------------------------------- extensions

struct ExtensionRayInfo {
  Int cokernel_order;   // unit cokernel at conductor P_M^2 with all real places
  Int class_number;
  Int order;            // cokernel * h, the ray class group order
  bool two_group = false;
  std::optional<std::size_t> two_rank;  // known when h is odd
};

ExtensionRayInfo extension_ray_class(FieldPtr ext);
bool extension_ray_class_is_2group(FieldPtr ext);

// Ray class group at conductor infinity * P^2 (every prime over 2 squared).
RayClassGroup full_two_ray_class(FieldPtr f);

}  // namespace fontaine

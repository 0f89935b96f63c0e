#include <algorithm>
#include <sstream>

#include "fontaine/rayclass.hpp"

namespace fontaine {

// --------------------------------------------------------------- FieldData

FieldData::FieldData(NumberField k, std::vector<PrimeAboveTwo> primes, std::vector<std::size_t> idx)
    : k_(std::move(k)), primes_(std::move(primes)), record_index_(std::move(idx)) {
  for (auto& p : primes_) ideals_.push_back(k_.prime(p));
}

FieldPtr FieldData::make(FieldRecord rec, bool extension) {
  NumberField k(std::move(rec));
  auto canon = factor_two_check(k, extension);
  const auto& orig = k.record().two_factorization;
  std::vector<Ideal> orig_ideals;
  for (auto& p : orig) orig_ideals.push_back(k.prime(p));
  std::vector<std::size_t> idx;
  for (auto& p : canon) {
    Ideal I = k.prime(p);
    auto it = std::find(orig_ideals.begin(), orig_ideals.end(), I);
    idx.push_back(static_cast<std::size_t>(it - orig_ideals.begin()));
  }
  return std::make_shared<const FieldData>(std::move(k), std::move(canon), std::move(idx));
}

std::vector<Vec> FieldData::global_units() const {
  std::vector<Vec> u{record().torsion_generator};
  for (auto& v : record().units) u.push_back(v);
  return u;
}

// ----------------------------------------------------------------- Modulus

std::string Modulus::str() const {
  std::ostringstream o;
  for (std::size_t i = 0; i < exponents.size(); ++i) o << (i ? "," : "") << exponents[i];
  if (infinite) o << (exponents.empty() ? "" : ",") << "inf";
  return o.str();
}

Modulus Modulus::uniform(std::size_t t, int e, bool infinite) { return Modulus{std::vector<int>(t, e), infinite}; }

// ----------------------------------------------------------- RayClassGroup

RayClassGroup::RayClassGroup(FieldPtr f, Modulus m) : f_(std::move(f)), mod_(std::move(m)) {
  const NumberField& k = f_->field();
  if (mod_.exponents.size() != f_->prime_count())
    throw Error(ErrorCode::BadModulus, "modulus has " + std::to_string(mod_.exponents.size()) +
                                           " exponents for " + std::to_string(f_->prime_count()) + " primes");
  std::vector<std::pair<Ideal, int>> pp;
  for (std::size_t i = 0; i < mod_.exponents.size(); ++i) {
    if (mod_.exponents[i] < 0) throw Error(ErrorCode::BadModulus, "negative exponent");
    if (mod_.exponents[i] > 0) {
      active_.push_back(i);
      pp.push_back({f_->prime_ideals()[i], mod_.exponents[i]});
    }
  }
  res_ = std::make_unique<ResidueUnitGroup>(k, pp);
  nres_ = res_->group().ngens();
  nsign_ = mod_.infinite ? static_cast<std::size_t>(k.r1()) : 0;
  std::size_t off = 0;
  for (auto s : res_->component_sizes()) {
    comp_offset_.push_back(off);
    comp_size_.push_back(s);
    off += s;
  }
  const std::size_t ng = nres_ + nsign_;
  std::vector<Vec> rels;
  const Matrix& r0 = res_->group().relations();
  for (std::size_t j = 0; j < r0.cols(); ++j) {
    Vec c(ng);
    for (std::size_t i = 0; i < nres_; ++i) c[i] = r0(i, j);
    rels.push_back(c);
  }
  for (std::size_t s = 0; s < nsign_; ++s) {
    Vec c(ng);
    c[nres_ + s] = 2;
    rels.push_back(c);
  }
  for (auto& u : f_->global_units()) rels.push_back(artin(u));
  group_ = FinAbGroup(Matrix::from_columns(rels, ng));
}

Vec RayClassGroup::artin(const Vec& x) const {
  if (!res_->coprime(x)) throw Error(ErrorCode::NonCoprimeArtinQuery, "element not coprime to the modulus");
  Vec v = res_->dlog(x);
  if (nsign_) {
    for (int s : f_->field().real_signs(x)) v.push_back(s < 0 ? 1 : 0);
  }
  return v;
}

std::vector<Vec> RayClassGroup::local_generators(std::size_t i) const {
  std::vector<Vec> out;
  auto it = std::find(active_.begin(), active_.end(), i);
  if (it == active_.end()) return out;
  std::size_t c = static_cast<std::size_t>(it - active_.begin());
  for (std::size_t j = 0; j < comp_size_[c]; ++j) {
    Vec e(nres_ + nsign_);
    e[comp_offset_[c] + j] = 1;
    out.push_back(e);
  }
  return out;
}

namespace {

const Vec& prime_generator(const FieldData& f, std::size_t i) {
  const auto& p = f.primes().at(i);
  if (!p.generator) throw Error(ErrorCode::NoGenerator, f.record().label + ": prime over 2 has no generator");
  return *p.generator;
}

}  // namespace

std::size_t quadratic_quotient_dim(const RayClassGroup& r, const std::vector<std::size_t>& split_at) {
  std::vector<Vec> sub;
  for (auto i : split_at) sub.push_back(r.artin(prime_generator(r.field(), i)));
  return r.group().elementary_quotient_dim(sub);
}

bool exists_quadratic(FieldPtr f, const Modulus& m, const std::vector<std::size_t>& split_at) {
  RayClassGroup r(std::move(f), m);
  return quadratic_quotient_dim(r, split_at) > 0;
}

RayClassGroup full_two_ray_class(FieldPtr f) {
  std::size_t t = f->prime_count();
  return RayClassGroup(std::move(f), Modulus::uniform(t, 2, true));
}

// ----------------------------------------------------------------- witness

const char* dichotomy_name(Dichotomy d) {
  switch (d) {
    case Dichotomy::D1: return "D1";
    case Dichotomy::D2: return "D2";
    default: return "Neither";
  }
}

const char* decomposition_name(Decomposition d) {
  switch (d) {
    case Decomposition::Split: return "split";
    case Decomposition::Inert: return "inert";
    default: return "ramified";
  }
}

Modulus witness_modulus(const FieldData& f, std::size_t p) {
  Modulus m = Modulus::uniform(f.prime_count(), 2, true);
  m.exponents.at(p) = 0;
  return m;
}

WitnessReport witness_field(FieldPtr f, std::size_t p) {
  WitnessReport w;
  w.prime = p;
  RayClassGroup r(f, witness_modulus(*f, p));
  w.invariants = r.group().cyclic_factors();
  std::size_t dim = r.group().elementary_quotient_dim({});
  w.witness_degree = 1 << dim;
  if (w.witness_degree == 2) w.inert = quadratic_quotient_dim(r, {p}) == 0;
  Modulus m4 = Modulus::uniform(f->prime_count(), 4, true);
  m4.exponents[p] = 2;
  RayClassGroup r4(f, m4);
  w.cross_check_degree = 1 << r4.group().elementary_quotient_dim({});
  return w;
}

std::vector<WitnessReport> witness_all(FieldPtr f) {
  std::vector<WitnessReport> out;
  bool any_d1 = false;
  for (std::size_t i = 0; i < f->prime_count(); ++i) {
    out.push_back(witness_field(f, i));
    any_d1 = any_d1 || out.back().witness_degree == 1;
  }
  for (auto& w : out) {
    if (w.witness_degree == 1)
      w.dichotomy = Dichotomy::D1;
    else if (!any_d1 && w.witness_degree == 2 && w.inert.value_or(false))
      w.dichotomy = Dichotomy::D2;
    else
      w.dichotomy = Dichotomy::Neither;
  }
  return out;
}

Decomposition decompose_in_witness(FieldPtr f, std::size_t p, std::size_t q) {
  if (p == q) throw Error(ErrorCode::BadModulus, "decomposition of the witness prime itself");
  Modulus m = witness_modulus(*f, p);
  RayClassGroup r(f, m);
  if (r.group().elementary_quotient_dim({}) != 1) throw Error(ErrorCode::BadModulus, "witness field is not quadratic");
  // the inertia group at q is the image of the local units at q
  if (r.group().elementary_quotient_dim(r.local_generators(q)) == 0) return Decomposition::Ramified;
  m.exponents[q] = 0;
  RayClassGroup r2(f, m);
  Vec a = r2.artin(prime_generator(*f, q));
  return r2.group().in_twice(a) ? Decomposition::Split : Decomposition::Inert;
}

// ------------------------------------------------------------------- tower

const char* tower_status_name(TowerStatus s) {
  switch (s) {
    case TowerStatus::Finite: return "Finite";
    case TowerStatus::Infinite: return "Infinite";
    default: return "Inconclusive";
  }
}

std::vector<Int> tower_levels(FieldPtr f, const std::vector<std::size_t>& rho, int cap) {
  std::vector<Int> out;
  for (int n = 1; n <= cap; ++n) {
    Modulus m = Modulus::uniform(f->prime_count(), 0, true);
    for (auto i : rho) m.exponents.at(i) = n;
    RayClassGroup r(f, m);
    out.push_back(r.group().two_part_order());
  }
  return out;
}

TowerReport tower_test(FieldPtr f, const std::vector<std::size_t>& rho, int cap) {
  if (cap < 4) throw Error(ErrorCode::ValidationError, "tower cap must be at least 4");
  if (rho.empty()) throw Error(ErrorCode::BadModulus, "tower test needs a nonempty rho");
  TowerReport t;
  t.rho = rho;
  t.cap = cap;
  for (auto i : rho) t.local_degree_sum += f->primes().at(i).local_degree();
  if (t.local_degree_sum > f->unit_rank()) {
    t.status = TowerStatus::Infinite;
    return t;
  }
  for (int n = 1; n <= cap; ++n) {
    Modulus m = Modulus::uniform(f->prime_count(), 0, true);
    for (auto i : rho) m.exponents.at(i) = n;
    RayClassGroup r(f, m);
    t.levels.push_back(r.group().two_part_order());
    // levels[n-1] = g_n; certificate at the first n >= 2 with g_{n+1} = g_n
    if (n >= 3 && t.levels[n - 1] == t.levels[n - 2]) {
      t.status = TowerStatus::Finite;
      t.level = n - 1;
      return t;
    }
  }
  t.status = TowerStatus::Inconclusive;
  return t;
}

// -------------------------------------------------------------- extensions

ExtensionRayInfo extension_ray_class(FieldPtr ext) {
  ExtensionRayInfo info;
  RayClassGroup r = full_two_ray_class(ext);
  info.cokernel_order = r.group().order();
  info.class_number = ext->record().h;
  info.order = info.cokernel_order * info.class_number;
  info.two_group = r.group().odd_part_order() == 1;
  Int h = info.class_number;
  while (mpz_even_p(h.get_mpz_t())) h /= 2;
  info.two_group = info.two_group && h == 1;
  if (mpz_odd_p(info.class_number.get_mpz_t())) info.two_rank = r.group().two_rank();
  return info;
}

bool extension_ray_class_is_2group(FieldPtr ext) { return extension_ray_class(std::move(ext)).two_group; }

}  // namespace fontaine

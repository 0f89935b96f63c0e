#include <algorithm>
#include <sstream>

#include <omp.h>

#include "fontaine/pipeline.hpp"
#include "fontaine/schemecalc.hpp"

namespace fontaine {

namespace {

json jint(const Int& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

json jints(const std::vector<Int>& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(jint(x));
  return a;
}

bool power_of_two(const Int& x) { return x > 0 && mpz_popcount(x.get_mpz_t()) == 1; }

// 1-based position of canonical prime i in the record's own list
std::string record_pos(const FieldData& k, std::size_t i) { return std::to_string(k.record_index(i) + 1); }

json prime_json(const FieldData& k, std::size_t i) {
  const auto& p = k.primes()[i];
  return json{{"canonical", i + 1}, {"record", k.record_index(i) + 1}, {"f", p.f}};
}

ExtensionSummary summarize(const std::string& desc, const FieldRecord& base, const PackEntry& e, int degree_factor,
                           std::optional<std::size_t>* two_rank = nullptr) {
  const FieldRecord& r = e.record;
  if (r.degree != degree_factor * base.degree)
    throw Error(ErrorCode::ValidationError, desc + ": degree " + std::to_string(r.degree) + " over a base of degree " +
                                                std::to_string(base.degree));
  Int dk2 = base.disc * base.disc;
  if (degree_factor == 2 && r.disc % dk2 != 0)
    throw Error(ErrorCode::ValidationError, desc + ": discriminant not divisible by disc(K)^2");
  auto ext = FieldData::make(r, true);
  ExtensionRayInfo info = extension_ray_class(ext);
  if (two_rank) *two_rank = info.two_rank;
  return ExtensionSummary{desc, info.order, info.two_group};
}

const PackEntry& need(const FieldPack* pack, const std::string& desc) {
  const PackEntry* e = pack ? pack->find(desc) : nullptr;
  if (!e) throw Error(ErrorCode::MissingExtensionData, "pack has no record for " + desc);
  return *e;
}

json ext_json(const ExtensionSummary& e) {
  return json{{"descriptor", e.descriptor}, {"R_order", jint(e.order)}, {"two_group", e.two_group}};
}

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Fontaine: return "Fontaine";
    case Outcome::NoProsaic: return "NoProsaic";
    case Outcome::Rejected: return "Rejected";
    default: return "Inconclusive";
  }
}

const char* path_name(Path p) {
  switch (p) {
    case Path::OnePrime: return "OnePrime";
    case Path::TwoPrimeD1: return "TwoPrimeD1";
    case Path::TwoPrimeD2: return "TwoPrimeD2";
    case Path::ThreePrimeD1: return "ThreePrimeD1";
    default: return "ThreePrimeD2";
  }
}

const char* step5_name(Step5Status s) {
  switch (s) {
    case Step5Status::NotNeeded: return "not_needed";
    case Step5Status::Passed: return "passed";
    case Step5Status::Failed: return "failed";
    case Step5Status::MissingData: return "missing_data";
    default: return "unverified";
  }
}

json Verdict::to_json() const {
  json j;
  j["schema"] = kVerdictSchema;
  j["label"] = label;
  j["degree"] = degree;
  j["outcome"] = outcome_name(outcome);
  j["path"] = path ? json(path_name(*path)) : json(nullptr);
  j["step"] = step ? json(*step) : json(nullptr);
  j["reason"] = reason.empty() ? json(nullptr) : json(reason);
  j["evidence"] = evidence;
  return j;
}

std::string Verdict::serialize() const { return to_json().dump(); }

Verdict verdict_from_json(const json& j) {
  try {
    if (j.at("schema") != kVerdictSchema) throw Error(ErrorCode::ParseError, "not a verdict");
    Verdict v;
    v.label = j.at("label").get<std::string>();
    v.degree = j.at("degree").get<int>();
    std::string o = j.at("outcome").get<std::string>();
    bool found = false;
    for (auto x : {Outcome::Fontaine, Outcome::NoProsaic, Outcome::Rejected, Outcome::Inconclusive})
      if (o == outcome_name(x)) v.outcome = x, found = true;
    if (!found) throw Error(ErrorCode::ParseError, "unknown outcome " + o);
    if (!j.at("path").is_null()) {
      std::string p = j["path"].get<std::string>();
      for (auto x : {Path::OnePrime, Path::TwoPrimeD1, Path::TwoPrimeD2, Path::ThreePrimeD1, Path::ThreePrimeD2})
        if (p == path_name(x)) v.path = x;
      if (!v.path) throw Error(ErrorCode::ParseError, "unknown path " + p);
    }
    if (!j.at("step").is_null()) v.step = j["step"].get<int>();
    if (!j.at("reason").is_null()) v.reason = j["reason"].get<std::string>();
    v.evidence = j.at("evidence");
    return v;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("verdict: ") + e.what());
  }
}

// ------------------------------------------------------------------- step 1

json Step1Report::to_json() const {
  json j{{"pass", pass}, {"primes", primes}, {"R_K", jints(r_k)}};
  if (pass) j["galois_rank_L1"] = galois_rank;
  if (!reason.empty()) j["reason"] = reason;
  return j;
}

Step1Report step1(FieldPtr k) {
  Step1Report s;
  s.primes = k->prime_count();
  if (s.primes > 3) {
    s.reason = "too_many_primes";
    return s;
  }
  RayClassGroup r = full_two_ray_class(k);
  s.r_k = r.group().cyclic_factors();
  if (!r.group().is_two_group()) {
    s.reason = "R_K_not_2group";
    return s;
  }
  s.pass = true;
  s.galois_rank = k->record().r1 + k->record().r2;
  return s;
}

// ------------------------------------------------------------------- step 2

json Step2Report::to_json(const FieldData& k) const {
  json ws = json::array();
  for (auto& w : witnesses) {
    json x = prime_json(k, w.prime);
    x["witness_degree"] = w.witness_degree;
    x["inert"] = w.inert ? json(*w.inert) : json(nullptr);
    x["dichotomy"] = dichotomy_name(w.dichotomy);
    x["cross_check_degree"] = w.cross_check_degree;
    x["invariants"] = jints(w.invariants);
    ws.push_back(x);
  }
  json j{{"pass", pass}, {"witnesses", ws}};
  if (pass) {
    j["dichotomy"] = dichotomy_name(dichotomy);
    j["prime"] = prime_json(k, prime);
  } else {
    j["reason"] = "no_dichotomy";
  }
  return j;
}

Step2Report step2(FieldPtr k) {
  Step2Report s;
  s.witnesses = witness_all(k);
  for (auto want : {Dichotomy::D1, Dichotomy::D2}) {
    for (auto& w : s.witnesses) {
      if (w.dichotomy == want) {
        s.pass = true;
        s.prime = w.prime;
        s.dichotomy = want;
        return s;
      }
    }
  }
  return s;
}

// ---------------------------------------------------------------- steps 3-5

json LReport::to_json() const {
  json j{{"pass", pass}, {"L1_degree", jint(l1)}};
  json ms = json::array();
  for (auto& m : m_fields) ms.push_back(ext_json(m));
  j["M"] = ms;
  if (!pass) {
    j["failed_step"] = failed_step;
    j["reason"] = reason;
    return j;
  }
  if (witness_field) j["witness_field"] = ext_json(*witness_field);
  j["L2_degree"] = jint(l2);
  j["step5"] = step5_name(step5);
  if (!step5_detail.empty()) j["step5_detail"] = step5_detail;
  json ns = json::array();
  for (auto& n : n_fields) ns.push_back(ext_json(n));
  if (!n_fields.empty()) j["N"] = ns;
  j["solvable"] = solvable ? json(*solvable) : json(nullptr);
  return j;
}

LReport steps3to5(FieldPtr k, const Step2Report& w, const FieldPack* pack) {
  const FieldRecord& rec = k->record();
  const int n = rec.degree;
  const int g = rec.r1 + rec.r2;  // Kummer generators: torsion unit, then fundamental units
  const bool d1 = w.dichotomy == Dichotomy::D1;
  LReport L;
  L.l1 = Int(n) << g;
  for (unsigned mask = 1; mask < (1u << g); ++mask) {
    std::string bits;
    for (int i = 0; i < g; ++i) bits += (mask >> i & 1) ? '1' : '0';
    std::string desc = "kummer:" + bits;
    L.m_fields.push_back(summarize(desc, rec, need(pack, desc), 2));
  }
  for (auto& m : L.m_fields) {
    if (!m.two_group || !power_of_two(m.order)) {
      L.failed_step = d1 ? 3 : 4;
      L.reason = "R_M_not_2group";
      return L;
    }
  }
  if (d1) {
    L.pass = true;
    L.l2 = L.l1;
    L.solvable = true;
    return L;
  }
  std::string wi = record_pos(*k, w.prime);
  std::optional<std::size_t> rank;
  std::string wdesc = "witness:" + wi;
  L.witness_field = summarize(wdesc, rec, need(pack, wdesc), 2, &rank);
  if (!L.witness_field->two_group) {
    // K^p is one of the M, so this cannot happen for a consistent pack
    L.failed_step = 4;
    L.reason = "R_Kp_not_2group";
    return L;
  }
  L.pass = true;
  L.l2 = 2 * n * L.witness_field->order;
  if (L.l2 < L.l1) throw Error(ErrorCode::ValidationError, "inconsistent pack: [L2:Q] < [L1:Q]");
  if (L.l2 == L.l1) {
    L.solvable = true;
    return L;
  }
  if (!rank) {
    L.step5 = Step5Status::Unverified;
    L.step5_detail = "class number of the witness field is even; index-2 subgroups not enumerated";
    return L;
  }
  std::size_t count = (std::size_t{1} << *rank) - 1;
  bool good = true;
  for (std::size_t i = 1; i <= count; ++i) {
    std::string desc = "N:" + wi + ":" + std::to_string(i);
    const PackEntry* e = pack ? pack->find(desc) : nullptr;
    if (!e) {
      L.step5 = Step5Status::MissingData;
      L.step5_detail = "pack has no record for " + desc;
      return L;
    }
    L.n_fields.push_back(summarize(desc, rec, *e, 4));
    good = good && L.n_fields.back().two_group;
  }
  L.step5 = good ? Step5Status::Passed : Step5Status::Failed;
  L.solvable = good;
  return L;
}

// ---------------------------------------------------------------- steps 6-7

json TowerEvidence::to_json(const FieldData& k) const {
  json ts = json::array();
  for (auto& t : towers) {
    json x = prime_json(k, t.rho.at(0));
    x["status"] = tower_status_name(t.status);
    x["local_degree_sum"] = t.local_degree_sum;
    if (t.status == TowerStatus::Finite) x["level"] = t.level;
    x["levels"] = jints(t.levels);
    x["cap"] = t.cap;
    ts.push_back(x);
  }
  json j{{"pass", pass}, {"towers", ts}};
  if (!not_split.empty()) {
    json a = json::array();
    for (auto& [q, ns] : not_split) {
      json x = prime_json(k, q);
      x["not_split"] = ns;
      a.push_back(x);
    }
    j["not_split_in_witness"] = a;
  }
  if (!ordering.empty()) {
    json o = json::array();
    for (auto i : ordering) o.push_back(prime_json(k, i));
    j["ordering"] = o;
  }
  if (qe1) j["qe1"] = *qe1;
  if (qe2) j["qe2"] = *qe2;
  if (!reason.empty()) j["reason"] = reason;
  if (inconclusive) j["inconclusive"] = true;
  return j;
}

TowerEvidence steps6and7(FieldPtr k, const Step2Report& w, const Caps& caps) {
  TowerEvidence e;
  const std::size_t t = k->prime_count();
  std::size_t fin = 0, inf = 0;
  for (std::size_t i = 0; i < t; ++i) {
    e.towers.push_back(tower_test(k, {i}, caps.tower_cap));
    fin += e.towers.back().status == TowerStatus::Finite;
    inf += e.towers.back().status == TowerStatus::Infinite;
  }
  if (t == 2 && fin == 0) {
    // neither T(p) nor T(2/p)
    e.inconclusive = inf < t;
    e.reason = e.inconclusive ? "tower_cap" : "no_finite_tower";
    return e;
  }
  if (t == 3) {
    if (fin < 3) {
      e.inconclusive = inf == 0;
      e.reason = e.inconclusive ? "tower_cap" : "tower_not_finite";
      return e;
    }
    const std::size_t p = w.prime;
    std::optional<std::size_t> p2;
    for (std::size_t j = 0; j < t; ++j) {
      if (j == p) continue;
      bool ns = decompose_in_witness(k, p, j) != Decomposition::Split;
      e.not_split.push_back({j, ns});
      if (ns && !p2) p2 = j;
    }
    if (!p2) {
      e.reason = "splits_in_witness";
      return e;
    }
    std::size_t p3 = 0;
    while (p3 == p || p3 == *p2) ++p3;
    e.ordering = {p, *p2, p3};
    Modulus m1 = Modulus::uniform(t, 0, true);
    m1.exponents[*p2] = 2;
    m1.exponents[p3] = 2;
    e.qe1 = quadratic_quotient_dim(RayClassGroup(k, m1), {p}) == 0;
    Modulus m2 = Modulus::uniform(t, 0, true);
    m2.exponents[p3] = 2;
    e.qe2 = quadratic_quotient_dim(RayClassGroup(k, m2), {*p2}) == 0;
  }
  e.pass = true;
  return e;
}

// ------------------------------------------------------------------- step 8

json GateReport::to_json(const Int& l2) const {
  return json{{"pass", pass},
              {"od", od},
              {"nine_L2", jint(9 * l2)},
              {"sixty_L2", jint(60 * l2)},
              {"via", detail}};
}

GateReport step8(const FieldRecord& rec, const Int& l2, bool solvable, const OdlyzkoTable& table) {
  GateReport g;
  Int ad = abs(rec.disc);
  g.od = table.lookup_four_root_disc(ad, rec.degree);
  // 9: either the group is a 2-group or 9 divides its order; 60: smallest non-solvable group
  if (Int(g.od) < 9 * l2) {
    g.pass = true;
    g.detail = "nine";
  } else if (solvable && Int(g.od) < 60 * l2) {
    g.pass = true;
    g.detail = "sixty";
  } else {
    g.detail = "none";
  }
  return g;
}

// ----------------------------------------------------------------- classify

namespace {

Path path_for(std::size_t t, Dichotomy d) {
  if (t == 1) return Path::OnePrime;
  if (t == 2) return d == Dichotomy::D1 ? Path::TwoPrimeD1 : Path::TwoPrimeD2;
  return d == Dichotomy::D1 ? Path::ThreePrimeD1 : Path::ThreePrimeD2;
}

Verdict rejected(Verdict v, int step, std::string reason) {
  v.outcome = Outcome::Rejected;
  v.step = step;
  v.reason = std::move(reason);
  return v;
}

Verdict inconclusive(Verdict v, std::string reason) {
  v.outcome = Outcome::Inconclusive;
  v.reason = std::move(reason);
  return v;
}

json filtration_evidence(const FieldData& k, const Step2Report& w, const TowerEvidence* te) {
  const std::size_t t = k.prime_count();
  std::vector<std::size_t> order;
  if (te && !te->ordering.empty()) {
    order = te->ordering;
  } else {
    order.push_back(w.prime);
    for (std::size_t i = 0; i < t; ++i)
      if (i != w.prime) order.push_back(i);
  }
  bool qe1 = te && te->qe1 ? *te->qe1 : true;
  bool qe2 = te && te->qe2 ? *te->qe2 : true;
  auto d = w.dichotomy == Dichotomy::D1 ? SchemeDichotomy::D1 : SchemeDichotomy::D2;
  RewriteContext ctx = RewriteContext::make(static_cast<int>(t), d, qe1, qe2);
  json j;
  json prs = json::array();
  for (auto i : order) prs.push_back(prime_json(k, i));
  j["primes"] = prs;
  std::vector<Constituent> word(canonical_order(ctx).rbegin(), canonical_order(ctx).rend());
  j["input"] = format_word(ctx, word);
  SortResult s = sort_filtration(ctx, word);
  j["schema"] = format_word(ctx, s.word);
  j["moves"] = s.trace.size();
  std::optional<Int> m;
  if (te) {
    for (auto& tr : te->towers)
      if (tr.status == TowerStatus::Finite) {
        m = tr.levels.at(static_cast<std::size_t>(tr.level) - 1);
        break;
      }
  }
  json bounds = json::array();
  for (auto& [c, len] : blocks(s.word)) {
    ExponentBound b = exponent_bounds(ctx, c, m);
    json x{{"block", token(ctx, c)}, {"kind", bound_kind_name(b.kind)}};
    if (b.kind == BoundKind::Divides) x["value"] = jint(b.value);
    bounds.push_back(x);
  }
  j["bounds"] = bounds;
  return j;
}

Verdict classify_checked(const FieldRecord& rec, const FieldPack* pack, const OdlyzkoTable& table, const Caps& caps) {
  Verdict v;
  v.label = rec.label;
  v.degree = rec.degree;
  json& ev = v.evidence;
  if (auto why = hypothesis_rejection(rec)) {
    ev["hypothesis"] = *why;
    return rejected(std::move(v), 0, "hypothesis_k");
  }
  if (pack && pack->base.label != rec.label)
    throw Error(ErrorCode::ValidationError, "pack base " + pack->base.label + " does not match " + rec.label);

  FieldPtr k = FieldData::make(rec);
  const int r = rec.r1 + rec.r2;
  json consistency = json::object();

  Step1Report s1 = step1(k);
  ev["step1"] = s1.to_json();
  if (!s1.pass) return rejected(std::move(v), 1, s1.reason);

  Step2Report s2 = step2(k);
  ev["step2"] = s2.to_json(*k);
  bool dpi_i = true;
  for (auto& w : s2.witnesses)
    if (w.witness_degree == 1) dpi_i = dpi_i && k->primes()[w.prime].local_degree() >= r;
  consistency["dpi_i"] = dpi_i;
  ev["consistency"] = consistency;
  if (!s2.pass) return rejected(std::move(v), 2, "no_dichotomy");
  const bool d1 = s2.dichotomy == Dichotomy::D1;

  LReport L;
  try {
    L = steps3to5(k, s2, pack);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MissingExtensionData) throw;
    ev["steps3to5"] = json{{"error", e.what()}};
    return inconclusive(std::move(v), "missing_extension_data");
  }
  ev["steps3to5"] = L.to_json();
  if (!L.pass) return rejected(std::move(v), L.failed_step, L.reason);

  const std::size_t t = k->prime_count();
  std::optional<TowerEvidence> te;
  if (!d1 && t >= 2) {
    te = steps6and7(k, s2, caps);
    ev["steps6and7"] = te->to_json(*k);
    bool dpi_iii = true;
    for (auto& tr : te->towers)
      if (tr.status == TowerStatus::Finite) dpi_iii = dpi_iii && tr.local_degree_sum <= r - 1;
    consistency["dpi_iii"] = dpi_iii;
    if (te->pass && t == 3) consistency["qe_implied"] = te->qe1.value_or(false) && te->qe2.value_or(false);
    ev["consistency"] = consistency;
    if (te->inconclusive) return inconclusive(std::move(v), te->reason);
    if (!te->pass) return rejected(std::move(v), te->reason == "splits_in_witness" ? 7 : 6, te->reason);
  }

  try {
    ev["filtration"] = filtration_evidence(*k, s2, te ? &*te : nullptr);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsortableContext) throw;
    ev["filtration"] = json{{"error", e.what()}};
    return rejected(std::move(v), 7, "unsortable_filtration");
  }

  v.path = path_for(t, s2.dichotomy);
  ev["noprosaic"] = true;
  GateReport g;
  try {
    g = step8(rec, L.l2, L.solvable.value_or(false), table);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RootDiscTooLarge) throw;
    ev["step8"] = json{{"error", e.what()}};
    return inconclusive(std::move(v), "root_disc_too_large");
  }
  ev["step8"] = g.to_json(L.l2);
  if (g.pass) {
    v.outcome = Outcome::Fontaine;
  } else if (!L.solvable && Int(g.od) < 60 * L.l2) {
    // the 60x gate would decide, but step 5 could not be completed
    return inconclusive(std::move(v), "missing_extension_data");
  } else {
    v.outcome = Outcome::NoProsaic;
  }
  return v;
}

}  // namespace

Verdict classify(const FieldRecord& rec, const FieldPack* pack, const OdlyzkoTable& table, const Caps& caps) {
  if (caps.tower_cap < 4) throw Error(ErrorCode::ValidationError, "tower cap must be at least 4");
  try {
    return classify_checked(rec, pack, table, caps);
  } catch (const Error& e) {
    Verdict v;
    v.label = rec.label;
    v.degree = rec.degree;
    v.evidence = json{{"error", e.what()}};
    return inconclusive(std::move(v), error_name(e.code()));
  }
}

Verdict hypothesis_verdict(const Rejection& r, int degree) {
  Verdict v;
  v.label = r.label;
  v.degree = degree;
  v.evidence["hypothesis"] = r.reason;
  return rejected(std::move(v), 0, "hypothesis_k");
}

namespace {

Verdict run_item(const BatchItem& it, const OdlyzkoTable& table, const Caps& caps) {
  if (it.record) return classify(*it.record, it.pack, table, caps);
  if (it.rejection) return hypothesis_verdict(*it.rejection, it.degree);
  throw Error(ErrorCode::ValidationError, "empty batch item");
}

}  // namespace

std::vector<Verdict> classify_serial(const std::vector<BatchItem>& items, const OdlyzkoTable& table,
                                     const Caps& caps) {
  std::vector<Verdict> out;
  out.reserve(items.size());
  for (auto& it : items) out.push_back(run_item(it, table, caps));
  return out;
}

std::vector<Verdict> classify_batch(const std::vector<BatchItem>& items, const OdlyzkoTable& table, const Caps& caps,
                                    int threads) {
  std::vector<Verdict> out(items.size());
  const long n = static_cast<long>(items.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  std::vector<std::string> errors(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_item(items[i], table, caps);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (long i = 0; i < n; ++i)
    if (!errors[i].empty()) throw Error(ErrorCode::ValidationError, "batch item " + std::to_string(i + 1) + ": " + errors[i]);
  return out;
}

// -------------------------------------------------------------------- tally

std::vector<TallyRow> tally(const std::vector<Verdict>& verdicts) {
  std::vector<TallyRow> rows;
  auto row = [&](int d) -> TallyRow& {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const TallyRow& r) { return r.degree == d; });
    if (it != rows.end()) return *it;
    rows.push_back(TallyRow{});
    rows.back().degree = d;
    return rows.back();
  };
  for (auto& v : verdicts) {
    TallyRow& r = row(v.degree);
    if (v.outcome == Outcome::Rejected && v.step == 0) {
      ++r.hypothesis;
      continue;
    }
    ++r.fields;
    switch (v.outcome) {
      case Outcome::Fontaine:
        switch (*v.path) {
          case Path::OnePrime: ++r.one_prime; break;
          case Path::TwoPrimeD1: ++r.two_d1; break;
          case Path::TwoPrimeD2: ++r.two_d2; break;
          case Path::ThreePrimeD1: ++r.three_d1; break;
          case Path::ThreePrimeD2: ++r.three_d2; break;
        }
        break;
      case Outcome::NoProsaic: ++r.noprosaic; break;
      case Outcome::Rejected: ++r.rejected; break;
      case Outcome::Inconclusive: ++r.inconclusive; break;
    }
  }
  std::sort(rows.begin(), rows.end(), [](const TallyRow& a, const TallyRow& b) { return a.degree < b.degree; });
  return rows;
}

std::string tally_csv(const std::vector<TallyRow>& rows) {
  std::ostringstream o;
  o << "deg,fields,one_prime_D1,two_prime_D1,two_prime_D2,three_prime_D1,three_prime_D2,S,total,"
       "noprosaic,rejected,inconclusive,hypothesis_rejected\n";
  for (auto& r : rows)
    o << r.degree << ',' << r.fields << ',' << r.one_prime << ',' << r.two_d1 << ',' << r.two_d2 << ','
      << r.three_d1 << ',' << r.three_d2 << ",not computed," << r.total() << ',' << r.noprosaic << ','
      << r.rejected << ',' << r.inconclusive << ',' << r.hypothesis << '\n';
  return o.str();
}

json tally_json(const std::vector<TallyRow>& rows) {
  json a = json::array();
  for (auto& r : rows)
    a.push_back(json{{"degree", r.degree},
                     {"fields", r.fields},
                     {"one_prime_D1", r.one_prime},
                     {"two_prime_D1", r.two_d1},
                     {"two_prime_D2", r.two_d2},
                     {"three_prime_D1", r.three_d1},
                     {"three_prime_D2", r.three_d2},
                     {"S", "not computed"},
                     {"total", r.total()},
                     {"noprosaic", r.noprosaic},
                     {"rejected", r.rejected},
                     {"inconclusive", r.inconclusive},
                     {"hypothesis_rejected", r.hypothesis}});
  return json{{"schema", kTallySchema}, {"rows", a}};
}

std::string tally_text(const std::vector<TallyRow>& rows) {
  std::ostringstream o;
  o << "deg  fields | 1p:D1 | 2p:D1 2p:D2 | 3p:D1 3p:D2 | S            | total\n";
  for (auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%3d  %6zu | %5zu | %5zu %5zu | %5zu %5zu | not computed | %5zu\n", r.degree,
                  r.fields, r.one_prime, r.two_d1, r.two_d2, r.three_d1, r.three_d2, r.total());
    o << buf;
  }
  return o.str();
}

std::vector<std::string> verdict_violations(const Verdict& v) {
  std::vector<std::string> bad;
  const json& e = v.evidence;
  auto flag = [&](const char* key) { return e.contains(key) && e[key].is_object(); };
  switch (v.outcome) {
    case Outcome::Fontaine:
    case Outcome::NoProsaic: {
      if (!v.path) bad.push_back("no path");
      if (!e.value("noprosaic", false)) bad.push_back("no no-prosaic derivation");
      if (!flag("step8")) {
        bad.push_back("no gate evidence");
      } else if (e["step8"].value("pass", false) != (v.outcome == Outcome::Fontaine)) {
        bad.push_back("gate result disagrees with the outcome");
      }
      if (v.step) bad.push_back("step set on a conclusive non-rejection");
      break;
    }
    case Outcome::Rejected:
      if (!v.step) bad.push_back("rejection without a step");
      if (v.reason.empty()) bad.push_back("rejection without a reason");
      if (v.path) bad.push_back("rejection with a path");
      break;
    case Outcome::Inconclusive:
      if (v.reason.empty()) bad.push_back("inconclusive without a reason");
      break;
  }
  if (e.contains("consistency"))
    for (auto& [k, val] : e["consistency"].items())
      if (!val.get<bool>()) bad.push_back("consistency check " + k + " failed");
  return bad;
}

}  // namespace fontaine

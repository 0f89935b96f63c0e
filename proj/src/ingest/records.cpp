#include <fstream>
#include <sstream>

#include "fontaine/ingest.hpp"

namespace fontaine {

namespace {

Error bad(const std::string& field, const std::string& what) {
  return Error(ErrorCode::ValidationError, "field '" + field + "': " + what);
}

Int to_int(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Int(v.get<long>());
  if (v.is_string()) {
    Int r;
    if (r.set_str(v.get<std::string>(), 10) != 0) throw bad(field, "not an integer");
    return r;
  }
  throw bad(field, "expected an integer");
}

Rat to_rat(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rat(Int(v.get<long>()));
  if (v.is_string()) {
    Rat r;
    if (r.set_str(v.get<std::string>(), 10) != 0) throw bad(field, "not a rational");
    r.canonicalize();
    return r;
  }
  throw bad(field, "expected a rational");
}

int to_small(const json& v, const std::string& field) {
  Int r = to_int(v, field);
  if (!r.fits_sint_p()) throw bad(field, "out of range");
  return static_cast<int>(r.get_si());
}

Vec to_vec(const json& v, const std::string& field, std::size_t n) {
  if (!v.is_array() || v.size() != n) throw bad(field, "expected a vector of length " + std::to_string(n));
  Vec out;
  for (auto& x : v) out.push_back(to_int(x, field));
  return out;
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw bad(key, "missing");
  return j.at(key);
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(x.get_str());
  return a;
}

}  // namespace

FieldRecord record_from_json(const json& j) {
  if (!j.is_object()) throw bad("record", "expected an object");
  if (j.contains("schema") && j.at("schema") != kFieldSchema) throw bad("schema", "unsupported schema");
  FieldRecord r;
  const json& lab = need(j, "label");
  if (!lab.is_string() || lab.get<std::string>().empty()) throw bad("label", "expected a non-empty string");
  r.label = lab.get<std::string>();
  r.degree = to_small(need(j, "degree"), "degree");
  if (r.degree < 1 || r.degree > 64) throw bad("degree", "out of range");
  const std::size_t n = static_cast<std::size_t>(r.degree);
  const json& poly = need(j, "poly");
  if (!poly.is_array() || poly.size() != n + 1) throw bad("poly", "expected degree+1 coefficients");
  for (auto& c : poly) r.poly.push_back(to_int(c, "poly"));
  const json& ib = need(j, "integral_basis");
  if (!ib.is_array() || ib.size() != n) throw bad("integral_basis", "expected degree rows");
  for (auto& w : ib) {
    if (!w.is_array() || w.size() != n) throw bad("integral_basis", "row has wrong length");
    std::vector<Rat> row;
    for (auto& c : w) row.push_back(to_rat(c, "integral_basis"));
    r.integral_basis.push_back(std::move(row));
  }
  r.disc = to_int(need(j, "disc"), "disc");
  const json& sig = need(j, "signature");
  if (!sig.is_array() || sig.size() != 2) throw bad("signature", "expected [r1, r2]");
  r.r1 = to_small(sig[0], "signature");
  r.r2 = to_small(sig[1], "signature");
  r.h = to_int(need(j, "h"), "h");
  r.h_plus = to_int(need(j, "h_plus"), "h_plus");
  if (r.h < 1) throw bad("h", "must be positive");
  if (r.h_plus < 1) throw bad("h_plus", "must be positive");
  const json& units = need(j, "units");
  if (!units.is_array()) throw bad("units", "expected a list");
  for (auto& u : units) r.units.push_back(to_vec(u, "units", n));
  const json& tor = need(j, "torsion");
  r.torsion_order = to_small(need(tor, "order"), "torsion.order");
  r.torsion_generator = to_vec(need(tor, "generator"), "torsion.generator", n);
  const json& tf = need(j, "two_factorization");
  if (!tf.is_array()) throw bad("two_factorization", "expected a list");
  for (auto& e : tf) {
    PrimeAboveTwo p;
    const json& g2 = need(e, "two_generators");
    if (!g2.is_array() || g2.size() != 2) throw bad("two_generators", "expected a pair");
    p.two_generators = {to_vec(g2[0], "two_generators", n), to_vec(g2[1], "two_generators", n)};
    p.e = to_small(need(e, "e"), "e");
    p.f = to_small(need(e, "f"), "f");
    if (e.contains("generator") && !e.at("generator").is_null())
      p.generator = to_vec(e.at("generator"), "generator", n);
    r.two_factorization.push_back(std::move(p));
  }
  return r;
}

json record_to_json(const FieldRecord& r) {
  json j;
  j["schema"] = kFieldSchema;
  j["label"] = r.label;
  j["degree"] = r.degree;
  json poly = json::array();
  for (auto& c : r.poly) poly.push_back(c.get_str());
  j["poly"] = poly;
  json ib = json::array();
  for (auto& w : r.integral_basis) {
    json row = json::array();
    for (auto& c : w) row.push_back(c.get_str());
    ib.push_back(row);
  }
  j["integral_basis"] = ib;
  j["disc"] = r.disc.get_str();
  j["signature"] = {r.r1, r.r2};
  j["h"] = r.h.fits_slong_p() ? json(r.h.get_si()) : json(r.h.get_str());
  j["h_plus"] = r.h_plus.fits_slong_p() ? json(r.h_plus.get_si()) : json(r.h_plus.get_str());
  json units = json::array();
  for (auto& u : r.units) units.push_back(vec_json(u));
  j["units"] = units;
  j["torsion"] = {{"order", r.torsion_order}, {"generator", vec_json(r.torsion_generator)}};
  json tf = json::array();
  for (auto& p : r.two_factorization) {
    json e;
    e["two_generators"] = json::array({vec_json(p.two_generators.first), vec_json(p.two_generators.second)});
    e["e"] = p.e;
    e["f"] = p.f;
    if (p.generator) e["generator"] = vec_json(*p.generator);
    tf.push_back(e);
  }
  j["two_factorization"] = tf;
  return j;
}

FieldRecord load_record_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return record_from_json(j);
}

std::optional<std::string> hypothesis_rejection(const FieldRecord& r) {
  if (mpz_even_p(r.disc.get_mpz_t())) return "disc not odd";
  if (r.h_plus != 1) return "narrow class number != 1";
  return std::nullopt;
}

namespace {

// smallest k > 0 with x^k = 1, if at most `limit`
std::optional<int> torsion_order_of(const NumberField& k, const Vec& x, int limit) {
  Vec p = x;
  for (int e = 1; e <= limit; ++e) {
    if (k.is_one(p)) return e;
    p = k.mul(p, x);
  }
  return std::nullopt;
}

// largest m with phi(m) <= n; roots of unity in a degree-n field have order at most this
int max_root_order(int n) {
  int best = 2;
  for (int m = 1; m <= 4 * n * n + 10; ++m) {
    int phi = m, t = m;
    for (int p = 2; p * p <= t; ++p)
      if (t % p == 0) {
        while (t % p == 0) t /= p;
        phi -= phi / p;
      }
    if (t > 1) phi -= phi / t;
    if (phi <= n) best = m;
  }
  return best;
}

void common_checks(const NumberField& k) {
  const FieldRecord& r = k.record();
  Int pd = k.poly_disc();
  Rat bd = k.basis_det();
  if (Rat(pd) * bd * bd != Rat(r.disc)) throw bad("integral_basis", "index check d^2 * disc = disc(f) fails");
  if (k.field_disc() != r.disc) throw bad("disc", "does not match the trace form of the integral basis");
  if (r.disc == 0) throw bad("poly", "not separable");
  if (sgn(r.disc) != (r.r2 % 2 == 0 ? 1 : -1)) throw bad("signature", "sign of disc contradicts r2");
  if (static_cast<int>(r.units.size()) != r.r1 + r.r2 - 1) throw bad("units", "expected r1+r2-1 fundamental units");
  const int lim = max_root_order(r.degree);
  for (auto& u : r.units) {
    Int nu = k.norm(u);
    if (nu != 1 && nu != -1) throw bad("units", "unit has norm other than +-1");
    if (torsion_order_of(k, u, lim)) throw bad("units", "unit is a root of unity");
  }
  if (r.torsion_order < 2 || r.torsion_order % 2 != 0) throw bad("torsion.order", "must be even");
  auto o = torsion_order_of(k, r.torsion_generator, lim);
  if (!o || *o != r.torsion_order) throw bad("torsion.generator", "order differs from torsion.order");
}

}  // namespace

void validate_record(const NumberField& k) {
  const FieldRecord& r = k.record();
  if (r.h_plus == 1 && r.h != 1) throw bad("h", "h must divide h_plus");
  common_checks(k);
  factor_two_check(k, false);
  for (auto& p : r.two_factorization)
    if (!p.generator) throw bad("generator", "prime over 2 lacks a generator");
}

void validate_extension_record(const NumberField& k) {
  common_checks(k);
  factor_two_check(k, true);
}

LoadResult load_records_from_string(const std::string& text) {
  LoadResult out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
    FieldRecord r;
    try {
      r = record_from_json(j);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError, "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (auto why = hypothesis_rejection(r)) {
      out.order.push_back({false, out.rejections.size()});
      out.rejections.push_back({lineno, r.label, *why, r.degree});
      continue;
    }
    try {
      validate_record(NumberField(r));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
    out.order.push_back({true, out.records.size()});
    out.records.push_back(std::move(r));
  }
  return out;
}

LoadResult load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_records_from_string(ss.str());
}

// ------------------------------------------------------------------ packs

const PackEntry* FieldPack::find(const std::string& descriptor) const {
  auto it = extensions.find(descriptor);
  return it == extensions.end() ? nullptr : &it->second;
}

FieldPack pack_from_json(const json& j) {
  if (!j.is_object()) throw bad("pack", "expected an object");
  if (j.contains("schema") && j.at("schema") != kPackSchema) throw bad("schema", "unsupported pack schema");
  FieldPack p;
  p.base = record_from_json(need(j, "base"));
  const json& ex = need(j, "extensions");
  if (!ex.is_array()) throw bad("extensions", "expected a list");
  for (auto& e : ex) {
    PackEntry pe;
    const json& d = need(e, "descriptor");
    if (!d.is_string()) throw bad("descriptor", "expected a string");
    const json& kind = need(e, "kind");
    if (!kind.is_string()) throw bad("kind", "expected a string");
    pe.kind = kind.get<std::string>();
    if (pe.kind != "kummer" && pe.kind != "witness" && pe.kind != "N") throw bad("kind", "unknown extension kind");
    pe.record = record_from_json(need(e, "record"));
    const json& prov = need(e, "provenance");
    if (!prov.is_string() || prov.get<std::string>().empty()) throw bad("provenance", "must be non-empty");
    pe.provenance = prov.get<std::string>();
    const int mult = pe.kind == "N" ? 4 : 2;
    if (pe.record.degree != mult * p.base.degree)
      throw bad("record.degree", d.get<std::string>() + " does not have the expected degree over the base");
    if (!p.extensions.emplace(d.get<std::string>(), std::move(pe)).second)
      throw bad("descriptor", "duplicate " + d.get<std::string>());
  }
  return p;
}

json pack_to_json(const FieldPack& p) {
  json j;
  j["schema"] = kPackSchema;
  j["base"] = record_to_json(p.base);
  json ex = json::array();
  for (auto& [d, e] : p.extensions)
    ex.push_back({{"descriptor", d}, {"kind", e.kind}, {"record", record_to_json(e.record)}, {"provenance", e.provenance}});
  j["extensions"] = ex;
  return j;
}

FieldPack load_pack(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return pack_from_json(j);
}

}  // namespace fontaine

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fontaine/ingest.hpp"

namespace fontaine {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string cache_key(int degree, const std::string& max_rd, int page_size) {
  return sha256_hex("nf_fields;degree=" + std::to_string(degree) + ";max_rd=" + max_rd +
                    ";limit=" + std::to_string(page_size));
}

// ------------------------------------------------------------ polynomials

QPoly parse_poly_string(const std::string& s, const std::string& var) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error(ErrorCode::ParseError, "empty polynomial");
  QPoly out;
  std::size_t i = 0;
  auto bad = [&]() { return Error(ErrorCode::ParseError, "bad polynomial '" + s + "'"); };
  auto digits = [&](std::string& d) {
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) d += t[i++];
  };
  bool first = true;
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      sign = t[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw bad();
    }
    first = false;
    Rat coef = 1;
    bool have_coef = false;
    std::string num;
    digits(num);
    if (!num.empty()) {
      have_coef = true;
      Int den = 1;
      if (i < t.size() && t[i] == '/') {
        ++i;
        std::string d;
        digits(d);
        if (d.empty()) throw bad();
        den = Int(d, 10);
        if (den == 0) throw bad();
      }
      coef = Rat(Int(num, 10), den);
      coef.canonicalize();
    }
    std::size_t deg = 0;
    if (have_coef && i < t.size() && t[i] == '*') {
      ++i;
      if (t.compare(i, var.size(), var) != 0) throw bad();
    }
    if (t.compare(i, var.size(), var) == 0) {
      i += var.size();
      deg = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        std::string e;
        digits(e);
        if (e.empty()) throw bad();
        deg = std::stoul(e);
      }
    } else if (!have_coef) {
      throw bad();
    }
    if (out.size() <= deg) out.resize(deg + 1, Rat(0));
    out[deg] += sign * coef;
  }
  return poly::trim(out);
}

// ------------------------------------------------------------------ entries

namespace {

const json& field(const json& e, const char* key) {
  if (!e.is_object() || !e.contains(key) || e[key].is_null()) {
    std::cerr << "schema drift: missing '" << key << "' in " << e.dump() << "\n";
    throw Error(ErrorCode::SchemaDrift, std::string("service entry lacks '") + key + "': " + e.dump());
  }
  return e[key];
}

template <class T>
T typed(const json& e, const char* key) {
  const json& v = field(e, key);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    std::cerr << "schema drift: mistyped '" << key << "' in " << e.dump() << "\n";
    throw Error(ErrorCode::SchemaDrift, std::string("service entry has mistyped '") + key + "': " + e.dump());
  }
}

Int big(const json& e, const char* key) {
  const json& v = field(e, key);
  Int r;
  if (v.is_number_integer()) return Int(v.dump(), 10);
  if (v.is_string() && r.set_str(v.get<std::string>(), 10) == 0) return r;
  throw Error(ErrorCode::SchemaDrift, std::string("service entry has mistyped '") + key + "': " + e.dump());
}

std::vector<Rat> padded(QPoly p, int n) {
  if (static_cast<int>(p.size()) > n) throw Error(ErrorCode::SchemaDrift, "element of too high degree");
  p.resize(static_cast<std::size_t>(n), Rat(0));
  return p;
}

}  // namespace

FieldRecord record_from_lmfdb(const json& e) {
  FieldRecord r;
  r.label = typed<std::string>(e, "label");
  r.degree = typed<int>(e, "degree");
  int r2 = typed<int>(e, "r2");
  r.r2 = r2;
  r.r1 = r.degree - 2 * r2;
  for (auto& c : typed<std::vector<json>>(e, "coeffs")) {
    Int v;
    if (c.is_number_integer())
      v = Int(c.dump(), 10);
    else if (!c.is_string() || v.set_str(c.get<std::string>(), 10) != 0)
      throw Error(ErrorCode::SchemaDrift, "coeffs entry: " + e.dump());
    r.poly.push_back(v);
  }
  r.disc = big(e, "disc_abs") * typed<int>(e, "disc_sign");
  r.h = big(e, "class_number");
  r.h_plus = big(e, "narrow_class_number");
  try {
    for (auto& z : typed<std::vector<std::string>>(e, "zk")) r.integral_basis.push_back(padded(parse_poly_string(z), r.degree));
  } catch (const Error& err) {
    if (err.code() == ErrorCode::SchemaDrift) throw;
    throw Error(ErrorCode::SchemaDrift, std::string("zk: ") + err.what());
  }
  auto units = typed<std::vector<std::string>>(e, "units");
  auto tors = typed<std::string>(e, "torsion_gen");
  r.torsion_order = typed<int>(e, "torsion_order");
  // integral-basis coordinates need the ring structure
  FieldRecord shell = r;
  shell.torsion_generator = Vec(static_cast<std::size_t>(r.degree));
  NumberField k0(shell);
  for (auto& u : units) r.units.push_back(k0.from_power_basis(parse_poly_string(u)));
  r.torsion_generator = k0.from_power_basis(parse_poly_string(tors));
  if (mpz_odd_p(r.disc.get_mpz_t())) {
    shell.units = r.units;
    shell.torsion_generator = r.torsion_generator;
    NumberField k1(shell);
    r.two_factorization = derive_two_factorization(k1, true);
  }
  return r;
}

// -------------------------------------------------------------------- fetch

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& p, const std::string& data) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::NetworkError, "cannot write cache file " + tmp.string());
    f << data;
  }
  fs::rename(tmp, p);
}

std::string page_name(std::size_t offset) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "page_%06zu.json", offset);
  return buf;
}

std::string page_path(const FetchConfig& cfg, int degree, const std::string& max_rd, std::size_t offset) {
  return "/api/nf_fields/?_format=json&_sort=disc_abs,label&degree=" + std::to_string(degree) +
         "&narrow_class_number=1&rd=0-" + max_rd + "&_limit=" + std::to_string(cfg.page_size) +
         "&_offset=" + std::to_string(offset);
}

std::string download(const FetchConfig& cfg, const std::string& path) {
  httplib::Client cli(cfg.base_url);
  cli.set_connection_timeout(cfg.timeout_seconds, 0);
  cli.set_read_timeout(cfg.timeout_seconds, 0);
  cli.set_follow_location(true);
  auto res = cli.Get(path);
  if (!res) throw Error(ErrorCode::NetworkError, cfg.base_url + path + ": " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw Error(ErrorCode::NetworkError, cfg.base_url + path + ": HTTP " + std::to_string(res->status));
  return res->body;
}

}  // namespace

FetchResult fetch_fields(const FetchConfig& cfg, int degree, const std::string& max_rd) {
  if (cfg.page_size <= 0) throw Error(ErrorCode::ValidationError, "page size must be positive");
  FetchResult out;
  std::string key = cache_key(degree, max_rd, cfg.page_size);
  fs::path dir = fs::path(cfg.cache_dir) / key;
  if (!cfg.offline) {
    fs::create_directories(dir);
    std::string q = "nf_fields;degree=" + std::to_string(degree) + ";max_rd=" + max_rd +
                    ";limit=" + std::to_string(cfg.page_size) + "\n";
    if (!fs::exists(dir / "query.txt")) write_atomic(dir / "query.txt", q);
  }
  std::size_t offset = 0;
  for (int page = 0; page < cfg.max_pages; ++page) {
    fs::path file = dir / page_name(offset);
    std::string path = page_path(cfg, degree, max_rd, offset);
    std::string body;
    if (fs::exists(file)) {
      body = read_file(file);
    } else if (cfg.offline) {
      throw Error(ErrorCode::NetworkError, "offline and no cached page " + file.string());
    } else {
      body = download(cfg, path);
      write_atomic(file, body);
    }
    out.provenance.push_back(cfg.base_url + path);
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaDrift, "page " + file.string() + " is not JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("data") || !j["data"].is_array()) {
      std::cerr << "schema drift: page without data array: " << body.substr(0, 400) << "\n";
      throw Error(ErrorCode::SchemaDrift, "page " + file.string() + " has no data array");
    }
    for (auto& e : j["data"]) {
      ++out.raw_count;
      FieldRecord r = record_from_lmfdb(e);
      if (auto why = hypothesis_rejection(r)) {
        out.rejections.push_back({out.raw_count, r.label, *why, r.degree});
        continue;
      }
      try {
        validate_record(NumberField(r));
      } catch (const Error& err) {
        out.rejections.push_back({out.raw_count, r.label, err.what(), r.degree});
        continue;
      }
      out.records.push_back(std::move(r));
    }
    offset += j["data"].size();
    if (j["data"].empty() || !j.contains("next") || j["next"].is_null()) break;
  }
  return out;
}

}  // namespace fontaine

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fontaine/fieldcore.hpp"

namespace fontaine {

using json = nlohmann::ordered_json;

inline constexpr const char* kFieldSchema = "fontaine.field/1";
inline constexpr const char* kPackSchema = "fontaine.pack/1";

// ---------------------------------------------------------------- records

// Throws ValidationError naming the offending field.
FieldRecord record_from_json(const json& j);
json record_to_json(const FieldRecord& r);
FieldRecord load_record_file(const std::string& path);

// Hypothesis K gate; nullopt when the record satisfies it.
std::optional<std::string> hypothesis_rejection(const FieldRecord& r);

// Full invariant check of a record satisfying Hypothesis K (index, units, torsion, primes over 2).
// Throws ValidationError / FactorizationMismatch / RamifiedAtTwo.
void validate_record(const NumberField& k);

// Structural checks for extension records (no Hypothesis K; 2 may ramify).
void validate_extension_record(const NumberField& k);

struct Rejection {
  std::size_t line = 0;
  std::string label;
  std::string reason;
  int degree = 0;
};

struct LoadResult {
  std::vector<FieldRecord> records;
  std::vector<Rejection> rejections;
  std::vector<std::pair<bool, std::size_t>> order;  // input order: (is record, index into records or rejections)
};

// JSON-lines loader. ParseError carries the line number.
LoadResult load_records(const std::string& path);
LoadResult load_records_from_string(const std::string& text);

// ------------------------------------------------------------------ packs

struct PackEntry {
  std::string kind;  // kummer | witness | N
  FieldRecord record;
  std::string provenance;
};

struct FieldPack {
  FieldRecord base;
  std::map<std::string, PackEntry> extensions;
  const PackEntry* find(const std::string& descriptor) const;
};

FieldPack pack_from_json(const json& j);
json pack_to_json(const FieldPack& p);
FieldPack load_pack(const std::string& path);

// ---------------------------------------------------------------- Odlyzko

class OdlyzkoTable {
 public:
  struct Row {
    long degree;
    Rat bound;  // exact decimal value from the file
  };
  explicit OdlyzkoTable(std::vector<Row> rows);  // throws NonMonotone
  static OdlyzkoTable load(const std::string& path);
  static OdlyzkoTable parse(const std::string& csv);

  const std::vector<Row>& rows() const { return rows_; }
  // Largest degree N whose bound does not exceed x; when rows are sparse this is (next row's
  // degree - 1), an upper bound.  Throws RootDiscTooLarge past the last row.
  long lookup(const Rat& x) const;
  long lookup(double x) const { return lookup(Rat(x)); }
  // Same with x = 4 |disc|^(1/n), compared exactly.
  long lookup_four_root_disc(const Int& abs_disc, int n) const;

 private:
  std::vector<Row> rows_;
};

Rat parse_decimal(const std::string& s);

// ----------------------------------------------------------------- LMFDB

struct FetchConfig {
  std::string base_url = "https://www.lmfdb.org";
  int page_size = 25;
  int timeout_seconds = 30;
  bool offline = false;
  std::string cache_dir = "data/cache/lmfdb";
  int max_pages = 1000;
};

struct FetchResult {
  std::vector<FieldRecord> records;  // odd discriminant only
  std::vector<Rejection> rejections;
  std::size_t raw_count = 0;
  std::vector<std::string> provenance;  // page URLs
};

std::string cache_key(int degree, const std::string& max_rd, int page_size);
std::string sha256_hex(const std::string& data);

// Maps one service entry to a record; primes over 2 are derived from the ring structure.
// Throws SchemaDrift when a field is missing or mistyped.
FieldRecord record_from_lmfdb(const json& entry);

// Throws NetworkError (also when offline and the cache lacks a page) / SchemaDrift.
FetchResult fetch_fields(const FetchConfig& cfg, int degree, const std::string& max_rd);

// Parses "1/2*a^2 - 3*a + 1" style polynomials in the generator a.
QPoly parse_poly_string(const std::string& s, const std::string& var = "a");

}  // namespace fontaine

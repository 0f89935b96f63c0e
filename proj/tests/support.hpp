#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "fontaine/pipeline.hpp"

namespace fontaine::testing {

inline std::string root() { return FONTAINE_SOURCE_DIR; }
inline std::string path(const std::string& rel) { return root() + "/" + rel; }

inline std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline json read_json(const std::string& rel) { return json::parse(slurp(path(rel))); }

inline FieldRecord field_record(const std::string& rel) { return load_record_file(path(rel)); }
inline FieldPtr field(const std::string& rel) { return FieldData::make(field_record(rel)); }

inline const OdlyzkoTable& table() {
  static const OdlyzkoTable t = OdlyzkoTable::load(path("data/odlyzko_grh.csv"));
  return t;
}

// Mismatching entries of data/fixtures/MANIFEST.sha256 (empty when all fixtures are intact).
inline std::vector<std::string> manifest_mismatches() {
  std::vector<std::string> bad;
  std::istringstream in(slurp(path("data/fixtures/MANIFEST.sha256")));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto sp = line.find("  ");
    std::string want = line.substr(0, sp), rel = line.substr(sp + 2);
    std::string data;
    try {
      data = slurp(path("data/fixtures/" + rel));
    } catch (const std::exception&) {
      bad.push_back(rel + " (missing)");
      continue;
    }
    if (sha256_hex(data) != want) bad.push_back(rel);
  }
  return bad;
}

// Canonical prime index for a prime given by its position in the record.
inline std::size_t canonical_of(const FieldData& k, std::size_t record_index) {
  for (std::size_t i = 0; i < k.prime_count(); ++i)
    if (k.record_index(i) == record_index) return i;
  throw std::runtime_error("no such prime");
}

struct Corpus {
  std::vector<BatchItem> items;
  std::map<std::string, FieldPack> packs;
};

// Records from JSON-lines files and single-record files, with packs from data/packs.
inline std::unique_ptr<Corpus> corpus(const std::vector<std::string>& rels, bool with_packs = true) {
  auto c = std::make_unique<Corpus>();
  for (auto& rel : rels) {
    if (rel.ends_with(".jsonl")) {
      LoadResult lr = load_records(path(rel));
      for (auto [is_rec, i] : lr.order) {
        if (is_rec)
          c->items.push_back({lr.records[i], std::nullopt, lr.records[i].degree, nullptr});
        else
          c->items.push_back({std::nullopt, lr.rejections[i], lr.rejections[i].degree, nullptr});
      }
    } else {
      FieldRecord r = field_record(rel);
      if (auto why = hypothesis_rejection(r))
        c->items.push_back({std::nullopt, Rejection{1, r.label, *why, r.degree}, r.degree, nullptr});
      else
        c->items.push_back({r, std::nullopt, r.degree, nullptr});
    }
  }
  if (with_packs) {
    for (auto& it : c->items) {
      if (!it.record) continue;
      std::string p = path("data/packs/" + it.record->label + ".pack.json");
      if (std::filesystem::exists(p)) c->packs.emplace(it.record->label, load_pack(p));
    }
    for (auto& it : c->items)
      if (it.record && c->packs.count(it.record->label)) it.pack = &c->packs.at(it.record->label);
  }
  return c;
}

inline std::string stream(const std::vector<Verdict>& vs) {
  std::string s;
  for (auto& v : vs) s += v.serialize() + "\n";
  return s;
}

}  // namespace fontaine::testing

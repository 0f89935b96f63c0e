#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fontaine/pipeline.hpp"
#include "fontaine/schemecalc.hpp"

using namespace fontaine;
namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 64;

struct RunConfig {
  std::string field, pack, input, packs_dir = "data/packs", table = "data/odlyzko_grh.csv";
  std::string verdicts, manifest = "data/fixtures/MANIFEST.sha256", out;
  std::string format = "json";
  int tower_cap = 20;
  int parallelism = 0;
  bool do_tally = false;
  FetchConfig fetch;
  int degree = 0;
  std::string max_rd = "9.5";
  std::string word;
  int primes = 1;
  bool d2 = false, no_qe1 = false, no_qe2 = false, trace = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool truthy(const char* s) {
  std::string v = s ? s : "";
  return v == "1" || v == "true" || v == "yes" || v == "on";
}

// environment first, then the config file, which wins over flags
void apply_overrides(RunConfig& c, const std::string& config_path) {
  if (const char* e = std::getenv("FONTAINE_OFFLINE"); e && *e) c.fetch.offline = truthy(e);
  if (const char* e = std::getenv("FONTAINE_CACHE_DIR"); e && *e) c.fetch.cache_dir = e;
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot open config " + config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config " + config_path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (auto& [k, v] : j.items()) {
    try {
      if (k == "odlyzko_table") c.table = v.get<std::string>();
      else if (k == "packs") c.packs_dir = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else if (k == "tower_cap") c.tower_cap = v.get<int>();
      else if (k == "parallelism") c.parallelism = v.get<int>();
      else if (k == "offline") c.fetch.offline = v.get<bool>();
      else if (k == "cache_dir") c.fetch.cache_dir = v.get<std::string>();
      else if (k == "base_url") c.fetch.base_url = v.get<std::string>();
      else if (k == "page_size") c.fetch.page_size = v.get<int>();
      else if (k == "timeout_seconds") c.fetch.timeout_seconds = v.get<int>();
      else throw UsageError("unknown config key '" + k + "'");
    } catch (const json::exception&) {
      throw UsageError("config key '" + k + "' has the wrong type");
    }
  }
}

void check_common(const RunConfig& c) {
  if (c.tower_cap < 4) throw UsageError("tower cap must be at least 4");
  if (c.format != "json" && c.format != "csv" && c.format != "text") throw UsageError("format must be json, csv or text");
  if (c.parallelism < 0) throw UsageError("parallelism must be non-negative");
}

std::string csv_header() { return "label,degree,outcome,path,step,reason\n"; }

std::string csv_line(const Verdict& v) {
  std::ostringstream o;
  o << v.label << ',' << v.degree << ',' << outcome_name(v.outcome) << ',' << (v.path ? path_name(*v.path) : "")
    << ',' << (v.step ? std::to_string(*v.step) : "") << ',' << v.reason << '\n';
  return o.str();
}

std::string text_line(const Verdict& v) {
  std::ostringstream o;
  o << v.label << ": " << outcome_name(v.outcome);
  if (v.path) o << " via " << path_name(*v.path);
  if (v.step) o << " at step " << *v.step;
  if (!v.reason.empty()) o << " (" << v.reason << ")";
  o << '\n';
  return o.str();
}

void emit_verdicts(const RunConfig& c, const std::vector<Verdict>& vs) {
  if (c.format == "csv") std::cout << csv_header();
  for (auto& v : vs) {
    if (c.format == "json") std::cout << v.serialize() << '\n';
    else if (c.format == "csv") std::cout << csv_line(v);
    else std::cout << text_line(v);
  }
}

void emit_tally(const RunConfig& c, const std::vector<Verdict>& vs) {
  auto rows = tally(vs);
  if (c.format == "json") std::cout << tally_json(rows).dump() << '\n';
  else if (c.format == "csv") std::cout << tally_csv(rows);
  else std::cout << tally_text(rows);
}

int exit_for(const std::vector<Verdict>& vs) {
  for (auto& v : vs)
    if (v.outcome == Outcome::Inconclusive) return 2;
  return 0;
}

// ----------------------------------------------------------------- commands

int cmd_classify(const RunConfig& c) {
  OdlyzkoTable table = OdlyzkoTable::load(c.table);
  FieldRecord rec = load_record_file(c.field);
  if (!hypothesis_rejection(rec)) validate_record(NumberField(rec));
  std::optional<FieldPack> pack;
  if (!c.pack.empty()) pack = load_pack(c.pack);
  Verdict v = classify(rec, pack ? &*pack : nullptr, table, Caps{c.tower_cap});
  emit_verdicts(c, {v});
  return exit_for({v});
}

int cmd_batch(const RunConfig& c) {
  OdlyzkoTable table = OdlyzkoTable::load(c.table);
  LoadResult lr = load_records(c.input);
  std::map<std::string, FieldPack> packs;
  for (auto& r : lr.records) {
    fs::path p = fs::path(c.packs_dir) / (r.label + ".pack.json");
    if (fs::exists(p)) packs.emplace(r.label, load_pack(p.string()));
  }
  std::vector<BatchItem> items;
  for (auto [is_rec, i] : lr.order) {
    if (is_rec) {
      const FieldRecord& r = lr.records[i];
      items.push_back(BatchItem{r, std::nullopt, r.degree, packs.count(r.label) ? &packs.at(r.label) : nullptr});
    } else {
      const Rejection& r = lr.rejections[i];
      items.push_back(BatchItem{std::nullopt, r, r.degree, nullptr});
    }
  }
  auto vs = classify_batch(items, table, Caps{c.tower_cap}, c.parallelism);
  if (c.do_tally) emit_tally(c, vs);
  else emit_verdicts(c, vs);
  return exit_for(vs);
}

int cmd_fetch(const RunConfig& c) {
  if (c.degree < 1) throw UsageError("--degree must be positive");
  FetchResult r = fetch_fields(c.fetch, c.degree, c.max_rd);
  if (!c.out.empty()) {
    std::ofstream o(c.out, std::ios::trunc);
    if (!o) throw Error(ErrorCode::ValidationError, "cannot write " + c.out);
    for (auto& rec : r.records) o << record_to_json(rec).dump() << '\n';
  }
  if (c.format == "json") {
    json labels = json::array(), rej = json::array();
    for (auto& rec : r.records) labels.push_back(rec.label);
    for (auto& x : r.rejections) rej.push_back(json{{"label", x.label}, {"reason", x.reason}});
    std::cout << json{{"schema", "fontaine.fetch/1"},
                      {"degree", c.degree},
                      {"max_rd", c.max_rd},
                      {"offline", c.fetch.offline},
                      {"raw_count", r.raw_count},
                      {"count", r.records.size()},
                      {"labels", labels},
                      {"rejections", rej},
                      {"provenance", r.provenance}}
                     .dump()
              << '\n';
  } else if (c.format == "csv") {
    std::cout << "label,status\n";
    for (auto& rec : r.records) std::cout << rec.label << ",accepted\n";
    for (auto& x : r.rejections) std::cout << x.label << ",\"" << x.reason << "\"\n";
  } else {
    std::cout << r.records.size() << " records (" << r.raw_count << " entries, " << r.rejections.size()
              << " rejected)\n";
  }
  return 0;
}

int cmd_sort_word(const RunConfig& c) {
  RewriteContext ctx = RewriteContext::make(c.primes, c.d2 ? SchemeDichotomy::D2 : SchemeDichotomy::D1, !c.no_qe1,
                                            !c.no_qe2);
  std::vector<Constituent> w;
  try {
    w = parse_word(ctx, c.word);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  SortResult s = sort_filtration(ctx, w);
  if (c.format == "json") {
    json tr = json::array();
    for (auto& st : s.trace)
      tr.push_back(json{{"position", st.position},
                        {"sub", token(ctx, st.sub)},
                        {"quot", token(ctx, st.quot)},
                        {"kind", move_kind_name(st.move.kind)},
                        {"rule", st.move.rule},
                        {"item", st.move.item}});
    std::cout << json{{"schema", "fontaine.sort/1"},
                      {"input", format_word(ctx, w)},
                      {"sorted", format_word(ctx, s.word)},
                      {"trace", tr}}
                     .dump()
              << '\n';
  } else if (c.format == "csv") {
    std::cout << "input,sorted,moves\n\"" << format_word(ctx, w) << "\",\"" << format_word(ctx, s.word) << "\","
              << s.trace.size() << '\n';
  } else {
    std::cout << format_word(ctx, s.word) << '\n';
    if (c.trace)
      for (auto& st : s.trace)
        std::cout << "  " << st.position << ": " << token(ctx, st.sub) << " < " << token(ctx, st.quot) << " -> "
                  << token(ctx, st.move.new_sub) << " < " << token(ctx, st.move.new_quot) << " ["
                  << st.move.rule << "]\n";
  }
  return 0;
}

int cmd_tally(const RunConfig& c) {
  std::ifstream in(c.verdicts);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + c.verdicts);
  std::vector<Verdict> vs;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      vs.push_back(verdict_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(ln) + ": " + e.what());
    }
  }
  emit_tally(c, vs);
  return 0;
}

int cmd_fixtures_verify(const RunConfig& c) {
  std::ifstream in(c.manifest);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + c.manifest);
  fs::path base = fs::path(c.manifest).parent_path();
  std::vector<std::string> bad;
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto sp = line.find("  ");
    if (sp == std::string::npos) throw Error(ErrorCode::ParseError, "bad manifest line '" + line + "'");
    std::string want = line.substr(0, sp), rel = line.substr(sp + 2);
    ++n;
    std::ifstream f(base / rel, std::ios::binary);
    if (!f) {
      bad.push_back(rel + " (missing)");
      continue;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    if (sha256_hex(ss.str()) != want) bad.push_back(rel);
  }
  if (c.format == "json") {
    std::cout << json{{"schema", "fontaine.fixtures/1"}, {"files", n}, {"ok", bad.empty()}, {"mismatches", bad}}.dump()
              << '\n';
  } else {
    for (auto& b : bad) std::cout << "MISMATCH " << b << '\n';
    std::cout << n << " fixtures, " << bad.size() << " mismatches\n";
  }
  return bad.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fontaine field classifier"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  std::string config;
  app.add_option("--config", config, "JSON config file; its settings override flags");
  app.add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--table", c.table, "Odlyzko CSV");
  app.add_option("--tower-cap", c.tower_cap, "largest conductor exponent tried by the tower test");

  auto* classify_cmd = app.add_subcommand("classify", "classify one field");
  classify_cmd->add_option("--field", c.field, "field record (JSON)")->required();
  classify_cmd->add_option("--pack", c.pack, "extension pack (JSON)");

  auto* batch_cmd = app.add_subcommand("batch", "classify a JSON-lines corpus");
  batch_cmd->add_option("--input", c.input, "JSON-lines records")->required();
  batch_cmd->add_option("--packs", c.packs_dir, "directory of <label>.pack.json files");
  batch_cmd->add_flag("--tally", c.do_tally, "print the tally instead of verdicts");
  batch_cmd->add_option("--parallelism", c.parallelism, "threads (0 = default)");

  auto* fetch_cmd = app.add_subcommand("fetch", "query the number field service");
  fetch_cmd->add_option("--degree", c.degree)->required();
  fetch_cmd->add_option("--max-rd", c.max_rd, "root discriminant bound, as written in the query");
  fetch_cmd->add_flag("--offline", c.fetch.offline, "replay the cache only");
  fetch_cmd->add_option("--cache-dir", c.fetch.cache_dir);
  fetch_cmd->add_option("--base-url", c.fetch.base_url);
  fetch_cmd->add_option("--page-size", c.fetch.page_size);
  fetch_cmd->add_option("--timeout", c.fetch.timeout_seconds);
  fetch_cmd->add_option("--out", c.out, "write accepted records as JSON lines");

  auto* sort_cmd = app.add_subcommand("sort-word", "sort a filtration word");
  sort_cmd->add_option("word", c.word, "comma-separated word, bottom first")->required();
  sort_cmd->add_option("--primes", c.primes, "primes over 2 (1-3)")->check(CLI::Range(1, 3));
  sort_cmd->add_flag("--d2", c.d2, "D2 context (qe flags apply)");
  sort_cmd->add_flag("--no-qe1", c.no_qe1);
  sort_cmd->add_flag("--no-qe2", c.no_qe2);
  sort_cmd->add_flag("--trace", c.trace, "print the moves (text format)");

  auto* tally_cmd = app.add_subcommand("tally", "tally a verdict stream");
  tally_cmd->add_option("--verdicts", c.verdicts, "JSON-lines verdicts")->required();

  auto* fx_cmd = app.add_subcommand("fixtures-verify", "check fixture hashes");
  fx_cmd->add_option("--manifest", c.manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    apply_overrides(c, config);
    check_common(c);
    if (*classify_cmd) return cmd_classify(c);
    if (*batch_cmd) return cmd_batch(c);
    if (*fetch_cmd) return cmd_fetch(c);
    if (*sort_cmd) return cmd_sort_word(c);
    if (*tally_cmd) return cmd_tally(c);
    return cmd_fixtures_verify(c);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

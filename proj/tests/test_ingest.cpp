#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <doctest.h>

#include <thread>

#include "support.hpp"

using namespace fontaine;
using namespace fontaine::testing;
namespace fs = std::filesystem;

namespace {

std::string line_of(const std::string& rel) { return json::parse(slurp(path(rel))).dump() + "\n"; }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fontaine_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> labels(const std::vector<FieldRecord>& rs) {
  std::vector<std::string> out;
  for (auto& r : rs) out.push_back(r.label);
  return out;
}

// Serves cached pages of one query by offset, as the live service would.
struct StubService {
  httplib::Server srv;
  std::thread th;
  int port = 0;
  std::size_t hits = 0;
  explicit StubService(const fs::path& pages) {
    srv.Get("/api/nf_fields/", [this, pages](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      char name[32];
      std::snprintf(name, sizeof name, "page_%06zu.json", std::stoul(req.get_param_value("_offset")));
      fs::path f = pages / name;
      if (!fs::exists(f)) {
        res.status = 404;
        return;
      }
      res.set_content(slurp(f.string()), "application/json");
    });
    port = srv.bind_to_any_port("127.0.0.1");
    th = std::thread([this] { srv.listen_after_bind(); });
    srv.wait_until_ready();
  }
  ~StubService() {
    srv.stop();
    th.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

const char* kDeg2Key = "12990ed6014c8a1b2eeef08f47d64928d15dd183b2af0de953ccf1f4b74e1fca";

}  // namespace

TEST_CASE("records round-trip through JSON") {
  for (auto& e : fs::directory_iterator(path("data/fields"))) {
    json j = json::parse(slurp(e.path().string()));
    CAPTURE(e.path().filename().string());
    CHECK(record_to_json(record_from_json(j)) == j);
  }
  for (auto& e : fs::directory_iterator(path("data/packs"))) {
    json j = json::parse(slurp(e.path().string()));
    // normal form lists extensions by descriptor
    std::sort(j["extensions"].begin(), j["extensions"].end(),
              [](const json& a, const json& b) { return a["descriptor"] < b["descriptor"]; });
    CAPTURE(e.path().filename().string());
    CHECK(pack_to_json(pack_from_json(j)) == j);
  }
}

TEST_CASE("loader examples") {
  auto a = load_records_from_string(line_of("data/fields/q_sqrt5.json"));
  CHECK(a.records.size() == 1);
  CHECK(a.rejections.empty());

  auto b = load_records_from_string(line_of("data/fields/q_sqrt2.json") + "\n" + line_of("data/fields/q_sqrt21.json") +
                                    line_of("data/fields/q_sqrt5.json"));
  REQUIRE(b.rejections.size() == 2);
  CHECK(b.rejections[0].reason == "disc not odd");
  CHECK(b.rejections[0].line == 1);
  CHECK(b.rejections[1].reason == "narrow class number != 1");
  CHECK(b.rejections[1].line == 3);
  CHECK(b.records.size() == 1);
  CHECK(b.order == std::vector<std::pair<bool, std::size_t>>{{false, 0}, {false, 1}, {true, 0}});

  json bad = json::parse(slurp(path("data/fields/q_sqrt17.json")));
  bad["h_plus"] = 1;
  bad["h"] = 1;
  bad["units"][0] = json::array({"5", "0"});
  try {
    load_records_from_string(line_of("data/fields/q_sqrt5.json") + bad.dump() + "\n");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("units") != std::string::npos);
  }
  try {
    load_records_from_string(line_of("data/fields/q_sqrt5.json") + "{not json\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  json missing = json::parse(slurp(path("data/fields/q_sqrt5.json")));
  missing.erase("disc");
  try {
    record_from_json(missing);
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("disc") != std::string::npos);
  }
}

TEST_CASE("fixture corpora load") {
  CHECK(load_records(path("data/corpus/deg2.jsonl")).records.size() == 16);
  CHECK(load_records(path("data/corpus/deg3.jsonl")).records.size() == 64);
}

TEST_CASE("odlyzko table") {
  auto toy = OdlyzkoTable::parse("degree,grh_root_disc_bound\n2,1.5\n5,2.25\n");
  CHECK(toy.lookup(parse_decimal("1")) == 1);
  CHECK(toy.lookup(parse_decimal("1.5")) == 4);
  CHECK(toy.lookup(parse_decimal("2")) == 4);
  CHECK_THROWS_AS(toy.lookup(parse_decimal("2.25")), Error);
  CHECK_THROWS_AS(toy.lookup(parse_decimal("3")), Error);
  // 4 * 5^(1/2) = 8.94..
  CHECK(table().lookup_four_root_disc(5, 2) == 15);
  CHECK(table().lookup(parse_decimal("8.944")) == 15);
  CHECK(table().lookup_four_root_disc(5, 2) == table().lookup(parse_decimal("8.9442719")));
  for (const char* text : {"degree,grh_root_disc_bound\n2,1.5\n3,1.4\n", "degree,grh_root_disc_bound\n3,1.5\n2,1.6\n",
                           "degree,grh_root_disc_bound\n"}) {
    try {
      OdlyzkoTable::parse(text);
      FAIL("expected NonMonotone");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonMonotone);
    }
  }
  CHECK_THROWS_AS(OdlyzkoTable::parse("deg,bound\n2,1.5\n"), Error);
  CHECK_THROWS_AS(OdlyzkoTable::parse("degree,grh_root_disc_bound\n2,1.5e0\n"), Error);
  CHECK(parse_decimal("-0.25") == Rat(-1, 4));
}

TEST_CASE("polynomial strings from the service") {
  CHECK(parse_poly_string("a") == QPoly{Rat(0), Rat(1)});
  CHECK(parse_poly_string("-1") == QPoly{Rat(-1)});
  CHECK(parse_poly_string("3/2*a^2 - 11/2*a - 20") == QPoly{Rat(-20), Rat(-11, 2), Rat(3, 2)});
  CHECK(parse_poly_string("-a^2+a") == QPoly{Rat(0), Rat(1), Rat(-1)});
  CHECK_THROWS_AS(parse_poly_string("2*b"), Error);
}

TEST_CASE("service entries map to records") {
  json page = json::parse(slurp(path(std::string("data/cache/lmfdb/") + kDeg2Key + "/page_000000.json")));
  json e = page["data"][2];
  FieldRecord r = record_from_lmfdb(e);
  CHECK(r.label == "2.2.5.1");
  CHECK(r.disc == 5);
  CHECK_NOTHROW(validate_record(NumberField(r)));
  auto want = field_record("data/fields/q_sqrt5.json");
  CHECK(r.units == want.units);
  for (const char* key : {"coeffs", "zk", "units", "disc_abs", "narrow_class_number"}) {
    json broken = e;
    broken.erase(key);
    CAPTURE(key);
    try {
      record_from_lmfdb(broken);
      FAIL("expected SchemaDrift");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::SchemaDrift);
    }
  }
  json typed = e;
  typed["degree"] = "two";
  CHECK_THROWS_AS(record_from_lmfdb(typed), Error);
}

TEST_CASE("offline replay of the cached queries") {
  // cache directories are named by the query hash
  CHECK(cache_key(2, "9.5", 25) == kDeg2Key);
  CHECK(fs::exists(path(std::string("data/cache/lmfdb/") + cache_key(3, "9.5", 25))));
  FetchConfig cfg;
  cfg.offline = true;
  cfg.cache_dir = path("data/cache/lmfdb");
  cfg.base_url = "http://127.0.0.1:1";  // never contacted
  auto d2 = fetch_fields(cfg, 2, "9.5");
  auto d3 = fetch_fields(cfg, 3, "9.5");
  CHECK(d2.records.size() == 16);
  CHECK(d3.records.size() == 64);
  CHECK(labels(fetch_fields(cfg, 2, "9.5").records) == labels(d2.records));
  CHECK(labels(d3.records) == labels(load_records(path("data/corpus/deg3.jsonl")).records));
  for (std::size_t i = 0; i < d2.records.size(); ++i)
    CHECK(record_to_json(d2.records[i]) == record_to_json(fetch_fields(cfg, 2, "9.5").records[i]));
  for (auto& rj : d2.rejections) CHECK(rj.reason == "disc not odd");

  FetchConfig empty = cfg;
  empty.cache_dir = scratch("empty").string();
  try {
    fetch_fields(empty, 2, "9.5");
    FAIL("expected NetworkError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NetworkError);
  }
}

TEST_CASE("online fetch pages through the service and fills the cache") {
  fs::path src = path(std::string("data/cache/lmfdb/") + kDeg2Key);
  StubService stub(src);
  FetchConfig cfg;
  cfg.base_url = stub.url();
  cfg.timeout_seconds = 5;
  cfg.cache_dir = scratch("online").string();
  auto live = fetch_fields(cfg, 2, "9.5");
  CHECK(live.records.size() == 16);
  CHECK(stub.hits >= 1);
  fs::path dir = fs::path(cfg.cache_dir) / kDeg2Key;
  for (auto& e : fs::directory_iterator(src)) {
    CAPTURE(e.path().filename().string());
    REQUIRE(fs::exists(dir / e.path().filename()));
    CHECK(slurp((dir / e.path().filename()).string()) == slurp(e.path().string()));
  }
  // second run is served from the cache
  std::size_t before = stub.hits;
  cfg.offline = true;
  CHECK(labels(fetch_fields(cfg, 2, "9.5").records) == labels(live.records));
  CHECK(stub.hits == before);
  fs::remove_all(cfg.cache_dir);

  FetchConfig dead;
  dead.base_url = "http://127.0.0.1:1";
  dead.timeout_seconds = 2;
  dead.cache_dir = scratch("dead").string();
  try {
    fetch_fields(dead, 2, "9.5");
    FAIL("expected NetworkError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NetworkError);
  }
  fs::remove_all(dead.cache_dir);
}

TEST_CASE("a drifting page is a hard error") {
  fs::path dir = scratch("drift");
  fs::path pages = dir / "pages";
  fs::create_directories(pages);
  json page = json::parse(slurp(path(std::string("data/cache/lmfdb/") + kDeg2Key + "/page_000000.json")));
  page["data"][0].erase("zk");
  page["next"] = nullptr;
  std::ofstream(pages / "page_000000.json") << page.dump();
  StubService stub(pages);
  FetchConfig cfg;
  cfg.base_url = stub.url();
  cfg.timeout_seconds = 5;
  cfg.cache_dir = (dir / "cache").string();
  try {
    fetch_fields(cfg, 2, "9.5");
    FAIL("expected SchemaDrift");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaDrift);
  }
  fs::remove_all(dir);
}

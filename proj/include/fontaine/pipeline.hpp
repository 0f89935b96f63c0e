#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fontaine/ingest.hpp"
#include "fontaine/rayclass.hpp"

namespace fontaine {

inline constexpr const char* kVerdictSchema = "fontaine.verdict/1";
inline constexpr const char* kTallySchema = "fontaine.tally/1";

enum class Outcome { Fontaine, NoProsaic, Rejected, Inconclusive };
enum class Path { OnePrime, TwoPrimeD1, TwoPrimeD2, ThreePrimeD1, ThreePrimeD2 };
const char* outcome_name(Outcome o);
const char* path_name(Path p);

struct Caps {
  int tower_cap = 20;
};

struct Verdict {
  std::string label;
  int degree = 0;
  Outcome outcome = Outcome::Inconclusive;
  std::optional<Path> path;
  std::optional<int> step;  // Rejected: the failing step (0 = Hypothesis K)
  std::string reason;       // reason code for Rejected / Inconclusive
  json evidence = json::object();

  json to_json() const;
  std::string serialize() const;  // one line, byte-stable
};
// Inverse of Verdict::to_json; throws ParseError.
Verdict verdict_from_json(const json& j);

// ------------------------------------------------------------ single steps

struct Step1Report {
  bool pass = false;
  std::string reason;       // too_many_primes | R_K_not_2group
  std::size_t primes = 0;
  std::vector<Int> r_k;     // invariants of R_K
  int galois_rank = 0;      // rank of Gal(L1/K) = r1 + r2
  json to_json() const;
};
Step1Report step1(FieldPtr k);

struct Step2Report {
  bool pass = false;
  std::vector<WitnessReport> witnesses;  // canonical order
  std::size_t prime = 0;                 // chosen witness prime
  Dichotomy dichotomy = Dichotomy::Neither;
  json to_json(const FieldData& k) const;
};
Step2Report step2(FieldPtr k);

struct ExtensionSummary {
  std::string descriptor;
  Int order;
  bool two_group = false;
};

enum class Step5Status { NotNeeded, Passed, Failed, MissingData, Unverified };
const char* step5_name(Step5Status s);

struct LReport {
  bool pass = false;
  int failed_step = 0;      // 3 or 4
  std::string reason;
  Int l1, l2;               // [L1:Q], [L2:Q]
  std::optional<bool> solvable;  // nullopt when step 5 could not be completed
  std::vector<ExtensionSummary> m_fields, n_fields;
  std::optional<ExtensionSummary> witness_field;
  Step5Status step5 = Step5Status::NotNeeded;
  std::string step5_detail;
  json to_json() const;
};
// Throws MissingExtensionData when a Kummer or witness record is absent from the pack.
LReport steps3to5(FieldPtr k, const Step2Report& w, const FieldPack* pack);

struct TowerEvidence {
  bool pass = false;
  bool inconclusive = false;
  std::string reason;  // no_finite_tower | tower_not_finite | splits_in_witness | tower_cap
  std::vector<TowerReport> towers;  // one per prime, canonical order
  std::vector<std::pair<std::size_t, bool>> not_split;  // (prime, not split in K^p) for step 7
  std::vector<std::size_t> ordering;  // p1, p2, p3 for three primes
  std::optional<bool> qe1, qe2;
  json to_json(const FieldData& k) const;
};
TowerEvidence steps6and7(FieldPtr k, const Step2Report& w, const Caps& caps);

struct GateReport {
  bool pass = false;
  long od = 0;
  std::string detail;  // nine | sixty | none
  json to_json(const Int& l2) const;
};
// Throws RootDiscTooLarge.
GateReport step8(const FieldRecord& rec, const Int& l2, bool solvable, const OdlyzkoTable& table);

// ---------------------------------------------------------------- classify

Verdict classify(const FieldRecord& rec, const FieldPack* pack, const OdlyzkoTable& table, const Caps& caps = {});
// Verdict for a record turned away by the loader's Hypothesis K gate.
Verdict hypothesis_verdict(const Rejection& r, int degree);

struct BatchItem {
  std::optional<FieldRecord> record;
  std::optional<Rejection> rejection;
  int degree = 0;  // for rejections
  const FieldPack* pack = nullptr;
};

// Order of the result follows the input.  threads <= 0 uses the OpenMP default.
std::vector<Verdict> classify_batch(const std::vector<BatchItem>& items, const OdlyzkoTable& table, const Caps& caps,
                                    int threads = 0);
std::vector<Verdict> classify_serial(const std::vector<BatchItem>& items, const OdlyzkoTable& table,
                                     const Caps& caps);

// ------------------------------------------------------------------- tally

struct TallyRow {
  int degree = 0;
  std::size_t fields = 0;  // records that passed Hypothesis K
  std::size_t one_prime = 0, two_d1 = 0, two_d2 = 0, three_d1 = 0, three_d2 = 0;
  std::size_t noprosaic = 0, rejected = 0, inconclusive = 0, hypothesis = 0;
  std::size_t total() const { return one_prime + two_d1 + two_d2 + three_d1 + three_d2; }
};

std::vector<TallyRow> tally(const std::vector<Verdict>& verdicts);
std::string tally_csv(const std::vector<TallyRow>& rows);
json tally_json(const std::vector<TallyRow>& rows);
std::string tally_text(const std::vector<TallyRow>& rows);

// Structural checks on a verdict (Fontaine needs a no-prosaic derivation plus a passed gate, etc.).
// Returns the list of violations.
std::vector<std::string> verdict_violations(const Verdict& v);

}  // namespace fontaine

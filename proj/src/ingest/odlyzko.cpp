#include <algorithm>
#include <fstream>
#include <sstream>

#include "fontaine/ingest.hpp"

namespace fontaine {

Rat parse_decimal(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  std::size_t frac = 0;
  bool dot = false, any = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits += c;
      any = true;
      if (dot) ++frac;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      throw Error(ErrorCode::ParseError, "bad decimal '" + s + "'");
    }
  }
  if (!any) throw Error(ErrorCode::ParseError, "bad decimal '" + s + "'");
  Int num(digits, 10), den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
  Rat r(neg ? Int(-num) : num, den);
  r.canonicalize();
  return r;
}

OdlyzkoTable::OdlyzkoTable(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw Error(ErrorCode::NonMonotone, "empty table");
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (rows_[i].degree <= rows_[i - 1].degree || rows_[i].bound < rows_[i - 1].bound)
      throw Error(ErrorCode::NonMonotone, "row " + std::to_string(i + 1) + " (degree " +
                                              std::to_string(rows_[i].degree) + ") breaks monotonicity");
  }
}

OdlyzkoTable OdlyzkoTable::parse(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t ln = 0;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (ln == 1) {
      if (line != "degree,grh_root_disc_bound")
        throw Error(ErrorCode::ParseError, "line 1: expected header degree,grh_root_disc_bound");
      continue;
    }
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::ParseError, "line " + std::to_string(ln) + ": missing comma");
    Row r;
    try {
      std::size_t used = 0;
      r.degree = std::stol(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("degree");
      r.bound = parse_decimal(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(ln) + ": bad row '" + line + "'");
    }
    rows.push_back(r);
  }
  return OdlyzkoTable(std::move(rows));
}

OdlyzkoTable OdlyzkoTable::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

long OdlyzkoTable::lookup(const Rat& x) const {
  auto it = std::upper_bound(rows_.begin(), rows_.end(), x, [](const Rat& v, const Row& r) { return v < r.bound; });
  if (it == rows_.end()) throw Error(ErrorCode::RootDiscTooLarge, "root discriminant bound beyond the table");
  return it->degree - 1;
}

long OdlyzkoTable::lookup_four_root_disc(const Int& abs_disc, int n) const {
  // first row with bound > 4 |d|^(1/n), i.e. (bound/4)^n > |d|
  auto above = [&](const Row& r) {
    Rat q = r.bound / 4;
    Int num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n));
    return num > abs_disc * den;
  };
  auto it = std::partition_point(rows_.begin(), rows_.end(), [&](const Row& r) { return !above(r); });
  if (it == rows_.end()) throw Error(ErrorCode::RootDiscTooLarge, "4 x root discriminant beyond the table");
  return it->degree - 1;
}

}  // namespace fontaine

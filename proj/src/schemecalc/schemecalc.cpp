#include <algorithm>
#include <cctype>
#include <sstream>

#include "fontaine/schemecalc.hpp"

namespace fontaine {

namespace {

constexpr unsigned P1 = 1, P2 = 2, P3 = 4;

struct TableRow {
  int item;
  unsigned quot, sub;
  const char* rule;  // h+, QE1, QE2, AltNonSplit
  unsigned new_sub, new_quot;
};

// Three primes.  Keyed by (quotient G_rho, sub G_rho'): moving G_rho below G_rho' is governed by
// Ext^1(G_rho, G_rho').
const TableRow kTable[] = {
    {1, P1 | P2, P1 | P3, "QE2", 0, 0},
    {2, P1 | P2, P1, "h+", 0, 0},
    {3, P1 | P2, P2 | P3, "QE1", 0, 0},
    {4, P1 | P2, P2, "h+", 0, 0},
    {5, P1 | P2, P3, "AltNonSplit", P2, P1 | P3},
    {6, P2, P3, "QE2", 0, 0},
    {7, P2 | P3, P3, "h+", 0, 0},
    {8, P1, P3, "QE1", 0, 0},
    {9, P1 | P3, P3, "h+", 0, 0},
    {10, P1 | P3, P1, "h+", 0, 0},
    {11, P1 | P3, P2 | P3, "QE1", 0, 0},
    {12, P1 | P3, P2, "AltNonSplit", P1, P2 | P3},
    {13, P2 | P3, P2, "h+", 0, 0},
    {14, P1, P2, "QE1", 0, 0},
    {15, P1, P2 | P3, "QE1", 0, 0},
};

Move swap(Constituent sub, Constituent quot, const char* rule, int item = 0) {
  return Move{MoveKind::Swap, quot, sub, rule, item};
}

Move blocked(Constituent sub, Constituent quot, const char* rule, int item = 0) {
  return Move{MoveKind::Blocked, sub, quot, rule, item};
}

}  // namespace

RewriteContext RewriteContext::make(int primes, SchemeDichotomy d, bool qe1, bool qe2) {
  if (primes < 1 || primes > 3) throw Error(ErrorCode::UnsortableContext, "context needs 1, 2 or 3 primes");
  RewriteContext c;
  c.primes = primes;
  c.dichotomy = d;
  c.qe1 = d == SchemeDichotomy::D1 ? true : qe1;
  c.qe2 = d == SchemeDichotomy::D1 ? true : qe2;
  return c;
}

std::string token(const RewriteContext& ctx, Constituent c) {
  if (c.mask == ctx.full()) return "mu2";
  if (c.mask == 0) return "Z2";
  std::string s;
  for (int i = 0; i < ctx.primes; ++i)
    if (c.mask >> i & 1) s += "p" + std::to_string(i + 1);
  return s;
}

std::vector<Constituent> parse_word(const RewriteContext& ctx, const std::string& text) {
  std::vector<Constituent> w;
  std::string all;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) all += ch;
  if (all.empty()) return w;
  std::stringstream ss(all);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw Error(ErrorCode::ParseError, "empty token in word '" + text + "'");
    if (tok == "mu2") {
      w.push_back(ctx.mu2());
      continue;
    }
    if (tok == "Z2") {
      w.push_back(ctx.z2());
      continue;
    }
    unsigned mask = 0;
    int last = 0;
    std::size_t i = 0;
    while (i < tok.size()) {
      if (tok[i] != 'p' || i + 1 >= tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i + 1])))
        throw Error(ErrorCode::ParseError, "bad token '" + tok + "'");
      int k = tok[i + 1] - '0';
      if (k < 1 || k > ctx.primes) throw Error(ErrorCode::ParseError, "prime index out of range in '" + tok + "'");
      if (k <= last) throw Error(ErrorCode::ParseError, "prime indices must increase in '" + tok + "'");
      last = k;
      mask |= 1u << (k - 1);
      i += 2;
    }
    w.push_back({mask});
  }
  if (all.back() == ',') throw Error(ErrorCode::ParseError, "trailing comma in word '" + text + "'");
  return w;
}

std::string format_word(const RewriteContext& ctx, const std::vector<Constituent>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + token(ctx, w[i]);
  return s;
}

const std::vector<Constituent>& canonical_order(const RewriteContext& ctx) {
  static const std::vector<Constituent> o1{{1}, {0}};
  static const std::vector<Constituent> o2{{3}, {P1}, {P2}, {0}};
  static const std::vector<Constituent> o3{{7}, {P1 | P2}, {P1 | P3}, {P1}, {P2 | P3}, {P2}, {P3}, {0}};
  switch (ctx.primes) {
    case 1: return o1;
    case 2: return o2;
    default: return o3;
  }
}

int canonical_rank(const RewriteContext& ctx, Constituent c) {
  const auto& o = canonical_order(ctx);
  auto it = std::find(o.begin(), o.end(), c);
  if (it == o.end()) throw Error(ErrorCode::ParseError, "constituent outside the context");
  return static_cast<int>(it - o.begin());
}

ExtData ext_data(Constituent rho, Constituent rho_prime) {
  return ExtData{rho.mask & ~rho_prime.mask, rho_prime.mask & ~rho.mask};
}

Int ext_order(const RewriteContext&, Constituent rho, Constituent rho_prime, const Int& m_degree) {
  ExtData d = ext_data(rho, rho_prime);
  if (d.s() == 0) throw Error(ErrorCode::EmptyS, "S is empty; use the dual pair");
  Int r = m_degree;
  r <<= d.s() - 1;
  return r;
}

const char* move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::Swap: return "Swap";
    case MoveKind::ExceptionalSwap: return "ExceptionalSwap";
    default: return "Blocked";
  }
}

Move move_rule(const RewriteContext& ctx, Constituent sub, Constituent quot) {
  if (sub == quot) return blocked(sub, quot, "none");
  if (quot == ctx.mu2()) return swap(sub, quot, "mu2");
  if (sub == ctx.z2()) return swap(sub, quot, "Z2");
  if (ctx.primes == 2 && sub.mask == P2 && quot.mask == P1) return swap(sub, quot, "two-prime");
  if (ctx.primes == 3) {
    for (const auto& row : kTable) {
      if (row.quot != quot.mask || row.sub != sub.mask) continue;
      std::string r = row.rule;
      if (r == "h+") return swap(sub, quot, row.rule, row.item);
      if (r == "QE1") return ctx.qe1 ? swap(sub, quot, row.rule, row.item) : blocked(sub, quot, row.rule, row.item);
      if (r == "QE2") return ctx.qe2 ? swap(sub, quot, row.rule, row.item) : blocked(sub, quot, row.rule, row.item);
      bool ok = row.item == 5 ? (ctx.qe1 || ctx.qe2) : ctx.qe1;
      if (!ok) return blocked(sub, quot, row.rule, row.item);
      return Move{MoveKind::ExceptionalSwap, {row.new_sub}, {row.new_quot}, row.rule, row.item};
    }
  }
  // unramified case: Ext^1(quot, sub) has order 2^(s-1) with M = K
  ExtData d = ext_data(quot, sub);
  if (d.p_prime_mask == 0 && d.s() == 1) return swap(sub, quot, "h+");
  return blocked(sub, quot, "none");
}

bool is_sorted(const RewriteContext& ctx, const std::vector<Constituent>& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (canonical_rank(ctx, w[i]) > canonical_rank(ctx, w[i + 1])) return false;
  return true;
}

SortResult sort_filtration(const RewriteContext& ctx, std::vector<Constituent> word) {
  for (auto c : word) canonical_rank(ctx, c);
  SortResult out;
  // inversions drop by one per swap; exceptional swaps lower 2#{p3,p1p2} + #{p2,p1p3}
  const std::size_t limit = 16 * (word.size() + 1) * (word.size() + 1) + 16;
  for (;;) {
    std::size_t i = 0;
    while (i + 1 < word.size() && canonical_rank(ctx, word[i]) <= canonical_rank(ctx, word[i + 1])) ++i;
    if (i + 1 >= word.size()) break;
    Move m = move_rule(ctx, word[i], word[i + 1]);
    if (m.kind == MoveKind::Blocked)
      throw Error(ErrorCode::UnsortableContext, "cannot move " + token(ctx, word[i + 1]) + " below " +
                                                    token(ctx, word[i]) + " (needs " + m.rule + ")");
    out.trace.push_back({i, word[i], word[i + 1], m});
    word[i] = m.new_sub;
    word[i + 1] = m.new_quot;
    if (out.trace.size() > limit) throw std::logic_error("sorter failed to terminate");
  }
  out.word = std::move(word);
  return out;
}

std::vector<Constituent> replay(const RewriteContext& ctx, std::vector<Constituent> word,
                                const std::vector<TraceStep>& trace) {
  for (const auto& st : trace) {
    if (st.position + 1 >= word.size() || word[st.position] != st.sub || word[st.position + 1] != st.quot)
      throw Error(ErrorCode::UnsortableContext, "trace does not match the word");
    Move m = move_rule(ctx, st.sub, st.quot);
    if (m.kind == MoveKind::Blocked || m.new_sub != st.move.new_sub || m.new_quot != st.move.new_quot)
      throw Error(ErrorCode::UnsortableContext, "trace step is not a valid move");
    word[st.position] = m.new_sub;
    word[st.position + 1] = m.new_quot;
  }
  return word;
}

std::vector<std::pair<Constituent, std::size_t>> blocks(const std::vector<Constituent>& w) {
  std::vector<std::pair<Constituent, std::size_t>> b;
  for (auto c : w) {
    if (!b.empty() && b.back().first == c)
      ++b.back().second;
    else
      b.push_back({c, 1});
  }
  return b;
}

const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::WeilBounded: return "WeilBounded";
    case BoundKind::Divides: return "Divides";
    default: return "Unbounded";
  }
}

ExponentBound exponent_bounds(const RewriteContext& ctx, Constituent block, std::optional<Int> finite_tower_degree) {
  if (block == ctx.mu2() || block == ctx.z2()) return {BoundKind::WeilBounded, 0};
  if (ctx.dichotomy == SchemeDichotomy::D1) return {BoundKind::Divides, 2};
  if (finite_tower_degree) return {BoundKind::Divides, 2 * *finite_tower_degree};
  return {BoundKind::Unbounded, 0};
}

}  // namespace fontaine

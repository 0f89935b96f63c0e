#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fontaine/abgroup.hpp"

namespace fontaine {

// G_rho for rho a squarefree divisor of 2, encoded by the set of primes dividing rho
// (bit i = pi_{i+1}).  Empty set = Z/2Z, full set = mu_2.
struct Constituent {
  unsigned mask = 0;
  bool operator==(const Constituent& o) const { return mask == o.mask; }
  bool operator!=(const Constituent& o) const { return mask != o.mask; }
  bool operator<(const Constituent& o) const { return mask < o.mask; }
};

enum class SchemeDichotomy { D1, D2 };

struct RewriteContext {
  int primes = 1;  // 1, 2 or 3
  bool qe1 = true;
  bool qe2 = true;
  SchemeDichotomy dichotomy = SchemeDichotomy::D1;

  unsigned full() const { return (1u << primes) - 1; }
  Constituent mu2() const { return {full()}; }
  Constituent z2() const { return {0}; }
  Constituent dual(Constituent c) const { return {full() & ~c.mask}; }
  // D1 forces both flags.
  static RewriteContext make(int primes, SchemeDichotomy d, bool qe1 = true, bool qe2 = true);
};

std::string token(const RewriteContext& ctx, Constituent c);
// Comma-separated tokens: mu2, Z2, or p-lists such as p1p3.  Throws ParseError.
std::vector<Constituent> parse_word(const RewriteContext& ctx, const std::string& text);
std::string format_word(const RewriteContext& ctx, const std::vector<Constituent>& w);

// Canonical block order of the context.
const std::vector<Constituent>& canonical_order(const RewriteContext& ctx);
int canonical_rank(const RewriteContext& ctx, Constituent c);

// Ext^1(G_rho, G_rho'): S = rho \ rho', P' = rho' \ rho.
struct ExtData {
  unsigned s_mask = 0;
  unsigned p_prime_mask = 0;
  int s() const { return __builtin_popcount(s_mask); }
};
ExtData ext_data(Constituent rho, Constituent rho_prime);
// 2^(s-1) * [M:K]; throws EmptyS when s = 0.
Int ext_order(const RewriteContext& ctx, Constituent rho, Constituent rho_prime, const Int& m_degree);

enum class MoveKind { Swap, ExceptionalSwap, Blocked };
const char* move_kind_name(MoveKind k);

struct Move {
  MoveKind kind = MoveKind::Blocked;
  Constituent new_sub, new_quot;  // ordered (sub, quot) after the move
  std::string rule;               // h+, QE1, QE2, mu2, Z2, AltNonSplit, two-prime, none
  int item = 0;                   // row of the rearrangement table, 0 when not a table row
};

// Rewrite for an adjacent pair: `sub` sits directly below `quot`.
Move move_rule(const RewriteContext& ctx, Constituent sub, Constituent quot);

struct TraceStep {
  std::size_t position = 0;  // index of the sub entry
  Constituent sub, quot;
  Move move;
};

struct SortResult {
  std::vector<Constituent> word;
  std::vector<TraceStep> trace;
};

// Throws UnsortableContext when a needed move is blocked.
SortResult sort_filtration(const RewriteContext& ctx, std::vector<Constituent> word);
// Re-applies a trace; throws UnsortableContext if a step does not match.
std::vector<Constituent> replay(const RewriteContext& ctx, std::vector<Constituent> word,
                                const std::vector<TraceStep>& trace);
bool is_sorted(const RewriteContext& ctx, const std::vector<Constituent>& w);

// Runs of equal constituents of a sorted word.
std::vector<std::pair<Constituent, std::size_t>> blocks(const std::vector<Constituent>& w);

enum class BoundKind { WeilBounded, Divides, Unbounded };
const char* bound_kind_name(BoundKind k);
struct ExponentBound {
  BoundKind kind = BoundKind::Unbounded;
  Int value;  // for Divides
};
// finite_tower_degree: [M:K] for the relevant finite tower in the D2 case.
ExponentBound exponent_bounds(const RewriteContext& ctx, Constituent block, std::optional<Int> finite_tower_degree);

}  // namespace fontaine

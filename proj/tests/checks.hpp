#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "fontaine/abgroup.hpp"
#include "fontaine/schemecalc.hpp"

namespace fontaine::testing {

struct SuiteResult {
  std::size_t cases = 0, failures = 0;
  std::string first_failure;
  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
};

// ---------------------------------------------------------------- SNF oracle

inline Int gcd_of_minors(const Matrix& a, std::size_t k) {
  const std::size_t m = a.rows(), n = a.cols();
  Int g = 0;
  std::vector<int> rsel(m, 0), csel(n, 0);
  std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), 1);
  do {
    std::fill(csel.begin(), csel.end(), 0);
    std::fill(csel.begin(), csel.begin() + static_cast<long>(k), 1);
    do {
      Matrix s(k, k);
      std::size_t ri = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!rsel[i]) continue;
        std::size_t ci = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (csel[j]) s(ri, ci++) = a(i, j);
        ++ri;
      }
      Int d = s.det();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    } while (std::prev_permutation(csel.begin(), csel.end()));
  } while (std::prev_permutation(rsel.begin(), rsel.end()));
  return g;
}

// d_k = D_k / D_(k-1) with D_k the gcd of the k x k minors; padded with zeros to a.rows().
inline std::vector<Int> minors_invariants(const Matrix& a) {
  std::vector<Int> out;
  Int prev = 1;
  const std::size_t r = std::min(a.rows(), a.cols());
  for (std::size_t k = 1; k <= r; ++k) {
    Int d = gcd_of_minors(a, k);
    if (d == 0) break;
    out.push_back(d / prev);
    prev = d;
  }
  out.resize(a.rows(), Int(0));
  return out;
}

inline bool unimodular(const Matrix& u) {
  Int d = u.det();
  return d == 1 || d == -1;
}

inline void check_snf(const Matrix& a, SuiteResult& res) {
  ++res.cases;
  auto want = minors_invariants(a);
  auto got = invariant_factors(a);
  if (got != want) {
    res.fail("invariants differ for " + a.str());
    return;
  }
  SnfResult s = snf(a);
  if (!(s.U * a * s.V == s.S) || !unimodular(s.U) || !unimodular(s.V) || !s.S.is_diagonal()) {
    res.fail("bad factorization for " + a.str());
    return;
  }
  const std::size_t r = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < r; ++i) {
    if (s.S(i, i) != want[i]) {
      res.fail("diagonal differs for " + a.str());
      return;
    }
  }
}

inline SuiteResult snf_suite(std::size_t samples = 10000, std::uint64_t seed = 20251201) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 4), entry(-20, 20);
  for (std::size_t t = 0; t < samples; ++t) {
    Matrix a(static_cast<std::size_t>(dim(rng)), static_cast<std::size_t>(dim(rng)));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = entry(rng);
    check_snf(a, res);
  }
  for (int x0 = -5; x0 <= 5; ++x0)
    for (int x1 = -5; x1 <= 5; ++x1)
      for (int x2 = -5; x2 <= 5; ++x2)
        for (int x3 = -5; x3 <= 5; ++x3) check_snf(Matrix::from_rows({{x0, x1}, {x2, x3}}), res);
  return res;
}

// ----------------------------------------------------------------- sorter

inline std::vector<RewriteContext> all_contexts() {
  std::vector<RewriteContext> out;
  for (int t = 1; t <= 3; ++t) {
    out.push_back(RewriteContext::make(t, SchemeDichotomy::D1));
    if (t < 3) {
      out.push_back(RewriteContext::make(t, SchemeDichotomy::D2));
      continue;
    }
    for (bool q1 : {true, false})
      for (bool q2 : {true, false}) out.push_back(RewriteContext::make(t, SchemeDichotomy::D2, q1, q2));
  }
  return out;
}

inline std::string ctx_name(const RewriteContext& c) {
  return std::to_string(c.primes) + (c.dichotomy == SchemeDichotomy::D1 ? "/D1" : "/D2") + (c.qe1 ? "+qe1" : "-qe1") +
         (c.qe2 ? "+qe2" : "-qe2");
}

inline std::vector<int> support_counts(const RewriteContext& ctx, const std::vector<Constituent>& w) {
  std::vector<int> c(static_cast<std::size_t>(ctx.primes) + 2, 0);
  for (auto x : w) {
    for (int i = 0; i < ctx.primes; ++i) c[static_cast<std::size_t>(i)] += x.mask >> i & 1;
    if (x == ctx.mu2()) ++c[static_cast<std::size_t>(ctx.primes)];
    if (x == ctx.z2()) ++c[static_cast<std::size_t>(ctx.primes) + 1];
  }
  return c;
}

inline void check_word(const RewriteContext& ctx, const std::vector<Constituent>& w, SuiteResult& res) {
  ++res.cases;
  const std::string where = ctx_name(ctx) + " [" + format_word(ctx, w) + "]";
  SortResult s;
  try {
    s = sort_filtration(ctx, w);
  } catch (const Error& e) {
    // only a missing QE flag may block the sorter
    if (e.code() != ErrorCode::UnsortableContext || ctx.primes < 3 || (ctx.qe1 && ctx.qe2))
      res.fail(where + ": " + e.what());
    return;
  } catch (const std::exception& e) {
    res.fail(where + ": " + e.what());
    return;
  }
  if (!is_sorted(ctx, s.word)) return res.fail(where + ": result not in canonical order");
  if (s.word.size() != w.size()) return res.fail(where + ": length changed");
  auto blk = blocks(s.word);
  for (std::size_t i = 1; i < blk.size(); ++i)
    if (canonical_rank(ctx, blk[i - 1].first) >= canonical_rank(ctx, blk[i].first))
      return res.fail(where + ": blocks out of order");
  SortResult again = sort_filtration(ctx, s.word);
  if (again.word != s.word || !again.trace.empty()) return res.fail(where + ": not idempotent");
  if (replay(ctx, w, s.trace) != s.word) return res.fail(where + ": trace does not replay");
  bool exceptional = std::any_of(s.trace.begin(), s.trace.end(),
                                 [](const TraceStep& t) { return t.move.kind == MoveKind::ExceptionalSwap; });
  if (!exceptional) {
    auto a = w, b = s.word;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return res.fail(where + ": multiset changed");
  } else if (support_counts(ctx, w) != support_counts(ctx, s.word)) {
    return res.fail(where + ": support multiset changed");
  }
}

inline SuiteResult sorter_suite(std::size_t max_len = 6, std::size_t random_words = 10000, std::size_t random_len = 12,
                                std::uint64_t seed = 4242) {
  SuiteResult res;
  std::mt19937_64 rng(seed);
  for (const auto& ctx : all_contexts()) {
    const auto& alpha = canonical_order(ctx);
    const std::size_t a = alpha.size();
    for (std::size_t len = 0; len <= max_len; ++len) {
      std::vector<std::size_t> idx(len, 0);
      for (;;) {
        std::vector<Constituent> w;
        for (auto i : idx) w.push_back(alpha[i]);
        check_word(ctx, w, res);
        std::size_t p = 0;
        while (p < len && ++idx[p] == a) idx[p++] = 0;
        if (p == len) break;
      }
    }
    std::uniform_int_distribution<std::size_t> L(0, random_len), pick(0, a - 1);
    for (std::size_t t = 0; t < random_words; ++t) {
      std::vector<Constituent> w(L(rng));
      for (auto& c : w) c = alpha[pick(rng)];
      check_word(ctx, w, res);
    }
  }
  return res;
}

}  // namespace fontaine::testing

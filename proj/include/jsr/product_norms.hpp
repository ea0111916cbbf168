#pragma once

// Exhaustive right-extension enumeration of the length-n products of a set,
// with optional entrywise dominance pruning, and the per-length max-entry
// norms read off each frontier (total and per component).
//
// Pruning is sound for everything computed downstream of a frontier: both
// the max-entry norm and the Perron root are monotone in the entrywise order
// on nonnegative matrices, and right-multiplication preserves that order, so
// a dominated prefix can never produce a larger value later.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "jsr/dependency_graph.hpp"
#include "jsr/error.hpp"
#include "jsr/matrix_set.hpp"

namespace jsr {

struct NormOptions {
  bool prune = true;
  std::size_t budget = 200000;  // max surviving products per length
  // Self-test fault hook: additionally discards one non-dominated survivor
  // per extension, which a correct pruning-equivalence check must detect.
  bool inject_frontier_drop = false;
};

// Sort lexicographically and drop exact duplicates; the canonical frontier
// order everything downstream relies on for determinism.
template <class S>
void dedup_products(std::vector<DenseMatrix<S>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const auto& a, const auto& b) { return exact_equal(a, b); }),
          v.end());
}

// Keep only entrywise-maximal members. Expects a deduplicated input; output
// stays in canonical order.
template <class S>
void dominance_reduce(std::vector<DenseMatrix<S>>& v) {
  std::vector<bool> dead(v.size(), false);
  for (std::size_t a = 0; a < v.size(); ++a) {
    if (dead[a]) continue;
    for (std::size_t b = 0; b < v.size(); ++b) {
      if (a == b || dead[b]) continue;
      if (dominated_by(v[a], v[b])) { dead[a] = true; break; }
    }
  }
  std::vector<DenseMatrix<S>> kept;
  kept.reserve(v.size());
  for (std::size_t a = 0; a < v.size(); ++a)
    if (!dead[a]) kept.push_back(std::move(v[a]));
  v = std::move(kept);
}

template <class S>
struct Frontier {
  int length = 0;
  std::vector<DenseMatrix<S>> products;
};

template <class S>
Frontier<S> initial_frontier(const MatrixSet<S>& set, const NormOptions& opt) {
  Frontier<S> f;
  f.length = 1;
  f.products = set.matrices;
  dedup_products(f.products);
  if (opt.prune) dominance_reduce(f.products);
  if (opt.inject_frontier_drop && f.products.size() > 1) f.products.pop_back();
  if (f.products.size() > opt.budget) {
    throw BudgetError("frontier budget exceeded at length 1", 0);
  }
  return f;
}

template <class S>
Frontier<S> extend_frontier(const MatrixSet<S>& set, const Frontier<S>& f,
                            const NormOptions& opt) {
  Frontier<S> next;
  next.length = f.length + 1;
  next.products.reserve(f.products.size() * set.matrices.size());
  for (const auto& p : f.products)
    for (const auto& a : set.matrices)
      next.products.push_back(p * a);
  dedup_products(next.products);
  if (opt.prune) dominance_reduce(next.products);
  if (opt.inject_frontier_drop && next.products.size() > 1) next.products.pop_back();
  if (next.products.size() > opt.budget) {
    throw BudgetError("frontier budget exceeded while extending to length " +
                          std::to_string(next.length),
                      f.length);
  }
  return next;
}

template <class S>
struct NormTable {
  int n_max = 0;           // lengths recorded: 1..n_max
  int requested_n_max = 0;
  bool pruned = false;
  bool budget_exceeded = false;  // extension stopped early; n_max is the reached length
  Condensation condensation;
  std::vector<S> sigma_norm;                   // [n-1]
  std::vector<std::vector<S>> component_norm;  // [n-1][component]

  const S& norm(int n) const {
    if (n < 1 || n > n_max) throw Error("norm length out of range: " + std::to_string(n));
    return sigma_norm[static_cast<std::size_t>(n) - 1];
  }
  const S& component(int n, int c) const {
    if (n < 1 || n > n_max) throw Error("norm length out of range: " + std::to_string(n));
    return component_norm[static_cast<std::size_t>(n) - 1].at(static_cast<std::size_t>(c));
  }
};

template <class S>
S max_component_norm(const NormTable<S>& t, int n) {
  if (n < 1 || n > t.n_max) throw Error("norm length out of range: " + std::to_string(n));
  const auto& row = t.component_norm[static_cast<std::size_t>(n) - 1];
  S best(0);
  for (const auto& v : row)
    if (v > best) best = v;
  return best;
}

template <class S>
NormTable<S> norm_table(const MatrixSet<S>& set, int n_max, const NormOptions& opt = {}) {
  if (n_max < 1) throw Error("n_max must be at least 1");
  NormTable<S> t;
  t.requested_n_max = n_max;
  t.pruned = opt.prune;
  t.condensation = scc(build_graph(set));
  const int ncomp = t.condensation.size();

  auto record = [&](const Frontier<S>& f) {
    S total(0);
    std::vector<S> per_comp(static_cast<std::size_t>(ncomp), S(0));
    for (const auto& p : f.products) {
      for (Index j = 0; j < set.dim; ++j) {
        for (Index i = 0; i < set.dim; ++i) {
          const S& v = p(i, j);
          if (v > total) total = v;
          int ci = t.condensation.component_of[static_cast<int>(i)];
          if (ci == t.condensation.component_of[static_cast<int>(j)] && v > per_comp[ci])
            per_comp[ci] = v;
        }
      }
    }
    t.sigma_norm.push_back(std::move(total));
    t.component_norm.push_back(std::move(per_comp));
    t.n_max = f.length;
  };

  try {
    Frontier<S> f = initial_frontier(set, opt);
    record(f);
    while (f.length < n_max) {
      f = extend_frontier(set, f, opt);
      record(f);
    }
  } catch (const BudgetError&) {
    t.budget_exceeded = true;
    if (t.n_max == 0) throw;  // nothing recorded at all
  }
  return t;
}

// Verifies that every positive entry of every length-n product lies in
// [V^n, dim^(n-1) U^n]. Always enumerates exhaustively; a violation can only
// come from an arithmetic bug.
template <class S>
struct EntryRangeReport {
  int n = 0;
  std::size_t products_checked = 0;
  std::size_t positive_entries = 0;
  S min_positive{};
  S max_positive{};
  S lower_bound{};  // V^n
  S upper_bound{};  // dim^(n-1) U^n
  bool ok = true;
};

template <class S>
EntryRangeReport<S> entry_range_check(const MatrixSet<S>& set, int n,
                                      std::size_t budget = NormOptions{}.budget) {
  if (n < 1) throw Error("n must be at least 1");
  EntryRangeReport<S> rep;
  rep.n = n;
  if (set.all_zero) return rep;  // vacuous: no positive entries anywhere

  const SetConstants<S> c = set_constants(set);
  rep.lower_bound = ScalarTraits<S>::pow_uint(c.smallest_positive, static_cast<unsigned long>(n));
  rep.upper_bound =
      ScalarTraits<S>::pow_uint(ScalarTraits<S>::from_long(set.dim), static_cast<unsigned long>(n - 1)) *
      ScalarTraits<S>::pow_uint(c.largest_positive, static_cast<unsigned long>(n));

  NormOptions opt;
  opt.prune = false;
  opt.budget = budget;
  Frontier<S> f = initial_frontier(set, opt);
  for (int len = 2; len <= n; ++len) f = extend_frontier(set, f, opt);

  bool seen = false;
  for (const auto& p : f.products) {
    ++rep.products_checked;
    for (Index j = 0; j < set.dim; ++j) {
      for (Index i = 0; i < set.dim; ++i) {
        const S& v = p(i, j);
        if (!(v > S(0))) continue;
        ++rep.positive_entries;
        if (!seen || v < rep.min_positive) rep.min_positive = v;
        if (!seen || v > rep.max_positive) rep.max_positive = v;
        seen = true;
      }
    }
  }
  if (seen && (rep.min_positive < rep.lower_bound || rep.max_positive > rep.upper_bound)) {
    rep.ok = false;
    throw InconsistencyError("entry range violation at length " + std::to_string(n) +
                             ": [" + ScalarTraits<S>::repr(rep.min_positive) + ", " +
                             ScalarTraits<S>::repr(rep.max_positive) + "] outside [" +
                             ScalarTraits<S>::repr(rep.lower_bound) + ", " +
                             ScalarTraits<S>::repr(rep.upper_bound) + "]");
  }
  return rep;
}

}  // namespace jsr

#pragma once

// Per-component growth-rate enclosures, criticality classification, the
// dominant-chain exponent r, and the empirical verification that the norm
// sequence behaves like n^r * lambda^n.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jsr/bounds.hpp"
#include "jsr/dependency_graph.hpp"
#include "jsr/error.hpp"
#include "jsr/matrix_set.hpp"
#include "jsr/product_norms.hpp"

namespace jsr {

// Growth-rate enclosure of one component: restrict the set to the component's
// rows/columns (strongly connected by construction for nontrivial components)
// and read the connected two-sided bound at depth n_cls. Trivial components
// contribute an exact [0, 0].
template <class S>
Enclosure<S> component_lambda_bounds(const MatrixSet<S>& set, const std::vector<int>& vertices,
                                     int n_cls, const NormOptions& nopt = {}) {
  if (n_cls < 1) throw Error("component_lambda_bounds: depth must be at least 1");
  const MatrixSet<S> restricted = restrict_set(set, vertices);
  if (restricted.all_zero) return {S(0), S(0), false};
  const NormTable<S> t = norm_table(restricted, n_cls, nopt);
  if (t.n_max < n_cls) {
    throw BudgetError("component classification hit the frontier budget at depth " +
                          std::to_string(t.n_max),
                      t.n_max);
  }
  const BoundInterval<S> b = connected_bounds(restricted, t, n_cls);
  return {b.root_lo, b.root_hi, b.loose};
}

template <class S>
struct ComponentClassification {
  int depth = 0;  // n_cls used for every component
  bool all_zero_set = false;
  std::vector<Enclosure<S>> lambda;  // per component
  std::vector<bool> critical;        // cannot be certified below the best lower bound
};

// critical(C)  <=>  hi(C) >= max over components of lo(C'): the component
// cannot be certified strictly below the best lower bound. Over-inclusion is
// the safe direction; a falsely critical component can only overestimate r.
template <class S>
ComponentClassification<S> classify(const MatrixSet<S>& set, const Condensation& cond,
                                    int n_cls, const NormOptions& nopt = {}) {
  ComponentClassification<S> cls;
  cls.depth = n_cls;
  cls.all_zero_set = set.all_zero;
  for (int c = 0; c < cond.size(); ++c) {
    if (cond.trivial[c]) {
      cls.lambda.push_back({S(0), S(0), false});
    } else {
      cls.lambda.push_back(component_lambda_bounds(set, cond.components[c], n_cls, nopt));
    }
  }
  S best_lo(0);
  for (const auto& e : cls.lambda)
    if (e.lo > best_lo) best_lo = e.lo;
  cls.critical.reserve(cls.lambda.size());
  for (const auto& e : cls.lambda) cls.critical.push_back(!(e.hi < best_lo));
  return cls;
}

struct AutoDepthOptions {
  double target_rel_width = 0.04;  // aim below verify_growth's default gate
  int min_depth = 6;
  int max_depth = 512;
};

// Depth selection for classification: deeper is tighter (the connected-bound
// ratio is (D/K)^(1/n)), so double the depth until every nontrivial
// component's enclosure meets the target width, the frontier budget bites,
// or the hard cap is reached. Singleton sets keep frontiers of size one and
// routinely go deep; branching sets stop where the budget says.
template <class S>
ComponentClassification<S> classify_auto(const MatrixSet<S>& set, const Condensation& cond,
                                         const NormOptions& nopt = {},
                                         const AutoDepthOptions& aopt = {}) {
  const S target = ScalarTraits<S>::from_double(aopt.target_rel_width);
  auto tight_enough = [&](const ComponentClassification<S>& cls) {
    for (std::size_t c = 0; c < cls.lambda.size(); ++c) {
      const auto& e = cls.lambda[c];
      if (!(e.hi > S(0))) continue;
      if (e.hi - e.lo > target * e.hi) return false;
    }
    return true;
  };

  int depth = aopt.min_depth;
  ComponentClassification<S> cls = classify(set, cond, depth, nopt);
  while (!tight_enough(cls) && depth < aopt.max_depth) {
    const int next = std::min(depth * 2, aopt.max_depth);
    try {
      ComponentClassification<S> deeper = classify(set, cond, next, nopt);
      cls = std::move(deeper);
      depth = next;
    } catch (const BudgetError&) {
      break;  // keep the deepest affordable classification
    }
  }
  return cls;
}

template <class S>
struct GrowthOrder {
  Enclosure<S> lambda;               // endpoint-wise max over components
  int exponent = 0;                  // r
  std::vector<int> chain;            // condensation path attaining the exponent
  std::vector<int> critical_members; // the r+1 critical components along it
  int classification_depth = 0;
};

// r is one less than the best number of critical components that a single
// condensation path can visit. The path may pass through non-critical bridge
// components; only the critical ones are counted. Ties resolve to the
// lexicographically smallest chain.
template <class S>
GrowthOrder<S> growth_exponent(const Condensation& cond, const ComponentClassification<S>& cls) {
  if (cls.all_zero_set) throw Error("growth exponent is undefined for the all-zero set");
  const int k = cond.size();
  std::vector<std::vector<int>> succ(k);
  for (const auto& [a, b] : cond.dag_edges) succ[a].push_back(b);

  // Components are in topological order, so edges always go up in index.
  std::vector<int> best(k, 0);
  for (int c = k - 1; c >= 0; --c) {
    int tail = 0;
    for (int d : succ[c]) tail = std::max(tail, best[d]);
    best[c] = (cls.critical[c] ? 1 : 0) + tail;
  }
  int max_count = 0;
  for (int c = 0; c < k; ++c) max_count = std::max(max_count, best[c]);

  GrowthOrder<S> g;
  g.classification_depth = cls.depth;
  g.exponent = max_count - 1;
  for (const auto& e : cls.lambda) enclosure_max_inplace(g.lambda, e);

  int cur = -1;
  for (int c = 0; c < k; ++c) {
    if (best[c] == max_count) { cur = c; break; }
  }
  while (cur != -1) {
    g.chain.push_back(cur);
    if (cls.critical[cur]) g.critical_members.push_back(cur);
    const int needed = best[cur] - (cls.critical[cur] ? 1 : 0);
    int next = -1;
    if (needed > 0) {
      for (int d : succ[cur]) {
        if (best[d] == needed && (next == -1 || d < next)) next = d;
      }
      if (next == -1) throw Error("growth exponent: chain reconstruction failed");
    }
    cur = next;
  }
  return g;
}

template <class S>
struct GrowthVerification {
  int n_lo = 0;
  int n_hi = 0;
  int exponent = 0;
  std::vector<S> q_mid;           // ||Sigma^n|| / (n^r * lambda_mid^n), exact in S
  std::vector<double> q_at_hi;    // same ratio at the enclosure's upper endpoint
  std::vector<double> q_at_lo;    // and at its lower endpoint
  double alpha = 0.0;             // min over n of q_mid
  double beta = 0.0;              // max over n of q_mid
  double slope = 0.0;             // least-squares slope of ln q_mid vs ln n
};

struct GrowthVerifyOptions {
  double max_rel_width = 0.05;  // refuse wider lambda enclosures
};

// Checks the norms against n^r * lambda^n on [n_lo, n_hi]. The ratio q_n is
// flat (slope ~ 0) when r is right; a slope near -1 or +1 means r is off by
// one. q_n is also evaluated at both enclosure endpoints to bracket the
// drift that the enclosure width itself could cause.
template <class S>
GrowthVerification<S> verify_growth(const NormTable<S>& t, const GrowthOrder<S>& g, int n_lo,
                                    int n_hi, const GrowthVerifyOptions& opt = {}) {
  if (n_lo < 1 || n_hi < n_lo) throw Error("verify_growth: bad range");
  if (n_hi > t.n_max) throw Error("verify_growth: range exceeds the norm table");
  if (!(g.lambda.lo > S(0))) {
    throw EnclosureTooWideError(
        "growth rate lower bound is zero; the polynomial factor is not observable");
  }
  const S width = g.lambda.hi - g.lambda.lo;
  if (width > ScalarTraits<S>::from_double(opt.max_rel_width) * g.lambda.hi) {
    throw EnclosureTooWideError(
        "growth rate enclosure too wide for verification; raise the classification depth");
  }

  GrowthVerification<S> v;
  v.n_lo = n_lo;
  v.n_hi = n_hi;
  v.exponent = g.exponent;
  const S mid = (g.lambda.lo + g.lambda.hi) / ScalarTraits<S>::from_long(2);

  double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
  const int count = n_hi - n_lo + 1;
  for (int n = n_lo; n <= n_hi; ++n) {
    const S& norm = t.norm(n);
    if (!(norm > S(0))) {
      throw InconsistencyError("norm vanished although the growth rate is positive");
    }
    const S poly = ScalarTraits<S>::pow_uint(ScalarTraits<S>::from_long(n),
                                             static_cast<unsigned long>(g.exponent));
    const auto un = static_cast<unsigned long>(n);
    const S q = norm / (poly * ScalarTraits<S>::pow_uint(mid, un));
    v.q_at_hi.push_back(ScalarTraits<S>::to_double_dir(
        norm / (poly * ScalarTraits<S>::pow_uint(g.lambda.hi, un)), Rounding::Nearest));
    v.q_at_lo.push_back(ScalarTraits<S>::to_double_dir(
        norm / (poly * ScalarTraits<S>::pow_uint(g.lambda.lo, un)), Rounding::Nearest));
    const double qd = ScalarTraits<S>::to_double_dir(q, Rounding::Nearest);
    v.q_mid.push_back(q);
    if (v.q_mid.size() == 1) {
      v.alpha = v.beta = qd;
    } else {
      v.alpha = std::min(v.alpha, qd);
      v.beta = std::max(v.beta, qd);
    }
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(qd);
    sum_x += lx;
    sum_y += ly;
    sum_xx += lx * lx;
    sum_xy += lx * ly;
  }
  const double denom = count * sum_xx - sum_x * sum_x;
  v.slope = denom == 0 ? 0.0 : (count * sum_xy - sum_x * sum_y) / denom;
  return v;
}

}  // namespace jsr

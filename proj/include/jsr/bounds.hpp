#pragma once

// Certified enclosures of the joint spectral radius. Every emitted decimal
// endpoint is rounded outward from an exact radicand that is kept alongside
// it, so certification survives serialization. The float64 backend reuses the
// same formulas without the certification (intervals collapse to pow()).

#include <algorithm>
#include <string>
#include <vector>

#include "jsr/dependency_graph.hpp"
#include "jsr/error.hpp"
#include "jsr/matrix_set.hpp"
#include "jsr/product_norms.hpp"
#include "jsr/rational.hpp"

namespace jsr {

enum class Method { Main, Connected, Traditional, Blondel };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Main: return "main";
    case Method::Connected: return "connected";
    case Method::Traditional: return "traditional";
    case Method::Blondel: return "blondel";
  }
  return "?";
}

template <class S>
struct Enclosure {
  S lo{};
  S hi{};
  bool loose = false;  // an iteration cap was hit; still a valid enclosure
};

template <class S>
void enclosure_max_inplace(Enclosure<S>& acc, const Enclosure<S>& e) {
  if (e.lo > acc.lo) acc.lo = e.lo;
  if (e.hi > acc.hi) acc.hi = e.hi;
  acc.loose = acc.loose || e.loose;
}

// Dyadic-endpoint enclosure of x^(1/n): maintains lo^n <= x <= hi^n under
// exact comparison, bisecting until (hi - lo) <= 1e-12 * max(hi, 1).
// Exact rational roots (perfect powers) come back with zero width.
inline Enclosure<Rational> nth_root_enclosure(const Rational& x, unsigned long n) {
  if (n < 1) throw Error("nth_root_enclosure: n must be at least 1");
  if (sgn(x) < 0) throw Error("nth_root_enclosure: negative radicand");
  if (sgn(x) == 0) return {Rational(0), Rational(0), false};
  if (auto exact = exact_nth_root(x, n)) return {*exact, *exact, false};

  Rational lo, hi;
  if (x >= 1) {
    lo = 1;
    mpz_class ceil_x;
    mpz_cdiv_q(ceil_x.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    hi = Rational(ceil_x);
  } else {
    lo = 0;
    hi = 1;
  }
  static const Rational tol(1, 1000000000000UL);
  int guard = 0;
  while (true) {
    Rational mid = (lo + hi) / 2;
    if (rational_pow(mid, n) <= x) lo = mid; else hi = mid;
    const Rational scale = hi > 1 ? hi : Rational(1);
    if (hi - lo <= tol * scale) break;
    if (++guard > 20000) throw Error("nth_root_enclosure: bisection failed to converge");
  }
  return {lo, hi, false};
}

template <class S>
Enclosure<S> root_enclosure(const S& x, unsigned long n);

template <>
inline Enclosure<Rational> root_enclosure<Rational>(const Rational& x, unsigned long n) {
  return nth_root_enclosure(x, n);
}

template <>
inline Enclosure<double> root_enclosure<double>(const double& x, unsigned long n) {
  if (n < 1) throw Error("root_enclosure: n must be at least 1");
  const double r = x <= 0 ? 0.0 : std::pow(x, 1.0 / static_cast<double>(n));
  return {r, r, false};
}

// One two-sided bound: method tag, the length n it was taken at, the exact
// radicands, the root enclosure endpoints, and outward-rounded decimals.
template <class S>
struct BoundInterval {
  Method method = Method::Main;
  int n = 1;
  S lower_radicand{};
  S upper_radicand{};
  S root_lo{};
  S root_hi{};
  double lower = 0.0;
  double upper = 0.0;
  bool certified = ScalarTraits<S>::is_exact;
  bool loose = false;
};

template <class S>
BoundInterval<S> make_bound_interval(Method method, int n, S lower_radicand,
                                     S upper_radicand, bool loose = false) {
  BoundInterval<S> b;
  b.method = method;
  b.n = n;
  b.lower_radicand = std::move(lower_radicand);
  b.upper_radicand = std::move(upper_radicand);
  b.loose = loose;
  const auto un = static_cast<unsigned long>(n);
  b.root_lo = root_enclosure<S>(b.lower_radicand, un).lo;
  b.root_hi = root_enclosure<S>(b.upper_radicand, un).hi;
  b.lower = ScalarTraits<S>::to_double_dir(b.root_lo, Rounding::Down);
  b.upper = ScalarTraits<S>::to_double_dir(b.root_hi, Rounding::Up);
  return b;
}

template <class S>
BoundInterval<S> zero_interval(Method method, int n) {
  return make_bound_interval<S>(method, n, S(0), S(0));
}

struct PerronOptions {
  double rel_tol = 1e-9;
  int max_iterations = 100000;
  int check_stride = 8;  // exact quotient evaluations happen every this many steps
};

namespace detail {

template <class S>
DenseMatrix<S> restrict_matrix(const DenseMatrix<S>& m, const std::vector<int>& verts) {
  const Index k = static_cast<Index>(verts.size());
  DenseMatrix<S> r(k, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i)
      r(i, j) = m(verts[i], verts[j]);
  return r;
}

// Certified Perron-root enclosure of an irreducible nonnegative block via
// quotient bounds: for any positive x, min_i (Bx)_i/x_i <= rho(B) <=
// max_i (Bx)_i/x_i. The iteration vector is steered in double precision on
// B + I (primitive, so the direction converges even for periodic blocks);
// the quotients that actually certify are evaluated exactly.
template <class S>
Enclosure<S> collatz_wielandt_block(const DenseMatrix<S>& block, const PerronOptions& opt) {
  const Index k = block.rows();
  if (k == 1) return {block(0, 0), block(0, 0), false};

  const Eigen::MatrixXd steer = to_double_matrix(block);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(k);
  const S rel_tol = ScalarTraits<S>::from_double(opt.rel_tol);

  Enclosure<S> best;
  bool have_best = false;
  auto evaluate = [&]() -> bool {  // true when converged
    Eigen::Matrix<S, Eigen::Dynamic, 1> xs(k);
    for (Index i = 0; i < k; ++i) {
      if (!(x[i] > 0.0) || !std::isfinite(x[i])) {
        throw InconsistencyError("Perron iteration vector left the positive cone");
      }
      xs[i] = ScalarTraits<S>::from_double(x[i]);
    }
    Eigen::Matrix<S, Eigen::Dynamic, 1> w = block * xs;
    S lo = w[0] / xs[0], hi = lo;
    for (Index i = 1; i < k; ++i) {
      S q = w[i] / xs[i];
      if (q < lo) lo = q;
      if (q > hi) hi = q;
    }
    if (!have_best || hi - lo < best.hi - best.lo) {
      best.lo = lo;
      best.hi = hi;
      have_best = true;
    }
    return best.hi - best.lo <= rel_tol * best.hi;
  };

  for (int it = 0; it < opt.max_iterations; ++it) {
    Eigen::VectorXd y = steer * x + x;
    x = y / y.maxCoeff();
    if ((it + 1) % opt.check_stride == 0 && evaluate()) return best;
  }
  evaluate();
  best.loose = true;
  return best;
}

}  // namespace detail

// Certified enclosure of the classic spectral radius of a nonnegative matrix.
// The matrix is split along its own strongly connected components; the Perron
// root is the maximum over the diagonal blocks, so defective coupling between
// blocks never enters the iteration.
template <class S>
Enclosure<S> spectral_radius(const DenseMatrix<S>& m, const PerronOptions& opt = {}) {
  if (m.rows() != m.cols()) throw Error("spectral_radius: matrix must be square");
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) < S(0)) throw Error("spectral_radius: negative entry");

  const Condensation cond = scc(graph_of(m));
  Enclosure<S> out{S(0), S(0), false};
  for (int c = 0; c < cond.size(); ++c) {
    if (cond.trivial[c]) continue;
    const auto block = detail::restrict_matrix(m, cond.components[c]);
    enclosure_max_inplace(out, detail::collatz_wielandt_block(block, opt));
  }
  return out;
}

// Enclosure of the best ordinary spectral radius over all length-m products.
// Only the entrywise-maximal antichain of the final frontier is examined:
// the Perron root is monotone in the entrywise order, so dominated products
// cannot attain the maximum. Reducing the final frontier in every mode makes
// the pruned and exhaustive enumerations land on identical matrices.
template <class S>
Enclosure<S> p_m(const MatrixSet<S>& set, int m, const PerronOptions& popt = {},
                 const NormOptions& nopt = {}) {
  if (m < 1) throw Error("p_m: m must be at least 1");
  if (set.all_zero) return {S(0), S(0), false};
  Frontier<S> f = initial_frontier(set, nopt);
  for (int len = 2; len <= m; ++len) f = extend_frontier(set, f, nopt);
  dominance_reduce(f.products);
  Enclosure<S> out{S(0), S(0), false};
  for (const auto& p : f.products) enclosure_max_inplace(out, spectral_radius(p, popt));
  return out;
}

// P and P-tilde enclosures for m = 1..m_max from a single frontier sweep;
// p_tilde(m) needs plain p up to m + dim, so `p` extends that far.
template <class S>
struct PmTable {
  int m_max = 0;
  std::vector<Enclosure<S>> p;        // [m-1], m = 1..m_max+dim
  std::vector<Enclosure<S>> p_tilde;  // [m-1], m = 1..m_max

  const Enclosure<S>& p_at(int m) const {
    if (m < 1 || static_cast<std::size_t>(m) > p.size()) throw Error("p_m index out of range");
    return p[static_cast<std::size_t>(m) - 1];
  }
  const Enclosure<S>& p_tilde_at(int m) const {
    if (m < 1 || static_cast<std::size_t>(m) > p_tilde.size())
      throw Error("p_tilde index out of range");
    return p_tilde[static_cast<std::size_t>(m) - 1];
  }
};

template <class S>
PmTable<S> pm_table(const MatrixSet<S>& set, int m_max, const PerronOptions& popt = {},
                    const NormOptions& nopt = {}) {
  if (m_max < 1) throw Error("pm_table: m_max must be at least 1");
  PmTable<S> t;
  t.m_max = m_max;
  const int top = m_max + static_cast<int>(set.dim);
  if (set.all_zero) {
    t.p.assign(static_cast<std::size_t>(top), Enclosure<S>{S(0), S(0), false});
  } else {
    Frontier<S> f = initial_frontier(set, nopt);
    for (int len = 1; len <= top; ++len) {
      if (len > 1) f = extend_frontier(set, f, nopt);
      auto finals = f.products;
      dominance_reduce(finals);
      Enclosure<S> e{S(0), S(0), false};
      for (const auto& p : finals) enclosure_max_inplace(e, spectral_radius(p, popt));
      t.p.push_back(e);
    }
  }
  for (int m = 1; m <= m_max; ++m) {
    Enclosure<S> e = t.p_at(m);
    for (int d = 1; d <= static_cast<int>(set.dim); ++d) enclosure_max_inplace(e, t.p_at(m + d));
    t.p_tilde.push_back(e);
  }
  return t;
}

template <class S>
Enclosure<S> p_tilde(const MatrixSet<S>& set, int m, const PerronOptions& popt = {},
                     const NormOptions& nopt = {}) {
  if (m < 1) throw Error("p_tilde: m must be at least 1");
  Enclosure<S> out{S(0), S(0), false};
  for (int d = 0; d <= static_cast<int>(set.dim); ++d)
    enclosure_max_inplace(out, p_m(set, m + d, popt, nopt));
  return out;
}

// -------- the four bound methods --------

template <class S>
BoundInterval<S> main_bounds(const MatrixSet<S>& set, const NormTable<S>& t, int n) {
  if (set.all_zero) return zero_interval<S>(Method::Main, n);
  const S mc = max_component_norm(t, n);
  const SetConstants<S> c = set_constants(set);
  return make_bound_interval<S>(Method::Main, n, c.contraction * mc,
                                ScalarTraits<S>::from_long(set.dim) * mc);
}

template <class S>
BoundInterval<S> connected_bounds(const MatrixSet<S>& set, const NormTable<S>& t, int n) {
  if (set.all_zero) return zero_interval<S>(Method::Connected, n);
  if (!t.condensation.strongly_connected()) {
    throw NotConnectedError("dependency graph has " + std::to_string(t.condensation.size()) +
                            " components; use main_bounds");
  }
  const S norm = t.norm(n);
  const SetConstants<S> c = set_constants(set);
  return make_bound_interval<S>(Method::Connected, n, c.contraction * norm,
                                ScalarTraits<S>::from_long(set.dim) * norm);
}

template <class S>
BoundInterval<S> traditional_bounds_from(const MatrixSet<S>& set, const NormTable<S>& t,
                                         int m, const Enclosure<S>& pm_enclosure) {
  if (set.all_zero) return zero_interval<S>(Method::Traditional, m);
  return make_bound_interval<S>(Method::Traditional, m, pm_enclosure.lo,
                                ScalarTraits<S>::from_long(set.dim) * t.norm(m),
                                pm_enclosure.loose);
}

template <class S>
BoundInterval<S> traditional_bounds(const MatrixSet<S>& set, const NormTable<S>& t, int m,
                                    const PerronOptions& popt = {},
                                    const NormOptions& nopt = {}) {
  if (set.all_zero) return zero_interval<S>(Method::Traditional, m);
  return traditional_bounds_from(set, t, m, p_m(set, m, popt, nopt));
}

// Entrywise-max comparison matrix; the lower endpoint divides by the set
// cardinality (the denominator this bound family uses for finite sets).
template <class S>
BoundInterval<S> blondel_nesterov_bounds(const MatrixSet<S>& set,
                                         const PerronOptions& popt = {}) {
  if (set.all_zero) return zero_interval<S>(Method::Blondel, 1);
  DenseMatrix<S> envelope = set.matrices.front();
  for (const auto& m : set.matrices)
    for (Index j = 0; j < set.dim; ++j)
      for (Index i = 0; i < set.dim; ++i)
        if (m(i, j) > envelope(i, j)) envelope(i, j) = m(i, j);
  const Enclosure<S> e = spectral_radius(envelope, popt);
  const S card = ScalarTraits<S>::from_long(set.size());
  return make_bound_interval<S>(Method::Blondel, 1, e.lo / card, e.hi, e.loose);
}

struct MethodSelection {
  bool main = true;
  bool connected = true;
  bool traditional = true;
  bool blondel = true;
};

template <class S>
struct BestBounds {
  double lower = 0.0;
  double upper = 0.0;
  Method lower_method = Method::Main;
  int lower_n = 1;
  Method upper_method = Method::Main;
  int upper_n = 1;
  bool connected_applicable = false;
  std::vector<BoundInterval<S>> intervals;  // deterministic order, as inspected
};

// Intersection of every requested enclosure over all lengths up to the norm
// table's reach. Every interval provably contains the target, so an empty
// intersection is an arithmetic bug, not a data condition.
template <class S>
BestBounds<S> best_bounds(const MatrixSet<S>& set, const NormTable<S>& t,
                          const MethodSelection& sel = {}, const PerronOptions& popt = {},
                          const NormOptions& nopt = {}) {
  BestBounds<S> out;
  out.connected_applicable = !set.all_zero && t.condensation.strongly_connected();

  if (sel.main)
    for (int n = 1; n <= t.n_max; ++n) out.intervals.push_back(main_bounds(set, t, n));
  if (sel.connected && out.connected_applicable)
    for (int n = 1; n <= t.n_max; ++n) out.intervals.push_back(connected_bounds(set, t, n));
  if (sel.traditional) {
    if (set.all_zero) {
      for (int m = 1; m <= t.n_max; ++m)
        out.intervals.push_back(zero_interval<S>(Method::Traditional, m));
    } else {
      Frontier<S> f = initial_frontier(set, nopt);
      for (int m = 1; m <= t.n_max; ++m) {
        if (m > 1) f = extend_frontier(set, f, nopt);
        auto finals = f.products;
        dominance_reduce(finals);
        Enclosure<S> e{S(0), S(0), false};
        for (const auto& p : finals) enclosure_max_inplace(e, spectral_radius(p, popt));
        out.intervals.push_back(traditional_bounds_from(set, t, m, e));
      }
    }
  }
  if (sel.blondel) out.intervals.push_back(blondel_nesterov_bounds(set, popt));

  if (out.intervals.empty()) throw Error("no applicable bound method was selected");
  out.lower = out.intervals.front().lower;
  out.upper = out.intervals.front().upper;
  out.lower_method = out.upper_method = out.intervals.front().method;
  out.lower_n = out.upper_n = out.intervals.front().n;
  for (const auto& b : out.intervals) {
    if (b.lower > out.lower) {
      out.lower = b.lower;
      out.lower_method = b.method;
      out.lower_n = b.n;
    }
    if (b.upper < out.upper) {
      out.upper = b.upper;
      out.upper_method = b.method;
      out.upper_n = b.n;
    }
  }
  if (out.lower > out.upper) {
    throw InconsistencyError(
        "bound intervals have empty intersection: lower " + std::to_string(out.lower) +
        " from " + method_name(out.lower_method) + "(n=" + std::to_string(out.lower_n) +
        ") exceeds upper " + std::to_string(out.upper) + " from " +
        method_name(out.upper_method) + "(n=" + std::to_string(out.upper_n) + ")");
  }
  return out;
}

template <class S>
BestBounds<S> best_bounds(const MatrixSet<S>& set, int n_max, const MethodSelection& sel = {},
                          const PerronOptions& popt = {}, const NormOptions& nopt = {}) {
  const NormTable<S> t = norm_table(set, n_max, nopt);
  if (t.budget_exceeded) {
    throw BudgetError("norm table truncated at length " + std::to_string(t.n_max), t.n_max);
  }
  return best_bounds(set, t, sel, popt, nopt);
}

}  // namespace jsr

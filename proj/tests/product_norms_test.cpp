#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jsr/product_norms.hpp"
#include "test_support.hpp"

using namespace jsr;
using jsr_test::mat2;

TEST_CASE("norms of the worked examples") {
  auto tri = jsr_test::triangular_example();
  auto t = norm_table(tri, 10);
  for (int n = 1; n <= 10; ++n) {
    CHECK(t.norm(n) == Rational(n));
    CHECK(t.component(n, 0) == Rational(1));
    CHECK(t.component(n, 1) == Rational(1));
    CHECK(max_component_norm(t, n) == Rational(1));
  }

  auto zero = make_matrix_set<Rational>({RationalMatrix::Zero(2, 2)});
  auto tz = norm_table(zero, 5);
  for (int n = 1; n <= 5; ++n) CHECK(tz.norm(n) == Rational(0));

  auto rec = jsr_test::reciprocal_example();
  auto tr = norm_table(rec, 10);
  Rational expected = 10;
  for (int n = 1; n <= 10; ++n) {
    CHECK(tr.norm(n) == expected);
    expected *= 2;
  }
  CHECK(max_component_norm(tr, 1) == Rational(10));
}

TEST_CASE("identity set keeps unit norms") {
  auto idset = make_matrix_set<Rational>({RationalMatrix::Identity(2, 2)});
  auto t = norm_table(idset, 6);
  for (int n = 1; n <= 6; ++n) CHECK(max_component_norm(t, n) == Rational(1));
}

TEST_CASE("frontier bookkeeping without pruning") {
  NormOptions raw;
  raw.prune = false;
  auto cyc = make_matrix_set<Rational>({mat2(0, 1, 0, 0), mat2(0, 0, 1, 0)});
  auto f = initial_frontier(cyc, raw);
  CHECK(f.products.size() == 2);
  f = extend_frontier(cyc, f, raw);
  // AA and BB are both zero: 4 words collapse to 3 distinct products
  CHECK(f.products.size() == 3);
}

TEST_CASE("budget exceeds report the reached length") {
  std::mt19937 rng(5);
  auto set = jsr_test::random_set(rng, 3, 3, 0.9);
  NormOptions opt;
  opt.prune = false;
  opt.budget = 10;
  auto t = norm_table(set, 8, opt);
  CHECK(t.budget_exceeded);
  CHECK(t.n_max < 8);
  CHECK(t.n_max >= 1);
  // the recorded prefix matches an unbudgeted run
  NormOptions free_opt;
  free_opt.prune = false;
  auto full = norm_table(set, t.n_max, free_opt);
  for (int n = 1; n <= t.n_max; ++n) CHECK(t.norm(n) == full.norm(n));
}

TEST_CASE("pruning never changes any recorded norm") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    auto set = jsr_test::random_set(rng, 2 + static_cast<Index>(rng() % 3),
                                    1 + static_cast<int>(rng() % 3), 0.55);
    NormOptions pruned, exhaustive;
    pruned.prune = true;
    exhaustive.prune = false;
    auto a = norm_table(set, 8, pruned);
    auto b = norm_table(set, 8, exhaustive);
    REQUIRE(a.n_max == b.n_max);
    for (int n = 1; n <= a.n_max; ++n) {
      CHECK(a.norm(n) == b.norm(n));
      for (int c = 0; c < a.condensation.size(); ++c)
        CHECK(a.component(n, c) == b.component(n, c));
    }
  }
}

TEST_CASE("fault-injection hook breaks pruning equivalence") {
  auto set = make_matrix_set<Rational>({mat2(1, 1, 0, 1), mat2(2, 0, 0, 0)});
  NormOptions broken;
  broken.inject_frontier_drop = true;
  auto bad = norm_table(set, 4, broken);
  auto good = norm_table(set, 4);
  bool differs = false;
  for (int n = 1; n <= 4; ++n)
    if (bad.norm(n) != good.norm(n)) differs = true;
  CHECK(differs);
}

TEST_CASE("component norms never exceed the total norm") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto set = jsr_test::random_set(rng, 2 + static_cast<Index>(rng() % 4),
                                    1 + static_cast<int>(rng() % 3), 0.5);
    auto t = norm_table(set, 6);
    for (int n = 1; n <= t.n_max; ++n)
      for (int c = 0; c < t.condensation.size(); ++c)
        CHECK(t.component(n, c) <= t.norm(n));
  }
}

TEST_CASE("submultiplicativity up to the dimension factor") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    auto set = jsr_test::random_set(rng, 2 + static_cast<Index>(rng() % 3),
                                    1 + static_cast<int>(rng() % 3), 0.6);
    auto t = norm_table(set, 8);
    const Rational d(static_cast<long>(set.dim));
    for (int m = 1; m < 8; ++m)
      for (int n = 1; m + n <= 8; ++n)
        CHECK(t.norm(m + n) <= d * t.norm(m) * t.norm(n));
  }
}

TEST_CASE("weak supermultiplicativity on connected graphs") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    auto set = jsr_test::random_connected_set(rng, 2 + static_cast<Index>(rng() % 2), 2);
    auto t = norm_table(set, 8);
    auto c = set_constants(set);
    const Rational d(static_cast<long>(set.dim));
    const Rational factor = rational_pow(c.largest_positive * d / c.smallest_positive,
                                         static_cast<unsigned long>(set.dim));
    for (int m = 1; m < 8; ++m)
      for (int n = 1; m + n <= 8; ++n)
        CHECK(t.norm(m) * t.norm(n) <= factor * t.norm(m + n));
  }
}

TEST_CASE("entry range check on the worked examples") {
  auto idset = make_matrix_set<Rational>({RationalMatrix::Identity(2, 2)});
  auto rep = entry_range_check(idset, 3);
  CHECK(rep.positive_entries == 2);
  CHECK(rep.min_positive == Rational(1));
  CHECK(rep.max_positive == Rational(1));
  CHECK(rep.lower_bound == Rational(1));
  CHECK(rep.upper_bound == Rational(4));

  auto tri = jsr_test::triangular_example();
  auto rep2 = entry_range_check(tri, 4);
  CHECK(rep2.min_positive == Rational(1));
  CHECK(rep2.max_positive == Rational(4));
  CHECK(rep2.upper_bound == Rational(8));

  auto rec = jsr_test::reciprocal_example();
  auto rep3 = entry_range_check(rec, 2);
  CHECK(rep3.lower_bound == Rational(1, 100));
  CHECK(rep3.upper_bound == Rational(200));
  CHECK(rep3.ok);

  auto zero = make_matrix_set<Rational>({RationalMatrix::Zero(2, 2)});
  auto rep4 = entry_range_check(zero, 3);
  CHECK(rep4.positive_entries == 0);
  CHECK(rep4.ok);
}

TEST_CASE("entry range lemma holds on random sets") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto set = jsr_test::random_set(rng, 2 + static_cast<Index>(rng() % 3),
                                    1 + static_cast<int>(rng() % 3), 0.6);
    for (int n = 1; n <= 5; ++n) CHECK(entry_range_check(set, n).ok);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wfe/digraph.hpp"
#include "wfe/ordinal.hpp"

using namespace wfe;
using testutil::catches;
using testutil::gen_ord;

namespace {

CnfOrdinal ord(const std::string& text) { return ordinal_parse(text); }

std::uint64_t u64_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

TEST_CASE("construction and classification") {
  CHECK(ord_zero().terms.empty());
  CHECK(ord_nat(0) == ord_zero());
  CHECK(ord_nat(5).terms.size() == 1);
  CHECK(ord_nat(5).terms[0].exp == ord_zero());
  CHECK(ord_nat(5).terms[0].coeff == 5);
  CHECK(ord_omega().terms.size() == 1);
  CHECK(ord_omega().terms[0].exp == ord_nat(1));
  CHECK(ord_omega().terms[0].coeff == 1);

  CHECK(is_finite(ord_zero()));
  CHECK(is_finite(ord_nat(41)));
  CHECK_FALSE(is_finite(ord_omega()));
  CHECK_FALSE(is_finite(ord("w + 3")));

  CHECK(nat_value(ord_zero()) == 0);
  CHECK(nat_value(ord_nat(7)) == 7);
  CHECK_FALSE(nat_value(ord_omega()).has_value());
  CHECK_FALSE(nat_value(ord("w^2*3 + 1")).has_value());
}

TEST_CASE("printing and parsing round-trip") {
  // Frozen surface forms: coefficient 1 is silent, finite exponents are bare,
  // infinite exponents wear braces.
  CHECK(ordinal_print(ord_zero()) == "0");
  CHECK(ordinal_print(ord_nat(12)) == "12");
  CHECK(ordinal_print(ord_omega()) == "w");
  CHECK(ordinal_print(ord("w*2")) == "w*2");
  CHECK(ordinal_print(ord("w^2")) == "w^2");
  CHECK(ordinal_print(ord("w^2 + w*3 + 1")) == "w^2 + w*3 + 1");
  CHECK(ordinal_print(ord("w^{w}")) == "w^{w}");
  CHECK(ordinal_print(ord("w^{w + 1} + w^{w}")) == "w^{w + 1} + w^{w}");
  CHECK(ordinal_print(ord("w^{w^{w}*2}*9 + w^3*4 + 17")) ==
        "w^{w^{w}*2}*9 + w^3*4 + 17");

  // The exponent grammar accepts a bare w and a braced sum interchangeably.
  CHECK(ord("w^w") == ord("w^{w}"));
  CHECK(ord("w^{2}") == ord("w^2"));
  CHECK(ord("w^0*5") == ord_nat(5));
  CHECK(ord("w*0") == ord_zero());
  CHECK(ord("w*1") == ord_omega());

  // Sums normalize while parsing: absorbed and like terms fold away.
  CHECK(ord("1 + w") == ord_omega());
  CHECK(ordinal_print(ord("1 + w")) == "w");
  CHECK(ord("w + w") == ord("w*2"));
  CHECK(ord("w*2 + w*3") == ord("w*5"));
  CHECK(ord("w^2 + w + w^2") == ord("w^2*2"));
  CHECK(ord("2 + 3") == ord_nat(5));
  CHECK(ord("  w ^ { w }  *  3 ") == cnf_mul(ord("w^{w}"), ord_nat(3)));

  std::mt19937_64 rng(20260819);
  for (int i = 0; i < 400; ++i) {
    CnfOrdinal a = gen_ord(rng, 2);
    CnfOrdinal back = ordinal_parse(ordinal_print(a));
    CHECK(back == a);
  }
}

TEST_CASE("parse rejections carry offsets") {
  auto rejects = [](const std::string& text, const std::string& message) {
    try {
      ordinal_parse(text);
      FAIL_CHECK("no error for: " << text);
    } catch (const error& e) {
      CHECK(e.code() == errc::syntax_error);
      CHECK(std::string(e.what()) == message);
    }
  };
  rejects("", "ordinal: expected a number at offset 0");
  rejects("x", "ordinal: expected a number at offset 0");
  rejects("w + ", "ordinal: expected a number at offset 4");
  rejects("w^", "ordinal: expected a number at offset 2");
  rejects("w^{w", "ordinal: expected '}' at offset 4");
  rejects("w*", "ordinal: expected a number at offset 2");
  rejects("w w", "ordinal: trailing input at offset 2");
  rejects("5x", "ordinal: trailing input at offset 1");
  rejects("w^{1 + }", "ordinal: expected a number at offset 7");

  // A numeral too wide for the coefficient type trips the growth guard, not
  // the grammar.
  CHECK(catches([] { ordinal_parse("99999999999999999999999"); }) ==
        errc::too_large);
}

TEST_CASE("comparison is a strict total order") {
  CHECK(cnf_cmp(ord_zero(), ord_nat(1)) < 0);
  CHECK(cnf_cmp(ord_nat(3), ord_nat(3)) == 0);
  CHECK(cnf_cmp(ord_nat(4), ord_nat(3)) > 0);
  CHECK(cnf_cmp(ord_nat(1000000), ord_omega()) < 0);
  CHECK(cnf_cmp(ord_omega(), ord("w + 1")) < 0);
  CHECK(cnf_cmp(ord("w^2"), ord("w*5")) > 0);
  CHECK(cnf_cmp(ord("w^{w}"), ord("w^1000*1000 + w*7")) > 0);
  CHECK(cnf_cmp(ord("w^2 + w"), ord("w^2 + 1")) > 0);
  CHECK(cnf_cmp(ord("w*3 + 2"), ord("w*3 + 2")) == 0);

  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    CnfOrdinal a = gen_ord(rng, 2);
    CnfOrdinal b = gen_ord(rng, 2);
    CnfOrdinal c = gen_ord(rng, 2);
    int ab = cnf_cmp(a, b);
    CHECK(ab == -cnf_cmp(b, a));
    CHECK(cnf_cmp(a, a) == 0);
    CHECK((ab == 0) == (a == b));
    if (cnf_cmp(a, b) <= 0 && cnf_cmp(b, c) <= 0) CHECK(cnf_cmp(a, c) <= 0);
    // Adding on the right is strictly monotone; adding on the left never
    // shrinks the sum.
    if (!b.terms.empty()) CHECK(cnf_cmp(cnf_add(a, b), a) > 0);
    CHECK(cnf_cmp(cnf_add(a, b), b) >= 0);
  }
}

TEST_CASE("addition and multiplication examples") {
  CHECK(cnf_add(ord_nat(1), ord_omega()) == ord_omega());
  CHECK(cnf_add(ord_omega(), ord_nat(1)) == ord("w + 1"));
  CHECK(cnf_add(ord("w + 5"), ord("w^2")) == ord("w^2"));
  CHECK(cnf_add(ord("w^2"), ord("w + 5")) == ord("w^2 + w + 5"));
  CHECK(cnf_add(ord("w^2*2 + w"), ord("w^2 + 3")) == ord("w^2*3 + 3"));

  CHECK(cnf_mul(ord_omega(), ord_nat(2)) == ord("w*2"));
  CHECK(cnf_mul(ord_nat(2), ord_omega()) == ord_omega());
  CHECK(cnf_mul(ord_omega(), ord_nat(2)) != cnf_mul(ord_nat(2), ord_omega()));
  CHECK(cnf_mul(ord("w + 1"), ord("w + 1")) == ord("w^2 + w + 1"));
  CHECK(cnf_mul(ord("w + 3"), ord_omega()) == ord("w^2"));
  CHECK(cnf_mul(ord("w^2*3 + w"), ord_nat(2)) == ord("w^2*6 + w"));
  CHECK(cnf_mul(ord("w^{w} + w"), ord("w*2 + 3")) ==
        ord("w^{w + 1}*2 + w^{w}*3 + w"));
  CHECK(cnf_mul(ord_zero(), ord_omega()) == ord_zero());
  CHECK(cnf_mul(ord_omega(), ord_zero()) == ord_zero());

  // Distributing over a sum from the right fails in general.
  CHECK(cnf_mul(ord_nat(2), ord_omega()) !=
        cnf_add(ord_omega(), ord_omega()));
}

TEST_CASE("exponentiation examples") {
  CHECK(cnf_pow(ord_zero(), ord_zero()) == ord_nat(1));
  CHECK(cnf_pow(ord_zero(), ord_omega()) == ord_zero());
  CHECK(cnf_pow(ord_zero(), ord_nat(3)) == ord_zero());
  CHECK(cnf_pow(ord_nat(1), ord("w^{w} + w*2")) == ord_nat(1));
  CHECK(cnf_pow(ord("w^2 + 1"), ord_zero()) == ord_nat(1));
  CHECK(cnf_pow(ord("w^2 + 1"), ord_nat(1)) == ord("w^2 + 1"));

  CHECK(cnf_pow(ord_nat(2), ord_nat(10)) == ord_nat(1024));
  CHECK(cnf_pow(ord_nat(2), ord_omega()) == ord_omega());
  CHECK(cnf_pow(ord_nat(7), ord("w*2")) == ord("w^2"));
  CHECK(cnf_pow(ord_nat(2), ord("w + 3")) == ord("w*8"));
  CHECK(cnf_pow(ord_nat(2), ord("w^2")) == ord("w^{w}"));
  // Finite bases shift every infinite exponent term down one rung.
  CHECK(cnf_pow(ord_nat(2), ord("w^2*3 + w*2 + 5")) == ord("w^{w*3 + 2}*32"));
  CHECK(cnf_pow(ord_nat(3), ord("w^{w}")) == ord("w^{w^{w}}"));

  CHECK(cnf_pow(ord("w + 1"), ord_nat(2)) == ord("w^2 + w + 1"));
  CHECK(cnf_pow(ord_omega(), ord_nat(3)) == ord("w^3"));
  CHECK(cnf_pow(ord_omega(), ord_omega()) == ord("w^{w}"));
  CHECK(cnf_pow(ord("w + 1"), ord_omega()) == ord("w^{w}"));
  CHECK(cnf_pow(ord("w + 1"), ord("w + 1")) == ord("w^{w + 1} + w^{w}"));
  CHECK(cnf_pow(ord("w^2"), ord_omega()) == ord("w^{w}"));
  CHECK(cnf_pow(ord("w^2*5 + 4"), ord("w*3 + 2")) ==
        cnf_mul(ord("w^{w*3}"), cnf_pow(ord("w^2*5 + 4"), ord_nat(2))));
}

TEST_CASE("algebraic laws hold on random ordinals") {
  std::mt19937_64 rng(31337);
  int pow_checked = 0;
  for (int i = 0; i < 300; ++i) {
    CnfOrdinal a = gen_ord(rng, 2);
    CnfOrdinal b = gen_ord(rng, 2);
    CnfOrdinal c = gen_ord(rng, 2);

    CHECK(cnf_add(cnf_add(a, b), c) == cnf_add(a, cnf_add(b, c)));
    CHECK(cnf_mul(cnf_mul(a, b), c) == cnf_mul(a, cnf_mul(b, c)));
    CHECK(cnf_mul(a, cnf_add(b, c)) ==
          cnf_add(cnf_mul(a, b), cnf_mul(a, c)));
    CHECK(cnf_add(a, ord_zero()) == a);
    CHECK(cnf_add(ord_zero(), a) == a);
    CHECK(cnf_mul(a, ord_nat(1)) == a);
    CHECK(cnf_mul(ord_nat(1), a) == a);

    // Power laws can legitimately outgrow the representation; skip those runs.
    try {
      CnfOrdinal lhs = cnf_pow(a, cnf_add(b, c));
      CnfOrdinal rhs = cnf_mul(cnf_pow(a, b), cnf_pow(a, c));
      CHECK(lhs == rhs);
      CHECK(cnf_pow(cnf_pow(a, b), c) == cnf_pow(a, cnf_mul(b, c)));
      ++pow_checked;
    } catch (const error& e) {
      CHECK(e.code() == errc::too_large);
    }
  }
  CHECK(pow_checked > 150);
}

TEST_CASE("naturals embed faithfully") {
  for (std::uint64_t m = 0; m <= 6; ++m) {
    for (std::uint64_t n = 0; n <= 6; ++n) {
      CHECK(cnf_add(ord_nat(m), ord_nat(n)) == ord_nat(m + n));
      CHECK(cnf_mul(ord_nat(m), ord_nat(n)) == ord_nat(m * n));
      CHECK(cnf_pow(ord_nat(m), ord_nat(n)) == ord_nat(u64_pow(m, n)));
      int want = m < n ? -1 : (m == n ? 0 : 1);
      CHECK(cnf_cmp(ord_nat(m), ord_nat(n)) == want);
    }
  }
}

TEST_CASE("growth guards") {
  const std::uint64_t big = UINT64_MAX;
  auto message_of = [](auto fn) {
    try {
      fn();
      return std::string("no error");
    } catch (const error& e) {
      return std::string(e.what());
    }
  };

  CHECK(catches([&] { cnf_add(ord_nat(big), ord_nat(1)); }) ==
        errc::too_large);
  CHECK(catches([&] { cnf_mul(ord_nat(big / 2), ord_nat(3)); }) ==
        errc::too_large);
  CHECK(catches([&] { cnf_pow(ord_nat(10), ord_nat(1000000)); }) ==
        errc::too_large);
  CHECK(message_of([&] { cnf_add(ord_nat(big), ord_nat(1)); }) ==
        "ordinal coefficient exceeds the representable range");

  // Coefficients ride along multiplication of like terms too.
  CHECK(catches([&] {
          cnf_mul(cnf_mul(ord_omega(), ord_nat(big / 2)), ord_nat(3));
        }) == errc::too_large);

  // Concatenating two wide sums overruns the term budget.
  auto wide = [](std::uint64_t n, std::uint64_t floor) {
    CnfOrdinal r;
    for (std::uint64_t i = 0; i < n; ++i) {
      r.terms.push_back(CnfTerm{ord_nat(floor + n - i), 1});
    }
    return r;
  };
  CnfOrdinal high = wide(110000, 120000);
  CnfOrdinal low = wide(110000, 0);
  CHECK(catches([&] { cnf_add(high, low); }) == errc::too_large);
  CHECK(message_of([&] { cnf_add(high, low); }) ==
        "ordinal exceeds the supported term count");

  // Just inside the budget still works.
  CHECK(cnf_pow(ordinal_parse("w + 1"), ord_nat(1000)).terms.size() == 1001);
}

TEST_CASE("arithmetic dispatch") {
  CHECK(cnf_arith(CnfOp::add, ord_nat(1), ord_omega()) == ord_omega());
  CHECK(cnf_arith(CnfOp::mul, ord_omega(), ord_nat(2)) == ord("w*2"));
  CHECK(cnf_arith(CnfOp::pow, ord_nat(2), ord("w^2")) == ord("w^{w}"));
}

TEST_CASE("well-order collapse examples and witnesses") {
  WellOrderCollapse chain = collapse_wellorder(Digraph::of({{0, 1}, {0, 2}, {1, 2}}));
  CHECK(chain.n == 3);
  CHECK(chain.iso == NodeMap{{0, 0}, {1, 1}, {2, 2}});

  WellOrderCollapse empty = collapse_wellorder(Digraph{});
  CHECK(empty.n == 0);
  CHECK(empty.iso.empty());

  // Labels do not matter; only the order type does.
  WellOrderCollapse relabeled =
      collapse_wellorder(Digraph::of({{5, 9}, {5, 7}, {9, 7}}));
  CHECK(relabeled.n == 3);
  CHECK(relabeled.iso == NodeMap{{5, 0}, {9, 1}, {7, 2}});

  auto rejects = [](std::initializer_list<Edge> edges,
                    const std::string& message) {
    try {
      collapse_wellorder(Digraph::of(edges));
      FAIL_CHECK("no error for: " << message);
    } catch (const error& e) {
      CHECK(e.code() == errc::not_linear_order);
      CHECK(std::string(e.what()) == message);
    }
  };
  rejects({{0, 0}}, "node 0 relates to itself");
  rejects({{0, 1}, {1, 0}},
          "nodes 0 and 1 are mutually related");
  rejects({{0, 1}, {2, 3}},
          "nodes 0 and 2 are incomparable");
  rejects({{0, 1}, {1, 2}, {2, 0}},
          "nodes 0 and 2 lie on a cycle");
  // Missing transitive edge: 0 -> 1 -> 2 without 0 -> 2.
  rejects({{0, 1}, {1, 2}},
          "nodes 0 and 2 are incomparable");
}

TEST_CASE("well-order collapse on random and product orders") {
  std::mt19937_64 rng(424242);
  for (int round = 0; round < 60; ++round) {
    std::size_t n = 2 + rng() % 7;
    std::set<Node> labels;
    while (labels.size() < n) labels.insert(rng() % 1000);
    std::vector<Node> order(labels.begin(), labels.end());
    std::shuffle(order.begin(), order.end(), rng);

    std::set<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        edges.insert({order[i], order[j]});
      }
    }
    WellOrderCollapse c = collapse_wellorder(Digraph(edges));
    CHECK(c.n == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(c.iso.at(order[i]) == i);
  }

  // The order type of a lexicographic product matches the ordinal product:
  // position (i, j) sits at rank j*a + i, the j-th block of length a.
  for (std::uint64_t a = 0; a <= 4; ++a) {
    for (std::uint64_t b = 0; b <= 4; ++b) {
      CHECK(nat_value(cnf_mul(ord_nat(a), ord_nat(b))) == a * b);
      if (a * b == 1) continue;  // One point, no edges: not a digraph.
      auto label = [&](std::uint64_t i, std::uint64_t j) {
        return Node(7 * (j * a + i) + 3);
      };
      std::set<Edge> edges;
      for (std::uint64_t j1 = 0; j1 < b; ++j1) {
        for (std::uint64_t i1 = 0; i1 < a; ++i1) {
          for (std::uint64_t j2 = 0; j2 < b; ++j2) {
            for (std::uint64_t i2 = 0; i2 < a; ++i2) {
              if (j1 < j2 || (j1 == j2 && i1 < i2)) {
                edges.insert({label(i1, j1), label(i2, j2)});
              }
            }
          }
        }
      }
      WellOrderCollapse c = collapse_wellorder(Digraph(edges));
      CHECK(c.n == a * b);
      for (std::uint64_t j = 0; j < b; ++j) {
        for (std::uint64_t i = 0; i < a; ++i) {
          CHECK(c.iso.at(label(i, j)) == j * a + i);
        }
      }
    }
  }
}

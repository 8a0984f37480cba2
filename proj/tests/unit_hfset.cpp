#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "wfe/hfset.hpp"

using namespace wfe;
using testutil::catches;

namespace {

Hf vn(std::uint64_t n) { return hf_von_neumann(n); }

}  // namespace

TEST_CASE("interning gives pointer identity") {
  CHECK(hf_empty()->children().empty());
  CHECK(hf_empty() == hf_make({}));
  CHECK(hf_make({hf_empty(), hf_empty()}) == hf_singleton(hf_empty()));
  Hf a = hf_make({hf_empty(), hf_singleton(hf_empty())});
  Hf b = hf_make({hf_singleton(hf_empty()), hf_empty()});
  CHECK(a == b);
  CHECK(a == vn(2));
  CHECK(a->size() == 2);
  CHECK(a->rank() == 2);
  CHECK(vn(4)->rank() == 4);
}

TEST_CASE("interning is safe under concurrent construction") {
  std::vector<std::vector<Hf>> got(4);
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t) {
    ts.emplace_back([&got, t] {
      for (int i = 0; i < 200; ++i) {
        got[t].push_back(hf_von_neumann(i % 7));
      }
    });
  }
  for (auto& th : ts) th.join();
  for (int t = 1; t < 4; ++t) CHECK(got[t] == got[0]);
}

TEST_CASE("set algebra helpers") {
  Hf e = hf_empty();
  Hf one = hf_singleton(e);
  CHECK(hf_insert(e, e) == one);
  CHECK(hf_insert(one, e) == one);
  CHECK(hf_union(one, hf_singleton(one)) == vn(2));
  CHECK(hf_member(e, one));
  CHECK_FALSE(hf_member(one, one));
  CHECK(hf_subset(e, one));
  CHECK(hf_subset(one, vn(2)));
  CHECK_FALSE(hf_subset(vn(2), one));
  CHECK(hf_doubleton(e, one) == vn(2));
  CHECK(hf_doubleton(e, e) == one);
  CHECK(hf_kuratowski(e, one) ==
        hf_make({hf_singleton(e), hf_doubleton(e, one)}));
  CHECK(hf_kuratowski(e, e) == hf_singleton(hf_singleton(e)));
}

TEST_CASE("ack_index fixed points") {
  CHECK(ack_index(hf_empty()) == 0);
  CHECK(ack_index(hf_singleton(hf_empty())) == 1);
  CHECK(ack_index(hf_singleton(hf_singleton(hf_empty()))) == 2);
  CHECK(ack_index(vn(2)) == 3);
  // N(3) = 2^N(0) + 2^N(1) + 2^N(2) = 1 + 2 + 8.
  CHECK(ack_index(vn(3)) == 11);
}

TEST_CASE("hf_cmp agrees with the Ackermann order") {
  std::vector<Hf> all = testutil::enumerate_hf(5);
  for (Hf a : all) {
    for (Hf b : all) {
      BigNat na = ack_index(a), nb = ack_index(b);
      int want = na < nb ? -1 : na == nb ? 0 : 1;
      CHECK(hf_cmp(a, b) == want);
    }
  }
  // Injectivity of the index over the sample.
  std::set<BigNat> seen;
  for (Hf a : all) CHECK(seen.insert(ack_index(a)).second);
}

TEST_CASE("print and parse round trip") {
  CHECK(hf_print(hf_empty()) == "{}");
  CHECK(hf_print(hf_singleton(hf_empty())) == "{{}}");
  CHECK(hf_print(vn(2)) == "{{},{{}}}");
  CHECK(hf_parse("{{},{{}}}") == vn(2));
  CHECK(hf_parse(" { { } , { { } } } ") == vn(2));
  CHECK(hf_parse("{{},{}}") == hf_singleton(hf_empty()));  // duplicates merge
  CHECK(hf_parse("{{{}},{}}") == vn(2));                   // order-insensitive
  for (Hf s : testutil::enumerate_hf(6)) CHECK(hf_parse(hf_print(s)) == s);
  CHECK(catches([] { hf_parse("{"); }) == errc::syntax_error);
  CHECK(catches([] { hf_parse("{}}"); }) == errc::syntax_error);
  CHECK(catches([] { hf_parse("x"); }) == errc::syntax_error);
  CHECK(catches([] { hf_parse(""); }) == errc::syntax_error);
}

TEST_CASE("transitive closure") {
  Hf e = hf_empty();
  Hf one = hf_singleton(e);
  CHECK(transitive_closure(hf_singleton(one)) == vn(2));
  CHECK(transitive_closure(e) == e);
  CHECK(transitive_closure(vn(3)) == vn(3));
  CHECK(hf_transitive(vn(3)));
  CHECK_FALSE(hf_transitive(hf_singleton(one)));
}

TEST_CASE("transitive closure is minimal over V_4") {
  // TC(s) is transitive, contains s's members, and sits inside every
  // transitive superset of them.
  std::vector<Hf> v4(v_level(4)->children().begin(),
                     v_level(4)->children().end());
  std::vector<Hf> transitive;
  for (std::uint64_t mask = 0; mask < (1u << v4.size()); ++mask) {
    std::vector<Hf> sub;
    for (std::size_t i = 0; i < v4.size(); ++i) {
      if (mask >> i & 1) sub.push_back(v4[i]);
    }
    Hf t = hf_make(sub);
    if (hf_transitive(t)) transitive.push_back(t);
  }
  for (Hf s : v4) {
    Hf tc = transitive_closure(s);
    CHECK(hf_transitive(tc));
    for (Hf m : s->children()) CHECK(hf_member(m, tc));
    for (Hf t : transitive) {
      if (hf_subset(s, t)) CHECK(hf_subset(tc, t));
    }
  }
}

TEST_CASE("bounded pair closure") {
  Hf e = hf_empty();
  Hf x = hf_singleton(e);
  CHECK(pair_closure_bounded(x, 1, 1) == vn(2));  // one step adds {{}}
  CHECK(pair_closure_bounded(x, 3, 0) == x);
  // Monotone in depth for X = V_2.
  Hf prev = v_level(2);
  for (std::uint64_t d = 0; d <= 2; ++d) {
    Hf cur = pair_closure_bounded(v_level(2), 2, d);
    CHECK(hf_subset(prev, cur));
    prev = cur;
  }
}

TEST_CASE("cumulative levels") {
  CHECK(v_level(0) == hf_empty());
  CHECK(v_level(1) == hf_singleton(hf_empty()));
  CHECK(v_level(2)->size() == 2);
  CHECK(v_level(2) == vn(2));
  CHECK(v_level(4)->size() == 16);
  CHECK(v_level(5)->size() == 65536);
  CHECK(catches([] { v_level(6); }) == errc::level_too_large);
}

TEST_CASE("collapse of small digraphs") {
  Hf e = hf_empty();
  SUBCASE("singleton") {
    CollapseResult r = collapse(Digraph::of({{0, 1}}));
    CHECK(r.value == hf_singleton(e));
    CHECK(r.xi.size() == 2);
    CHECK(r.xi.at(0) == e);
    CHECK(r.xi.at(1) == hf_singleton(e));
  }
  SUBCASE("numeral two") {
    CollapseResult r = collapse(encode_numeral(2));
    CHECK(r.value == vn(2));
    CHECK(r.xi.at(0) == e);
    CHECK(r.xi.at(2) == vn(1));
    CHECK(r.xi.at(4) == vn(2));
  }
  SUBCASE("empty digraph codes the empty set") {
    CollapseResult r = collapse(Digraph{});
    CHECK(r.value == e);
    CHECK(r.xi.empty());
  }
  SUBCASE("rejections carry a witness") {
    CHECK(catches([] { collapse(Digraph::of({{0, 0}})); }) == errc::not_wfev);
    CHECK(catches([] { collapse(Digraph::of({{0, 2}, {1, 2}})); }) ==
          errc::not_wfev);
    // Well-founded and extensional, but two maximal nodes.
    Digraph no_vertex = Digraph::of({{0, 1}, {0, 3}, {1, 2}, {1, 3}});
    CHECK(catches([&] { collapse(no_vertex); }) == errc::not_wfev);
    std::map<Node, Hf> xi = collapse_nodes(no_vertex);
    CHECK(xi.at(2) == hf_singleton(hf_singleton(e)));
    CHECK(xi.at(3) == vn(2));
  }
}

TEST_CASE("encode_set round trips") {
  CHECK(encode_set(hf_empty()) == Digraph{});
  CHECK(encode_set(hf_singleton(hf_empty())) == Digraph::of({{0, 1}}));
  CHECK(encode_set(vn(2)) == canonicalize(encode_numeral(2)));
  for (Hf s : v_level(4)->children()) {
    CHECK(collapse(encode_set(s)).value == s);
  }
  testutil::Rng rng(20260819);
  for (int i = 0; i < 60; ++i) {
    Digraph a = testutil::random_wfev(rng, 8);
    CHECK(isomorphic(encode_set(collapse(a).value), a));
  }
}

TEST_CASE("collapse is an isomorphism invariant") {
  std::vector<Hf> all = testutil::enumerate_hf(4);
  std::vector<Digraph> graphs;
  testutil::Rng rng(7);
  for (Hf s : all) {
    graphs.push_back(encode_set(s));
    graphs.push_back(testutil::random_relabel(rng, encode_set(s)));
  }
  for (const Digraph& a : graphs) {
    for (const Digraph& b : graphs) {
      CHECK(isomorphic(a, b) == (collapse(a).value == collapse(b).value));
    }
  }
}

TEST_CASE("membership transport across the encoding") {
  // B is a cone-member of A exactly when the realizations are members.
  auto hat_in = [](const Digraph& b, const Digraph& a) {
    for (Node k : eln(a)) {
      if (isomorphic(b, cone(a, k))) return true;
    }
    return false;
  };
  std::vector<Hf> v4(v_level(4)->children().begin(),
                     v_level(4)->children().end());
  for (Hf s : v4) {
    for (Hf t : v4) {
      CHECK(hat_in(encode_set(s), encode_set(t)) == hf_member(s, t));
    }
  }
  testutil::Rng rng(99);
  for (int i = 0; i < 40; ++i) {
    Digraph a = testutil::random_wfev(rng, 8);
    Digraph b = testutil::random_wfev(rng, 8);
    CHECK(hat_in(b, a) == hf_member(collapse(b).value, collapse(a).value));
  }
}

TEST_CASE("ack_index overflow guard") {
  // N(5) is a 2060-bit number, so N(6) = ... + 2^N(5) blows any fixed bit
  // budget; the guard must fire instead of attempting the shift.
  CHECK(catches([] { ack_index(hf_von_neumann(6)); }) == errc::too_large);
  // N(singleton(s)) = 2^N(s): a six-high tower is a 65537-bit number, a
  // seven-high tower is over the budget.
  Hf s = hf_empty();
  for (int i = 0; i < 6; ++i) s = hf_singleton(s);
  CHECK(ack_index(s) == BigNat(1) << 65536);
  CHECK(catches([&] { ack_index(hf_singleton(s)); }) == errc::too_large);
}

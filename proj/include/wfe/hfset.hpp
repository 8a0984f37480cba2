#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wfe/digraph.hpp"

namespace wfe {

using BigNat = boost::multiprecision::cpp_int;

// Immutable hereditarily finite set, hash-consed: equal sets share one node,
// so pointer equality is extensional equality.  Children are kept sorted
// ascending in the Ackermann order.  Finite sets of HF sets are themselves HF
// sets, so "set of sets" results are returned as plain Hf values.
class HfSet {
public:
  const std::vector<const HfSet*>& children() const { return children_; }
  std::size_t size() const { return children_.size(); }
  std::size_t rank() const { return rank_; }

private:
  explicit HfSet(std::vector<const HfSet*> children);
  std::vector<const HfSet*> children_;
  std::size_t rank_;
  friend const HfSet* hf_make(std::vector<const HfSet*> children);
};

using Hf = const HfSet*;

Hf hf_empty();
// Deduplicates and sorts; the intern table is mutex-guarded.
Hf hf_make(std::vector<Hf> children);
Hf hf_insert(Hf s, Hf e);
Hf hf_union(Hf a, Hf b);
bool hf_member(Hf e, Hf s);
bool hf_subset(Hf a, Hf b);

// Total order: s < t iff the largest element of the symmetric difference
// lies in t; identical to comparing Ackermann indexes.
int hf_cmp(Hf a, Hf b);
struct HfLess {
  bool operator()(Hf a, Hf b) const { return hf_cmp(a, b) < 0; }
};

Hf hf_singleton(Hf e);
Hf hf_doubleton(Hf a, Hf b);
Hf hf_kuratowski(Hf a, Hf b);  // {{a},{a,b}}
Hf hf_von_neumann(std::uint64_t n);

// N(s) = sum over e in s of 2^N(e); arbitrary precision, TOO_LARGE when the
// result would exceed a fixed bit budget.
BigNat ack_index(Hf s);

// Brace syntax "{{},{{}}}" with children printed ascending in the Ackermann
// order; parse is whitespace-insensitive and deduplicates.
std::string hf_print(Hf s);
Hf hf_parse(const std::string& text);

// Members of members, recursively: the least transitive superset of s's
// members, returned as a set.
Hf transitive_closure(Hf s);
bool hf_transitive(Hf s);

// Iterates depth times: adds every subset (the empty one included) of the
// current set with at most subset_size_limit elements.
Hf pair_closure_bounded(Hf x, std::uint64_t subset_size_limit,
                        std::uint64_t depth);

// V_0 = {}, V_{n+1} = powerset(V_n); n <= 5.
Hf v_level(std::uint64_t n);

struct CollapseResult {
  Hf value = nullptr;          // the set the whole digraph realizes
  std::map<Node, Hf> xi;       // per-node cone realizations
};

// Bottom-up realization of a WFEV digraph (empty allowed, yields {}).
// Throws NOT_WFEV with a witness (a cycle or an extension collision).
CollapseResult collapse(const Digraph& a);

// Per-node cone realizations of a WFE digraph (no vertex required).
std::map<Node, Hf> collapse_nodes(const Digraph& a);

// Canonical digraph realizing s: nodes are TC({s}) numbered ascending by
// Ackermann index, edges are memberships.  encode_set(collapse(A).value) is
// canonicalize(A).
Digraph encode_set(Hf s);

}  // namespace wfe

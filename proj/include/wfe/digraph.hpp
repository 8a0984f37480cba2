#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wfe {

using Node = std::uint64_t;
using Edge = std::pair<Node, Node>;
using NodeSet = std::set<Node>;
using NodeMap = std::map<Node, Node>;

// Finite digraph on natural-number nodes, held as a sorted edge set.
// The node set is derived: a node exists iff it occurs in some edge, so the
// empty digraph has an empty field.
class Digraph {
public:
  Digraph() = default;
  explicit Digraph(std::set<Edge> edges) : edges_(std::move(edges)) {}
  static Digraph of(std::initializer_list<Edge> edges) {
    return Digraph(std::set<Edge>(edges));
  }

  const std::set<Edge>& edges() const { return edges_; }
  bool empty() const { return edges_.empty(); }
  bool has_edge(Node j, Node k) const { return edges_.count({j, k}) != 0; }

  bool operator==(const Digraph&) const = default;
  bool operator<(const Digraph& o) const { return edges_ < o.edges_; }

  NodeSet field() const;
  bool in_field(Node u) const;
  // In-neighbours of u: the elements of u under the set reading.
  NodeSet extension(Node u) const;
  // u together with everything that reaches u.
  NodeSet lower_cone(Node u) const;
  // Edges with both endpoints in keep.
  Digraph restrict_to(const NodeSet& keep) const;

private:
  std::set<Edge> edges_;
};

struct DigraphClass {
  bool well_founded = false;
  bool extensional = false;
  // The empty digraph counts as having a vertex (none designated): it codes
  // the empty set.
  bool has_vertex = false;
  std::optional<Node> vertex;    // the node whose lower cone is the field
  std::optional<Node> min_node;  // unique empty-extension node; WFE nonempty only

  bool wfe() const { return well_founded && extensional; }
  bool wfev() const { return well_founded && extensional && has_vertex; }
};

// Total classification; never throws.
DigraphClass validate(const Digraph& a);

// Guards with witness-bearing messages (a cycle or an extension collision).
void require_wfe(const Digraph& a);
void require_wfev(const Digraph& a);

// Unique empty-extension node of a nonempty WFE digraph.
Node min_node(const Digraph& a);
// The node whose lower cone is the whole field (nonempty WFEV digraphs).
Node vertex(const Digraph& a);
// extension(vertex); empty digraph yields {} by convention.
NodeSet eln(const Digraph& a);

// Sub-digraph on the lower cone of c: the set the node c names.  Empty
// exactly when c has empty extension.
Digraph cone(const Digraph& a, Node c);

// Keeps exactly the members x at the top: union of their cones plus x->vertex
// edges.  Same vertex, eln(result) = x, member cones untouched.
Digraph multi_restrict(const Digraph& a, const NodeSet& x);

// u -> v exactly when cone(a,u) and cone(b,v) are isomorphic.  A partial
// injection whose domain and range are closed downwards (rigidity: within one
// WFE digraph distinct nodes have non-isomorphic cones).
NodeMap hom_map(const Digraph& a, const Digraph& b);

bool isomorphic(const Digraph& a, const Digraph& b);
// Witness bijection when isomorphic, nullopt otherwise.
std::optional<NodeMap> isomorphism(const Digraph& a, const Digraph& b);

// Deterministic representative of the isomorphism class: nodes renumbered
// 0..n-1 in ascending Ackermann-index order of the sets they name, so edges
// always point from lower to higher number.
Digraph canonicalize(const Digraph& a);

// Edge-wise image under an injective relabeling; f must cover the field.
Digraph bij_image(const Digraph& a, const NodeMap& f);

struct PairResult {
  Digraph p;
  Node a = 0;        // cone(p, a) realizes the first operand
  Node b = 0;        // cone(p, b) realizes the second operand
  NodeMap a_embed;   // how the first operand's field sits inside p
  NodeMap b_embed;   // likewise for the second operand
};

// Unordered pair: eln(p) = {a, b} and p realizes {|A|, |B|}.
PairResult pair(const Digraph& a, const Digraph& b);

// n-th slice under the pairing <n,j> = 2^n(2j+1)-1: edges (j,k) with
// (<n,j>, <n,k>) present.
Digraph slice(const Digraph& a, std::uint64_t n);

// <n,j> = 2^n(2j+1)-1 and its inverse.
std::uint64_t pack_pair(std::uint64_t n, std::uint64_t j);
std::pair<std::uint64_t, std::uint64_t> unpack_pair(std::uint64_t m);

// Chained pairing: realizes {|A_0|, ..., |A_k|}.  The empty list gives the
// empty digraph by convention.
Digraph assemble(const std::vector<Digraph>& as);

// Function digraph: realizes {<|x|,|f(x)|> : x in eln(a)} as Kuratowski
// pairs.  f must map eln(a) onto eln(b).
Digraph func_digraph(const Digraph& a, const Digraph& b, const NodeMap& f);

// Bounded pair closure.  Iteration 0 adds only the non-vertex-to-vertex
// edges; each further iteration adds, for every nonempty subset S of the
// current non-vertex nodes with |S| <= subset_size_limit lacking a non-vertex
// node with extension exactly S, a fresh node with that extension.
Digraph pair_close_bounded(const Digraph& a, std::uint64_t subset_size_limit,
                           std::uint64_t depth);

// Von Neumann numeral digraph on even nodes: {(2j,2k) : j<k<=n}.
Digraph encode_numeral(std::uint64_t n);

// Digraph realizing {von Neumann k : k in x}: numeral skeleton on even nodes
// with node 1 on top collecting the members of x; empty x gives the empty
// digraph.
Digraph encode_natset(const std::set<std::uint64_t>& x);

// The unique node whose extension is exactly s, if present.
std::optional<Node> designator(const Digraph& a, const NodeSet& s);
// Designator of the Kuratowski pair {{j},{j,k}}, built from designators of
// the parts; absent as soon as any stage is.
std::optional<Node> kuratowski(const Digraph& a, Node j, Node k);

// Text formats: lines "j k" with '#' comments and blank lines ignored, or
// JSON {"edges":[[j,k],...]}.  parse accepts both; print emits the canonical
// line format (edges sorted lexicographically).
Digraph digraph_parse(const std::string& text);
std::string digraph_print(const Digraph& a);

}  // namespace wfe

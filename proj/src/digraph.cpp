#include "wfe/digraph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "wfe/error.hpp"
#include "wfe/hfset.hpp"

namespace wfe {

namespace {

Node fresh_node(const NodeSet& used) {
  Node k = 0;
  while (used.count(k)) ++k;
  return k;
}

std::string node_list(const std::vector<Node>& nodes, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(nodes[i]);
  }
  return out;
}

// Some directed cycle, as a node sequence ending where it starts; empty when
// acyclic.
std::vector<Node> find_cycle(const Digraph& a) {
  std::map<Node, std::vector<Node>> out;
  for (const Edge& e : a.edges()) out[e.first].push_back(e.second);
  std::map<Node, int> color;  // 0 new, 1 on stack, 2 done
  std::vector<Node> stack;
  std::vector<Node> cycle;
  std::function<bool(Node)> dfs = [&](Node u) {
    color[u] = 1;
    stack.push_back(u);
    for (Node w : out[u]) {
      if (color[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        cycle.push_back(w);
        return true;
      }
      if (color[w] == 0 && dfs(w)) return true;
    }
    stack.pop_back();
    color[u] = 2;
    return false;
  };
  for (Node u : a.field()) {
    if (color[u] == 0 && dfs(u)) return cycle;
  }
  return {};
}

// Two nodes sharing an extension, if any.
std::optional<std::pair<Node, Node>> find_collision(const Digraph& a) {
  std::map<NodeSet, Node> seen;
  for (Node u : a.field()) {
    auto [it, inserted] = seen.emplace(a.extension(u), u);
    if (!inserted) return std::make_pair(it->second, u);
  }
  return std::nullopt;
}

[[noreturn]] void fail_class(const Digraph& a, errc code) {
  std::vector<Node> cycle = find_cycle(a);
  if (!cycle.empty()) {
    fail(code, "not well-founded: cycle " + node_list(cycle, " -> "));
  }
  if (auto col = find_collision(a)) {
    fail(code, "not extensional: nodes " + std::to_string(col->first) + " and " +
                   std::to_string(col->second) + " share an extension");
  }
  fail(code, "no node's lower cone covers the whole field");
}

}  // namespace

NodeSet Digraph::field() const {
  NodeSet f;
  for (const Edge& e : edges_) {
    f.insert(e.first);
    f.insert(e.second);
  }
  return f;
}

bool Digraph::in_field(Node u) const {
  for (const Edge& e : edges_) {
    if (e.first == u || e.second == u) return true;
  }
  return false;
}

NodeSet Digraph::extension(Node u) const {
  NodeSet ext;
  for (const Edge& e : edges_) {
    if (e.second == u) ext.insert(e.first);
  }
  return ext;
}

NodeSet Digraph::lower_cone(Node u) const {
  std::map<Node, std::vector<Node>> in;
  for (const Edge& e : edges_) in[e.second].push_back(e.first);
  NodeSet cone{u};
  std::vector<Node> work{u};
  while (!work.empty()) {
    Node t = work.back();
    work.pop_back();
    for (Node j : in[t]) {
      if (cone.insert(j).second) work.push_back(j);
    }
  }
  return cone;
}

Digraph Digraph::restrict_to(const NodeSet& keep) const {
  std::set<Edge> es;
  for (const Edge& e : edges_) {
    if (keep.count(e.first) && keep.count(e.second)) es.insert(e);
  }
  return Digraph(std::move(es));
}

DigraphClass validate(const Digraph& a) {
  DigraphClass c;
  NodeSet field = a.field();
  if (field.empty()) {
    c.well_founded = true;
    c.extensional = true;
    c.has_vertex = true;  // codes the empty set
    return c;
  }

  // Well-founded: no directed cycle (children-first elimination succeeds).
  std::map<Node, std::size_t> deg;
  std::map<Node, std::vector<Node>> out;
  for (Node u : field) deg[u] = 0;
  for (const Edge& e : a.edges()) {
    ++deg[e.second];
    out[e.first].push_back(e.second);
  }
  std::vector<Node> queue;
  for (const auto& [u, d] : deg) {
    if (d == 0) queue.push_back(u);
  }
  std::size_t processed = 0;
  while (!queue.empty()) {
    Node u = queue.back();
    queue.pop_back();
    ++processed;
    for (Node w : out[u]) {
      if (--deg[w] == 0) queue.push_back(w);
    }
  }
  c.well_founded = processed == field.size();

  c.extensional = !find_collision(a).has_value();

  std::vector<Node> full_cone;
  for (Node u : field) {
    if (a.lower_cone(u).size() == field.size()) full_cone.push_back(u);
  }
  c.has_vertex = full_cone.size() == 1;
  if (c.has_vertex) c.vertex = full_cone.front();

  if (c.wfe()) {
    for (Node u : field) {
      if (a.extension(u).empty()) {
        c.min_node = u;  // unique: extensions are pairwise distinct
        break;
      }
    }
  }
  return c;
}

void require_wfe(const Digraph& a) {
  DigraphClass c = validate(a);
  if (!c.wfe()) fail_class(a, errc::not_wfe);
}

void require_wfev(const Digraph& a) {
  DigraphClass c = validate(a);
  if (!c.wfev()) fail_class(a, errc::not_wfev);
}

Node min_node(const Digraph& a) {
  DigraphClass c = validate(a);
  if (!c.min_node) fail(errc::not_wfe, "no minimum: digraph is empty or not WFE");
  return *c.min_node;
}

Node vertex(const Digraph& a) {
  DigraphClass c = validate(a);
  if (!c.vertex) fail(errc::not_wfev, "no vertex node");
  return *c.vertex;
}

NodeSet eln(const Digraph& a) {
  if (a.empty()) return {};
  return a.extension(vertex(a));
}

Digraph cone(const Digraph& a, Node c) {
  require_wfe(a);
  if (!a.in_field(c)) {
    fail(errc::node_not_in_field, "node " + std::to_string(c) + " is not in the field");
  }
  return a.restrict_to(a.lower_cone(c));
}

Digraph multi_restrict(const Digraph& a, const NodeSet& x) {
  require_wfev(a);
  if (x.empty()) fail(errc::empty_selection, "selection must be nonempty");
  NodeSet field = a.field();
  for (Node u : x) {
    if (!field.count(u)) {
      fail(errc::node_not_in_field, "node " + std::to_string(u) + " is not in the field");
    }
  }
  Node v = vertex(a);
  if (x.count(v)) {
    fail(errc::vertex_in_selection, "vertex " + std::to_string(v) + " cannot be selected");
  }
  std::set<Edge> es;
  for (Node u : x) {
    Digraph cu = cone(a, u);
    es.insert(cu.edges().begin(), cu.edges().end());
    es.insert({u, v});
  }
  return Digraph(std::move(es));
}

NodeMap hom_map(const Digraph& a, const Digraph& b) {
  std::map<Node, Hf> xa = collapse_nodes(a);  // requires WFE
  std::map<Node, Hf> xb = collapse_nodes(b);
  std::map<Hf, Node> inv;
  for (const auto& [v, s] : xb) inv.emplace(s, v);  // injective by rigidity
  NodeMap h;
  for (const auto& [u, s] : xa) {
    auto it = inv.find(s);
    if (it != inv.end()) h.emplace(u, it->second);
  }
  return h;
}

std::optional<NodeMap> isomorphism(const Digraph& a, const Digraph& b) {
  require_wfev(a);
  require_wfev(b);
  if (a.empty() || b.empty()) {
    if (a.empty() && b.empty()) return NodeMap{};
    return std::nullopt;
  }
  std::map<Node, Hf> xa = collapse_nodes(a);
  std::map<Node, Hf> xb = collapse_nodes(b);
  if (xa.at(vertex(a)) != xb.at(vertex(b))) return std::nullopt;
  std::map<Hf, Node> inv;
  for (const auto& [v, s] : xb) inv.emplace(s, v);
  NodeMap w;
  for (const auto& [u, s] : xa) w.emplace(u, inv.at(s));
  return w;
}

bool isomorphic(const Digraph& a, const Digraph& b) {
  return isomorphism(a, b).has_value();
}

Digraph canonicalize(const Digraph& a) { return encode_set(collapse(a).value); }

Digraph bij_image(const Digraph& a, const NodeMap& f) {
  NodeSet field = a.field();
  std::map<Node, Node> used;
  for (Node u : field) {
    auto it = f.find(u);
    if (it == f.end()) {
      fail(errc::map_domain_too_small,
           "map has no image for node " + std::to_string(u));
    }
    auto [prev, inserted] = used.emplace(it->second, u);
    if (!inserted) {
      fail(errc::non_injective_map,
           "nodes " + std::to_string(prev->second) + " and " + std::to_string(u) +
               " both map to " + std::to_string(it->second));
    }
  }
  std::set<Edge> es;
  for (const Edge& e : a.edges()) es.insert({f.at(e.first), f.at(e.second)});
  return Digraph(std::move(es));
}

PairResult pair(const Digraph& a, const Digraph& b) {
  require_wfev(a);
  require_wfev(b);
  PairResult r;
  if (a.empty() && b.empty()) {
    r.p = Digraph::of({{0, 1}});
    r.a = 0;
    r.b = 0;
    return r;
  }
  if (b.empty()) {
    Node va = vertex(a), ma = min_node(a);
    Node p = fresh_node(a.field());
    std::set<Edge> es = a.edges();
    es.insert({va, p});
    es.insert({ma, p});
    r.p = Digraph(std::move(es));
    r.a = va;
    r.b = ma;  // empty cone realizes the empty second operand
    for (Node u : a.field()) r.a_embed.emplace(u, u);
    return r;
  }
  if (a.empty()) {
    Node vb = vertex(b), mb = min_node(b);
    Node p = fresh_node(b.field());
    std::set<Edge> es = b.edges();
    es.insert({vb, p});
    es.insert({mb, p});
    r.p = Digraph(std::move(es));
    r.a = mb;
    r.b = vb;
    for (Node u : b.field()) r.b_embed.emplace(u, u);
    return r;
  }

  // Both nonempty: relabel apart (evens / 4k+1), then merge the second
  // operand's nodes whose cones already occur in the first.
  NodeMap f, g;
  for (Node u : a.field()) f.emplace(u, 2 * u);
  for (Node u : b.field()) g.emplace(u, 4 * u + 1);
  Digraph a2 = bij_image(a, f);
  Digraph b2 = bij_image(b, g);
  NodeMap hmap = hom_map(b2, a2);
  auto h = [&](Node u) {
    auto it = hmap.find(u);
    return it == hmap.end() ? u : it->second;
  };
  std::set<Edge> es = a2.edges();
  for (const Edge& e : b2.edges()) es.insert({h(e.first), h(e.second)});
  Digraph q(es);
  Node c = fresh_node(q.field());
  Node an = 2 * vertex(a);
  Node bn = h(4 * vertex(b) + 1);
  es.insert({an, c});
  es.insert({bn, c});
  r.p = Digraph(std::move(es));
  r.a = an;
  r.b = bn;
  for (Node u : a.field()) r.a_embed.emplace(u, 2 * u);
  for (Node u : b.field()) r.b_embed.emplace(u, h(4 * u + 1));
  return r;
}

std::uint64_t pack_pair(std::uint64_t n, std::uint64_t j) {
  if (n >= 63 || j > ((std::uint64_t(1) << 62) - 1) >> n) {
    fail(errc::too_large, "packed pair exceeds 64 bits");
  }
  return ((2 * j + 1) << n) - 1;
}

std::pair<std::uint64_t, std::uint64_t> unpack_pair(std::uint64_t m) {
  // m+1 = 2^n(2j+1)
  std::uint64_t s = m + 1;
  std::uint64_t n = std::uint64_t(__builtin_ctzll(s));
  std::uint64_t odd = s >> n;
  return {n, (odd - 1) / 2};
}

Digraph slice(const Digraph& a, std::uint64_t n) {
  std::set<Edge> es;
  for (const Edge& e : a.edges()) {
    if (e.first == UINT64_MAX || e.second == UINT64_MAX) continue;
    auto [n1, j1] = unpack_pair(e.first);
    auto [n2, j2] = unpack_pair(e.second);
    if (n1 == n && n2 == n) es.insert({j1, j2});
  }
  return Digraph(std::move(es));
}

Digraph assemble(const std::vector<Digraph>& as) {
  if (as.empty()) return Digraph();  // documented convention
  PairResult pr = pair(as[0], as[0]);
  NodeSet w{pr.a};
  for (std::size_t i = 1; i < as.size(); ++i) {
    PairResult next = pair(pr.p, as[i]);
    NodeSet w2;
    for (Node u : w) w2.insert(next.a_embed.at(u));
    w2.insert(next.b);
    w = std::move(w2);
    pr = std::move(next);
  }
  return multi_restrict(pr.p, w);
}

namespace {

// Non-vertex node with extension exactly s, added fresh if absent.  The new
// node also points at the vertex, so the vertex keeps its status and all old
// non-vertex cones stay intact.
Node ensure_designator(Digraph& p, Node v, const NodeSet& s) {
  for (Node u : p.field()) {
    if (u != v && p.extension(u) == s) return u;
  }
  Node k = fresh_node(p.field());
  std::set<Edge> es = p.edges();
  for (Node j : s) es.insert({j, k});
  es.insert({k, v});
  p = Digraph(std::move(es));
  return k;
}

}  // namespace

Digraph func_digraph(const Digraph& a, const Digraph& b, const NodeMap& f) {
  require_wfev(a);
  require_wfev(b);
  NodeSet ea = eln(a), eb = eln(b);
  NodeSet keys, values;
  for (const auto& [k, val] : f) {
    keys.insert(k);
    values.insert(val);
  }
  if (keys != ea) {
    fail(errc::domain_mismatch, "map keys must be exactly the members of the first operand");
  }
  for (Node val : values) {
    if (!eb.count(val)) {
      fail(errc::domain_mismatch,
           "value " + std::to_string(val) + " is not a member of the second operand");
    }
  }
  if (values != eb) fail(errc::not_surjective, "map does not cover the second operand's members");
  if (a.empty()) return Digraph();  // the empty function

  PairResult pr = pair(a, b);
  Digraph p = pr.p;
  Node v = vertex(p);
  NodeSet w;
  for (Node x : ea) {
    Node xt = pr.a_embed.at(x);
    Node yt = pr.b_embed.at(f.at(x));
    Node s1 = ensure_designator(p, v, NodeSet{xt});
    Node s2 = xt == yt ? s1 : ensure_designator(p, v, NodeSet{xt, yt});
    Node gn = ensure_designator(p, v, s1 == s2 ? NodeSet{s1} : NodeSet{s1, s2});
    w.insert(gn);
  }
  return multi_restrict(p, w);
}

Digraph pair_close_bounded(const Digraph& a, std::uint64_t subset_size_limit,
                           std::uint64_t depth) {
  require_wfev(a);
  if (a.empty()) return a;
  Node v = vertex(a);
  std::set<Edge> es = a.edges();
  for (Node u : a.field()) {
    if (u != v) es.insert({u, v});
  }
  Digraph cur(es);
  for (std::uint64_t step = 0; step < depth; ++step) {
    NodeSet field = cur.field();
    std::vector<Node> pool;
    std::set<NodeSet> have;
    for (Node u : field) {
      if (u != v) {
        pool.push_back(u);
        have.insert(cur.extension(u));
      }
    }
    std::vector<NodeSet> to_add;
    NodeSet chosen;
    std::function<void(std::size_t)> choose = [&](std::size_t from) {
      if (!chosen.empty() && !have.count(chosen)) {
        have.insert(chosen);
        to_add.push_back(chosen);
      }
      if (chosen.size() == subset_size_limit) return;
      for (std::size_t i = from; i < pool.size(); ++i) {
        chosen.insert(pool[i]);
        choose(i + 1);
        chosen.erase(pool[i]);
      }
    };
    choose(0);
    if (to_add.empty()) break;  // saturated
    std::set<Edge> next = cur.edges();
    NodeSet used = field;
    for (const NodeSet& s : to_add) {
      Node k = fresh_node(used);
      used.insert(k);
      for (Node j : s) next.insert({j, k});
      next.insert({k, v});
    }
    cur = Digraph(std::move(next));
  }
  return cur;
}

Digraph encode_numeral(std::uint64_t n) {
  std::set<Edge> es;
  for (std::uint64_t k = 1; k <= n; ++k) {
    for (std::uint64_t j = 0; j < k; ++j) es.insert({2 * j, 2 * k});
  }
  return Digraph(std::move(es));
}

Digraph encode_natset(const std::set<std::uint64_t>& x) {
  if (x.empty()) return Digraph();
  std::uint64_t mx = *x.rbegin();
  std::set<Edge> es;
  for (std::uint64_t k = 1; k <= mx; ++k) {
    for (std::uint64_t j = 0; j < k; ++j) es.insert({2 * j, 2 * k});
  }
  for (std::uint64_t k : x) es.insert({2 * k, 1});
  return Digraph(std::move(es));
}

std::optional<Node> designator(const Digraph& a, const NodeSet& s) {
  require_wfe(a);
  NodeSet field = a.field();
  for (Node u : s) {
    if (!field.count(u)) {
      fail(errc::node_not_in_field, "node " + std::to_string(u) + " is not in the field");
    }
  }
  for (Node u : field) {
    if (a.extension(u) == s) return u;  // unique by extensionality
  }
  return std::nullopt;
}

std::optional<Node> kuratowski(const Digraph& a, Node j, Node k) {
  require_wfe(a);
  if (!a.in_field(j) || !a.in_field(k)) {
    fail(errc::node_not_in_field, "pair components must be field nodes");
  }
  std::optional<Node> s1 = designator(a, NodeSet{j});
  if (!s1) return std::nullopt;
  std::optional<Node> s2 = j == k ? s1 : designator(a, NodeSet{j, k});
  if (!s2) return std::nullopt;
  return designator(a, *s1 == *s2 ? NodeSet{*s1} : NodeSet{*s1, *s2});
}

namespace {

std::uint64_t parse_nat(const std::string& tok, const std::string& where) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    fail(errc::syntax_error, where + ": expected a natural number, got \"" + tok + "\"");
  }
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    fail(errc::syntax_error, where + ": number out of range: \"" + tok + "\"");
  }
}

Digraph parse_json_digraph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::syntax_error, std::string("digraph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("edges") || !j["edges"].is_array()) {
    fail(errc::syntax_error, "digraph JSON: expected an object with an \"edges\" array");
  }
  std::set<Edge> es;
  for (const auto& item : j["edges"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() ||
        !item[1].is_number_unsigned()) {
      fail(errc::syntax_error, "digraph JSON: each edge must be a pair of naturals");
    }
    es.insert({item[0].get<std::uint64_t>(), item[1].get<std::uint64_t>()});
  }
  return Digraph(std::move(es));
}

}  // namespace

Digraph digraph_parse(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n;");
  if (first != std::string::npos && text[first] == '{') return parse_json_digraph(text);
  std::string norm = text;
  std::replace(norm.begin(), norm.end(), ';', '\n');
  std::set<Edge> es;
  std::istringstream in(norm);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 2) {
      fail(errc::syntax_error,
           "digraph line " + std::to_string(lineno) + ": expected \"source target\"");
    }
    std::string where = "digraph line " + std::to_string(lineno);
    es.insert({parse_nat(toks[0], where), parse_nat(toks[1], where)});
  }
  return Digraph(std::move(es));
}

std::string digraph_print(const Digraph& a) {
  std::string out;
  for (const Edge& e : a.edges()) {
    out += std::to_string(e.first);
    out += ' ';
    out += std::to_string(e.second);
    out += '\n';
  }
  return out;
}

}  // namespace wfe

#include "wfe/hfset.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "wfe/error.hpp"

namespace wfe {

namespace {

struct ChildrenHash {
  std::size_t operator()(const std::vector<Hf>& v) const {
    std::size_t h = v.size();
    for (Hf c : v) {
      h ^= std::hash<const void*>()(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct Intern {
  std::mutex mutex;
  std::unordered_map<std::vector<Hf>, std::unique_ptr<HfSet>, ChildrenHash> table;
};

Intern& intern() {
  static Intern* i = new Intern();  // never destroyed: Hf pointers stay valid
  return *i;
}

// Caps ack_index and other materializations that can grow non-elementarily.
constexpr std::uint64_t kMaxIndexBits = 4u << 20;

}  // namespace

HfSet::HfSet(std::vector<Hf> children) : children_(std::move(children)) {
  rank_ = 0;
  for (Hf c : children_) rank_ = std::max(rank_, c->rank() + 1);
}

int hf_cmp(Hf a, Hf b) {
  if (a == b) return 0;
  const auto& ca = a->children();
  const auto& cb = b->children();
  std::size_t i = ca.size(), j = cb.size();
  // Binary comparison from the top bit: the largest differing element decides.
  while (i > 0 && j > 0) {
    if (ca[i - 1] == cb[j - 1]) {
      --i;
      --j;
      continue;
    }
    return hf_cmp(ca[i - 1], cb[j - 1]) < 0 ? -1 : 1;
  }
  if (i == j) return 0;
  return i < j ? -1 : 1;
}

Hf hf_make(std::vector<Hf> children) {
  std::sort(children.begin(), children.end(), HfLess());
  children.erase(std::unique(children.begin(), children.end()), children.end());
  Intern& in = intern();
  std::lock_guard<std::mutex> lock(in.mutex);
  auto it = in.table.find(children);
  if (it != in.table.end()) return it->second.get();
  auto node = std::unique_ptr<HfSet>(new HfSet(children));
  Hf raw = node.get();
  in.table.emplace(std::move(children), std::move(node));
  return raw;
}

Hf hf_empty() {
  static Hf e = hf_make({});
  return e;
}

bool hf_member(Hf e, Hf s) {
  const auto& c = s->children();
  return std::binary_search(c.begin(), c.end(), e, HfLess());
}

bool hf_subset(Hf a, Hf b) {
  for (Hf e : a->children()) {
    if (!hf_member(e, b)) return false;
  }
  return true;
}

Hf hf_insert(Hf s, Hf e) {
  if (hf_member(e, s)) return s;
  std::vector<Hf> c = s->children();
  c.push_back(e);
  return hf_make(std::move(c));
}

Hf hf_union(Hf a, Hf b) {
  std::vector<Hf> c = a->children();
  c.insert(c.end(), b->children().begin(), b->children().end());
  return hf_make(std::move(c));
}

Hf hf_singleton(Hf e) { return hf_make({e}); }

Hf hf_doubleton(Hf a, Hf b) { return hf_make({a, b}); }

Hf hf_kuratowski(Hf a, Hf b) {
  return hf_make({hf_singleton(a), hf_doubleton(a, b)});
}

Hf hf_von_neumann(std::uint64_t n) {
  std::vector<Hf> members;
  Hf cur = hf_empty();
  for (std::uint64_t k = 0; k < n; ++k) {
    members.push_back(cur);
    cur = hf_make(members);  // members so far = von Neumann k+1
  }
  return cur;
}

BigNat ack_index(Hf s) {
  // Memoized globally; values are immutable.
  static std::mutex mutex;
  static std::unordered_map<Hf, BigNat>* cache = new std::unordered_map<Hf, BigNat>();
  std::lock_guard<std::mutex> lock(mutex);
  std::function<const BigNat&(Hf)> go = [&](Hf t) -> const BigNat& {
    auto it = cache->find(t);
    if (it != cache->end()) return it->second;
    BigNat n = 0;
    for (Hf e : t->children()) {
      const BigNat& ne = go(e);
      if (ne > kMaxIndexBits) {
        fail(errc::too_large, "Ackermann index exceeds the bit budget");
      }
      n += BigNat(1) << static_cast<std::uint64_t>(ne);
    }
    return cache->emplace(t, std::move(n)).first->second;
  };
  return go(s);
}

std::string hf_print(Hf s) {
  std::string out;
  std::function<void(Hf)> go = [&](Hf t) {
    out += '{';
    bool first = true;
    for (Hf e : t->children()) {
      if (!first) out += ',';
      first = false;
      go(e);
    }
    out += '}';
  };
  go(s);
  return out;
}

namespace {

struct HfParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void err(const std::string& what) {
    fail(errc::syntax_error, "set literal: " + what + " at offset " + std::to_string(pos));
  }

  Hf parse_set() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '{') err("expected '{'");
    ++pos;
    std::vector<Hf> children;
    skip_ws();
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
      return hf_make(std::move(children));
    }
    while (true) {
      children.push_back(parse_set());
      skip_ws();
      if (pos >= text.size()) err("unterminated set");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == '}') {
        ++pos;
        return hf_make(std::move(children));
      }
      err("expected ',' or '}'");
    }
  }
};

}  // namespace

Hf hf_parse(const std::string& text) {
  HfParser p{text};
  Hf s = p.parse_set();
  p.skip_ws();
  if (p.pos != text.size()) p.err("trailing input");
  return s;
}

Hf transitive_closure(Hf s) {
  std::vector<Hf> out;
  std::vector<Hf> work(s->children().begin(), s->children().end());
  std::set<Hf, HfLess> seen;
  while (!work.empty()) {
    Hf t = work.back();
    work.pop_back();
    if (!seen.insert(t).second) continue;
    out.push_back(t);
    for (Hf e : t->children()) work.push_back(e);
  }
  return hf_make(std::move(out));
}

bool hf_transitive(Hf s) {
  for (Hf e : s->children()) {
    if (!hf_subset(e, s)) return false;
  }
  return true;
}

Hf pair_closure_bounded(Hf x, std::uint64_t subset_size_limit, std::uint64_t depth) {
  Hf cur = x;
  for (std::uint64_t step = 0; step < depth; ++step) {
    const std::vector<Hf> pool = cur->children();
    std::vector<Hf> added;
    // All subsets of the current set with at most subset_size_limit elements,
    // the empty subset included.
    std::vector<Hf> chosen;
    std::function<void(std::size_t)> choose = [&](std::size_t from) {
      added.push_back(hf_make(chosen));
      if (chosen.size() == subset_size_limit) return;
      for (std::size_t i = from; i < pool.size(); ++i) {
        chosen.push_back(pool[i]);
        choose(i + 1);
        chosen.pop_back();
      }
    };
    choose(0);
    std::vector<Hf> next = pool;
    next.insert(next.end(), added.begin(), added.end());
    Hf merged = hf_make(std::move(next));
    if (merged == cur) break;  // saturated
    cur = merged;
  }
  return cur;
}

Hf v_level(std::uint64_t n) {
  if (n > 5) {
    fail(errc::level_too_large, "level " + std::to_string(n) + " exceeds the supported maximum 5");
  }
  Hf cur = hf_empty();
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::vector<Hf>& members = cur->children();
    std::vector<Hf> subsets;
    subsets.reserve(std::size_t(1) << members.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << members.size()); ++mask) {
      std::vector<Hf> sub;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (mask & (std::uint64_t(1) << i)) sub.push_back(members[i]);
      }
      subsets.push_back(hf_make(std::move(sub)));
    }
    cur = hf_make(std::move(subsets));
  }
  return cur;
}

std::map<Node, Hf> collapse_nodes(const Digraph& a) {
  require_wfe(a);
  std::map<Node, NodeSet> ext;
  for (Node u : a.field()) ext.emplace(u, NodeSet{});
  for (const Edge& e : a.edges()) ext[e.second].insert(e.first);
  std::map<Node, Hf> xi;
  // Children-first order exists because the digraph is well-founded.
  std::vector<Node> pending;
  for (const auto& [u, _] : ext) pending.push_back(u);
  while (!pending.empty()) {
    std::vector<Node> still;
    for (Node u : pending) {
      bool ready = true;
      std::vector<Hf> children;
      for (Node j : ext[u]) {
        auto it = xi.find(j);
        if (it == xi.end()) {
          ready = false;
          break;
        }
        children.push_back(it->second);
      }
      if (ready) {
        xi.emplace(u, hf_make(std::move(children)));
      } else {
        still.push_back(u);
      }
    }
    pending.swap(still);
  }
  return xi;
}

CollapseResult collapse(const Digraph& a) {
  require_wfev(a);
  CollapseResult r;
  r.xi = collapse_nodes(a);
  r.value = a.empty() ? hf_empty() : r.xi.at(vertex(a));
  return r;
}

Digraph encode_set(Hf s) {
  // Nodes: TC({s}) ascending by Ackermann index; s is always last because the
  // index is strictly monotone under membership.
  std::vector<Hf> nodes = transitive_closure(s)->children();
  nodes.push_back(s);
  std::map<Hf, Node> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], Node(i));
  std::set<Edge> edges;
  for (Hf t : nodes) {
    for (Hf e : t->children()) edges.insert({index.at(e), index.at(t)});
  }
  return Digraph(std::move(edges));
}

}  // namespace wfe

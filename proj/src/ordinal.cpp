#include "wfe/ordinal.hpp"

#include <algorithm>
#include <cctype>

#include "wfe/error.hpp"

namespace wfe {

bool operator==(const CnfOrdinal& a, const CnfOrdinal& b) {
  return a.terms == b.terms;
}

bool operator==(const CnfTerm& a, const CnfTerm& b) {
  return a.coeff == b.coeff && a.exp == b.exp;
}

CnfOrdinal ord_zero() { return CnfOrdinal{}; }

CnfOrdinal ord_nat(std::uint64_t n) {
  CnfOrdinal r;
  if (n > 0) r.terms.push_back(CnfTerm{ord_zero(), n});
  return r;
}

CnfOrdinal ord_omega() {
  CnfOrdinal r;
  r.terms.push_back(CnfTerm{ord_nat(1), 1});
  return r;
}

bool is_finite(const CnfOrdinal& a) {
  return a.terms.empty() || a.terms.front().exp.terms.empty();
}

std::optional<std::uint64_t> nat_value(const CnfOrdinal& a) {
  if (a.terms.empty()) return 0;
  if (!is_finite(a)) return std::nullopt;
  return a.terms.front().coeff;
}

int cnf_cmp(const CnfOrdinal& a, const CnfOrdinal& b) {
  const std::size_t n = std::min(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cnf_cmp(a.terms[i].exp, b.terms[i].exp);
    if (c != 0) return c;
    if (a.terms[i].coeff != b.terms[i].coeff) {
      return a.terms[i].coeff < b.terms[i].coeff ? -1 : 1;
    }
  }
  if (a.terms.size() != b.terms.size()) {
    return a.terms.size() < b.terms.size() ? -1 : 1;
  }
  return 0;
}

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    fail(errc::too_large, "ordinal coefficient exceeds the representable range");
  }
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    fail(errc::too_large, "ordinal coefficient exceeds the representable range");
  }
  return r;
}

constexpr std::size_t kMaxTerms = 200000;

void guard_terms(const CnfOrdinal& a) {
  if (a.terms.size() > kMaxTerms) {
    fail(errc::too_large, "ordinal exceeds the supported term count");
  }
}

}  // namespace

CnfOrdinal cnf_add(const CnfOrdinal& a, const CnfOrdinal& b) {
  if (b.terms.empty()) return a;
  const CnfOrdinal& lead = b.terms.front().exp;
  CnfOrdinal r;
  std::size_t i = 0;
  while (i < a.terms.size() && cnf_cmp(a.terms[i].exp, lead) > 0) {
    r.terms.push_back(a.terms[i]);
    ++i;
  }
  if (i < a.terms.size() && cnf_cmp(a.terms[i].exp, lead) == 0) {
    r.terms.push_back(
        CnfTerm{lead, checked_add(a.terms[i].coeff, b.terms.front().coeff)});
  } else {
    r.terms.push_back(b.terms.front());
  }
  r.terms.insert(r.terms.end(), b.terms.begin() + 1, b.terms.end());
  guard_terms(r);
  return r;
}

CnfOrdinal cnf_mul(const CnfOrdinal& a, const CnfOrdinal& b) {
  if (a.terms.empty() || b.terms.empty()) return ord_zero();
  CnfOrdinal r;
  for (const CnfTerm& t : b.terms) {
    CnfOrdinal part;
    if (t.exp.terms.empty()) {
      // Right-multiplying by a natural scales the leading coefficient only.
      part.terms.push_back(
          CnfTerm{a.terms.front().exp, checked_mul(a.terms.front().coeff, t.coeff)});
      part.terms.insert(part.terms.end(), a.terms.begin() + 1, a.terms.end());
    } else {
      part.terms.push_back(CnfTerm{cnf_add(a.terms.front().exp, t.exp), t.coeff});
    }
    r = cnf_add(r, part);
  }
  guard_terms(r);
  return r;
}

namespace {

CnfOrdinal pow_finite(const CnfOrdinal& a, std::uint64_t n) {
  CnfOrdinal result = ord_nat(1);
  CnfOrdinal base = a;
  while (n > 0) {
    if (n & 1) result = cnf_mul(result, base);
    if ((n >>= 1) == 0) break;
    base = cnf_mul(base, base);
  }
  return result;
}

// gamma - 1 when gamma is finite (and >= 1), gamma itself when infinite; the
// exponent shift behind k^(w^gamma) = w^(w^(gamma-1)) for finite k >= 2.
CnfOrdinal shift_down(const CnfOrdinal& gamma) {
  if (!is_finite(gamma)) return gamma;
  return ord_nat(*nat_value(gamma) - 1);
}

}  // namespace

CnfOrdinal cnf_pow(const CnfOrdinal& a, const CnfOrdinal& b) {
  if (b.terms.empty()) return ord_nat(1);
  if (a.terms.empty()) return ord_zero();
  if (a == ord_nat(1)) return ord_nat(1);
  if (is_finite(b)) return pow_finite(a, *nat_value(b));

  // Split b into its infinite part and finite tail.
  CnfOrdinal head = b;
  std::uint64_t tail = 0;
  if (head.terms.back().exp.terms.empty()) {
    tail = head.terms.back().coeff;
    head.terms.pop_back();
  }

  CnfOrdinal result;
  if (is_finite(a)) {
    // k^(w^gamma * c) = w^(w^(gamma ∸ 1) * c) for finite k >= 2.
    CnfOrdinal expo;
    for (const CnfTerm& t : head.terms) {
      expo.terms.push_back(CnfTerm{shift_down(t.exp), t.coeff});
    }
    result.terms.push_back(CnfTerm{expo, 1});
  } else {
    result.terms.push_back(CnfTerm{cnf_mul(a.terms.front().exp, head), 1});
  }
  if (tail > 0) result = cnf_mul(result, pow_finite(a, tail));
  guard_terms(result);
  return result;
}

CnfOrdinal cnf_arith(CnfOp op, const CnfOrdinal& a, const CnfOrdinal& b) {
  switch (op) {
    case CnfOp::add:
      return cnf_add(a, b);
    case CnfOp::mul:
      return cnf_mul(a, b);
    case CnfOp::pow:
      return cnf_pow(a, b);
  }
  fail(errc::syntax_error, "unknown ordinal operation");
}

namespace {

class OrdParser {
 public:
  explicit OrdParser(const std::string& text) : s_(text) {}

  CnfOrdinal run() {
    CnfOrdinal r = sum();
    skip_ws();
    if (pos_ != s_.size()) bad("trailing input");
    return r;
  }

 private:
  CnfOrdinal sum() {
    CnfOrdinal r = term();
    while (true) {
      skip_ws();
      if (!take('+')) break;
      r = cnf_add(r, term());
    }
    return r;
  }

  CnfOrdinal term() {
    skip_ws();
    if (take('w')) {
      CnfOrdinal e = ord_nat(1);
      std::uint64_t c = 1;
      skip_ws();
      if (take('^')) e = expo();
      skip_ws();
      if (take('*')) {
        skip_ws();
        c = nat();
      }
      if (c == 0 || e.terms.empty()) {
        // w^0*c collapses to the natural c; a zero coefficient kills the term.
        return cnf_mul(ord_nat(1), ord_nat(c));
      }
      CnfOrdinal r;
      r.terms.push_back(CnfTerm{e, c});
      return r;
    }
    return ord_nat(nat());
  }

  CnfOrdinal expo() {
    skip_ws();
    if (take('{')) {
      CnfOrdinal e = sum();
      skip_ws();
      if (!take('}')) bad("expected '}'");
      return e;
    }
    if (take('w')) return ord_omega();
    return ord_nat(nat());
  }

  std::uint64_t nat() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      bad("expected a number");
    }
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = checked_add(checked_mul(v, 10), s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  bool take(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void bad(const std::string& msg) {
    fail(errc::syntax_error, "ordinal: " + msg + " at offset " + std::to_string(pos_));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

CnfOrdinal ordinal_parse(const std::string& text) { return OrdParser(text).run(); }

std::string ordinal_print(const CnfOrdinal& a) {
  if (a.terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    const CnfTerm& t = a.terms[i];
    if (i > 0) out += " + ";
    if (t.exp.terms.empty()) {
      out += std::to_string(t.coeff);
      continue;
    }
    if (t.exp == ord_nat(1)) {
      out += "w";
    } else if (is_finite(t.exp)) {
      out += "w^" + std::to_string(*nat_value(t.exp));
    } else {
      out += "w^{" + ordinal_print(t.exp) + "}";
    }
    if (t.coeff != 1) out += "*" + std::to_string(t.coeff);
  }
  return out;
}

WellOrderCollapse collapse_wellorder(const Digraph& a) {
  for (const Edge& e : a.edges()) {
    if (e.first == e.second) {
      fail(errc::not_linear_order,
           "node " + std::to_string(e.first) + " relates to itself");
    }
  }
  NodeSet field = a.field();
  std::vector<Node> nodes(field.begin(), field.end());
  std::map<Node, std::size_t> indeg;
  for (Node u : nodes) indeg[u] = 0;
  for (const Edge& e : a.edges()) ++indeg[e.second];
  std::sort(nodes.begin(), nodes.end(), [&](Node u, Node v) {
    if (indeg[u] != indeg[v]) return indeg[u] < indeg[v];
    return u < v;
  });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      Node u = nodes[i], v = nodes[j];
      bool fwd = a.has_edge(u, v);
      bool bwd = a.has_edge(v, u);
      std::string pair = "nodes " + std::to_string(u) + " and " + std::to_string(v);
      if (fwd && bwd) fail(errc::not_linear_order, pair + " are mutually related");
      if (!fwd && !bwd) fail(errc::not_linear_order, pair + " are incomparable");
      // An edge against ascending in-degree forces a cycle in a tournament.
      if (bwd) fail(errc::not_linear_order, pair + " lie on a cycle");
    }
  }
  WellOrderCollapse out;
  out.n = nodes.size();
  for (std::size_t i = 0; i < nodes.size(); ++i) out.iso[nodes[i]] = i;
  return out;
}

}  // namespace wfe

#include "wfe/formula.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "wfe/error.hpp"

namespace wfe {

namespace {

Form make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

Term t_var(std::uint64_t index) { return Term{Term::Kind::var, index, nullptr}; }
Term t_param(std::uint64_t slot) { return Term{Term::Kind::param, slot, nullptr}; }
Term t_const(Hf value) { return Term{Term::Kind::constant, 0, value}; }

Form f_in(Term lhs, Term rhs) {
  Formula f;
  f.kind = Formula::Kind::in_atom;
  f.lhs = lhs;
  f.rhs = rhs;
  return make(std::move(f));
}

Form f_eq(Term lhs, Term rhs) {
  Formula f;
  f.kind = Formula::Kind::eq_atom;
  f.lhs = lhs;
  f.rhs = rhs;
  return make(std::move(f));
}

Form f_not(Form x) {
  Formula f;
  f.kind = Formula::Kind::neg;
  f.a = std::move(x);
  return make(std::move(f));
}

Form f_and(Form l, Form r) {
  Formula f;
  f.kind = Formula::Kind::conj;
  f.a = std::move(l);
  f.b = std::move(r);
  return make(std::move(f));
}

Form f_exists(std::uint64_t var, Form body) {
  Formula f;
  f.kind = Formula::Kind::exists;
  f.var = var;
  f.a = std::move(body);
  return make(std::move(f));
}

Form f_or(Form l, Form r) { return f_not(f_and(f_not(std::move(l)), f_not(std::move(r)))); }

Form f_implies(Form l, Form r) { return f_not(f_and(std::move(l), f_not(std::move(r)))); }

Form f_forall(std::uint64_t var, Form body) {
  return f_not(f_exists(var, f_not(std::move(body))));
}

namespace {

void walk_terms(const Form& f, const std::function<void(const Term&)>& fn,
                std::set<std::uint64_t>& bound, bool track_bound,
                std::set<std::uint64_t>* free_out) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom:
      for (const Term* t : {&f->lhs, &f->rhs}) {
        fn(*t);
        if (free_out && t->kind == Term::Kind::var && !bound.count(t->index)) {
          free_out->insert(t->index);
        }
      }
      return;
    case Formula::Kind::neg:
      walk_terms(f->a, fn, bound, track_bound, free_out);
      return;
    case Formula::Kind::conj:
      walk_terms(f->a, fn, bound, track_bound, free_out);
      walk_terms(f->b, fn, bound, track_bound, free_out);
      return;
    case Formula::Kind::exists: {
      bool fresh = track_bound && bound.insert(f->var).second;
      walk_terms(f->a, fn, bound, track_bound, free_out);
      if (fresh) bound.erase(f->var);
      return;
    }
  }
}

}  // namespace

std::set<std::uint64_t> free_vars(const Form& f) {
  std::set<std::uint64_t> bound, free;
  walk_terms(f, [](const Term&) {}, bound, true, &free);
  return free;
}

std::set<std::uint64_t> param_slots(const Form& f) {
  std::set<std::uint64_t> bound, slots;
  walk_terms(
      f,
      [&](const Term& t) {
        if (t.kind == Term::Kind::param) slots.insert(t.index);
      },
      bound, false, nullptr);
  return slots;
}

bool closed(const Form& f) { return free_vars(f).empty(); }

bool has_constants(const Form& f) {
  bool found = false;
  std::set<std::uint64_t> bound;
  walk_terms(
      f,
      [&](const Term& t) {
        if (t.kind == Term::Kind::constant) found = true;
      },
      bound, false, nullptr);
  return found;
}

std::optional<std::uint64_t> max_var_index(const Form& f) {
  std::optional<std::uint64_t> mx;
  std::function<void(const Form&)> go = [&](const Form& g) {
    auto see = [&](std::uint64_t i) { mx = mx ? std::max(*mx, i) : i; };
    switch (g->kind) {
      case Formula::Kind::in_atom:
      case Formula::Kind::eq_atom:
        for (const Term* t : {&g->lhs, &g->rhs}) {
          if (t->kind == Term::Kind::var) see(t->index);
        }
        return;
      case Formula::Kind::neg:
        go(g->a);
        return;
      case Formula::Kind::conj:
        go(g->a);
        go(g->b);
        return;
      case Formula::Kind::exists:
        see(g->var);
        go(g->a);
        return;
    }
  };
  go(f);
  return mx;
}

bool structural_equal(const Form& x, const Form& y) {
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom:
      return x->lhs == y->lhs && x->rhs == y->rhs;
    case Formula::Kind::neg:
      return structural_equal(x->a, y->a);
    case Formula::Kind::conj:
      return structural_equal(x->a, y->a) && structural_equal(x->b, y->b);
    case Formula::Kind::exists:
      return x->var == y->var && structural_equal(x->a, y->a);
  }
  return false;
}

std::size_t symbol_count(const Form& f) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom:
      return 2;
    case Formula::Kind::neg:
      return 1 + symbol_count(f->a);
    case Formula::Kind::conj:
      return 1 + symbol_count(f->a) + symbol_count(f->b);
    case Formula::Kind::exists:
      return 2 + symbol_count(f->a);  // quantifier plus its bound variable
  }
  return 0;
}

namespace {

struct Token {
  enum class Kind {
    lparen,
    rparen,
    bang,
    amp,
    pipe,
    arrow,
    dot,
    kw_in,
    eq,
    kw_exists,
    kw_forall,
    var,
    param,
    end
  };
  Kind kind;
  std::uint64_t number = 0;  // var index or param slot
  std::size_t offset = 0;
};

[[noreturn]] void syntax_fail(const std::string& what, std::size_t offset) {
  fail(errc::syntax_error, "formula: " + what + " at offset " + std::to_string(offset));
}

std::uint64_t scan_number(const std::string& text, std::size_t& i) {
  std::size_t start = i;
  std::uint64_t n = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    std::uint64_t digit = std::uint64_t(text[i] - '0');
    if (n > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
      syntax_fail("number out of range", start);
    }
    n = n * 10 + digit;
    ++i;
  }
  return n;
}

// Bare lowercase names become variables with indices above every explicit
// v<n>, assigned in order of first occurrence.
std::vector<Token> lex(const std::string& text) {
  struct Raw {
    Token tok;
    std::string name;  // nonempty for name tokens awaiting an index
  };
  std::vector<Raw> raw;
  std::uint64_t max_explicit = 0;
  bool any_explicit = false;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t off = i;
    auto push = [&](Token::Kind k) {
      raw.push_back({Token{k, 0, off}, {}});
      ++i;
    };
    switch (c) {
      case '(': push(Token::Kind::lparen); continue;
      case ')': push(Token::Kind::rparen); continue;
      case '!': push(Token::Kind::bang); continue;
      case '&': push(Token::Kind::amp); continue;
      case '|': push(Token::Kind::pipe); continue;
      case '.': push(Token::Kind::dot); continue;
      case '=': push(Token::Kind::eq); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          raw.push_back({Token{Token::Kind::arrow, 0, off}, {}});
          i += 2;
          continue;
        }
        syntax_fail("expected \"->\"", off);
      case '#': {
        ++i;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
          syntax_fail("expected a slot number after '#'", off);
        }
        raw.push_back({Token{Token::Kind::param, scan_number(text, i), off}, {}});
        continue;
      }
      default:
        break;
    }
    if (c == 'v' && i + 1 < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
      std::uint64_t n = scan_number(text, i);
      raw.push_back({Token{Token::Kind::var, n, off}, {}});
      max_explicit = any_explicit ? std::max(max_explicit, n) : n;
      any_explicit = true;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
      }
      std::string word = text.substr(start, i - start);
      if (word == "E") {
        raw.push_back({Token{Token::Kind::kw_exists, 0, off}, {}});
      } else if (word == "A") {
        raw.push_back({Token{Token::Kind::kw_forall, 0, off}, {}});
      } else if (word == "in") {
        raw.push_back({Token{Token::Kind::kw_in, 0, off}, {}});
      } else if (std::islower(static_cast<unsigned char>(word[0])) || word[0] == '_') {
        raw.push_back({Token{Token::Kind::var, 0, off}, word});
      } else {
        syntax_fail("unknown word \"" + word + "\"", off);
      }
      continue;
    }
    syntax_fail(std::string("unexpected character '") + c + "'", off);
  }
  std::map<std::string, std::uint64_t> names;
  std::uint64_t next = any_explicit ? max_explicit + 1 : 0;
  std::vector<Token> out;
  out.reserve(raw.size() + 1);
  for (Raw& r : raw) {
    if (!r.name.empty()) {
      auto [it, inserted] = names.emplace(r.name, next);
      if (inserted) ++next;
      r.tok.number = it->second;
    }
    out.push_back(r.tok);
  }
  out.push_back(Token{Token::Kind::end, 0, text.size()});
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Form parse() {
    Form f = formula();
    expect(Token::Kind::end, "unexpected trailing input");
    return f;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Token::Kind k, const std::string& what) {
    if (!accept(k)) syntax_fail(what, peek().offset);
  }

  Form formula() { return implies(); }

  Form implies() {
    Form l = disj();
    if (accept(Token::Kind::arrow)) return f_implies(std::move(l), implies());
    return l;
  }

  Form disj() {
    Form l = conj();
    while (accept(Token::Kind::pipe)) l = f_or(std::move(l), conj());
    return l;
  }

  Form conj() {
    Form l = unary();
    while (accept(Token::Kind::amp)) l = f_and(std::move(l), unary());
    return l;
  }

  Form unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::bang:
        take();
        return f_not(unary());
      case Token::Kind::kw_exists:
      case Token::Kind::kw_forall: {
        bool exists = t.kind == Token::Kind::kw_exists;
        take();
        if (peek().kind != Token::Kind::var) {
          syntax_fail("expected a variable after the quantifier", peek().offset);
        }
        std::uint64_t var = take().number;
        expect(Token::Kind::dot, "expected '.' after the quantified variable");
        Form body = formula();
        return exists ? f_exists(var, std::move(body)) : f_forall(var, std::move(body));
      }
      case Token::Kind::lparen: {
        take();
        Form f = formula();
        expect(Token::Kind::rparen, "expected ')'");
        return f;
      }
      default:
        return atom();
    }
  }

  Form atom() {
    Term l = term();
    if (accept(Token::Kind::kw_in)) return f_in(l, term());
    if (accept(Token::Kind::eq)) return f_eq(l, term());
    syntax_fail("expected \"in\" or \"=\"", peek().offset);
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Token::Kind::var) return t_var(take().number);
    if (t.kind == Token::Kind::param) return t_param(take().number);
    syntax_fail("expected a term", t.offset);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string term_print(const Term& t) {
  switch (t.kind) {
    case Term::Kind::var:
      return "v" + std::to_string(t.index);
    case Term::Kind::param:
      return "#" + std::to_string(t.index);
    case Term::Kind::constant:
      return hf_print(t.value);
  }
  return {};
}

}  // namespace

Form formula_parse(const std::string& text) { return Parser(lex(text)).parse(); }

std::string formula_print(const Form& f) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
      return term_print(f->lhs) + " in " + term_print(f->rhs);
    case Formula::Kind::eq_atom:
      return term_print(f->lhs) + " = " + term_print(f->rhs);
    case Formula::Kind::neg:
      return "!(" + formula_print(f->a) + ")";
    case Formula::Kind::conj: {
      // A quantifier body extends maximally, so a left-conjunct exists needs
      // its own parentheses to survive reparsing.
      std::string l = formula_print(f->a);
      if (f->a->kind == Formula::Kind::exists) l = "(" + l + ")";
      return "(" + l + " & " + formula_print(f->b) + ")";
    }
    case Formula::Kind::exists:
      return "E v" + std::to_string(f->var) + ". " + formula_print(f->a);
  }
  return {};
}

std::vector<Form> subformulas(const Form& f) {
  std::vector<Form> out;
  std::set<std::string> seen;
  std::function<void(const Form&)> go = [&](const Form& g) {
    switch (g->kind) {
      case Formula::Kind::in_atom:
      case Formula::Kind::eq_atom:
        break;
      case Formula::Kind::neg:
      case Formula::Kind::exists:
        go(g->a);
        break;
      case Formula::Kind::conj:
        go(g->a);
        go(g->b);
        break;
    }
    if (seen.insert(formula_print(g)).second) out.push_back(g);
  };
  go(f);
  return out;
}

namespace {

Form map_terms(const Form& f, const std::function<Term(const Term&)>& fn) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
      return f_in(fn(f->lhs), fn(f->rhs));
    case Formula::Kind::eq_atom:
      return f_eq(fn(f->lhs), fn(f->rhs));
    case Formula::Kind::neg:
      return f_not(map_terms(f->a, fn));
    case Formula::Kind::conj:
      return f_and(map_terms(f->a, fn), map_terms(f->b, fn));
    case Formula::Kind::exists:
      return f_exists(f->var, map_terms(f->a, fn));
  }
  return f;
}

}  // namespace

Form substitute_params(const Form& f, const Valuation& val) {
  return map_terms(f, [&](const Term& t) {
    if (t.kind != Term::Kind::param) return t;
    if (t.index >= val.params.size()) {
      fail(errc::unbound_parameter,
           "parameter #" + std::to_string(t.index) + " has no value");
    }
    return t_const(val.params[t.index]);
  });
}

Form substitute_slot(const Form& f, std::uint64_t slot, const Term& t) {
  return map_terms(f, [&](const Term& u) {
    return u.kind == Term::Kind::param && u.index == slot ? t : u;
  });
}

Form substitute_free_var(const Form& f, std::uint64_t var, const Term& t) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom: {
      auto sub = [&](const Term& u) {
        return u.kind == Term::Kind::var && u.index == var ? t : u;
      };
      return f->kind == Formula::Kind::in_atom ? f_in(sub(f->lhs), sub(f->rhs))
                                               : f_eq(sub(f->lhs), sub(f->rhs));
    }
    case Formula::Kind::neg:
      return f_not(substitute_free_var(f->a, var, t));
    case Formula::Kind::conj:
      return f_and(substitute_free_var(f->a, var, t),
                   substitute_free_var(f->b, var, t));
    case Formula::Kind::exists:
      if (f->var == var) return f;  // occurrences below are bound
      return f_exists(f->var, substitute_free_var(f->a, var, t));
  }
  return f;
}

Form relativize(const Form& f, std::uint64_t slot) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom:
      return f;
    case Formula::Kind::neg:
      return f_not(relativize(f->a, slot));
    case Formula::Kind::conj:
      return f_and(relativize(f->a, slot), relativize(f->b, slot));
    case Formula::Kind::exists:
      return f_exists(f->var, f_and(f_in(t_var(f->var), t_param(slot)),
                                    relativize(f->a, slot)));
  }
  return f;
}

namespace {

constexpr std::uint64_t kMaxCodeBits = 4u << 20;

// <a,b> = 2^a(2b+1)-1 over arbitrary precision, with a growth guard.
BigNat pair_code(const BigNat& a, const BigNat& b) {
  if (a > kMaxCodeBits) fail(errc::too_large, "code exceeds the bit budget");
  std::uint64_t shift = a.convert_to<std::uint64_t>();
  BigNat odd = 2 * b + 1;
  std::uint64_t bits = boost::multiprecision::msb(odd) + 1;
  if (bits + shift > kMaxCodeBits) fail(errc::too_large, "code exceeds the bit budget");
  return (odd << shift) - 1;
}

std::pair<BigNat, BigNat> unpair_code(const BigNat& m) {
  BigNat s = m + 1;
  std::uint64_t a = boost::multiprecision::lsb(s);
  BigNat b = ((s >> a) - 1) / 2;
  return {BigNat(a), b};
}

BigNat list2(const BigNat& a, const BigNat& b) { return pair_code(2, pair_code(a, b)); }

BigNat list3(const BigNat& a, const BigNat& b, const BigNat& c) {
  return pair_code(3, pair_code(a, pair_code(b, c)));
}

std::uint64_t atom_index(const Term& t) {
  if (t.kind != Term::Kind::var) {
    fail(errc::has_parameters, "only parameter-free formulas have codes");
  }
  return t.index;
}

std::optional<std::uint64_t> to_u64(const BigNat& n) {
  if (n > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return n.convert_to<std::uint64_t>();
}

}  // namespace

BigNat godelize(const Form& f) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
      return list3(0, atom_index(f->lhs), atom_index(f->rhs));
    case Formula::Kind::eq_atom:
      return list3(1, atom_index(f->lhs), atom_index(f->rhs));
    case Formula::Kind::neg:
      return list2(2, godelize(f->a));
    case Formula::Kind::conj:
      return list3(3, godelize(f->a), godelize(f->b));
    case Formula::Kind::exists:
      return list3(4, f->var, godelize(f->a));
  }
  fail(errc::too_large, "unreachable");
}

std::optional<Form> degodelize(const BigNat& g) {
  if (g < 0) return std::nullopt;
  auto [len, payload] = unpair_code(g);
  if (len == 2) {
    auto [tag, x] = unpair_code(payload);
    if (tag != 2) return std::nullopt;
    std::optional<Form> body = degodelize(x);
    if (!body) return std::nullopt;
    return f_not(*body);
  }
  if (len != 3) return std::nullopt;
  auto [tag, rest] = unpair_code(payload);
  auto [x, y] = unpair_code(rest);
  if (tag == 0 || tag == 1) {
    auto i = to_u64(x), j = to_u64(y);
    if (!i || !j) return std::nullopt;
    return tag == 0 ? f_in(t_var(*i), t_var(*j)) : f_eq(t_var(*i), t_var(*j));
  }
  if (tag == 3) {
    std::optional<Form> l = degodelize(x), r = degodelize(y);
    if (!l || !r) return std::nullopt;
    return f_and(*l, *r);
  }
  if (tag == 4) {
    auto v = to_u64(x);
    std::optional<Form> body = degodelize(y);
    if (!v || !body) return std::nullopt;
    return f_exists(*v, *body);
  }
  return std::nullopt;
}

DigraphFormula translate_interp(const Form& f) {
  bool impure = has_constants(f) || !param_slots(f).empty();
  if (impure) {
    fail(errc::has_parameters,
         "the digraph reading is defined for parameter-free formulas");
  }
  return DigraphFormula{f};
}

namespace {

std::string dterm(const Term& t) { return "D" + std::to_string(t.index); }

}  // namespace

std::string dformula_print(const DigraphFormula& df) {
  std::function<std::string(const Form&)> go = [&](const Form& f) -> std::string {
    switch (f->kind) {
      case Formula::Kind::in_atom:
        return "(E k in Eln(" + dterm(f->rhs) + "). " + dterm(f->lhs) + " ~ cone(" +
               dterm(f->rhs) + ", k))";
      case Formula::Kind::eq_atom:
        return dterm(f->lhs) + " ~ " + dterm(f->rhs);
      case Formula::Kind::neg:
        return "!(" + go(f->a) + ")";
      case Formula::Kind::conj:
        return "(" + go(f->a) + " & " + go(f->b) + ")";
      case Formula::Kind::exists:
        return "E D" + std::to_string(f->var) + " : wfev. " + go(f->a);
    }
    return {};
  };
  return go(df.core);
}

namespace {

Form f_iff(Form l, Form r) {
  return f_and(f_not(f_and(l, f_not(r))), f_not(f_and(r, f_not(l))));
}

}  // namespace

Form eliminate_params(const Form& phi, const Form& psi, std::uint64_t level_slot) {
  std::set<std::uint64_t> slots = param_slots(phi);
  if (slots.empty()) return phi;
  if (slots.size() > 1) {
    fail(errc::arity_mismatch, "formula has more than one parameter slot");
  }
  std::uint64_t s = *slots.begin();
  std::set<std::uint64_t> psi_free = free_vars(psi);
  if (psi_free.size() != 1) {
    fail(errc::arity_mismatch, "defining formula must have exactly one free variable");
  }
  std::optional<std::uint64_t> m1 = max_var_index(phi), m2 = max_var_index(psi);
  std::uint64_t p = 0;
  if (m1 || m2) {
    p = 1 + std::max(m1.value_or(0), m2.value_or(0));
  }
  std::uint64_t z = p + 1;
  Form psi_z = substitute_free_var(psi, *psi_free.begin(), t_var(z));
  Form member_def = f_and(f_in(t_var(z), t_param(level_slot)),
                          relativize(psi_z, level_slot));
  Form pins_p = f_forall(z, f_iff(f_in(t_var(z), t_var(p)), member_def));
  return f_exists(p, f_and(pins_p, substitute_slot(phi, s, t_var(p))));
}

}  // namespace wfe

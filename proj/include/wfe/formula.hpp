#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wfe/hfset.hpp"

namespace wfe {

// Term of the first-order membership language.  Variables and parameter
// slots are what the parser produces; constants appear when parameter slots
// are substituted with concrete sets.
struct Term {
  enum class Kind { var, param, constant };
  Kind kind = Kind::var;
  std::uint64_t index = 0;  // variable index or parameter slot
  Hf value = nullptr;       // constant payload (interned, so == is equality)

  bool operator==(const Term&) const = default;
};

Term t_var(std::uint64_t index);
Term t_param(std::uint64_t slot);
Term t_const(Hf value);

struct Formula;
using Form = std::shared_ptr<const Formula>;

// Core connectives only: atoms, negation, conjunction, exists.  Disjunction,
// implication and the universal quantifier are parser sugar.
struct Formula {
  enum class Kind { in_atom, eq_atom, neg, conj, exists };
  Kind kind = Kind::in_atom;
  Term lhs, rhs;          // atoms
  Form a, b;              // neg/exists use a; conj uses a and b
  std::uint64_t var = 0;  // exists binder
};

Form f_in(Term lhs, Term rhs);
Form f_eq(Term lhs, Term rhs);
Form f_not(Form f);
Form f_and(Form l, Form r);
Form f_exists(std::uint64_t var, Form body);
Form f_or(Form l, Form r);                      // !(!l & !r)
Form f_implies(Form l, Form r);                 // !(l & !r)
Form f_forall(std::uint64_t var, Form body);    // !E var. !body

std::set<std::uint64_t> free_vars(const Form& f);
std::set<std::uint64_t> param_slots(const Form& f);
bool closed(const Form& f);
bool has_constants(const Form& f);
// Largest variable index occurring anywhere (free or bound); 0 if none.
std::optional<std::uint64_t> max_var_index(const Form& f);
bool structural_equal(const Form& x, const Form& y);
// Connectives, quantifiers, and each variable/parameter/constant occurrence
// count 1; atoms cost 2, negation and conjunction add 1, a quantifier adds 2
// (the quantifier and its bound variable).
std::size_t symbol_count(const Form& f);

// Grammar: quantifiers "E v. ..." / "A v. ...", negation "!", binary "&",
// "|", "->" (parenthesized or chained; & binds tighter than |, "->" is
// right-associative and loosest), atoms "term in term" / "term = term",
// terms "v<n>", "#<n>", or bare lowercase names (assigned fresh indices above
// the explicit ones, in order of first occurrence).  Plain parentheses group.
Form formula_parse(const std::string& text);
// Core-syntax printer; parse(formula_print(f)) reproduces f for formulas
// without constants.
std::string formula_print(const Form& f);

// Every subformula including f itself, deduplicated, parents after children.
std::vector<Form> subformulas(const Form& f);

// Parameter values plus the structure they are drawn from.
struct Valuation {
  std::vector<Hf> params;  // slot i gets params[i]
  Hf structure = nullptr;
};

// Parameter slots become constants; every slot referenced must be covered.
Form substitute_params(const Form& f, const Valuation& val);
// Single slot to arbitrary term (no capture checks: t's variables must not
// be bound in f).
Form substitute_slot(const Form& f, std::uint64_t slot, const Term& t);
// Free occurrences of one variable to a term (same caveat).
Form substitute_free_var(const Form& f, std::uint64_t var, const Term& t);

// Every "E v. b" becomes "E v. (v in #slot & b)"; atoms untouched.
Form relativize(const Form& f, std::uint64_t slot);

// Injective coding over the pairing <a,b> = 2^a(2b+1)-1: atoms as lists
// [0,i,j] (in) / [1,i,j] (=), negation [2,g], conjunction [3,g1,g2], exists
// [4,i,g]; a list [x1..xn] codes as <n,<x1,<x2,...>>>.  Formulas must be
// parameter- and constant-free.  TOO_LARGE when a code would exceed the bit
// budget; degodelize of a non-code is empty.
BigNat godelize(const Form& f);
std::optional<Form> degodelize(const BigNat& g);

// The same formula read over digraphs: "=" as isomorphism, "in" as
// cone-membership, quantifiers over the class of vertex digraphs.
struct DigraphFormula {
  Form core;
};
DigraphFormula translate_interp(const Form& f);
std::string dformula_print(const DigraphFormula& df);

// For phi with exactly one parameter slot s and a defining formula psi (one
// free variable) for the slot's value over a level named by parameter
// level_slot: returns  E p. (A z. (z in p <-> (z in #level_slot &
// relativize(psi[z], level_slot)))) & phi[#s := p]  with p, z fresh.
// Parameter-free phi is returned unchanged.
Form eliminate_params(const Form& phi, const Form& psi,
                      std::uint64_t level_slot);

}  // namespace wfe

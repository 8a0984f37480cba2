#include "wfe/truth.hpp"

#include <algorithm>
#include <functional>

#include "wfe/error.hpp"

namespace wfe {

namespace {

Hf term_value(const Term& t, const std::map<std::uint64_t, Hf>& env,
              const Valuation* val) {
  switch (t.kind) {
    case Term::Kind::var: {
      auto it = env.find(t.index);
      if (it == env.end()) {
        fail(errc::not_closed, "variable v" + std::to_string(t.index) + " is unbound");
      }
      return it->second;
    }
    case Term::Kind::constant:
      return t.value;
    case Term::Kind::param:
      if (!val || t.index >= val->params.size()) {
        fail(errc::unbound_parameter,
             "parameter #" + std::to_string(t.index) + " has no value");
      }
      return val->params[t.index];
  }
  fail(errc::not_closed, "unreachable");
}

}  // namespace

bool eval_formula(const std::vector<Hf>& members, const Form& phi,
                  std::map<std::uint64_t, Hf>& env, const Valuation* val) {
  switch (phi->kind) {
    case Formula::Kind::in_atom:
      return hf_member(term_value(phi->lhs, env, val), term_value(phi->rhs, env, val));
    case Formula::Kind::eq_atom:
      return term_value(phi->lhs, env, val) == term_value(phi->rhs, env, val);
    case Formula::Kind::neg:
      return !eval_formula(members, phi->a, env, val);
    case Formula::Kind::conj:
      return eval_formula(members, phi->a, env, val) &&
             eval_formula(members, phi->b, env, val);
    case Formula::Kind::exists: {
      auto old = env.find(phi->var);
      Hf saved = old == env.end() ? nullptr : old->second;
      bool found = false;
      for (Hf m : members) {
        env[phi->var] = m;
        if (eval_formula(members, phi->a, env, val)) {
          found = true;
          break;
        }
      }
      if (saved) {
        env[phi->var] = saved;
      } else {
        env.erase(phi->var);
      }
      return found;
    }
  }
  return false;
}

namespace {

void collect_constants(const Form& f, std::vector<Hf>& out) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom:
      for (const Term* t : {&f->lhs, &f->rhs}) {
        if (t->kind == Term::Kind::constant) out.push_back(t->value);
      }
      return;
    case Formula::Kind::neg:
      collect_constants(f->a, out);
      return;
    case Formula::Kind::conj:
      collect_constants(f->a, out);
      collect_constants(f->b, out);
      return;
    case Formula::Kind::exists:
      collect_constants(f->a, out);
      return;
  }
}

void guard_structure_formula(Hf x, const Form& phi) {
  if (!hf_transitive(x)) {
    fail(errc::not_transitive, "structure is not a transitive set");
  }
  if (x->size() > 16) {
    fail(errc::too_large, "structure has more than 16 members");
  }
  if (!param_slots(phi).empty()) {
    fail(errc::not_closed, "parameter slots are unresolved; substitute them first");
  }
  if (!closed(phi)) {
    fail(errc::not_closed, "formula has free variables");
  }
  std::vector<Hf> consts;
  collect_constants(phi, consts);
  for (Hf c : consts) {
    if (!hf_member(c, x)) {
      fail(errc::param_outside_structure,
           "constant " + hf_print(c) + " is not a member of the structure");
    }
  }
}

// The formula with environment variables frozen in as constants.
Form freeze_env(const Form& f, const std::map<std::uint64_t, Hf>& env) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom: {
      auto sub = [&](const Term& t) {
        if (t.kind == Term::Kind::var) {
          auto it = env.find(t.index);
          if (it != env.end()) return t_const(it->second);
        }
        return t;
      };
      return f->kind == Formula::Kind::in_atom ? f_in(sub(f->lhs), sub(f->rhs))
                                               : f_eq(sub(f->lhs), sub(f->rhs));
    }
    case Formula::Kind::neg:
      return f_not(freeze_env(f->a, env));
    case Formula::Kind::conj:
      return f_and(freeze_env(f->a, env), freeze_env(f->b, env));
    case Formula::Kind::exists: {
      auto it = env.find(f->var);
      if (it == env.end()) return f_exists(f->var, freeze_env(f->a, env));
      std::map<std::uint64_t, Hf> inner(env);
      inner.erase(f->var);  // the binder shadows the outer value
      return f_exists(f->var, freeze_env(f->a, inner));
    }
  }
  return f;
}

std::string instance_key(const Form& f, const std::map<std::uint64_t, Hf>& env) {
  return formula_print(freeze_env(f, env));
}

constexpr std::size_t kMaxInstances = 1u << 20;

// Walks every closed instance of every subformula (children-first) and hands
// each to visit together with the assignment that produced it.
void for_each_instance(
    const std::vector<Hf>& members, const Form& phi,
    const std::function<void(const Form&, const std::map<std::uint64_t, Hf>&)>& visit) {
  std::size_t total = 0;
  for (const Form& sub : subformulas(phi)) {
    const std::set<std::uint64_t> fv_set = free_vars(sub);
    const std::vector<std::uint64_t> fv(fv_set.begin(), fv_set.end());
    std::size_t count = 1;
    for (std::size_t i = 0; i < fv.size(); ++i) {
      count *= members.size();
      if (count > kMaxInstances) break;
    }
    total += count;
    if (total > kMaxInstances) {
      fail(errc::too_large, "instance space exceeds the supported size");
    }
    std::vector<std::size_t> digits(fv.size(), 0);
    for (std::size_t step = 0; step < count; ++step) {
      std::map<std::uint64_t, Hf> env;
      for (std::size_t i = 0; i < fv.size(); ++i) env[fv[i]] = members[digits[i]];
      visit(sub, env);
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (++digits[i] < members.size()) break;
        digits[i] = 0;
      }
    }
  }
}

// Truth of one instance given the truth of all smaller instances.
bool instance_true(const std::vector<Hf>& members, const Form& sub,
                   const std::map<std::uint64_t, Hf>& env,
                   const std::set<std::string>& trues) {
  switch (sub->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom: {
      std::map<std::uint64_t, Hf> e(env);
      return eval_formula(members, sub, e, nullptr);
    }
    case Formula::Kind::neg:
      return !trues.count(instance_key(sub->a, env));
    case Formula::Kind::conj:
      return trues.count(instance_key(sub->a, env)) &&
             trues.count(instance_key(sub->b, env));
    case Formula::Kind::exists: {
      std::map<std::uint64_t, Hf> e(env);
      for (Hf m : members) {
        e[sub->var] = m;
        if (trues.count(instance_key(sub->a, e))) return true;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

TruthSet build_tts(Hf x, const Form& phi) {
  guard_structure_formula(x, phi);
  const std::vector<Hf>& members = x->children();
  TruthSet tau;
  for_each_instance(members, phi,
                    [&](const Form& sub, const std::map<std::uint64_t, Hf>& env) {
                      ++tau.instance_count;
                      if (instance_true(members, sub, env, tau.members)) {
                        tau.members.insert(instance_key(sub, env));
                      }
                    });
  return tau;
}

bool check_tts(Hf x, const Form& phi, const TruthSet& tau) {
  guard_structure_formula(x, phi);
  const std::vector<Hf>& members = x->children();
  bool ok = true;
  std::set<std::string> all_keys;
  for_each_instance(members, phi,
                    [&](const Form& sub, const std::map<std::uint64_t, Hf>& env) {
                      std::string key = instance_key(sub, env);
                      all_keys.insert(key);
                      bool required = instance_true(members, sub, env, tau.members);
                      if (required != (tau.members.count(key) != 0)) ok = false;
                    });
  if (!ok) return false;
  for (const std::string& k : tau.members) {
    if (!all_keys.count(k)) return false;
  }
  return true;
}

bool models(Hf x, const Form& phi) {
  guard_structure_formula(x, phi);
  std::map<std::uint64_t, Hf> env;
  return eval_formula(x->children(), phi, env, nullptr);
}

bool models_via_tts(Hf x, const Form& phi) {
  TruthSet tau = build_tts(x, phi);
  return tau.members.count(formula_print(phi)) != 0;
}

namespace {

const Digraph& dterm_value(const Term& t, const std::map<std::uint64_t, Digraph>& env) {
  if (t.kind != Term::Kind::var) {
    fail(errc::has_parameters, "digraph formulas carry variables only");
  }
  return env.at(t.index);
}

bool deval(const Form& f, std::map<std::uint64_t, Digraph>& env,
           const std::vector<Digraph>& universe) {
  switch (f->kind) {
    case Formula::Kind::in_atom: {
      const Digraph& lhs = dterm_value(f->lhs, env);
      const Digraph& rhs = dterm_value(f->rhs, env);
      for (Node u : eln(rhs)) {
        if (isomorphic(cone(rhs, u), lhs)) return true;
      }
      return false;
    }
    case Formula::Kind::eq_atom:
      return isomorphic(dterm_value(f->lhs, env), dterm_value(f->rhs, env));
    case Formula::Kind::neg:
      return !deval(f->a, env, universe);
    case Formula::Kind::conj:
      return deval(f->a, env, universe) && deval(f->b, env, universe);
    case Formula::Kind::exists: {
      auto old = env.find(f->var);
      bool had = old != env.end();
      Digraph saved = had ? old->second : Digraph();
      bool found = false;
      for (const Digraph& d : universe) {
        env[f->var] = d;
        if (deval(f->a, env, universe)) {
          found = true;
          break;
        }
      }
      if (had) {
        env[f->var] = saved;
      } else {
        env.erase(f->var);
      }
      return found;
    }
  }
  return false;
}

bool quantifies(const Form& f) {
  switch (f->kind) {
    case Formula::Kind::in_atom:
    case Formula::Kind::eq_atom:
      return false;
    case Formula::Kind::neg:
      return quantifies(f->a);
    case Formula::Kind::conj:
      return quantifies(f->a) || quantifies(f->b);
    case Formula::Kind::exists:
      return true;
  }
  return false;
}

}  // namespace

bool models_interp_bounded(const DigraphFormula& df,
                           const std::vector<Digraph>& args,
                           std::uint64_t rank_bound) {
  if (rank_bound > 4) {
    fail(errc::rank_too_large, "rank bound exceeds 4");
  }
  for (const Digraph& a : args) {
    require_wfev(a);
    if (collapse(a).value->rank() > rank_bound) {
      fail(errc::rank_too_large, "argument rank exceeds the bound");
    }
  }
  std::set<std::uint64_t> fv = free_vars(df.core);
  if (args.size() < fv.size()) {
    fail(errc::unbound_parameter, "free digraph variable has no argument");
  }
  if (args.size() > fv.size()) {
    fail(errc::arity_mismatch, "more arguments than free digraph variables");
  }
  std::map<std::uint64_t, Digraph> env;
  std::size_t i = 0;
  for (std::uint64_t v : fv) env.emplace(v, args[i++]);
  std::vector<Digraph> universe;
  if (quantifies(df.core)) {
    for (Hf m : v_level(rank_bound)->children()) universe.push_back(encode_set(m));
  }
  return deval(df.core, env, universe);
}

}  // namespace wfe

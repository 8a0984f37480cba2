#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "wfe/formula.hpp"

namespace wfe {

// Truth set of a closed formula over a finite transitive structure: the
// closed instances of its subformulas (members of the structure substituted
// for free variables, printed canonically) that hold.
struct TruthSet {
  std::set<std::string> members;
  std::size_t instance_count = 0;  // all instances, true or not
};

// Shared evaluation core: direct recursion with an environment for free
// variables; parameter slots resolve through val when given and are errors
// otherwise.  No structural guards; callers check the structure themselves.
bool eval_formula(const std::vector<Hf>& members, const Form& phi,
                  std::map<std::uint64_t, Hf>& env, const Valuation* val);

// The unique truth set, computed by induction on subformula size.  The
// structure must be transitive with at most 16 members; phi must be closed,
// free of parameter slots, with every constant a member of x.
TruthSet build_tts(Hf x, const Form& phi);

// Whether tau satisfies the truth-set closure conditions for phi over x:
// atom instances by real membership/equality, negation and conjunction
// pointwise, exists by witness, and tau drawn only from phi's instances.
bool check_tts(Hf x, const Form& phi, const TruthSet& tau);

// Direct recursive satisfaction; same preconditions as build_tts.
bool models(Hf x, const Form& phi);
// Satisfaction read off the truth set; agrees with models everywhere.
bool models_via_tts(Hf x, const Form& phi);

// Satisfaction of the digraph reading: "=" is isomorphism, "in" is
// cone-membership, quantifiers range over canonical digraphs of the sets of
// rank < rank_bound (the members of level rank_bound).  Free variables bind
// to args positionally in ascending index order; args must be vertex
// digraphs of realization rank <= rank_bound <= 4.
bool models_interp_bounded(const DigraphFormula& df,
                           const std::vector<Digraph>& args,
                           std::uint64_t rank_bound);

}  // namespace wfe

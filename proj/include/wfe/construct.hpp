#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wfe/formula.hpp"
#include "wfe/hfset.hpp"

namespace wfe {

// A definability witness: subset = {m in valuation.structure : formula holds
// with the valuation's parameters and v0 bound to m}.
struct DefCertificate {
  Hf subset = nullptr;
  Form formula;
  Valuation valuation;
};

// One verified certificate per subset of x, ordered by the Ackermann index of
// the subset.  x must be transitive with at most 16 members.
std::vector<DefCertificate> def_certificate(Hf x);

// Streaming form of def_certificate: same certificates in the same order,
// without holding them all at once.
void def_certificate_each(Hf x,
                          const std::function<void(const DefCertificate&)>& visit);

// The distinct subsets of x carved out by one-free-variable formulas with
// parameters from x and at most symbol_budget symbols, as a set of sets.
// x must be transitive with at most 4 members; the budget is capped at 9.
Hf def_enumerate(Hf x, std::uint64_t symbol_budget);

struct LLevel {
  Hf set = nullptr;       // materialized for n <= 4
  std::size_t count = 0;  // member count, for every supported n
};

// The constructible-level chain: L_0 = empty, L_{n+1} = the subset values of
// def_certificate(L_n).  Supported for n <= 5; the n = 5 level is counted but
// not materialized.
LLevel l_level(std::uint64_t n);

}  // namespace wfe

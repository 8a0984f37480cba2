#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wfe/digraph.hpp"

namespace wfe {

struct CnfTerm;

// Ordinal below epsilon_0 in Cantor normal form: w^e1*c1 + ... + w^ek*ck with
// exponents strictly decreasing and coefficients positive.  Zero is the empty
// term list; naturals are a single term with exponent zero.
struct CnfOrdinal {
  std::vector<CnfTerm> terms;
};

struct CnfTerm {
  CnfOrdinal exp;
  std::uint64_t coeff = 1;
};

bool operator==(const CnfOrdinal& a, const CnfOrdinal& b);
bool operator==(const CnfTerm& a, const CnfTerm& b);
inline bool operator!=(const CnfOrdinal& a, const CnfOrdinal& b) {
  return !(a == b);
}

CnfOrdinal ord_zero();
CnfOrdinal ord_nat(std::uint64_t n);
CnfOrdinal ord_omega();
bool is_finite(const CnfOrdinal& a);
// The natural a denotes, or nothing when a is infinite.
std::optional<std::uint64_t> nat_value(const CnfOrdinal& a);

// -1, 0, or 1 as a is below, equal to, or above b.
int cnf_cmp(const CnfOrdinal& a, const CnfOrdinal& b);

CnfOrdinal cnf_add(const CnfOrdinal& a, const CnfOrdinal& b);
CnfOrdinal cnf_mul(const CnfOrdinal& a, const CnfOrdinal& b);
CnfOrdinal cnf_pow(const CnfOrdinal& a, const CnfOrdinal& b);

enum class CnfOp { add, mul, pow };
CnfOrdinal cnf_arith(CnfOp op, const CnfOrdinal& a, const CnfOrdinal& b);

// Text syntax: sum of terms joined by "+"; a term is a natural, or "w" with
// optional "^expo" and "*nat"; an exponent is a natural, "w", or "{sum}".
// Non-canonical sums are normalized by ordinal addition.
CnfOrdinal ordinal_parse(const std::string& text);
std::string ordinal_print(const CnfOrdinal& a);

struct WellOrderCollapse {
  std::uint64_t n = 0;  // order length = field size
  NodeMap iso;          // node -> its position, edge-preserving
};

// Collapses a digraph whose edges form a strict total order on its field onto
// the natural order 0 < 1 < ... < n-1.
WellOrderCollapse collapse_wellorder(const Digraph& a);

}  // namespace wfe

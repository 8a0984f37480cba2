#include "wfe/construct.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "wfe/error.hpp"
#include "wfe/truth.hpp"

namespace wfe {

namespace {

// v0 = #0 | v0 = #1 | ... | v0 = #(k-1), folded right; the empty selection
// gets the unsatisfiable !(v0 = v0).
Form selection_formula(std::size_t k) {
  if (k == 0) return f_not(f_eq(t_var(0), t_var(0)));
  Form acc = f_eq(t_var(0), t_param(k - 1));
  for (std::size_t i = k - 1; i-- > 0;) {
    acc = f_or(f_eq(t_var(0), t_param(i)), acc);
  }
  return acc;
}

void guard_def_input(Hf x, std::size_t max_members) {
  if (!hf_transitive(x)) {
    fail(errc::not_transitive, "structure is not a transitive set");
  }
  if (x->size() > max_members) {
    fail(errc::too_large, "structure has more than " +
                              std::to_string(max_members) + " members");
  }
}

}  // namespace

void def_certificate_each(
    Hf x, const std::function<void(const DefCertificate&)>& visit) {
  guard_def_input(x, 16);
  const std::vector<Hf>& members = x->children();
  const std::size_t n = members.size();
  std::vector<Form> by_size(n + 1);
  for (std::size_t k = 0; k <= n; ++k) by_size[k] = selection_formula(k);
  // Members ascend in Ackermann order, so ascending bitmasks visit subsets in
  // ascending Ackermann index.
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    std::vector<Hf> chosen;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) chosen.push_back(members[i]);
    }
    DefCertificate cert;
    cert.subset = hf_make(chosen);
    cert.formula = by_size[chosen.size()];
    cert.valuation.params = std::move(chosen);
    cert.valuation.structure = x;
    for (Hf m : members) {
      std::map<std::uint64_t, Hf> env{{0, m}};
      bool holds = eval_formula(members, cert.formula, env, &cert.valuation);
      if (holds != hf_member(m, cert.subset)) {
        throw std::logic_error("definability certificate failed verification");
      }
    }
    visit(cert);
  }
}

std::vector<DefCertificate> def_certificate(Hf x) {
  std::vector<DefCertificate> out;
  def_certificate_each(x, [&](const DefCertificate& c) { out.push_back(c); });
  return out;
}

namespace {

// Semantic class of a formula over the structure: its truth table across all
// assignments of the scope variables v0..vd, indexed by sum(digit_i * k^i).
using Table = std::vector<bool>;

std::size_t pow_sz(std::size_t k, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= k;
  return r;
}

}  // namespace

Hf def_enumerate(Hf x, std::uint64_t symbol_budget) {
  guard_def_input(x, 4);
  if (symbol_budget > 9) fail(errc::too_large, "symbol budget exceeds 9");
  const std::vector<Hf>& members = x->children();
  const std::size_t k = members.size();
  const std::size_t budget = static_cast<std::size_t>(symbol_budget);

  // A table at depth d only matters if it can be projected to depth 0 within
  // the budget; each projection costs 2 (quantifier plus bound variable).
  const std::size_t max_depth = budget >= 4 ? (budget - 2) / 2 : 0;

  // strata[d][c] = distinct tables of formulas with free variables among
  // v0..vd and exactly c symbols.
  std::vector<std::vector<std::set<Table>>> strata(
      max_depth + 1, std::vector<std::set<Table>>(budget + 1));

  auto depth_fits = [&](std::size_t cost, std::size_t d) {
    return d <= max_depth && cost + 2 * d <= budget;
  };

  for (std::size_t cost = 2; cost <= budget; ++cost) {
    for (std::size_t d = 0; d <= max_depth; ++d) {
      if (!depth_fits(cost, d)) continue;
      std::set<Table>& out = strata[d][cost];
      const std::size_t rows = pow_sz(k, d + 1);
      if (cost == 2) {
        // Atoms over scope variables and one parameter per member.
        const std::size_t terms = (d + 1) + k;  // v0..vd then #0..#(k-1)
        std::vector<std::size_t> digits(d + 1);
        for (std::size_t t1 = 0; t1 < terms; ++t1) {
          for (std::size_t t2 = 0; t2 < terms; ++t2) {
            Table tin(rows), teq(rows);
            for (std::size_t idx = 0; idx < rows; ++idx) {
              std::size_t rest = idx;
              for (std::size_t i = 0; i <= d; ++i) {
                digits[i] = rest % k;
                rest /= k;
              }
              Hf a = t1 <= d ? members[digits[t1]] : members[t1 - d - 1];
              Hf b = t2 <= d ? members[digits[t2]] : members[t2 - d - 1];
              tin[idx] = hf_member(a, b);
              teq[idx] = (a == b);
            }
            out.insert(tin);
            out.insert(teq);
          }
        }
        continue;
      }
      // Negation of anything one symbol cheaper.
      for (const Table& t : strata[d][cost - 1]) {
        Table neg(rows);
        for (std::size_t i = 0; i < rows; ++i) neg[i] = !t[i];
        out.insert(neg);
      }
      // Conjunction of two cheaper tables at the same depth.
      for (std::size_t c1 = 2; c1 + 3 <= cost; ++c1) {
        const std::size_t c2 = cost - 1 - c1;
        for (const Table& a : strata[d][c1]) {
          for (const Table& b : strata[d][c2]) {
            Table both(rows);
            for (std::size_t i = 0; i < rows; ++i) both[i] = a[i] && b[i];
            out.insert(both);
          }
        }
      }
      // Existential over the next scope variable, projecting depth d+1 down.
      if (cost >= 4 && d + 1 <= max_depth) {
        const std::size_t block = rows;  // k^(d+1) rows per witness value
        for (const Table& t : strata[d + 1][cost - 2]) {
          Table proj(rows, false);
          for (std::size_t idx = 0; idx < rows; ++idx) {
            for (std::size_t m = 0; m < k; ++m) {
              if (t[idx + m * block]) {
                proj[idx] = true;
                break;
              }
            }
          }
          out.insert(proj);
        }
      }
    }
  }

  std::set<Hf, HfLess> subsets;
  for (std::size_t cost = 2; cost <= budget; ++cost) {
    for (const Table& t : strata[0][cost]) {
      std::vector<Hf> sel;
      for (std::size_t i = 0; i < k; ++i) {
        if (t[i]) sel.push_back(members[i]);
      }
      subsets.insert(hf_make(sel));
    }
  }
  return hf_make(std::vector<Hf>(subsets.begin(), subsets.end()));
}

LLevel l_level(std::uint64_t n) {
  if (n > 5) fail(errc::level_too_large, "levels above 5 are not supported");
  LLevel out;
  out.set = hf_empty();
  out.count = 0;
  Hf cur = hf_empty();
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (i <= 4) {
      std::vector<Hf> subsets;
      def_certificate_each(
          cur, [&](const DefCertificate& c) { subsets.push_back(c.subset); });
      cur = hf_make(subsets);
      out.set = cur;
      out.count = cur->size();
    } else {
      std::set<Hf> distinct;
      def_certificate_each(
          cur, [&](const DefCertificate& c) { distinct.insert(c.subset); });
      out.set = nullptr;
      out.count = distinct.size();
    }
  }
  return out;
}

}  // namespace wfe

#pragma once

#include <stdexcept>
#include <string>

namespace wfe {

// Stable machine-readable failure codes; the CLI prints the name verbatim.
enum class errc {
  not_wf,
  not_wfe,
  not_wfev,
  node_not_in_field,
  empty_selection,
  vertex_in_selection,
  non_injective_map,
  map_domain_too_small,
  not_surjective,
  domain_mismatch,
  level_too_large,
  too_large,
  syntax_error,
  has_parameters,
  unbound_parameter,
  arity_mismatch,
  not_transitive,
  not_closed,
  param_outside_structure,
  rank_too_large,
  not_linear_order,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace wfe

#include "wfe/error.hpp"

namespace wfe {

const char* errc_name(errc code) {
  switch (code) {
    case errc::not_wf: return "NOT_WF";
    case errc::not_wfe: return "NOT_WFE";
    case errc::not_wfev: return "NOT_WFEV";
    case errc::node_not_in_field: return "NODE_NOT_IN_FIELD";
    case errc::empty_selection: return "EMPTY_SELECTION";
    case errc::vertex_in_selection: return "VERTEX_IN_SELECTION";
    case errc::non_injective_map: return "NON_INJECTIVE_MAP";
    case errc::map_domain_too_small: return "MAP_DOMAIN_TOO_SMALL";
    case errc::not_surjective: return "NOT_SURJECTIVE";
    case errc::domain_mismatch: return "DOMAIN_MISMATCH";
    case errc::level_too_large: return "LEVEL_TOO_LARGE";
    case errc::too_large: return "TOO_LARGE";
    case errc::syntax_error: return "SYNTAX_ERROR";
    case errc::has_parameters: return "HAS_PARAMETERS";
    case errc::unbound_parameter: return "UNBOUND_PARAMETER";
    case errc::arity_mismatch: return "ARITY_MISMATCH";
    case errc::not_transitive: return "NOT_TRANSITIVE";
    case errc::not_closed: return "NOT_CLOSED";
    case errc::param_outside_structure: return "PARAM_OUTSIDE_STRUCTURE";
    case errc::rank_too_large: return "RANK_TOO_LARGE";
    case errc::not_linear_order: return "NOT_LINEAR_ORDER";
  }
  return "UNKNOWN";
}

}  // namespace wfe

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wfe/construct.hpp"
#include "wfe/digraph.hpp"
#include "wfe/error.hpp"
#include "wfe/formula.hpp"
#include "wfe/hfset.hpp"
#include "wfe/ordinal.hpp"
#include "wfe/truth.hpp"

namespace {

using nlohmann::json;

bool g_plain = false;

void emit(const json& j, const std::string& plain) {
  if (g_plain) {
    std::cout << plain;
    if (!plain.empty() && plain.back() != '\n') std::cout << '\n';
  } else {
    std::cout << j.dump() << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) wfe::fail(wfe::errc::syntax_error, "cannot read file " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool looks_like_file(const std::string& arg) {
  std::ifstream in(arg, std::ios::binary);
  return static_cast<bool>(in);
}

wfe::Digraph digraph_arg(const std::string& arg) {
  if (looks_like_file(arg)) return wfe::digraph_parse(read_file(arg));
  return wfe::digraph_parse(arg);
}

wfe::Hf set_text(const std::string& text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == 'V') {
    std::uint64_t n = 0;
    std::size_t j = i + 1;
    bool any = false;
    for (; j < text.size() && text[j] >= '0' && text[j] <= '9'; ++j) {
      n = n * 10 + (text[j] - '0');
      any = true;
    }
    if (!any || text.find_first_not_of(" \t\r\n", j) != std::string::npos) {
      wfe::fail(wfe::errc::syntax_error, "bad level name");
    }
    return wfe::v_level(n);
  }
  return wfe::hf_parse(text);
}

wfe::Hf set_arg(const std::string& arg) {
  if (looks_like_file(arg)) return set_text(read_file(arg));
  return set_text(arg);
}

json edges_json(const wfe::Digraph& d) {
  json edges = json::array();
  for (const wfe::Edge& e : d.edges()) edges.push_back({e.first, e.second});
  return edges;
}

json map_json(const wfe::NodeMap& m) {
  json pairs = json::array();
  for (const auto& [u, v] : m) pairs.push_back({u, v});
  return pairs;
}

std::string map_plain(const wfe::NodeMap& m) {
  std::string out;
  for (const auto& [u, v] : m) {
    out += std::to_string(u) + " -> " + std::to_string(v) + "\n";
  }
  return out;
}

std::uint64_t rank_cap() {
  const char* env = std::getenv("WFESETS_MAX_RANK");
  if (!env || !*env) return 4;
  std::string s(env);
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') {
      wfe::fail(wfe::errc::syntax_error, "WFESETS_MAX_RANK must be a natural number");
    }
    v = v * 10 + (c - '0');
  }
  return v;
}

int cmd_check(const std::string& graph, bool require_wfe_flag, bool require_wfev_flag) {
  wfe::Digraph d = digraph_arg(graph);
  wfe::DigraphClass cls = wfe::validate(d);
  json j;
  j["wf"] = cls.well_founded;
  j["extensional"] = cls.extensional;
  j["has_vertex"] = cls.has_vertex;
  j["vertex"] = cls.vertex ? json(*cls.vertex) : json(nullptr);
  j["min"] = cls.min_node ? json(*cls.min_node) : json(nullptr);
  std::string plain = std::string("wf ") + (cls.well_founded ? "true" : "false") +
                      "\nextensional " + (cls.extensional ? "true" : "false") +
                      "\nhas_vertex " + (cls.has_vertex ? "true" : "false") +
                      "\nvertex " + (cls.vertex ? std::to_string(*cls.vertex) : "none") +
                      "\nmin " + (cls.min_node ? std::to_string(*cls.min_node) : "none") +
                      "\n";
  if (require_wfe_flag || require_wfev_flag) {
    try {
      if (require_wfev_flag) {
        wfe::require_wfev(d);
      } else {
        wfe::require_wfe(d);
      }
    } catch (const wfe::error& e) {
      // Most specific violated property wins the reported code.
      const char* code = !cls.well_founded
                             ? wfe::errc_name(wfe::errc::not_wf)
                             : (!cls.extensional ? wfe::errc_name(wfe::errc::not_wfe)
                                                 : wfe::errc_name(wfe::errc::not_wfev));
      j["error"] = code;
      j["message"] = e.what();
      emit(j, plain + "error " + std::string(code) + " " + e.what() + "\n");
      return 1;
    }
  }
  emit(j, plain);
  return 0;
}

void cmd_eval(const std::string& structure, const std::string& formula) {
  wfe::Hf x = set_arg(structure);
  wfe::Form phi = wfe::formula_parse(formula);
  bool m = wfe::models(x, phi);
  wfe::TruthSet tau = wfe::build_tts(x, phi);
  json j;
  j["models"] = m;
  j["tts_size"] = tau.members.size();
  emit(j, std::string(m ? "true" : "false") + "\ntts_size " +
              std::to_string(tau.members.size()) + "\n");
}

void cmd_def(const std::string& structure, bool count_only) {
  wfe::Hf x = set_arg(structure);
  if (count_only) {
    std::size_t n = 0;
    wfe::def_certificate_each(x, [&](const wfe::DefCertificate&) { ++n; });
    emit(json{{"count", n}}, "count " + std::to_string(n) + "\n");
    return;
  }
  json certs = json::array();
  std::string plain;
  std::size_t n = 0;
  wfe::def_certificate_each(x, [&](const wfe::DefCertificate& c) {
    ++n;
    json params = json::array();
    for (wfe::Hf p : c.valuation.params) params.push_back(wfe::hf_print(p));
    certs.push_back(json{{"formula", wfe::formula_print(c.formula)},
                         {"params", params},
                         {"subset", wfe::hf_print(c.subset)}});
    plain += wfe::hf_print(c.subset) + " : " + wfe::formula_print(c.formula) + "\n";
  });
  emit(json{{"certificates", certs}, {"count", n}}, plain);
}

void cmd_level(std::uint64_t n, bool count_only, bool members) {
  wfe::LLevel lv = wfe::l_level(n);
  if (count_only) {
    emit(json{{"count", lv.count}}, "count " + std::to_string(lv.count) + "\n");
    return;
  }
  json j{{"count", lv.count}, {"n", n}};
  std::string plain = "count " + std::to_string(lv.count) + "\n";
  if (members) {
    if (!lv.set) {
      wfe::fail(wfe::errc::level_too_large,
                "members are only materialized for levels up to 4");
    }
    json ms = json::array();
    for (wfe::Hf m : lv.set->children()) {
      ms.push_back(wfe::hf_print(m));
      plain += wfe::hf_print(m) + "\n";
    }
    j["members"] = ms;
  }
  emit(j, plain);
}

int run_batch(const std::string& path);

// Builds the app, parses one argument vector, dispatches.  Returns the
// process exit status: 0 success, 1 domain error, 2 usage error.
int execute(const std::vector<std::string>& args, bool allow_batch) {
  g_plain = false;  // commands are independent, even within a batch
  CLI::App app{"hereditarily finite sets as vertex digraphs"};
  app.add_flag("--plain", g_plain, "plain text output instead of JSON");

  std::string batch_path;
  if (allow_batch) {
    app.add_option("--batch", batch_path,
                   "run one command per line from a file ('-' for stdin)");
  }

  std::string arg1, arg2, arg3;
  std::vector<std::string> rest;
  std::uint64_t num1 = 0, num2 = 0;
  bool flag_wfe = false, flag_wfev = false, flag_decode = false;
  bool flag_count = false, flag_members = false;
  std::uint64_t bound = 3;

  auto* c_check = app.add_subcommand("check", "classify a digraph");
  c_check->add_option("graph", arg1, "digraph (file or inline)")->required();
  c_check->add_flag("--require-wfe", flag_wfe, "fail unless well-founded extensional");
  c_check->add_flag("--require-wfev", flag_wfev, "fail unless WFE with a vertex");

  auto* c_canon = app.add_subcommand("canon", "canonical representative");
  c_canon->add_option("graph", arg1)->required();

  auto* c_iso = app.add_subcommand("iso", "isomorphism test with witness");
  c_iso->add_option("a", arg1)->required();
  c_iso->add_option("b", arg2)->required();

  auto* c_cone = app.add_subcommand("cone", "lower-cone sub-digraph of a node");
  c_cone->add_option("graph", arg1)->required();
  c_cone->add_option("node", num1)->required();

  auto* c_pair = app.add_subcommand("pair", "unordered pair digraph");
  c_pair->add_option("a", arg1)->required();
  c_pair->add_option("b", arg2)->required();

  auto* c_assemble = app.add_subcommand("assemble", "chained pairing of a list");
  c_assemble->add_option("graphs", rest, "digraphs, first to last");

  auto* c_slice = app.add_subcommand("slice", "n-th slice under the pairing");
  c_slice->add_option("graph", arg1)->required();
  c_slice->add_option("n", num1)->required();

  auto* c_close = app.add_subcommand("close", "bounded pair closure");
  c_close->add_option("graph", arg1)->required();
  c_close->add_option("limit", num1, "subset size limit")->required();
  c_close->add_option("depth", num2, "iterations")->required();

  auto* c_collapse = app.add_subcommand("collapse", "realized set of a WFEV digraph");
  c_collapse->add_option("graph", arg1)->required();

  auto* c_encode = app.add_subcommand("encode", "canonical digraph of a set");
  c_encode->add_option("set", arg1, "brace literal, V<n>, or file")->required();

  auto* c_tc = app.add_subcommand("tc", "transitive closure of a set");
  c_tc->add_option("set", arg1)->required();

  auto* c_parse = app.add_subcommand("parse", "parse and reprint a formula");
  c_parse->add_option("formula", arg1)->required();

  auto* c_godel = app.add_subcommand("godel", "formula code, or decode with --decode");
  c_godel->add_option("input", arg1, "formula, or code with --decode")->required();
  c_godel->add_flag("--decode", flag_decode, "decode a code to a formula");

  auto* c_eval = app.add_subcommand("eval", "truth over a finite structure");
  c_eval->add_option("formula", arg1)->required();
  c_eval->add_option("--structure", arg2, "structure (brace literal, V<n>, or file)")
      ->required();

  auto* c_translate = app.add_subcommand("translate", "digraph reading of a formula");
  c_translate->add_option("formula", arg1)->required();

  auto* c_interp = app.add_subcommand("interp-eval",
                                      "evaluate the digraph reading, bounded rank");
  c_interp->add_option("formula", arg1)->required();
  c_interp->add_option("args", rest, "argument digraphs for the free variables");
  c_interp->add_option("--bound", bound, "universe rank bound (default 3)");

  auto* c_def = app.add_subcommand("def", "definability certificates");
  c_def->add_option("set", arg1)->required();
  c_def->add_flag("--count", flag_count, "emit only the certificate count");

  auto* c_level = app.add_subcommand("level", "constructible level");
  c_level->add_option("n", num1)->required();
  c_level->add_flag("--count", flag_count, "emit only the member count");
  c_level->add_flag("--members", flag_members, "list members (levels up to 4)");

  auto* c_ord = app.add_subcommand("ord", "ordinal arithmetic in Cantor normal form");
  c_ord->add_option("op", arg1, "add, mul, or pow")
      ->required()
      ->check(CLI::IsMember({"add", "mul", "pow"}));
  c_ord->add_option("a", arg2)->required();
  c_ord->add_option("b", arg3)->required();

  auto* c_cord = app.add_subcommand("collapse-order", "collapse a finite linear order");
  c_cord->add_option("graph", arg1)->required();

  std::vector<const char*> argv;
  argv.push_back("wfesets");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (!batch_path.empty()) {
    if (!app.get_subcommands().empty()) {
      std::cerr << "--batch does not take a verb of its own\n";
      return 2;
    }
    return run_batch(batch_path);
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    if (c_check->parsed()) {
      return cmd_check(arg1, flag_wfe, flag_wfev);
    } else if (c_canon->parsed()) {
      wfe::Digraph d = wfe::canonicalize(digraph_arg(arg1));
      emit(json{{"edges", edges_json(d)}}, wfe::digraph_print(d));
    } else if (c_iso->parsed()) {
      auto w = wfe::isomorphism(digraph_arg(arg1), digraph_arg(arg2));
      json j{{"isomorphic", w.has_value()},
             {"witness", w ? map_json(*w) : json(nullptr)}};
      emit(j, w ? "true\n" + map_plain(*w) : std::string("false\n"));
    } else if (c_cone->parsed()) {
      wfe::Digraph d = wfe::cone(digraph_arg(arg1), num1);
      emit(json{{"edges", edges_json(d)}}, wfe::digraph_print(d));
    } else if (c_pair->parsed()) {
      wfe::PairResult r = wfe::pair(digraph_arg(arg1), digraph_arg(arg2));
      json j{{"a", r.a},
             {"a_embed", map_json(r.a_embed)},
             {"b", r.b},
             {"b_embed", map_json(r.b_embed)},
             {"p", edges_json(r.p)}};
      emit(j, wfe::digraph_print(r.p) + "a " + std::to_string(r.a) + "\nb " +
                  std::to_string(r.b) + "\n");
    } else if (c_assemble->parsed()) {
      std::vector<wfe::Digraph> ds;
      for (const std::string& s : rest) ds.push_back(digraph_arg(s));
      wfe::Digraph d = wfe::assemble(ds);
      emit(json{{"edges", edges_json(d)}}, wfe::digraph_print(d));
    } else if (c_slice->parsed()) {
      wfe::Digraph d = wfe::slice(digraph_arg(arg1), num1);
      emit(json{{"edges", edges_json(d)}}, wfe::digraph_print(d));
    } else if (c_close->parsed()) {
      wfe::Digraph d = wfe::pair_close_bounded(digraph_arg(arg1), num1, num2);
      emit(json{{"edges", edges_json(d)}}, wfe::digraph_print(d));
    } else if (c_collapse->parsed()) {
      wfe::CollapseResult r = wfe::collapse(digraph_arg(arg1));
      json xi = json::array();
      std::string plain = wfe::hf_print(r.value) + "\n";
      for (const auto& [node, s] : r.xi) {
        xi.push_back({json(node), json(wfe::hf_print(s))});
        plain += std::to_string(node) + " -> " + wfe::hf_print(s) + "\n";
      }
      emit(json{{"value", wfe::hf_print(r.value)}, {"xi", xi}}, plain);
    } else if (c_encode->parsed()) {
      wfe::Digraph d = wfe::encode_set(set_arg(arg1));
      emit(json{{"edges", edges_json(d)}}, wfe::digraph_print(d));
    } else if (c_tc->parsed()) {
      wfe::Hf t = wfe::transitive_closure(set_arg(arg1));
      emit(json{{"tc", wfe::hf_print(t)}}, wfe::hf_print(t) + "\n");
    } else if (c_parse->parsed()) {
      wfe::Form f = wfe::formula_parse(arg1);
      json free = json::array(), params = json::array();
      for (std::uint64_t v : wfe::free_vars(f)) free.push_back(v);
      for (std::uint64_t p : wfe::param_slots(f)) params.push_back(p);
      json j{{"closed", wfe::closed(f)},
             {"free", free},
             {"params", params},
             {"pretty", wfe::formula_print(f)},
             {"symbols", wfe::symbol_count(f)}};
      emit(j, wfe::formula_print(f) + "\n");
    } else if (c_godel->parsed()) {
      if (flag_decode) {
        wfe::BigNat g;
        try {
          g = wfe::BigNat(arg1);
        } catch (const std::exception&) {
          wfe::fail(wfe::errc::syntax_error, "not a number: " + arg1);
        }
        if (g < 0) wfe::fail(wfe::errc::syntax_error, "codes are naturals");
        auto f = wfe::degodelize(g);
        json j{{"formula", f ? json(wfe::formula_print(*f)) : json(nullptr)}};
        emit(j, f ? wfe::formula_print(*f) + "\n" : std::string("none\n"));
      } else {
        wfe::BigNat g = wfe::godelize(wfe::formula_parse(arg1));
        emit(json{{"godel", g.str()}}, g.str() + "\n");
      }
    } else if (c_eval->parsed()) {
      cmd_eval(arg2, arg1);
    } else if (c_translate->parsed()) {
      wfe::DigraphFormula df = wfe::translate_interp(wfe::formula_parse(arg1));
      std::string pretty = wfe::dformula_print(df);
      emit(json{{"pretty", pretty}}, pretty + "\n");
    } else if (c_interp->parsed()) {
      std::uint64_t cap = rank_cap();
      if (bound > cap) {
        wfe::fail(wfe::errc::rank_too_large,
                  "bound exceeds the WFESETS_MAX_RANK cap of " + std::to_string(cap));
      }
      wfe::DigraphFormula df = wfe::translate_interp(wfe::formula_parse(arg1));
      std::vector<wfe::Digraph> dargs;
      for (const std::string& s : rest) dargs.push_back(digraph_arg(s));
      bool m = wfe::models_interp_bounded(df, dargs, bound);
      emit(json{{"models", m}}, std::string(m ? "true" : "false") + "\n");
    } else if (c_def->parsed()) {
      cmd_def(arg1, flag_count);
    } else if (c_level->parsed()) {
      cmd_level(num1, flag_count, flag_members);
    } else if (c_ord->parsed()) {
      wfe::CnfOp op = arg1 == "add" ? wfe::CnfOp::add
                                    : (arg1 == "mul" ? wfe::CnfOp::mul : wfe::CnfOp::pow);
      wfe::CnfOrdinal r =
          wfe::cnf_arith(op, wfe::ordinal_parse(arg2), wfe::ordinal_parse(arg3));
      emit(json{{"result", wfe::ordinal_print(r)}}, wfe::ordinal_print(r) + "\n");
    } else if (c_cord->parsed()) {
      wfe::WellOrderCollapse r = wfe::collapse_wellorder(digraph_arg(arg1));
      emit(json{{"iso", map_json(r.iso)}, {"n", r.n}},
           "n " + std::to_string(r.n) + "\n" + map_plain(r.iso));
    }
  } catch (const wfe::error& e) {
    if (g_plain) {
      std::cout << "error " << wfe::errc_name(e.code()) << " " << e.what() << "\n";
    } else {
      std::cout << json{{"error", wfe::errc_name(e.code())},
                        {"message", e.what()}}
                       .dump()
                << '\n';
    }
    return 1;
  }
  return 0;
}

// Whitespace-separated tokens; single or double quotes group, no escapes.
std::vector<std::string> tokenize(const std::string& line, bool& ok) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = '\0';
  ok = true;
  for (char c : line) {
    if (quote != '\0') {
      if (c == quote) {
        quote = '\0';
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      in_token = true;
      continue;
    }
    if (c == ' ' || c == '\t') {
      if (in_token) {
        out.push_back(cur);
        cur.clear();
        in_token = false;
      }
      continue;
    }
    cur += c;
    in_token = true;
  }
  if (quote != '\0') {
    ok = false;
    return out;
  }
  if (in_token) out.push_back(cur);
  return out;
}

int run_batch(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot read batch file " << path << "\n";
      return 2;
    }
    in = &file;
  }
  int worst = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    bool ok = true;
    std::vector<std::string> tokens = tokenize(line, ok);
    if (!ok) {
      std::cerr << "batch line " << lineno << ": unbalanced quote\n";
      return 2;
    }
    int rc = execute(tokens, /*allow_batch=*/false);
    worst = std::max(worst, rc);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return execute(args, /*allow_batch=*/true);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

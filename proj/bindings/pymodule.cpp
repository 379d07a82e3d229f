#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <variant>
#include <vector>

#include "extlr/extparser.hpp"
#include "extlr/firstk.hpp"
#include "extlr/grammar.hpp"
#include "extlr/simulate.hpp"

namespace py = pybind11;
using namespace extlr;

namespace {

std::vector<std::string> names(const Grammar& g,
                               const std::vector<SymbolId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (SymbolId id : ids) out.push_back(g.name(id));
  return out;
}

std::string term_string_text(const Grammar& g, const TermString& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += " ";
    out += g.name(s[i]);
  }
  return out;  // empty string stands for eps
}

Strategy resolve_strategy(const std::string& name, int k) {
  if (name == "auto") return k <= 3 ? Strategy::Table : Strategy::Trie;
  if (name == "table") {
    if (k > kMaxTableK)
      throw py::value_error("k too large for the table strategy; use trie");
    return Strategy::Table;
  }
  if (name == "trie") return Strategy::Trie;
  throw py::value_error("strategy must be auto, table or trie");
}

FirstKTables tables_for(const Grammar& g, int k, Strategy s) {
  FirstKTables t = compute_first_k(g, k);
  if (k >= 1) {
    build_tries(g, t);
    if (s == Strategy::Table) build_prefix_tables(g, t);
  }
  return t;
}

}  // namespace

PYBIND11_MODULE(_extlr, m) {
  m.doc() = "deterministic one-pass LR(k) parsing over a graph-structured "
            "simulation of the grammar's pushdown automaton";

  py::register_exception<GrammarError>(m, "GrammarError");

  py::class_<Grammar>(m, "Grammar")
      .def_static("parse", &Grammar::parse, py::arg("text"))
      .def_property_readonly("terminal_count", &Grammar::terminal_count)
      .def_property_readonly("nonterminal_count", &Grammar::nonterminal_count)
      .def_property_readonly("production_count", &Grammar::production_count)
      .def_property_readonly("size", &Grammar::size)
      .def("name", &Grammar::name, py::arg("symbol_id"))
      .def("production_text", &Grammar::production_text, py::arg("index"))
      .def("to_text", &Grammar::to_text)
      .def("reduced", &Grammar::reduced)
      .def("check_reduced", [](const Grammar& g) {
        ReducedCheck c = g.check_reduced();
        py::dict d;
        d["ok"] = c.ok();
        d["unreachable"] = names(g, c.unreachable);
        d["unproductive"] = names(g, c.unproductive);
        return d;
      });

  m.def("gen_gn", &gen_gn, py::arg("n"),
        "the quadratic-size grammar family used by the benchmarks");

  m.def(
      "tokenize",
      [](const Grammar& g, const std::string& text) {
        return tokenize_input(g, text);
      },
      py::arg("grammar"), py::arg("text"),
      "whitespace-separated token names to symbol ids");

  m.def(
      "recognize",
      [](const Grammar& g, const std::string& input) {
        return simulate(g, tokenize_input(g, input));
      },
      py::arg("grammar"), py::arg("input"));

  m.def(
      "first_k",
      [](const Grammar& g, int k) {
        FirstKTables t = compute_first_k(g, k);
        py::dict out;
        int total = g.terminal_count() + g.nonterminal_count();
        for (SymbolId s = 0; s < total; ++s) {
          py::list items;
          for (const TermString& ts : t.first_of(s))
            items.append(term_string_text(g, ts));
          out[py::str(g.name(s))] = items;
        }
        return out;
      },
      py::arg("grammar"), py::arg("k"),
      "FIRST_k per symbol; members are space-joined token names, '' is eps");

  m.def(
      "parse",
      [](const Grammar& g, int k, const std::string& input,
         const std::string& strategy) {
        Strategy s = resolve_strategy(strategy, k);
        FirstKTables t = tables_for(g, k, s);
        ParseOptions o;
        o.strategy = s;
        ParseResult r = ext_parse(g, t, tokenize_input(g, input), o);
        py::dict out;
        if (const auto* d = std::get_if<Derivation>(&r)) {
          out["status"] = "accept";
          out["prods"] = d->prods;
          out["ld"] = d->prods.size();
        } else if (const auto* se = std::get_if<SyntaxError>(&r)) {
          out["status"] = "syntax_error";
          out["token_pos"] = se->token_pos;
          out["expected"] = names(g, se->expected);
          out["expect_eof"] = se->expect_eof;
        } else {
          const ConflictError& ce = std::get<ConflictError>(r);
          out["status"] = "conflict";
          out["k"] = ce.k;
          out["token_pos"] = ce.token_pos;
          out["detail"] = ce.detail;
        }
        return out;
      },
      py::arg("grammar"), py::arg("k"), py::arg("input"),
      py::arg("strategy") = "auto",
      "one-pass parse; returns the reversed rightmost derivation on accept");
}

#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "extlr/firstk.hpp"
#include "extlr/grammar.hpp"

namespace extlr {

enum class Strategy { Table, Trie };

struct ParseStats {
  std::size_t nodes_created = 0;
  std::size_t edges_created = 0;
  std::size_t searches = 0;
  std::size_t search_visits = 0;
};

struct ParseOptions {
  Strategy strategy = Strategy::Table;
  bool check_invariants = false;
  bool trace = false;
  std::ostream* trace_out = nullptr;
};

// Production indices in reversed rightmost order, as emitted.
struct Derivation {
  std::vector<int> prods;
};

struct SyntaxError {
  int token_pos = 0;               // 1-based; n+1 when the input ended early
  std::vector<SymbolId> expected;  // sorted candidate terminals
  bool expect_eof = false;
};

struct ConflictError {
  int k = 0;
  int token_pos = 0;
  std::string detail;  // "<candidate> vs <candidate>" or a budget note
};

using ParseResult = std::variant<Derivation, SyntaxError, ConflictError>;

// Dotted item rendered as "A -> a . B c"; a finished item ends in " .".
std::string item_text(const Grammar& g, int prod, int dot);

// One-pass parse of the token sequence. tables must come from
// compute_first_k(g, k) with build_tries done for Strategy::Trie or
// build_prefix_tables for Strategy::Table (k >= 1 only; k = 0 needs neither).
ParseResult ext_parse(const Grammar& g, const FirstKTables& tables,
                      const std::vector<SymbolId>& input,
                      const ParseOptions& opts = {}, ParseStats* stats = nullptr);

}  // namespace extlr

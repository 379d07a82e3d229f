#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "extlr/grammar.hpp"

namespace extlr {

inline constexpr int kMaxK = 16;

struct TrieNode {
  std::map<SymbolId, int> child;
  int parent = -1;
  SymbolId in_sym = kNoSymbol;
  int depth = 0;
  bool accepting = false;
  int back = -1;  // nearest accepting proper ancestor
};

struct Trie {
  std::vector<TrieNode> nodes;

  Trie() { nodes.emplace_back(); }
  int step(int node, SymbolId a) const {
    auto it = nodes[node].child.find(a);
    return it == nodes[node].child.end() ? -1 : it->second;
  }
  // Farthest node reachable along u[lo..hi); second = symbols consumed.
  std::pair<int, int> walk(const TermString& u, int lo, int hi) const;
  int insert(const TermString& s);
  void link_back();
};

// Dense lookup row for one (lookahead, source-bit-set, nonterminal) triple.
// src[b] is the unique source bit that produced result bit b, or -2 when two
// distinct source bits did (an ambiguity the search must report).
struct TableEntry {
  std::uint16_t result_mask = 0;
  std::int8_t full_src = -1;
  std::int8_t src[12] = {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1};
};

inline constexpr int kMaxTableK = 12;

struct FirstKTables {
  int k = 0;
  int nt_base = 0;                 // terminal count; nonterminal ids start here
  std::vector<TermSet> first_sym;  // per symbol id
  std::vector<TermSet> follow;     // per nonterminal, offset by nt_base
  TermSet lookaheads;              // every string validation can ever see
  std::vector<TermString> la_list;
  std::map<TermString, int> la_index;

  std::vector<Trie> tk;  // per nonterminal
  Trie tg;
  // Per tg node: (offset, nonterminal) -> node of that nonterminal's trie
  // reached by the node's string from the offset on.
  std::vector<std::map<std::pair<int, SymbolId>, int>> cross;

  int table_k = -1;  // -1: no tables built
  std::vector<TableEntry> table;

  std::size_t trie_node_count = 0;
  std::size_t tg_node_count = 0;
  std::size_t cross_link_count = 0;
  std::size_t table_entry_count = 0;

  const TermSet& first_of(SymbolId s) const { return first_sym[s]; }
  const TermSet& follow_of(SymbolId nt) const;
  bool nullable(SymbolId nt) const { return first_sym[nt].count({}) > 0; }
  int la_index_of(const TermString& u) const;
};

// Fixpoint FIRST_k per symbol, the follow-style relevant-lookahead sets, and
// the union lookahead set. k = 0 degenerates to {eps} everywhere.
FirstKTables compute_first_k(const Grammar& g, int k);

// Per-nonterminal tries over FIRST_k plus the shared lookahead trie with
// cross links. No-op for k = 0.
void build_tries(const Grammar& g, FirstKTables& t);

// Dense (lookahead, mask, nonterminal) rows; requires 1 <= k <= kMaxTableK.
void build_prefix_tables(const Grammar& g, FirstKTables& t);

TermSet first_k_concat(const TermSet& a, const TermSet& b, int k);
TermSet first_k_of_string(const FirstKTables& t, const std::vector<SymbolId>& alpha);

// One step of the validity search: extend a set of matched lengths of the
// current lookahead u across one grammar symbol. bits bit b = "u[0..b)
// matched". full = all k symbols matched (possible only when |u| == k).
struct Extension {
  std::uint32_t bits = 0;
  bool full = false;
  std::int8_t full_src = -1;
  std::array<std::int8_t, kMaxK> src;

  Extension() { src.fill(-1); }
};

Extension extend_terminal(const FirstKTables& t, const TermString& u,
                          std::uint32_t bits, SymbolId a);
// Reference implementation straight over the FIRST_k sets.
Extension extend_nt_sets(const FirstKTables& t, const TermString& u,
                         std::uint32_t bits, SymbolId nt);
// Table lookup; la_idx = t.la_index_of(u), negative for unknown lookaheads
// (yields the empty extension, which routes into normal rejection).
Extension extend_nt_table(const FirstKTables& t, int la_idx, std::uint32_t bits,
                          SymbolId nt);
// Trie walk; tg_node is the lookahead trie cursor for u (-1 when u left the
// trie, in which case every hop falls back to a direct walk).
Extension extend_nt_trie(const FirstKTables& t, const TermString& u, int tg_node,
                         std::uint32_t bits, SymbolId nt);

// Cursor for the current lookahead, -1 when u is not a known prefix.
int tg_cursor(const FirstKTables& t, const TermString& u);

}  // namespace extlr

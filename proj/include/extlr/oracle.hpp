#pragma once

#include <set>
#include <utility>
#include <vector>

#include "extlr/grammar.hpp"

// Small brute-force reference implementations used by the tests to check the
// real machinery. Correct and simple over fast; all of them carry explicit
// budgets and report when a budget cut anything off.

namespace extlr {

struct TreeNode {
  int prod;
  std::vector<TreeNode> kids;  // one per nonterminal in the rhs, in order
};

struct EnumResult {
  std::vector<TreeNode> trees;  // at most tree_cap + 1 entries
  bool inconclusive = false;    // a budget or a derivation cycle cut trees off
};

// All parse trees of w from the start symbol.
EnumResult enumerate_derivations(const Grammar& g, const std::vector<SymbolId>& w,
                                 std::size_t tree_cap, long step_cap = 2000000);

// Production indices of the reversed rightmost derivation encoded by a tree.
std::vector<int> reversed_rightmost(const TreeNode& t);

// Replays prods as a reversed rightmost derivation and checks it yields w.
bool replay_derivation(const Grammar& g, const std::vector<SymbolId>& w,
                       const std::vector<int>& prods);

bool earley_recognize(const Grammar& g, const std::vector<SymbolId>& w);

// One pushdown configuration: stack bottom..top, then the current state last.
// Each element is an item (production index, dot position).
using MgConfig = std::vector<std::pair<int, int>>;

struct MgExplore {
  // phases[i] = all configurations reachable with exactly i tokens consumed,
  // closed under expansion and reduction moves, stack depth <= stack_cap.
  std::vector<std::set<MgConfig>> phases;
  bool accepted = false;
  bool truncated = false;  // depth or step budget may have lost configurations
};

MgExplore explore_mg(const Grammar& g, const std::vector<SymbolId>& w,
                     int stack_cap, long step_cap = 1000000);

struct FirstEnum {
  TermSet strings;
  bool inconclusive = false;
};

// Enumerates k-prefixes of terminal yields directly from the definition.
FirstEnum enumerate_first_k(const Grammar& g, SymbolId x, int k,
                            long step_cap = 2000000);
FirstEnum enumerate_first_k_seq(const Grammar& g,
                                const std::vector<SymbolId>& alpha, int k,
                                long step_cap = 2000000);

// Size of the canonical LR(0) state set, or -1 once it exceeds cap.
long count_lr0_states(const Grammar& g, long cap);

// Words of the language up to max_len, shortlex order. *complete tells
// whether the enumeration drained (false once max_count or a budget hit).
std::vector<TermString> language_words(const Grammar& g, int max_len,
                                       std::size_t max_count,
                                       bool* complete = nullptr);

}  // namespace extlr

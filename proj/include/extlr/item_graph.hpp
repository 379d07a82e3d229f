#pragma once

#include <cstdint>
#include <set>
#include <unordered_set>
#include <vector>

#include "extlr/grammar.hpp"

namespace extlr {

// Shared graph arena for the recognizer and the parser. Nodes are dotted
// items (plus expansion variables in the parser); edges run from the root
// toward the stack tops, so a path spells out one pushdown configuration
// and the nodes that never grew an out-edge are the current states.
// Node ids are never reused; a re-created identity is a fresh node.
struct ItemGraph {
  struct Node {
    int prod = 0;
    int dot = 0;
    SymbolId var = kNoSymbol;
    int phase = 0;
    bool is_var = false;
    bool alive = false;
    bool ever_out = false;
    int alive_out = 0;
    std::vector<int> out, in;  // append-only; liveness lives on the nodes
  };

  std::vector<Node> nodes;
  std::set<int> ends;  // alive item nodes that never had an out-edge
  std::unordered_set<std::uint64_t> edge_seen;
  std::size_t nodes_created = 0;
  std::size_t edges_created = 0;
  std::size_t alive_nodes = 0;
  std::size_t alive_edges = 0;

  int new_item(int prod, int dot, int phase);
  int new_var(SymbolId a, int phase);
  // False when the edge was already added once (even to a now-dead pair).
  bool add_edge(int from, int to);
  // Adds from's live in-edges to `to` as well. Callers either keep `from`
  // (forking the stack) or remove it right after (advancing it).
  void copy_in_edges(int from, int to);
  // Removes a node and cascades upward through nodes left without any live
  // out-edge; they can no longer reach a stack top.
  void remove(int id);
  void advance_in_place(int id, int new_phase);

  bool is_end(int id) const { return ends.count(id) > 0; }
};

}  // namespace extlr

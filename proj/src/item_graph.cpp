#include "extlr/item_graph.hpp"

namespace extlr {

int ItemGraph::new_item(int prod, int dot, int phase) {
  int id = static_cast<int>(nodes.size());
  Node n;
  n.prod = prod;
  n.dot = dot;
  n.phase = phase;
  n.alive = true;
  nodes.push_back(std::move(n));
  ++nodes_created;
  ++alive_nodes;
  ends.insert(id);
  return id;
}

int ItemGraph::new_var(SymbolId a, int phase) {
  int id = static_cast<int>(nodes.size());
  Node n;
  n.var = a;
  n.phase = phase;
  n.is_var = true;
  n.alive = true;
  nodes.push_back(std::move(n));
  ++nodes_created;
  ++alive_nodes;
  // variables are never states, only stack interior
  return id;
}

bool ItemGraph::add_edge(int from, int to) {
  std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
                      static_cast<std::uint32_t>(to);
  if (!edge_seen.insert(key).second) return false;
  nodes[from].out.push_back(to);
  nodes[to].in.push_back(from);
  ++edges_created;
  ++alive_edges;
  if (!nodes[from].ever_out) {
    nodes[from].ever_out = true;
    ends.erase(from);
  }
  ++nodes[from].alive_out;
  return true;
}

void ItemGraph::copy_in_edges(int from, int to) {
  std::size_t limit = nodes[from].in.size();
  for (std::size_t i = 0; i < limit; ++i) {
    int src = nodes[from].in[i];
    if (nodes[src].alive) add_edge(src, to);
  }
}

void ItemGraph::remove(int id) {
  std::vector<int> work{id};
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    Node& n = nodes[v];
    if (!n.alive) continue;
    n.alive = false;
    --alive_nodes;
    ends.erase(v);
    alive_edges -= static_cast<std::size_t>(n.alive_out);
    for (int s : n.in) {
      Node& src = nodes[s];
      if (!src.alive) continue;
      --src.alive_out;
      --alive_edges;
      if (src.alive_out == 0) work.push_back(s);  // starved of stack tops
    }
  }
}

void ItemGraph::advance_in_place(int id, int new_phase) {
  Node& n = nodes[id];
  ++n.dot;
  n.phase = new_phase;
  ++nodes_created;  // counts as an insertion into the new phase
}

}  // namespace extlr

#include "extlr/simulate.hpp"

#include <deque>
#include <map>
#include <ostream>

#include "extlr/item_graph.hpp"

namespace extlr {

namespace {

struct Sim {
  const Grammar& g;
  ItemGraph gr;
  int phase = 0;
  std::map<std::pair<int, int>, int> ids;  // identity -> node, current phase
  std::deque<int> expand_work;
  std::deque<std::pair<int, int>> reduce_work;  // (parent item, finished child)

  explicit Sim(const Grammar& gr_in) : g(gr_in) {
    int root = gr.new_item(0, 0, 0);
    ids[{0, 0}] = root;
    classify(root);
  }

  const Production& prod_of(int v) const { return g.prod(gr.nodes[v].prod); }

  bool complete(int v) const {
    const auto& n = gr.nodes[v];
    return n.dot == static_cast<int>(g.prod(n.prod).rhs.size());
  }

  SymbolId after_dot(int v) const {
    const auto& n = gr.nodes[v];
    const auto& rhs = g.prod(n.prod).rhs;
    return n.dot < static_cast<int>(rhs.size()) ? rhs[n.dot] : kNoSymbol;
  }

  void classify(int v) {
    SymbolId s = after_dot(v);
    if (s != kNoSymbol && g.is_nonterminal(s)) expand_work.push_back(v);
    if (complete(v) && gr.nodes[v].prod != 0) {
      // replay pending reductions for edges that predate completion
      std::size_t limit = gr.nodes[v].in.size();
      for (std::size_t i = 0; i < limit; ++i) {
        int w = gr.nodes[v].in[i];
        if (gr.nodes[w].alive) reduce_work.push_back({w, v});
      }
    }
  }

  int find_or_create(int prod, int dot) {
    auto key = std::make_pair(prod, dot);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = gr.new_item(prod, dot, phase);
    ids[key] = id;
    classify(id);
    return id;
  }

  void link(int from, int to) {
    if (!gr.add_edge(from, to)) return;
    if (complete(to) && gr.nodes[to].prod != 0) {
      reduce_work.push_back({from, to});
      return;
    }
    // `to` may already have advanced through a finished child; a late parent
    // edge has to reach the advanced copy as well
    bool has_done_child = false;
    for (int t : gr.nodes[to].out) {
      if (gr.nodes[t].alive && complete(t) && gr.nodes[t].prod != 0) {
        has_done_child = true;
        break;
      }
    }
    if (has_done_child) {
      auto it = ids.find({gr.nodes[to].prod, gr.nodes[to].dot + 1});
      if (it != ids.end()) link(from, it->second);
    }
  }

  void saturate() {
    while (!expand_work.empty() || !reduce_work.empty()) {
      if (!expand_work.empty()) {
        int v = expand_work.front();
        expand_work.pop_front();
        if (!gr.nodes[v].alive) continue;
        SymbolId c = after_dot(v);
        for (int q : g.productions_of(c)) link(v, find_or_create(q, 0));
        continue;
      }
      auto [parent, child] = reduce_work.front();
      reduce_work.pop_front();
      if (!gr.nodes[parent].alive || !gr.nodes[child].alive) continue;
      int tgt = find_or_create(gr.nodes[parent].prod, gr.nodes[parent].dot + 1);
      std::size_t limit = gr.nodes[parent].in.size();
      for (std::size_t i = 0; i < limit; ++i) {
        int w = gr.nodes[parent].in[i];
        if (gr.nodes[w].alive) link(w, tgt);
      }
    }
  }

  void read_step(SymbolId a) {
    std::vector<int> cur(gr.ends.begin(), gr.ends.end());
    std::map<std::pair<int, int>, int> next;
    int np = phase + 1;
    for (int e : cur) {
      if (!gr.nodes[e].alive) continue;
      if (after_dot(e) == a) {
        gr.advance_in_place(e, np);
        next[{gr.nodes[e].prod, gr.nodes[e].dot}] = e;
      } else {
        gr.remove(e);
      }
    }
    phase = np;
    ids = std::move(next);
    for (auto& [key, id] : ids) classify(id);
  }

  bool accepted() const {
    auto it = ids.find({0, 1});
    return it != ids.end() && gr.nodes[it->second].alive;
  }

  std::set<MgConfig> configs(int cap) const {
    std::set<MgConfig> out;
    MgConfig path;
    auto dfs = [&](auto&& self, int v) -> void {
      path.push_back({gr.nodes[v].prod, gr.nodes[v].dot});
      if (gr.nodes[v].phase == phase) out.insert(path);
      if (static_cast<int>(path.size()) <= cap) {
        for (int t : gr.nodes[v].out) {
          if (gr.nodes[t].alive) self(self, t);
        }
      }
      path.pop_back();
    };
    for (std::size_t v = 0; v < gr.nodes.size(); ++v) {
      if (gr.nodes[v].alive && gr.nodes[v].in.empty()) dfs(dfs, static_cast<int>(v));
    }
    return out;
  }
};

}  // namespace

bool simulate(const Grammar& g, const std::vector<SymbolId>& input,
              const SimOptions& opts, SimStats* stats) {
  Sim sim(g);
  int n = static_cast<int>(input.size());
  if (stats) stats->per_phase_created.clear();
  std::size_t mark = 0;
  for (int i = 0;; ++i) {
    sim.saturate();
    if (stats) {
      stats->per_phase_created.push_back(sim.gr.nodes_created - mark);
      mark = sim.gr.nodes_created;
    }
    if (opts.trace && opts.trace_out) {
      (*opts.trace_out) << "phase=" << i << " nodes=" << sim.gr.alive_nodes
                        << " edges=" << sim.gr.alive_edges
                        << " ends=" << sim.gr.ends.size() << "\n";
    }
    if (i == n) break;
    sim.read_step(input[i]);
  }
  if (stats) {
    stats->nodes_created = sim.gr.nodes_created;
    stats->edges_created = sim.gr.edges_created;
  }
  return sim.accepted();
}

std::vector<std::set<MgConfig>> simulate_stacks(const Grammar& g,
                                                const std::vector<SymbolId>& input,
                                                int max_stack) {
  Sim sim(g);
  std::vector<std::set<MgConfig>> out;
  int n = static_cast<int>(input.size());
  for (int i = 0;; ++i) {
    sim.saturate();
    out.push_back(sim.configs(max_stack));
    if (i == n) break;
    sim.read_step(input[i]);
  }
  return out;
}

}  // namespace extlr

#include "extlr/extparser.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "extlr/item_graph.hpp"

namespace extlr {

std::string item_text(const Grammar& g, int prod, int dot) {
  const Production& p = g.prod(prod);
  std::string out = g.name(p.lhs);
  out += " ->";
  for (int i = 0; i < static_cast<int>(p.rhs.size()); ++i) {
    if (i == dot) out += " .";
    out += ' ';
    out += g.name(p.rhs[i]);
  }
  if (dot == static_cast<int>(p.rhs.size())) out += " .";
  return out;
}

namespace {

struct ConflictSignal {
  std::string detail;
};

// Per-node lookahead summary: for each matched prefix length, the set of end
// nodes with a stack walk through this node matching exactly that prefix.
struct LaBits {
  std::array<std::set<int>, kMaxK + 1> owners;
  bool operator==(const LaBits& o) const { return owners == o.owners; }
  bool any() const {
    for (const auto& s : owners)
      if (!s.empty()) return true;
    return false;
  }
};

struct Parser {
  const Grammar& g;
  const FirstKTables& T;
  const std::vector<SymbolId>& in;
  const ParseOptions& opts;

  ItemGraph gr;
  int k;
  int n;
  int phase = 0;
  int items_total = 0;
  std::vector<int> emitted;
  std::map<std::pair<int, int>, int> item_ids;  // (prod, dot) -> node, current phase
  std::map<SymbolId, int> var_ids;              // var symbol -> node, current phase
  std::set<SymbolId> stash;  // terminals pruned while handling the current token
  bool eof_viable = false;   // a rejected reduce could have finished the input
  std::size_t ld_cap = 0;
  std::size_t searches = 0;
  std::size_t search_visits = 0;

  // search scratch
  TermString u;
  int m = 0;
  int la_idx = -1;
  int cursor = -1;
  std::set<int> validated;
  std::unordered_map<int, LaBits> L;

  Parser(const Grammar& g_, const FirstKTables& t_, const std::vector<SymbolId>& in_,
         const ParseOptions& o_)
      : g(g_), T(t_), in(in_), opts(o_) {
    k = t_.k;
    n = static_cast<int>(in_.size());
    for (int p = 0; p <= g.production_count(); ++p)
      items_total += static_cast<int>(g.prod(p).rhs.size()) + 1;
    ld_cap = static_cast<std::size_t>(n + 2) * (items_total + 2) + 64;
  }

  std::size_t node_budget() const {
    return 64 +
           12u * (items_total + g.nonterminal_count() + 2) *
               static_cast<std::size_t>(n + 2) +
           12u * (emitted.size() + 2);
  }

  void check_budget() {
    if (gr.nodes_created > node_budget())
      throw ConflictSignal{"node budget exceeded"};
  }

  SymbolId after_dot(int id) const {
    const auto& nd = gr.nodes[id];
    const auto& rhs = g.prod(nd.prod).rhs;
    if (nd.dot >= static_cast<int>(rhs.size())) return kNoSymbol;
    return rhs[nd.dot];
  }

  bool is_reducible(int id) const {
    const auto& nd = gr.nodes[id];
    return nd.prod != 0 && after_dot(id) == kNoSymbol;
  }
  bool is_readable(int id) const {
    SymbolId s = after_dot(id);
    return s != kNoSymbol && g.is_terminal(s);
  }
  bool is_expansible(int id) const {
    SymbolId s = after_dot(id);
    return s != kNoSymbol && g.is_nonterminal(s);
  }

  int find_item(int prod, int dot) {
    auto key = std::make_pair(prod, dot);
    auto it = item_ids.find(key);
    if (it != item_ids.end() && gr.nodes[it->second].alive) return it->second;
    int id = gr.new_item(prod, dot, phase);
    check_budget();
    item_ids[key] = id;
    return id;
  }

  int find_var(SymbolId a) {
    auto it = var_ids.find(a);
    if (it != var_ids.end() && gr.nodes[it->second].alive) return it->second;
    int id = gr.new_var(a, phase);
    check_budget();
    var_ids[a] = id;
    return id;
  }

  std::string candidate_text(int id) const {
    if (is_reducible(id)) return "reduce " + g.production_text(gr.nodes[id].prod);
    if (is_readable(id)) return "read " + std::string(g.name(after_dot(id)));
    return "item " + item_text(g, gr.nodes[id].prod, gr.nodes[id].dot);
  }

  // ---- expansion -------------------------------------------------------

  void expand(int e) {
    SymbolId C = after_dot(e);
    SymbolId next = phase < n ? in[phase] : kNoSymbol;
    std::vector<int> usable;
    for (int q : g.productions_of(C)) {
      const auto& rhs = g.prod(q).rhs;
      if (rhs.empty() || g.is_nonterminal(rhs[0]) || rhs[0] == next) {
        usable.push_back(q);
      } else {
        stash.insert(rhs[0]);
      }
    }
    if (usable.empty()) {
      gr.remove(e);
      return;
    }
    int v = find_var(C);
    gr.add_edge(e, v);
    for (int q : usable) gr.add_edge(v, find_item(q, 0));
  }

  void normalize() {
    for (;;) {
      int e = -1;
      for (int id : gr.ends) {
        if (is_expansible(id)) {
          e = id;
          break;
        }
      }
      if (e < 0) break;
      expand(e);
    }
  }

  // ---- reduction -------------------------------------------------------

  void apply_reduce(int e) {
    emitted.push_back(gr.nodes[e].prod);
    if (emitted.size() > ld_cap)
      throw ConflictSignal{"derivation length limit exceeded"};

    // The reducing end is consumed; its identity must not soak up parent
    // advances within this very reduction.
    auto self = item_ids.find({gr.nodes[e].prod, gr.nodes[e].dot});
    if (self != item_ids.end() && self->second == e) item_ids.erase(self);

    // A valid reduction is the unique next action; every other end is a
    // dead branch of the nondeterministic machine.
    std::vector<int> others(gr.ends.begin(), gr.ends.end());
    for (int o : others) {
      if (o == e || !gr.nodes[o].alive) continue;
      if (is_readable(o)) stash.insert(after_dot(o));
      gr.remove(o);
    }

    std::vector<int> evars;
    for (int vn : gr.nodes[e].in)
      if (gr.nodes[vn].alive && gr.nodes[vn].is_var) evars.push_back(vn);

    for (int v : evars) {
      bool survivors = false;
      for (int c : gr.nodes[v].out)
        if (c != e && gr.nodes[c].alive) survivors = true;
      std::vector<int> parents;
      for (int o : gr.nodes[v].in)
        if (gr.nodes[o].alive) parents.push_back(o);
      for (int o : parents) {
        int tgt = find_item(gr.nodes[o].prod, gr.nodes[o].dot + 1);
        gr.copy_in_edges(o, tgt);
        if (!survivors) gr.remove(o);  // nothing else below: a move, not a fork
      }
    }
    gr.remove(e);
    micro_prune();
    check_budget();
  }

  // Drop ends whose dot terminal cannot be the next token.
  void micro_prune() {
    std::vector<int> cur(gr.ends.begin(), gr.ends.end());
    for (int id : cur) {
      if (!gr.nodes[id].alive) continue;
      SymbolId s = after_dot(id);
      if (s == kNoSymbol || g.is_nonterminal(s)) continue;
      if (phase >= n || s != in[phase]) {
        stash.insert(s);
        gr.remove(id);
      }
    }
  }

  // ---- reading ---------------------------------------------------------

  void apply_read() {
    SymbolId a = in[phase];
    int np = phase + 1;
    std::vector<int> cur(gr.ends.begin(), gr.ends.end());
    std::map<std::pair<int, int>, int> next_items;
    for (int id : cur) {
      if (!gr.nodes[id].alive) continue;
      if (after_dot(id) == a) {
        gr.advance_in_place(id, np);
        next_items[{gr.nodes[id].prod, gr.nodes[id].dot}] = id;
      } else {
        gr.remove(id);
      }
    }
    phase = np;
    item_ids = std::move(next_items);
    var_ids.clear();
    stash.clear();
    eof_viable = false;
    check_budget();
    micro_prune();
  }

  // ---- lookahead search ------------------------------------------------

  Extension step(SymbolId sym, std::uint32_t mask) const {
    if (g.is_terminal(sym)) return extend_terminal(T, u, mask, sym);
    if (opts.strategy == Strategy::Table) return extend_nt_table(T, la_idx, mask, sym);
    return extend_nt_trie(T, u, cursor, mask, sym);
  }

  LaBits extend_seq(LaBits cur, const std::vector<SymbolId>& rhs, int from) {
    for (int i = from; i < static_cast<int>(rhs.size()); ++i) {
      if (!cur.any()) break;
      LaBits nxt;
      for (int b = 0; b <= m; ++b) {
        const std::set<int>& who = cur.owners[b];
        if (who.empty()) continue;
        Extension ex = step(rhs[i], 1u << b);
        if (ex.full) validated.insert(who.begin(), who.end());
        for (int t = 0; t <= m; ++t)
          if (ex.bits & (1u << t)) nxt.owners[t].insert(who.begin(), who.end());
      }
      cur = nxt;
    }
    return cur;
  }

  LaBits compute(int v) {
    ++search_visits;
    LaBits out;
    const auto& nd = gr.nodes[v];
    if (nd.is_var) {
      for (int c : nd.out) {
        if (!gr.nodes[c].alive) continue;
        auto it = L.find(c);
        if (it == L.end()) continue;
        for (int b = 0; b <= m; ++b)
          out.owners[b].insert(it->second.owners[b].begin(),
                               it->second.owners[b].end());
      }
      return out;
    }
    const auto& rhs = g.prod(nd.prod).rhs;
    if (gr.is_end(v)) {
      if (nd.prod == 0) return out;  // accepting item, not a candidate
      LaBits seed;
      seed.owners[0].insert(v);
      if (is_reducible(v)) return seed;  // empty tail, pass through as is
      // Readable and expansible alike: extend across the unconsumed tail.
      // For an expansible end a full match means some stack below it could
      // act validly, which is what conflict detection must see.
      return extend_seq(seed, rhs, nd.dot);
    }
    // Interior item: its expansion var carries the walks from below; extend
    // them by the tail after the dot symbol.
    int var = -1;
    for (int c : nd.out)
      if (gr.nodes[c].alive) var = c;
    if (var < 0) return out;
    auto it = L.find(var);
    if (it == L.end()) return out;
    return extend_seq(it->second, rhs, nd.dot + 1);
  }

  // Assumes u, m, la_idx, cursor are set. Fills L and validated.
  void do_search() {
    ++searches;
    validated.clear();
    L.clear();
    tarjan_from_root();
    if (m < k) {
      // u is the whole remaining input; a walk that matched all of it and
      // surfaced at the root can run the input out exactly.
      auto it = L.find(0);
      if (it != L.end())
        validated.insert(it->second.owners[m].begin(), it->second.owners[m].end());
    }
  }

  void run_search() {
    u.clear();
    for (int i = phase; i < n && i < phase + k; ++i) u.push_back(in[i]);
    m = static_cast<int>(u.size());
    set_cursors();
    do_search();
  }

  void set_cursors() {
    la_idx = -1;
    cursor = -1;
    if (opts.strategy == Strategy::Table) {
      if (T.table_k != k) throw std::logic_error("prefix tables not built");
      la_idx = T.la_index_of(u);
    } else {
      if (T.tk.empty()) throw std::logic_error("tries not built");
      cursor = tg_cursor(T, u);
    }
  }

  // Would some reduce chain run the graph to acceptance with no more input?
  // Only consulted for error reporting after the real search rejected.
  bool probe_eof_viable() {
    u.clear();
    m = 0;
    set_cursors();
    do_search();
    return !validated.empty();
  }

  // Which single tokens would have let some end validate? Fills in expected
  // tokens the pruning bookkeeping alone cannot see, such as a read sitting
  // above a rejected reduce.
  void probe_next_tokens() {
    for (SymbolId x = 0; x < g.terminal_count(); ++x) {
      if (stash.count(x)) continue;
      u.assign(1, x);
      m = 1;
      set_cursors();
      do_search();
      if (!validated.empty()) stash.insert(x);
    }
  }

  void tarjan_from_root() {
    if (!gr.nodes[0].alive) throw std::logic_error("root died");
    std::unordered_map<int, int> index, lowlink;
    std::vector<int> stack;
    std::set<int> on_stack;
    int next_index = 0;

    struct Frame {
      int v;
      std::size_t child = 0;
    };
    std::vector<Frame> call;
    call.push_back({0});
    index[0] = lowlink[0] = next_index++;
    stack.push_back(0);
    on_stack.insert(0);

    while (!call.empty()) {
      Frame& f = call.back();
      const auto& out = gr.nodes[f.v].out;
      bool descended = false;
      while (f.child < out.size()) {
        int w = out[f.child++];
        if (!gr.nodes[w].alive) continue;
        auto it = index.find(w);
        if (it == index.end()) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack.insert(w);
          call.push_back({w});
          descended = true;
          break;
        }
        if (on_stack.count(w))
          lowlink[f.v] = std::min(lowlink[f.v], it->second);
      }
      if (descended) continue;
      int v = f.v;
      call.pop_back();
      if (!call.empty())
        lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
      if (lowlink[v] == index[v]) {
        std::vector<int> scc;
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          scc.push_back(w);
          if (w == v) break;
        }
        settle_scc(scc);
      }
    }
  }

  void settle_scc(const std::vector<int>& scc) {
    if (scc.size() == 1) {
      // An item never links itself (edges alternate item and var), so a
      // singleton component is acyclic.
      L[scc[0]] = compute(scc[0]);
      return;
    }
    for (int v : scc) L[v];  // default-init members
    std::size_t cap =
        4 + static_cast<std::size_t>(k + 1) * scc.size() * (gr.ends.size() + 2);
    for (std::size_t sweep = 0;; ++sweep) {
      if (sweep > cap)
        throw ConflictSignal{"lookahead fixpoint failed to stabilize"};
      bool changed = false;
      for (int v : scc) {
        LaBits nb = compute(v);
        if (!(nb == L[v])) {
          L[v] = std::move(nb);
          changed = true;
        }
      }
      if (!changed) break;
    }
  }

  // ---- decision loop ---------------------------------------------------

  void classify(std::vector<int>& red, std::vector<int>& readable,
                std::vector<int>& expansible) const {
    red.clear();
    readable.clear();
    expansible.clear();
    for (int id : gr.ends) {
      if (is_reducible(id))
        red.push_back(id);
      else if (is_readable(id))
        readable.push_back(id);
      else if (is_expansible(id))
        expansible.push_back(id);
    }
  }

  void subloop() {
    std::vector<int> red, readable, expansible;
    for (;;) {
      classify(red, readable, expansible);
      if (!red.empty()) {
        if (k == 0) {
          // With no lookahead a reduce must be the only possible move.
          if (red.size() > 1)
            throw ConflictSignal{candidate_text(red[0]) + " vs " +
                                 candidate_text(red[1])};
          if (!readable.empty())
            throw ConflictSignal{candidate_text(red[0]) + " vs " +
                                 candidate_text(readable[0])};
          if (!expansible.empty())
            throw ConflictSignal{candidate_text(red[0]) + " vs " +
                                 candidate_text(expansible[0])};
          apply_reduce(red[0]);
          continue;
        }
        run_search();
        std::vector<int> vred, vother;
        for (int id : red)
          if (validated.count(id)) vred.push_back(id);
        for (int id : readable)
          if (validated.count(id)) vother.push_back(id);
        for (int id : expansible)
          if (validated.count(id)) vother.push_back(id);
        if (vred.size() > 1)
          throw ConflictSignal{candidate_text(vred[0]) + " vs " +
                               candidate_text(vred[1])};
        if (vred.size() == 1 && !vother.empty())
          throw ConflictSignal{candidate_text(vred[0]) + " vs " +
                               candidate_text(vother[0])};
        if (vred.size() == 1) {
          apply_reduce(vred[0]);
          continue;
        }
        // No reduce goes with this lookahead: those ends are dead branches.
        if (m > 0 && probe_eof_viable()) eof_viable = true;
        probe_next_tokens();
        for (int id : red)
          if (gr.nodes[id].alive) gr.remove(id);
        continue;
      }
      if (!expansible.empty()) {
        normalize();
        continue;
      }
      break;
    }
  }

  // ---- invariants ------------------------------------------------------

  void verify_graph() const {
    std::size_t alive_n = 0, alive_e = 0;
    for (int id = 0; id < static_cast<int>(gr.nodes.size()); ++id) {
      const auto& nd = gr.nodes[id];
      if (!nd.alive) continue;
      ++alive_n;
      int out_alive = 0;
      for (int c : nd.out)
        if (gr.nodes[c].alive) ++out_alive;
      alive_e += out_alive;
      if (out_alive != nd.alive_out) throw std::logic_error("alive_out stale");
      if (nd.is_var) {
        if (out_alive == 0) throw std::logic_error("childless var survived");
        for (int c : nd.out) {
          if (!gr.nodes[c].alive) continue;
          if (gr.nodes[c].is_var) throw std::logic_error("var child of var");
          if (g.prod(gr.nodes[c].prod).lhs != nd.var)
            throw std::logic_error("child lhs mismatch");
        }
        bool any_in = false;
        for (int p : nd.in) {
          if (!gr.nodes[p].alive) continue;
          any_in = true;
          if (gr.nodes[p].is_var) throw std::logic_error("var parent of var");
          if (after_dot(p) != nd.var)
            throw std::logic_error("parent dot symbol mismatch");
        }
        if (!any_in) throw std::logic_error("orphan var survived");
      } else {
        if (out_alive > 1) throw std::logic_error("item with two expansions");
        for (int c : nd.out) {
          if (!gr.nodes[c].alive) continue;
          if (!gr.nodes[c].is_var) throw std::logic_error("item child not var");
          if (gr.nodes[c].var != after_dot(id))
            throw std::logic_error("expansion symbol mismatch");
        }
        bool is_e = gr.is_end(id);
        if (is_e != (out_alive == 0 && !nd.ever_out))
          throw std::logic_error("end set stale");
        if (is_e) {
          bool aug = nd.prod == 0 && nd.dot == 1;
          bool ok_read = phase < n && after_dot(id) == in[phase];
          if (!aug && !ok_read)
            throw std::logic_error("stable end neither accepting nor readable");
        }
      }
    }
    if (alive_n != gr.alive_nodes) throw std::logic_error("alive node count stale");
    if (alive_e != gr.alive_edges) throw std::logic_error("alive edge count stale");
  }

  // ---- driver ----------------------------------------------------------

  void trace_line() const {
    if (!opts.trace || opts.trace_out == nullptr) return;
    *opts.trace_out << "phase=" << phase << " nodes=" << gr.alive_nodes
                    << " edges=" << gr.alive_edges << " ends=" << gr.ends.size()
                    << "\n";
  }

  bool aug_alive() const {
    auto it = item_ids.find({0, 1});
    return it != item_ids.end() && gr.nodes[it->second].alive;
  }

  SyntaxError make_syntax_error() const {
    SyntaxError e;
    e.token_pos = phase + 1;
    e.expected.assign(stash.begin(), stash.end());
    e.expect_eof = aug_alive() || eof_viable;
    return e;
  }

  ParseResult run() {
    item_ids[{0, 0}] = gr.new_item(0, 0, 0);
    try {
      for (;;) {
        subloop();
        if (opts.check_invariants) verify_graph();
        trace_line();
        if (phase == n) {
          if (aug_alive()) return Derivation{emitted};
          return make_syntax_error();
        }
        bool any_readable = false;
        for (int id : gr.ends)
          if (is_readable(id)) any_readable = true;
        if (!any_readable) return make_syntax_error();
        apply_read();
      }
    } catch (const ConflictSignal& c) {
      ConflictError err;
      err.k = k;
      err.token_pos = phase + 1;
      err.detail = c.detail;
      return err;
    }
  }
};

}  // namespace

ParseResult ext_parse(const Grammar& g, const FirstKTables& tables,
                      const std::vector<SymbolId>& input,
                      const ParseOptions& opts, ParseStats* stats) {
  Parser p(g, tables, input, opts);
  ParseResult r = p.run();
  if (stats != nullptr) {
    stats->nodes_created = p.gr.nodes_created;
    stats->edges_created = p.gr.edges_created;
    stats->searches = p.searches;
    stats->search_visits = p.search_visits;
  }
  return r;
}

}  // namespace extlr

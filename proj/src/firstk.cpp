#include "extlr/firstk.hpp"

#include <algorithm>

namespace extlr {

std::pair<int, int> Trie::walk(const TermString& u, int lo, int hi) const {
  int node = 0;
  int used = 0;
  for (int i = lo; i < hi; ++i) {
    int nxt = step(node, u[i]);
    if (nxt < 0) break;
    node = nxt;
    ++used;
  }
  return {node, used};
}

int Trie::insert(const TermString& s) {
  int node = 0;
  for (SymbolId a : s) {
    int nxt = step(node, a);
    if (nxt < 0) {
      nxt = static_cast<int>(nodes.size());
      nodes.emplace_back();
      nodes[nxt].parent = node;
      nodes[nxt].in_sym = a;
      nodes[nxt].depth = nodes[node].depth + 1;
      nodes[node].child[a] = nxt;
    }
    node = nxt;
  }
  nodes[node].accepting = true;
  return node;
}

void Trie::link_back() {
  // Nodes are created parent before child, so one forward pass settles it.
  nodes[0].back = -1;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    int p = nodes[i].parent;
    nodes[i].back = nodes[p].accepting ? p : nodes[p].back;
  }
}

const TermSet& FirstKTables::follow_of(SymbolId nt) const {
  return follow[nt - nt_base];
}

int FirstKTables::la_index_of(const TermString& u) const {
  auto it = la_index.find(u);
  return it == la_index.end() ? -1 : it->second;
}

TermSet first_k_concat(const TermSet& a, const TermSet& b, int k) {
  TermSet out;
  for (const auto& x : a) {
    if (static_cast<int>(x.size()) >= k) {
      out.insert(TermString(x.begin(), x.begin() + k));
      continue;
    }
    for (const auto& y : b) {
      TermString z = x;
      for (SymbolId s : y) {
        if (static_cast<int>(z.size()) >= k) break;
        z.push_back(s);
      }
      out.insert(std::move(z));
    }
  }
  return out;
}

TermSet first_k_of_string(const FirstKTables& t, const std::vector<SymbolId>& alpha) {
  TermSet f{{}};
  for (SymbolId s : alpha) f = first_k_concat(f, t.first_sym[s], t.k);
  return f;
}

FirstKTables compute_first_k(const Grammar& g, int k) {
  FirstKTables t;
  t.k = k;
  t.nt_base = g.terminal_count();
  t.first_sym.assign(g.symbols().size(), {});
  t.follow.assign(g.nonterminal_count(), {});

  if (k == 0) {
    for (auto& s : t.first_sym) s.insert(TermString{});
    for (auto& s : t.follow) s.insert(TermString{});
    t.lookaheads.insert(TermString{});
  } else {
    for (SymbolId a = 0; a < g.terminal_count(); ++a) {
      t.first_sym[a].insert({a});
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (int pi = 1; pi <= g.production_count(); ++pi) {
        const Production& p = g.prod(pi);
        for (const auto& x : first_k_of_string(t, p.rhs)) {
          changed |= t.first_sym[p.lhs].insert(x).second;
        }
      }
    }

    auto follow_of = [&](SymbolId lhs) -> TermSet {
      if (lhs == kAugmented) return TermSet{{}};
      return t.follow[lhs - t.nt_base];
    };
    changed = true;
    while (changed) {
      changed = false;
      for (int pi = 0; pi <= g.production_count(); ++pi) {
        const Production& p = g.prod(pi);
        for (std::size_t d = 0; d < p.rhs.size(); ++d) {
          SymbolId a = p.rhs[d];
          if (!g.is_nonterminal(a)) continue;
          std::vector<SymbolId> tail(p.rhs.begin() + d + 1, p.rhs.end());
          TermSet add =
              first_k_concat(first_k_of_string(t, tail), follow_of(p.lhs), k);
          for (const auto& x : add) {
            changed |= t.follow[a - t.nt_base].insert(x).second;
          }
        }
      }
    }
    // Every string any item validation can see: FIRST_k of a production
    // suffix glued to the left side's follow set.
    for (int pi = 0; pi <= g.production_count(); ++pi) {
      const Production& p = g.prod(pi);
      for (std::size_t d = 0; d <= p.rhs.size(); ++d) {
        std::vector<SymbolId> tail(p.rhs.begin() + d, p.rhs.end());
        TermSet add =
            first_k_concat(first_k_of_string(t, tail), follow_of(p.lhs), k);
        t.lookaheads.insert(add.begin(), add.end());
      }
    }
  }

  t.la_list.assign(t.lookaheads.begin(), t.lookaheads.end());
  for (int i = 0; i < static_cast<int>(t.la_list.size()); ++i) {
    t.la_index[t.la_list[i]] = i;
  }
  return t;
}

void build_tries(const Grammar& g, FirstKTables& t) {
  if (t.k == 0) return;
  t.tk.assign(g.nonterminal_count(), Trie{});
  for (int i = 0; i < g.nonterminal_count(); ++i) {
    for (const auto& s : t.first_sym[t.nt_base + i]) t.tk[i].insert(s);
    t.tk[i].link_back();
    t.trie_node_count += t.tk[i].nodes.size();
  }
  t.tg = Trie{};
  for (const auto& u : t.lookaheads) t.tg.insert(u);
  t.tg.link_back();
  t.tg_node_count = t.tg.nodes.size();

  t.cross.assign(t.tg.nodes.size(), {});
  for (int v = 0; v < static_cast<int>(t.tg.nodes.size()); ++v) {
    TermString s(t.tg.nodes[v].depth);
    for (int x = v; x > 0; x = t.tg.nodes[x].parent) {
      s[t.tg.nodes[x].depth - 1] = t.tg.nodes[x].in_sym;
    }
    for (int off = 0; off < static_cast<int>(s.size()); ++off) {
      for (int i = 0; i < g.nonterminal_count(); ++i) {
        auto [node, used] = t.tk[i].walk(s, off, static_cast<int>(s.size()));
        if (used == static_cast<int>(s.size()) - off) {
          t.cross[v][{off, static_cast<SymbolId>(t.nt_base + i)}] = node;
          ++t.cross_link_count;
        }
      }
    }
  }
}

void build_prefix_tables(const Grammar& g, FirstKTables& t) {
  if (t.k < 1 || t.k > kMaxTableK) return;
  t.table_k = t.k;
  int nn = g.nonterminal_count();
  std::size_t rows = t.la_list.size() << t.k;
  t.table.assign(rows * nn, TableEntry{});
  for (int ui = 0; ui < static_cast<int>(t.la_list.size()); ++ui) {
    const TermString& u = t.la_list[ui];
    int max_l = std::min(static_cast<int>(u.size()), t.k - 1);
    for (int ni = 0; ni < nn; ++ni) {
      SymbolId a = static_cast<SymbolId>(t.nt_base + ni);
      std::vector<Extension> per(max_l + 1);
      for (int l = 0; l <= max_l; ++l) {
        per[l] = extend_nt_sets(t, u, 1u << l, a);
      }
      for (std::uint32_t mask = 1; mask < (1u << t.k); ++mask) {
        TableEntry e;
        for (int l = 0; l <= max_l; ++l) {
          if (!(mask & (1u << l))) continue;
          const Extension& ex = per[l];
          for (int b = 0; b < t.k; ++b) {
            if (!(ex.bits & (1u << b))) continue;
            e.result_mask |= static_cast<std::uint16_t>(1u << b);
            e.src[b] = e.src[b] == -1 ? static_cast<std::int8_t>(l)
                                      : static_cast<std::int8_t>(-2);
          }
          if (ex.full) {
            e.full_src = e.full_src == -1 ? static_cast<std::int8_t>(l)
                                          : static_cast<std::int8_t>(-2);
          }
        }
        if (e.result_mask || e.full_src != -1) ++t.table_entry_count;
        t.table[((static_cast<std::size_t>(ui) << t.k) | mask) * nn + ni] = e;
      }
    }
  }
}

Extension extend_terminal(const FirstKTables& t, const TermString& u,
                          std::uint32_t bits, SymbolId a) {
  Extension out;
  int m = static_cast<int>(u.size());
  for (int l = 0; l <= std::min(m - 1, t.k - 1); ++l) {
    if (!(bits & (1u << l))) continue;
    if (u[l] != a) continue;
    int b = l + 1;
    if (b == t.k) {
      // b == k implies m == k here since b <= m <= k
      out.full = true;
      out.full_src = static_cast<std::int8_t>(l);
    } else {
      out.bits |= 1u << b;
      out.src[b] = static_cast<std::int8_t>(l);
    }
  }
  return out;
}

Extension extend_nt_sets(const FirstKTables& t, const TermString& u,
                         std::uint32_t bits, SymbolId nt) {
  Extension out;
  int m = static_cast<int>(u.size());
  const TermSet& f = t.first_sym[nt];
  for (int l = 0; l <= std::min(m, t.k - 1); ++l) {
    if (!(bits & (1u << l))) continue;
    bool full_here = false;
    for (const auto& y : f) {
      int yl = static_cast<int>(y.size());
      if (m == t.k && yl >= t.k - l) {
        // y long enough to cover the rest of u: a match means full, and an
        // exact-length match counts as full rather than as a partial bit.
        bool match = true;
        for (int i = 0; i < t.k - l; ++i) {
          if (y[i] != u[l + i]) {
            match = false;
            break;
          }
        }
        if (match) full_here = true;
        continue;
      }
      if (l + yl > m) continue;
      bool match = true;
      for (int i = 0; i < yl; ++i) {
        if (y[i] != u[l + i]) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      int b = l + yl;
      out.bits |= 1u << b;
      // Two members of the same length matching the same substring cannot
      // differ, so a repeat here always means a second source bit.
      out.src[b] = out.src[b] == -1 ? static_cast<std::int8_t>(l)
                                    : static_cast<std::int8_t>(-2);
    }
    if (full_here) {
      out.full = true;
      out.full_src = out.full_src == -1 ? static_cast<std::int8_t>(l)
                                        : static_cast<std::int8_t>(-2);
    }
  }
  return out;
}

Extension extend_nt_table(const FirstKTables& t, int la_idx, std::uint32_t bits,
                          SymbolId nt) {
  Extension out;
  if (la_idx < 0 || t.table_k < 0) return out;
  std::size_t nn = t.follow.size();
  std::uint32_t mask = bits & ((1u << t.table_k) - 1);
  if (mask == 0) return out;
  std::size_t idx =
      ((static_cast<std::size_t>(la_idx) << t.table_k) | mask) * nn +
      static_cast<std::size_t>(nt - t.nt_base);
  const TableEntry& e = t.table[idx];
  out.bits = e.result_mask;
  for (int b = 0; b < t.table_k; ++b) out.src[b] = e.src[b];
  out.full = e.full_src != -1;
  out.full_src = e.full_src;
  return out;
}

Extension extend_nt_trie(const FirstKTables& t, const TermString& u, int tg_node,
                         std::uint32_t bits, SymbolId nt) {
  Extension out;
  int m = static_cast<int>(u.size());
  const Trie& trie = t.tk[nt - t.nt_base];
  for (int l = 0; l <= std::min(m, t.k - 1); ++l) {
    if (!(bits & (1u << l))) continue;
    int target = -1;
    bool complete = false;
    if (l == m) {
      target = 0;
      complete = true;
    } else if (tg_node >= 0) {
      auto it = t.cross[tg_node].find({l, nt});
      if (it != t.cross[tg_node].end()) {
        target = it->second;
        complete = true;
      }
    }
    if (target < 0) {
      // No cursor or no link: walk the u suffix directly. Equivalent, just
      // not O(1) per hop.
      auto [node, used] = trie.walk(u, l, m);
      target = node;
      complete = used == m - l;
    }
    bool full_here = false;
    int chain;
    if (complete && m == t.k) {
      // The node's existence means some member extends u[l..k); its own
      // accepting flag is the exact-length case, also full.
      full_here = true;
      chain = trie.nodes[target].back;
    } else {
      chain = trie.nodes[target].accepting ? target : trie.nodes[target].back;
    }
    for (int x = chain; x >= 0; x = trie.nodes[x].back) {
      int b = l + trie.nodes[x].depth;
      out.bits |= 1u << b;
      out.src[b] = out.src[b] == -1 ? static_cast<std::int8_t>(l)
                                    : static_cast<std::int8_t>(-2);
    }
    if (full_here) {
      out.full = true;
      out.full_src = out.full_src == -1 ? static_cast<std::int8_t>(l)
                                        : static_cast<std::int8_t>(-2);
    }
  }
  return out;
}

int tg_cursor(const FirstKTables& t, const TermString& u) {
  auto [node, used] = t.tg.walk(u, 0, static_cast<int>(u.size()));
  return used == static_cast<int>(u.size()) ? node : -1;
}

}  // namespace extlr

#include "extlr/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <tuple>

namespace extlr {

namespace {

constexpr long kInf = 1000000000;

// Length of the shortest terminal yield per symbol; kInf for unproductive.
std::vector<long> min_yields(const Grammar& g) {
  std::vector<long> m(g.symbols().size(), kInf);
  for (int t = 0; t < g.terminal_count(); ++t) m[t] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pi = 1; pi <= g.production_count(); ++pi) {
      const Production& p = g.prod(pi);
      long sum = 0;
      for (SymbolId s : p.rhs) sum = std::min(kInf, sum + m[s]);
      if (sum < m[p.lhs]) {
        m[p.lhs] = sum;
        changed = true;
      }
    }
  }
  return m;
}

struct DerivCtx {
  const Grammar& g;
  const std::vector<SymbolId>& w;
  const std::vector<long> mins;
  std::size_t tree_cap;
  long steps_left;
  bool lost = false;
  std::set<std::tuple<SymbolId, int, int>> active;

  std::vector<TreeNode> parse_nt(SymbolId a, int i, int j);
  std::vector<std::vector<TreeNode>> parse_seq(const std::vector<SymbolId>& syms,
                                               std::size_t from, int i, int j);
};

std::vector<TreeNode> DerivCtx::parse_nt(SymbolId a, int i, int j) {
  std::vector<TreeNode> out;
  if (j - i < mins[a]) return out;
  if (--steps_left < 0) {
    lost = true;
    return out;
  }
  auto key = std::make_tuple(a, i, j);
  if (active.count(key)) {
    // Same nonterminal over the same span again: infinitely many trees
    // could hide behind this, so cut and flag.
    lost = true;
    return out;
  }
  active.insert(key);
  for (int pi : g.productions_of(a)) {
    for (auto& kids : parse_seq(g.prod(pi).rhs, 0, i, j)) {
      out.push_back(TreeNode{pi, std::move(kids)});
      if (out.size() > tree_cap) break;
    }
    if (out.size() > tree_cap) break;
  }
  active.erase(key);
  return out;
}

std::vector<std::vector<TreeNode>> DerivCtx::parse_seq(
    const std::vector<SymbolId>& syms, std::size_t from, int i, int j) {
  std::vector<std::vector<TreeNode>> out;
  if (--steps_left < 0) {
    lost = true;
    return out;
  }
  if (from == syms.size()) {
    if (i == j) out.push_back({});
    return out;
  }
  SymbolId x = syms[from];
  if (g.is_terminal(x)) {
    if (i < j && w[i] == x) return parse_seq(syms, from + 1, i + 1, j);
    return out;
  }
  long rest_min = 0;
  for (std::size_t s = from + 1; s < syms.size(); ++s) {
    rest_min = std::min(kInf, rest_min + mins[syms[s]]);
  }
  for (int m = i; m <= j && j - m >= rest_min; ++m) {
    auto heads = parse_nt(x, i, m);
    if (heads.empty()) continue;
    auto tails = parse_seq(syms, from + 1, m, j);
    for (auto& h : heads) {
      for (auto& t : tails) {
        std::vector<TreeNode> kids;
        kids.push_back(h);
        kids.insert(kids.end(), t.begin(), t.end());
        out.push_back(std::move(kids));
        if (out.size() > tree_cap) return out;
      }
    }
  }
  return out;
}

}  // namespace

EnumResult enumerate_derivations(const Grammar& g, const std::vector<SymbolId>& w,
                                 std::size_t tree_cap, long step_cap) {
  DerivCtx ctx{g, w, min_yields(g), tree_cap, step_cap, false, {}};
  EnumResult r;
  r.trees = ctx.parse_nt(g.start(), 0, static_cast<int>(w.size()));
  if (r.trees.size() > tree_cap + 1) r.trees.resize(tree_cap + 1);
  r.inconclusive = ctx.lost;
  return r;
}

namespace {

void post_order(const TreeNode& t, std::vector<int>& out) {
  for (const TreeNode& k : t.kids) post_order(k, out);
  out.push_back(t.prod);
}

}  // namespace

std::vector<int> reversed_rightmost(const TreeNode& t) {
  std::vector<int> out;
  post_order(t, out);
  return out;
}

bool replay_derivation(const Grammar& g, const std::vector<SymbolId>& w,
                       const std::vector<int>& prods) {
  std::vector<SymbolId> form{g.start()};
  for (auto it = prods.rbegin(); it != prods.rend(); ++it) {
    int pi = *it;
    if (pi < 1 || pi > g.production_count()) return false;
    const Production& p = g.prod(pi);
    int pos = -1;
    for (int i = static_cast<int>(form.size()) - 1; i >= 0; --i) {
      if (g.is_nonterminal(form[i])) {
        pos = i;
        break;
      }
    }
    if (pos < 0 || form[pos] != p.lhs) return false;
    form.erase(form.begin() + pos);
    form.insert(form.begin() + pos, p.rhs.begin(), p.rhs.end());
  }
  for (SymbolId s : form) {
    if (!g.is_terminal(s)) return false;
  }
  return form == w;
}

bool earley_recognize(const Grammar& g, const std::vector<SymbolId>& w) {
  using EItem = std::tuple<int, int, int>;  // prod, dot, origin
  int n = static_cast<int>(w.size());
  std::vector<std::set<EItem>> sets(n + 1);
  sets[0].insert({0, 0, 0});
  for (int i = 0; i <= n; ++i) {
    // Re-scan to fixpoint so empty completions feed late predictors.
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<EItem> items(sets[i].begin(), sets[i].end());
      for (const auto& [p, d, o] : items) {
        const Production& pr = g.prod(p);
        if (d < static_cast<int>(pr.rhs.size())) {
          SymbolId x = pr.rhs[d];
          if (g.is_nonterminal(x)) {
            for (int q : g.productions_of(x)) {
              changed |= sets[i].insert({q, 0, i}).second;
            }
          }
        } else if (p != 0) {
          std::vector<EItem> parents(sets[o].begin(), sets[o].end());
          for (const auto& [p2, d2, o2] : parents) {
            const Production& pr2 = g.prod(p2);
            if (d2 < static_cast<int>(pr2.rhs.size()) && pr2.rhs[d2] == pr.lhs) {
              changed |= sets[i].insert({p2, d2 + 1, o2}).second;
            }
          }
        }
      }
    }
    if (i < n) {
      for (const auto& [p, d, o] : sets[i]) {
        const Production& pr = g.prod(p);
        if (d < static_cast<int>(pr.rhs.size()) && pr.rhs[d] == w[i]) {
          sets[i + 1].insert({p, d + 1, o});
        }
      }
    }
  }
  return sets[n].count({0, 1, 0}) > 0;
}

MgExplore explore_mg(const Grammar& g, const std::vector<SymbolId>& w,
                     int stack_cap, long step_cap) {
  MgExplore r;
  // Work a bit past stack_cap so reductions can dip back under it.
  int hard_cap = stack_cap + 2 * g.nonterminal_count() + 8;
  long steps = 0;

  auto closure = [&](std::set<MgConfig> seed) {
    std::deque<MgConfig> work(seed.begin(), seed.end());
    std::set<MgConfig> seen(std::move(seed));
    while (!work.empty()) {
      if (++steps > step_cap) {
        r.truncated = true;
        break;
      }
      MgConfig c = work.front();
      work.pop_front();
      auto [p, d] = c.back();
      const Production& pr = g.prod(p);
      int depth = static_cast<int>(c.size()) - 1;
      if (d < static_cast<int>(pr.rhs.size()) && g.is_nonterminal(pr.rhs[d])) {
        if (depth >= hard_cap) {
          r.truncated = true;
        } else {
          for (int q : g.productions_of(pr.rhs[d])) {
            MgConfig nc = c;
            nc.push_back({q, 0});
            if (seen.insert(nc).second) work.push_back(nc);
          }
        }
      }
      if (d == static_cast<int>(pr.rhs.size()) && p != 0 && c.size() >= 2) {
        MgConfig nc(c.begin(), c.end() - 1);
        auto [p2, d2] = nc.back();
        if (d2 < static_cast<int>(g.prod(p2).rhs.size()) &&
            g.prod(p2).rhs[d2] == pr.lhs) {
          nc.back() = {p2, d2 + 1};
          if (seen.insert(nc).second) work.push_back(nc);
        }
      }
    }
    return seen;
  };

  auto filtered = [&](const std::set<MgConfig>& full) {
    std::set<MgConfig> out;
    for (const auto& c : full) {
      if (static_cast<int>(c.size()) - 1 <= stack_cap) out.insert(c);
    }
    return out;
  };

  std::set<MgConfig> cur = closure({MgConfig{{0, 0}}});
  r.phases.push_back(filtered(cur));
  for (SymbolId a : w) {
    std::set<MgConfig> next;
    for (const auto& c : cur) {
      auto [p, d] = c.back();
      const Production& pr = g.prod(p);
      if (d < static_cast<int>(pr.rhs.size()) && pr.rhs[d] == a) {
        MgConfig nc = c;
        nc.back() = {p, d + 1};
        next.insert(nc);
      }
    }
    cur = closure(std::move(next));
    r.phases.push_back(filtered(cur));
  }
  r.accepted = cur.count(MgConfig{{0, 1}}) > 0;
  return r;
}

namespace {

FirstEnum first_enum_impl(const Grammar& g, std::vector<SymbolId> start_form,
                          int k, long step_cap) {
  FirstEnum r;
  std::vector<long> mins = min_yields(g);
  // A state is a sentential form plus a flag saying whether a suffix was
  // dropped. Dropping is sound only once the kept part's minimum yield
  // reaches k: every yield of the kept part then determines the k-prefix.
  using State = std::pair<std::vector<SymbolId>, bool>;

  auto truncate = [&](std::vector<SymbolId> f, bool tail) -> std::optional<State> {
    long cum = 0;
    std::size_t keep = f.size();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (cum >= k) {
        keep = i;
        break;
      }
      if (mins[f[i]] >= kInf) return std::nullopt;  // yields nothing
      cum += mins[f[i]];
    }
    if (keep < f.size()) {
      for (std::size_t j = keep; j < f.size(); ++j) {
        if (mins[f[j]] >= kInf) return std::nullopt;
      }
      f.resize(keep);
      tail = true;
    }
    return State{std::move(f), tail};
  };

  std::set<State> seen;
  std::deque<State> work;
  if (auto s0 = truncate(std::move(start_form), false)) {
    seen.insert(*s0);
    work.push_back(*s0);
  }
  long processed = 0;
  while (!work.empty()) {
    if (++processed > step_cap) {
      r.inconclusive = true;
      break;
    }
    auto [f, tail] = work.front();
    work.pop_front();
    int t = 0;
    while (t < static_cast<int>(f.size()) && t < k && g.is_terminal(f[t])) ++t;
    if (t >= k) {
      r.strings.insert(TermString(f.begin(), f.begin() + k));
      continue;
    }
    if (t == static_cast<int>(f.size())) {
      // Complete short yield; tail states never get here (their kept part
      // only yields length >= k).
      r.strings.insert(TermString(f.begin(), f.end()));
      continue;
    }
    SymbolId a = f[t];
    for (int pi : g.productions_of(a)) {
      std::vector<SymbolId> nf(f.begin(), f.begin() + t);
      const auto& rhs = g.prod(pi).rhs;
      nf.insert(nf.end(), rhs.begin(), rhs.end());
      nf.insert(nf.end(), f.begin() + t + 1, f.end());
      if (auto ns = truncate(std::move(nf), tail)) {
        if (seen.insert(*ns).second) work.push_back(*ns);
      }
    }
  }
  return r;
}

}  // namespace

FirstEnum enumerate_first_k(const Grammar& g, SymbolId x, int k, long step_cap) {
  return first_enum_impl(g, {x}, k, step_cap);
}

FirstEnum enumerate_first_k_seq(const Grammar& g,
                                const std::vector<SymbolId>& alpha, int k,
                                long step_cap) {
  return first_enum_impl(g, alpha, k, step_cap);
}

long count_lr0_states(const Grammar& g, long cap) {
  using Item = std::pair<int, int>;
  using State = std::set<Item>;
  auto closure = [&](State s) {
    std::deque<Item> work(s.begin(), s.end());
    while (!work.empty()) {
      auto [p, d] = work.front();
      work.pop_front();
      const Production& pr = g.prod(p);
      if (d < static_cast<int>(pr.rhs.size()) && g.is_nonterminal(pr.rhs[d])) {
        for (int q : g.productions_of(pr.rhs[d])) {
          if (s.insert({q, 0}).second) work.push_back({q, 0});
        }
      }
    }
    return s;
  };
  std::map<State, long> ids;
  std::deque<State> work;
  State init = closure({{0, 0}});
  ids[init] = 0;
  work.push_back(init);
  while (!work.empty()) {
    State s = work.front();
    work.pop_front();
    std::map<SymbolId, State> kernels;
    for (auto [p, d] : s) {
      const Production& pr = g.prod(p);
      if (d < static_cast<int>(pr.rhs.size())) {
        kernels[pr.rhs[d]].insert({p, d + 1});
      }
    }
    for (auto& [sym, kern] : kernels) {
      State t = closure(kern);
      if (!ids.count(t)) {
        if (static_cast<long>(ids.size()) >= cap) return -1;
        ids[t] = static_cast<long>(ids.size());
        work.push_back(std::move(t));
      }
    }
  }
  return static_cast<long>(ids.size());
}

std::vector<TermString> language_words(const Grammar& g, int max_len,
                                       std::size_t max_count, bool* complete) {
  std::vector<long> mins = min_yields(g);
  std::set<TermString> words;
  std::set<std::vector<SymbolId>> seen;
  std::deque<std::vector<SymbolId>> work;
  bool done = true;
  long budget = 4000000;
  std::vector<SymbolId> init{g.start()};
  if (mins[g.start()] <= max_len) {
    seen.insert(init);
    work.push_back(init);
  }
  while (!work.empty()) {
    if (--budget < 0 || words.size() >= max_count) {
      done = false;
      break;
    }
    std::vector<SymbolId> f = work.front();
    work.pop_front();
    int nt = -1;
    for (int i = 0; i < static_cast<int>(f.size()); ++i) {
      if (g.is_nonterminal(f[i])) {
        nt = i;
        break;
      }
    }
    if (nt < 0) {
      words.insert(f);
      continue;
    }
    for (int pi : g.productions_of(f[nt])) {
      std::vector<SymbolId> nf(f.begin(), f.begin() + nt);
      const auto& rhs = g.prod(pi).rhs;
      nf.insert(nf.end(), rhs.begin(), rhs.end());
      nf.insert(nf.end(), f.begin() + nt + 1, f.end());
      long total = 0;
      bool ok = true;
      for (SymbolId s : nf) {
        total += mins[s];
        if (total > max_len) {
          ok = false;
          break;
        }
      }
      if (ok && seen.insert(nf).second) work.push_back(std::move(nf));
    }
  }
  if (complete) *complete = done;
  std::vector<TermString> out(words.begin(), words.end());
  std::sort(out.begin(), out.end(), [](const TermString& a, const TermString& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace extlr

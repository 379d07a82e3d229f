// End-to-end acceptance run. Prints one line per criterion and exits
// nonzero if any of them failed. Expects the path to the extlr binary as
// its only argument; two criteria drive the tool through its command line.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "corpus.hpp"
#include "extlr/extparser.hpp"
#include "extlr/firstk.hpp"
#include "extlr/grammar.hpp"
#include "extlr/oracle.hpp"
#include "extlr/simulate.hpp"

using namespace extlr;

namespace {

std::string g_extlr;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Fixture {
  Grammar g;
  FirstKTables t;
};

Fixture make(Grammar g, int k) {
  FirstKTables t = compute_first_k(g, k);
  if (k >= 1) {
    build_tries(g, t);
    build_prefix_tables(g, t);
  }
  return {std::move(g), std::move(t)};
}

ParseResult parse(const Fixture& f, const std::vector<SymbolId>& w,
                  Strategy s = Strategy::Table, ParseStats* st = nullptr,
                  bool invariants = false) {
  ParseOptions o;
  o.strategy = s;
  o.check_invariants = invariants;
  return ext_parse(f.g, f.t, w, o, st);
}

std::vector<std::vector<SymbolId>> all_words(const Grammar& g, int max_len) {
  std::vector<std::vector<SymbolId>> out{{}};
  std::size_t lo = 0;
  for (int l = 1; l <= max_len; ++l) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i) {
      for (SymbolId a = 0; a < g.terminal_count(); ++a) {
        auto w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    }
    lo = hi;
  }
  return out;
}

// Full alphabet sweep: every word up to 10 tokens over small alphabets,
// every word up to 7 (over 10^4 of them) when the alphabet is bigger.
int sweep_len(const Grammar& g) { return g.terminal_count() <= 2 ? 10 : 7; }

std::vector<SymbolId> stress_word(const Grammar& g, int m) {
  std::vector<SymbolId> w(m, g.find("a2"));
  w.push_back(g.find("a1"));
  w.push_back(g.find("b1"));
  return w;
}

// Criterion 1: the parser accepts exactly the words with a parse tree and
// reproduces the oracle's reversed rightmost derivation, over exhaustive
// sweeps of every deterministic corpus grammar.
bool crit_derivations() {
  auto t0 = std::chrono::steady_clock::now();
  long checked = 0, bad = 0;
  for (const auto& entry : corpus::all()) {
    if (!entry.is_lr) continue;
    Fixture f = make(corpus::load(entry), entry.k);
    for (const auto& w : all_words(f.g, sweep_len(f.g))) {
      ++checked;
      ParseResult r = parse(f, w);
      const Derivation* d = std::get_if<Derivation>(&r);
      if ((d != nullptr) != earley_recognize(f.g, w)) {
        ++bad;
        continue;
      }
      if (!d) continue;
      EnumResult trees = enumerate_derivations(f.g, w, 2);
      if (trees.inconclusive || trees.trees.size() != 1 ||
          reversed_rightmost(trees.trees[0]) != d->prods) {
        ++bad;
      }
    }
  }
  double el = seconds_since(t0);
  std::cerr << "  derivation sweep: " << checked << " words, " << bad
            << " mismatches, " << el << "s\n";
  return bad == 0 && checked >= 7 * 2000 && el < 60.0;
}

// Criterion 2: the graph recognizer agrees with the Earley oracle,
// ambiguous grammars included.
bool crit_recognizer() {
  auto t0 = std::chrono::steady_clock::now();
  long bad = 0;
  for (const auto& entry : corpus::all()) {
    Grammar g = corpus::load(entry);
    for (const auto& w : all_words(g, sweep_len(g))) {
      if (simulate(g, w) != earley_recognize(g, w)) ++bad;
    }
  }
  return bad == 0 && seconds_since(t0) < 60.0;
}

// Criterion 3: the n=10 family member parses the length-10000 stress
// input quickly and with the expected derivation length.
bool crit_stress() {
  Fixture f = make(gen_gn(10), 0);
  std::vector<SymbolId> w = stress_word(f.g, 9998);
  auto t0 = std::chrono::steady_clock::now();
  ParseResult r = parse(f, w);
  double el = seconds_since(t0);
  const Derivation* d = std::get_if<Derivation>(&r);
  std::cerr << "  stress: ld="
            << (d ? std::to_string(d->prods.size()) : std::string("-"))
            << ", " << el << "s\n";
  return d && d->prods.size() == 10001 && el < 10.0;
}

// Criterion 4: parser size grows about quadratically in n while the
// LR(0) state count blows up. Read off the bench command so the
// machine-readable lines get a round-trip check for free.
bool crit_sizes() {
  auto t0 = std::chrono::steady_clock::now();
  std::string cmd = g_extlr +
                    " bench --n-min 1 --n-max 10 --stress-len 10 --lr0-max 6"
                    " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return false;
  std::vector<long> ext(11, 0), lr0(11, -1);
  bool parsed_ok = true;
  int rows = 0;
  char buf[256];
  while (fgets(buf, sizeof buf, p)) {
    if (std::strncmp(buf, "bench ", 6) != 0) continue;
    std::string line(buf);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
      line.pop_back();
    int n = 0;
    long size = 0, elems = 0, ld = 0, ms = 0;
    char states[32] = {0};
    if (std::sscanf(line.c_str(),
                    "bench n=%d size=%ld ext_elems=%ld lr0_states=%31s "
                    "ld=%ld ms=%ld",
                    &n, &size, &elems, states, &ld, &ms) != 6 ||
        n < 1 || n > 10) {
      parsed_ok = false;
      continue;
    }
    std::ostringstream rt;
    rt << "bench n=" << n << " size=" << size << " ext_elems=" << elems
       << " lr0_states=" << states << " ld=" << ld << " ms=" << ms;
    if (rt.str() != line) parsed_ok = false;
    ext[n] = elems;
    if (states[0] != '-' && states[0] != '>') lr0[n] = std::atol(states);
    ++rows;
  }
  if (pclose(p) != 0) return false;
  if (!parsed_ok || rows != 10) return false;

  // least squares fit of ext_elems against c*n^2 + d*n
  double s4 = 0, s3 = 0, s2 = 0, sy2 = 0, sy1 = 0;
  for (int n = 1; n <= 10; ++n) {
    double nn = n;
    s4 += nn * nn * nn * nn;
    s3 += nn * nn * nn;
    s2 += nn * nn;
    sy2 += nn * nn * ext[n];
    sy1 += nn * ext[n];
  }
  double det = s4 * s2 - s3 * s3;
  double c = (sy2 * s2 - s3 * sy1) / det;
  double d = (s4 * sy1 - s3 * sy2) / det;
  double worst = 0;
  for (int n = 1; n <= 10; ++n) {
    double pred = c * n * n + d * n;
    worst = std::max(worst, std::fabs(ext[n] - pred) / ext[n]);
  }
  bool states_ok = true;
  for (int n = 2; n <= 6; ++n)
    if (lr0[n - 1] < 0 || lr0[n] <= lr0[n - 1]) states_ok = false;
  states_ok = states_ok && lr0[6] > 0 && lr0[5] > 0 &&
              static_cast<double>(lr0[6]) / lr0[5] >= 1.5;
  std::cerr << "  fit: c=" << c << " d=" << d << " worst residual=" << worst
            << ", lr0[5]=" << lr0[5] << " lr0[6]=" << lr0[6] << "\n";
  return c > 0 && worst <= 0.25 && states_ok && seconds_since(t0) < 120.0;
}

// Criterion 5: the step-boundary checks stay silent everywhere: the graph
// structure checks of the parser, and stack-set equality between the
// recognizer and the exhaustive machine.
bool crit_invariants() {
  long violations = 0;
  for (const auto& entry : corpus::all()) {
    Grammar g = corpus::load(entry);
    int k = entry.k > 0 ? entry.k : 1;
    Fixture f = make(std::move(g), k);
    int cap = f.g.terminal_count() <= 2 ? 6 : 4;
    auto words = all_words(f.g, cap);
    for (const auto& w : language_words(f.g, 9, 300)) {
      if (static_cast<int>(w.size()) > cap) words.push_back(w);
    }
    for (const auto& w : words) {
      try {
        parse(f, w, Strategy::Table, nullptr, true);
      } catch (const std::logic_error&) {
        ++violations;
      }
    }
  }
  long compared = 0;
  for (const auto& entry : corpus::all()) {
    Grammar g = corpus::load(entry);
    int cap = g.terminal_count() <= 2 ? 6 : 4;
    for (const auto& w : all_words(g, cap)) {
      MgExplore want = explore_mg(g, w, 8);
      if (want.truncated) continue;
      auto got = simulate_stacks(g, w, 8);
      ++compared;
      if (got.size() != want.phases.size()) {
        ++violations;
        continue;
      }
      for (std::size_t i = 0; i < got.size(); ++i)
        if (got[i] != want.phases[i]) ++violations;
    }
  }
  std::cerr << "  invariant sweep: " << violations << " violations, "
            << compared << " stack-set comparisons\n";
  return violations == 0 && compared > 1000;
}

// Criterion 6: the ambiguous grammar is reported as a conflict through the
// command line, and no deterministic corpus grammar ever is.
bool crit_conflicts() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "extlr_accept";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "ambig.g") << "%start S\n%tokens a\nS : S S | a ;\n";
    std::ofstream(dir / "aaa.txt") << "a a a\n";
  }
  std::string cmd = g_extlr + " parse --grammar " + (dir / "ambig.g").string() +
                    " --k 1 " + (dir / "aaa.txt").string() +
                    " >/dev/null 2>/dev/null";
  int st = std::system(cmd.c_str());
  if (st == -1 || !WIFEXITED(st) || WEXITSTATUS(st) != 2) return false;

  for (const auto& entry : corpus::all()) {
    if (!entry.is_lr) continue;
    Fixture f = make(corpus::load(entry), entry.k);
    for (const auto& w : all_words(f.g, f.g.terminal_count() <= 2 ? 8 : 6)) {
      if (std::holds_alternative<ConflictError>(parse(f, w))) return false;
    }
  }
  return true;
}

std::string render(const Grammar& g, const ParseResult& r) {
  std::ostringstream out;
  if (const auto* d = std::get_if<Derivation>(&r)) {
    for (int p : d->prods) out << p << "\n";
    out << "ld=" << d->prods.size() << "\n";
  } else if (const auto* se = std::get_if<SyntaxError>(&r)) {
    out << "syntax error at token " << se->token_pos << ": expected {";
    for (std::size_t i = 0; i < se->expected.size(); ++i) {
      if (i) out << ", ";
      out << g.name(se->expected[i]);
    }
    if (se->expect_eof) out << (se->expected.empty() ? "$" : ", $");
    out << "}\n";
  } else {
    const ConflictError& ce = std::get<ConflictError>(r);
    out << "not LR(" << ce.k << "): conflict at token " << ce.token_pos << ": "
        << ce.detail << "\n";
  }
  return out.str();
}

// Criterion 7: the table and trie lookahead paths render to the same bytes
// for every outcome, over every grammar and k in 1..3.
bool crit_strategies() {
  for (const auto& entry : corpus::all()) {
    Grammar g0 = corpus::load(entry);
    int cap = g0.terminal_count() <= 2 ? 7 : 5;
    for (int k = 1; k <= 3; ++k) {
      Fixture f = make(corpus::load(entry), k);
      for (const auto& w : all_words(f.g, cap)) {
        std::string a = render(f.g, parse(f, w, Strategy::Table));
        std::string b = render(f.g, parse(f, w, Strategy::Trie));
        if (a != b) return false;
      }
    }
  }
  return true;
}

// Criterion 8: the fixed-point FIRST_k equals brute-force enumeration for
// every symbol at k in 0..3.
bool crit_firstk() {
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& entry : corpus::all()) {
    Grammar g = corpus::load(entry);
    int total = g.terminal_count() + g.nonterminal_count();
    for (int k = 0; k <= 3; ++k) {
      FirstKTables t = compute_first_k(g, k);
      for (SymbolId s = 0; s < total; ++s) {
        FirstEnum fe = enumerate_first_k(g, s, k);
        if (fe.inconclusive || fe.strings != t.first_of(s)) return false;
      }
    }
  }
  return seconds_since(t0) < 30.0;
}

// Criterion 9: per-token work on the stress family stays flat between
// input lengths 10^3 and 10^4 once the derivation itself is taken out.
bool crit_work_bound() {
  Fixture f = make(gen_gn(10), 0);
  double per_token[2] = {0, 0};
  int idx = 0;
  for (int m : {998, 9998}) {
    std::vector<SymbolId> w = stress_word(f.g, m);
    ParseStats st;
    ParseResult r = parse(f, w, Strategy::Table, &st);
    const Derivation* d = std::get_if<Derivation>(&r);
    if (!d) return false;
    double work = static_cast<double>(st.search_visits) + st.nodes_created +
                  st.edges_created - d->prods.size();
    per_token[idx++] = work / w.size();
  }
  double ratio = per_token[1] / per_token[0];
  std::cerr << "  work per token: " << per_token[0] << " vs " << per_token[1]
            << ", ratio " << ratio << "\n";
  return ratio >= 1.0 / 1.5 && ratio <= 1.5;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-extlr-binary>\n";
    return 2;
  }
  g_extlr = argv[1];

  struct Row {
    const char* name;
    std::function<bool()> fn;
  };
  std::vector<Row> rows = {
      {"oracle derivation equivalence", crit_derivations},
      {"recognizer equivalence", crit_recognizer},
      {"length-10000 stress parse", crit_stress},
      {"quadratic size vs LR(0) blowup", crit_sizes},
      {"step-boundary invariants", crit_invariants},
      {"conflict detection", crit_conflicts},
      {"table/trie strategy equivalence", crit_strategies},
      {"FIRST_k correctness", crit_firstk},
      {"work-bound counters", crit_work_bound},
  };

  int failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = rows[i].fn();
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << "criterion " << (i + 1) << ": " << rows[i].name << ": "
         << (ok ? "pass" : "FAIL") << " (" << seconds_since(t0) << "s)";
    std::cout << line.str() << "\n" << std::flush;
    if (!ok) ++failed;
  }
  if (failed) {
    std::cout << failed << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

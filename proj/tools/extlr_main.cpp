#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "extlr/extparser.hpp"
#include "extlr/firstk.hpp"
#include "extlr/grammar.hpp"
#include "extlr/oracle.hpp"
#include "extlr/simulate.hpp"

namespace {

using namespace extlr;

struct Options {
  std::string grammar_path;
  std::string input_path;
  int k = 0;
  std::string strategy;  // empty means pick by k
  int table_k_max = 3;
  bool auto_reduce = false;
  bool stats = false;
  bool trace = false;
  bool dump_first = false;
  int n_min = 1;
  int n_max = 10;
  int stress_len = 9998;
  int lr0_max = 6;
  long lr0_cap = 100000;
};

bool slurp(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  out = os.str();
  return true;
}

std::string name_set_text(const Grammar& g, const std::vector<SymbolId>& ids) {
  if (ids.empty()) return "{ }";
  std::string out = "{ ";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += g.name(ids[i]);
  }
  return out + " }";
}

std::string term_set_text(const Grammar& g, const TermSet& set) {
  if (set.empty()) return "{ }";
  std::string out = "{ ";
  bool first = true;
  for (const TermString& s : set) {
    if (!first) out += ", ";
    first = false;
    if (s.empty()) {
      out += "eps";
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += " ";
        out += g.name(s[i]);
      }
    }
  }
  return out + " }";
}

// fail_code keeps 1 and 2 free for parse outcomes: check uses 1, the parsing
// commands use 3 for anything wrong with the grammar itself.
std::optional<Grammar> load_grammar(const Options& o, int fail_code, int& rc) {
  rc = fail_code;
  if (o.grammar_path.empty()) {
    std::cerr << "--grammar is required\n";
    return std::nullopt;
  }
  std::string text;
  if (!slurp(o.grammar_path, text)) {
    std::cerr << "cannot read grammar file: " << o.grammar_path << "\n";
    return std::nullopt;
  }
  std::optional<Grammar> g;
  try {
    g = Grammar::parse(text);
  } catch (const GrammarError& e) {
    std::cerr << "grammar error: " << e.what() << " (line " << e.line()
              << ", col " << e.col() << ")\n";
    return std::nullopt;
  }
  ReducedCheck check = g->check_reduced();
  if (!check.ok()) {
    if (!o.auto_reduce) {
      std::cerr << "not reduced: unreachable = "
                << name_set_text(*g, check.unreachable) << "; unproductive = "
                << name_set_text(*g, check.unproductive) << "\n";
      return std::nullopt;
    }
    try {
      g = g->reduced();
    } catch (const GrammarError& e) {
      std::cerr << "grammar error: " << e.what() << "\n";
      return std::nullopt;
    }
  }
  rc = 0;
  return g;
}

int load_input(const Options& o, const Grammar& g, std::vector<SymbolId>& toks) {
  std::string text;
  if (!slurp(o.input_path, text)) {
    std::cerr << "cannot read input file: " << o.input_path << "\n";
    return 1;
  }
  try {
    toks = tokenize_input(g, text);
  } catch (const GrammarError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

// Empty strategy string means: table while the prefix tables stay small,
// trie beyond that.
int pick_strategy(const Options& o, Strategy& out) {
  if (o.strategy.empty()) {
    out = o.k <= o.table_k_max ? Strategy::Table : Strategy::Trie;
    return 0;
  }
  if (o.strategy == "table") {
    if (o.k > o.table_k_max) {
      std::cerr << "k=" << o.k << " exceeds --table-k-max=" << o.table_k_max
                << "; use --strategy trie\n";
      return 3;
    }
    out = Strategy::Table;
  } else {
    out = Strategy::Trie;
  }
  return 0;
}

FirstKTables build_tables(const Grammar& g, int k, Strategy strat) {
  FirstKTables t = compute_first_k(g, k);
  if (k >= 1) {
    build_tries(g, t);
    if (strat == Strategy::Table) build_prefix_tables(g, t);
  }
  return t;
}

int cmd_check(const Options& o) {
  int rc = 0;
  std::optional<Grammar> og = load_grammar(o, 1, rc);
  if (!og) return rc;
  const Grammar& g = *og;
  if (o.dump_first) {
    FirstKTables t = compute_first_k(g, o.k);
    int total = g.terminal_count() + g.nonterminal_count();
    for (SymbolId s = 0; s < total; ++s) {
      std::cout << "FIRST" << o.k << "(" << g.name(s)
                << ") = " << term_set_text(g, t.first_of(s)) << "\n";
    }
  }
  return 0;
}

int cmd_recognize(const Options& o) {
  int rc = 0;
  std::optional<Grammar> og = load_grammar(o, 3, rc);
  if (!og) return rc;
  const Grammar& g = *og;
  std::vector<SymbolId> toks;
  if (int irc = load_input(o, g, toks)) return irc;
  SimOptions so;
  so.trace = o.trace;
  so.trace_out = &std::cout;
  SimStats st;
  bool ok = simulate(g, toks, so, o.stats ? &st : nullptr);
  std::cout << (ok ? "accept" : "reject") << "\n";
  if (o.stats) {
    std::cout << "stats nodes=" << st.nodes_created
              << " edges=" << st.edges_created << "\n";
  }
  return ok ? 0 : 1;
}

std::string expected_text(const Grammar& g, const SyntaxError& se) {
  std::string out = "{";
  for (std::size_t i = 0; i < se.expected.size(); ++i) {
    if (i) out += ", ";
    out += g.name(se.expected[i]);
  }
  if (se.expect_eof) {
    if (!se.expected.empty()) out += ", ";
    out += "$";
  }
  return out + "}";
}

int cmd_parse(const Options& o) {
  int rc = 0;
  std::optional<Grammar> og = load_grammar(o, 3, rc);
  if (!og) return rc;
  const Grammar& g = *og;
  Strategy strat;
  if (int src = pick_strategy(o, strat)) return src;
  std::vector<SymbolId> toks;
  if (int irc = load_input(o, g, toks)) return irc;
  FirstKTables t = build_tables(g, o.k, strat);
  ParseOptions po;
  po.strategy = strat;
  po.trace = o.trace;
  po.trace_out = &std::cerr;
  ParseStats st;
  ParseResult r = ext_parse(g, t, toks, po, o.stats ? &st : nullptr);
  int code = 0;
  if (const auto* d = std::get_if<Derivation>(&r)) {
    for (int p : d->prods) std::cout << p << "\n";
    std::cout << "ld=" << d->prods.size() << "\n";
  } else if (const auto* se = std::get_if<SyntaxError>(&r)) {
    std::cerr << "syntax error at token " << se->token_pos << ": expected "
              << expected_text(g, *se) << "\n";
    code = 1;
  } else {
    const ConflictError& ce = std::get<ConflictError>(r);
    std::cerr << "not LR(" << ce.k << "): conflict at token " << ce.token_pos
              << ": " << ce.detail << "\n";
    code = 2;
  }
  if (o.stats) {
    std::cout << "stats nodes=" << st.nodes_created
              << " edges=" << st.edges_created << " searches=" << st.searches
              << " search_visits=" << st.search_visits << "\n";
  }
  return code;
}

int cmd_bench(const Options& o) {
  Strategy strat;
  if (int rc = pick_strategy(o, strat)) return rc;
  std::cout << std::setw(4) << "n" << std::setw(8) << "size" << std::setw(11)
            << "ext_elems" << std::setw(12) << "lr0_states" << std::setw(8)
            << "ld" << std::setw(8) << "ms" << "\n";
  std::vector<std::string> machine;
  for (int n = o.n_min; n <= o.n_max; ++n) {
    Grammar g = gen_gn(n);
    FirstKTables t = build_tables(g, o.k, strat);
    // every dot position of every production, the synthetic one included
    long items = g.size() + 2;
    long ext = items + static_cast<long>(t.trie_node_count) +
               static_cast<long>(t.tg_node_count) +
               static_cast<long>(t.cross_link_count) +
               static_cast<long>(t.table_entry_count);
    std::string lr0 = "-";
    if (n <= o.lr0_max) {
      long c = count_lr0_states(g, o.lr0_cap);
      lr0 = c < 0 ? ">" + std::to_string(o.lr0_cap) : std::to_string(c);
    }
    std::vector<SymbolId> toks;
    if (n == 1) {
      toks.assign(o.stress_len, g.find("a1"));
    } else {
      toks.assign(o.stress_len, g.find("a2"));
      toks.push_back(g.find("a1"));
    }
    toks.push_back(g.find("b1"));
    ParseOptions po;
    po.strategy = strat;
    auto t0 = std::chrono::steady_clock::now();
    ParseResult r = ext_parse(g, t, toks, po);
    auto t1 = std::chrono::steady_clock::now();
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                  .count();
    const auto* d = std::get_if<Derivation>(&r);
    if (!d) {
      std::cerr << "bench parse failed at n=" << n << "\n";
      return 1;
    }
    std::cout << std::setw(4) << n << std::setw(8) << g.size() << std::setw(11)
              << ext << std::setw(12) << lr0 << std::setw(8) << d->prods.size()
              << std::setw(8) << ms << "\n";
    std::ostringstream ml;
    ml << "bench n=" << n << " size=" << g.size() << " ext_elems=" << ext
       << " lr0_states=" << lr0 << " ld=" << d->prods.size() << " ms=" << ms;
    machine.push_back(ml.str());
  }
  for (const std::string& line : machine) std::cout << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended LR(k) parsing tool"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--grammar", o.grammar_path, "grammar file");
  app.add_option("--k", o.k, "lookahead length")->check(CLI::Range(0, kMaxK));
  app.add_option("--strategy", o.strategy, "lookahead lookup strategy")
      ->check(CLI::IsMember({"table", "trie"}));
  app.add_option("--table-k-max", o.table_k_max,
                 "largest k served by prefix tables")
      ->check(CLI::Range(0, kMaxTableK));
  app.add_flag("--auto-reduce", o.auto_reduce,
               "drop unreachable and unproductive symbols first");
  app.add_flag("--stats", o.stats, "append a machine-readable stats line");
  app.add_flag("--trace", o.trace, "emit per-phase progress lines");

  CLI::App* check = app.add_subcommand("check", "validate a grammar file");
  check->fallthrough();
  check->add_flag("--dump-first", o.dump_first, "print FIRST_k per symbol");

  CLI::App* recognize =
      app.add_subcommand("recognize", "run the recognizer on an input");
  recognize->fallthrough();
  recognize->add_option("input", o.input_path, "token file")->required();

  CLI::App* parse =
      app.add_subcommand("parse", "parse an input and print the derivation");
  parse->fallthrough();
  parse->add_option("input", o.input_path, "token file")->required();

  CLI::App* bench =
      app.add_subcommand("bench", "size and speed over the G_n family");
  bench->fallthrough();
  bench->add_option("--n-min", o.n_min, "first family index")
      ->check(CLI::Range(1, 20));
  bench->add_option("--n-max", o.n_max, "last family index")
      ->check(CLI::Range(1, 20));
  bench->add_option("--stress-len", o.stress_len, "repetitions in the stress input")
      ->check(CLI::Range(1, 10000000));
  bench->add_option("--lr0-max", o.lr0_max, "largest n to count LR(0) states for");
  bench->add_option("--lr0-cap", o.lr0_cap, "stop counting LR(0) states here");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return cmd_check(o);
  if (recognize->parsed()) return cmd_recognize(o);
  if (parse->parsed()) return cmd_parse(o);
  return cmd_bench(o);
}

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace extlr {

using SymbolId = std::int32_t;
using TermString = std::vector<SymbolId>;
using TermSet = std::set<TermString>;

// Left side of the synthetic start production; never a real symbol id.
inline constexpr SymbolId kAugmented = -1;
inline constexpr SymbolId kNoSymbol = -2;

enum class SymKind { Terminal, Nonterminal };

struct Symbol {
  SymbolId id;
  SymKind kind;
  std::string name;
};

struct Production {
  int index;  // 0 is the synthetic start production
  SymbolId lhs;
  std::vector<SymbolId> rhs;
};

class GrammarError : public std::runtime_error {
 public:
  GrammarError(const std::string& msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

struct ReducedCheck {
  std::vector<SymbolId> unreachable;   // terminals and nonterminals, id order
  std::vector<SymbolId> unproductive;  // nonterminals, id order
  bool ok() const { return unreachable.empty() && unproductive.empty(); }
};

class Grammar {
 public:
  // Text format: "%start S", "%tokens a b ..." (one or more lines), then
  // productions "A : a B | ;" where : | ; stand alone between whitespace.
  // '#' starts a comment. Every right-side name must be a declared token or
  // appear as a left side somewhere.
  static Grammar parse(const std::string& text);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  int terminal_count() const { return terminal_count_; }
  int nonterminal_count() const {
    return static_cast<int>(symbols_.size()) - terminal_count_;
  }
  SymbolId start() const { return start_; }
  bool is_terminal(SymbolId id) const {
    return id >= 0 && id < terminal_count_;
  }
  bool is_nonterminal(SymbolId id) const {
    return id >= terminal_count_ && id < static_cast<SymbolId>(symbols_.size());
  }
  // Renders kAugmented as the start name plus a prime.
  std::string name(SymbolId id) const;
  SymbolId find(const std::string& name) const;

  const std::vector<Production>& productions() const { return prods_; }
  const Production& prod(int index) const { return prods_[index]; }
  int production_count() const { return static_cast<int>(prods_.size()) - 1; }
  const std::vector<int>& productions_of(SymbolId nonterminal) const;

  // Sum of 1 + |rhs| over real productions.
  int size() const;

  ReducedCheck check_reduced() const;
  // Drops unproductive nonterminals, then unreachable symbols, reindexing
  // both. Throws if the start symbol itself is unproductive.
  Grammar reduced() const;

  std::string production_text(int index) const;  // "S -> a S b", "A -> eps"
  std::string to_text() const;

 private:
  Grammar() = default;

  std::vector<Symbol> symbols_;
  std::vector<Production> prods_;
  std::vector<std::vector<int>> prods_of_;  // per nonterminal, index order
  std::unordered_map<std::string, SymbolId> by_name_;
  SymbolId start_ = kNoSymbol;
  int terminal_count_ = 0;
};

// Splits on whitespace and maps names to terminal ids. Throws GrammarError
// "input error: unknown token '<name>' at position <i>" (1-based) on names
// that are not terminals of g.
std::vector<SymbolId> tokenize_input(const Grammar& g, const std::string& text);

// Family of LR(0) grammars whose canonical LR(0) automaton grows
// exponentially in n while the grammar itself stays quadratic:
//   S -> A_i          A_i -> a_j A_i (j != i)
//   A_i -> a_i B_i    A_i -> b_i
//   B_i -> a_j B_i    B_i -> b_i     (all i, j in 1..n)
Grammar gen_gn(int n);

}  // namespace extlr

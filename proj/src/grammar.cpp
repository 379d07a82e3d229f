#include "extlr/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace extlr {

GrammarError::GrammarError(const std::string& msg, int line, int col)
    : std::runtime_error(msg), line_(line), col_(col) {}

namespace {

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

bool is_punct(const std::string& s) {
  return s == ":" || s == "|" || s == ";";
}

bool is_reserved(const std::string& s) { return s == "eps" || s == "$"; }

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto step = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        step(text[i]);
        ++i;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      step(c);
      ++i;
      continue;
    }
    if (c == ':' || c == '|' || c == ';') {
      out.push_back({std::string(1, c), line, col});
      step(c);
      ++i;
      continue;
    }
    Token t{{}, line, col};
    while (i < text.size()) {
      char d = text[i];
      if (std::isspace(static_cast<unsigned char>(d)) || d == ':' ||
          d == '|' || d == ';' || d == '#') {
        break;
      }
      t.text.push_back(d);
      step(d);
      ++i;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

Grammar Grammar::parse(const std::string& text) {
  std::vector<Token> toks = lex(text);
  std::size_t i = 0;
  bool seen_start = false;
  Token start_tok;
  std::vector<Token> token_names;
  struct Rule {
    Token lhs;
    std::vector<std::vector<Token>> alts;
  };
  std::vector<Rule> rules;

  while (i < toks.size()) {
    const Token t = toks[i];
    if (t.text == "%start") {
      if (seen_start) {
        throw GrammarError("duplicate %start", t.line, t.col);
      }
      if (i + 1 >= toks.size() || toks[i + 1].line != t.line ||
          is_punct(toks[i + 1].text) || toks[i + 1].text[0] == '%') {
        throw GrammarError("%start needs a symbol name", t.line, t.col);
      }
      start_tok = toks[i + 1];
      seen_start = true;
      i += 2;
      if (i < toks.size() && toks[i].line == t.line) {
        throw GrammarError("unexpected '" + toks[i].text + "' after %start",
                           toks[i].line, toks[i].col);
      }
      continue;
    }
    if (t.text == "%tokens") {
      ++i;
      while (i < toks.size() && toks[i].line == t.line) {
        if (is_punct(toks[i].text) || toks[i].text[0] == '%') {
          throw GrammarError("bad token name '" + toks[i].text + "'",
                             toks[i].line, toks[i].col);
        }
        token_names.push_back(toks[i]);
        ++i;
      }
      continue;
    }
    if (t.text[0] == '%') {
      throw GrammarError("unknown directive '" + t.text + "'", t.line, t.col);
    }
    if (is_punct(t.text)) {
      throw GrammarError("expected a symbol name, got '" + t.text + "'",
                         t.line, t.col);
    }
    Rule r;
    r.lhs = t;
    ++i;
    if (i >= toks.size() || toks[i].text != ":") {
      throw GrammarError("expected ':' after '" + r.lhs.text + "'", r.lhs.line,
                         r.lhs.col);
    }
    ++i;
    std::vector<Token> cur;
    bool closed = false;
    while (i < toks.size()) {
      const Token& u = toks[i];
      if (u.text == ";") {
        r.alts.push_back(cur);
        closed = true;
        ++i;
        break;
      }
      if (u.text == "|") {
        r.alts.push_back(cur);
        cur.clear();
        ++i;
        continue;
      }
      if (u.text == ":" || u.text[0] == '%') {
        throw GrammarError("unexpected '" + u.text + "' in production", u.line,
                           u.col);
      }
      cur.push_back(u);
      ++i;
    }
    if (!closed) {
      throw GrammarError("production for '" + r.lhs.text + "' not closed with ';'",
                         r.lhs.line, r.lhs.col);
    }
    rules.push_back(std::move(r));
  }

  if (!seen_start) {
    throw GrammarError("missing %start", 1, 1);
  }
  if (rules.empty()) {
    throw GrammarError("no productions", 1, 1);
  }

  Grammar g;
  for (const Token& tk : token_names) {
    if (is_reserved(tk.text)) {
      throw GrammarError("reserved name '" + tk.text + "'", tk.line, tk.col);
    }
    if (g.by_name_.count(tk.text)) {
      throw GrammarError("duplicate token '" + tk.text + "'", tk.line, tk.col);
    }
    SymbolId id = static_cast<SymbolId>(g.symbols_.size());
    g.by_name_[tk.text] = id;
    g.symbols_.push_back({id, SymKind::Terminal, tk.text});
  }
  g.terminal_count_ = static_cast<int>(g.symbols_.size());

  for (const Rule& r : rules) {
    auto it = g.by_name_.find(r.lhs.text);
    if (it == g.by_name_.end()) {
      if (is_reserved(r.lhs.text)) {
        throw GrammarError("reserved name '" + r.lhs.text + "'", r.lhs.line,
                           r.lhs.col);
      }
      SymbolId id = static_cast<SymbolId>(g.symbols_.size());
      g.by_name_[r.lhs.text] = id;
      g.symbols_.push_back({id, SymKind::Nonterminal, r.lhs.text});
    } else if (g.symbols_[it->second].kind == SymKind::Terminal) {
      throw GrammarError("token '" + r.lhs.text + "' used as a nonterminal",
                         r.lhs.line, r.lhs.col);
    }
  }

  auto sit = g.by_name_.find(start_tok.text);
  if (sit == g.by_name_.end()) {
    throw GrammarError("start symbol '" + start_tok.text + "' has no productions",
                       start_tok.line, start_tok.col);
  }
  if (g.symbols_[sit->second].kind == SymKind::Terminal) {
    throw GrammarError("start symbol '" + start_tok.text + "' is a token",
                       start_tok.line, start_tok.col);
  }
  g.start_ = sit->second;

  g.prods_.push_back({0, kAugmented, {g.start_}});
  g.prods_of_.assign(g.nonterminal_count(), {});
  for (const Rule& r : rules) {
    SymbolId lhs = g.by_name_[r.lhs.text];
    for (const auto& alt : r.alts) {
      Production p;
      p.index = static_cast<int>(g.prods_.size());
      p.lhs = lhs;
      for (const Token& s : alt) {
        auto it = g.by_name_.find(s.text);
        if (it == g.by_name_.end()) {
          throw GrammarError("undeclared symbol '" + s.text + "'", s.line,
                             s.col);
        }
        p.rhs.push_back(it->second);
      }
      g.prods_of_[lhs - g.terminal_count_].push_back(p.index);
      g.prods_.push_back(std::move(p));
    }
  }
  return g;
}

std::string Grammar::name(SymbolId id) const {
  if (id == kAugmented) {
    return symbols_[start_].name + "'";
  }
  return symbols_[id].name;
}

SymbolId Grammar::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNoSymbol : it->second;
}

const std::vector<int>& Grammar::productions_of(SymbolId nonterminal) const {
  return prods_of_[nonterminal - terminal_count_];
}

int Grammar::size() const {
  int s = 0;
  for (std::size_t i = 1; i < prods_.size(); ++i) {
    s += 1 + static_cast<int>(prods_[i].rhs.size());
  }
  return s;
}

ReducedCheck Grammar::check_reduced() const {
  int ns = static_cast<int>(symbols_.size());
  std::vector<char> productive(ns, 0);
  for (int t = 0; t < terminal_count_; ++t) {
    productive[t] = 1;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t pi = 1; pi < prods_.size(); ++pi) {
      const Production& p = prods_[pi];
      if (productive[p.lhs]) continue;
      bool all = true;
      for (SymbolId s : p.rhs) {
        if (!productive[s]) {
          all = false;
          break;
        }
      }
      if (all) {
        productive[p.lhs] = 1;
        changed = true;
      }
    }
  }

  std::vector<char> reach(ns, 0);
  std::vector<SymbolId> work{start_};
  reach[start_] = 1;
  while (!work.empty()) {
    SymbolId a = work.back();
    work.pop_back();
    if (is_terminal(a)) continue;
    for (int pi : productions_of(a)) {
      for (SymbolId s : prods_[pi].rhs) {
        if (!reach[s]) {
          reach[s] = 1;
          work.push_back(s);
        }
      }
    }
  }

  ReducedCheck rc;
  for (SymbolId s = 0; s < ns; ++s) {
    if (!reach[s]) rc.unreachable.push_back(s);
    if (is_nonterminal(s) && !productive[s]) rc.unproductive.push_back(s);
  }
  return rc;
}

Grammar Grammar::reduced() const {
  int ns = static_cast<int>(symbols_.size());
  std::vector<char> productive(ns, 0);
  for (int t = 0; t < terminal_count_; ++t) {
    productive[t] = 1;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t pi = 1; pi < prods_.size(); ++pi) {
      const Production& p = prods_[pi];
      if (productive[p.lhs]) continue;
      bool all = true;
      for (SymbolId s : p.rhs) {
        if (!productive[s]) all = false;
      }
      if (all) {
        productive[p.lhs] = 1;
        changed = true;
      }
    }
  }
  if (!productive[start_]) {
    throw GrammarError("start symbol '" + symbols_[start_].name + "' is unproductive",
                       0, 0);
  }

  std::vector<char> keep(prods_.size(), 0);
  for (std::size_t pi = 1; pi < prods_.size(); ++pi) {
    const Production& p = prods_[pi];
    bool all = productive[p.lhs] != 0;
    for (SymbolId s : p.rhs) {
      if (!productive[s]) all = false;
    }
    keep[pi] = all;
  }

  std::vector<char> reach(ns, 0);
  std::vector<SymbolId> work{start_};
  reach[start_] = 1;
  while (!work.empty()) {
    SymbolId a = work.back();
    work.pop_back();
    if (is_terminal(a)) continue;
    for (int pi : productions_of(a)) {
      if (!keep[pi]) continue;
      for (SymbolId s : prods_[pi].rhs) {
        if (!reach[s]) {
          reach[s] = 1;
          work.push_back(s);
        }
      }
    }
  }

  std::ostringstream os;
  os << "%start " << symbols_[start_].name << "\n";
  bool any_term = false;
  for (int t = 0; t < terminal_count_; ++t) {
    if (reach[t]) any_term = true;
  }
  if (any_term) {
    os << "%tokens";
    for (int t = 0; t < terminal_count_; ++t) {
      if (reach[t]) os << ' ' << symbols_[t].name;
    }
    os << "\n";
  }
  for (std::size_t pi = 1; pi < prods_.size(); ++pi) {
    const Production& p = prods_[pi];
    if (!keep[pi] || !reach[p.lhs]) continue;
    os << symbols_[p.lhs].name << " :";
    for (SymbolId s : p.rhs) {
      os << ' ' << symbols_[s].name;
    }
    os << " ;\n";
  }
  return parse(os.str());
}

std::string Grammar::production_text(int index) const {
  const Production& p = prods_[index];
  std::string out = name(p.lhs) + " ->";
  if (p.rhs.empty()) {
    out += " eps";
  } else {
    for (SymbolId s : p.rhs) {
      out += ' ' + name(s);
    }
  }
  return out;
}

std::string Grammar::to_text() const {
  std::ostringstream os;
  os << "%start " << symbols_[start_].name << "\n";
  if (terminal_count_ > 0) {
    os << "%tokens";
    for (int t = 0; t < terminal_count_; ++t) {
      os << ' ' << symbols_[t].name;
    }
    os << "\n";
  }
  for (std::size_t pi = 1; pi < prods_.size(); ++pi) {
    const Production& p = prods_[pi];
    os << symbols_[p.lhs].name << " :";
    for (SymbolId s : p.rhs) {
      os << ' ' << symbols_[s].name;
    }
    os << " ;\n";
  }
  return os.str();
}

std::vector<SymbolId> tokenize_input(const Grammar& g, const std::string& text) {
  std::vector<SymbolId> out;
  std::istringstream is(text);
  std::string w;
  int pos = 1;
  while (is >> w) {
    SymbolId id = g.find(w);
    if (id == kNoSymbol) {
      throw GrammarError("input error: unknown token '" + w + "' at position " +
                             std::to_string(pos),
                         0, 0);
    }
    if (!g.is_terminal(id)) {
      throw GrammarError("input error: '" + w + "' is not a token at position " +
                             std::to_string(pos),
                         0, 0);
    }
    out.push_back(id);
    ++pos;
  }
  return out;
}

Grammar gen_gn(int n) {
  if (n < 1) {
    throw GrammarError("grammar family index must be at least 1", 0, 0);
  }
  std::ostringstream os;
  os << "%start S\n%tokens";
  for (int i = 1; i <= n; ++i) os << " a" << i;
  for (int i = 1; i <= n; ++i) os << " b" << i;
  os << "\n";
  for (int i = 1; i <= n; ++i) {
    os << "S : A" << i << " ;\n";
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      os << "A" << i << " : a" << j << " A" << i << " ;\n";
    }
  }
  for (int i = 1; i <= n; ++i) {
    os << "A" << i << " : a" << i << " B" << i << " | b" << i << " ;\n";
  }
  for (int i = 1; i <= n; ++i) {
    os << "B" << i << " :";
    for (int j = 1; j <= n; ++j) {
      os << " a" << j << " B" << i << " |";
    }
    os << " b" << i << " ;\n";
  }
  return Grammar::parse(os.str());
}

}  // namespace extlr

#include "foid/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace foid {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  End,
  Ident,
  Int,
  KwTrue,
  KwFalse,
  KwForall,
  KwExists,
  KwPred,
  KwFn,
  KwObj,
  KwDef,
  KwFormula,
  KwSequent,
  KwStructure,
  KwProof,
  KwOf,
  KwAt,
  KwDom,
  KwKeep,
  KwDrop,
  KwScheme,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Semi,
  Colon,
  ColonEq,
  Equal,
  Turnstile,
  LArrow,
  RArrow,
  Implies,
  Iff,
  Amp,
  Pipe,
  Tilde,
  Slash,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long value = 0;
  SourceSpan span;
};

const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kw = {
      {"true", Tok::KwTrue},         {"false", Tok::KwFalse},
      {"forall", Tok::KwForall},     {"exists", Tok::KwExists},
      {"pred", Tok::KwPred},         {"fn", Tok::KwFn},
      {"obj", Tok::KwObj},           {"def", Tok::KwDef},
      {"formula", Tok::KwFormula},   {"sequent", Tok::KwSequent},
      {"structure", Tok::KwStructure}, {"proof", Tok::KwProof},
      {"of", Tok::KwOf},             {"at", Tok::KwAt},
      {"dom", Tok::KwDom},           {"keep", Tok::KwKeep},
      {"drop", Tok::KwDrop},         {"scheme", Tok::KwScheme},
  };
  return kw;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto here = [&](std::size_t len) {
    SourceSpan s;
    s.begin = i;
    s.end = i + len;
    s.line = line;
    s.column = col;
    return s;
  };
  auto advance = [&](std::size_t len) {
    for (std::size_t k = 0; k < len; ++k) {
      if (i + k < text.size() && text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += len;
  };
  auto push = [&](Tok k, std::size_t len) {
    Token t;
    t.kind = k;
    t.text = text.substr(i, len);
    t.span = here(len);
    out.push_back(std::move(t));
    advance(len);
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      std::size_t j = i;
      while (j < text.size() && text[j] != '\n') ++j;
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_' || text[j] == '\''))
        ++j;
      std::string word = text.substr(i, j - i);
      auto it = keywords().find(word);
      push(it == keywords().end() ? Tok::Ident : it->second, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      Token t;
      t.kind = Tok::Int;
      t.text = text.substr(i, j - i);
      t.value = std::stol(t.text);
      t.span = here(j - i);
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (c == '<' && i + 2 < text.size() && text[i + 1] == '=' &&
        text[i + 2] == '>') {
      push(Tok::Iff, 3);
      continue;
    }
    if (two('<', '-')) {
      push(Tok::LArrow, 2);
      continue;
    }
    if (two('=', '>')) {
      push(Tok::Implies, 2);
      continue;
    }
    if (two('-', '>')) {
      push(Tok::RArrow, 2);
      continue;
    }
    if (two('|', '-')) {
      push(Tok::Turnstile, 2);
      continue;
    }
    if (two(':', '=')) {
      push(Tok::ColonEq, 2);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '[': push(Tok::LBrack, 1); continue;
      case ']': push(Tok::RBrack, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '=': push(Tok::Equal, 1); continue;
      case '&': push(Tok::Amp, 1); continue;
      case '|': push(Tok::Pipe, 1); continue;
      case '~': push(Tok::Tilde, 1); continue;
      case '/': push(Tok::Slash, 1); continue;
      default:
        throw FoidError("SyntaxError",
                        std::string("unexpected character '") + c + "'",
                        SourceSpan{i, i + 1, line, col});
    }
  }
  Token end;
  end.kind = Tok::End;
  end.span = SourceSpan{i, i, line, col};
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Scope {
  std::vector<std::string> bound;
  bool relaxed = false;

  bool is_bound(const std::string& n) const {
    return std::find(bound.begin(), bound.end(), n) != bound.end();
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Document parse_document() {
    Document doc;
    while (peek().kind != Tok::End) doc.items.push_back(parse_item());
    return doc;
  }

  Formula parse_single_formula(const std::map<std::string, int>& preds,
                               const std::map<std::string, int>& funcs,
                               bool relaxed) {
    preds_ = preds;
    funcs_ = funcs;
    Scope sc;
    sc.relaxed = relaxed;
    Formula f = parse_formula(sc);
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, int> preds_;
  std::map<std::string, int> funcs_;
  std::map<std::string, char> item_kind_;  // f/d/s/t (formula/def/seq/struct)
  std::map<std::string, Formula> named_formulas_;
  std::map<std::string, Definition> named_defs_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k)
      throw FoidError("SyntaxError",
                      "expected " + what + ", found '" + peek().text + "'",
                      peek().span);
    return toks_[pos_++];
  }
  [[noreturn]] void fail(const std::string& code, const std::string& msg,
                         const Token& tok) const {
    throw FoidError(code, msg, tok.span);
  }

  bool name_taken(const std::string& n) const {
    return preds_.count(n) || funcs_.count(n) || item_kind_.count(n);
  }

  void declare_symbol(bool is_pred, const std::string& name, int arity,
                      const Token& tok) {
    if (name_taken(name))
      fail("DuplicateName", "'" + name + "' is already declared", tok);
    (is_pred ? preds_ : funcs_)[name] = arity;
  }

  // ----- items ------------------------------------------------------------

  DocItem parse_item() {
    switch (peek().kind) {
      case Tok::KwPred:
      case Tok::KwFn:
      case Tok::KwObj:
        return parse_decl();
      case Tok::KwDef:
        return parse_def_item();
      case Tok::KwFormula:
        return parse_formula_item();
      case Tok::KwSequent:
        return parse_sequent_item();
      case Tok::KwStructure:
        return parse_struct_item();
      case Tok::KwProof:
        return parse_proof_item();
      case Tok::KwScheme:
        return parse_scheme_item();
      default:
        fail("SyntaxError",
             "expected a declaration, def, formula, sequent, structure or "
             "proof",
             peek());
    }
  }

  DeclItem parse_decl() {
    Tok kw = next().kind;
    DeclItem item;
    item.is_pred = (kw == Tok::KwPred);
    bool is_obj = (kw == Tok::KwObj);
    while (true) {
      const Token& name = expect(Tok::Ident, "a symbol name");
      int arity = 0;
      if (!is_obj) {
        expect(Tok::Slash, "'/' and an arity");
        arity = static_cast<int>(expect(Tok::Int, "an arity").value);
      }
      declare_symbol(item.is_pred, name.text, arity, name);
      item.sigs.emplace_back(name.text, arity);
      if (accept(Tok::Comma)) continue;
      expect(Tok::Dot, "'.'");
      break;
    }
    return item;
  }

  DefItem parse_def_item() {
    next();  // def
    const Token& name = expect(Tok::Ident, "a definition name");
    if (name_taken(name.text))
      fail("DuplicateName", "'" + name.text + "' is already declared", name);
    Scope sc;
    Definition d = parse_def_literal(sc);
    item_kind_[name.text] = 'd';
    named_defs_.emplace(name.text, d);
    return DefItem{name.text, std::move(d)};
  }

  FormulaItem parse_formula_item() {
    next();  // formula
    const Token& name = expect(Tok::Ident, "a formula name");
    if (name_taken(name.text))
      fail("DuplicateName", "'" + name.text + "' is already declared", name);
    expect(Tok::Colon, "':'");
    Scope sc;
    Formula f = parse_formula(sc);
    expect(Tok::Dot, "'.'");
    item_kind_[name.text] = 'f';
    named_formulas_.emplace(name.text, f);
    return FormulaItem{name.text, std::move(f)};
  }

  SequentItem parse_sequent_item() {
    next();  // sequent
    const Token& name = expect(Tok::Ident, "a sequent name");
    if (name_taken(name.text))
      fail("DuplicateName", "'" + name.text + "' is already declared", name);
    expect(Tok::Colon, "':'");
    Scope sc;
    Sequent s = parse_seq_body(sc, Tok::Dot);
    expect(Tok::Dot, "'.'");
    item_kind_[name.text] = 's';
    SequentItem item{name.text, std::move(s)};
    sequents_.emplace(item.name, item.seq);
    return item;
  }

  // fset '|-' fset, where fset is a formula list with optional brackets
  Sequent parse_seq_body(Scope& sc, Tok stop) {
    Sequent s;
    s.left = FormulaSet(parse_fset(sc, Tok::Turnstile));
    expect(Tok::Turnstile, "'|-'");
    s.right = FormulaSet(parse_fset(sc, stop));
    return s;
  }

  std::vector<Formula> parse_fset(Scope& sc, Tok stop) {
    std::vector<Formula> out;
    bool bracketed = accept(Tok::LBrack);
    Tok end = bracketed ? Tok::RBrack : stop;
    if (peek().kind != end) {
      out.push_back(parse_formula(sc));
      while (accept(Tok::Comma)) out.push_back(parse_formula(sc));
    }
    if (bracketed) expect(Tok::RBrack, "']'");
    return out;
  }

  StructItem parse_struct_item() {
    next();  // structure
    const Token& name = expect(Tok::Ident, "a structure name");
    if (name_taken(name.text))
      fail("DuplicateName", "'" + name.text + "' is already declared", name);
    expect(Tok::LBrace, "'{'");
    expect(Tok::KwDom, "'dom'");
    expect(Tok::Equal, "'='");
    const Token& dom_tok = expect(Tok::Int, "a domain size");
    if (dom_tok.value < 1)
      fail("SyntaxError", "domain size must be at least 1", dom_tok);
    Structure st;
    st.dom = static_cast<int>(dom_tok.value);
    expect(Tok::Semi, "';'");
    while (!accept(Tok::RBrace)) parse_struct_entry(st);
    item_kind_[name.text] = 't';
    structures_.emplace(name.text, st);
    return StructItem{name.text, std::move(st)};
  }

  int parse_element(int dom) {
    const Token& t = expect(Tok::Int, "a domain element");
    if (t.value < 0 || t.value >= dom)
      fail("OutOfDomain",
           "element " + t.text + " is outside the domain 0.." +
               std::to_string(dom - 1),
           t);
    return static_cast<int>(t.value);
  }

  void parse_struct_entry(Structure& st) {
    const Token& name = expect(Tok::Ident, "an interpreted symbol");
    if (preds_.count(name.text)) {
      int arity = preds_[name.text];
      expect(Tok::Equal, "'='");
      expect(Tok::LBrace, "'{'");
      std::set<std::vector<int>> tuples;
      if (peek().kind != Tok::RBrace) {
        do {
          tuples.insert(parse_tuple(st.dom, arity, name));
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBrace, "'}'");
      expect(Tok::Semi, "';'");
      if (st.rels.count(name.text))
        fail("DuplicateName", "'" + name.text + "' interpreted twice", name);
      st.rels[name.text] = std::move(tuples);
      return;
    }
    if (funcs_.count(name.text)) {
      int arity = funcs_[name.text];
      if (arity == 0) {
        expect(Tok::Equal, "'='");
        int v = parse_element(st.dom);
        expect(Tok::Semi, "';'");
        if (st.funcs.count(name.text))
          fail("DuplicateName", "'" + name.text + "' interpreted twice",
               name);
        st.funcs[name.text] = FuncInterp{0, {v}};
        return;
      }
      expect(Tok::Colon, "':'");
      std::size_t size = 1;
      for (int k = 0; k < arity; ++k) size *= st.dom;
      std::vector<int> table(size, -1);
      do {
        std::vector<int> args;
        if (accept(Tok::LParen)) {
          args.push_back(parse_element(st.dom));
          while (accept(Tok::Comma)) args.push_back(parse_element(st.dom));
          expect(Tok::RParen, "')'");
        } else {
          args.push_back(parse_element(st.dom));
        }
        if (static_cast<int>(args.size()) != arity)
          fail("ArityMismatch",
               "'" + name.text + "' takes " + std::to_string(arity) +
                   " arguments",
               name);
        expect(Tok::RArrow, "'->'");
        int v = parse_element(st.dom);
        std::size_t idx = 0;
        for (int a : args) idx = idx * st.dom + a;
        if (table[idx] != -1)
          fail("DuplicateName",
               "'" + name.text + "' maps one argument tuple twice", name);
        table[idx] = v;
      } while (accept(Tok::Comma));
      expect(Tok::Semi, "';'");
      for (int v : table)
        if (v == -1)
          fail("IncompleteFunctionTable",
               "the table for '" + name.text + "' misses argument tuples",
               name);
      if (st.funcs.count(name.text))
        fail("DuplicateName", "'" + name.text + "' interpreted twice", name);
      st.funcs[name.text] = FuncInterp{arity, std::move(table)};
      return;
    }
    fail("UnknownSymbol", "'" + name.text + "' is not declared", name);
  }

  std::vector<int> parse_tuple(int dom, int arity, const Token& name) {
    std::vector<int> tuple;
    if (accept(Tok::LParen)) {
      if (peek().kind != Tok::RParen) {
        tuple.push_back(parse_element(dom));
        while (accept(Tok::Comma)) tuple.push_back(parse_element(dom));
      }
      expect(Tok::RParen, "')'");
    } else {
      tuple.push_back(parse_element(dom));
    }
    if (static_cast<int>(tuple.size()) != arity)
      fail("ArityMismatch",
           "'" + name.text + "' holds tuples of length " +
               std::to_string(arity),
           name);
    return tuple;
  }

  ProofItem parse_proof_item() {
    next();  // proof
    expect(Tok::KwOf, "'of'");
    const Token& name = expect(Tok::Ident, "a sequent name");
    if (!sequents_.count(name.text))
      fail("UnknownSymbol", "no sequent named '" + name.text + "'", name);
    expect(Tok::Colon, "':'");
    Scope sc;
    sc.relaxed = true;
    ScriptNode root = parse_node(sc);
    return ProofItem{name.text, std::move(root)};
  }

  // scheme <name> of <def-name>: <pred>, [<pred>, ...] (, <hyp>)* .
  SchemeItem parse_scheme_item() {
    next();  // scheme
    const Token& name = expect(Tok::Ident, "a scheme name");
    if (name_taken(name.text))
      fail("DuplicateName", "'" + name.text + "' is already declared", name);
    expect(Tok::KwOf, "'of'");
    const Token& dn = expect(Tok::Ident, "a definition name");
    auto it = named_defs_.find(dn.text);
    if (it == named_defs_.end())
      fail("UnknownSymbol", "no definition named '" + dn.text + "'", dn);
    expect(Tok::Colon, "':'");
    SchemeItem item;
    item.name = name.text;
    item.def_name = dn.text;
    const Token& pr = expect(Tok::Ident, "a defined predicate");
    if (it->second.arity_of(pr.text) < 0)
      fail("UnknownSymbol",
           "'" + pr.text + "' is not defined by '" + dn.text + "'", pr);
    item.principal = pr.text;
    expect(Tok::Comma, "','");
    expect(Tok::LBrack, "'['");
    if (peek().kind != Tok::RBrack) {
      item.pi.push_back(expect(Tok::Ident, "a predicate").text);
      while (accept(Tok::Comma))
        item.pi.push_back(expect(Tok::Ident, "a predicate").text);
    }
    expect(Tok::RBrack, "']'");
    Scope sc;
    while (accept(Tok::Comma)) item.hyps.push_back(parse_hyp(sc));
    expect(Tok::Dot, "'.'");
    item_kind_[name.text] = 'h';
    return item;
  }

  // ----- proof scripts ----------------------------------------------------

  ScriptNode parse_node(Scope& sc) {
    const Token& tag = expect(Tok::Ident, "a rule tag");
    ScriptNode node;
    node.tag = tag.text;
    node.span = tag.span;
    if (accept(Tok::LParen)) {
      parse_node_args(node, sc, tag);
      expect(Tok::RParen, "')'");
    }
    if (accept(Tok::KwAt)) node.at = parse_seq_literal(sc);
    if (accept(Tok::LBrace)) {
      while (!accept(Tok::RBrace)) node.children.push_back(parse_node(sc));
    } else {
      expect(Tok::Semi, "';'");
    }
    return node;
  }

  Sequent parse_seq_literal(Scope& sc) {
    expect(Tok::LBrack, "'['");
    Sequent s;
    std::vector<Formula> left;
    if (peek().kind != Tok::Turnstile) {
      left.push_back(parse_formula(sc));
      while (accept(Tok::Comma)) left.push_back(parse_formula(sc));
    }
    expect(Tok::Turnstile, "'|-'");
    std::vector<Formula> right;
    if (peek().kind != Tok::RBrack) {
      right.push_back(parse_formula(sc));
      while (accept(Tok::Comma)) right.push_back(parse_formula(sc));
    }
    expect(Tok::RBrack, "']'");
    s.left = FormulaSet(std::move(left));
    s.right = FormulaSet(std::move(right));
    return s;
  }

  void parse_keep_drop(ScriptNode& node) {
    if (accept(Tok::Comma)) {
      if (accept(Tok::KwKeep))
        node.keep = true;
      else if (accept(Tok::KwDrop))
        node.drop = true;
      else
        fail("SyntaxError", "expected 'keep' or 'drop'", peek());
    }
  }

  void parse_node_args(ScriptNode& node, Scope& sc, const Token& tag) {
    const std::string& t = node.tag;
    if (t == "ax" || t == "eqR") {
      return;  // no arguments
    }
    if (t == "wk") {
      node.seq_arg = parse_seq_literal(sc);
      return;
    }
    if (t == "subst") {
      node.seq_arg = parse_seq_literal(sc);
      expect(Tok::Comma, "','");
      node.terms.push_back(parse_term(sc));
      expect(Tok::Comma, "','");
      node.symbols.push_back(expect(Tok::Ident, "an object symbol").text);
      return;
    }
    if (t == "cut") {
      node.formulas.push_back(parse_formula(sc));
      return;
    }
    if (t == "notL" || t == "notR" || t == "andL" || t == "andR" ||
        t == "orL" || t == "orR" || t == "impL" || t == "impR" ||
        t == "iffL" || t == "iffR" || t == "allR" || t == "exL") {
      node.formulas.push_back(parse_formula(sc));
      parse_keep_drop(node);
      return;
    }
    if (t == "allL" || t == "exR") {
      node.formulas.push_back(parse_formula(sc));
      expect(Tok::Comma, "','");
      node.terms.push_back(parse_term(sc));
      parse_keep_drop(node);
      return;
    }
    if (t == "eqL") {
      node.symbols.push_back(expect(Tok::Ident, "a template symbol").text);
      expect(Tok::Comma, "','");
      node.symbols.push_back(expect(Tok::Ident, "a template symbol").text);
      expect(Tok::Comma, "','");
      node.terms.push_back(parse_term(sc));
      expect(Tok::Comma, "','");
      node.terms.push_back(parse_term(sc));
      expect(Tok::Comma, "','");
      node.seq_arg = parse_seq_literal(sc);
      return;
    }
    if (t == "defR") {
      node.formulas.push_back(parse_formula(sc));
      expect(Tok::Comma, "','");
      node.rule_index =
          static_cast<int>(expect(Tok::Int, "a rule index").value);
      expect(Tok::Comma, "','");
      expect(Tok::LBrack, "'['");
      if (peek().kind != Tok::RBrack) {
        node.terms.push_back(parse_term(sc));
        while (accept(Tok::Comma)) node.terms.push_back(parse_term(sc));
      }
      expect(Tok::RBrack, "']'");
      parse_keep_drop(node);
      return;
    }
    if (t == "defL" || t == "defL2") {
      node.formulas.push_back(parse_formula(sc));
      expect(Tok::Comma, "','");
      node.formulas.push_back(parse_formula(sc));
      expect(Tok::Comma, "','");
      expect(Tok::LBrack, "'['");
      if (peek().kind != Tok::RBrack) {
        node.symbols.push_back(expect(Tok::Ident, "a predicate").text);
        while (accept(Tok::Comma))
          node.symbols.push_back(expect(Tok::Ident, "a predicate").text);
      }
      expect(Tok::RBrack, "']'");
      while (accept(Tok::Comma)) node.hyps.push_back(parse_hyp(sc));
      return;
    }
    fail("SyntaxError", "unknown rule tag '" + t + "'", tag);
  }

  Hypothesis parse_hyp(Scope& sc) {
    Hypothesis h;
    h.pred = expect(Tok::Ident, "a predicate").text;
    if (accept(Tok::LParen)) {
      if (peek().kind != Tok::RParen) {
        h.vars.push_back(expect(Tok::Ident, "a placeholder").text);
        while (accept(Tok::Comma))
          h.vars.push_back(expect(Tok::Ident, "a placeholder").text);
      }
      expect(Tok::RParen, "')'");
    }
    expect(Tok::ColonEq, "':='");
    Scope inner = sc;
    for (const std::string& v : h.vars) inner.bound.push_back(v);
    h.formula = parse_formula(inner);
    return h;
  }

  // ----- formulas -----------------------------------------------------------

  Formula parse_formula(Scope& sc) {
    if (peek().kind == Tok::KwForall || peek().kind == Tok::KwExists)
      return parse_quantified(sc);
    return parse_iff(sc);
  }

  Formula parse_quantified(Scope& sc) {
    bool universal = next().kind == Tok::KwForall;
    std::vector<std::string> vars;
    while (true) {
      const Token& v = expect(Tok::Ident, "a bound symbol");
      if (preds_.count(v.text) ||
          (funcs_.count(v.text) && funcs_[v.text] > 0) ||
          item_kind_.count(v.text))
        fail("SyntaxError",
             "'" + v.text + "' is declared and cannot be bound", v);
      vars.push_back(v.text);
      if (accept(Tok::Comma)) continue;
      expect(Tok::Dot, "'.'");
      break;
    }
    Scope inner = sc;
    for (const std::string& v : vars) inner.bound.push_back(v);
    Formula body = parse_formula(inner);
    for (std::size_t i = vars.size(); i-- > 0;)
      body = universal ? Formula::forall(vars[i], std::move(body))
                       : Formula::exists(vars[i], std::move(body));
    return body;
  }

  Formula parse_iff(Scope& sc) {
    Formula a = parse_imp(sc);
    while (accept(Tok::Iff)) a = Formula::iff(std::move(a), parse_imp(sc));
    return a;
  }

  Formula parse_imp(Scope& sc) {
    Formula a = parse_or(sc);
    if (accept(Tok::Implies))
      return Formula::imp(std::move(a), parse_imp(sc));
    return a;
  }

  Formula parse_or(Scope& sc) {
    Formula a = parse_and(sc);
    while (accept(Tok::Pipe)) a = Formula::lor(std::move(a), parse_and(sc));
    return a;
  }

  Formula parse_and(Scope& sc) {
    Formula a = parse_unary(sc);
    while (accept(Tok::Amp)) a = Formula::land(std::move(a), parse_unary(sc));
    return a;
  }

  Formula parse_unary(Scope& sc) {
    if (accept(Tok::Tilde)) return Formula::lnot(parse_unary(sc));
    return parse_primary(sc);
  }

  Formula parse_primary(Scope& sc) {
    if (accept(Tok::KwTrue)) return Formula::verum();
    if (accept(Tok::KwFalse)) return Formula::falsum();
    if (accept(Tok::LParen)) {
      Formula f = parse_formula(sc);
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind == Tok::LBrace)
      return Formula::def(parse_def_literal(sc));
    if (peek().kind == Tok::Ident) return parse_atom_or_eq(sc);
    fail("SyntaxError", "expected a formula, found '" + peek().text + "'",
         peek());
  }

  Definition parse_def_literal(Scope& sc) {
    const Token& open = expect(Tok::LBrace, "'{'");
    Definition d;
    while (!accept(Tok::RBrace)) d.rules.push_back(parse_rule(sc));
    if (d.rules.empty())
      fail("SyntaxError", "a definition needs at least one rule", open);
    try {
      validate_definition(d);
    } catch (const FoidError& e) {
      throw FoidError(e.code(), e.what(), open.span);
    }
    return d;
  }

  Rule parse_rule(Scope& sc) {
    Rule r;
    if (accept(Tok::KwForall)) {
      while (true) {
        const Token& v = expect(Tok::Ident, "a bound symbol");
        if (preds_.count(v.text) ||
            (funcs_.count(v.text) && funcs_[v.text] > 0) ||
            item_kind_.count(v.text))
          fail("SyntaxError",
               "'" + v.text + "' is declared and cannot be bound", v);
        r.bound.push_back(v.text);
        if (accept(Tok::Comma)) continue;
        expect(Tok::Dot, "'.'");
        break;
      }
    }
    Scope inner = sc;
    for (const std::string& v : r.bound) inner.bound.push_back(v);
    const Token& head = expect(Tok::Ident, "a predicate");
    auto it = preds_.find(head.text);
    if (it == preds_.end())
      fail("UnknownSymbol", "'" + head.text + "' is not a declared predicate",
           head);
    if (accept(Tok::LParen)) {
      if (peek().kind != Tok::RParen) {
        r.head_args.push_back(parse_term(inner));
        while (accept(Tok::Comma)) r.head_args.push_back(parse_term(inner));
      }
      expect(Tok::RParen, "')'");
    }
    if (static_cast<int>(r.head_args.size()) != it->second)
      fail("ArityMismatch",
           "'" + head.text + "' expects " + std::to_string(it->second) +
               " arguments",
           head);
    r.head_pred = head.text;
    expect(Tok::LArrow, "'<-'");
    r.body_ptr = std::make_shared<const Formula>(parse_formula(inner));
    expect(Tok::Dot, "'.'");
    return r;
  }

  // Parses a maximal term; on '=' the result is an equation, otherwise the
  // term is reinterpreted as an atom or named reference.
  Formula parse_atom_or_eq(Scope& sc) {
    const Token& start = peek();
    Term t = parse_raw_term();
    if (accept(Tok::Equal)) {
      check_term(t, sc, start);
      const Token& rstart = peek();
      Term rhs = parse_raw_term();
      check_term(rhs, sc, rstart);
      return Formula::eq(std::move(t), std::move(rhs));
    }
    // atom or named reference
    if (t.is_symbol() && !sc.is_bound(t.fn)) {
      auto itf = named_formulas_.find(t.fn);
      if (itf != named_formulas_.end()) return itf->second;
      auto itd = named_defs_.find(t.fn);
      if (itd != named_defs_.end()) return Formula::def(itd->second);
    }
    auto itp = preds_.find(t.fn);
    if (itp == preds_.end())
      fail("UnknownSymbol",
           "'" + t.fn + "' is not a declared predicate or named formula",
           start);
    if (static_cast<int>(t.args.size()) != itp->second)
      fail("ArityMismatch",
           "'" + t.fn + "' expects " + std::to_string(itp->second) +
               " arguments",
           start);
    for (const Term& a : t.args) check_term(a, sc, start);
    return Formula::atom(t.fn, std::move(t.args));
  }

  Term parse_term(Scope& sc) {
    const Token& start = peek();
    Term t = parse_raw_term();
    check_term(t, sc, start);
    return t;
  }

  // term syntax without symbol resolution
  Term parse_raw_term() {
    const Token& name = expect(Tok::Ident, "a term");
    Term t(name.text);
    if (accept(Tok::LParen)) {
      if (peek().kind != Tok::RParen) {
        t.args.push_back(parse_raw_term());
        while (accept(Tok::Comma)) t.args.push_back(parse_raw_term());
      }
      expect(Tok::RParen, "')'");
    }
    return t;
  }

  void check_term(const Term& t, const Scope& sc, const Token& at) const {
    if (t.is_symbol()) {
      if (sc.is_bound(t.fn)) return;
      auto it = funcs_.find(t.fn);
      if (it != funcs_.end()) {
        if (it->second != 0)
          fail("ArityMismatch",
               "'" + t.fn + "' expects " + std::to_string(it->second) +
                   " arguments",
               at);
        return;
      }
      if (sc.relaxed && !preds_.count(t.fn) && !item_kind_.count(t.fn))
        return;
      fail("UnknownSymbol", "'" + t.fn + "' is not a declared object", at);
    }
    auto it = funcs_.find(t.fn);
    if (it == funcs_.end())
      fail("UnknownSymbol", "'" + t.fn + "' is not a declared function", at);
    if (it->second != static_cast<int>(t.args.size()))
      fail("ArityMismatch",
           "'" + t.fn + "' expects " + std::to_string(it->second) +
               " arguments",
           at);
    for (const Term& a : t.args) check_term(a, sc, at);
  }

  std::map<std::string, Sequent> sequents_;
  std::map<std::string, Structure> structures_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Equality
// ---------------------------------------------------------------------------

bool operator==(const Hypothesis& a, const Hypothesis& b) {
  return a.pred == b.pred && a.vars == b.vars && a.formula == b.formula;
}

bool operator==(const ScriptNode& a, const ScriptNode& b) {
  return a.tag == b.tag && a.formulas == b.formulas && a.terms == b.terms &&
         a.symbols == b.symbols && a.hyps == b.hyps &&
         a.seq_arg == b.seq_arg && a.at == b.at &&
         a.rule_index == b.rule_index && a.keep == b.keep &&
         a.drop == b.drop && a.children == b.children;
}

namespace {

bool item_eq(const DocItem& a, const DocItem& b) {
  if (a.index() != b.index()) return false;
  if (const auto* d = std::get_if<DeclItem>(&a))
    return d->is_pred == std::get<DeclItem>(b).is_pred &&
           d->sigs == std::get<DeclItem>(b).sigs;
  if (const auto* f = std::get_if<FormulaItem>(&a))
    return f->name == std::get<FormulaItem>(b).name &&
           f->formula == std::get<FormulaItem>(b).formula;
  if (const auto* d = std::get_if<DefItem>(&a)) {
    const auto& bd = std::get<DefItem>(b);
    return d->name == bd.name &&
           Formula::def(d->def) == Formula::def(bd.def);
  }
  if (const auto* s = std::get_if<SequentItem>(&a))
    return s->name == std::get<SequentItem>(b).name &&
           s->seq == std::get<SequentItem>(b).seq;
  if (const auto* s = std::get_if<StructItem>(&a))
    return s->name == std::get<StructItem>(b).name &&
           s->structure == std::get<StructItem>(b).structure;
  if (const auto* p = std::get_if<ProofItem>(&a))
    return p->of == std::get<ProofItem>(b).of &&
           p->root == std::get<ProofItem>(b).root;
  if (const auto* m = std::get_if<SchemeItem>(&a)) {
    const auto& bm = std::get<SchemeItem>(b);
    return m->name == bm.name && m->def_name == bm.def_name &&
           m->principal == bm.principal && m->pi == bm.pi &&
           m->hyps == bm.hyps;
  }
  return false;
}

}  // namespace

bool operator==(const Document& a, const Document& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (!item_eq(a.items[i], b.items[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Document lookups
// ---------------------------------------------------------------------------

const Definition* Document::find_def(const std::string& name) const {
  for (const DocItem& it : items)
    if (const auto* d = std::get_if<DefItem>(&it))
      if (d->name == name) return &d->def;
  return nullptr;
}

const Formula* Document::find_formula(const std::string& name) const {
  for (const DocItem& it : items)
    if (const auto* f = std::get_if<FormulaItem>(&it))
      if (f->name == name) return &f->formula;
  return nullptr;
}

const Sequent* Document::find_sequent(const std::string& name) const {
  for (const DocItem& it : items)
    if (const auto* s = std::get_if<SequentItem>(&it))
      if (s->name == name) return &s->seq;
  return nullptr;
}

const Structure* Document::find_structure(const std::string& name) const {
  for (const DocItem& it : items)
    if (const auto* s = std::get_if<StructItem>(&it))
      if (s->name == name) return &s->structure;
  return nullptr;
}

std::vector<const ProofItem*> Document::proofs() const {
  std::vector<const ProofItem*> out;
  for (const DocItem& it : items)
    if (const auto* p = std::get_if<ProofItem>(&it)) out.push_back(p);
  return out;
}

std::vector<const ProofItem*> Document::proofs_of(
    const std::string& name) const {
  std::vector<const ProofItem*> out;
  for (const ProofItem* p : proofs())
    if (p->of == name) out.push_back(p);
  return out;
}

std::vector<const SchemeItem*> Document::schemes() const {
  std::vector<const SchemeItem*> out;
  for (const DocItem& it : items)
    if (const auto* m = std::get_if<SchemeItem>(&it)) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

Document parse_document(const std::string& text) {
  return Parser(text).parse_document();
}

Formula parse_formula(const std::string& text,
                      const std::map<std::string, int>& preds,
                      const std::map<std::string, int>& funcs, bool relaxed) {
  return Parser(text).parse_single_formula(preds, funcs, relaxed);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Operand-safe formula rendering for comma-separated lists: quantified
// formulas are parenthesized so the list comma cannot be misread.
std::string guarded(const Formula& f) {
  if (f.kind() == FKind::Forall || f.kind() == FKind::Exists)
    return "(" + to_string(f) + ")";
  return to_string(f);
}

std::string hyp_text(const Hypothesis& h) {
  std::string hs = h.pred;
  if (!h.vars.empty()) {
    hs += "(";
    for (std::size_t i = 0; i < h.vars.size(); ++i) {
      if (i) hs += ", ";
      hs += h.vars[i];
    }
    hs += ")";
  }
  hs += " := " + guarded(h.formula);
  return hs;
}

std::string seq_literal(const Sequent& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.left.items().size(); ++i) {
    if (i) out += ", ";
    out += guarded(s.left.items()[i]);
  }
  if (!s.left.empty()) out += " ";
  out += "|-";
  for (std::size_t i = 0; i < s.right.items().size(); ++i) {
    out += i ? ", " : " ";
    out += guarded(s.right.items()[i]);
  }
  out += "]";
  return out;
}

void print_node(const ScriptNode& n, int indent, std::string& out) {
  std::string pad(indent, ' ');
  out += pad;
  out += n.tag;
  std::vector<std::string> args;
  const std::string& t = n.tag;
  if (t == "wk") {
    args.push_back(seq_literal(*n.seq_arg));
  } else if (t == "subst") {
    args.push_back(seq_literal(*n.seq_arg));
    args.push_back(to_string(n.terms[0]));
    args.push_back(n.symbols[0]);
  } else if (t == "cut") {
    args.push_back(guarded(n.formulas[0]));
  } else if (t == "notL" || t == "notR" || t == "andL" || t == "andR" ||
             t == "orL" || t == "orR" || t == "impL" || t == "impR" ||
             t == "iffL" || t == "iffR" || t == "allR" || t == "exL") {
    args.push_back(guarded(n.formulas[0]));
  } else if (t == "allL" || t == "exR") {
    args.push_back(guarded(n.formulas[0]));
    args.push_back(to_string(n.terms[0]));
  } else if (t == "eqL") {
    args.push_back(n.symbols[0]);
    args.push_back(n.symbols[1]);
    args.push_back(to_string(n.terms[0]));
    args.push_back(to_string(n.terms[1]));
    args.push_back(seq_literal(*n.seq_arg));
  } else if (t == "defR") {
    args.push_back(guarded(n.formulas[0]));
    args.push_back(std::to_string(n.rule_index));
    std::string ws = "[";
    for (std::size_t i = 0; i < n.terms.size(); ++i) {
      if (i) ws += ", ";
      ws += to_string(n.terms[i]);
    }
    ws += "]";
    args.push_back(std::move(ws));
  } else if (t == "defL" || t == "defL2") {
    args.push_back(guarded(n.formulas[0]));
    args.push_back(guarded(n.formulas[1]));
    std::string ps = "[";
    for (std::size_t i = 0; i < n.symbols.size(); ++i) {
      if (i) ps += ", ";
      ps += n.symbols[i];
    }
    ps += "]";
    args.push_back(std::move(ps));
    for (const Hypothesis& h : n.hyps) args.push_back(hyp_text(h));
  }
  if (n.keep) args.push_back("keep");
  if (n.drop) args.push_back("drop");
  if (!args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += args[i];
    }
    out += ")";
  }
  if (n.at) {
    out += " at ";
    out += seq_literal(*n.at);
  }
  if (n.children.empty()) {
    out += ";\n";
  } else {
    out += " {\n";
    for (const ScriptNode& c : n.children)
      print_node(c, indent + 2, out);
    out += pad;
    out += "}\n";
  }
}

}  // namespace

std::string print_document(const Document& doc) {
  std::string out;
  for (const DocItem& item : doc.items) {
    if (const auto* d = std::get_if<DeclItem>(&item)) {
      out += d->is_pred ? "pred " : "fn ";
      for (std::size_t i = 0; i < d->sigs.size(); ++i) {
        if (i) out += ", ";
        out += d->sigs[i].first + "/" + std::to_string(d->sigs[i].second);
      }
      out += ".\n";
    } else if (const auto* f = std::get_if<FormulaItem>(&item)) {
      out += "formula " + f->name + ": " + to_string(f->formula) + ".\n";
    } else if (const auto* d2 = std::get_if<DefItem>(&item)) {
      out += "def " + d2->name + " " + to_string(Formula::def(d2->def)) +
             "\n";
    } else if (const auto* s = std::get_if<SequentItem>(&item)) {
      std::string lit = seq_literal(s->seq);
      out += "sequent " + s->name + ": " +
             lit.substr(1, lit.size() - 2) + ".\n";
    } else if (const auto* st = std::get_if<StructItem>(&item)) {
      out += "structure " + st->name + " {\n";
      out += "  dom = " + std::to_string(st->structure.dom) + ";\n";
      for (const auto& [name, fi] : st->structure.funcs) {
        if (fi.arity == 0) {
          out += "  " + name + " = " + std::to_string(fi.table[0]) + ";\n";
          continue;
        }
        out += "  " + name + ": ";
        std::vector<std::vector<int>> tuples;
        {
          std::vector<int> cur(fi.arity, 0);
          for (std::size_t idx = 0; idx < fi.table.size(); ++idx) {
            std::size_t rem = idx;
            for (int k = fi.arity - 1; k >= 0; --k) {
              cur[k] = static_cast<int>(rem % st->structure.dom);
              rem /= st->structure.dom;
            }
            tuples.push_back(cur);
          }
        }
        for (std::size_t idx = 0; idx < fi.table.size(); ++idx) {
          if (idx) out += ", ";
          if (fi.arity == 1) {
            out += std::to_string(tuples[idx][0]);
          } else {
            out += "(";
            for (int k = 0; k < fi.arity; ++k) {
              if (k) out += ", ";
              out += std::to_string(tuples[idx][k]);
            }
            out += ")";
          }
          out += " -> " + std::to_string(fi.table[idx]);
        }
        out += ";\n";
      }
      for (const auto& [name, tuples] : st->structure.rels) {
        out += "  " + name + " = {";
        bool first = true;
        for (const std::vector<int>& tup : tuples) {
          if (!first) out += ", ";
          first = false;
          if (tup.size() == 1) {
            out += std::to_string(tup[0]);
          } else {
            out += "(";
            for (std::size_t k = 0; k < tup.size(); ++k) {
              if (k) out += ", ";
              out += std::to_string(tup[k]);
            }
            out += ")";
          }
        }
        out += "};\n";
      }
      out += "}\n";
    } else if (const auto* p = std::get_if<ProofItem>(&item)) {
      out += "proof of " + p->of + ": ";
      std::string body;
      print_node(p->root, 0, body);
      // splice the first line onto the header
      out += body;
    } else if (const auto* m = std::get_if<SchemeItem>(&item)) {
      out += "scheme " + m->name + " of " + m->def_name + ": " +
             m->principal + ", [";
      for (std::size_t i = 0; i < m->pi.size(); ++i) {
        if (i) out += ", ";
        out += m->pi[i];
      }
      out += "]";
      for (const Hypothesis& h : m->hyps) out += ", " + hyp_text(h);
      out += ".\n";
    }
  }
  return out;
}

}  // namespace foid

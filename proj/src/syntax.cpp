#include "foid/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace foid {

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

int compare(const Term& a, const Term& b) {
  if (int c = a.fn.compare(b.fn)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(a.args[i], b.args[i])) return c;
  return 0;
}

bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Formula
// ---------------------------------------------------------------------------

Formula::Formula() {
  auto n = std::make_shared<Node>();
  n->kind = FKind::True;
  node_ = std::move(n);
}

const Term& Formula::eq_lhs() const { return node_->t1; }
const Term& Formula::eq_rhs() const { return node_->t2; }
const std::string& Formula::pred() const { return node_->name; }
const std::vector<Term>& Formula::args() const { return node_->atom_args; }
const Formula& Formula::sub() const { return node_->subs[0]; }
const Formula& Formula::lhs() const { return node_->subs[0]; }
const Formula& Formula::rhs() const { return node_->subs[1]; }
const std::string& Formula::var() const { return node_->name; }
const Definition& Formula::def() const { return *node_->definition; }

Formula Formula::falsum() {
  auto n = std::make_shared<Node>();
  n->kind = FKind::False;
  return Formula(std::move(n));
}

Formula Formula::verum() { return Formula(); }

Formula Formula::eq(Term l, Term r) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Eq;
  n->t1 = std::move(l);
  n->t2 = std::move(r);
  return Formula(std::move(n));
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Atom;
  n->name = std::move(pred);
  n->atom_args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::lnot(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Not;
  n->subs = {std::move(f)};
  return Formula(std::move(n));
}

Formula Formula::land(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::And;
  n->subs = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::lor(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Or;
  n->subs = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::imp(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Imp;
  n->subs = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::iff(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Iff;
  n->subs = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Forall;
  n->name = std::move(var);
  n->subs = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Exists;
  n->name = std::move(var);
  n->subs = {std::move(body)};
  return Formula(std::move(n));
}

Formula Formula::def(Definition d) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Def;
  n->definition = std::make_shared<const Definition>(std::move(d));
  return Formula(std::move(n));
}

static int compare(const Rule& a, const Rule& b) {
  if (a.bound != b.bound) return a.bound < b.bound ? -1 : 1;
  if (int c = a.head_pred.compare(b.head_pred)) return c < 0 ? -1 : 1;
  if (a.head_args.size() != b.head_args.size())
    return a.head_args.size() < b.head_args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.head_args.size(); ++i)
    if (int c = compare(a.head_args[i], b.head_args[i])) return c;
  return compare(a.body(), b.body());
}

static int compare(const Definition& a, const Definition& b) {
  if (a.rules.size() != b.rules.size())
    return a.rules.size() < b.rules.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (int c = compare(a.rules[i], b.rules[i])) return c;
  return 0;
}

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case FKind::False:
    case FKind::True:
      return 0;
    case FKind::Eq:
      if (int c = compare(a.eq_lhs(), b.eq_lhs())) return c;
      return compare(a.eq_rhs(), b.eq_rhs());
    case FKind::Atom: {
      if (int c = a.pred().compare(b.pred())) return c < 0 ? -1 : 1;
      if (a.args().size() != b.args().size())
        return a.args().size() < b.args().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (int c = compare(a.args()[i], b.args()[i])) return c;
      return 0;
    }
    case FKind::Not:
      return compare(a.sub(), b.sub());
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      if (int c = compare(a.lhs(), b.lhs())) return c;
      return compare(a.rhs(), b.rhs());
    case FKind::Forall:
    case FKind::Exists:
      if (int c = a.var().compare(b.var())) return c < 0 ? -1 : 1;
      return compare(a.sub(), b.sub());
    case FKind::Def:
      return compare(a.def(), b.def());
  }
  return 0;
}

bool operator==(const Formula& a, const Formula& b) {
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Definition basics
// ---------------------------------------------------------------------------

std::vector<std::string> Definition::defined_order() const {
  std::vector<std::string> order;
  for (const Rule& r : rules)
    if (std::find(order.begin(), order.end(), r.head_pred) == order.end())
      order.push_back(r.head_pred);
  return order;
}

std::set<std::string> Definition::defined() const {
  std::set<std::string> out;
  for (const Rule& r : rules) out.insert(r.head_pred);
  return out;
}

int Definition::arity_of(const std::string& pred) const {
  for (const Rule& r : rules)
    if (r.head_pred == pred) return static_cast<int>(r.head_args.size());
  return -1;
}

// ---------------------------------------------------------------------------
// FormulaSet
// ---------------------------------------------------------------------------

FormulaSet::FormulaSet(std::initializer_list<Formula> fs) : items_(fs) {
  normalize_storage();
}

FormulaSet::FormulaSet(std::vector<Formula> fs) : items_(std::move(fs)) {
  normalize_storage();
}

void FormulaSet::normalize_storage() {
  std::sort(items_.begin(), items_.end(),
            [](const Formula& a, const Formula& b) {
              return compare(a, b) < 0;
            });
  items_.erase(std::unique(items_.begin(), items_.end(),
                           [](const Formula& a, const Formula& b) {
                             return compare(a, b) == 0;
                           }),
               items_.end());
}

bool FormulaSet::contains(const Formula& f) const {
  return std::binary_search(items_.begin(), items_.end(), f,
                            [](const Formula& a, const Formula& b) {
                              return compare(a, b) < 0;
                            });
}

bool FormulaSet::subset_of(const FormulaSet& other) const {
  for (const Formula& f : items_)
    if (!other.contains(f)) return false;
  return true;
}

bool FormulaSet::intersects(const FormulaSet& other) const {
  for (const Formula& f : items_)
    if (other.contains(f)) return true;
  return false;
}

FormulaSet FormulaSet::with(const Formula& f) const {
  if (contains(f)) return *this;
  FormulaSet out = *this;
  out.items_.push_back(f);
  out.normalize_storage();
  return out;
}

FormulaSet FormulaSet::without(const Formula& f) const {
  FormulaSet out;
  out.items_.reserve(items_.size());
  for (const Formula& g : items_)
    if (!(g == f)) out.items_.push_back(g);
  return out;
}

FormulaSet FormulaSet::unite(const FormulaSet& other) const {
  FormulaSet out = *this;
  for (const Formula& f : other.items_) out.items_.push_back(f);
  out.normalize_storage();
  return out;
}

bool operator==(const FormulaSet& a, const FormulaSet& b) {
  if (a.items_.size() != b.items_.size()) return false;
  for (std::size_t i = 0; i < a.items_.size(); ++i)
    if (!(a.items_[i] == b.items_[i])) return false;
  return true;
}

bool operator==(const Sequent& a, const Sequent& b) {
  return a.left == b.left && a.right == b.right;
}

// ---------------------------------------------------------------------------
// Name collection and freshness
// ---------------------------------------------------------------------------

void collect_all_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.fn);
  for (const Term& a : t.args) collect_all_names(a, out);
}

void collect_all_names(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
      return;
    case FKind::Eq:
      collect_all_names(f.eq_lhs(), out);
      collect_all_names(f.eq_rhs(), out);
      return;
    case FKind::Atom:
      out.insert(f.pred());
      for (const Term& t : f.args()) collect_all_names(t, out);
      return;
    case FKind::Not:
      collect_all_names(f.sub(), out);
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      collect_all_names(f.lhs(), out);
      collect_all_names(f.rhs(), out);
      return;
    case FKind::Forall:
    case FKind::Exists:
      out.insert(f.var());
      collect_all_names(f.sub(), out);
      return;
    case FKind::Def:
      for (const Rule& r : f.def().rules) {
        for (const std::string& x : r.bound) out.insert(x);
        out.insert(r.head_pred);
        for (const Term& t : r.head_args) collect_all_names(t, out);
        collect_all_names(r.body(), out);
      }
      return;
  }
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  collect_all_names(f, out);
  return out;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "'" + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Free object symbols
// ---------------------------------------------------------------------------

static void free_in_term(const Term& t, const std::set<std::string>& bound,
                         std::set<std::string>& out) {
  if (t.is_symbol()) {
    if (!bound.count(t.fn)) out.insert(t.fn);
    return;
  }
  for (const Term& a : t.args) free_in_term(a, bound, out);
}

static void free_in_formula(const Formula& f, std::set<std::string> bound,
                            std::set<std::string>& out) {
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
      return;
    case FKind::Eq:
      free_in_term(f.eq_lhs(), bound, out);
      free_in_term(f.eq_rhs(), bound, out);
      return;
    case FKind::Atom:
      for (const Term& t : f.args()) free_in_term(t, bound, out);
      return;
    case FKind::Not:
      free_in_formula(f.sub(), bound, out);
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      free_in_formula(f.lhs(), bound, out);
      free_in_formula(f.rhs(), bound, out);
      return;
    case FKind::Forall:
    case FKind::Exists: {
      bound.insert(f.var());
      free_in_formula(f.sub(), std::move(bound), out);
      return;
    }
    case FKind::Def:
      for (const Rule& r : f.def().rules) {
        std::set<std::string> b = bound;
        for (const std::string& x : r.bound) b.insert(x);
        for (const Term& t : r.head_args) free_in_term(t, b, out);
        free_in_formula(r.body(), b, out);
      }
      return;
  }
}

std::set<std::string> free_objects(const Formula& f) {
  std::set<std::string> out;
  free_in_formula(f, {}, out);
  return out;
}

std::set<std::string> free_objects(const Term& t) {
  std::set<std::string> out;
  free_in_term(t, {}, out);
  return out;
}

std::set<std::string> free_objects(const FormulaSet& fs) {
  std::set<std::string> out;
  for (const Formula& f : fs) free_in_formula(f, {}, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

namespace {

using SubstMap = std::map<std::string, Term>;

Term subst_term(const Term& t, const SubstMap& sub) {
  if (t.is_symbol()) {
    auto it = sub.find(t.fn);
    return it == sub.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(subst_term(a, sub));
  return Term(t.fn, std::move(args));
}

bool term_mentions(const Term& t, const std::string& name) {
  if (t.fn == name) return true;
  for (const Term& a : t.args)
    if (term_mentions(a, name)) return true;
  return false;
}

// Keeps only the entries whose key occurs free in `frees`.
SubstMap restrict_map(const SubstMap& sub,
                      const std::set<std::string>& frees) {
  SubstMap out;
  for (const auto& [k, v] : sub)
    if (frees.count(k)) out.emplace(k, v);
  return out;
}

// Does the binder `v` occur in any replacement image of `sub`?
bool binder_captured(const std::string& v, const SubstMap& sub) {
  for (const auto& [k, t] : sub)
    if (term_mentions(t, v)) return true;
  return false;
}

Formula subst_formula(const Formula& f, const SubstMap& sub,
                      std::set<std::string>& avoid);

Formula subst_quant(const Formula& f, const SubstMap& sub,
                    std::set<std::string>& avoid) {
  SubstMap inner = sub;
  inner.erase(f.var());
  SubstMap relevant = restrict_map(inner, free_objects(f.sub()));
  if (relevant.empty()) return f;
  std::string v = f.var();
  if (binder_captured(v, relevant)) {
    std::string v2 = fresh_name(v, avoid);
    avoid.insert(v2);
    relevant.insert_or_assign(v, Term(v2));
    v = v2;
  }
  Formula body = subst_formula(f.sub(), relevant, avoid);
  return f.kind() == FKind::Forall ? Formula::forall(v, std::move(body))
                                   : Formula::exists(v, std::move(body));
}

Rule subst_rule(const Rule& r, const SubstMap& sub,
                std::set<std::string>& avoid) {
  SubstMap inner = sub;
  for (const std::string& x : r.bound) inner.erase(x);
  std::set<std::string> frees;
  {
    std::set<std::string> b(r.bound.begin(), r.bound.end());
    for (const Term& t : r.head_args) free_in_term(t, b, frees);
    std::set<std::string> body_free = free_objects(r.body());
    for (const std::string& x : r.bound) body_free.erase(x);
    frees.insert(body_free.begin(), body_free.end());
  }
  SubstMap relevant = restrict_map(inner, frees);
  if (relevant.empty()) return r;
  std::vector<std::string> bound = r.bound;
  for (std::string& x : bound) {
    if (binder_captured(x, relevant)) {
      std::string x2 = fresh_name(x, avoid);
      avoid.insert(x2);
      relevant.insert_or_assign(x, Term(x2));
      x = x2;
    }
  }
  Rule out;
  out.bound = std::move(bound);
  out.head_pred = r.head_pred;
  for (const Term& t : r.head_args)
    out.head_args.push_back(subst_term(t, relevant));
  out.body_ptr = std::make_shared<const Formula>(
      subst_formula(r.body(), relevant, avoid));
  return out;
}

Formula subst_formula(const Formula& f, const SubstMap& sub,
                      std::set<std::string>& avoid) {
  if (sub.empty()) return f;
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
      return f;
    case FKind::Eq:
      return Formula::eq(subst_term(f.eq_lhs(), sub),
                         subst_term(f.eq_rhs(), sub));
    case FKind::Atom: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const Term& t : f.args()) args.push_back(subst_term(t, sub));
      return Formula::atom(f.pred(), std::move(args));
    }
    case FKind::Not:
      return Formula::lnot(subst_formula(f.sub(), sub, avoid));
    case FKind::And:
      return Formula::land(subst_formula(f.lhs(), sub, avoid),
                           subst_formula(f.rhs(), sub, avoid));
    case FKind::Or:
      return Formula::lor(subst_formula(f.lhs(), sub, avoid),
                          subst_formula(f.rhs(), sub, avoid));
    case FKind::Imp:
      return Formula::imp(subst_formula(f.lhs(), sub, avoid),
                          subst_formula(f.rhs(), sub, avoid));
    case FKind::Iff:
      return Formula::iff(subst_formula(f.lhs(), sub, avoid),
                          subst_formula(f.rhs(), sub, avoid));
    case FKind::Forall:
    case FKind::Exists:
      return subst_quant(f, sub, avoid);
    case FKind::Def: {
      Definition d;
      for (const Rule& r : f.def().rules)
        d.rules.push_back(subst_rule(r, sub, avoid));
      return Formula::def(std::move(d));
    }
  }
  return f;
}

}  // namespace

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  return subst_term(t, sub);
}

Formula substitute(const Formula& f,
                   const std::map<std::string, Term>& sub) {
  if (sub.empty()) return f;
  std::set<std::string> avoid = all_names(f);
  for (const auto& [k, v] : sub) {
    avoid.insert(k);
    collect_all_names(v, avoid);
  }
  return subst_formula(f, sub, avoid);
}

Formula substitute(const Formula& f, const std::string& x, const Term& t) {
  return substitute(f, std::map<std::string, Term>{{x, t}});
}

// ---------------------------------------------------------------------------
// Polarity
// ---------------------------------------------------------------------------

namespace {

Polarity flip(Polarity p) {
  switch (p) {
    case Polarity::Positive:
      return Polarity::Negative;
    case Polarity::Negative:
      return Polarity::Positive;
    case Polarity::Both:
      return Polarity::Both;
  }
  return Polarity::Both;
}

void walk_occurrences(const Formula& f, const std::string& p, Polarity pol,
                      std::vector<Polarity>& out) {
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
    case FKind::Eq:
      return;
    case FKind::Atom:
      if (f.pred() == p) out.push_back(pol);
      return;
    case FKind::Not:
      walk_occurrences(f.sub(), p, flip(pol), out);
      return;
    case FKind::And:
    case FKind::Or:
      walk_occurrences(f.lhs(), p, pol, out);
      walk_occurrences(f.rhs(), p, pol, out);
      return;
    case FKind::Imp:
      walk_occurrences(f.lhs(), p, flip(pol), out);
      walk_occurrences(f.rhs(), p, pol, out);
      return;
    case FKind::Iff:
      walk_occurrences(f.lhs(), p, Polarity::Both, out);
      walk_occurrences(f.rhs(), p, Polarity::Both, out);
      return;
    case FKind::Forall:
    case FKind::Exists:
      walk_occurrences(f.sub(), p, pol, out);
      return;
    case FKind::Def:
      throw FoidError("PureFORequired",
                      "polarity analysis requires a pure FO formula");
  }
}

}  // namespace

std::vector<Polarity> occurrences(const Formula& f, const std::string& p) {
  std::vector<Polarity> out;
  walk_occurrences(f, p, Polarity::Positive, out);
  return out;
}

bool occurs_negatively(const Formula& f, const std::string& pred) {
  for (Polarity p : occurrences(f, pred))
    if (p != Polarity::Positive) return true;
  return false;
}

bool occurs(const Formula& f, const std::string& pred) {
  return !occurrences(f, pred).empty();
}

// ---------------------------------------------------------------------------
// replace_positive
// ---------------------------------------------------------------------------

namespace {

Formula replace_pos_walk(const Formula& f,
                         const std::vector<Hypothesis>& hyps, Polarity pol) {
  auto find_hyp = [&](const std::string& p) -> const Hypothesis* {
    for (const Hypothesis& h : hyps)
      if (h.pred == p) return &h;
    return nullptr;
  };
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
    case FKind::Eq:
      return f;
    case FKind::Atom: {
      const Hypothesis* h = find_hyp(f.pred());
      if (!h) return f;
      if (pol == Polarity::Both)
        throw FoidError("BothPolarity",
                        "predicate " + f.pred() +
                            " occurs under an equivalence; its polarity is "
                            "not definite");
      if (pol == Polarity::Negative) return f;
      if (h->vars.size() != f.args().size())
        throw FoidError("HypArityMismatch",
                        "hypothesis for " + f.pred() +
                            " expects a different tuple length");
      std::map<std::string, Term> sub;
      for (std::size_t i = 0; i < h->vars.size(); ++i)
        sub.emplace(h->vars[i], f.args()[i]);
      return substitute(h->formula, sub);
    }
    case FKind::Not:
      return Formula::lnot(replace_pos_walk(f.sub(), hyps, flip(pol)));
    case FKind::And:
      return Formula::land(replace_pos_walk(f.lhs(), hyps, pol),
                           replace_pos_walk(f.rhs(), hyps, pol));
    case FKind::Or:
      return Formula::lor(replace_pos_walk(f.lhs(), hyps, pol),
                          replace_pos_walk(f.rhs(), hyps, pol));
    case FKind::Imp:
      return Formula::imp(replace_pos_walk(f.lhs(), hyps, flip(pol)),
                          replace_pos_walk(f.rhs(), hyps, pol));
    case FKind::Iff:
      return Formula::iff(replace_pos_walk(f.lhs(), hyps, Polarity::Both),
                          replace_pos_walk(f.rhs(), hyps, Polarity::Both));
    case FKind::Forall:
      return Formula::forall(f.var(),
                             replace_pos_walk(f.sub(), hyps, pol));
    case FKind::Exists:
      return Formula::exists(f.var(),
                             replace_pos_walk(f.sub(), hyps, pol));
    case FKind::Def:
      throw FoidError("PureFORequired",
                      "hypothesis replacement requires a pure FO formula");
  }
  return f;
}

}  // namespace

Formula replace_positive(const Formula& f,
                         const std::vector<Hypothesis>& hyps) {
  return replace_pos_walk(f, hyps, Polarity::Positive);
}

// ---------------------------------------------------------------------------
// Definition validation
// ---------------------------------------------------------------------------

bool contains_def(const Formula& f) {
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
    case FKind::Eq:
    case FKind::Atom:
      return false;
    case FKind::Not:
      return contains_def(f.sub());
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      return contains_def(f.lhs()) || contains_def(f.rhs());
    case FKind::Forall:
    case FKind::Exists:
      return contains_def(f.sub());
    case FKind::Def:
      return true;
  }
  return false;
}

void validate_definition(const Definition& d) {
  std::map<std::string, std::size_t> arities;
  for (const Rule& r : d.rules) {
    std::set<std::string> seen;
    for (const std::string& x : r.bound)
      if (!seen.insert(x).second)
        throw FoidError("BoundNotDistinct",
                        "rule for " + r.head_pred +
                            " binds the symbol " + x + " twice");
    auto [it, inserted] = arities.emplace(r.head_pred, r.head_args.size());
    if (!inserted && it->second != r.head_args.size())
      throw FoidError("HeadArityMismatch",
                      "predicate " + r.head_pred +
                          " is defined with two different arities");
    if (contains_def(r.body()))
      throw FoidError("NestedDefinition",
                      "rule body for " + r.head_pred +
                          " contains a nested definition");
  }
  for (std::size_t i = 0; i < d.rules.size(); ++i) {
    // frees of rule j must avoid bound symbols of rule i (i != j)
    std::set<std::string> bound_i(d.rules[i].bound.begin(),
                                  d.rules[i].bound.end());
    if (bound_i.empty()) continue;
    for (std::size_t j = 0; j < d.rules.size(); ++j) {
      if (i == j) continue;
      const Rule& rj = d.rules[j];
      std::set<std::string> bj(rj.bound.begin(), rj.bound.end());
      std::set<std::string> frees;
      for (const Term& t : rj.head_args) free_in_term(t, bj, frees);
      std::set<std::string> body_free = free_objects(rj.body());
      for (const std::string& x : rj.bound) body_free.erase(x);
      frees.insert(body_free.begin(), body_free.end());
      for (const std::string& x : d.rules[i].bound)
        if (frees.count(x))
          throw FoidError("BoundFreeElsewhere",
                          "symbol " + x + " is bound in one rule but free "
                          "in another rule of the same definition");
    }
  }
}

// ---------------------------------------------------------------------------
// Merged bodies and normal form
// ---------------------------------------------------------------------------

Formula merged_body(const Definition& d, const std::string& p,
                    const std::vector<std::string>& ys) {
  int arity = d.arity_of(p);
  if (arity < 0)
    throw FoidError("NotDefined", "predicate " + p + " has no rules here");
  if (static_cast<int>(ys.size()) != arity)
    throw FoidError("BadPlaceholders",
                    "placeholder tuple length does not match the arity of " +
                        p);
  std::set<std::string> used = all_names(Formula::def(d));
  std::set<std::string> seen;
  for (const std::string& y : ys) {
    if (!seen.insert(y).second)
      throw FoidError("BadPlaceholders", "placeholder " + y + " repeated");
    if (used.count(y))
      throw FoidError("BadPlaceholders",
                      "placeholder " + y + " occurs in the definition");
  }
  std::vector<Formula> disjuncts;
  for (const Rule& r : d.rules) {
    if (r.head_pred != p) continue;
    Formula acc = r.body();
    for (std::size_t i = r.head_args.size(); i-- > 0;)
      acc = Formula::land(
          Formula::eq(Term(ys[i]), r.head_args[i]), std::move(acc));
    for (std::size_t i = r.bound.size(); i-- > 0;)
      acc = Formula::exists(r.bound[i], std::move(acc));
    disjuncts.push_back(std::move(acc));
  }
  Formula out = disjuncts.back();
  for (std::size_t i = disjuncts.size() - 1; i-- > 0;)
    out = Formula::lor(disjuncts[i], std::move(out));
  return out;
}

Definition normalize(const Definition& d) {
  validate_definition(d);
  std::set<std::string> used = all_names(Formula::def(d));
  Definition out;
  for (const std::string& p : d.defined_order()) {
    int arity = d.arity_of(p);
    std::vector<std::string> ys;
    std::set<std::string> avoid = used;
    for (int i = 0; i < arity; ++i) {
      std::string y = fresh_name("y" + std::to_string(i + 1), avoid);
      avoid.insert(y);
      ys.push_back(y);
    }
    Rule r;
    r.bound = ys;
    r.head_pred = p;
    for (const std::string& y : ys) r.head_args.push_back(Term(y));
    r.body_ptr = std::make_shared<const Formula>(merged_body(d, p, ys));
    out.rules.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dependencies and stratification
// ---------------------------------------------------------------------------

std::map<std::string, std::set<std::string>> dependencies(
    const Definition& d) {
  std::set<std::string> def = d.defined();
  std::map<std::string, std::set<std::string>> dep;
  for (const std::string& p : def) dep[p] = {p};
  for (const Rule& r : d.rules)
    for (const std::string& q : def)
      if (occurs(r.body(), q)) dep[r.head_pred].insert(q);
  // transitive closure
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [p, qs] : dep) {
      std::set<std::string> add;
      for (const std::string& q : qs)
        for (const std::string& r2 : dep[q])
          if (!qs.count(r2)) add.insert(r2);
      if (!add.empty()) {
        qs.insert(add.begin(), add.end());
        changed = true;
      }
    }
  }
  return dep;
}

std::set<std::string> mutual_dependents(const Definition& d,
                                        const std::string& p) {
  auto dep = dependencies(d);
  if (!dep.count(p))
    throw FoidError("NotDefined", "predicate " + p + " has no rules here");
  std::set<std::string> out;
  for (const std::string& q : dep[p])
    if (dep[q].count(p)) out.insert(q);
  return out;
}

std::optional<std::map<std::string, int>> stratify(const Definition& d) {
  std::set<std::string> def = d.defined();
  // edge head -> body predicate, strict when some occurrence is negative
  struct Edge {
    std::string from, to;
    bool strict;
  };
  std::vector<Edge> edges;
  for (const Rule& r : d.rules)
    for (const std::string& q : def) {
      bool any = false, strict = false;
      for (Polarity pol : occurrences(r.body(), q)) {
        any = true;
        if (pol != Polarity::Positive) strict = true;
      }
      if (any) edges.push_back({r.head_pred, q, strict});
    }
  auto dep = dependencies(d);
  // levels must agree inside a mutual-dependency class, so a strict edge
  // within one rules out stratification
  for (const Edge& e : edges)
    if (e.strict && dep[e.to].count(e.from)) return std::nullopt;
  // longest-path levels over the remaining acyclic structure of classes
  std::map<std::string, int> level;
  for (const std::string& p : def) level[p] = 0;
  bool changed = true;
  int guard = 0;
  while (changed) {
    changed = false;
    if (++guard > static_cast<int>(def.size()) * 2 + 4)
      return std::nullopt;  // defensive; cycles were excluded above
    for (const Edge& e : edges) {
      int need = level[e.to] + (e.strict ? 1 : 0);
      if (level[e.from] < need) {
        // keep mutual-dependency classes level-aligned
        for (const std::string& q : def)
          if (dep[e.from].count(q) && dep[q].count(e.from))
            if (level[q] < need) {
              level[q] = need;
              changed = true;
            }
      }
    }
  }
  // final audit of the witness
  for (const Edge& e : edges) {
    if (e.strict && level[e.to] >= level[e.from]) return std::nullopt;
    if (!e.strict && level[e.to] > level[e.from]) return std::nullopt;
  }
  return level;
}

std::vector<Definition> decompose_stratified(const Definition& d) {
  auto level = stratify(d);
  if (!level)
    throw FoidError("NotStratified", "the definition has no stratification");
  std::map<int, Definition> parts;
  for (const Rule& r : d.rules)
    parts[(*level)[r.head_pred]].rules.push_back(r);
  std::vector<Definition> out;
  for (auto& [lvl, part] : parts) out.push_back(std::move(part));
  return out;
}

// ---------------------------------------------------------------------------
// Parameters and vocabulary
// ---------------------------------------------------------------------------

namespace {

void record_pred(std::map<std::string, int>& preds,
                 std::map<std::string, int>& funcs, const std::string& name,
                 int arity) {
  if (funcs.count(name))
    throw FoidError("ArityMismatch",
                    name + " is used both as predicate and as function");
  auto [it, inserted] = preds.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw FoidError("ArityMismatch",
                    name + " is used with two different arities");
}

void record_func(std::map<std::string, int>& preds,
                 std::map<std::string, int>& funcs, const std::string& name,
                 int arity) {
  if (preds.count(name))
    throw FoidError("ArityMismatch",
                    name + " is used both as predicate and as function");
  auto [it, inserted] = funcs.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw FoidError("ArityMismatch",
                    name + " is used with two different arities");
}

void vocab_term(const Term& t, const std::set<std::string>& bound,
                std::map<std::string, int>& preds,
                std::map<std::string, int>& funcs) {
  if (t.is_symbol()) {
    if (!bound.count(t.fn)) record_func(preds, funcs, t.fn, 0);
    return;
  }
  record_func(preds, funcs, t.fn, static_cast<int>(t.args.size()));
  for (const Term& a : t.args) vocab_term(a, bound, preds, funcs);
}

void vocab_formula(const Formula& f, std::set<std::string> bound,
                   std::map<std::string, int>& preds,
                   std::map<std::string, int>& funcs) {
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
      return;
    case FKind::Eq:
      vocab_term(f.eq_lhs(), bound, preds, funcs);
      vocab_term(f.eq_rhs(), bound, preds, funcs);
      return;
    case FKind::Atom:
      record_pred(preds, funcs, f.pred(),
                  static_cast<int>(f.args().size()));
      for (const Term& t : f.args()) vocab_term(t, bound, preds, funcs);
      return;
    case FKind::Not:
      vocab_formula(f.sub(), std::move(bound), preds, funcs);
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      vocab_formula(f.lhs(), bound, preds, funcs);
      vocab_formula(f.rhs(), std::move(bound), preds, funcs);
      return;
    case FKind::Forall:
    case FKind::Exists: {
      bound.insert(f.var());
      vocab_formula(f.sub(), std::move(bound), preds, funcs);
      return;
    }
    case FKind::Def:
      for (const Rule& r : f.def().rules) {
        std::set<std::string> b = bound;
        for (const std::string& x : r.bound) b.insert(x);
        record_pred(preds, funcs, r.head_pred,
                    static_cast<int>(r.head_args.size()));
        for (const Term& t : r.head_args) vocab_term(t, b, preds, funcs);
        vocab_formula(r.body(), b, preds, funcs);
      }
      return;
  }
}

}  // namespace

Parameters parameters(const Definition& d) {
  std::map<std::string, int> preds, funcs;
  vocab_formula(Formula::def(d), {}, preds, funcs);
  for (const std::string& p : d.defined()) preds.erase(p);
  return Parameters{std::move(preds), std::move(funcs)};
}

Vocabulary vocabulary(const Formula& f) {
  Vocabulary v;
  vocab_formula(f, {}, v.preds, v.funcs);
  return v;
}

Vocabulary vocabulary(const Sequent& s) {
  Vocabulary v;
  for (const Formula& f : s.left) vocab_formula(f, {}, v.preds, v.funcs);
  for (const Formula& f : s.right) vocab_formula(f, {}, v.preds, v.funcs);
  return v;
}

void merge_vocabulary(Vocabulary& into, const Vocabulary& other) {
  for (const auto& [n, a] : other.preds)
    record_pred(into.preds, into.funcs, n, a);
  for (const auto& [n, a] : other.funcs)
    record_func(into.preds, into.funcs, n, a);
}

// ---------------------------------------------------------------------------
// Canonical sequents
// ---------------------------------------------------------------------------

namespace {

bool is_literal(const Formula& f) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Eq:
    case FKind::Atom:
      return true;
    case FKind::Not:
      return f.sub().kind() == FKind::Atom || f.sub().kind() == FKind::Eq;
    default:
      return false;
  }
}

bool is_literal_combination(const Formula& f) {
  if (is_literal(f)) return true;
  if (f.kind() == FKind::And || f.kind() == FKind::Or)
    return is_literal_combination(f.lhs()) &&
           is_literal_combination(f.rhs());
  return false;
}

}  // namespace

CanonicalReport is_canonical(const Sequent& s) {
  CanonicalReport rep;
  std::vector<Definition> defs;
  for (const Formula& f : s.left) {
    if (f.kind() == FKind::Def)
      defs.push_back(f.def());
    else if (contains_def(f))
      rep.diagnostics.push_back(
          "left formula " + to_string(f) +
          " contains a definition below the top level");
  }
  for (const Formula& f : s.right)
    if (contains_def(f))
      rep.diagnostics.push_back("right formula " + to_string(f) +
                                " contains a definition");
  for (const Definition& d : defs)
    for (const Rule& r : d.rules)
      if (!is_literal_combination(r.body()))
        rep.diagnostics.push_back(
            "rule body " + to_string(r.body()) +
            " is not a combination of literals with & and |");
  // pairwise disjoint defined sets
  for (std::size_t i = 0; i < defs.size(); ++i)
    for (std::size_t j = i + 1; j < defs.size(); ++j) {
      std::set<std::string> a = defs[i].defined(), b = defs[j].defined();
      for (const std::string& p : a)
        if (b.count(p))
          rep.diagnostics.push_back(
              "predicate " + p + " is defined by two definitions");
    }
  // an order must exist in which no earlier definition uses a later one's
  // defined predicate as a parameter
  std::size_t n = defs.size();
  std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    std::set<std::string> da = defs[a].defined();
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      Parameters pb = parameters(defs[b]);
      for (const std::string& p : da)
        if (pb.preds.count(p)) before[a][b] = true;
    }
  }
  // cycle detection via repeated elimination of sinks
  {
    std::vector<bool> removed(n, false);
    std::size_t left = n;
    bool progress = true;
    while (left > 0 && progress) {
      progress = false;
      for (std::size_t a = 0; a < n; ++a) {
        if (removed[a]) continue;
        bool has_pred = false;
        for (std::size_t b = 0; b < n; ++b)
          if (!removed[b] && before[b][a]) has_pred = true;
        if (!has_pred) {
          removed[a] = true;
          --left;
          progress = true;
        }
      }
    }
    if (left > 0)
      rep.diagnostics.push_back(
          "the definitions cannot be ordered: their defined predicates "
          "occur in each other's parameters cyclically");
  }
  rep.canonical = rep.diagnostics.empty();
  return rep;
}

namespace {

Formula rewrite_body(const Formula& f,
                     const std::set<std::string>& all_defined,
                     std::map<std::string, std::string>& complements,
                     std::set<std::string>& used) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Eq:
    case FKind::Atom:
      return f;
    case FKind::Not: {
      const Formula& sub = f.sub();
      if (sub.kind() == FKind::Eq) return f;
      if (sub.kind() == FKind::Atom) {
        const std::string& q = sub.pred();
        if (all_defined.count(q))
          throw FoidError("NegatedDefinedPredicate",
                          "body literal ~" + q +
                              "(...) negates a defined predicate");
        auto it = complements.find(q);
        if (it == complements.end()) {
          std::string comp = fresh_name(q + "_c", used);
          used.insert(comp);
          it = complements.emplace(q, comp).first;
        }
        return Formula::atom(it->second, sub.args());
      }
      throw FoidError("NotCanonical", "body is not a literal combination");
    }
    case FKind::And:
      return Formula::land(
          rewrite_body(f.lhs(), all_defined, complements, used),
          rewrite_body(f.rhs(), all_defined, complements, used));
    case FKind::Or:
      return Formula::lor(
          rewrite_body(f.lhs(), all_defined, complements, used),
          rewrite_body(f.rhs(), all_defined, complements, used));
    default:
      throw FoidError("NotCanonical", "body is not a literal combination");
  }
}

}  // namespace

Sequent positive_rewriting(const Sequent& s) {
  CanonicalReport rep = is_canonical(s);
  if (!rep.canonical) {
    std::string msg = "sequent is not canonical";
    for (const std::string& d : rep.diagnostics) msg += "; " + d;
    throw FoidError("NotCanonical", msg);
  }
  std::set<std::string> all_defined;
  for (const Formula& f : s.left)
    if (f.kind() == FKind::Def)
      for (const std::string& p : f.def().defined()) all_defined.insert(p);
  std::set<std::string> used;
  for (const Formula& f : s.left) collect_all_names(f, used);
  for (const Formula& f : s.right) collect_all_names(f, used);

  std::map<std::string, std::string> complements;
  std::map<std::string, int> comp_arity;
  std::vector<Formula> new_left;
  for (const Formula& f : s.left) {
    if (f.kind() != FKind::Def) {
      new_left.push_back(f);
      continue;
    }
    Definition d;
    for (const Rule& r : f.def().rules) {
      Rule nr = r;
      nr.body_ptr = std::make_shared<const Formula>(
          rewrite_body(r.body(), all_defined, complements, used));
      d.rules.push_back(std::move(nr));
    }
    new_left.push_back(Formula::def(std::move(d)));
  }
  // record arities of rewritten predicates
  for (const Formula& f : s.left) {
    if (f.kind() != FKind::Def) continue;
    Vocabulary v = vocabulary(f);
    for (const auto& [q, comp] : complements)
      if (v.preds.count(q)) comp_arity[q] = v.preds[q];
  }
  for (const auto& [q, comp] : complements) {
    int arity = comp_arity.count(q) ? comp_arity[q] : 0;
    std::vector<std::string> ys;
    std::set<std::string> avoid = used;
    for (int i = 0; i < arity; ++i) {
      std::string y = fresh_name("y" + std::to_string(i + 1), avoid);
      avoid.insert(y);
      ys.push_back(y);
    }
    std::vector<Term> args;
    for (const std::string& y : ys) args.push_back(Term(y));
    Formula equiv = Formula::iff(Formula::atom(comp, args),
                                 Formula::lnot(Formula::atom(q, args)));
    for (std::size_t i = ys.size(); i-- > 0;)
      equiv = Formula::forall(ys[i], std::move(equiv));
    new_left.push_back(std::move(equiv));
  }
  Sequent out;
  out.left = FormulaSet(std::move(new_left));
  out.right = s.right;
  return out;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string to_string(const Term& t) {
  std::string out = t.fn;
  if (!t.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ", ";
      out += to_string(t.args[i]);
    }
    out += ")";
  }
  return out;
}

namespace {

// precedence: quantifiers 0, <=> 1, => 2, | 3, & 4, ~ 5, primary 6
int precedence(const Formula& f) {
  switch (f.kind()) {
    case FKind::Forall:
    case FKind::Exists:
      return 0;
    case FKind::Iff:
      return 1;
    case FKind::Imp:
      return 2;
    case FKind::Or:
      return 3;
    case FKind::And:
      return 4;
    case FKind::Not:
      return 5;
    default:
      return 6;
  }
}

void print_formula(const Formula& f, int min_prec, std::string& out);

void print_rule(const Rule& r, std::string& out) {
  if (!r.bound.empty()) {
    out += "forall ";
    for (std::size_t i = 0; i < r.bound.size(); ++i) {
      if (i) out += ", ";
      out += r.bound[i];
    }
    out += ". ";
  }
  out += r.head_pred;
  if (!r.head_args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < r.head_args.size(); ++i) {
      if (i) out += ", ";
      out += to_string(r.head_args[i]);
    }
    out += ")";
  }
  out += " <- ";
  print_formula(r.body(), 0, out);
  out += ".";
}

void print_formula(const Formula& f, int min_prec, std::string& out) {
  int prec = precedence(f);
  bool parens = prec < min_prec;
  if (parens) out += "(";
  switch (f.kind()) {
    case FKind::False:
      out += "false";
      break;
    case FKind::True:
      out += "true";
      break;
    case FKind::Eq:
      out += to_string(f.eq_lhs());
      out += " = ";
      out += to_string(f.eq_rhs());
      break;
    case FKind::Atom:
      out += f.pred();
      if (!f.args().empty()) {
        out += "(";
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out += ", ";
          out += to_string(f.args()[i]);
        }
        out += ")";
      }
      break;
    case FKind::Not:
      out += "~";
      print_formula(f.sub(), 5, out);
      break;
    case FKind::And:
      print_formula(f.lhs(), 4, out);
      out += " & ";
      print_formula(f.rhs(), 5, out);
      break;
    case FKind::Or:
      print_formula(f.lhs(), 3, out);
      out += " | ";
      print_formula(f.rhs(), 4, out);
      break;
    case FKind::Imp:
      print_formula(f.lhs(), 3, out);
      out += " => ";
      print_formula(f.rhs(), 2, out);
      break;
    case FKind::Iff:
      print_formula(f.lhs(), 1, out);
      out += " <=> ";
      print_formula(f.rhs(), 2, out);
      break;
    case FKind::Forall:
    case FKind::Exists: {
      out += f.kind() == FKind::Forall ? "forall " : "exists ";
      out += f.var();
      const Formula* body = &f.sub();
      while (body->kind() == f.kind()) {
        out += ", ";
        out += body->var();
        body = &body->sub();
      }
      out += ". ";
      print_formula(*body, 0, out);
      break;
    }
    case FKind::Def: {
      out += "{ ";
      for (const Rule& r : f.def().rules) {
        print_rule(r, out);
        out += " ";
      }
      out += "}";
      break;
    }
  }
  if (parens) out += ")";
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, 0, out);
  return out;
}

std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.left.items().size(); ++i) {
    if (i) out += ", ";
    print_formula(s.left.items()[i], 1, out);
  }
  if (!s.left.empty()) out += " ";
  out += "|-";
  for (std::size_t i = 0; i < s.right.items().size(); ++i) {
    out += i ? ", " : " ";
    print_formula(s.right.items()[i], 1, out);
  }
  return out;
}

}  // namespace foid

#include "foid/semantics.hpp"

#include <algorithm>

namespace foid {

// ---------------------------------------------------------------------------
// Truth values
// ---------------------------------------------------------------------------

namespace {
int rank_t(TruthValue v) {
  switch (v) {
    case TruthValue::False:
      return 0;
    case TruthValue::Unknown:
      return 1;
    case TruthValue::True:
      return 2;
  }
  return 1;
}
}  // namespace

bool leq_t(TruthValue a, TruthValue b) { return rank_t(a) <= rank_t(b); }

bool leq_p(TruthValue a, TruthValue b) {
  return a == TruthValue::Unknown || a == b;
}

TruthValue tv_not(TruthValue a) {
  if (a == TruthValue::True) return TruthValue::False;
  if (a == TruthValue::False) return TruthValue::True;
  return TruthValue::Unknown;
}

TruthValue tv_and(TruthValue a, TruthValue b) {
  return rank_t(a) <= rank_t(b) ? a : b;
}

TruthValue tv_or(TruthValue a, TruthValue b) {
  return rank_t(a) >= rank_t(b) ? a : b;
}

TruthValue tv_of(bool b) { return b ? TruthValue::True : TruthValue::False; }

std::string to_string(TruthValue v) {
  switch (v) {
    case TruthValue::False:
      return "f";
    case TruthValue::Unknown:
      return "u";
    case TruthValue::True:
      return "t";
  }
  return "u";
}

// ---------------------------------------------------------------------------
// Structures
// ---------------------------------------------------------------------------

bool Structure::holds(const std::string& pred,
                      const std::vector<int>& tuple) const {
  auto it = rels.find(pred);
  if (it == rels.end())
    throw FoidError("Uninterpreted",
                    "predicate " + pred + " has no interpretation");
  return it->second.count(tuple) > 0;
}

int Structure::apply(const std::string& fn,
                     const std::vector<int>& args) const {
  auto it = funcs.find(fn);
  if (it == funcs.end())
    throw FoidError("Uninterpreted",
                    "function " + fn + " has no interpretation");
  const FuncInterp& fi = it->second;
  if (static_cast<int>(args.size()) != fi.arity)
    throw FoidError("ArityMismatch",
                    "function " + fn + " applied to " +
                        std::to_string(args.size()) + " arguments");
  std::size_t idx = 0;
  for (int a : args) idx = idx * dom + a;
  return fi.table[idx];
}

std::vector<std::vector<int>> all_tuples(int dom, int arity) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(arity, 0);
  while (true) {
    out.push_back(cur);
    int k = arity - 1;
    while (k >= 0 && cur[k] == dom - 1) {
      cur[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++cur[k];
  }
  if (arity == 0) out.resize(1);
  return out;
}

int eval_term(const Structure& s, const Env& env, const Term& t) {
  if (t.is_symbol()) {
    auto it = env.find(t.fn);
    if (it != env.end()) return it->second;
    auto fa = s.funcs.find(t.fn);
    if (fa != s.funcs.end() && fa->second.arity == 0)
      return fa->second.table[0];
    auto as = s.assign.find(t.fn);
    if (as != s.assign.end()) return as->second;
    throw FoidError("Uninterpreted",
                    "object symbol " + t.fn + " has no value");
  }
  std::vector<int> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(eval_term(s, env, a));
  return s.apply(t.fn, args);
}

// ---------------------------------------------------------------------------
// Two-valued evaluation
// ---------------------------------------------------------------------------

bool eval_two(const Structure& s, const Formula& f, const Env& env) {
  switch (f.kind()) {
    case FKind::False:
      return false;
    case FKind::True:
      return true;
    case FKind::Eq:
      return eval_term(s, env, f.eq_lhs()) == eval_term(s, env, f.eq_rhs());
    case FKind::Atom: {
      std::vector<int> tuple;
      tuple.reserve(f.args().size());
      for (const Term& t : f.args()) tuple.push_back(eval_term(s, env, t));
      return s.holds(f.pred(), tuple);
    }
    case FKind::Not:
      return !eval_two(s, f.sub(), env);
    case FKind::And:
      return eval_two(s, f.lhs(), env) && eval_two(s, f.rhs(), env);
    case FKind::Or:
      return eval_two(s, f.lhs(), env) || eval_two(s, f.rhs(), env);
    case FKind::Imp:
      return !eval_two(s, f.lhs(), env) || eval_two(s, f.rhs(), env);
    case FKind::Iff:
      return eval_two(s, f.lhs(), env) == eval_two(s, f.rhs(), env);
    case FKind::Forall: {
      Env e = env;
      for (int d = 0; d < s.dom; ++d) {
        e[f.var()] = d;
        if (!eval_two(s, f.sub(), e)) return false;
      }
      return true;
    }
    case FKind::Exists: {
      Env e = env;
      for (int d = 0; d < s.dom; ++d) {
        e[f.var()] = d;
        if (eval_two(s, f.sub(), e)) return true;
      }
      return false;
    }
    case FKind::Def:
      throw FoidError("PureFORequired",
                      "two-valued evaluation requires a pure FO formula");
  }
  return false;
}

// ---------------------------------------------------------------------------
// Three-valued structures and Kleene evaluation
// ---------------------------------------------------------------------------

TruthValue ThreeValued::atom(const std::string& pred,
                             const std::vector<int>& tuple) const {
  if (lower.holds(pred, tuple)) return TruthValue::True;
  if (upper.holds(pred, tuple)) return TruthValue::Unknown;
  return TruthValue::False;
}

bool ThreeValued::consistent() const {
  if (lower.dom != upper.dom) return false;
  if (lower.funcs != upper.funcs || lower.assign != upper.assign)
    return false;
  for (const auto& [p, tuples] : lower.rels) {
    auto it = upper.rels.find(p);
    if (it == upper.rels.end()) return false;
    for (const std::vector<int>& t : tuples)
      if (!it->second.count(t)) return false;
  }
  return upper.rels.size() == lower.rels.size();
}

ThreeValued exact(const Structure& s) { return ThreeValued{s, s}; }

TruthValue eval_kleene(const ThreeValued& a, const Formula& f,
                       const Env& env) {
  const Structure& sk = a.lower;  // shared skeleton for terms
  switch (f.kind()) {
    case FKind::False:
      return TruthValue::False;
    case FKind::True:
      return TruthValue::True;
    case FKind::Eq:
      return tv_of(eval_term(sk, env, f.eq_lhs()) ==
                   eval_term(sk, env, f.eq_rhs()));
    case FKind::Atom: {
      std::vector<int> tuple;
      tuple.reserve(f.args().size());
      for (const Term& t : f.args()) tuple.push_back(eval_term(sk, env, t));
      return a.atom(f.pred(), tuple);
    }
    case FKind::Not:
      return tv_not(eval_kleene(a, f.sub(), env));
    case FKind::And:
      return tv_and(eval_kleene(a, f.lhs(), env),
                    eval_kleene(a, f.rhs(), env));
    case FKind::Or:
      return tv_or(eval_kleene(a, f.lhs(), env),
                   eval_kleene(a, f.rhs(), env));
    case FKind::Imp:
      // reformulation ~(lhs & ~rhs)
      return tv_or(tv_not(eval_kleene(a, f.lhs(), env)),
                   eval_kleene(a, f.rhs(), env));
    case FKind::Iff: {
      // reformulation ~(l & ~r) & ~(r & ~l)
      TruthValue l = eval_kleene(a, f.lhs(), env);
      TruthValue r = eval_kleene(a, f.rhs(), env);
      return tv_and(tv_or(tv_not(l), r), tv_or(tv_not(r), l));
    }
    case FKind::Forall: {
      Env e = env;
      TruthValue acc = TruthValue::True;
      for (int d = 0; d < sk.dom; ++d) {
        e[f.var()] = d;
        acc = tv_and(acc, eval_kleene(a, f.sub(), e));
        if (acc == TruthValue::False) return acc;
      }
      return acc;
    }
    case FKind::Exists: {
      // reformulation ~forall x. ~sub
      Env e = env;
      TruthValue acc = TruthValue::False;
      for (int d = 0; d < sk.dom; ++d) {
        e[f.var()] = d;
        acc = tv_or(acc, eval_kleene(a, f.sub(), e));
        if (acc == TruthValue::True) return acc;
      }
      return acc;
    }
    case FKind::Def:
      throw FoidError("PureFORequired",
                      "Kleene evaluation requires a pure FO formula");
  }
  return TruthValue::Unknown;
}

// ---------------------------------------------------------------------------
// Pair evaluation
// ---------------------------------------------------------------------------

bool eval_pair(const Structure& i, const Structure& j, const Formula& f,
               const Env& env) {
  switch (f.kind()) {
    case FKind::False:
      return false;
    case FKind::True:
      return true;
    case FKind::Eq:
      return eval_term(i, env, f.eq_lhs()) == eval_term(i, env, f.eq_rhs());
    case FKind::Atom: {
      std::vector<int> tuple;
      tuple.reserve(f.args().size());
      for (const Term& t : f.args()) tuple.push_back(eval_term(i, env, t));
      return i.holds(f.pred(), tuple);
    }
    case FKind::Not:
      return !eval_pair(j, i, f.sub(), env);
    case FKind::And:
      return eval_pair(i, j, f.lhs(), env) && eval_pair(i, j, f.rhs(), env);
    case FKind::Or:
      // ~(~l & ~r): both swaps cancel
      return eval_pair(i, j, f.lhs(), env) || eval_pair(i, j, f.rhs(), env);
    case FKind::Imp:
      // ~(l & ~r): the antecedent lands under one negation
      return !eval_pair(j, i, f.lhs(), env) || eval_pair(i, j, f.rhs(), env);
    case FKind::Iff:
      return (!eval_pair(j, i, f.lhs(), env) ||
              eval_pair(i, j, f.rhs(), env)) &&
             (!eval_pair(j, i, f.rhs(), env) ||
              eval_pair(i, j, f.lhs(), env));
    case FKind::Forall: {
      Env e = env;
      for (int d = 0; d < i.dom; ++d) {
        e[f.var()] = d;
        if (!eval_pair(i, j, f.sub(), e)) return false;
      }
      return true;
    }
    case FKind::Exists: {
      Env e = env;
      for (int d = 0; d < i.dom; ++d) {
        e[f.var()] = d;
        if (eval_pair(i, j, f.sub(), e)) return true;
      }
      return false;
    }
    case FKind::Def:
      throw FoidError("PureFORequired",
                      "pair evaluation requires a pure FO formula");
  }
  return false;
}

// ---------------------------------------------------------------------------
// Orders and restriction
// ---------------------------------------------------------------------------

bool leq_p(const ThreeValued& a, const ThreeValued& b) {
  // arity per relation symbol, read off any nonempty interpretation
  std::map<std::string, int> arity;
  auto scan = [&](const Structure& s) {
    for (const auto& [p, tuples] : s.rels) {
      auto [it, inserted] = arity.emplace(
          p, tuples.empty() ? -1 : static_cast<int>(tuples.begin()->size()));
      if (!inserted && it->second == -1 && !tuples.empty())
        it->second = static_cast<int>(tuples.begin()->size());
    }
  };
  scan(a.lower);
  scan(a.upper);
  scan(b.lower);
  scan(b.upper);
  for (const auto& [p, ar] : arity) {
    if (ar < 0) continue;  // empty everywhere: false on both sides
    for (const std::vector<int>& t : all_tuples(a.lower.dom, ar))
      if (!leq_p(a.atom(p, t), b.atom(p, t))) return false;
  }
  return true;
}

Structure restrict_structure(const Structure& s,
                             const std::set<std::string>& preds,
                             const std::set<std::string>& funcs) {
  Structure out;
  out.dom = s.dom;
  for (const auto& [name, fi] : s.funcs)
    if (funcs.count(name)) out.funcs.emplace(name, fi);
  for (const auto& [name, tuples] : s.rels)
    if (preds.count(name)) out.rels.emplace(name, tuples);
  for (const auto& [name, v] : s.assign)
    if (funcs.count(name)) out.assign.emplace(name, v);
  return out;
}

}  // namespace foid

#include "foid/wf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace foid {

namespace {

std::size_t pow_size(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

Env placeholder_env(const MergedDef& m, const DomainAtom& a) {
  Env env;
  const auto& ys = m.placeholders.at(a.pred);
  for (std::size_t i = 0; i < ys.size(); ++i) env[ys[i]] = a.tuple[i];
  return env;
}

bool is_unknown(const ThreeValued& s, const DomainAtom& a) {
  return s.atom(a.pred, a.tuple) == TruthValue::Unknown;
}

}  // namespace

MergedDef merge_definition(const Definition& d) {
  validate_definition(d);
  MergedDef m;
  m.def = d;
  m.preds = d.defined_order();
  int max_arity = 0;
  for (const auto& p : m.preds) {
    m.arities[p] = d.arity_of(p);
    max_arity = std::max(max_arity, m.arities[p]);
  }
  auto used = all_names(Formula::def(d));
  std::vector<std::string> ys;
  for (int i = 0; i < max_arity; ++i) {
    auto y = fresh_name("y" + std::to_string(i + 1), used);
    used.insert(y);
    ys.push_back(y);
  }
  for (const auto& p : m.preds) {
    std::vector<std::string> slice(ys.begin(), ys.begin() + m.arities[p]);
    m.placeholders[p] = slice;
    m.bodies.emplace(p, merged_body(d, p, slice));
  }
  return m;
}

std::string to_string(const DomainAtom& a) {
  std::ostringstream out;
  out << a.pred;
  if (!a.tuple.empty()) {
    out << '(';
    for (std::size_t i = 0; i < a.tuple.size(); ++i) {
      if (i) out << ", ";
      out << a.tuple[i];
    }
    out << ')';
  }
  return out.str();
}

std::vector<DomainAtom> domain_atoms(const MergedDef& m, int dom) {
  std::vector<DomainAtom> out;
  for (const auto& p : m.preds) {
    for (const auto& t : all_tuples(dom, m.arities.at(p)))
      out.push_back({p, t});
  }
  return out;
}

TruthValue body_value(const MergedDef& m, const ThreeValued& s,
                      const DomainAtom& a) {
  return eval_kleene(s, m.bodies.at(a.pred), placeholder_env(m, a));
}

bool body_holds_pair(const MergedDef& m, const Structure& i,
                     const Structure& j, const DomainAtom& a) {
  return eval_pair(i, j, m.bodies.at(a.pred), placeholder_env(m, a));
}

Structure context_for(const Definition& d, const Structure& s,
                      const Env& env) {
  const auto pars = parameters(d);
  Structure c;
  c.dom = s.dom;
  for (const auto& [name, arity] : pars.funcs) {
    if (arity == 0) {
      if (auto it = env.find(name); it != env.end()) {
        c.assign[name] = it->second;
        continue;
      }
      if (auto it = s.funcs.find(name);
          it != s.funcs.end() && it->second.arity == 0) {
        c.funcs[name] = it->second;
        continue;
      }
      if (auto it = s.assign.find(name); it != s.assign.end()) {
        c.assign[name] = it->second;
        continue;
      }
      throw FoidError("BadContext", "parameter object '" + name +
                                        "' has no interpretation");
    }
    auto it = s.funcs.find(name);
    if (it == s.funcs.end() || it->second.arity != arity ||
        it->second.table.size() != pow_size(s.dom, arity))
      throw FoidError("BadContext", "parameter function '" + name + "/" +
                                        std::to_string(arity) +
                                        "' has no interpretation");
    c.funcs[name] = it->second;
  }
  for (const auto& [name, arity] : pars.preds) {
    auto it = s.rels.find(name);
    if (it == s.rels.end())
      throw FoidError("BadContext", "parameter predicate '" + name + "/" +
                                        std::to_string(arity) +
                                        "' has no interpretation");
    c.rels[name] = it->second;
  }
  return c;
}

ThreeValued initial_structure(const Definition& d, const Structure& context) {
  auto ctx = context_for(d, context);
  ThreeValued s{ctx, ctx};
  for (const auto& r : d.rules) {
    const auto& p = r.head_pred;
    s.lower.rels[p];  // empty
    auto& full = s.upper.rels[p];
    for (const auto& t : all_tuples(ctx.dom, static_cast<int>(r.head_args.size())))
      full.insert(t);
  }
  return s;
}

ThreeValued refine(const ThreeValued& s, const std::vector<DomainAtom>& atoms,
                   bool to_true) {
  ThreeValued r = s;
  for (const auto& a : atoms) {
    if (to_true)
      r.lower.rels[a.pred].insert(a.tuple);
    else
      r.upper.rels[a.pred].erase(a.tuple);
  }
  return r;
}

std::vector<DomainAtom> greatest_unfounded_set(const Definition& d,
                                               const ThreeValued& s) {
  const auto m = merge_definition(d);
  std::vector<DomainAtom> u;
  for (const auto& a : domain_atoms(m, s.lower.dom))
    if (is_unknown(s, a)) u.push_back(a);
  for (;;) {
    if (u.empty()) return u;
    auto probe = refine(s, u, false);
    std::vector<DomainAtom> kept;
    for (const auto& a : u)
      if (body_value(m, probe, a) == TruthValue::False) kept.push_back(a);
    if (kept.size() == u.size()) return u;
    u = std::move(kept);
  }
}

WfResult well_founded_model(const Definition& d, const Structure& context) {
  const auto m = merge_definition(d);
  WfResult res;
  res.start = initial_structure(d, context);
  res.model = res.start;
  const auto atoms = domain_atoms(m, res.start.lower.dom);
  for (;;) {
    std::vector<DomainAtom> batch;
    for (const auto& a : atoms)
      if (is_unknown(res.model, a) &&
          body_value(m, res.model, a) == TruthValue::True)
        batch.push_back(a);
    if (!batch.empty()) {
      res.model = refine(res.model, batch, true);
      res.steps.push_back({true, std::move(batch)});
      continue;
    }
    auto unfounded = greatest_unfounded_set(d, res.model);
    if (unfounded.empty()) break;
    res.model = refine(res.model, unfounded, false);
    res.steps.push_back({false, std::move(unfounded)});
  }
  return res;
}

bool is_total(const ThreeValued& s) {
  for (const auto& [p, up] : s.upper.rels) {
    auto it = s.lower.rels.find(p);
    for (const auto& t : up)
      if (it == s.lower.rels.end() || !it->second.count(t)) return false;
  }
  return true;
}

void verify_trace(const Definition& d, const WfResult& r) {
  const auto m = merge_definition(d);
  auto bad = [](const std::string& msg) {
    throw FoidError("BadTrace", msg);
  };
  ThreeValued cur = r.start;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& step = r.steps[i];
    const std::string where = "step " + std::to_string(i) + ": ";
    if (step.atoms.empty()) bad(where + "empty refinement");
    std::set<DomainAtom> seen;
    for (const auto& a : step.atoms) {
      if (!seen.insert(a).second) bad(where + "duplicate " + to_string(a));
      if (!is_unknown(cur, a)) bad(where + to_string(a) + " is not unknown");
    }
    if (step.to_true) {
      for (const auto& a : step.atoms)
        if (body_value(m, cur, a) != TruthValue::True)
          bad(where + "body of " + to_string(a) + " is not true");
      cur = refine(cur, step.atoms, true);
    } else {
      auto probe = refine(cur, step.atoms, false);
      for (const auto& a : step.atoms)
        if (body_value(m, probe, a) != TruthValue::False)
          bad(where + to_string(a) + " is not unfounded");
      cur = probe;
    }
  }
  if (!(cur == r.model)) bad("trace does not end in the reported model");
  for (const auto& a : domain_atoms(m, cur.lower.dom))
    if (is_unknown(cur, a) && body_value(m, cur, a) == TruthValue::True)
      bad("terminal structure still has a derivable atom " + to_string(a));
  if (!greatest_unfounded_set(d, cur).empty())
    bad("terminal structure still has an unfounded set");
}

namespace {

bool wf_def_case(const Structure& s, const Definition& d, const Env& env) {
  auto ctx = context_for(d, s, env);
  auto wf = well_founded_model(d, ctx);
  if (!is_total(wf.model)) return false;
  for (const auto& p : d.defined_order()) {
    auto it = s.rels.find(p);
    if (it == s.rels.end())
      throw FoidError("Uninterpreted",
                      "defined predicate '" + p + "' has no interpretation");
    if (it->second != wf.model.lower.rels.at(p)) return false;
  }
  return true;
}

}  // namespace

bool satisfies_with(const Structure& s, const Formula& f, Env& env,
                    bool (*def_case)(const Structure&, const Definition&,
                                     const Env&)) {
  switch (f.kind()) {
    case FKind::False: return false;
    case FKind::True: return true;
    case FKind::Eq:
      return eval_term(s, env, f.eq_lhs()) == eval_term(s, env, f.eq_rhs());
    case FKind::Atom: {
      std::vector<int> t;
      for (const auto& a : f.args()) t.push_back(eval_term(s, env, a));
      return s.holds(f.pred(), t);
    }
    case FKind::Not: return !satisfies_with(s, f.sub(), env, def_case);
    case FKind::And:
      return satisfies_with(s, f.lhs(), env, def_case) &&
             satisfies_with(s, f.rhs(), env, def_case);
    case FKind::Or:
      return satisfies_with(s, f.lhs(), env, def_case) ||
             satisfies_with(s, f.rhs(), env, def_case);
    case FKind::Imp:
      return !satisfies_with(s, f.lhs(), env, def_case) ||
             satisfies_with(s, f.rhs(), env, def_case);
    case FKind::Iff:
      return satisfies_with(s, f.lhs(), env, def_case) ==
             satisfies_with(s, f.rhs(), env, def_case);
    case FKind::Forall:
    case FKind::Exists: {
      const bool universal = f.kind() == FKind::Forall;
      auto saved = env.find(f.var()) != env.end()
                       ? std::optional<int>(env[f.var()])
                       : std::nullopt;
      bool found = universal;
      for (int v = 0; v < s.dom; ++v) {
        env[f.var()] = v;
        bool here = satisfies_with(s, f.sub(), env, def_case);
        if (here != universal) {
          found = here;
          break;
        }
      }
      if (saved) env[f.var()] = *saved; else env.erase(f.var());
      return found;
    }
    case FKind::Def: return def_case(s, f.def(), env);
  }
  throw FoidError("Internal", "unreachable formula kind");
}

bool satisfies_wf(const Structure& s, const Formula& f, const Env& env) {
  Env e = env;
  return satisfies_with(s, f, e, &wf_def_case);
}

}  // namespace foid

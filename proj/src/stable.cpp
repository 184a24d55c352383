#include "foid/stable.hpp"

#include <algorithm>

namespace foid {

namespace {

Structure with_defined(const MergedDef& m, const Structure& ctx, bool full) {
  Structure s = ctx;
  for (const auto& p : m.preds) {
    auto& rel = s.rels[p];
    rel.clear();
    if (full)
      for (const auto& t : all_tuples(ctx.dom, m.arities.at(p)))
        rel.insert(t);
  }
  return s;
}

Structure consequence(const MergedDef& m, const Structure& i,
                      const Structure& j) {
  Structure out = i;
  for (const auto& p : m.preds) out.rels[p].clear();
  for (const auto& a : domain_atoms(m, i.dom))
    if (body_holds_pair(m, i, j, a)) out.rels[a.pred].insert(a.tuple);
  return out;
}

Structure stable_fix(const MergedDef& m, const Structure& ctx,
                     const Structure& j) {
  Structure x = with_defined(m, ctx, false);
  for (;;) {
    Structure next = consequence(m, x, j);
    if (next == x) return x;
    x = std::move(next);
  }
}

bool st_def_case(const Structure& s, const Definition& d, const Env& env) {
  const auto m = merge_definition(d);
  auto ctx = context_for(d, s, env);
  Structure candidate = ctx;
  for (const auto& p : m.preds) {
    auto it = s.rels.find(p);
    if (it == s.rels.end())
      throw FoidError("Uninterpreted",
                      "defined predicate '" + p + "' has no interpretation");
    candidate.rels[p] = it->second;
  }
  return stable_fix(m, ctx, candidate) == candidate;
}

}  // namespace

Structure bottom_expansion(const Definition& d, const Structure& context) {
  const auto m = merge_definition(d);
  return with_defined(m, context_for(d, context), false);
}

Structure top_expansion(const Definition& d, const Structure& context) {
  const auto m = merge_definition(d);
  return with_defined(m, context_for(d, context), true);
}

bool defined_leq(const Definition& d, const Structure& a, const Structure& b) {
  for (const auto& p : d.defined()) {
    const auto& ra = a.rels.at(p);
    const auto& rb = b.rels.at(p);
    if (!std::includes(rb.begin(), rb.end(), ra.begin(), ra.end()))
      return false;
  }
  return true;
}

Structure apply_consequence(const Definition& d, const Structure& i,
                            const Structure& j) {
  return consequence(merge_definition(d), i, j);
}

Structure stable_op(const Definition& d, const Structure& context,
                    const Structure& j) {
  const auto m = merge_definition(d);
  return stable_fix(m, context_for(d, context), j);
}

std::vector<Structure> stable_models(const Definition& d,
                                     const Structure& context,
                                     std::size_t atom_cap) {
  const auto m = merge_definition(d);
  const auto ctx = context_for(d, context);
  const auto atoms = domain_atoms(m, ctx.dom);
  if (atoms.size() > atom_cap)
    throw FoidError("SpaceTooLarge",
                    std::to_string(atoms.size()) +
                        " defined atoms exceed the cap of " +
                        std::to_string(atom_cap));
  std::vector<Structure> found;
  const std::size_t count = std::size_t{1} << atoms.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    Structure candidate = with_defined(m, ctx, false);
    for (std::size_t bit = 0; bit < atoms.size(); ++bit)
      if (mask & (std::size_t{1} << bit))
        candidate.rels[atoms[bit].pred].insert(atoms[bit].tuple);
    if (stable_fix(m, ctx, candidate) == candidate)
      found.push_back(std::move(candidate));
  }
  return found;
}

bool satisfies_st(const Structure& s, const Formula& f, const Env& env) {
  Env e = env;
  return satisfies_with(s, f, e, &st_def_case);
}

ThreeValued wf_via_oscillation(const Definition& d, const Structure& context) {
  const auto m = merge_definition(d);
  const auto ctx = context_for(d, context);
  auto squared = [&](const Structure& x) {
    return stable_fix(m, ctx, stable_fix(m, ctx, x));
  };
  Structure lo = with_defined(m, ctx, false);
  for (;;) {
    Structure next = squared(lo);
    if (next == lo) break;
    lo = std::move(next);
  }
  Structure hi = with_defined(m, ctx, true);
  for (;;) {
    Structure next = squared(hi);
    if (next == hi) break;
    hi = std::move(next);
  }
  if (!defined_leq(d, lo, hi))
    throw FoidError("Internal", "oscillation bounds are not ordered");
  return ThreeValued{lo, hi};
}

}  // namespace foid

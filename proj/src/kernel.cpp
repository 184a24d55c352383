#include "foid/kernel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace foid {

namespace {

struct TagName {
  RuleTag tag;
  const char* name;
};

constexpr TagName kTagNames[] = {
    {RuleTag::Ax, "ax"},       {RuleTag::Wk, "wk"},
    {RuleTag::Subst, "subst"}, {RuleTag::Cut, "cut"},
    {RuleTag::NotL, "notL"},   {RuleTag::NotR, "notR"},
    {RuleTag::AndL, "andL"},   {RuleTag::AndR, "andR"},
    {RuleTag::OrL, "orL"},     {RuleTag::OrR, "orR"},
    {RuleTag::ImpL, "impL"},   {RuleTag::ImpR, "impR"},
    {RuleTag::IffL, "iffL"},   {RuleTag::IffR, "iffR"},
    {RuleTag::AllL, "allL"},   {RuleTag::AllR, "allR"},
    {RuleTag::ExL, "exL"},     {RuleTag::ExR, "exR"},
    {RuleTag::EqL, "eqL"},     {RuleTag::EqR, "eqR"},
    {RuleTag::DefR, "defR"},   {RuleTag::DefL, "defL"},
    {RuleTag::DefL2, "defL2"},
};

}  // namespace

std::string to_string(RuleTag t) {
  for (const auto& e : kTagNames)
    if (e.tag == t) return e.name;
  return "?";
}

std::optional<RuleTag> rule_tag_from(const std::string& name) {
  for (const auto& e : kTagNames)
    if (name == e.name) return e.tag;
  return std::nullopt;
}

namespace {

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

void collect_bound(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FKind::False:
    case FKind::True:
    case FKind::Eq:
    case FKind::Atom:
      return;
    case FKind::Not:
      collect_bound(f.sub(), out);
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Iff:
      collect_bound(f.lhs(), out);
      collect_bound(f.rhs(), out);
      return;
    case FKind::Forall:
    case FKind::Exists:
      out.insert(f.var());
      collect_bound(f.sub(), out);
      return;
    case FKind::Def:
      for (const Rule& r : f.def().rules) {
        out.insert(r.bound.begin(), r.bound.end());
        collect_bound(r.body(), out);
      }
      return;
  }
}

FormulaSet subst_set(const FormulaSet& fs,
                     const std::map<std::string, Term>& sub) {
  std::vector<Formula> out;
  out.reserve(fs.size());
  for (const Formula& f : fs) out.push_back(substitute(f, sub));
  return FormulaSet(std::move(out));
}

std::set<std::string> free_in(const Sequent& s) {
  auto out = free_objects(s.left);
  auto r = free_objects(s.right);
  out.insert(r.begin(), r.end());
  return out;
}

// Principal formula layout of the one-sided logical rules.
struct PrincipalSpec {
  FKind kind;
  bool on_left;
};

std::optional<PrincipalSpec> principal_spec(RuleTag t) {
  switch (t) {
    case RuleTag::NotL: return PrincipalSpec{FKind::Not, true};
    case RuleTag::NotR: return PrincipalSpec{FKind::Not, false};
    case RuleTag::AndL: return PrincipalSpec{FKind::And, true};
    case RuleTag::AndR: return PrincipalSpec{FKind::And, false};
    case RuleTag::OrL: return PrincipalSpec{FKind::Or, true};
    case RuleTag::OrR: return PrincipalSpec{FKind::Or, false};
    case RuleTag::ImpL: return PrincipalSpec{FKind::Imp, true};
    case RuleTag::ImpR: return PrincipalSpec{FKind::Imp, false};
    case RuleTag::IffL: return PrincipalSpec{FKind::Iff, true};
    case RuleTag::IffR: return PrincipalSpec{FKind::Iff, false};
    case RuleTag::AllL: return PrincipalSpec{FKind::Forall, true};
    case RuleTag::AllR: return PrincipalSpec{FKind::Forall, false};
    case RuleTag::ExL: return PrincipalSpec{FKind::Exists, true};
    case RuleTag::ExR: return PrincipalSpec{FKind::Exists, false};
    default: return std::nullopt;
  }
}

bool has_keep_slack(RuleTag t) {
  return principal_spec(t).has_value() || t == RuleTag::DefR;
}

const Formula& principal_of(const Sequent& c, const RuleApp& app) {
  auto spec = principal_spec(app.tag);
  if (app.formulas.empty())
    throw FoidError("ArgumentMissing", "missing principal formula");
  const Formula& p = app.formulas[0];
  if (p.kind() != spec->kind)
    throw FoidError("PrincipalKindMismatch",
                    "principal formula " + to_string(p) +
                        " does not fit rule " + to_string(app.tag));
  const FormulaSet& side = spec->on_left ? c.left : c.right;
  if (!side.contains(p))
    throw FoidError("PrincipalMissing",
                    "principal formula " + to_string(p) +
                        " is not in the conclusion");
  return p;
}

const Term& witness_of(const RuleApp& app) {
  if (app.terms.empty())
    throw FoidError("ArgumentMissing", "missing witness term");
  return app.terms[0];
}

// ---------------------------------------------------------------------------
// Induction premises (defL / defL2)
// ---------------------------------------------------------------------------

Formula hyp_instance(const Hypothesis& h, const std::vector<Term>& args) {
  std::map<std::string, Term> sub;
  for (std::size_t i = 0; i < h.vars.size(); ++i) sub[h.vars[i]] = args[i];
  return substitute(h.formula, sub);
}

// Validates the induction set and hypotheses of a defL-family application
// against the definition; returns the hypotheses indexed by predicate.
std::map<std::string, Hypothesis> index_hyps(
    const Definition& d, const std::vector<std::string>& pi,
    const std::vector<Hypothesis>& hyps) {
  const auto defined = d.defined();
  std::set<std::string> pi_set;
  for (const auto& q : pi) {
    if (!defined.count(q))
      throw FoidError("InductionSetInvalid",
                      "'" + q + "' is not defined by the definition");
    pi_set.insert(q);
  }
  std::map<std::string, Hypothesis> by_pred;
  for (const Hypothesis& h : hyps) {
    if (!pi_set.count(h.pred))
      throw FoidError("HypothesisExtra",
                      "hypothesis for '" + h.pred +
                          "' which is not in the induction set");
    if (!by_pred.emplace(h.pred, h).second)
      throw FoidError("HypothesisExtra",
                      "duplicate hypothesis for '" + h.pred + "'");
    std::set<std::string> seen;
    for (const auto& v : h.vars)
      if (!seen.insert(v).second)
        throw FoidError("HypothesisVarsDuplicate",
                        "hypothesis placeholders for '" + h.pred +
                            "' are not distinct");
    if (static_cast<int>(h.vars.size()) != d.arity_of(h.pred))
      throw FoidError("HypothesisArity",
                      "hypothesis for '" + h.pred +
                          "' has the wrong number of placeholders");
    if (contains_def(h.formula))
      throw FoidError("HypothesisNotPureFO",
                      "hypothesis for '" + h.pred +
                          "' contains a definition");
  }
  for (const auto& q : pi_set)
    if (!by_pred.count(q))
      throw FoidError("HypothesisMissing", "no hypothesis for '" + q + "'");
  return by_pred;
}

struct InductionPremises {
  std::vector<Sequent> minors;
  Sequent major;
  std::set<std::string> rule_vars;  // eigenvariables of the side condition
};

// full_right: the minor premises keep the whole right side (primitive defL);
// otherwise the target hypothesis instance is removed first (defL2).
InductionPremises induction_premises(const Sequent& c, const RuleApp& app,
                                     bool full_right) {
  if (app.formulas.size() < 2)
    throw FoidError("ArgumentMissing",
                    "defL needs a definition and a principal atom");
  const Formula& phi = app.formulas[0];
  if (phi.kind() != FKind::Def)
    throw FoidError("DefExpected", "first argument is not a definition");
  if (!c.left.contains(phi))
    throw FoidError("DefNotPresent",
                    "the definition is not on the left of the conclusion");
  const Formula& principal = app.formulas[1];
  if (principal.kind() != FKind::Atom)
    throw FoidError("PrincipalKindMismatch",
                    "defL principal must be a defined atom");
  if (!c.left.contains(principal))
    throw FoidError("PrincipalMissing",
                    "principal atom " + to_string(principal) +
                        " is not in the conclusion");
  const Definition& d = phi.def();
  validate_definition(d);
  const std::string& p = principal.pred();
  if (d.arity_of(p) < 0)
    throw FoidError("PredicateNotDefined",
                    "'" + p + "' is not defined by the definition");
  auto by_pred = index_hyps(d, app.symbols, app.hyps);
  if (!by_pred.count(p))
    throw FoidError("InductionSetInvalid",
                    "the induction set must contain the principal "
                    "predicate '" + p + "'");

  InductionPremises out;
  const FormulaSet left0 = c.left.without(principal);
  const Formula target = hyp_instance(by_pred.at(p), principal.args());
  FormulaSet minor_right = c.right;
  if (!full_right) {
    if (!c.right.contains(target))
      throw FoidError("DefL2TargetMissing",
                      "the conclusion right side must contain " +
                          to_string(target));
    minor_right = c.right.without(target);
  }
  for (const Rule& r : d.rules) {
    out.rule_vars.insert(r.bound.begin(), r.bound.end());
    if (!by_pred.count(r.head_pred)) continue;
    Formula transformed = replace_positive(r.body(), app.hyps);
    Formula fq = hyp_instance(by_pred.at(r.head_pred), r.head_args);
    out.minors.push_back(
        Sequent{left0.with(transformed), minor_right.with(fq)});
  }
  out.major = Sequent{left0.with(target), c.right};
  return out;
}

// ---------------------------------------------------------------------------
// Premise computation
// ---------------------------------------------------------------------------

std::vector<Sequent> premises_with(const Sequent& c, const RuleApp& app,
                                   bool keep) {
  const FormulaSet& g = c.left;
  const FormulaSet& dd = c.right;
  switch (app.tag) {
    case RuleTag::Ax:
    case RuleTag::EqR:
      return {};
    case RuleTag::Wk:
    case RuleTag::Subst:
      if (!app.template_seq)
        throw FoidError("TemplateMissing",
                        to_string(app.tag) + " needs a premise sequent");
      return {*app.template_seq};
    case RuleTag::Cut: {
      if (app.formulas.empty())
        throw FoidError("ArgumentMissing", "missing cut formula");
      const Formula& f = app.formulas[0];
      return {Sequent{g, dd.with(f)}, Sequent{g.with(f), dd}};
    }
    case RuleTag::NotL: {
      const Formula& p = principal_of(c, app);
      return {Sequent{keep ? g : g.without(p), dd.with(p.sub())}};
    }
    case RuleTag::NotR: {
      const Formula& p = principal_of(c, app);
      return {Sequent{g.with(p.sub()), keep ? dd : dd.without(p)}};
    }
    case RuleTag::AndL: {
      const Formula& p = principal_of(c, app);
      return {Sequent{(keep ? g : g.without(p)).with(p.lhs()).with(p.rhs()),
                      dd}};
    }
    case RuleTag::AndR: {
      const Formula& p = principal_of(c, app);
      FormulaSet base = keep ? dd : dd.without(p);
      return {Sequent{g, base.with(p.lhs())}, Sequent{g, base.with(p.rhs())}};
    }
    case RuleTag::OrL: {
      const Formula& p = principal_of(c, app);
      FormulaSet base = keep ? g : g.without(p);
      return {Sequent{base.with(p.lhs()), dd}, Sequent{base.with(p.rhs()), dd}};
    }
    case RuleTag::OrR: {
      const Formula& p = principal_of(c, app);
      return {Sequent{g, (keep ? dd : dd.without(p)).with(p.lhs()).with(
                             p.rhs())}};
    }
    case RuleTag::ImpL: {
      const Formula& p = principal_of(c, app);
      FormulaSet base = keep ? g : g.without(p);
      return {Sequent{base, dd.with(p.lhs())},
              Sequent{base.with(p.rhs()), dd}};
    }
    case RuleTag::ImpR: {
      const Formula& p = principal_of(c, app);
      return {Sequent{g.with(p.lhs()),
                      (keep ? dd : dd.without(p)).with(p.rhs())}};
    }
    case RuleTag::IffL: {
      const Formula& p = principal_of(c, app);
      FormulaSet base = keep ? g : g.without(p);
      return {Sequent{base, dd.with(p.lhs()).with(p.rhs())},
              Sequent{base.with(p.lhs()).with(p.rhs()), dd}};
    }
    case RuleTag::IffR: {
      const Formula& p = principal_of(c, app);
      FormulaSet base = keep ? dd : dd.without(p);
      return {Sequent{g.with(p.lhs()), base.with(p.rhs())},
              Sequent{g.with(p.rhs()), base.with(p.lhs())}};
    }
    case RuleTag::AllL: {
      const Formula& p = principal_of(c, app);
      Formula inst = substitute(p.sub(), p.var(), witness_of(app));
      return {Sequent{(keep ? g : g.without(p)).with(inst), dd}};
    }
    case RuleTag::AllR: {
      const Formula& p = principal_of(c, app);
      return {Sequent{g, (keep ? dd : dd.without(p)).with(p.sub())}};
    }
    case RuleTag::ExL: {
      const Formula& p = principal_of(c, app);
      return {Sequent{(keep ? g : g.without(p)).with(p.sub()), dd}};
    }
    case RuleTag::ExR: {
      const Formula& p = principal_of(c, app);
      Formula inst = substitute(p.sub(), p.var(), witness_of(app));
      return {Sequent{g, (keep ? dd : dd.without(p)).with(inst)}};
    }
    case RuleTag::EqL: {
      if (app.symbols.size() < 2 || app.terms.size() < 2)
        throw FoidError("ArgumentMissing",
                        "eqL needs two template symbols and two terms");
      if (!app.template_seq)
        throw FoidError("TemplateMissing", "eqL needs a template sequent");
      std::map<std::string, Term> flipped{
          {app.symbols[0], app.terms[1]}, {app.symbols[1], app.terms[0]}};
      return {Sequent{subst_set(app.template_seq->left, flipped),
                      subst_set(app.template_seq->right, flipped)}};
    }
    case RuleTag::DefR: {
      if (app.formulas.empty())
        throw FoidError("ArgumentMissing", "missing definition");
      const Formula& phi = app.formulas[0];
      if (phi.kind() != FKind::Def)
        throw FoidError("DefExpected", "first argument is not a definition");
      if (!g.contains(phi))
        throw FoidError("DefNotPresent",
                        "the definition is not on the left of the conclusion");
      const Definition& d = phi.def();
      if (app.rule_index < 0 ||
          app.rule_index >= static_cast<int>(d.rules.size()))
        throw FoidError("RuleIndexOutOfRange",
                        "definition has no rule " +
                            std::to_string(app.rule_index));
      const Rule& r = d.rules[app.rule_index];
      if (app.terms.size() != r.bound.size())
        throw FoidError("WitnessArity",
                        "rule binds " + std::to_string(r.bound.size()) +
                            " symbols, got " + std::to_string(app.terms.size()) +
                            " witnesses");
      std::map<std::string, Term> sub;
      for (std::size_t i = 0; i < r.bound.size(); ++i) {
        if (!app.terms[i].is_symbol())
          throw FoidError("WitnessNotSymbol",
                          "witness " + to_string(app.terms[i]) +
                              " is not an object symbol");
        sub[r.bound[i]] = app.terms[i];
      }
      Formula head_inst =
          substitute(Formula::atom(r.head_pred, r.head_args), sub);
      if (!dd.contains(head_inst))
        throw FoidError("HeadInstanceMissing",
                        "conclusion right side lacks " + to_string(head_inst));
      Formula body_inst = substitute(r.body(), sub);
      return {Sequent{g, (keep ? dd : dd.without(head_inst)).with(body_inst)}};
    }
    case RuleTag::DefL: {
      auto ip = induction_premises(c, app, true);
      auto out = std::move(ip.minors);
      out.push_back(std::move(ip.major));
      return out;
    }
    case RuleTag::DefL2: {
      auto ip = induction_premises(c, app, false);
      return std::move(ip.minors);
    }
  }
  throw FoidError("Internal", "unreachable rule tag");
}

bool default_keep(const RuleApp& app) {
  if (app.keep) return true;
  if (app.drop) return false;
  return app.tag == RuleTag::AllL || app.tag == RuleTag::ExR;
}

}  // namespace

std::vector<Sequent> premises(const Sequent& conclusion, const RuleApp& app) {
  return premises_with(conclusion, app, default_keep(app));
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

namespace {

std::optional<CheckError> check_node(const Proof& p, std::size_t idx) {
  const ProofNode& n = p.nodes[idx];
  const Sequent& c = n.seq;
  const RuleApp& app = n.app;
  auto fail = [&](const std::string& reason, const std::string& message) {
    return CheckError{idx, to_string(app.tag), reason, message};
  };
  auto child_count = [&](std::size_t want) -> std::optional<CheckError> {
    if (n.children.size() != want)
      return fail("ChildCount", to_string(app.tag) + " expects " +
                                    std::to_string(want) + " premises, found " +
                                    std::to_string(n.children.size()));
    return std::nullopt;
  };
  std::vector<Sequent> got;
  got.reserve(n.children.size());
  for (std::size_t ch : n.children) got.push_back(p.nodes[ch].seq);

  try {
    switch (app.tag) {
      case RuleTag::Ax: {
        if (auto e = child_count(0)) return e;
        if (!c.left.intersects(c.right) &&
            !c.left.contains(Formula::falsum()) &&
            !c.right.contains(Formula::verum()))
          return fail("AxNotClosed",
                      "the two sides share no formula and no absurdity "
                      "closes the sequent");
        return std::nullopt;
      }
      case RuleTag::EqR: {
        if (auto e = child_count(0)) return e;
        for (const Formula& f : c.right)
          if (f.kind() == FKind::Eq && f.eq_lhs() == f.eq_rhs())
            return std::nullopt;
        return fail("EqRNoReflexive",
                    "the right side has no equation t = t");
      }
      case RuleTag::Wk: {
        if (auto e = child_count(1)) return e;
        if (!got[0].left.subset_of(c.left) ||
            !got[0].right.subset_of(c.right))
          return fail("WkNotSubset",
                      "premise [" + to_string(got[0]) +
                          "] is not contained in the conclusion");
        return std::nullopt;
      }
      case RuleTag::Subst: {
        if (auto e = child_count(1)) return e;
        if (app.terms.empty() || app.symbols.empty())
          return fail("ArgumentMissing", "subst needs a term and a symbol");
        const Term& t = app.terms[0];
        const std::string& x = app.symbols[0];
        std::set<std::string> bound;
        for (const Formula& f : got[0].left) collect_bound(f, bound);
        for (const Formula& f : got[0].right) collect_bound(f, bound);
        for (const auto& sym : free_objects(t))
          if (bound.count(sym))
            return fail("SubstBoundSymbol",
                        "'" + sym + "' in the substituted term is bound "
                        "inside the premise");
        std::map<std::string, Term> sub{{x, t}};
        Sequent image{subst_set(got[0].left, sub),
                      subst_set(got[0].right, sub)};
        if (!(image == c))
          return fail("SubstMismatch",
                      "substituting produces [" + to_string(image) +
                          "], not the conclusion");
        return std::nullopt;
      }
      case RuleTag::EqL: {
        if (auto e = child_count(1)) return e;
        if (app.symbols.size() < 2 || app.terms.size() < 2)
          return fail("ArgumentMissing",
                      "eqL needs two template symbols and two terms");
        if (!app.template_seq)
          return fail("TemplateMissing", "eqL needs a template sequent");
        const std::string& x = app.symbols[0];
        const std::string& y = app.symbols[1];
        const Term& t = app.terms[0];
        const Term& s = app.terms[1];
        if (x == y)
          return fail("EqLTemplateSymbols",
                      "the template symbols must be distinct");
        auto used = free_objects(t);
        for (const auto& v : free_objects(s)) used.insert(v);
        for (const auto& v : free_in(c)) used.insert(v);
        if (used.count(x) || used.count(y))
          return fail("EqLTemplateSymbols",
                      "template symbols must be fresh for the terms and "
                      "the conclusion");
        std::map<std::string, Term> fwd{{x, t}, {y, s}};
        Sequent expect{
            subst_set(app.template_seq->left, fwd).with(Formula::eq(t, s)),
            subst_set(app.template_seq->right, fwd)};
        if (!(expect == c))
          return fail("EqLConclusionMismatch",
                      "the template instantiates to [" + to_string(expect) +
                          "], not the conclusion");
        auto prem = premises_with(c, app, false);
        if (!(got[0] == prem[0]))
          return fail("PremiseMismatch",
                      "premise should be [" + to_string(prem[0]) +
                          "], found [" + to_string(got[0]) + "]");
        return std::nullopt;
      }
      default:
        break;
    }

    // Rules whose premises are fully determined by the conclusion and the
    // arguments. Side conditions first, then premise matching with the
    // principal kept or dropped (one choice for the whole node).
    auto prem = premises_with(c, app, false);
    if (app.tag == RuleTag::AllR || app.tag == RuleTag::ExL) {
      const Formula& p0 = principal_of(c, app);
      const FormulaSet& rest = app.tag == RuleTag::AllR
                                   ? c.right.without(p0)
                                   : c.left.without(p0);
      auto frees = free_objects(app.tag == RuleTag::AllR ? c.left : c.right);
      for (const auto& v : free_objects(rest)) frees.insert(v);
      if (frees.count(p0.var()))
        return fail("EigenvariableFree",
                    "'" + p0.var() + "' occurs free in the conclusion");
    }
    if (app.tag == RuleTag::DefL || app.tag == RuleTag::DefL2) {
      auto ip = induction_premises(c, app, app.tag == RuleTag::DefL);
      auto frees = free_objects(c.left.without(app.formulas[1]));
      for (const auto& v : free_objects(c.right)) frees.insert(v);
      for (const auto& v : ip.rule_vars)
        if (frees.count(v))
          return fail("DefLSideCondition",
                      "rule variable '" + v +
                          "' occurs free in the conclusion");
    }
    if (auto e = child_count(prem.size())) return e;
    if (std::equal(prem.begin(), prem.end(), got.begin(),
                   [](const Sequent& a, const Sequent& b) { return a == b; }))
      return std::nullopt;
    if (has_keep_slack(app.tag)) {
      auto kept = premises_with(c, app, true);
      if (std::equal(kept.begin(), kept.end(), got.begin(),
                     [](const Sequent& a, const Sequent& b) {
                       return a == b;
                     }))
        return std::nullopt;
    }
    std::size_t at = 0;
    while (at < prem.size() && prem[at] == got[at]) ++at;
    std::string reason = "PremiseMismatch";
    if (app.tag == RuleTag::DefL)
      reason = at + 1 == prem.size() ? "MajorPremiseMismatch"
                                     : "MinorPremiseMismatch";
    else if (app.tag == RuleTag::DefL2)
      reason = "MinorPremiseMismatch";
    return fail(reason, "premise " + std::to_string(at) + " should be [" +
                            to_string(prem[at]) + "], found [" +
                            to_string(got[at]) + "]");
  } catch (const FoidError& e) {
    return fail(e.code(), e.what());
  }
}

}  // namespace

std::optional<CheckError> check(const Proof& p, const Sequent& expected_root) {
  if (p.nodes.empty())
    return CheckError{0, "?", "EmptyProof", "the proof has no nodes"};
  if (p.root >= p.nodes.size())
    return CheckError{p.root, "?", "BadChildIndex",
                      "root index is out of range"};
  if (!(p.nodes[p.root].seq == expected_root))
    return CheckError{p.root, to_string(p.nodes[p.root].app.tag), "BadRoot",
                      "root proves [" + to_string(p.nodes[p.root].seq) +
                          "], expected [" + to_string(expected_root) + "]"};

  enum State : unsigned char { Fresh, Active, Done };
  std::vector<State> state(p.nodes.size(), Fresh);
  std::function<std::optional<CheckError>(std::size_t)> visit =
      [&](std::size_t idx) -> std::optional<CheckError> {
    for (std::size_t ch : p.nodes[idx].children) {
      if (ch >= p.nodes.size())
        return CheckError{idx, to_string(p.nodes[idx].app.tag),
                          "BadChildIndex",
                          "child index " + std::to_string(ch) +
                              " is out of range"};
      if (state[ch] == Active)
        return CheckError{idx, to_string(p.nodes[idx].app.tag), "CyclicProof",
                          "node " + std::to_string(ch) +
                              " is its own ancestor"};
    }
    if (auto e = check_node(p, idx)) return e;
    state[idx] = Active;
    for (std::size_t ch : p.nodes[idx].children) {
      if (state[ch] == Done) continue;
      if (auto e = visit(ch)) return e;
    }
    state[idx] = Done;
    return std::nullopt;
  };
  if (auto e = visit(p.root)) return e;
  for (std::size_t i = 0; i < p.nodes.size(); ++i)
    if (state[i] != Done)
      return CheckError{i, to_string(p.nodes[i].app.tag), "UnreachableNode",
                        "node " + std::to_string(i) +
                            " is not part of the proof tree"};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Script elaboration
// ---------------------------------------------------------------------------

namespace {

RuleApp convert(const ScriptNode& sn) {
  auto tag = rule_tag_from(sn.tag);
  if (!tag)
    throw FoidError("UnknownRule", "unknown rule tag '" + sn.tag + "'",
                    sn.span);
  RuleApp app;
  app.tag = *tag;
  app.formulas = sn.formulas;
  app.terms = sn.terms;
  app.symbols = sn.symbols;
  app.hyps = sn.hyps;
  app.template_seq = sn.seq_arg;
  app.rule_index = sn.rule_index;
  app.keep = sn.keep;
  app.drop = sn.drop;
  return app;
}

}  // namespace

Proof elaborate(const Sequent& root, const ScriptNode& script) {
  Proof p;
  std::function<std::size_t(const ScriptNode&, const Sequent&)> go =
      [&](const ScriptNode& sn, const Sequent& incoming) -> std::size_t {
    Sequent seq = sn.at ? *sn.at : incoming;
    RuleApp app = convert(sn);
    std::size_t idx = p.nodes.size();
    p.nodes.push_back(ProofNode{seq, app, {}});
    std::vector<Sequent> prem;
    try {
      prem = premises(seq, app);
    } catch (const FoidError& e) {
      throw FoidError(e.code(), e.what(), sn.span);
    }
    if (prem.size() != sn.children.size())
      throw FoidError("ChildCount",
                      sn.tag + " expects " + std::to_string(prem.size()) +
                          " premises, found " +
                          std::to_string(sn.children.size()),
                      sn.span);
    std::vector<std::size_t> kids;
    kids.reserve(prem.size());
    for (std::size_t i = 0; i < prem.size(); ++i)
      kids.push_back(go(sn.children[i], prem[i]));
    p.nodes[idx].children = std::move(kids);
    return idx;
  };
  p.root = go(script, root);
  return p;
}

Proof expand_def_l2(const Proof& p) {
  Proof out;
  std::function<std::size_t(std::size_t)> copy =
      [&](std::size_t old) -> std::size_t {
    const ProofNode& n = p.nodes[old];
    if (n.app.tag != RuleTag::DefL2) {
      std::vector<std::size_t> kids;
      kids.reserve(n.children.size());
      for (std::size_t ch : n.children) kids.push_back(copy(ch));
      out.nodes.push_back(ProofNode{n.seq, n.app, std::move(kids)});
      return out.nodes.size() - 1;
    }
    RuleApp prim = n.app;
    prim.tag = RuleTag::DefL;
    auto ip = induction_premises(n.seq, prim, true);
    if (ip.minors.size() != n.children.size())
      throw FoidError("ChildCount",
                      "defL2 node has " + std::to_string(n.children.size()) +
                          " children, expected " +
                          std::to_string(ip.minors.size()));
    std::vector<std::size_t> kids;
    for (std::size_t i = 0; i < ip.minors.size(); ++i) {
      std::size_t sub = copy(n.children[i]);
      RuleApp wk;
      wk.tag = RuleTag::Wk;
      wk.template_seq = out.nodes[sub].seq;
      out.nodes.push_back(ProofNode{ip.minors[i], wk, {sub}});
      kids.push_back(out.nodes.size() - 1);
    }
    RuleApp ax;
    ax.tag = RuleTag::Ax;
    out.nodes.push_back(ProofNode{ip.major, ax, {}});
    kids.push_back(out.nodes.size() - 1);
    out.nodes.push_back(ProofNode{n.seq, prim, std::move(kids)});
    return out.nodes.size() - 1;
  };
  out.root = copy(p.root);
  return out;
}

// ---------------------------------------------------------------------------
// Induction artifacts
// ---------------------------------------------------------------------------

std::vector<Formula> material_implications(const Definition& d) {
  validate_definition(d);
  std::vector<Formula> out;
  for (const Rule& r : d.rules) {
    Formula f = Formula::imp(r.body(), Formula::atom(r.head_pred, r.head_args));
    for (auto it = r.bound.rbegin(); it != r.bound.rend(); ++it)
      f = Formula::forall(*it, f);
    out.push_back(std::move(f));
  }
  return out;
}

Formula induction_instance(const Definition& d, const std::string& p,
                           const std::vector<std::string>& pi,
                           const std::vector<Hypothesis>& hyps) {
  validate_definition(d);
  auto by_pred = index_hyps(d, pi, hyps);
  if (!by_pred.count(p))
    throw FoidError("InductionSetInvalid",
                    "the induction set must contain '" + p + "'");
  std::vector<Formula> conjuncts;
  for (const Rule& r : d.rules) {
    if (!by_pred.count(r.head_pred)) continue;
    Formula transformed = replace_positive(r.body(), hyps);
    Formula fq = hyp_instance(by_pred.at(r.head_pred), r.head_args);
    Formula f = Formula::imp(std::move(transformed), std::move(fq));
    for (auto it = r.bound.rbegin(); it != r.bound.rend(); ++it)
      f = Formula::forall(*it, f);
    conjuncts.push_back(std::move(f));
  }
  Formula antecedent = conjuncts.back();
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;)
    antecedent = Formula::land(conjuncts[i], antecedent);

  auto used = all_names(Formula::def(d));
  for (const Hypothesis& h : hyps) {
    auto more = all_names(h.formula);
    used.insert(more.begin(), more.end());
    used.insert(h.vars.begin(), h.vars.end());
  }
  const int arity = d.arity_of(p);
  std::vector<std::string> xs;
  std::vector<Term> xterms;
  for (int i = 0; i < arity; ++i) {
    auto x = fresh_name("x" + std::to_string(i + 1), used);
    used.insert(x);
    xs.push_back(x);
    xterms.emplace_back(x);
  }
  Formula consequent = Formula::imp(Formula::atom(p, xterms),
                                    hyp_instance(by_pred.at(p), xterms));
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    consequent = Formula::forall(*it, consequent);
  return Formula::imp(std::move(antecedent), std::move(consequent));
}

// ---------------------------------------------------------------------------
// Advisory lint
// ---------------------------------------------------------------------------

namespace {

bool is_elementary_cut(const Formula& f,
                       const std::set<std::string>& negated) {
  std::vector<std::string> vars;
  Formula core = f;
  while (core.kind() == FKind::Forall) {
    vars.push_back(core.var());
    core = core.sub();
  }
  std::set<std::string> distinct(vars.begin(), vars.end());
  if (distinct.size() != vars.size()) return false;
  if (core.kind() != FKind::Or) return false;
  const Formula& pos = core.lhs();
  const Formula& neg = core.rhs();
  if (pos.kind() != FKind::Atom || neg.kind() != FKind::Not ||
      neg.sub().kind() != FKind::Atom)
    return false;
  if (pos.pred() != neg.sub().pred() || !(pos.args() == neg.sub().args()))
    return false;
  if (!negated.count(pos.pred())) return false;
  if (pos.args().size() != vars.size()) return false;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (!(pos.args()[i] == Term(vars[i]))) return false;
  return true;
}

}  // namespace

std::vector<LintWarning> lint(const Proof& p) {
  std::vector<LintWarning> out;
  if (p.nodes.empty()) return out;

  std::set<std::string> negated;
  for (const Formula& f : p.nodes[p.root].seq.left) {
    if (f.kind() != FKind::Def) continue;
    for (const Rule& r : f.def().rules)
      for (const auto& [q, arity] : vocabulary(r.body()).preds)
        if (occurs_negatively(r.body(), q)) negated.insert(q);
  }

  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    const ProofNode& n = p.nodes[i];
    if ((n.app.tag == RuleTag::DefL || n.app.tag == RuleTag::DefL2) &&
        n.app.formulas.size() >= 2 &&
        n.app.formulas[0].kind() == FKind::Def &&
        n.app.formulas[1].kind() == FKind::Atom) {
      auto mds =
          mutual_dependents(n.app.formulas[0].def(), n.app.formulas[1].pred());
      std::string wide;
      for (const auto& q : n.app.symbols)
        if (!mds.count(q)) wide += (wide.empty() ? "" : ", ") + q;
      if (!wide.empty())
        out.push_back(
            {i, "BroadInductionSet",
             "induction set reaches beyond the mutual dependents of '" +
                 n.app.formulas[1].pred() + "': " + wide});
    }
    if (n.app.tag == RuleTag::Cut && !n.app.formulas.empty() &&
        !is_elementary_cut(n.app.formulas[0], negated))
      out.push_back({i, "NonElementaryCut",
                     "cut formula " + to_string(n.app.formulas[0]) +
                         " is not an excluded-middle instance for a "
                         "negatively defined predicate"});
  }
  return out;
}

}  // namespace foid

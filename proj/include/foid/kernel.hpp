#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foid/parser.hpp"
#include "foid/syntax.hpp"

namespace foid {

// ---------------------------------------------------------------------------
// Proof objects
// ---------------------------------------------------------------------------

enum class RuleTag {
  Ax,
  Wk,
  Subst,
  Cut,
  NotL,
  NotR,
  AndL,
  AndR,
  OrL,
  OrR,
  ImpL,
  ImpR,
  IffL,
  IffR,
  AllL,
  AllR,
  ExL,
  ExR,
  EqL,
  EqR,
  DefR,
  DefL,
  DefL2,
};

std::string to_string(RuleTag t);
std::optional<RuleTag> rule_tag_from(const std::string& name);

// Instantiation of one inference rule. Field use mirrors the script surface:
//   wk:    template_seq = the premise
//   subst: template_seq = the premise, terms[0] = t, symbols[0] = x
//   cut:   formulas[0] = cut formula
//   one-sided logical rules: formulas[0] = principal formula
//   allL/exR: formulas[0] = principal, terms[0] = witness term
//   eqL:   symbols = {x, y}, terms = {t, s}, template_seq = template sequent
//   defR:  formulas[0] = definition, rule_index, terms = witness symbols
//   defL/defL2: formulas[0] = definition, formulas[1] = principal atom,
//               symbols = induction set, hyps = induction hypotheses
// keep/drop force the principal formula to stay in or leave the premise.
struct RuleApp {
  RuleTag tag = RuleTag::Ax;
  std::vector<Formula> formulas;
  std::vector<Term> terms;
  std::vector<std::string> symbols;
  std::vector<Hypothesis> hyps;
  std::optional<Sequent> template_seq;
  int rule_index = -1;
  bool keep = false;
  bool drop = false;
};

struct ProofNode {
  Sequent seq;
  RuleApp app;
  std::vector<std::size_t> children;
};

// A tree of rule applications stored as an index forest; nodes[root] proves
// its sequent from the leaves. check() enforces that the children vectors
// form a tree reaching every node.
struct Proof {
  std::vector<ProofNode> nodes;
  std::size_t root = 0;
};

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

// First defect found in depth-first order. `reason` is a stable
// machine-readable code; `rule` names the rule of the offending node.
struct CheckError {
  std::size_t node = 0;
  std::string rule;
  std::string reason;
  std::string message;
};

// Verifies every node against its children's recorded sequents. Premises of
// rules with a principal formula are accepted with the principal either kept
// or dropped, chosen consistently across the premises of one node; defL and
// defL2 premises must match exactly. Returns the first error in depth-first
// preorder, or nullopt for a correct proof of expected_root.
std::optional<CheckError> check(const Proof& p, const Sequent& expected_root);

// The sequents a node commits its children to, in child order, using the
// node's keep/drop flags (throws FoidError for malformed applications).
std::vector<Sequent> premises(const Sequent& conclusion, const RuleApp& app);

// ---------------------------------------------------------------------------
// Script elaboration
// ---------------------------------------------------------------------------

// Turns a parsed script into a proof: each child's sequent is the computed
// premise of its parent unless the child carries an `at` annotation, which
// wins. Throws FoidError (UnknownRule, ChildCount, or a premise-construction
// code) when the script cannot be shaped into a tree.
Proof elaborate(const Sequent& root, const ScriptNode& script);

// Replaces every defL2 node by its expansion: the primitive defL whose minor
// premises are weakened to the recorded subtrees and whose major premise
// closes axiomatically.
Proof expand_def_l2(const Proof& p);

// ---------------------------------------------------------------------------
// Induction artifacts
// ---------------------------------------------------------------------------

// One implication per rule: forall x̄. body => head.
std::vector<Formula> material_implications(const Definition& d);

// The induction-scheme instance for principal predicate p over induction set
// pi with the given hypotheses: the conjunction of the per-rule premises
// implies forall x̄. p(x̄) => F_p[x̄] with fresh x̄.
Formula induction_instance(const Definition& d, const std::string& p,
                           const std::vector<std::string>& pi,
                           const std::vector<Hypothesis>& hyps);

// ---------------------------------------------------------------------------
// Advisory lint
// ---------------------------------------------------------------------------

struct LintWarning {
  std::size_t node = 0;
  std::string code;
  std::string message;
};

// Two advisory checks over a checked proof:
//  - BroadInductionSet: a defL/defL2 induction set reaches beyond the mutual
//    dependents of its principal predicate;
//  - NonElementaryCut: a cut formula that is not forall ȳ. Q(ȳ) | ~Q(ȳ) for
//    a predicate Q with a negative occurrence in a root-left definition.
std::vector<LintWarning> lint(const Proof& p);

}  // namespace foid

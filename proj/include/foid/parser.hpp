#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "foid/semantics.hpp"
#include "foid/syntax.hpp"

namespace foid {

// ---------------------------------------------------------------------------
// Proof scripts
// ---------------------------------------------------------------------------

// One node of a proof script: a rule tag with its arguments and child
// subproofs. Premise sequents are computed during elaboration; an `at`
// annotation overrides the computed conclusion of the node (the kernel then
// reports any mismatch at the parent).
struct ScriptNode {
  std::string tag;
  SourceSpan span;

  std::vector<Formula> formulas;     // principal / cut / definition / ...
  std::vector<Term> terms;           // witnesses and equation sides
  std::vector<std::string> symbols;  // template symbols, predicate lists
  std::vector<Hypothesis> hyps;      // induction hypotheses
  std::optional<Sequent> seq_arg;    // explicit premise or template sequent
  std::optional<Sequent> at;         // conclusion annotation
  int rule_index = -1;
  bool keep = false;  // retain the principal formula in the premise
  bool drop = false;  // remove it (overrides the per-rule default)

  std::vector<ScriptNode> children;
};

bool operator==(const ScriptNode& a, const ScriptNode& b);
bool operator==(const Hypothesis& a, const Hypothesis& b);

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

struct DeclItem {
  bool is_pred = false;
  std::vector<std::pair<std::string, int>> sigs;
};
struct FormulaItem {
  std::string name;
  Formula formula;
};
struct DefItem {
  std::string name;
  Definition def;
};
struct SequentItem {
  std::string name;
  Sequent seq;
};
struct StructItem {
  std::string name;
  Structure structure;
};
struct ProofItem {
  std::string of;  // name of the sequent being proved
  ScriptNode root;
};
// Request for one induction-scheme instance, used by the first-order export.
struct SchemeItem {
  std::string name;
  std::string def_name;   // definition item the scheme instantiates
  std::string principal;  // defined predicate the scheme concludes about
  std::vector<std::string> pi;
  std::vector<Hypothesis> hyps;
};

using DocItem = std::variant<DeclItem, FormulaItem, DefItem, SequentItem,
                             StructItem, ProofItem, SchemeItem>;

struct Document {
  std::vector<DocItem> items;

  const Definition* find_def(const std::string& name) const;
  const Formula* find_formula(const std::string& name) const;
  const Sequent* find_sequent(const std::string& name) const;
  const Structure* find_structure(const std::string& name) const;
  std::vector<const ProofItem*> proofs() const;
  std::vector<const ProofItem*> proofs_of(const std::string& name) const;
  std::vector<const SchemeItem*> schemes() const;
};

bool operator==(const Document& a, const Document& b);
inline bool operator!=(const Document& a, const Document& b) {
  return !(a == b);
}

// Parses a complete document. All parse failures raise FoidError with codes
// SyntaxError, UnknownSymbol, ArityMismatch or DuplicateName, carrying the
// source span of the offending token.
Document parse_document(const std::string& text);

// Parses a single formula against explicit signature tables. Bound
// variables need no declaration; with `relaxed`, unknown nullary symbols
// are accepted as objects.
Formula parse_formula(const std::string& text,
                      const std::map<std::string, int>& preds,
                      const std::map<std::string, int>& funcs,
                      bool relaxed = false);

std::string print_document(const Document& doc);

}  // namespace foid

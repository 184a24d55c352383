#pragma once

#include <string>
#include <vector>

#include "foid/semantics.hpp"
#include "foid/syntax.hpp"

namespace foid {

// ---------------------------------------------------------------------------
// Merged-body machinery shared by the fixpoint engines
// ---------------------------------------------------------------------------

// Precomputed merged bodies of a definition: for each defined predicate a
// placeholder tuple and the single body equivalent to all its rules.
struct MergedDef {
  Definition def;
  std::vector<std::string> preds;  // first-appearance order
  std::map<std::string, int> arities;
  std::map<std::string, std::vector<std::string>> placeholders;
  std::map<std::string, Formula> bodies;
};

MergedDef merge_definition(const Definition& d);

// One ground atom of a defined predicate.
struct DomainAtom {
  std::string pred;
  std::vector<int> tuple;

  bool operator==(const DomainAtom&) const = default;
  bool operator<(const DomainAtom& o) const {
    return pred != o.pred ? pred < o.pred : tuple < o.tuple;
  }
};

std::string to_string(const DomainAtom& a);

// All defined atoms over the context domain, in deterministic order
// (predicates in first-appearance order, tuples lexicographic).
std::vector<DomainAtom> domain_atoms(const MergedDef& m, int dom);

// Kleene value of the merged body of `a` in the three-valued structure.
TruthValue body_value(const MergedDef& m, const ThreeValued& s,
                      const DomainAtom& a);

// Two-structure value of the merged body of `a`: positive occurrences read
// in i, occurrences under an odd number of negations in j.
bool body_holds_pair(const MergedDef& m, const Structure& i,
                     const Structure& j, const DomainAtom& a);

// ---------------------------------------------------------------------------
// Well-founded construction
// ---------------------------------------------------------------------------

struct WfStep {
  bool to_true = false;          // direction of the refinement
  std::vector<DomainAtom> atoms; // the refined set U
};

struct WfResult {
  ThreeValued model;
  ThreeValued start;
  std::vector<WfStep> steps;
};

// Checks that the context interprets exactly the parameters of d (extra
// symbols are dropped, missing ones raise FoidError("BadContext")) and
// returns the all-unknown starting structure.
ThreeValued initial_structure(const Definition& d, const Structure& context);

// The greatest unfounded set of the current structure: the largest set U of
// unknown defined atoms such that every member's body is false after the
// whole of U is set false. Computed by evicting non-false members until the
// set is stable.
std::vector<DomainAtom> greatest_unfounded_set(const Definition& d,
                                               const ThreeValued& s);

// Runs refinement steps to the terminal structure: batches of body-true
// atoms first, greatest unfounded sets otherwise. The trace records every
// step.
WfResult well_founded_model(const Definition& d, const Structure& context);

// No unknown atoms left anywhere.
bool is_total(const ThreeValued& s);

// Replays a trace from the start structure, checking every step is a legal
// refinement (bodies true beforehand for a true step; bodies false after
// setting the whole set false for a false step) and that it ends in the
// reported model. Throws FoidError("BadTrace") otherwise.
void verify_trace(const Definition& d, const WfResult& r);

// Truth in the well-founded sense: Tarskian recursion where a definition
// formula holds iff the structure restricted to its symbols is its (then
// necessarily two-valued) well-founded model.
bool satisfies_wf(const Structure& s, const Formula& f, const Env& env = {});

// Tarskian recursion with a pluggable clause for definition formulas; the
// backbone of both satisfaction relations.
bool satisfies_with(const Structure& s, const Formula& f, Env& env,
                    bool (*def_case)(const Structure&, const Definition&,
                                     const Env&));

// Applies one refinement: sets the atoms true (into lower) or false (out of
// upper). Exposed for schedule experiments.
ThreeValued refine(const ThreeValued& s, const std::vector<DomainAtom>& atoms,
                   bool to_true);

// Extracts the parameter part of a structure for a definition, folding env
// values of parameter objects into the assignment. Raises
// FoidError("BadContext") when a parameter has no interpretation.
Structure context_for(const Definition& d, const Structure& s,
                      const Env& env = {});

}  // namespace foid

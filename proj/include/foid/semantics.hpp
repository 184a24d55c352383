#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "foid/syntax.hpp"

namespace foid {

// ---------------------------------------------------------------------------
// Truth values and orders
// ---------------------------------------------------------------------------

enum class TruthValue { False, Unknown, True };

// truth order: False < Unknown < True
bool leq_t(TruthValue a, TruthValue b);
// precision order: Unknown below False and True; False, True incomparable
bool leq_p(TruthValue a, TruthValue b);

TruthValue tv_not(TruthValue a);
TruthValue tv_and(TruthValue a, TruthValue b);  // min in the truth order
TruthValue tv_or(TruthValue a, TruthValue b);   // max in the truth order
TruthValue tv_of(bool b);
std::string to_string(TruthValue v);

// ---------------------------------------------------------------------------
// Finite two-valued structures
// ---------------------------------------------------------------------------

// Total function over domain {0..dom-1}; the table is indexed big-endian:
// index(a1..ak) = ((a1 * dom) + a2) * dom + ... + ak.
struct FuncInterp {
  int arity = 0;
  std::vector<int> table;  // size dom^arity

  bool operator==(const FuncInterp&) const = default;
};

struct Structure {
  int dom = 1;
  std::map<std::string, FuncInterp> funcs;
  std::map<std::string, std::set<std::vector<int>>> rels;
  // values for loose object symbols, consulted after funcs
  std::map<std::string, int> assign;

  bool operator==(const Structure&) const = default;

  bool holds(const std::string& pred, const std::vector<int>& tuple) const;
  int apply(const std::string& fn, const std::vector<int>& args) const;
};

// Variable assignment for quantified evaluation; consulted before the
// structure's own symbols.
using Env = std::map<std::string, int>;

// All tuples over {0..dom-1} of the given arity, in lexicographic order.
std::vector<std::vector<int>> all_tuples(int dom, int arity);

int eval_term(const Structure& s, const Env& env, const Term& t);

// Tarskian evaluation of a pure FO formula. Throws
// FoidError("PureFORequired") on definitions and
// FoidError("Uninterpreted") on missing symbols.
bool eval_two(const Structure& s, const Formula& f, const Env& env = {});

// ---------------------------------------------------------------------------
// Three-valued structures
// ---------------------------------------------------------------------------

// Stored as a pair of two-valued structures sharing domain, functions and
// assignment: a tuple is true when in lower, unknown when in upper only,
// false when in neither. Invariant: lower relations are included in upper
// relations.
struct ThreeValued {
  Structure lower;
  Structure upper;

  bool operator==(const ThreeValued&) const = default;

  TruthValue atom(const std::string& pred,
                  const std::vector<int>& tuple) const;
  bool consistent() const;  // lower included in upper, shared skeleton
};

// Lifts a two-valued structure to an exact three-valued one.
ThreeValued exact(const Structure& s);

// Kleene evaluation of a pure FO formula: equality and the connectives
// evaluated with the strong Kleene tables; the derived connectives follow
// their reformulation through negation, conjunction and universal
// quantification.
TruthValue eval_kleene(const ThreeValued& a, const Formula& f,
                       const Env& env = {});

// Pair evaluation: positive occurrences read from i, negated positions
// from j, by swapping the pair under each negation.
bool eval_pair(const Structure& i, const Structure& j, const Formula& f,
               const Env& env = {});

// Pointwise precision comparison of two three-valued structures over the
// union of their relation symbols (shared skeleton required).
bool leq_p(const ThreeValued& a, const ThreeValued& b);

// Keeps only the listed relation and function symbols (assign entries count
// as nullary functions).
Structure restrict_structure(const Structure& s,
                             const std::set<std::string>& preds,
                             const std::set<std::string>& funcs);

}  // namespace foid

#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace foid {

// Position of a construct inside an input text, in bytes and line/column
// (1-based). end is exclusive.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

// Every library error carries a stable machine-readable code, a human
// message, and (when it originates from text) a source span.
class FoidError : public std::runtime_error {
 public:
  FoidError(std::string code, const std::string& message,
            SourceSpan span = {})
      : std::runtime_error(message), code_(std::move(code)), span_(span) {}

  const std::string& code() const { return code_; }
  const SourceSpan& span() const { return span_; }

 private:
  std::string code_;
  SourceSpan span_;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

// First-order term: an object symbol is a nullary function application.
struct Term {
  std::string fn;
  std::vector<Term> args;

  Term() = default;
  explicit Term(std::string symbol) : fn(std::move(symbol)) {}
  Term(std::string f, std::vector<Term> as)
      : fn(std::move(f)), args(std::move(as)) {}

  bool is_symbol() const { return args.empty(); }
};

int compare(const Term& a, const Term& b);
bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }
inline bool operator<(const Term& a, const Term& b) {
  return compare(a, b) < 0;
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

enum class FKind {
  False,
  True,
  Eq,
  Atom,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Forall,
  Exists,
  Def,
};

class Formula;

// One rule of a definition: forall <bound>. head_pred(head_args) <- body.
struct Rule {
  std::vector<std::string> bound;
  std::string head_pred;
  std::vector<Term> head_args;
  // body is stored as a Formula; the well-formedness check rejects nested
  // definitions inside bodies.
  std::shared_ptr<const Formula> body_ptr;

  const Formula& body() const { return *body_ptr; }
};

// A definition is a finite list of rules. Invariants (checked by
// validate_definition): bound symbols of a rule are pairwise distinct, no
// bound symbol of one rule occurs free in another rule, bodies contain no
// nested definition.
struct Definition {
  std::vector<Rule> rules;

  // Predicates appearing in some rule head, in first-appearance order.
  std::vector<std::string> defined_order() const;
  std::set<std::string> defined() const;
  int arity_of(const std::string& pred) const;  // -1 if not defined here
};

// Immutable formula handle with value semantics; nodes are shared.
class Formula {
 public:
  Formula();  // verum, so that default construction is harmless

  FKind kind() const { return node_->kind; }

  // Eq
  const Term& eq_lhs() const;
  const Term& eq_rhs() const;
  // Atom
  const std::string& pred() const;
  const std::vector<Term>& args() const;
  // Not / quantifier body
  const Formula& sub() const;
  // binary connectives
  const Formula& lhs() const;
  const Formula& rhs() const;
  // quantifiers
  const std::string& var() const;
  // Def
  const Definition& def() const;

  static Formula falsum();
  static Formula verum();
  static Formula eq(Term l, Term r);
  static Formula atom(std::string pred, std::vector<Term> args = {});
  static Formula lnot(Formula f);
  static Formula land(Formula l, Formula r);
  static Formula lor(Formula l, Formula r);
  static Formula imp(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula def(Definition d);

 private:
  struct Node {
    FKind kind = FKind::True;
    Term t1, t2;                  // Eq
    std::string name;             // Atom predicate / quantifier variable
    std::vector<Term> atom_args;  // Atom
    std::vector<Formula> subs;    // Not: 1, binary: 2, quantifier: 1
    std::shared_ptr<const Definition> definition;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend int compare(const Formula& a, const Formula& b);
};

int compare(const Formula& a, const Formula& b);
bool operator==(const Formula& a, const Formula& b);
inline bool operator!=(const Formula& a, const Formula& b) {
  return !(a == b);
}
inline bool operator<(const Formula& a, const Formula& b) {
  return compare(a, b) < 0;
}

// ---------------------------------------------------------------------------
// Sequents as a pair of finite formula sets
// ---------------------------------------------------------------------------

// A finite set of formulas with canonical (sorted, deduplicated) storage.
class FormulaSet {
 public:
  FormulaSet() = default;
  FormulaSet(std::initializer_list<Formula> fs);
  explicit FormulaSet(std::vector<Formula> fs);

  bool contains(const Formula& f) const;
  bool subset_of(const FormulaSet& other) const;
  bool intersects(const FormulaSet& other) const;
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  FormulaSet with(const Formula& f) const;     // insert
  FormulaSet without(const Formula& f) const;  // erase one element
  FormulaSet unite(const FormulaSet& other) const;

  const std::vector<Formula>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  friend bool operator==(const FormulaSet& a, const FormulaSet& b);
  friend bool operator!=(const FormulaSet& a, const FormulaSet& b) {
    return !(a == b);
  }

 private:
  void normalize_storage();
  std::vector<Formula> items_;  // sorted by compare(), unique
};

struct Sequent {
  FormulaSet left;
  FormulaSet right;
};

bool operator==(const Sequent& a, const Sequent& b);
inline bool operator!=(const Sequent& a, const Sequent& b) {
  return !(a == b);
}

// ---------------------------------------------------------------------------
// Syntactic operations
// ---------------------------------------------------------------------------

// All names occurring anywhere in a term/formula, in any role (object,
// function, predicate, bound variable). Used for freshness checks.
void collect_all_names(const Term& t, std::set<std::string>& out);
void collect_all_names(const Formula& f, std::set<std::string>& out);
std::set<std::string> all_names(const Formula& f);

// Free object symbols (nullary term occurrences not captured by a
// quantifier or rule binder). Constants count as free object symbols.
std::set<std::string> free_objects(const Formula& f);
std::set<std::string> free_objects(const Term& t);
std::set<std::string> free_objects(const FormulaSet& fs);

// A name not occurring in `used`, derived from `base` by appending primed
// numeric suffixes: base, base'1, base'2, ...
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& used);

// Simultaneous capture-avoiding substitution of terms for object symbols.
// Bound symbols that would capture a substituted term are renamed
// deterministically with fresh_name against the whole enclosing formula and
// all replacement terms.
Term substitute(const Term& t, const std::map<std::string, Term>& sub);
Formula substitute(const Formula& f, const std::map<std::string, Term>& sub);
Formula substitute(const Formula& f, const std::string& x, const Term& t);

// Polarity of predicate occurrences.
enum class Polarity { Positive, Negative, Both };

// Occurrence polarities of predicate `p` in `f` (each occurrence reported).
std::vector<Polarity> occurrences(const Formula& f, const std::string& p);

// An induction hypothesis: predicate, distinct placeholder tuple, and a
// pure first-order formula over those placeholders.
struct Hypothesis {
  std::string pred;
  std::vector<std::string> vars;
  Formula formula;
};

// Replaces positive occurrences P(u) of each hypothesis predicate by
// F_P[u]. Throws FoidError("BothPolarity") when a hypothesis predicate
// occurs under an equivalence (mixed polarity), and
// FoidError("PureFORequired") when f contains a definition.
Formula replace_positive(const Formula& f,
                         const std::vector<Hypothesis>& hyps);

// Does `pred` occur negatively (or with mixed polarity) in f?
bool occurs_negatively(const Formula& f, const std::string& pred);
bool occurs(const Formula& f, const std::string& pred);

// Does f contain a definition subformula?
bool contains_def(const Formula& f);

// Checks the structural invariants of a definition; throws FoidError on
// violation (codes: BoundNotDistinct, BoundFreeElsewhere, NestedDefinition,
// HeadArityMismatch).
void validate_definition(const Definition& d);

// Merged body of predicate p in d, over placeholder tuple ys: the
// disjunction, in rule order, of exists x̄. (y1 = t1 & (... & (yk = tk &
// body))). Preconditions: p defined in d, |ys| = arity, ys distinct and not
// occurring in d.
Formula merged_body(const Definition& d, const std::string& p,
                    const std::vector<std::string>& ys);

// Normal form: one rule per defined predicate, head P(ȳ) with fresh ȳ and
// body merged_body(d, P, ȳ). Defined predicates keep first-appearance
// order.
Definition normalize(const Definition& d);

// Direct dependency closure. depends[P] contains Q iff P = Q or Q occurs in
// a body of a rule with head P, transitively.
std::map<std::string, std::set<std::string>> dependencies(
    const Definition& d);
std::set<std::string> mutual_dependents(const Definition& d,
                                        const std::string& p);

// Stratification witness: level per defined predicate such that body
// occurrences have level <= head level and negative body occurrences have
// strictly smaller level. nullopt when no stratification exists.
std::optional<std::map<std::string, int>> stratify(const Definition& d);

// Splits a stratified definition into subdefinitions grouped by level,
// ordered by level. Throws FoidError("NotStratified") otherwise.
std::vector<Definition> decompose_stratified(const Definition& d);

// Non-logical symbols of a definition other than its defined predicates:
// parameter predicates (name -> arity) and function symbols (name -> arity;
// object symbols have arity 0).
struct Parameters {
  std::map<std::string, int> preds;
  std::map<std::string, int> funcs;
};
Parameters parameters(const Definition& d);

// Predicate and function signature of arbitrary formulas (bound object
// symbols excluded). Throws FoidError("ArityMismatch") when one name is
// used with two arities or as both predicate and function.
struct Vocabulary {
  std::map<std::string, int> preds;
  std::map<std::string, int> funcs;
};
Vocabulary vocabulary(const Formula& f);
Vocabulary vocabulary(const Sequent& s);
void merge_vocabulary(Vocabulary& into, const Vocabulary& other);

// ---------------------------------------------------------------------------
// Canonical sequents and positive rewriting
// ---------------------------------------------------------------------------

struct CanonicalReport {
  bool canonical = false;
  std::vector<std::string> diagnostics;
};

// A sequent is canonical when: the only definitions occur as top-level
// left formulas; every rule body is built from literals with & and |;
// defined sets are pairwise disjoint; and the definitions admit an order
// in which no earlier definition uses a later one's defined predicate as
// parameter. The right side and remaining left formulas must be pure FO.
CanonicalReport is_canonical(const Sequent& s);

// Replaces negated parameter atoms ~Q(s̄) in definition bodies by fresh
// complement predicates Q̄(s̄) and adds the defining equivalences
// forall ȳ. Q̄(ȳ) <=> ~Q(ȳ) to the left side. Precondition: is_canonical.
// Throws FoidError("NegatedDefinedPredicate") when a negated body literal
// uses a defined predicate of the sequent.
Sequent positive_rewriting(const Sequent& s);

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const Sequent& s);

}  // namespace foid

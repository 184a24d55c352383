#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "foid/semantics.hpp"
#include "foid/syntax.hpp"

namespace foid {

enum class SemanticsKind { WellFounded, Stable };

std::string to_string(SemanticsKind k);

struct ValidatorOptions {
  int max_n = 3;           // largest domain size tried
  std::size_t atom_cap = 20;  // max total ground atoms per domain size
  bool allow_wide_functions = false;  // permit function arity >= 2
  SemanticsKind semantics = SemanticsKind::WellFounded;
};

struct Verdict {
  SemanticsKind semantics = SemanticsKind::WellFounded;
  std::optional<Structure> counterexample;
  int counterexample_size = 0;
  unsigned long long structures_tested = 0;
  std::vector<int> sizes_tested;
  std::vector<int> sizes_skipped;  // atom cap exceeded

  bool ok() const { return !counterexample.has_value(); }
};

// Streams every structure over the vocabulary with domain {0..n-1} to the
// visitor, in a fixed deterministic order; the visitor returns false to
// stop. Returns the number of structures visited.
unsigned long long enumerate_structures(
    const Vocabulary& voc, int n,
    const std::function<bool(const Structure&)>& visit);

// The size of that space.
unsigned long long count_structures(const Vocabulary& voc, int n);

// Truth of a sequent in one structure: some left member fails or some right
// member holds. Definition-free left members are decided first so that
// fixpoint computations only run on structures that pass the cheap filters.
bool sequent_holds(const Structure& s, const Sequent& seq, SemanticsKind k);

// Exhaustive refutation search over domain sizes 1..max_n. Sizes whose
// ground-atom count exceeds the cap are recorded as skipped. A found
// counterexample is re-verified before it is reported. Throws
// FoidError("WideFunction") for function arity >= 2 unless overridden.
Verdict validate(const Sequent& seq, const ValidatorOptions& opts = {});

}  // namespace foid

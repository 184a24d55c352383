#pragma once

#include <vector>

#include "foid/semantics.hpp"
#include "foid/syntax.hpp"
#include "foid/wf.hpp"

namespace foid {

// ---------------------------------------------------------------------------
// Stable-model machinery over a fixed parameter context
// ---------------------------------------------------------------------------

// Expansions of the context that interpret exactly the defined predicates on
// top of it, ordered least to greatest on the defined part.
Structure bottom_expansion(const Definition& d, const Structure& context);
Structure top_expansion(const Definition& d, const Structure& context);

// a below b pointwise on the defined predicates.
bool defined_leq(const Definition& d, const Structure& a, const Structure& b);

// One step of the two-structure immediate-consequence operator: recompute
// every defined atom as the value of its merged body with positive defined
// occurrences read from i and negated ones from j.
Structure apply_consequence(const Definition& d, const Structure& i,
                            const Structure& j);

// The stable operator: least fixpoint of apply_consequence(., j) from the
// bottom expansion of j's context part.
Structure stable_op(const Definition& d, const Structure& context,
                    const Structure& j);

// All stable models: fixpoints of the stable operator, enumerated over the
// full expansion space in deterministic order. Throws
// FoidError("SpaceTooLarge") when the defined atom count exceeds atom_cap.
std::vector<Structure> stable_models(const Definition& d,
                                     const Structure& context,
                                     std::size_t atom_cap = 20);

// Truth in the stable sense: Tarskian recursion where a definition formula
// holds iff its defined part is a fixpoint of the stable operator over the
// ambient parameter values.
bool satisfies_st(const Structure& s, const Formula& f, const Env& env = {});

// Well-founded model computed as the oscillation bounds of the squared
// stable operator: least and greatest fixpoints of ST o ST, taken from the
// bottom and top expansions.
ThreeValued wf_via_oscillation(const Definition& d, const Structure& context);

}  // namespace foid

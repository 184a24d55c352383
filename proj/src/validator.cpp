#include "foid/validator.hpp"

#include <limits>

#include "foid/stable.hpp"
#include "foid/wf.hpp"

namespace foid {

std::string to_string(SemanticsKind k) {
  return k == SemanticsKind::WellFounded ? "well-founded" : "stable";
}

namespace {

std::size_t pow_size(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
  if (a != 0 && b > std::numeric_limits<unsigned long long>::max() / a)
    throw FoidError("SpaceTooLarge", "structure space does not fit in 64 bits");
  return a * b;
}

unsigned long long checked_pow(unsigned long long base, std::size_t exp) {
  unsigned long long r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

// One position of the enumeration odometer; the last dial varies fastest.
struct Dial {
  int radix = 2;
  int value = 0;
};

}  // namespace

unsigned long long enumerate_structures(
    const Vocabulary& voc, int n,
    const std::function<bool(const Structure&)>& visit) {
  std::vector<Dial> dials;
  for (const auto& [name, arity] : voc.funcs)
    for (std::size_t i = 0; i < pow_size(n, arity); ++i)
      dials.push_back({n, 0});
  for (const auto& [name, arity] : voc.preds)
    for (std::size_t i = 0; i < pow_size(n, arity); ++i)
      dials.push_back({2, 0});

  unsigned long long visited = 0;
  for (;;) {
    Structure s;
    s.dom = n;
    std::size_t at = 0;
    for (const auto& [name, arity] : voc.funcs) {
      FuncInterp fi;
      fi.arity = arity;
      for (std::size_t i = 0; i < pow_size(n, arity); ++i)
        fi.table.push_back(dials[at++].value);
      s.funcs[name] = std::move(fi);
    }
    for (const auto& [name, arity] : voc.preds) {
      auto& rel = s.rels[name];
      for (const auto& tuple : all_tuples(n, arity)) {
        if (dials[at++].value) rel.insert(tuple);
      }
    }
    ++visited;
    if (!visit(s)) return visited;

    // advance the odometer
    std::size_t i = dials.size();
    while (i > 0) {
      --i;
      if (++dials[i].value < dials[i].radix) break;
      dials[i].value = 0;
      if (i == 0) return visited;
    }
    if (dials.empty()) return visited;
  }
}

unsigned long long count_structures(const Vocabulary& voc, int n) {
  unsigned long long total = 1;
  for (const auto& [name, arity] : voc.funcs)
    total = checked_mul(total, checked_pow(n, pow_size(n, arity)));
  for (const auto& [name, arity] : voc.preds)
    total = checked_mul(total, checked_pow(2, pow_size(n, arity)));
  return total;
}

bool sequent_holds(const Structure& s, const Sequent& seq, SemanticsKind k) {
  auto sat = k == SemanticsKind::WellFounded ? &satisfies_wf : &satisfies_st;
  for (const Formula& f : seq.left)
    if (!contains_def(f) && !sat(s, f, {})) return true;
  for (const Formula& f : seq.left)
    if (contains_def(f) && !sat(s, f, {})) return true;
  for (const Formula& f : seq.right)
    if (!contains_def(f) && sat(s, f, {})) return true;
  for (const Formula& f : seq.right)
    if (contains_def(f) && sat(s, f, {})) return true;
  return false;
}

Verdict validate(const Sequent& seq, const ValidatorOptions& opts) {
  const Vocabulary voc = vocabulary(seq);
  if (!opts.allow_wide_functions)
    for (const auto& [name, arity] : voc.funcs)
      if (arity >= 2)
        throw FoidError("WideFunction",
                        "function '" + name + "/" + std::to_string(arity) +
                            "' makes the space explode; pass the wide-function "
                            "override to search anyway");
  Verdict v;
  v.semantics = opts.semantics;
  for (int n = 1; n <= opts.max_n; ++n) {
    std::size_t atoms = 0;
    for (const auto& [name, arity] : voc.preds) atoms += pow_size(n, arity);
    if (atoms > opts.atom_cap) {
      v.sizes_skipped.push_back(n);
      continue;
    }
    v.sizes_tested.push_back(n);
    v.structures_tested += enumerate_structures(
        voc, n, [&](const Structure& s) {
          if (sequent_holds(s, seq, opts.semantics)) return true;
          // copy out of the enumerator, then re-verify the copy
          Structure witness = s;
          if (sequent_holds(witness, seq, opts.semantics)) return true;
          v.counterexample = std::move(witness);
          v.counterexample_size = n;
          return false;
        });
    if (v.counterexample) break;
  }
  return v;
}

}  // namespace foid

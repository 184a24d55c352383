// Kernel tests: premise computation per rule, side conditions, script
// elaboration with `at` annotations, the structural proof walk, defL2
// expansion, induction artifacts and the advisory lint.

#include <optional>
#include <string>
#include <vector>

#include "foid/kernel.hpp"
#include "foid/parser.hpp"
#include "foid/syntax.hpp"
#include "testutil.hpp"

using namespace foid;

namespace {

// Elaborates proof #i of the named sequent and checks it.
std::optional<CheckError> run_proof(const Document& d, const std::string& name,
                                    std::size_t i = 0) {
  const Sequent& s = *d.find_sequent(name);
  Proof p = elaborate(s, d.proofs_of(name)[i]->root);
  return check(p, s);
}

void expect_ok(const Document& d, const std::string& name,
               std::size_t i = 0) {
  auto err = run_proof(d, name, i);
  REQUIRE_MSG(!err.has_value(),
              name + (err ? ": " + err->reason + " " + err->message : ""));
}

void expect_reason(const Document& d, const std::string& name,
                   const std::string& reason, std::size_t i = 0) {
  auto err = run_proof(d, name, i);
  REQUIRE_MSG(err.has_value(), name + ": expected " + reason);
  REQUIRE_MSG(err->reason == reason,
              name + ": expected " + reason + ", got " + err->reason + " " +
                  err->message);
}

void tags() {
  const RuleTag all[] = {
      RuleTag::Ax,   RuleTag::Wk,   RuleTag::Subst, RuleTag::Cut,
      RuleTag::NotL, RuleTag::NotR, RuleTag::AndL,  RuleTag::AndR,
      RuleTag::OrL,  RuleTag::OrR,  RuleTag::ImpL,  RuleTag::ImpR,
      RuleTag::IffL, RuleTag::IffR, RuleTag::AllL,  RuleTag::AllR,
      RuleTag::ExL,  RuleTag::ExR,  RuleTag::EqL,   RuleTag::EqR,
      RuleTag::DefR, RuleTag::DefL, RuleTag::DefL2};
  for (RuleTag t : all) {
    auto back = rule_tag_from(to_string(t));
    REQUIRE(back.has_value());
    REQUIRE(*back == t);
  }
  REQUIRE(!rule_tag_from("frobnicate").has_value());
}

void propositional() {
  Document d = parse_document(R"(
pred P/0, Q/0.
sequent and_flip: P & Q |- Q & P.
sequent or_flip: P | Q |- Q | P.
sequent imp_k: |- P => Q => P.
sequent iff_use: P <=> Q, P |- Q.
sequent iff_refl: |- P <=> P.
sequent not_both: P, ~P |- .
sequent not_right: |- ~P, P.
sequent cut_seq: P |- P.
sequent falso: false |- Q.
sequent vero: P |- true.
proof of and_flip: andL(P & Q) { andR(Q & P) { ax; ax; } }
proof of or_flip: orL(P | Q) { orR(Q | P) { ax; } orR(Q | P) { ax; } }
proof of imp_k: impR(P => Q => P) { impR(Q => P) { ax; } }
proof of iff_use: iffL(P <=> Q) { ax; ax; }
proof of iff_refl: iffR(P <=> P) { ax; ax; }
proof of not_both: notL(~P) { ax; }
proof of not_right: notR(~P) { ax; }
proof of cut_seq: cut(Q) { ax; ax; }
proof of falso: ax;
proof of vero: ax;
proof of and_flip: andL(P & Q, keep) { andR(Q & P) { ax; ax; } }
)");
  expect_ok(d, "and_flip");
  expect_ok(d, "or_flip");
  expect_ok(d, "imp_k");
  expect_ok(d, "iff_use");
  expect_ok(d, "iff_refl");
  expect_ok(d, "not_both");
  expect_ok(d, "not_right");
  expect_ok(d, "cut_seq");
  expect_ok(d, "falso");
  expect_ok(d, "vero");
  // an explicitly kept principal also checks (keep slack)
  expect_ok(d, "and_flip", 1);

  Document bad = parse_document(R"(
pred P/0, Q/0.
sequent g: P |- Q.
proof of g: ax;
proof of g: impL(P => Q) { ax; ax; }
)");
  expect_reason(bad, "g", "AxNotClosed");
  // the principal must occur in the conclusion
  REQUIRE_ERROR(run_proof(bad, "g", 1), "PrincipalMissing");
  // and must have the right shape
  Document kind = parse_document(R"(
pred P/0, Q/0.
sequent g: P | Q |- P.
proof of g: andL(P | Q) { ax; }
)");
  REQUIRE_ERROR(run_proof(kind, "g"), "PrincipalKindMismatch");
}

void quantifiers() {
  Document d = parse_document(R"(
obj a.
pred A/1.
sequent all_inst: forall x. A(x) |- A(a).
sequent ex_intro: A(a) |- exists x. A(x).
sequent all_r: |- forall x. A(x) => A(x).
sequent ex_l: exists x. A(x) |- exists y. A(y).
proof of all_inst: allL(forall x. A(x), a) { ax; }
proof of ex_intro: exR(exists x. A(x), a) { ax; }
proof of all_r: allR(forall x. A(x) => A(x)) { impR(A(x) => A(x)) { ax; } }
proof of ex_l: exL(exists x. A(x)) { exR(exists y. A(y), x) { ax; } }
proof of all_inst: allL(forall x. A(x), a, drop) { ax; }
)");
  expect_ok(d, "all_inst");
  expect_ok(d, "ex_intro");
  expect_ok(d, "all_r");
  expect_ok(d, "ex_l");
  // allL keeps the principal by default; dropping it still closes here
  expect_ok(d, "all_inst", 1);

  // eigenvariable violations
  Document eig = parse_document(R"(
obj w.
pred A/1.
sequent bad_all: A(w) |- forall w. A(w).
sequent bad_ex: exists w. A(w) |- A(w).
proof of bad_all: allR(forall w. A(w)) { ax; }
proof of bad_ex: exL(exists w. A(w)) { ax; }
)");
  expect_reason(eig, "bad_all", "EigenvariableFree");
  expect_reason(eig, "bad_ex", "EigenvariableFree");
}

void equality() {
  Document d = parse_document(R"(
obj a, b.
pred A/1.
sequent refl: |- a = a.
sequent not_refl: |- a = b.
sequent rewrite: a = b, A(a) |- A(b).
proof of refl: eqR;
proof of not_refl: eqR;
proof of rewrite: eqL(x, y, a, b, [A(a) |- A(y)]) { ax; }
)");
  expect_ok(d, "refl");
  expect_reason(d, "not_refl", "EqRNoReflexive");
  // y marks the b-positions: forward instantiation (y := b) rebuilds the
  // conclusion, the premise replaces them with a, closing by ax
  expect_ok(d, "rewrite");

  // template symbols must be distinct and fresh
  Document bad = parse_document(R"(
obj a, b.
pred A/1.
sequent g: a = b, A(a) |- A(b).
proof of g: eqL(x, x, a, b, [A(a) |- A(x)]) { ax; }
proof of g: eqL(a, y, a, b, [A(a) |- A(a)]) { ax; }
proof of g: eqL(x, y, b, a, [A(a) |- A(x)]) { ax; }
)");
  expect_reason(bad, "g", "EqLTemplateSymbols", 0);
  expect_reason(bad, "g", "EqLTemplateSymbols", 1);
  // swapped terms: the template no longer instantiates to the conclusion
  expect_reason(bad, "g", "EqLConclusionMismatch", 2);
}

void weakening_substitution() {
  Document d = parse_document(R"(
obj a, b.
pred A/1, P/0.
sequent wk_ok: P, A(a) |- P.
sequent subst_ok: A(a) |- A(a).
sequent subst_bad: A(a) |- A(a).
sequent subst_bound: forall n. A(n) |- forall n. A(n).
proof of wk_ok: wk([P |- P]) { ax; }
proof of subst_ok: subst([A(x) |- A(x)], a, x) { ax; }
proof of subst_bad: subst([A(x) |- A(x)], b, x) { ax; }
proof of subst_bound: subst([forall n. A(n) |- forall n. A(n)], n, x) { ax; }
)");
  expect_ok(d, "wk_ok");
  expect_ok(d, "subst_ok");
  expect_reason(d, "subst_bad", "SubstMismatch");
  expect_reason(d, "subst_bound", "SubstBoundSymbol");

  Document wkbad = parse_document(R"(
pred P/0, Q/0.
sequent g: P |- P.
proof of g: wk([P, Q |- P]) { ax; }
)");
  expect_reason(wkbad, "g", "WkNotSubset");
}

void definitions_right() {
  Document d = parse_document(R"(
obj zero, m.
fn succ/1.
pred Even/1.
def EvenDef {
  Even(zero) <- true.
  forall n. Even(succ(n)) <- ~Even(n).
}
sequent base: EvenDef |- Even(zero).
sequent step: EvenDef, ~Even(m) |- Even(succ(m)).
proof of base: defR(EvenDef, 0, []) { ax; }
proof of step: defR(EvenDef, 1, [m]) { ax; }
)");
  expect_ok(d, "base");
  expect_ok(d, "step");

  const Sequent& base = *d.find_sequent("base");
  const Definition& def = *d.find_def("EvenDef");
  Formula def_f = Formula::def(def);

  RuleApp app;
  app.tag = RuleTag::DefR;
  app.formulas = {def_f};
  app.rule_index = 5;
  REQUIRE_ERROR(premises(base, app), "RuleIndexOutOfRange");
  app.rule_index = 1;
  REQUIRE_ERROR(premises(base, app), "WitnessArity");
  app.terms = {Term("succ", {Term("zero")})};
  REQUIRE_ERROR(premises(base, app), "WitnessNotSymbol");
  app.terms = {Term("m")};
  // head instance Even(succ(m)) is not on the right of `base`
  REQUIRE_ERROR(premises(base, app), "HeadInstanceMissing");
  app.formulas = {Formula::atom("Even", {Term("zero")})};
  REQUIRE_ERROR(premises(base, app), "DefExpected");
  app.formulas = {def_f};
  app.rule_index = 0;
  app.terms = {};
  Sequent no_def;
  no_def.right = base.right;
  REQUIRE_ERROR(premises(no_def, app), "DefNotPresent");

  // the computed premise unfolds the instantiated body on the right
  auto prem = premises(base, app);
  REQUIRE(prem.size() == 1);
  REQUIRE(prem[0].left == base.left);
  REQUIRE(prem[0].right.contains(Formula::verum()));
}

void definitions_left() {
  Document d = parse_document(R"(
obj a, b.
pred T/1.
def TDef { T(a) <- true. }
sequent g: TDef, T(b) |- b = a.
proof of g:
  defL(TDef, T(b), [T], T(z) := z = a) {
    eqR;
    ax;
  }
proof of g:
  defL2(TDef, T(b), [T], T(z) := z = a) { eqR; }
)");
  expect_ok(d, "g", 0);
  expect_ok(d, "g", 1);

  // the defL2 expansion is a primitive defL proof that still checks
  const Sequent& g = *d.find_sequent("g");
  Proof p2 = elaborate(g, d.proofs_of("g")[1]->root);
  Proof expanded = expand_def_l2(p2);
  bool has_defl = false;
  for (const ProofNode& n : expanded.nodes) {
    REQUIRE(n.app.tag != RuleTag::DefL2);
    if (n.app.tag == RuleTag::DefL) has_defl = true;
  }
  REQUIRE(has_defl);
  REQUIRE(!check(expanded, g).has_value());
  REQUIRE(expanded.nodes.size() > p2.nodes.size());

  // hypothesis bookkeeping
  const Definition& def = *d.find_def("TDef");
  const Formula def_f = Formula::def(def);
  const Formula principal = Formula::atom("T", {Term("b")});
  Hypothesis h{"T", {"z"}, Formula::eq(Term("z"), Term("a"))};
  auto mk = [&](std::vector<std::string> pi, std::vector<Hypothesis> hyps) {
    RuleApp app;
    app.tag = RuleTag::DefL;
    app.formulas = {def_f, principal};
    app.symbols = std::move(pi);
    app.hyps = std::move(hyps);
    return app;
  };
  REQUIRE_ERROR(premises(g, mk({"X"}, {h})), "InductionSetInvalid");
  REQUIRE_ERROR(premises(g, mk({}, {})), "InductionSetInvalid");
  REQUIRE_ERROR(premises(g, mk({"T"}, {h, h})), "HypothesisExtra");
  REQUIRE_ERROR(premises(g, mk({"T"}, {})), "HypothesisMissing");
  REQUIRE_ERROR(
      premises(g, mk({"T"}, {Hypothesis{"T", {"z", "z"}, h.formula}})),
      "HypothesisVarsDuplicate");
  REQUIRE_ERROR(
      premises(g, mk({"T"}, {Hypothesis{"T", {"z", "w"}, h.formula}})),
      "HypothesisArity");
  REQUIRE_ERROR(premises(g, mk({"T"}, {Hypothesis{"T", {"z"}, def_f}})),
                "HypothesisNotPureFO");

  RuleApp kindless = mk({"T"}, {h});
  kindless.formulas[1] = Formula::eq(Term("b"), Term("a"));
  REQUIRE_ERROR(premises(g, kindless), "PrincipalKindMismatch");
  RuleApp missing = mk({"T"}, {h});
  missing.formulas[1] = Formula::atom("T", {Term("a")});
  REQUIRE_ERROR(premises(g, missing), "PrincipalMissing");

  Document undef = parse_document(R"(
obj a, b.
pred T/1, U/1.
def TDef { T(a) <- true. }
sequent g: TDef, U(b) |- b = a.
proof of g: defL(TDef, U(b), [T], T(z) := z = a) { eqR; ax; }
)");
  REQUIRE_ERROR(run_proof(undef, "g"), "PredicateNotDefined");

  // duplicate placeholders with matching arity
  Document dup = parse_document(R"(
obj a.
pred G/2.
def GDef { forall x, y. G(x, y) <- true. }
sequent g: GDef, G(a, a) |- a = a.
proof of g: defL(GDef, G(a, a), [G], G(z, z) := true) { ax; ax; }
)");
  REQUIRE_ERROR(run_proof(dup, "g"), "HypothesisVarsDuplicate");

  // rule variables may not occur free in the conclusion
  Document side = parse_document(R"(
obj n.
pred T/1.
def ND { forall n. T(n) <- true. }
sequent g: ND, T(n) |- n = n.
proof of g: defL(ND, T(n), [T], T(z) := z = z) { eqR; eqR; }
)");
  expect_reason(side, "g", "DefLSideCondition");

  // a tampered major premise is pinpointed
  Document tampered = parse_document(R"(
obj a, b.
pred T/1.
def TDef { T(a) <- true. }
sequent g: TDef, T(b) |- b = a.
proof of g:
  defL(TDef, T(b), [T], T(z) := z = a) {
    eqR;
    ax at [TDef, a = a |- b = a];
  }
)");
  expect_reason(tampered, "g", "MajorPremiseMismatch");

  // defL2 requires the target instance on the right
  Document l2bad = parse_document(R"(
obj a, b.
pred T/1.
def TDef { T(a) <- true. }
sequent g: TDef, T(b) |- b = b.
proof of g: defL2(TDef, T(b), [T], T(z) := z = a) { eqR; }
)");
  REQUIRE_ERROR(run_proof(l2bad, "g"), "DefL2TargetMissing");
}

void structural() {
  Document d = parse_document(R"(
pred P/0.
sequent g: P |- P.
proof of g: ax;
)");
  const Sequent& g = *d.find_sequent("g");
  Proof p = elaborate(g, d.proofs()[0]->root);
  REQUIRE(!check(p, g).has_value());

  Proof empty;
  empty.nodes.clear();
  auto e0 = check(empty, g);
  REQUIRE(e0 && e0->reason == "EmptyProof");

  Sequent other;
  other.left = g.left;
  auto e1 = check(p, other);
  REQUIRE(e1 && e1->reason == "BadRoot");

  Proof cyc = p;
  cyc.nodes[0].app.tag = RuleTag::Wk;
  cyc.nodes[0].app.template_seq = g;
  cyc.nodes[0].children = {0};
  auto e2 = check(cyc, g);
  REQUIRE(e2 && e2->reason == "CyclicProof");

  Proof orphan = p;
  orphan.nodes.push_back(p.nodes[0]);
  auto e3 = check(orphan, g);
  REQUIRE(e3 && e3->reason == "UnreachableNode");
  REQUIRE(e3->node == 1);

  Proof stray = p;
  stray.nodes[0].children = {42};
  auto e4 = check(stray, g);
  REQUIRE(e4 && e4->reason == "BadChildIndex");

  Proof extra = p;
  extra.nodes.push_back(p.nodes[0]);
  extra.nodes[0].children = {1};
  auto e5 = check(extra, g);
  REQUIRE(e5 && e5->reason == "ChildCount");

  // elaboration rejects scripts with the wrong number of children
  Document wrong = parse_document(R"(
pred P/0.
sequent g: P |- P.
proof of g: ax { ax; }
)");
  REQUIRE_ERROR(elaborate(g, wrong.proofs()[0]->root), "ChildCount");
}

void at_annotations() {
  // an `at` annotation overrides the computed conclusion of the child; the
  // parent then fails premise matching
  Document d = parse_document(R"(
pred P/0, Q/0.
sequent g: P, Q |- P.
proof of g: wk([P |- P]) { ax at [Q |- Q]; }
)");
  auto err = run_proof(d, "g");
  REQUIRE(err.has_value());
  REQUIRE(err->reason == "WkNotSubset");

  // `at` matching the computed premise is redundant but harmless
  Document ok = parse_document(R"(
pred P/0, Q/0.
sequent g: P, Q |- P.
proof of g: wk([P |- P]) { ax at [P |- P]; }
)");
  expect_ok(ok, "g");
}

void induction_artifacts() {
  Document d = parse_document(R"(
obj zero.
fn succ/1.
pred Even/1, F/1.
def EvenDef {
  Even(zero) <- true.
  forall n. Even(succ(n)) <- ~Even(n).
}
)");
  const Definition& def = *d.find_def("EvenDef");
  std::map<std::string, int> preds{{"Even", 1}, {"F", 1}};
  std::map<std::string, int> funcs{{"zero", 0}, {"succ", 1}};
  auto pf = [&](const std::string& text) {
    return parse_formula(text, preds, funcs, true);
  };

  auto imps = material_implications(def);
  REQUIRE(imps.size() == 2);
  REQUIRE(imps[0] == pf("true => Even(zero)"));
  REQUIRE(imps[1] == pf("forall n. ~Even(n) => Even(succ(n))"));

  Hypothesis h{"Even", {"z"},
               Formula::lnot(Formula::atom("F", {Term("z")}))};
  Formula inst = induction_instance(def, "Even", {"Even"}, {h});
  Formula want = pf(
      "(true => ~F(zero)) & (forall n. ~Even(n) => ~F(succ(n))) => "
      "(forall x1. Even(x1) => ~F(x1))");
  REQUIRE(inst == want);

  REQUIRE_ERROR(induction_instance(def, "F", {"Even"}, {h}),
                "InductionSetInvalid");
  REQUIRE_ERROR(induction_instance(def, "Even", {"Even"}, {}),
                "HypothesisMissing");
}

void lints() {
  Document d = parse_document(R"(
pred O/0, N/0.
def ND { N <- ~O. }
sequent g: ND, O |- O.
proof of g: cut(O | ~O) { orR(O | ~O) { notR(~O) { ax; } } orL(O | ~O) { ax; notL(~O) { ax; } } }
proof of g: cut(O) { ax; ax; }
proof of g: cut(O | ~N) { orR(O | ~N) { ax; } orL(O | ~N) { ax; notL(~N) { wk([ND, O |- O]) { ax; } } } }
)");
  const Sequent& g = *d.find_sequent("g");
  // elementary cut: excluded middle over O, which occurs negatively in the
  // root-left definition
  Proof p0 = elaborate(g, d.proofs_of("g")[0]->root);
  REQUIRE(!check(p0, g).has_value());
  REQUIRE(lint(p0).empty());
  // a bare cut formula is flagged
  Proof p1 = elaborate(g, d.proofs_of("g")[1]->root);
  REQUIRE(!check(p1, g).has_value());
  auto w1 = lint(p1);
  REQUIRE(w1.size() == 1);
  REQUIRE(w1[0].code == "NonElementaryCut");
  // excluded middle over the wrong predicate (N is defined, not negated)
  Proof p2 = elaborate(g, d.proofs_of("g")[2]->root);
  REQUIRE(!check(p2, g).has_value());
  auto w2 = lint(p2);
  REQUIRE(w2.size() == 1);
  REQUIRE(w2[0].code == "NonElementaryCut");

  // induction sets beyond the principal's mutual dependents are advisory
  Document wide = parse_document(R"(
pred O/0, A/0, B/0.
def DD {
  A <- true.
  B <- ~O.
}
sequent g: DD, A |- true.
proof of g: defL(DD, A, [A, B], A := true, B := true) { ax; ax; ax; }
proof of g: defL(DD, A, [A], A := true) { ax; ax; }
)");
  const Sequent& wg = *wide.find_sequent("g");
  Proof wp = elaborate(wg, wide.proofs_of("g")[0]->root);
  REQUIRE(!check(wp, wg).has_value());
  auto ww = lint(wp);
  REQUIRE(ww.size() == 1);
  REQUIRE(ww[0].code == "BroadInductionSet");
  // the tight induction set is clean
  Proof tp = elaborate(wg, wide.proofs_of("g")[1]->root);
  REQUIRE(!check(tp, wg).has_value());
  REQUIRE(lint(tp).empty());
}

void keep_drop_defaults() {
  // allL and exR retain their principal by default, the rest drop it
  Sequent c;
  c.left = FormulaSet{Formula::forall("x", Formula::atom("A", {Term("x")}))};
  RuleApp app;
  app.tag = RuleTag::AllL;
  app.formulas = {Formula::forall("x", Formula::atom("A", {Term("x")}))};
  app.terms = {Term("a")};
  auto prem = premises(c, app);
  REQUIRE(prem[0].left.contains(app.formulas[0]));
  app.drop = true;
  prem = premises(c, app);
  REQUIRE(!prem[0].left.contains(app.formulas[0]));

  Sequent c2;
  c2.left = FormulaSet{Formula::land(Formula::atom("P"), Formula::atom("Q"))};
  RuleApp app2;
  app2.tag = RuleTag::AndL;
  app2.formulas = {c2.left.items()[0]};
  prem = premises(c2, app2);
  REQUIRE(!prem[0].left.contains(app2.formulas[0]));
  app2.keep = true;
  prem = premises(c2, app2);
  REQUIRE(prem[0].left.contains(app2.formulas[0]));
}

}  // namespace

int main() {
  tags();
  propositional();
  quantifiers();
  equality();
  weakening_substitution();
  definitions_right();
  definitions_left();
  structural();
  at_annotations();
  induction_artifacts();
  lints();
  keep_drop_defaults();
  std::cout << "test_kernel: all sections passed\n";
  return 0;
}

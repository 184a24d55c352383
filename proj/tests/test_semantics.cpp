// Semantics tests: Kleene truth tables, two-valued and three-valued
// evaluation, the pair evaluation used for reducts, and structure helpers.

#include <map>
#include <set>
#include <vector>

#include "foid/semantics.hpp"
#include "foid/syntax.hpp"
#include "testutil.hpp"

using namespace foid;

namespace {

constexpr TruthValue F = TruthValue::False;
constexpr TruthValue U = TruthValue::Unknown;
constexpr TruthValue T = TruthValue::True;

Term t(const std::string& s) { return Term(s); }

void truth_tables() {
  REQUIRE(tv_not(T) == F);
  REQUIRE(tv_not(F) == T);
  REQUIRE(tv_not(U) == U);
  // conjunction is min, disjunction max in the truth order
  const TruthValue vals[] = {F, U, T};
  auto rank = [](TruthValue v) { return v == F ? 0 : v == U ? 1 : 2; };
  for (TruthValue a : vals)
    for (TruthValue b : vals) {
      REQUIRE(rank(tv_and(a, b)) == std::min(rank(a), rank(b)));
      REQUIRE(rank(tv_or(a, b)) == std::max(rank(a), rank(b)));
    }
  REQUIRE(tv_of(true) == T);
  REQUIRE(tv_of(false) == F);

  // truth order is total, precision order flat with bottom Unknown
  for (TruthValue a : vals)
    for (TruthValue b : vals) {
      REQUIRE(leq_t(a, b) == (rank(a) <= rank(b)));
      REQUIRE(leq_p(a, b) == (a == U || a == b));
    }
  REQUIRE(to_string(U) == "u");
  REQUIRE(to_string(T) == "t");
  REQUIRE(to_string(F) == "f");
}

Structure two_chain() {
  // domain {0,1}; zero = 0, succ 0 -> 1 -> 1; E = {0}; Edge = {(0,1)}
  Structure s;
  s.dom = 2;
  s.funcs["zero"] = FuncInterp{0, {0}};
  s.funcs["succ"] = FuncInterp{1, {1, 1}};
  s.rels["E"] = {{0}};
  s.rels["Edge"] = {{0, 1}};
  return s;
}

void structures() {
  Structure s = two_chain();
  REQUIRE(s.apply("zero", {}) == 0);
  REQUIRE(s.apply("succ", {0}) == 1);
  REQUIRE(s.apply("succ", {1}) == 1);
  REQUIRE(s.holds("E", {0}));
  REQUIRE(!s.holds("E", {1}));
  // loose object symbols resolve through eval_term, after funcs
  s.assign["x"] = 1;
  REQUIRE(eval_term(s, {}, t("x")) == 1);
  REQUIRE(eval_term(s, Env{{"x", 0}}, t("x")) == 0);  // env wins
  REQUIRE_ERROR(eval_term(s, {}, t("loose")), "Uninterpreted");
  REQUIRE_ERROR(s.apply("nofn", {0}), "Uninterpreted");
  REQUIRE_ERROR(s.holds("norel", {0}), "Uninterpreted");

  REQUIRE(all_tuples(2, 0) == (std::vector<std::vector<int>>{{}}));
  REQUIRE(all_tuples(2, 2) ==
          (std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  REQUIRE(all_tuples(3, 1).size() == 3);

  Structure r = restrict_structure(s, {"E"}, {"zero"});
  REQUIRE(r.rels.count("E") == 1);
  REQUIRE(r.rels.count("Edge") == 0);
  REQUIRE(r.funcs.count("succ") == 0);
  REQUIRE(r.funcs.count("zero") == 1);
  REQUIRE(r.assign.count("x") == 0);
  Structure r2 = restrict_structure(s, {}, {"x"});
  REQUIRE(r2.assign.at("x") == 1);
}

void two_valued_eval() {
  Structure s = two_chain();
  Formula e0 = Formula::atom("E", {t("zero")});
  Formula e1 = Formula::atom("E", {Term("succ", {t("zero")})});
  REQUIRE(eval_two(s, e0));
  REQUIRE(!eval_two(s, e1));
  REQUIRE(eval_two(s, Formula::lnot(e1)));
  REQUIRE(eval_two(s, Formula::imp(e1, Formula::falsum())));
  REQUIRE(eval_two(s, Formula::iff(e1, Formula::falsum())));
  REQUIRE(eval_two(s, Formula::eq(Term("succ", {t("zero")}),
                                  Term("succ", {Term("succ", {t("zero")})}))));
  // quantifiers range over the whole domain
  REQUIRE(eval_two(s, Formula::exists("x", Formula::atom("E", {t("x")}))));
  REQUIRE(!eval_two(s, Formula::forall("x", Formula::atom("E", {t("x")}))));
  REQUIRE(eval_two(
      s, Formula::forall(
             "x", Formula::exists(
                      "y", Formula::lor(
                               Formula::atom("Edge", {t("x"), t("y")}),
                               Formula::eq(t("x"), t("y")))))));
  // the environment is consulted before the structure
  REQUIRE(eval_two(s, Formula::atom("E", {t("x")}), Env{{"x", 0}}));
  REQUIRE(!eval_two(s, Formula::atom("E", {t("x")}), Env{{"x", 1}}));

  REQUIRE_ERROR(eval_two(s, Formula::atom("Nope", {t("zero")})),
                "Uninterpreted");
  REQUIRE_ERROR(eval_two(s, Formula::atom("E", {t("loose")})),
                "Uninterpreted");
  Definition d;
  Rule r;
  r.head_pred = "P";
  r.body_ptr = std::make_shared<const Formula>(Formula::verum());
  d.rules.push_back(r);
  REQUIRE_ERROR(eval_two(s, Formula::def(d)), "PureFORequired");
}

ThreeValued half_known() {
  // P truth value u, Q(0) = t, Q(1) = f
  Structure lo, hi;
  lo.dom = hi.dom = 2;
  lo.rels["P"] = {};
  hi.rels["P"] = {{}};
  lo.rels["Q"] = {{0}};
  hi.rels["Q"] = {{0}};
  return ThreeValued{lo, hi};
}

void three_valued_eval() {
  ThreeValued a = half_known();
  REQUIRE(a.consistent());
  REQUIRE(a.atom("P", {}) == U);
  REQUIRE(a.atom("Q", {0}) == T);
  REQUIRE(a.atom("Q", {1}) == F);

  Formula p = Formula::atom("P");
  // excluded middle is unknown under Kleene when P is unknown
  REQUIRE(eval_kleene(a, Formula::lor(p, Formula::lnot(p))) == U);
  REQUIRE(eval_kleene(a, Formula::land(p, Formula::falsum())) == F);
  REQUIRE(eval_kleene(a, Formula::lor(p, Formula::verum())) == T);
  REQUIRE(eval_kleene(a, Formula::imp(p, p)) == U);
  REQUIRE(eval_kleene(a, Formula::iff(p, p)) == U);
  REQUIRE(eval_kleene(a, Formula::imp(Formula::falsum(), p)) == T);
  // quantifiers: exists x. Q(x) is true, forall x. Q(x) false,
  // forall x. Q(x) | P unknown
  REQUIRE(eval_kleene(a, Formula::exists("x", Formula::atom("Q", {t("x")}))) ==
          T);
  REQUIRE(eval_kleene(a, Formula::forall("x", Formula::atom("Q", {t("x")}))) ==
          F);
  REQUIRE(eval_kleene(a, Formula::forall(
                             "x", Formula::lor(Formula::atom("Q", {t("x")}),
                                               p))) == U);
  REQUIRE(eval_kleene(a, Formula::eq(t("x"), t("x")), Env{{"x", 1}}) == T);

  // an exact lift never evaluates to unknown
  Structure s = two_chain();
  ThreeValued ex = exact(s);
  REQUIRE(ex.consistent());
  Formula e0 = Formula::atom("E", {t("zero")});
  REQUIRE(eval_kleene(ex, Formula::lor(e0, Formula::lnot(e0))) == T);
  REQUIRE(eval_kleene(ex, e0) == tv_of(eval_two(s, e0)));

  // inconsistency detection: lower not included in upper
  ThreeValued bad = half_known();
  bad.lower.rels["Q"] = {{0}, {1}};
  bad.upper.rels["Q"] = {{0}};
  REQUIRE(!bad.consistent());

  // precision comparison
  ThreeValued more = half_known();
  more.lower.rels["P"] = {{}};  // P now true
  REQUIRE(leq_p(a, more));
  REQUIRE(!leq_p(more, a));
  REQUIRE(leq_p(a, a));
}

void pair_eval() {
  // positive positions read from i, negated positions from j
  Structure i, j;
  i.dom = j.dom = 1;
  i.rels["P"] = {{}};
  j.rels["P"] = {};
  Formula p = Formula::atom("P");
  REQUIRE(eval_pair(i, j, p));
  // ~P flips to j, where P is false, so ~P holds in the pair sense
  REQUIRE(eval_pair(i, j, Formula::lnot(p)));
  // under double negation we are back at i
  REQUIRE(eval_pair(i, j, Formula::lnot(Formula::lnot(p))));
  REQUIRE(!eval_pair(j, i, p));
  REQUIRE(!eval_pair(j, i, Formula::lnot(p)));
  // implication: the antecedent is a negated position, read from the
  // swapped pair
  REQUIRE(eval_pair(i, j, Formula::imp(p, p)));   // ~P@j true, P@i true
  REQUIRE(!eval_pair(j, i, Formula::imp(p, p)));  // ~P@i false, P@j false
  // agreement with eval_two on the diagonal
  Structure s = two_chain();
  Formula mixed = Formula::imp(
      Formula::atom("E", {t("zero")}),
      Formula::exists("x", Formula::atom("Edge", {t("zero"), t("x")})));
  REQUIRE(eval_pair(s, s, mixed) == eval_two(s, mixed));
}

}  // namespace

int main() {
  truth_tables();
  structures();
  two_valued_eval();
  three_valued_eval();
  pair_eval();
  std::cout << "test_semantics: all sections passed\n";
  return 0;
}

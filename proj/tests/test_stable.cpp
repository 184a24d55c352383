// Stable-model engine tests: expansions, the two-structure consequence
// operator, the stable operator and its fixpoints, stable satisfaction,
// and the oscillation view of the well-founded model.

#include <vector>

#include "foid/semantics.hpp"
#include "foid/stable.hpp"
#include "foid/syntax.hpp"
#include "foid/wf.hpp"
#include "testutil.hpp"

using namespace foid;

namespace {

constexpr TruthValue U = TruthValue::Unknown;
constexpr TruthValue T = TruthValue::True;

Term t(const std::string& s) { return Term(s); }

Rule mk_rule(std::vector<std::string> bound, std::string head,
             std::vector<Term> args, Formula body) {
  Rule r;
  r.bound = std::move(bound);
  r.head_pred = std::move(head);
  r.head_args = std::move(args);
  r.body_ptr = std::make_shared<const Formula>(std::move(body));
  return r;
}

Structure trivial() {
  Structure s;
  s.dom = 1;
  return s;
}

Definition choice_def() {
  // P <- ~Q; Q <- ~P
  Definition d;
  d.rules.push_back(mk_rule({}, "P", {}, Formula::lnot(Formula::atom("Q"))));
  d.rules.push_back(mk_rule({}, "Q", {}, Formula::lnot(Formula::atom("P"))));
  return d;
}

Definition liar_def() {
  Definition d;
  d.rules.push_back(mk_rule({}, "P", {}, Formula::lnot(Formula::atom("P"))));
  return d;
}

Definition reach_def() {
  Definition d;
  d.rules.push_back(mk_rule({}, "R", {t("a")}, Formula::verum()));
  d.rules.push_back(mk_rule(
      {"x", "y"}, "R", {t("y")},
      Formula::land(Formula::atom("R", {t("x")}),
                    Formula::atom("Edge", {t("x"), t("y")}))));
  return d;
}

void expansions() {
  Definition d = choice_def();
  Structure bot = bottom_expansion(d, trivial());
  Structure top = top_expansion(d, trivial());
  REQUIRE(bot.rels.at("P").empty());
  REQUIRE(bot.rels.at("Q").empty());
  REQUIRE(top.rels.at("P") == (std::set<std::vector<int>>{{}}));
  REQUIRE(top.rels.at("Q") == (std::set<std::vector<int>>{{}}));
  REQUIRE(defined_leq(d, bot, top));
  REQUIRE(!defined_leq(d, top, bot));
  REQUIRE(defined_leq(d, bot, bot));

  // context relations survive into the expansions
  Definition r = reach_def();
  Structure ctx;
  ctx.dom = 2;
  ctx.assign["a"] = 0;
  ctx.rels["Edge"] = {{0, 1}};
  Structure rb = bottom_expansion(r, ctx);
  REQUIRE(rb.rels.at("Edge") == (std::set<std::vector<int>>{{0, 1}}));
  REQUIRE(rb.rels.at("R").empty());
  Structure rt = top_expansion(r, ctx);
  REQUIRE(rt.rels.at("R").size() == 2);
}

void consequence_and_stable_op() {
  Definition d = choice_def();
  Structure bot = bottom_expansion(d, trivial());
  Structure top = top_expansion(d, trivial());

  // negatives read from j: with j = bot both bodies fire, with j = top none
  Structure step_up = apply_consequence(d, bot, bot);
  REQUIRE(step_up.rels.at("P") == (std::set<std::vector<int>>{{}}));
  REQUIRE(step_up.rels.at("Q") == (std::set<std::vector<int>>{{}}));
  Structure step_down = apply_consequence(d, bot, top);
  REQUIRE(step_down.rels.at("P").empty());
  REQUIRE(step_down.rels.at("Q").empty());

  // the stable operator against j = {P} rederives exactly {P}
  Structure p_only = bot;
  p_only.rels["P"] = {{}};
  Structure st = stable_op(d, trivial(), p_only);
  REQUIRE(st.rels.at("P") == (std::set<std::vector<int>>{{}}));
  REQUIRE(st.rels.at("Q").empty());

  // against j = top nothing is derivable; against j = bot everything
  REQUIRE(stable_op(d, trivial(), top).rels.at("P").empty());
  REQUIRE(stable_op(d, trivial(), bot).rels.at("P") ==
          (std::set<std::vector<int>>{{}}));

  // positive recursion needs iteration: reach over a 3-chain
  Definition r = reach_def();
  Structure ctx;
  ctx.dom = 3;
  ctx.assign["a"] = 0;
  ctx.rels["Edge"] = {{0, 1}, {1, 2}};
  Structure fix = stable_op(r, ctx, bottom_expansion(r, ctx));
  REQUIRE(fix.rels.at("R") == (std::set<std::vector<int>>{{0}, {1}, {2}}));
}

void models() {
  // choice: exactly the two alternatives
  auto ms = stable_models(choice_def(), trivial());
  REQUIRE(ms.size() == 2);
  std::set<std::vector<int>> empty_rel, unit_rel{{}};
  bool p_model = false, q_model = false;
  for (const Structure& m : ms) {
    if (m.rels.at("P") == unit_rel && m.rels.at("Q") == empty_rel)
      p_model = true;
    if (m.rels.at("P") == empty_rel && m.rels.at("Q") == unit_rel)
      q_model = true;
  }
  REQUIRE(p_model);
  REQUIRE(q_model);

  // liar: none
  REQUIRE(stable_models(liar_def(), trivial()).empty());

  // a monotone definition has its least fixpoint as only stable model
  Definition r = reach_def();
  Structure ctx;
  ctx.dom = 3;
  ctx.assign["a"] = 0;
  ctx.rels["Edge"] = {{0, 1}, {2, 2}};
  auto rms = stable_models(r, ctx);
  REQUIRE(rms.size() == 1);
  REQUIRE(rms[0].rels.at("R") == (std::set<std::vector<int>>{{0}, {1}}));
  // and it coincides with the (total) well-founded model
  WfResult wf = well_founded_model(r, ctx);
  REQUIRE(is_total(wf.model));
  REQUIRE(wf.model.lower.rels.at("R") == rms[0].rels.at("R"));

  // the atom cap guards the enumeration space
  Definition wide;
  wide.rules.push_back(mk_rule({"x", "y", "z"}, "W", {t("x"), t("y"), t("z")},
                               Formula::verum()));
  Structure big;
  big.dom = 3;
  REQUIRE_ERROR(stable_models(wide, big), "SpaceTooLarge");
  Structure small;
  small.dom = 2;
  REQUIRE_ERROR(stable_models(wide, small, 7), "SpaceTooLarge");
  REQUIRE(stable_models(wide, small, 8).size() == 1);
}

void satisfaction() {
  Definition d = choice_def();
  Formula def_f = Formula::def(d);
  Structure s = trivial();
  s.rels["P"] = {{}};
  s.rels["Q"] = {};
  REQUIRE(satisfies_st(s, def_f));
  s.rels["P"] = {};
  s.rels["Q"] = {{}};
  REQUIRE(satisfies_st(s, def_f));
  s.rels["P"] = {{}};
  s.rels["Q"] = {{}};
  REQUIRE(!satisfies_st(s, def_f));
  s.rels["P"] = {};
  s.rels["Q"] = {};
  REQUIRE(!satisfies_st(s, def_f));

  // stable truth differs from well-founded truth on the liar
  Formula liar_f = Formula::def(liar_def());
  Structure l = trivial();
  l.rels["P"] = {};
  REQUIRE(!satisfies_st(l, liar_f));   // no stable model at all
  REQUIRE(!satisfies_wf(l, liar_f));   // wf model is not two-valued
  l.rels["P"] = {{}};
  REQUIRE(!satisfies_st(l, liar_f));

  // composition under connectives
  Structure c = trivial();
  c.rels["P"] = {{}};
  c.rels["Q"] = {};
  REQUIRE(satisfies_st(c, Formula::land(def_f, Formula::atom("P"))));
  REQUIRE(!satisfies_st(c, Formula::land(def_f, Formula::atom("Q"))));
}

void oscillation() {
  // on the liar the squared operator oscillates between bot and top
  ThreeValued osc = wf_via_oscillation(liar_def(), trivial());
  REQUIRE(osc.atom("P", {}) == U);

  // choice: both atoms unknown
  ThreeValued ch = wf_via_oscillation(choice_def(), trivial());
  REQUIRE(ch.atom("P", {}) == U);
  REQUIRE(ch.atom("Q", {}) == U);

  // total case agrees with the refinement engine
  Definition r = reach_def();
  Structure ctx;
  ctx.dom = 3;
  ctx.assign["a"] = 0;
  ctx.rels["Edge"] = {{0, 1}, {2, 2}};
  ThreeValued o = wf_via_oscillation(r, ctx);
  REQUIRE(o == well_founded_model(r, ctx).model);
  REQUIRE(o.atom("R", {0}) == T);
  REQUIRE(o.atom("R", {2}) == TruthValue::False);

  // stratified negation: also agreement, with a total model
  Definition strat;
  strat.rules.push_back(mk_rule({}, "Q", {}, Formula::atom("O")));
  strat.rules.push_back(
      mk_rule({}, "P", {}, Formula::lnot(Formula::atom("Q"))));
  Structure octx = trivial();
  octx.rels["O"] = {{}};
  ThreeValued so = wf_via_oscillation(strat, octx);
  REQUIRE(so == well_founded_model(strat, octx).model);
  REQUIRE(is_total(so));
}

}  // namespace

int main() {
  expansions();
  consequence_and_stable_op();
  models();
  satisfaction();
  oscillation();
  std::cout << "test_stable: all sections passed\n";
  return 0;
}

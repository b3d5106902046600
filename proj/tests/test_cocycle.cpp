#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hgt/cocycle_examples.hpp"

using namespace hgt;

static void check_all(const Report& rep, const char* ctx) {
  for (auto& c : rep.conditions) {
    INFO(ctx, " ", c.label, " r=", c.max_residual, " thr=", c.threshold);
    CHECK(c.pass);
  }
}

static double worst(const Report& rep, const std::string& label) {
  for (auto& c : rep.conditions)
    if (c.label == label) return c.max_residual;
  return -1;
}

TEST_CASE("trivial cocycle validates exactly") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  DifferentialCocycle c = make_trivial_cocycle(cm, circle_cover_triple());
  Report rep = cc_validate(c, h, 3, 5);
  check_all(rep, "trivial");
  for (auto& cond : rep.conditions) CHECK(cond.max_residual < 1e-11);
  CocycleClass cls = cc_curvatures_and_classify(c, h);
  CHECK(cls.flat);
  CHECK(cls.fake_flat);
}

TEST_CASE("random cocycle from an equivalence validates; eq_validate agrees") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_triple();
  DifferentialCocycle c0 = make_trivial_cocycle(cm, cov);
  EquivalenceData E = random_equivalence(cm, cov, 21, 0.4);
  DifferentialCocycle c1 = eq_apply(c0, E, h);
  check_all(cc_validate(c1, h, 3, 7), "twisted");
  check_all(eq_validate(c0, c1, E, h, 3, 9), "equiv");

  /* negative control: a 1e-3 perturbation of one phi datum must be caught */
  DifferentialCocycle bad = c1;
  FormField ph = bad.phi[{0, 1}];
  AlgEl dE = algebra_from_coords(cm->H, Eigen::Vector3d(1e-3, 0, 0));
  auto pe = ph.eval;
  ph.eval = [pe, dE](const Point& p, const std::vector<Tangent>& vs) -> Mat {
    return pe(p, vs) + dE.m * vs[0].vx(0);
  };
  bad.phi[{0, 1}] = ph;
  /* validate at h = 1e-4 (threshold 1e-5): the perturbation shows up at
     more than 10x threshold */
  Report brep = cc_validate(bad, 1e-4, 3, 7);
  CHECK(!brep.all_pass());
  double r = std::max(worst(brep, "eq:transconnco"),
                      worst(brep, "eq:transconn2co"));
  CHECK(r > 1e-4);
}

TEST_CASE("quadruple overlaps exercise 31c") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_quadruple();
  CHECK(!cover_overlap(cov, {0, 1, 2, 3}).empty);
  DifferentialCocycle c = random_cocycle(cm, cov, 31, h, 0.35);
  Report rep = cc_validate(c, h, 2, 11);
  check_all(rep, "quad");
  CHECK(worst(rep, "31c") >= 0);
  /* the associator data really is nonconstant */
  GroupMapField a = c.a.at({0, 1, 2});
  Point p1{Vec::Constant(1, 0.365), {}}, p2{Vec::Constant(1, 0.44), {}};
  CHECK(group_dist(a(p1), a(p2)) > 1e-3);
}

TEST_CASE("normalization kills diagonal data and is idempotent") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_triple();
  DifferentialCocycle c = random_cocycle(cm, cov, 41, h, 0.35);
  CHECK(cc_normalized_residual(c, 3, 3) > 1e-3);
  auto [cn, Es] = cc_normalize(c, h);
  CHECK(Es.size() == 2);
  CHECK(cc_normalized_residual(cn, 3, 3) < 1e-12);
  check_all(cc_validate(cn, h, 2, 13), "normalized");

  /* idempotence: renormalizing changes nothing (same sampled values) */
  auto [cn2, Es2] = cc_normalize(cn, h);
  (void)Es2;
  for (auto& t : ordered_tuples(cov, 2)) {
    ChartPiece pc = overlap_piece(cov, tuple_support(t));
    Rng rng(77);
    for (int s = 0; s < 2; ++s) {
      Point p = random_point(pc, rng, 0.12);
      CHECK(group_dist(cn.g.at(t)(p), cn2.g.at(t)(p)) < 1e-12);
    }
  }
  for (auto& t : ordered_tuples(cov, 3)) {
    ChartPiece pc = overlap_piece(cov, tuple_support(t));
    Rng rng(78);
    Point p = random_point(pc, rng, 0.12);
    CHECK(group_dist(cn.a.at(t)(p), cn2.a.at(t)(p)) < 1e-12);
  }
}

TEST_CASE("refinement restricts a cocycle; bad maps are rejected") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_triple();
  DifferentialCocycle c = random_cocycle(cm, cov, 51, h, 0.35);
  Cover fine = circle_cover({0.01, 0.21, 0.41, 0.61, 0.81},
                            {0.43, 0.43, 0.43, 0.43, 0.43});
  DifferentialCocycle cf = cc_refine(c, fine, {0, 1, 2, 3, 4});
  check_all(cc_validate(cf, h, 2, 15), "refined");
  CHECK_THROWS_AS(cc_refine(c, fine, {1, 2, 3, 4, 0}), NotARefinement);
  CHECK_THROWS_AS(cc_refine(c, fine, {0, 1, 2}), NotARefinement);
}

TEST_CASE("BU(1) cocycles agree with the independent Deligne validator") {
  double h = 1e-3;
  auto cm = crossed_module("BU1");
  Cover cov = circle_cover_triple();
  DifferentialCocycle c = random_cocycle(cm, cov, 61, h, 0.4);
  Report rep = specialize_and_oracles(c, "bueins", h, 3, 17);
  check_all(rep, "bueins");
  CHECK(worst(rep, "spec:agreement") <= 1e-12);
  CHECK(worst(rep, "deligne:a") >= 0);
}

TEST_CASE("monopole: ordinary validator agrees and c1 = 1") {
  double h = 1e-3;
  DifferentialCocycle c = monopole_cocycle();
  Report rep = specialize_and_oracles(c, "gdis", h, 3, 19);
  check_all(rep, "monopole");
  CHECK(worst(rep, "spec:agreement") <= 1e-12);
  double c1 = chern_number(c, 0.01);
  INFO("chern=", c1);
  CHECK(std::abs(c1 - 1.0) < 0.01);

  /* fcurv = dA = -2 pi i dx^dy != 0: not fake flat */
  CocycleClass cls = cc_curvatures_and_classify(c, h);
  CHECK(!cls.fake_flat);
  CHECK(!cls.flat);
}

TEST_CASE("connection synthesis from bare data yields a valid generalized cocycle") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_triple();
  BareCocycle bc = random_bare_cocycle(cm, cov, 71, 0.45);
  DifferentialCocycle c = synthesize_connection(cm, cov, bc.g, bc.a, h);
  CHECK(c.generalized);
  check_all(cc_validate(c, h, 3, 23), "synthesized");

  /* corrupting a transition function must trip the bare-data precheck */
  auto gbad = bc.g;
  GroupMapField gm = gbad.at({0, 1});
  GroupEl tw = grp_exp(algebra_from_coords(cm->G, Eigen::Vector3d(0.05, 0, 0)));
  auto ge = gm.eval;
  gm.eval = [ge, tw](const Point& p) { return mul(tw, ge(p)); };
  gbad[{0, 1}] = gm;
  CHECK_THROWS_AS(synthesize_connection(cm, cov, gbad, bc.a, h),
                  BareCocycleInvalid);
}

TEST_CASE("missing data and cover mismatches raise the canonical errors") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_triple();
  DifferentialCocycle c = make_trivial_cocycle(cm, cov);
  DifferentialCocycle broken = c;
  broken.g.erase({0, 1});
  CHECK_THROWS_AS(cc_validate(broken, h, 2, 3), MissingOverlapData);

  Cover other = circle_cover({0, 0.5}, {0.45, 0.45});
  /* that cover does not even cover the circle, but the mismatch fires first */
  EquivalenceData E = make_trivial_equivalence(cm, cov);
  E.cover = other;
  CHECK_THROWS_AS(eq_apply(c, E, h), CoverMismatch);
}

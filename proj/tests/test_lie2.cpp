#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hgt/crossed_module.hpp"

using namespace hgt;

static const char* kModules[] = {"BU1", "Gdis:U1", "Gdis:SU2", "Gdis:SO3",
                                 "AUT:SU2", "ID:SO3", "ID:SU2", "ID:U1"};

TEST_CASE("exp/log closed forms round trip and stay in the group") {
  Rng rng(7);
  for (GroupTag t : {GroupTag::U1, GroupTag::SU2, GroupTag::SO3}) {
    for (int i = 0; i < 200; ++i) {
      AlgEl X = random_alg(t, rng);
      GroupEl g = grp_exp(X);
      CHECK(group_membership_residual(g) < 1e-12);
      AlgEl L = grp_log(g);
      CHECK(algebra_membership_residual(L) < 1e-12);
      CHECK(max_abs(sub(L, X).m) < 1e-12);
    }
  }
}

TEST_CASE("log throws BranchCut near angle pi") {
  /* U1 */
  Mat z(1, 1);
  z(0, 0) = std::polar(1.0, M_PI - 1e-9);
  CHECK_THROWS_AS(grp_log(GroupEl{GroupTag::U1, z}), BranchCut);
  /* SU2: -I is the branch point */
  Eigen::VectorXd c(3);
  c << 2 * (M_PI - 1e-9), 0, 0;
  CHECK_THROWS_AS(grp_log(grp_exp(algebra_from_coords(GroupTag::SU2, c))),
                  BranchCut);
  /* SO3: rotation by pi */
  Eigen::VectorXd d(3);
  d << 0, M_PI - 1e-9, 0;
  CHECK_THROWS_AS(grp_log(grp_exp(algebra_from_coords(GroupTag::SO3, d))),
                  BranchCut);
  /* just inside the branch domain is fine */
  d << 0, M_PI - 1e-3, 0;
  CHECK_NOTHROW(grp_log(grp_exp(algebra_from_coords(GroupTag::SO3, d))));
}

TEST_CASE("tag mismatches are rejected") {
  Rng rng(3);
  GroupEl a = random_group(GroupTag::SU2, rng);
  GroupEl b = random_group(GroupTag::SO3, rng);
  CHECK_THROWS_AS(mul(a, b), TagMismatch);
  auto cm = crossed_module("AUT:SU2");
  CHECK_THROWS_AS(cm->t(b), TagMismatch);  // t expects SU2
}

TEST_CASE("AUT:SU2 lift and covering map agree") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    GroupEl u = random_group(GroupTag::SU2, rng, 2.5);
    Mat R = so3_of_su2(u.m);
    CHECK(group_membership_residual(GroupEl{GroupTag::SO3, R}) < 1e-12);
    Mat u2 = su2_lift(R);
    /* lift recovers u up to sign */
    double d = std::min(max_abs(u2 - u.m), max_abs(u2 + u.m));
    CHECK(d < 1e-9);
  }
}

TEST_CASE("verify_axioms passes on all built-in crossed modules") {
  for (const char* name : kModules) {
    auto cm = crossed_module(name);
    Report rep = verify_axioms(*cm, 100, 42);
    for (auto& c : rep.conditions) {
      INFO(name, " ", c.label, " residual=", c.max_residual);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("gamma composition requires matching source/target") {
  auto cm = crossed_module("AUT:SU2");
  Rng rng(5);
  GammaMorphism m1{random_group(cm->H, rng), random_group(cm->G, rng)};
  GammaMorphism m2{random_group(cm->H, rng), gamma_target(*cm, m1)};
  CHECK_NOTHROW(gamma_compose(*cm, m2, m1));
  GammaMorphism bad{m2.h, random_group(cm->G, rng)};
  CHECK_THROWS_AS(gamma_compose(*cm, bad, m1), NotComposable);
}

TEST_CASE("inverse functor formula") {
  /* (F^{-1})_H = alpha(F_G^{-1}, F_H^{-1}) gives the groupwise inverse */
  auto cm = crossed_module("AUT:SU2");
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    GammaMorphism a{random_group(cm->H, rng), random_group(cm->G, rng)};
    GammaMorphism ainv{cm->alpha(inv(a.g), inv(a.h)), inv(a.g)};
    GammaMorphism p = gamma_mul(*cm, a, ainv);
    CHECK(group_dist(p.h, identity(cm->H)) < 1e-12);
    CHECK(group_dist(p.g, identity(cm->G)) < 1e-12);
  }
}

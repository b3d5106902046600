/* Acceptance gate: one binary per-criterion, each TEST_CASE maps to one
   item of the release checklist.  Runtime-bounded cases time themselves
   with steady_clock. */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hgt/cocycle_examples.hpp"
#include "hgt/connection.hpp"
#include "hgt/io.hpp"
#include "hgt/roundtrip.hpp"

#include <chrono>
#include <cstdlib>

using namespace hgt;

#ifndef HGT_SOURCE_DIR
#define HGT_SOURCE_DIR "."
#endif
#ifndef HGTC_PATH
#define HGTC_PATH ""
#endif

static void check_all(const Report& rep, const char* ctx) {
  for (auto& c : rep.conditions) {
    INFO(ctx, " ", c.label, " r=", c.max_residual, " thr=", c.threshold);
    CHECK(c.pass);
  }
}

static double worst_of(const Report& rep) {
  double w = 0;
  for (auto& c : rep.conditions) w = std::max(w, c.max_residual);
  return w;
}

static double worst_label(const Report& rep, const std::string& needle) {
  double w = 0;
  for (auto& c : rep.conditions)
    if (c.label.find(needle) != std::string::npos)
      w = std::max(w, c.max_residual);
  return w;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

static Box unit_box(int d) {
  Box b;
  b.lo = Vec::Zero(d);
  b.hi = Vec::Ones(d);
  return b;
}

static void check_ratio(double r1, double r2, const char* ctx, double lo = 3.5,
                        double hi = 4.5) {
  INFO(ctx, " r(h)=", r1, " r(h/2)=", r2, " ratio=", r1 / r2);
  if (r1 < 1e-10) return; /* below the noise floor */
  CHECK(r1 / r2 > lo);
  CHECK(r1 / r2 < hi);
}

/* 1. crossed-module identity lists: algebraic, all four modules, fast */
TEST_CASE("criterion 1: identity lists hold to 1e-9 on 100 samples") {
  Timer tm;
  for (const char* name : {"BU1", "Gdis:SU2", "AUT:SU2", "ID:SO3"}) {
    Report rep = verify_axioms(*crossed_module(name), 100, 1, 1e-9);
    check_all(rep, name);
    CHECK(worst_of(rep) <= 1e-9);
  }
  INFO("elapsed ", tm.secs(), "s");
  CHECK(tm.secs() < 5.0);
}

/* 2. MC structure equation, order-2 convergence */
TEST_CASE("criterion 2: MC equation converges at order 2") {
  Timer tm;
  for (const char* name : {"AUT:SU2", "BU1"}) {
    auto cm = crossed_module(name);
    auto P = gamma_groupoid(cm);
    GammaForm Th = mc_theta(P);
    auto resid = [&](double h) {
      GammaForm res =
          gf_add(gf_D(P, Th, h), gf_scale(0.5, gf_bracket(P, Th, Th, h)));
      return gf_dist(P, res, gf_zero(P, 2), 25, 17);
    };
    double r1 = resid(1e-3), r2 = resid(5e-4);
    CHECK(r1 < tol::fd(1e-3));
    check_ratio(r1, r2, name);
  }
  INFO("elapsed ", tm.secs(), "s");
  CHECK(tm.secs() < 10.0);
}

/* 3 + 4. DGLA laws and adjoint-action laws over 20 random forms */
TEST_CASE("criteria 3-4: DGLA and adjoint laws over 20 random gamma-forms") {
  for (const char* name : {"AUT:SU2", "BU1"}) {
    Report r1 = dgla_property_suite(crossed_module(name), 1e-3, 3, 20, 301);
    check_all(r1, name);
    /* algebraic laws at 1e-9 */
    CHECK(worst_label(r1, "bracket-anticomm") <= 1e-9);
    CHECK(worst_label(r1, "bracket-jacobi") <= 1e-9);
    CHECK(worst_label(r1, "ad-unit") <= 1e-9);
    CHECK(worst_label(r1, "ad-compose") <= 1e-9);
    CHECK(worst_label(r1, "ad-bracket") <= 1e-9);
  }
  /* FD laws converge at order 2 */
  Report a = dgla_property_suite(crossed_module("AUT:SU2"), 1e-3, 3, 4, 303);
  Report b = dgla_property_suite(crossed_module("AUT:SU2"), 5e-4, 3, 4, 303);
  for (const char* lbl : {"D-leibniz", "D-squared", "ad-derivative"})
    check_ratio(worst_label(a, lbl), worst_label(b, lbl), lbl, 3.2, 4.8);
}

/* 5. trivial-bundle connection: axioms, curvature display, Bianchi */
TEST_CASE("criterion 5: Omega_Psi axioms, curvature formula, Bianchi") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  Rng rng(51);
  ChartPiece basep = make_piece(unit_box(2), {false, false}, {});
  FormField A = random_form(basep, 1, cm->G, rng, 0.5);
  FormField Cf = random_form(basep, 2, cm->H, rng, 0.5);
  Connection C = trivial_connection(cm, basep.box, basep.wrap, A, Cf);
  check_all(conn_validate(C, 10, h, 53), "conform");
  /* curvature matches the closed-form display for the trivial bundle */
  const PatchworkGroupoid& P = C.bundle;
  GammaForm curv = conn_curvature(C, h);
  GammaForm expect = gf_add(gf_D(P, C.omega, h),
                            gf_scale(0.5, gf_bracket(P, C.omega, C.omega, h)));
  double r = gf_dist(P, curv, expect, 10, 55);
  INFO("curvature display residual=", r);
  CHECK(r < 10 * tol::fd(h));
  /* Bianchi + R-invariance, order 2 */
  auto worst_at = [&](double hh) {
    return worst_of(bianchi_and_invariance(C, hh, 3, 57, 1.0));
  };
  check_ratio(worst_at(1e-3), worst_at(5e-4), "bianchi", 3.2, 4.8);
}

/* 6. action-groupoid bundle on T^2: axioms; flat input gives flat output */
TEST_CASE("criterion 6: action groupoid bundle over T^2") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  ChartPiece basep = make_piece(unit_box(2), {true, true}, {});
  Rng rng(61);
  FormField om = random_form(basep, 1, cm->G, rng, 0.5);
  Connection C = action_groupoid_bundle(cm, basep.box, basep.wrap, om);
  check_all(conn_validate(C, 10, h, 63), "action");
  Connection C0 = action_groupoid_bundle(
      cm, basep.box, basep.wrap, zero_form(basep, 1, ValueTag::Algebra(cm->G)));
  CurvatureReport cr = conn_curvature_report(C0, conn_curvature(C0, h), h, 8, 65);
  INFO("flat omega: fa=", cr.fa_max, " fb=", cr.fb_max, " fc=", cr.fc_max);
  CHECK(cr.flat);
}

/* 7. round trip over the four cocycle styles */
TEST_CASE("criterion 7: extract o reconstruct <= 1e-12, curvature lemma") {
  double h = 1e-3;
  Cover circ = circle_cover_triple();
  struct Case {
    std::string name;
    DifferentialCocycle c;
  };
  std::vector<Case> cases;
  cases.push_back({"trivial",
                   make_trivial_cocycle(crossed_module("AUT:SU2"), circ)});
  cases.push_back({"monopole", monopole_cocycle()});
  cases.push_back({"bu1-gerbe",
                   random_cocycle(crossed_module("BU1"), circ, 71, h, 0.35)});
  cases.push_back({"aut-su2",
                   random_cocycle(crossed_module("AUT:SU2"), circ, 73, h, 0.3)});
  for (auto& cs : cases) {
    ReconstructedBundle B;
    Connection C = reconstruct_connection(cs.c, h, 1, 75, &B);
    DifferentialCocycle ce = extract_cocycle(B, C.omega, h);
    CHECK_FALSE(ce.generalized); /* full mode in, full mode out */
    const Cover& cov = cs.c.cover;
    double w = 0;
    for (int i = 0; i < cov.size(); ++i) {
      ChartPiece pc = chart_piece(cov, i);
      Rng rng(77 + i);
      for (int s = 0; s < 2; ++s) {
        Point p = random_point(pc, rng, 0.12);
        Tangent v = random_tangent(pc, rng), u = random_tangent(pc, rng);
        w = std::max(w, max_abs(ce.A[i](p, {v}) - cs.c.A[i](p, {v})));
        w = std::max(w, max_abs(ce.B[i](p, {v, u}) - cs.c.B[i](p, {v, u})));
      }
    }
    for (auto& t : ordered_tuples(cov, 2)) {
      ChartPiece pc = overlap_piece(cov, tuple_support(t));
      Rng rng(tuple_seed(79, 1, t));
      Point p = random_point(pc, rng, 0.12);
      Tangent v = random_tangent(pc, rng);
      w = std::max(w, group_dist(ce.g.at(t)(p), cs.c.g.at(t)(p)));
      w = std::max(w,
                   max_abs(ce.phi.at(t)(p, {v}) - cs.c.phi.at(t)(p, {v})));
    }
    for (auto& t : ordered_tuples(cov, 3)) {
      ChartPiece pc = overlap_piece(cov, tuple_support(t));
      Rng rng(tuple_seed(79, 3, t));
      Point p = random_point(pc, rng, 0.12);
      w = std::max(w, group_dist(ce.a.at(t)(p), cs.c.a.at(t)(p)));
    }
    INFO(cs.name, " roundtrip discrepancy=", w);
    CHECK(w <= 1e-12);
  }
  /* reconstructed curvature lemma, order 2 */
  DifferentialCocycle c = cases[3].c;
  Report x1 = curvature_crosscheck(c, 1e-3, 2, 81);
  Report x2 = curvature_crosscheck(c, 5e-4, 2, 81);
  check_ratio(worst_of(x1), worst_of(x2), "curvrecon", 3.2, 4.8);
}

/* 8. equivalences and normalization */
TEST_CASE("criterion 8: eq_apply validity; normalization exact+idempotent") {
  double h = 1e-3;
  Cover cov = circle_cover_triple();
  for (uint64_t seed : {101, 102, 103}) {
    auto cm = crossed_module(seed % 2 ? "AUT:SU2" : "BU1");
    bool gen = (seed == 103);
    DifferentialCocycle c0 = make_trivial_cocycle(cm, cov, gen);
    EquivalenceData E = random_equivalence(cm, cov, seed, 0.35, gen);
    DifferentialCocycle c1 = eq_apply(c0, E, h);
    check_all(cc_validate(c1, h, 2, seed), "eq_apply cc");
    check_all(eq_validate(c0, c1, E, h, 2, seed), "eq_apply eq");

    auto [cn, chain] = cc_normalize(c1, h);
    CHECK(cn.generalized == c1.generalized); /* flag-preserving */
    CHECK(cc_normalized_residual(cn, 4, seed) <= 1e-12);
    check_all(cc_validate(cn, h, 2, seed), "normalized");
    /* idempotent: renormalizing is the identity on the unit datums */
    auto [cn2, chain2] = cc_normalize(cn, h);
    CHECK(cc_normalized_residual(cn2, 4, seed) <= 1e-12);
    Rng rng(seed + 7);
    double w = 0;
    for (auto& t : ordered_tuples(cov, 2)) {
      ChartPiece pc = overlap_piece(cov, tuple_support(t));
      Point p = random_point(pc, rng, 0.12);
      w = std::max(w, group_dist(cn2.g.at(t)(p), cn.g.at(t)(p)));
    }
    INFO("idempotence drift=", w);
    CHECK(w <= 1e-12);
  }
}

/* 9. specialized validators agree; monopole flux */
TEST_CASE("criterion 9: Deligne / ordinary validators agree; chern = 1") {
  double h = 1e-3;
  Cover cov = circle_cover_triple();
  /* 20 pair-overlaps x 10 samples = 200 random samples per run */
  DifferentialCocycle cb = random_cocycle(crossed_module("BU1"), cov, 91, h, 0.35);
  Report rb = specialize_and_oracles(cb, "bueins", h, 10, 93);
  check_all(rb, "bueins");
  CHECK(worst_label(rb, "spec:agreement") <= 1e-12);
  Report rg = specialize_and_oracles(monopole_cocycle(), "gdis", h, 10, 95);
  check_all(rg, "gdis");
  CHECK(worst_label(rg, "spec:agreement") <= 1e-12);
  Timer tm;
  double c1 = chern_number(monopole_cocycle(), 0.01, h);
  INFO("chern=", c1, " elapsed=", tm.secs(), "s");
  CHECK(c1 == doctest::Approx(1.0).epsilon(0.01));
  CHECK(tm.secs() < 5.0);
}

/* 10. gauge-transformation suite */
TEST_CASE("criterion 10: gauge suite coherence and convergence") {
  double h = 1e-3;
  auto cm = crossed_module("AUT:SU2");
  ChartPiece tp = make_piece(unit_box(2), {true, true}, {});
  Rng rng(111);
  GammaConnection src =
      make_connection(cm, tp, random_form(tp, 1, cm->G, rng, 0.4),
                      random_form(tp, 2, cm->H, rng, 0.4));
  auto mk_gt = [&](double scl) {
    auto gc = random_group_closure(cm->G, 2, rng, scl);
    return GaugeTransformation{
        GroupMapField{tp, cm->G, [gc](const Point& p) { return gc(p.x); }},
        random_form(tp, 1, cm->H, rng, scl)};
  };
  GaugeTransformation g1 = mk_gt(0.4), g2 = mk_gt(0.4);
  /* apply-compose coherence */
  GammaConnection d1 = gt_apply(src, g1, h);
  GammaConnection d12 = gt_apply(d1, g2, h);
  GammaConnection dc = gt_apply(src, gt_compose(cm, g2, g1), h);
  Rng srng(113);
  double w = 0;
  for (int s = 0; s < 6; ++s) {
    Point p = random_point(tp, srng, 0.12);
    Tangent v = random_tangent(tp, srng), u = random_tangent(tp, srng);
    w = std::max(w, max_abs(d12.A(p, {v}) - dc.A(p, {v})));
    w = std::max(w, max_abs(d12.B(p, {v, u}) - dc.B(p, {v, u})));
  }
  INFO("apply/compose coherence=", w);
  CHECK(w < 10 * tol::fd(h));
  /* phi_g pullback components + shift closure, order 2 */
  GammaConnection d1f = gt_apply(src, g1, 5e-4);
  Report p1 = phi_g_pullback_check(src, d1, g1, 1e-3, 2, 115);
  Report p2 = phi_g_pullback_check(src, d1f, g1, 5e-4, 2, 115);
  check_all(p1, "phig");
  check_ratio(worst_of(p1), worst_of(p2), "phig", 3.2, 4.8);
  Report s1 = shift_closure_check(d1, g1, 1e-3, 2, 117);
  Report s2 = shift_closure_check(d1f, g1, 5e-4, 2, 117);
  check_all(s1, "shift");
  check_ratio(worst_of(s1), worst_of(s2), "shift", 3.2, 4.8);
  /* fake flatness is preserved */
  FormField Bff = form_map(curvature2(src.A, h), ValueTag::Algebra(cm->H),
                           [cm](const Point&, const Mat& m) {
                             return cm->lift_star({cm->G, m}).m;
                           });
  GammaConnection ff = make_connection(cm, tp, src.A, Bff);
  CHECK(gc_curvatures(ff, h, 6, 119).fake_flat);
  CHECK(gc_curvatures(gt_apply(ff, g1, h), h, 6, 121).fake_flat);
  /* synthesized connections always pass generalized validation */
  Cover cov = circle_cover_triple();
  for (uint64_t seed : {131, 132}) {
    BareCocycle bc = random_bare_cocycle(cm, cov, seed, 0.4);
    DifferentialCocycle c = synthesize_connection(cm, cov, bc.g, bc.a, h);
    CHECK(c.generalized);
    check_all(cc_validate(c, h, 2, seed), "synth");
  }
}

/* 11. negative controls: a 1e-3 perturbation of any single datum trips the
   validator at more than 10x threshold */
TEST_CASE("criterion 11: validators detect 1e-3 perturbations") {
  double h = 1e-4; /* threshold 10 * 100 * h^2 = 1e-5 */
  double thr = 10 * tol::fd(h);
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_triple();
  DifferentialCocycle c = random_cocycle(cm, cov, 141, 1e-3, 0.3);

  auto bump_form = [&](FormField f, GroupTag alg) {
    AlgEl dE = algebra_from_coords(alg, Eigen::Vector3d(1e-3, 0, 0));
    auto fe = f.eval;
    int deg = f.degree;
    f.eval = [fe, dE, deg](const Point& p,
                           const std::vector<Tangent>& vs) -> Mat {
      double wdg = vs[0].vx(0);
      for (int k = 1; k < deg; ++k) wdg *= vs[k].vx(0) + 1.0;
      return fe(p, vs) + dE.m * wdg;
    };
    return f;
  };
  auto bump_gmap = [&](GroupMapField g, GroupTag tag) {
    AlgEl dE = algebra_from_coords(tag, Eigen::Vector3d(1e-3, 0, 0));
    auto ge = g.eval;
    g.eval = [ge, dE](const Point& p) { return mul(grp_exp(dE), ge(p)); };
    return g;
  };
  auto max_fail_ratio = [&](const DifferentialCocycle& bad) {
    Report rep = cc_validate(bad, h, 3, 143);
    double r = 0;
    for (auto& cc : rep.conditions)
      if (!cc.pass) r = std::max(r, cc.max_residual / cc.threshold);
    return r;
  };

  DifferentialCocycle bad = c;
  bad.A[0] = bump_form(c.A[0], cm->G);
  CHECK(max_fail_ratio(bad) > 10.0);
  bad = c;
  bad.B[0] = bump_form(c.B[0], cm->H);
  CHECK(max_fail_ratio(bad) > 10.0);
  bad = c;
  bad.g[{0, 1}] = bump_gmap(c.g.at({0, 1}), cm->G);
  CHECK(max_fail_ratio(bad) > 10.0);
  bad = c;
  bad.phi[{0, 1}] = bump_form(c.phi.at({0, 1}), cm->H);
  CHECK(max_fail_ratio(bad) > 10.0);
  bad = c;
  bad.a[{0, 1, 2}] = bump_gmap(c.a.at({0, 1, 2}), cm->H);
  CHECK(max_fail_ratio(bad) > 10.0);

  /* equivalence validator */
  DifferentialCocycle c0 = make_trivial_cocycle(cm, cov);
  EquivalenceData E = random_equivalence(cm, cov, 145, 0.3);
  DifferentialCocycle c1 = eq_apply(c0, E, 1e-3);
  auto eq_fail_ratio = [&](const EquivalenceData& Ebad) {
    Report rep = eq_validate(c0, c1, Ebad, h, 3, 147);
    double r = 0;
    for (auto& cc : rep.conditions)
      if (!cc.pass) r = std::max(r, cc.max_residual / cc.threshold);
    return r;
  };
  EquivalenceData Ebad = E;
  Ebad.hmap[0] = bump_gmap(E.hmap[0], cm->G);
  CHECK(eq_fail_ratio(Ebad) > 10.0);
  Ebad = E;
  Ebad.phi0[0] = bump_form(E.phi0[0], cm->H);
  CHECK(eq_fail_ratio(Ebad) > 10.0);
  Ebad = E;
  Ebad.e[{0, 1}] = bump_gmap(E.e.at({0, 1}), cm->H);
  CHECK(eq_fail_ratio(Ebad) > 10.0);

  /* gauge validator */
  ChartPiece tp = make_piece(unit_box(2), {true, true}, {});
  Rng rng(151);
  GammaConnection src =
      make_connection(cm, tp, random_form(tp, 1, cm->G, rng, 0.4),
                      random_form(tp, 2, cm->H, rng, 0.4));
  auto gcl = random_group_closure(cm->G, 2, rng, 0.4);
  GaugeTransformation gt{
      GroupMapField{tp, cm->G, [gcl](const Point& p) { return gcl(p.x); }},
      random_form(tp, 1, cm->H, rng, 0.4)};
  GammaConnection dst = gt_apply(src, gt, 1e-3);
  auto gt_fail_ratio = [&](const GaugeTransformation& gbad) {
    Report rep = gt_validate(src, dst, gbad, h, 3, 153);
    double r = 0;
    for (auto& cc : rep.conditions)
      if (!cc.pass) r = std::max(r, cc.max_residual / cc.threshold);
    return r;
  };
  GaugeTransformation gbad = gt;
  gbad.g = bump_gmap(gt.g, cm->G);
  CHECK(gt_fail_ratio(gbad) > 10.0);
  gbad = gt;
  gbad.phi = bump_form(gt.phi, cm->H);
  CHECK(gt_fail_ratio(gbad) > 10.0);
}

/* 12. CLI selftest */
TEST_CASE("criterion 12: hgtc selftest exits 0 in under 60s") {
  std::string bin = HGTC_PATH;
  if (bin.empty()) {
    MESSAGE("hgtc path not configured; skipping");
    return;
  }
  Timer tm;
  std::string cmd = bin + " selftest --h 1e-3 --seed 7 > /dev/null";
  int rc = std::system(cmd.c_str());
  INFO("elapsed ", tm.secs(), "s");
  CHECK(rc == 0);
  CHECK(tm.secs() < 60.0);
}

/* DGLA / adjoint-action property suite for gamma-valued forms, run over the
   built-in groupoid families with seeded random analytic forms.  Validity of
   the generated forms is guaranteed structurally: they are linear
   combinations of MC pullbacks along functors, base pullbacks and pure-fc
   forms, all of which satisfy the gamma-form conditions. */

#include "generators.hpp"

namespace hgt {

/* ---------------- the property suite ---------------- */

Report dgla_property_suite(std::shared_ptr<const CrossedModule> cm, double h,
                           int samples, int nforms, uint64_t seed) {
  Report rep;
  double tol_alg = tol::algebraic;
  double tol_fd = tol::fd(h);

  struct Family {
    std::string tag;
    FamilyKind kind;
    PatchworkGroupoid P;
  };
  Box bx;
  bx.lo = Vec::Constant(1, 0.0);
  bx.hi = Vec::Constant(1, 1.0);
  std::vector<Family> fams;
  fams.push_back({"gamma", FamilyKind::Gamma, gamma_groupoid(cm)});
  fams.push_back({"trivial", FamilyKind::Trivial, trivial_bundle(cm, bx, {false})});
  fams.push_back({"action", FamilyKind::Action, action_groupoid(cm, bx, {false})});

  uint64_t s0 = seed;
  for (auto& fam : fams) {
    Rng rng(s0++);
    const PatchworkGroupoid& P = fam.P;
    std::vector<GammaForm> deg1, deg2;
    int n1 = std::max(2, nforms / 2), n2 = std::max(2, nforms - n1);
    for (int i = 0; i < n1; ++i)
      deg1.push_back(random_gamma_form(P, fam.kind, 1, rng, h));
    for (int i = 0; i < n2; ++i)
      deg2.push_back(random_gamma_form(P, fam.kind, 2, rng, h));

    /* validity of the generated forms */
    auto& cval = rep.add(fam.tag + ":gf-valid", 10 * tol_fd);
    for (auto* bank : {&deg1, &deg2})
      for (auto& f : *bank) {
        Report r = gf_validate(P, f, h, samples, rng.gen(), tol_fd);
        for (auto& c : r.conditions) rep.record(cval, c.max_residual);
      }

    /* graded anticommutativity (algebraic) */
    auto& cac = rep.add(fam.tag + ":bracket-anticomm", tol_alg);
    {
      /* [A^B] = -(-1)^{kl} [B^A]: k=1,l=2 gives -[B,A]; k=l=1 gives +[B,A] */
      auto& A = deg1[0];
      auto& B = deg2[0];
      GammaForm lhs = gf_bracket(P, A, B, h);
      GammaForm rhs = gf_scale(-1.0, gf_bracket(P, B, A, h));
      rep.record(cac, gf_dist(P, lhs, rhs, samples, rng.gen()));
      GammaForm l11 = gf_bracket(P, deg1[0], deg1[1 % deg1.size()], h);
      GammaForm r11 = gf_bracket(P, deg1[1 % deg1.size()], deg1[0], h);
      rep.record(cac, gf_dist(P, l11, r11, samples, rng.gen()));
    }

    /* graded Jacobi (algebraic): (-1)^{k1k3}[A,[B,C]] + cyc = 0 on deg-1 triples */
    auto& cjac = rep.add(fam.tag + ":bracket-jacobi", tol_alg);
    {
      auto& A = deg1[0];
      auto& B = deg1[1 % deg1.size()];
      auto& C = deg1.back();
      GammaForm t1 = gf_scale(-1.0, gf_bracket(P, A, gf_bracket(P, B, C, h), h));
      GammaForm t2 = gf_scale(-1.0, gf_bracket(P, B, gf_bracket(P, C, A, h), h));
      GammaForm t3 = gf_scale(-1.0, gf_bracket(P, C, gf_bracket(P, A, B, h), h));
      GammaForm sum = gf_add(t1, gf_add(t2, t3));
      rep.record(cjac, gf_dist(P, sum, gf_zero(P, 3), samples, rng.gen()));
    }

    /* Leibniz rule for D (FD) */
    auto& clei = rep.add(fam.tag + ":D-leibniz", 10 * tol_fd);
    {
      auto& A = deg1[0];
      auto& B = deg1[1 % deg1.size()];
      GammaForm lhs = gf_D(P, gf_bracket(P, A, B, h), h);
      GammaForm rhs = gf_add(gf_bracket(P, gf_D(P, A, h), B, h),
                             gf_scale(-1.0, gf_bracket(P, A, gf_D(P, B, h), h)));
      rep.record(clei, gf_dist(P, lhs, rhs, samples, rng.gen()));
    }

    /* D^2 = 0 (nested FD) */
    auto& cd2 = rep.add(fam.tag + ":D-squared", 10 * tol_fd);
    {
      GammaForm dd = gf_D(P, gf_D(P, deg1[0], h), h);
      rep.record(cd2, gf_dist(P, dd, gf_zero(P, 3), samples, rng.gen()));
    }

    /* adjoint action laws */
    Rng crng(rng.gen());
    auto c1 = random_group_closure(cm->G, P.obj_pieces[0].dim(), crng, 0.7);
    auto c2 = random_group_closure(cm->G, P.obj_pieces[0].dim(), crng, 0.7);
    FunctorToGamma F1 = family_functor(cm, fam.kind, c1);
    FunctorToGamma idF;
    idF.F0 = [cm](int, const Point&) { return identity(cm->G); };
    idF.FH = [cm](int, const Point&) { return identity(cm->H); };

    auto& cad1 = rep.add(fam.tag + ":ad-unit", tol_alg);
    {
      GammaForm lhs = gf_ad(P, idF, deg1[0], h);
      rep.record(cad1, gf_dist(P, lhs, deg1[0], samples, rng.gen()));
    }
    auto& cad2 = rep.add(fam.tag + ":ad-compose", tol_alg);
    {
      FunctorToGamma F2 = family_functor(cm, fam.kind, c2);
      FunctorToGamma F21 = functor_product(P, F2, functor_inverse(P, F1));
      GammaForm lhs = gf_ad(P, functor_product(P, F21, F1), deg1[0], h);
      GammaForm rhs = gf_ad(P, F21, gf_ad(P, F1, deg1[0], h), h);
      rep.record(cad2, gf_dist(P, lhs, rhs, samples, rng.gen()));
    }
    auto& cad3 = rep.add(fam.tag + ":ad-bracket", tol_alg);
    {
      GammaForm lhs = gf_ad(P, F1, gf_bracket(P, deg1[0], deg2[0], h), h);
      GammaForm rhs = gf_bracket(P, gf_ad(P, F1, deg1[0], h),
                                 gf_ad(P, F1, deg2[0], h), h);
      rep.record(cad3, gf_dist(P, lhs, rhs, samples, rng.gen()));
    }
    auto& cad4 = rep.add(fam.tag + ":ad-derivative", 20 * tol_fd);
    {
      /* D(Ad_F^{-1} Psi) = Ad_F^{-1}(D Psi) - [F^*Theta ^ Ad_F^{-1} Psi] */
      FunctorToGamma F1i = functor_inverse(P, F1);
      GammaForm adi = gf_ad(P, F1i, deg1[0], h);
      GammaForm lhs = gf_D(P, adi, h);
      GammaForm rhs = gf_sub(gf_ad(P, F1i, gf_D(P, deg1[0], h), h),
                             gf_bracket(P, functor_pullback_theta(P, F1, h), adi, h));
      rep.record(cad4, gf_dist(P, lhs, rhs, samples, rng.gen()));
    }

    /* MC structure equation */
    if (fam.kind == FamilyKind::Gamma) {
      auto& cmc = rep.add(fam.tag + ":mc-equation", tol_fd);
      GammaForm Th = mc_theta(P);
      GammaForm res = gf_add(gf_D(P, Th, h),
                             gf_scale(0.5, gf_bracket(P, Th, Th, h)));
      rep.record(cmc, gf_dist(P, res, gf_zero(P, 2), samples, rng.gen()));
    }
  }
  return rep;
}

}  // namespace hgt

#pragma once

/* Patchwork Lie groupoids (objects/morphisms as disjoint unions of chart
   pieces), the built-in families (Gamma itself, trivial bundles M_dis x Gamma,
   action groupoids of trivial principal bundles), tangent pushforwards
   through structure maps, and gamma-valued differential forms with their
   D / bracket / Ad operations. */

#include "crossed_module.hpp"
#include "fields.hpp"

#include <memory>

namespace hgt {

/* A point of a patchwork space: chart piece index + point in that chart. */
struct GPR {
  int piece = 0;
  Point pt;
};

using PointMap = std::function<GPR(const Point&)>;

/* Distance between two points on the same piece (wrap-aware on base). */
inline double point_dist(const ChartPiece& pc, const Point& a, const Point& b) {
  double d = 0;
  for (int i = 0; i < pc.dim(); ++i) {
    double dx = a.x(i) - b.x(i);
    if (pc.wrap[i]) dx -= std::round(dx);
    d = std::max(d, std::abs(dx));
  }
  for (size_t k = 0; k < a.g.size(); ++k)
    d = std::max(d, group_dist(a.g[k], b.g[k]));
  return d;
}

/* Order-2 pushforward of a tangent through a smooth map between chart
   pieces.  Group components are read off via logs (exact for maps that act
   as projections / left translations on the factors). */
inline Tangent fd_push(const PointMap& f, const ChartPiece& dom,
                       const std::vector<ChartPiece>& codom, const Point& p,
                       const Tangent& v, double h, GPR* image = nullptr) {
  check_fd_margin(dom, p, {v}, h);
  GPR q0 = f(p);
  GPR qp = f(flow(p, v, h));
  GPR qm = f(flow(p, v, -h));
  if (qp.piece != q0.piece || qm.piece != q0.piece)
    throw PieceMismatch("fd_push: image piece changed within the stencil");
  const ChartPiece& cpc = codom[q0.piece];
  Tangent w;
  w.vx = Vec::Zero(cpc.dim());
  for (int i = 0; i < cpc.dim(); ++i) {
    double dp = qp.pt.x(i) - q0.pt.x(i);
    double dm = qm.pt.x(i) - q0.pt.x(i);
    if (cpc.wrap[i]) {
      dp -= std::round(dp);
      dm -= std::round(dm);
    }
    w.vx(i) = (dp - dm) / (2 * h);
  }
  for (int k = 0; k < cpc.nfac(); ++k) {
    GroupEl gi = inv(q0.pt.g[k]);
    AlgEl lp = grp_log(mul(gi, qp.pt.g[k]));
    AlgEl lm = grp_log(mul(gi, qm.pt.g[k]));
    w.vg.push_back({cpc.factors[k], Mat((lp.m - lm.m) / (2 * h))});
  }
  if (image) *image = q0;
  return w;
}

/* Pullback of a piecewise form through a map into the patchwork space. */
inline FormField pullback_form(const std::vector<FormField>& fields,
                               const std::vector<ChartPiece>& codom,
                               const PointMap& f, const ChartPiece& dom,
                               int degree, ValueTag target, double h) {
  FormField r{dom, degree, target, nullptr};
  r.eval = [fields, codom, f, dom, h](const Point& p,
                                      const std::vector<Tangent>& vs) -> Mat {
    GPR q = f(p);
    std::vector<Tangent> ws;
    for (auto& v : vs) ws.push_back(fd_push(f, dom, codom, p, v, h));
    return fields[q.piece](q.pt, ws);
  };
  return r;
}

struct PatchworkGroupoid {
  std::shared_ptr<const CrossedModule> cm;
  std::vector<ChartPiece> obj_pieces, mor_pieces;
  std::function<GPR(int, const Point&)> src, tgt;  // morphism -> object
  std::function<GPR(const GPR&, const GPR&)> compose;  // (m2, m1), s(m2)=t(m1)
  std::function<GPR(int, const Point&)> unit;  // object -> identity morphism (may be null)

  /* composable-pair parametrizations, one or more chart pieces */
  struct PairSpace {
    ChartPiece piece;
    PointMap pr1;   // first-applied morphism m1
    PointMap pr2;   // second morphism m2
    PointMap comp;  // m2 o m1
  };
  std::vector<PairSpace> pairs;

  /* optional Gamma-action (present on bundle-type groupoids) */
  std::function<GPR(const GPR&, const GroupEl&)> act_obj;
  std::function<GPR(const GPR&, const GammaMorphism&)> act_mor;
  std::function<Vec(const GPR&)> proj_obj;  // optional projection to base

  GPR sample_obj(Rng& rng, double margin = 0.12) const {
    int i = rng.uniform_int(0, (int)obj_pieces.size() - 1);
    return {i, random_point(obj_pieces[i], rng, margin)};
  }
  GPR sample_mor(Rng& rng, double margin = 0.12) const {
    int i = rng.uniform_int(0, (int)mor_pieces.size() - 1);
    return {i, random_point(mor_pieces[i], rng, margin)};
  }
};

/* ----------------------- built-in families ----------------------- */

/* Gamma itself: one object piece (G), one morphism piece (H x G). */
inline PatchworkGroupoid gamma_groupoid(std::shared_ptr<const CrossedModule> cm) {
  PatchworkGroupoid P;
  P.cm = cm;
  GroupTag G = cm->G, H = cm->H;
  P.obj_pieces = {point_piece({G})};
  P.mor_pieces = {point_piece({H, G})};
  auto cmp = cm;
  P.src = [](int, const Point& p) -> GPR {
    return {0, {Vec(0), {p.g[1]}}};
  };
  P.tgt = [cmp](int, const Point& p) -> GPR {
    return {0, {Vec(0), {mul(cmp->t(p.g[0]), p.g[1])}}};
  };
  P.unit = [cmp, H](int, const Point& p) -> GPR {
    return {0, {Vec(0), {identity(H), p.g[0]}}};
  };
  P.compose = [cmp](const GPR& m2, const GPR& m1) -> GPR {
    GroupEl t1 = mul(cmp->t(m1.pt.g[0]), m1.pt.g[1]);
    if (group_dist(m2.pt.g[1], t1) > 1e-9)
      throw NotComposable("gamma: s(m2) != t(m1)");
    return {0, {Vec(0), {mul(m2.pt.g[0], m1.pt.g[0]), m1.pt.g[1]}}};
  };
  PatchworkGroupoid::PairSpace ps;
  ps.piece = point_piece({H, G, H});  // (h1, g1, h2)
  ps.pr1 = [](const Point& p) -> GPR {
    return {0, {Vec(0), {p.g[0], p.g[1]}}};
  };
  ps.pr2 = [cmp](const Point& p) -> GPR {
    return {0, {Vec(0), {p.g[2], mul(cmp->t(p.g[0]), p.g[1])}}};
  };
  ps.comp = [](const Point& p) -> GPR {
    return {0, {Vec(0), {mul(p.g[2], p.g[0]), p.g[1]}}};
  };
  P.pairs = {ps};
  return P;
}

/* Trivial bundle M_dis x Gamma over a single base chart. */
inline PatchworkGroupoid trivial_bundle(std::shared_ptr<const CrossedModule> cm,
                                        const Box& base,
                                        const std::vector<bool>& wrap) {
  PatchworkGroupoid P;
  P.cm = cm;
  GroupTag G = cm->G, H = cm->H;
  P.obj_pieces = {make_piece(base, wrap, {G})};
  P.mor_pieces = {make_piece(base, wrap, {H, G})};
  auto cmp = cm;
  P.src = [](int, const Point& p) -> GPR { return {0, {p.x, {p.g[1]}}}; };
  P.tgt = [cmp](int, const Point& p) -> GPR {
    return {0, {p.x, {mul(cmp->t(p.g[0]), p.g[1])}}};
  };
  P.unit = [H](int, const Point& p) -> GPR {
    return {0, {p.x, {identity(H), p.g[0]}}};
  };
  P.compose = [cmp](const GPR& m2, const GPR& m1) -> GPR {
    if ((m2.pt.x - m1.pt.x).cwiseAbs().maxCoeff() > 1e-9)
      throw NotComposable("trivial bundle: base points differ");
    GroupEl t1 = mul(cmp->t(m1.pt.g[0]), m1.pt.g[1]);
    if (group_dist(m2.pt.g[1], t1) > 1e-9)
      throw NotComposable("trivial bundle: s(m2) != t(m1)");
    return {0, {m1.pt.x, {mul(m2.pt.g[0], m1.pt.g[0]), m1.pt.g[1]}}};
  };
  PatchworkGroupoid::PairSpace ps;
  ps.piece = make_piece(base, wrap, {H, G, H});
  ps.pr1 = [](const Point& p) -> GPR { return {0, {p.x, {p.g[0], p.g[1]}}}; };
  ps.pr2 = [cmp](const Point& p) -> GPR {
    return {0, {p.x, {p.g[2], mul(cmp->t(p.g[0]), p.g[1])}}};
  };
  ps.comp = [](const Point& p) -> GPR {
    return {0, {p.x, {mul(p.g[2], p.g[0]), p.g[1]}}};
  };
  P.pairs = {ps};
  P.act_obj = [](const GPR& o, const GroupEl& g) -> GPR {
    return {0, {o.pt.x, {mul(o.pt.g[0], g)}}};
  };
  P.act_mor = [cmp](const GPR& m, const GammaMorphism& gm) -> GPR {
    return {0,
            {m.pt.x,
             {mul(m.pt.g[0], cmp->alpha(m.pt.g[1], gm.h)), mul(m.pt.g[1], gm.g)}}};
  };
  P.proj_obj = [](const GPR& o) { return o.pt.x; };
  return P;
}

/* Action groupoid of the trivial principal bundle P = M x G acted on by
   Gamma: morphisms P x H, s(p,h) = p, t(p,h) = p.t(h), (p2,h2) o (p1,h1) =
   (p1, h1 h2), R((p,h),(h',g)) = (pg, alpha(g^{-1}, h h')). */
inline PatchworkGroupoid action_groupoid(std::shared_ptr<const CrossedModule> cm,
                                         const Box& base,
                                         const std::vector<bool>& wrap) {
  PatchworkGroupoid P;
  P.cm = cm;
  GroupTag G = cm->G, H = cm->H;
  P.obj_pieces = {make_piece(base, wrap, {G})};
  P.mor_pieces = {make_piece(base, wrap, {G, H})};  // (x, p_g, h)
  auto cmp = cm;
  P.src = [](int, const Point& p) -> GPR { return {0, {p.x, {p.g[0]}}}; };
  P.tgt = [cmp](int, const Point& p) -> GPR {
    return {0, {p.x, {mul(p.g[0], cmp->t(p.g[1]))}}};
  };
  P.unit = [H](int, const Point& p) -> GPR {
    return {0, {p.x, {p.g[0], identity(H)}}};
  };
  P.compose = [cmp](const GPR& m2, const GPR& m1) -> GPR {
    if ((m2.pt.x - m1.pt.x).cwiseAbs().maxCoeff() > 1e-9)
      throw NotComposable("action groupoid: base points differ");
    GroupEl t1 = mul(m1.pt.g[0], cmp->t(m1.pt.g[1]));
    if (group_dist(m2.pt.g[0], t1) > 1e-9)
      throw NotComposable("action groupoid: s(m2) != t(m1)");
    return {0, {m1.pt.x, {m1.pt.g[0], mul(m1.pt.g[1], m2.pt.g[1])}}};
  };
  PatchworkGroupoid::PairSpace ps;
  ps.piece = make_piece(base, wrap, {G, H, H});  // (x, p_g, h1, h2)
  ps.pr1 = [](const Point& p) -> GPR { return {0, {p.x, {p.g[0], p.g[1]}}}; };
  ps.pr2 = [cmp](const Point& p) -> GPR {
    return {0, {p.x, {mul(p.g[0], cmp->t(p.g[1])), p.g[2]}}};
  };
  ps.comp = [](const Point& p) -> GPR {
    return {0, {p.x, {p.g[0], mul(p.g[1], p.g[2])}}};
  };
  P.pairs = {ps};
  P.act_obj = [](const GPR& o, const GroupEl& g) -> GPR {
    return {0, {o.pt.x, {mul(o.pt.g[0], g)}}};
  };
  P.act_mor = [cmp](const GPR& m, const GammaMorphism& gm) -> GPR {
    return {0,
            {m.pt.x,
             {mul(m.pt.g[0], gm.g),
              cmp->alpha(inv(gm.g), mul(m.pt.g[1], gm.h))}}};
  };
  P.proj_obj = [](const GPR& o) { return o.pt.x; };
  return P;
}

/* --------------------- gamma-valued forms --------------------- */

/* A degree-p gamma-valued form: fa (g-valued p-form on objects), fb
   (h-valued p-form on morphisms), fc (h-valued (p+1)-form on objects). */
struct GammaForm {
  int degree = 0;
  std::vector<FormField> fa, fc;  // indexed like obj_pieces
  std::vector<FormField> fb;      // indexed like mor_pieces
};

inline GammaForm gf_zero(const PatchworkGroupoid& P, int degree) {
  GammaForm r;
  r.degree = degree;
  for (auto& pc : P.obj_pieces) {
    r.fa.push_back(zero_form(pc, degree, ValueTag::Algebra(P.cm->G)));
    r.fc.push_back(zero_form(pc, degree + 1, ValueTag::Algebra(P.cm->H)));
  }
  for (auto& pc : P.mor_pieces)
    r.fb.push_back(zero_form(pc, degree, ValueTag::Algebra(P.cm->H)));
  return r;
}

inline GammaForm gf_add(const GammaForm& a, const GammaForm& b) {
  if (a.degree != b.degree) throw KindMismatch("gf_add: degree");
  GammaForm r;
  r.degree = a.degree;
  for (size_t i = 0; i < a.fa.size(); ++i) r.fa.push_back(form_add(a.fa[i], b.fa[i]));
  for (size_t i = 0; i < a.fb.size(); ++i) r.fb.push_back(form_add(a.fb[i], b.fb[i]));
  for (size_t i = 0; i < a.fc.size(); ++i) r.fc.push_back(form_add(a.fc[i], b.fc[i]));
  return r;
}

inline GammaForm gf_scale(double s, const GammaForm& a) {
  GammaForm r;
  r.degree = a.degree;
  for (auto& f : a.fa) r.fa.push_back(form_scale(s, f));
  for (auto& f : a.fb) r.fb.push_back(form_scale(s, f));
  for (auto& f : a.fc) r.fc.push_back(form_scale(s, f));
  return r;
}

inline GammaForm gf_sub(const GammaForm& a, const GammaForm& b) {
  return gf_add(a, gf_scale(-1.0, b));
}

/* s^* of the fa component, as a form on morphism piece j. */
inline FormField source_pullback_fa(const PatchworkGroupoid& P,
                                    const GammaForm& Psi, int j, double h) {
  auto srcf = P.src;
  PointMap f = [srcf, j](const Point& p) { return srcf(j, p); };
  return pullback_form(Psi.fa, P.obj_pieces, f, P.mor_pieces[j], Psi.degree,
                       ValueTag::Algebra(P.cm->G), h);
}
inline FormField target_pullback_fc(const PatchworkGroupoid& P,
                                    const GammaForm& Psi, int j, double h) {
  auto tgtf = P.tgt;
  PointMap f = [tgtf, j](const Point& p) { return tgtf(j, p); };
  return pullback_form(Psi.fc, P.obj_pieces, f, P.mor_pieces[j],
                       Psi.degree + 1, ValueTag::Algebra(P.cm->H), h);
}
inline FormField source_pullback_fc(const PatchworkGroupoid& P,
                                    const GammaForm& Psi, int j, double h) {
  auto srcf = P.src;
  PointMap f = [srcf, j](const Point& p) { return srcf(j, p); };
  return pullback_form(Psi.fc, P.obj_pieces, f, P.mor_pieces[j],
                       Psi.degree + 1, ValueTag::Algebra(P.cm->H), h);
}

/* Covariant derivative D. */
inline GammaForm gf_D(const PatchworkGroupoid& P, const GammaForm& Psi, double h) {
  GammaForm r;
  r.degree = Psi.degree + 1;
  double sgn = (Psi.degree % 2 == 0) ? 1.0 : -1.0;  // (-1)^p
  auto cm = P.cm;
  for (size_t i = 0; i < P.obj_pieces.size(); ++i) {
    FormField tfc = form_map(Psi.fc[i], ValueTag::Algebra(cm->G),
                             [cm](const Point&, const Mat& m) {
                               return cm->t_star({cm->H, m}).m;
                             });
    r.fa.push_back(form_sub(ext_d(Psi.fa[i], h), form_scale(sgn, tfc)));
    r.fc.push_back(ext_d(Psi.fc[i], h));
  }
  for (size_t j = 0; j < P.mor_pieces.size(); ++j) {
    FormField delta_fc = form_sub(target_pullback_fc(P, Psi, (int)j, h),
                                  source_pullback_fc(P, Psi, (int)j, h));
    r.fb.push_back(form_sub(ext_d(Psi.fb[j], h), form_scale(sgn, delta_fc)));
  }
  return r;
}

/* Graded bracket. */
inline GammaForm gf_bracket(const PatchworkGroupoid& P, const GammaForm& Psi,
                            const GammaForm& Phi, double h) {
  auto cm = P.cm;
  int k = Psi.degree, l = Phi.degree;
  double skl = ((k * l) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{kl}
  auto astar = [cm](const Mat& a, const Mat& b) {
    return cm->alpha_star({cm->G, a}, {cm->H, b}).m;
  };
  ValueTag vh = ValueTag::Algebra(cm->H);
  GammaForm r;
  r.degree = k + l;
  for (size_t i = 0; i < P.obj_pieces.size(); ++i) {
    r.fa.push_back(wedge_bracket(Psi.fa[i], Phi.fa[i]));
    FormField c1 = wedge_with(Psi.fa[i], Phi.fc[i], vh, astar);
    FormField c2 = wedge_with(Phi.fa[i], Psi.fc[i], vh, astar);
    r.fc.push_back(form_sub(c1, form_scale(skl, c2)));
  }
  for (size_t j = 0; j < P.mor_pieces.size(); ++j) {
    FormField sfaPsi = source_pullback_fa(P, Psi, (int)j, h);
    FormField sfaPhi = source_pullback_fa(P, Phi, (int)j, h);
    FormField term = wedge_bracket(Psi.fb[j], Phi.fb[j]);
    term = form_add(term, wedge_with(sfaPsi, Phi.fb[j], vh, astar));
    term = form_sub(term, form_scale(skl, wedge_with(sfaPhi, Psi.fb[j], vh, astar)));
    r.fb.push_back(term);
  }
  return r;
}

/* Smooth functor F: P -> Gamma, given by its object and H components. */
struct FunctorToGamma {
  std::function<GroupEl(int, const Point&)> F0;  // on object pieces
  std::function<GroupEl(int, const Point&)> FH;  // on morphism pieces
};

inline GroupEl functor_FG(const std::function<GPR(int, const Point&)>& srcf,
                          const FunctorToGamma& F, int j, const Point& p) {
  GPR s = srcf(j, p);
  return F.F0(s.piece, s.pt);
}

/* Inverse functor: (F^{-1})_0 = F_0^{-1}, (F^{-1})_H = alpha(F_G^{-1}, F_H^{-1}). */
inline FunctorToGamma functor_inverse(const PatchworkGroupoid& P,
                                      const FunctorToGamma& F) {
  FunctorToGamma R;
  auto cm = P.cm;
  R.F0 = [F](int i, const Point& p) { return inv(F.F0(i, p)); };
  auto srcf = P.src;
  R.FH = [F, cm, srcf](int j, const Point& p) {
    GroupEl fg = functor_FG(srcf, F, j, p);
    return cm->alpha(inv(fg), inv(F.FH(j, p)));
  };
  return R;
}

/* Pointwise product: (F.F')_0 = F_0 F'_0, (F.F')_H = F_H alpha(F_G, F'_H). */
inline FunctorToGamma functor_product(const PatchworkGroupoid& P,
                                      const FunctorToGamma& F,
                                      const FunctorToGamma& Fp) {
  FunctorToGamma R;
  auto cm = P.cm;
  auto srcf = P.src;
  R.F0 = [F, Fp](int i, const Point& p) {
    return mul(F.F0(i, p), Fp.F0(i, p));
  };
  R.FH = [F, Fp, cm, srcf](int j, const Point& p) {
    GroupEl fg = functor_FG(srcf, F, j, p);
    return mul(F.FH(j, p), cm->alpha(fg, Fp.FH(j, p)));
  };
  return R;
}

/* Adjoint action of a functor on gamma-valued forms. */
inline GammaForm gf_ad(const PatchworkGroupoid& P, const FunctorToGamma& F,
                       const GammaForm& Psi, double h) {
  auto cm = P.cm;
  GammaForm r;
  r.degree = Psi.degree;
  for (size_t i = 0; i < P.obj_pieces.size(); ++i) {
    auto F0 = F.F0;
    auto fae = Psi.fa[i].eval;
    FormField fa{P.obj_pieces[i], Psi.degree, ValueTag::Algebra(cm->G), nullptr};
    int ii = (int)i;
    fa.eval = [F0, fae, cm, ii](const Point& p, const std::vector<Tangent>& vs) {
      return Ad(F0(ii, p), {cm->G, fae(p, vs)}).m;
    };
    r.fa.push_back(fa);
    auto fce = Psi.fc[i].eval;
    FormField fc{P.obj_pieces[i], Psi.degree + 1, ValueTag::Algebra(cm->H), nullptr};
    fc.eval = [F0, fce, cm, ii](const Point& p, const std::vector<Tangent>& vs) {
      return cm->alpha_g_star(F0(ii, p), {cm->H, fce(p, vs)}).m;
    };
    r.fc.push_back(fc);
  }
  auto srcf = P.src;
  for (size_t j = 0; j < P.mor_pieces.size(); ++j) {
    int jj = (int)j;
    FormField sfa = source_pullback_fa(P, Psi, jj, h);
    auto sfae = sfa.eval;
    auto fbe = Psi.fb[j].eval;
    FormField fb{P.mor_pieces[j], Psi.degree, ValueTag::Algebra(cm->H), nullptr};
    FunctorToGamma Fc = F;
    fb.eval = [fbe, sfae, Fc, cm, srcf, jj](const Point& p,
                                            const std::vector<Tangent>& vs) {
      GroupEl fh = Fc.FH(jj, p);
      GroupEl fg = functor_FG(srcf, Fc, jj, p);
      AlgEl t1 = Ad(fh, cm->alpha_g_star(fg, {cm->H, fbe(p, vs)}));
      AlgEl t2 = cm->tilde_alpha_star(inv(fh), Ad(fg, AlgEl{cm->G, sfae(p, vs)}));
      return Mat(t1.m + t2.m);
    };
    r.fb.push_back(fb);
  }
  return r;
}

/* Maurer-Cartan form on Gamma (exact in group directions). */
inline GammaForm mc_theta(const PatchworkGroupoid& P) {
  auto cm = P.cm;
  GammaForm r;
  r.degree = 1;
  /* fa: theta^G on the object piece(s): value = left-log component. */
  for (size_t i = 0; i < P.obj_pieces.size(); ++i) {
    const ChartPiece& pc = P.obj_pieces[i];
    int kG = pc.nfac() - 1;  // convention: last factor is the G coordinate
    FormField fa{pc, 1, ValueTag::Algebra(cm->G), nullptr};
    fa.eval = [kG](const Point&, const std::vector<Tangent>& vs) {
      return vs[0].vg[kG].m;
    };
    r.fa.push_back(fa);
    r.fc.push_back(zero_form(pc, 2, ValueTag::Algebra(cm->H)));
  }
  for (size_t j = 0; j < P.mor_pieces.size(); ++j) {
    const ChartPiece& pc = P.mor_pieces[j];
    /* convention: morphism factors end with (H, G) */
    int kH = pc.nfac() - 2, kG = pc.nfac() - 1;
    FormField fb{pc, 1, ValueTag::Algebra(cm->H), nullptr};
    fb.eval = [cm, kH, kG](const Point& p, const std::vector<Tangent>& vs) {
      return cm->alpha_g_star(inv(p.g[kG]), vs[0].vg[kH]).m;
    };
    r.fb.push_back(fb);
  }
  return r;
}

/* Pullback of the MC form of Gamma along a functor F: P -> Gamma:
   fa = F_0^* theta, fb = (alpha_{F_G^{-1}})_*(F_H^* theta), fc = 0.
   This is a valid gamma-form on any P; used as a generator of test forms. */
inline GammaForm functor_pullback_theta(const PatchworkGroupoid& P,
                                        const FunctorToGamma& F, double h) {
  auto cm = P.cm;
  GammaForm r;
  r.degree = 1;
  for (size_t i = 0; i < P.obj_pieces.size(); ++i) {
    int ii = (int)i;
    GroupMapField gm{P.obj_pieces[i], cm->G,
                     [F, ii](const Point& p) { return F.F0(ii, p); }};
    r.fa.push_back(maurer_cartan_left(gm, h));
    r.fc.push_back(zero_form(P.obj_pieces[i], 2, ValueTag::Algebra(cm->H)));
  }
  auto srcf = P.src;
  for (size_t j = 0; j < P.mor_pieces.size(); ++j) {
    int jj = (int)j;
    GroupMapField hm{P.mor_pieces[j], cm->H,
                     [F, jj](const Point& p) { return F.FH(jj, p); }};
    FormField th = maurer_cartan_left(hm, h);
    auto the = th.eval;
    FunctorToGamma Fc = F;
    FormField fb{P.mor_pieces[j], 1, ValueTag::Algebra(cm->H), nullptr};
    fb.eval = [the, Fc, cm, srcf, jj](const Point& p,
                                      const std::vector<Tangent>& vs) {
      GroupEl fg = functor_FG(srcf, Fc, jj, p);
      return cm->alpha_g_star(inv(fg), {cm->H, the(p, vs)}).m;
    };
    r.fb.push_back(fb);
  }
  return r;
}

/* Structural validity of a gamma-form:
   Delta_0(fa) = t_*(fb) on morphisms, Delta_1(fb) = 0 on composable pairs. */
inline Report gf_validate(const PatchworkGroupoid& P, const GammaForm& Psi,
                          double h, int samples, uint64_t seed,
                          double threshold) {
  Report rep;
  Rng rng(seed);
  auto cm = P.cm;
  int p = Psi.degree;
  auto& c1 = rep.add("gf:delta-fa", threshold);
  for (int s = 0; s < samples; ++s) {
    GPR m = P.sample_mor(rng);
    const ChartPiece& pc = P.mor_pieces[m.piece];
    std::vector<Tangent> vs;
    for (int i = 0; i < p; ++i) vs.push_back(random_tangent(pc, rng));
    auto tgtf = P.tgt;
    auto srcf = P.src;
    int j = m.piece;
    PointMap ft = [tgtf, j](const Point& q) { return tgtf(j, q); };
    PointMap fs = [srcf, j](const Point& q) { return srcf(j, q); };
    GPR ti, si;
    std::vector<Tangent> wt, ws;
    for (auto& v : vs) {
      wt.push_back(fd_push(ft, pc, P.obj_pieces, m.pt, v, h, &ti));
      ws.push_back(fd_push(fs, pc, P.obj_pieces, m.pt, v, h, &si));
    }
    if (p == 0) { ti = ft(m.pt); si = fs(m.pt); }
    Mat delta = Psi.fa[ti.piece](ti.pt, wt) - Psi.fa[si.piece](si.pt, ws);
    Mat tb = cm->t_star({cm->H, Psi.fb[m.piece](m.pt, vs)}).m;
    rep.record(c1, max_abs(delta - tb));
  }
  auto& c2 = rep.add("gf:delta-fb", threshold);
  for (int s = 0; s < samples; ++s) {
    int q = rng.uniform_int(0, (int)P.pairs.size() - 1);
    auto& ps = P.pairs[q];
    Point pp = random_point(ps.piece, rng, 0.12);
    std::vector<Tangent> vs;
    for (int i = 0; i < p; ++i) vs.push_back(random_tangent(ps.piece, rng));
    GPR i1, i2, ic;
    std::vector<Tangent> w1, w2, wc;
    for (auto& v : vs) {
      w1.push_back(fd_push(ps.pr1, ps.piece, P.mor_pieces, pp, v, h, &i1));
      w2.push_back(fd_push(ps.pr2, ps.piece, P.mor_pieces, pp, v, h, &i2));
      wc.push_back(fd_push(ps.comp, ps.piece, P.mor_pieces, pp, v, h, &ic));
    }
    if (p == 0) { i1 = ps.pr1(pp); i2 = ps.pr2(pp); ic = ps.comp(pp); }
    Mat delta = Psi.fb[i1.piece](i1.pt, w1) - Psi.fb[ic.piece](ic.pt, wc) +
                Psi.fb[i2.piece](i2.pt, w2);
    rep.record(c2, max_abs(delta));
  }
  return rep;
}

/* Evaluate the max difference of two gamma-forms over random samples. */
inline double gf_dist(const PatchworkGroupoid& P, const GammaForm& A,
                      const GammaForm& B, int samples, uint64_t seed) {
  if (A.degree != B.degree) throw KindMismatch("gf_dist degree");
  Rng rng(seed);
  int p = A.degree;
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    GPR o = P.sample_obj(rng);
    const ChartPiece& pc = P.obj_pieces[o.piece];
    std::vector<Tangent> vs, vs1;
    for (int i = 0; i < p; ++i) vs.push_back(random_tangent(pc, rng));
    vs1 = vs;
    vs1.push_back(random_tangent(pc, rng));
    worst = std::max(worst, max_abs(A.fa[o.piece](o.pt, vs) -
                                    B.fa[o.piece](o.pt, vs)));
    worst = std::max(worst, max_abs(A.fc[o.piece](o.pt, vs1) -
                                    B.fc[o.piece](o.pt, vs1)));
    GPR m = P.sample_mor(rng);
    const ChartPiece& mc = P.mor_pieces[m.piece];
    std::vector<Tangent> ws;
    for (int i = 0; i < p; ++i) ws.push_back(random_tangent(mc, rng));
    worst = std::max(worst, max_abs(A.fb[m.piece](m.pt, ws) -
                                    B.fb[m.piece](m.pt, ws)));
  }
  return worst;
}

/* DGLA / adjoint property suite over the built-in groupoid families. */
Report dgla_property_suite(std::shared_ptr<const CrossedModule> cm, double h,
                           int samples, int nforms, uint64_t seed);

}  // namespace hgt

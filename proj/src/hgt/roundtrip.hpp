#pragma once

/* Reconstruction of the total-space groupoid P_(g,a) with its connection
   from a differential cocycle, canonical splittings, the curvature
   cross-check, and extraction back to a cocycle. */

#include "cocycle.hpp"
#include "connection.hpp"

namespace hgt {

/* wrap-aware distance between base points of the same chart family */
inline double base_dist(const std::vector<bool>& wrap, const Vec& x1,
                        const Vec& x2) {
  double w = 0;
  for (int a = 0; a < (int)x1.size(); ++a) {
    double d = std::abs(x1(a) - x2(a));
    if (a < (int)wrap.size() && wrap[a])
      d = std::min({d, std::abs(d - 1.0), std::abs(d + 1.0)});
    w = std::max(w, d);
  }
  return w;
}

struct ReconstructedBundle {
  PatchworkGroupoid P;
  DifferentialCocycle c;  // source data; only g and a are required
  std::vector<std::vector<int>> mor_pairs;   // mor piece index -> (i, j)
  std::map<std::vector<int>, int> mor_index;
  bool canonical = false;
};

/* Objects: disjoint union of U_i x G; morphisms over (i,j): U_ij x H x G with
   s(i,j,x,h,g) = (j,x,g), t(i,j,x,h,g) = (i,x,g_ij(x)^{-1} t(h) g),
   (i,j,x,h2,g2) o (j,k,x,h1,g1) = (i,k,x, a_ijk alpha(g_jk,h2) h1, g1). */
inline ReconstructedBundle reconstruct_groupoid(
    std::shared_ptr<const CrossedModule> cm, const Cover& cover,
    const std::map<std::vector<int>, GroupMapField>& gmap,
    const std::map<std::vector<int>, GroupMapField>& amap,
    int precheck_samples = 6, uint64_t seed = 1) {
  check_bare_cocycle(cm, cover, gmap, amap, precheck_samples, seed);
  ReconstructedBundle B;
  B.canonical = true;
  B.c.cm = cm;
  B.c.cover = cover;
  B.c.g = gmap;
  B.c.a = amap;
  PatchworkGroupoid& P = B.P;
  P.cm = cm;
  GroupTag G = cm->G, H = cm->H;
  auto wrap = cover.base.wrap;

  for (int i = 0; i < cover.size(); ++i)
    P.obj_pieces.push_back(make_piece(cover.boxes[i], wrap, {G}));
  for (auto& t : ordered_tuples(cover, 2)) {
    ChartPiece base = overlap_piece(cover, tuple_support(t));
    B.mor_index[t] = (int)P.mor_pieces.size();
    B.mor_pairs.push_back(t);
    P.mor_pieces.push_back(make_piece(base.box, wrap, {H, G}));
  }

  /* reframed transition data per morphism piece */
  auto gm = std::make_shared<std::vector<GroupMapField>>();
  for (size_t m = 0; m < B.mor_pairs.size(); ++m)
    gm->push_back(reframe(cc_datum(gmap, B.mor_pairs[m], "g"),
                          P.mor_pieces[m], wrap));

  auto pairs = B.mor_pairs;
  auto boxes = cover.boxes;
  auto cmp = cm;
  P.src = [pairs, boxes, wrap](int m, const Point& p) -> GPR {
    int j = pairs[m][1];
    return {j, {into_frame(boxes[j], wrap, p.x), {p.g[1]}}};
  };
  P.tgt = [pairs, boxes, wrap, gm, cmp](int m, const Point& p) -> GPR {
    int i = pairs[m][0];
    GroupEl gv = (*gm)[m](p);
    return {i,
            {into_frame(boxes[i], wrap, p.x),
             {mul(inv(gv), mul(cmp->t(p.g[0]), p.g[1]))}}};
  };
  P.unit = nullptr;  // units need normalized diagonal data; not required here

  auto midx = B.mor_index;
  auto amap2 = amap;
  auto gmap2 = gmap;
  auto morp = P.mor_pieces;
  P.compose = [pairs, midx, amap2, gmap2, morp, wrap, cmp](
                  const GPR& m2, const GPR& m1) -> GPR {
    int i = pairs[m2.piece][0], j = pairs[m2.piece][1];
    int j1 = pairs[m1.piece][0], k = pairs[m1.piece][1];
    if (j != j1) throw NotComposable("reconstructed: chart indices mismatch");
    if (base_dist(wrap, m2.pt.x, m1.pt.x) > 1e-9)
      throw NotComposable("reconstructed: base points differ");
    auto it = midx.find({i, k});
    if (it == midx.end())
      throw NotComposable("reconstructed: no (i,k) morphism piece");
    const ChartPiece& out = morp[it->second];
    Vec x = into_frame(out.box, wrap, m1.pt.x);
    Point px{x, {}};
    GroupEl gjk = reframe(cc_datum(gmap2, {j, k}, "g"), out, wrap)(px);
    /* composability of the group parts: s(m2) = t(m1) */
    GroupEl t1 = mul(inv(gjk), mul(cmp->t(m1.pt.g[0]), m1.pt.g[1]));
    if (group_dist(m2.pt.g[1], t1) > 1e-9)
      throw NotComposable("reconstructed: s(m2) != t(m1)");
    GroupEl av = reframe(cc_datum(amap2, {i, j, k}, "a"), out, wrap)(px);
    GroupEl h = mul(av, mul(cmp->alpha(gjk, m2.pt.g[0]), m1.pt.g[0]));
    return {it->second, {x, {h, m1.pt.g[1]}}};
  };

  /* composable pairs per ordered triple: (x, h1, g1, h2) with
     m1 in (j,k), m2 in (i,j), g2 = g_jk(x)^{-1} t(h1) g1 */
  for (auto& t : ordered_tuples(cover, 3)) {
    int i = t[0], j = t[1], k = t[2];
    ChartPiece base = overlap_piece(cover, tuple_support(t));
    PatchworkGroupoid::PairSpace ps;
    ps.piece = make_piece(base.box, wrap, {H, G, H});
    GroupMapField gjk = reframe(cc_datum(gmap, {j, k}, "g"), ps.piece, wrap);
    GroupMapField aijk = reframe(cc_datum(amap, t, "a"), ps.piece, wrap);
    int mjk = B.mor_index.at({j, k});
    int mij = B.mor_index.at({i, j});
    int mik = B.mor_index.at({i, k});
    Box bjk = P.mor_pieces[mjk].box, bij = P.mor_pieces[mij].box,
        bik = P.mor_pieces[mik].box;
    ps.pr1 = [mjk, bjk, wrap](const Point& p) -> GPR {
      return {mjk, {into_frame(bjk, wrap, p.x), {p.g[0], p.g[1]}}};
    };
    ps.pr2 = [mij, bij, wrap, gjk, cmp](const Point& p) -> GPR {
      GroupEl g2 = mul(inv(gjk(p)), mul(cmp->t(p.g[0]), p.g[1]));
      return {mij, {into_frame(bij, wrap, p.x), {p.g[2], g2}}};
    };
    ps.comp = [mik, bik, wrap, gjk, aijk, cmp](const Point& p) -> GPR {
      GroupEl h = mul(aijk(p), mul(cmp->alpha(gjk(p), p.g[2]), p.g[0]));
      return {mik, {into_frame(bik, wrap, p.x), {h, p.g[1]}}};
    };
    P.pairs.push_back(ps);
  }

  P.act_obj = [](const GPR& o, const GroupEl& g) -> GPR {
    return {o.piece, {o.pt.x, {mul(o.pt.g[0], g)}}};
  };
  P.act_mor = [cmp](const GPR& m, const GammaMorphism& g) -> GPR {
    return {m.piece,
            {m.pt.x,
             {mul(m.pt.g[0], cmp->alpha(m.pt.g[1], g.h)), mul(m.pt.g[1], g.g)}}};
  };
  P.proj_obj = [](const GPR& o) { return o.pt.x; };
  return B;
}

/* The reconstructed connection:
   faO|_(i)   = Ad^{-1}_g(A_i) + g^*theta
   fbO|_(i,j) = (alpha_{g^{-1}})_*( Ad^{-1}_h(phi_ij) + (tilde alpha_h)_*(A_j) + h^*theta )
   fcO|_(i)   = -(alpha_{g^{-1}})_*(B_i) */
inline Connection reconstruct_connection(const DifferentialCocycle& c, double h,
                                         int check_samples = 2,
                                         uint64_t seed = 1,
                                         ReconstructedBundle* out = nullptr) {
  Report val = cc_validate(c, h, check_samples, seed);
  if (!val.all_pass()) throw CocycleInvalid("cc_validate fails");
  ReconstructedBundle B =
      reconstruct_groupoid(c.cm, c.cover, c.g, c.a, check_samples, seed);
  auto cm = c.cm;
  auto wrap = c.cover.base.wrap;
  GammaForm W;
  W.degree = 1;
  for (int i = 0; i < c.cover.size(); ++i) {
    const ChartPiece& pc = B.P.obj_pieces[i];
    auto Ae = c.A[i].eval;
    FormField fa{pc, 1, ValueTag::Algebra(cm->G), nullptr};
    fa.eval = [Ae, cm](const Point& p, const std::vector<Tangent>& vs) -> Mat {
      Mat av = Ae({p.x, {}}, {{vs[0].vx, {}}});
      return Ad(inv(p.g[0]), {cm->G, av}).m + vs[0].vg[0].m;
    };
    W.fa.push_back(fa);
    auto Be = c.B[i].eval;
    FormField fc{pc, 2, ValueTag::Algebra(cm->H), nullptr};
    fc.eval = [Be, cm](const Point& p, const std::vector<Tangent>& vs) -> Mat {
      Mat bv = Be({p.x, {}}, {{vs[0].vx, {}}, {vs[1].vx, {}}});
      return -cm->alpha_g_star(inv(p.g[0]), {cm->H, bv}).m;
    };
    W.fc.push_back(fc);
  }
  for (size_t m = 0; m < B.mor_pairs.size(); ++m) {
    auto t = B.mor_pairs[m];
    const ChartPiece& pc = B.P.mor_pieces[m];
    ChartPiece base = make_piece(pc.box, wrap, {});
    FormField Aj = reframe(c.A[t[1]], base, wrap);
    FormField ph = reframe(cc_datum(c.phi, t, "phi"), base, wrap);
    auto Aje = Aj.eval, phe = ph.eval;
    FormField fb{pc, 1, ValueTag::Algebra(cm->H), nullptr};
    fb.eval = [Aje, phe, cm](const Point& p,
                             const std::vector<Tangent>& vs) -> Mat {
      Point bp{p.x, {}};
      std::vector<Tangent> bv = {{vs[0].vx, {}}};
      Mat inner = Ad(inv(p.g[0]), {cm->H, phe(bp, bv)}).m +
                  cm->tilde_alpha_star(p.g[0], {cm->G, Aje(bp, bv)}).m +
                  vs[0].vg[0].m;
      return cm->alpha_g_star(inv(p.g[1]), {cm->H, inner}).m;
    };
    W.fb.push_back(fb);
  }
  if (out) *out = B;
  return {B.P, W};
}

/* Lemma formulas for curv(Omega) evaluated from the cocycle data, compared
   against the direct conn_curvature displays. */
inline Report curvature_crosscheck(const DifferentialCocycle& c, double h,
                                   int samples = 8, uint64_t seed = 1,
                                   double threshold = 0) {
  if (threshold <= 0) threshold = 10 * tol::fd(h);
  ReconstructedBundle B;
  Connection C = reconstruct_connection(c, h, 2, seed, &B);
  GammaForm curv = conn_curvature(C, h);
  auto cm = c.cm;
  auto wrap = c.cover.base.wrap;
  ValueTag vh = ValueTag::Algebra(cm->H);
  auto astar = [cm](const Mat& x, const Mat& y) {
    return cm->alpha_star({cm->G, x}, {cm->H, y}).m;
  };

  GammaForm lem;
  lem.degree = 2;
  std::vector<FormField> fcur, cur;  // per chart, on bare base pieces
  for (int i = 0; i < c.cover.size(); ++i) {
    fcur.push_back(form_sub(curvature2(c.A[i], h),
                            form_map(c.B[i], ValueTag::Algebra(cm->G),
                                     [cm](const Point&, const Mat& m) {
                                       return cm->t_star({cm->H, m}).m;
                                     })));
    cur.push_back(form_add(ext_d(c.B[i], h),
                           wedge_with(c.A[i], c.B[i], vh, astar)));
    const ChartPiece& pc = B.P.obj_pieces[i];
    auto fe = fcur[i].eval, ce = cur[i].eval;
    FormField fa{pc, 2, ValueTag::Algebra(cm->G), nullptr};
    fa.eval = [fe, cm](const Point& p, const std::vector<Tangent>& vs) -> Mat {
      Mat v = fe({p.x, {}}, {{vs[0].vx, {}}, {vs[1].vx, {}}});
      return Ad(inv(p.g[0]), {cm->G, v}).m;
    };
    lem.fa.push_back(fa);
    FormField fc{pc, 3, vh, nullptr};
    fc.eval = [ce, cm](const Point& p, const std::vector<Tangent>& vs) -> Mat {
      Mat v = ce({p.x, {}},
                 {{vs[0].vx, {}}, {vs[1].vx, {}}, {vs[2].vx, {}}});
      return -cm->alpha_g_star(inv(p.g[0]), {cm->H, v}).m;
    };
    lem.fc.push_back(fc);
  }
  for (size_t m = 0; m < B.mor_pairs.size(); ++m) {
    auto t = B.mor_pairs[m];
    int i = t[0], j = t[1];
    const ChartPiece& pc = B.P.mor_pieces[m];
    ChartPiece base = make_piece(pc.box, wrap, {});
    FormField ph = reframe(cc_datum(c.phi, t, "phi"), base, wrap);
    FormField Aj = reframe(c.A[j], base, wrap);
    FormField Bi = reframe(c.B[i], base, wrap);
    FormField Bj = reframe(c.B[j], base, wrap);
    GroupMapField gij = reframe(cc_datum(c.g, t, "g"), base, wrap);
    /* T_ij = B_j + dphi + 1/2[phi^phi] + alpha_*(A_j^phi) - (alpha_g)_*(B_i) */
    FormField Tfree = form_add(form_add(Bj, ext_d(ph, h)),
                               form_add(form_scale(0.5, wedge_bracket(ph, ph)),
                                        wedge_with(Aj, ph, vh, astar)));
    FormField fcurj = reframe(fcur[j], base, wrap);
    auto Te = Tfree.eval;
    auto Bie = Bi.eval;
    auto ge = gij.eval;
    auto fje = fcurj.eval;
    FormField fb{pc, 2, vh, nullptr};
    fb.eval = [Te, Bie, ge, fje, cm](const Point& p,
                                     const std::vector<Tangent>& vs) -> Mat {
      Point bp{p.x, {}};
      std::vector<Tangent> bv = {{vs[0].vx, {}}, {vs[1].vx, {}}};
      Mat T = Te(bp, bv) -
              cm->alpha_g_star(ge(bp), {cm->H, Bie(bp, bv)}).m;
      Mat inner = Ad(inv(p.g[0]), {cm->H, T}).m +
                  cm->tilde_alpha_star(p.g[0], {cm->G, fje(bp, bv)}).m;
      return cm->alpha_g_star(inv(p.g[1]), {cm->H, inner}).m;
    };
    lem.fb.push_back(fb);
  }

  Report rep;
  auto& cond = rep.add("lem:curvrecon", threshold);
  rep.record(cond, gf_dist(B.P, curv, lem, samples, seed));
  return rep;
}

/* ------------------------- canonical splittings ------------------------- */

struct Splitting {
  std::vector<int> pair;
  ChartPiece domain;                     // overlap box, no factors
  std::function<GPR(const Vec&)> sigma;  // x -> (i,j,x,1,g_ij(x))
  GroupMapField g;                       // the transition function
};

inline std::vector<Splitting> canonical_splittings(const ReconstructedBundle& B) {
  if (!B.canonical) throw NotReconstructed("bundle lacks canonical data");
  auto cm = B.c.cm;
  auto wrap = B.c.cover.base.wrap;
  std::vector<Splitting> out;
  for (size_t m = 0; m < B.mor_pairs.size(); ++m) {
    Splitting s;
    s.pair = B.mor_pairs[m];
    s.domain = make_piece(B.P.mor_pieces[m].box, wrap, {});
    s.g = reframe(cc_datum(B.c.g, s.pair, "g"), s.domain, wrap);
    auto ge = s.g.eval;
    int idx = (int)m;
    GroupTag H = cm->H;
    s.sigma = [ge, idx, H](const Vec& x) -> GPR {
      return {idx, {x, {identity(H), ge({x, {}})}}};
    };
    out.push_back(s);
  }
  return out;
}

/* Splitting axioms and the triple relation
   sigma_ij o R(sigma_jk, id_{g_ij}) =
   R(sigma_ik, (alpha(g_ik^{-1}, a_ijk), g_ik^{-1} g_jk g_ij)). */
inline Report splitting_report(const ReconstructedBundle& B, int samples,
                               uint64_t seed = 1,
                               double threshold = tol::algebraic) {
  auto cm = B.c.cm;
  const Cover& cov = B.c.cover;
  auto wrap = cov.base.wrap;
  std::vector<Splitting> sig = canonical_splittings(B);
  std::map<std::vector<int>, int> sidx;
  for (size_t m = 0; m < sig.size(); ++m) sidx[sig[m].pair] = (int)m;
  Report rep;
  auto& cst = rep.add("split:anchors", threshold);
  auto& ctr = rep.add("split:triple", threshold);

  for (auto& s : sig) {
    Rng rng(tuple_seed(seed, 41, s.pair));
    for (int q = 0; q < samples; ++q) {
      Point p = random_point(s.domain, rng, 0.12);
      GPR mor = s.sigma(p.x);
      GPR tg = B.P.tgt(mor.piece, mor.pt);
      GPR sc = B.P.src(mor.piece, mor.pt);
      /* t(sigma(x)) = (i,x,1);  s(sigma(x)) = R((j,x,1), g_ij(x)) */
      double r = group_dist(tg.pt.g[0], identity(cm->G));
      r = std::max(r, base_dist(wrap, tg.pt.x, into_frame(cov.boxes[s.pair[0]],
                                                          wrap, p.x)));
      GPR rj = B.P.act_obj(
          GPR{s.pair[1], {into_frame(cov.boxes[s.pair[1]], wrap, p.x),
                          {identity(cm->G)}}},
          s.g(p));
      r = std::max(r, group_dist(sc.pt.g[0], rj.pt.g[0]));
      r = std::max(r, base_dist(wrap, sc.pt.x, rj.pt.x));
      rep.record(cst, r);
    }
  }

  for (auto& t : ordered_tuples(cov, 3)) {
    int i = t[0], j = t[1], k = t[2];
    ChartPiece pc = overlap_piece(cov, tuple_support(t));
    const Splitting& sij = sig[sidx.at({i, j})];
    const Splitting& sjk = sig[sidx.at({j, k})];
    const Splitting& sik = sig[sidx.at({i, k})];
    GroupMapField aijk = reframe(cc_datum(B.c.a, t, "a"), pc, wrap);
    Rng rng(tuple_seed(seed, 43, t));
    for (int q = 0; q < samples; ++q) {
      Point p = random_point(pc, rng, 0.12);
      GroupEl gij = sij.g({into_frame(sij.domain.box, wrap, p.x), {}});
      GroupEl gjk = sjk.g({into_frame(sjk.domain.box, wrap, p.x), {}});
      GroupEl gik = sik.g({into_frame(sik.domain.box, wrap, p.x), {}});
      GPR lhs = B.P.compose(
          sij.sigma(into_frame(sij.domain.box, wrap, p.x)),
          B.P.act_mor(sjk.sigma(into_frame(sjk.domain.box, wrap, p.x)),
                      {identity(cm->H), gij}));
      GammaMorphism gm{cm->alpha(inv(gik), aijk(p)),
                       mul(inv(gik), mul(gjk, gij))};
      GPR rhs = B.P.act_mor(sik.sigma(into_frame(sik.domain.box, wrap, p.x)),
                            gm);
      double r = lhs.piece == rhs.piece ? 0.0 : 1.0;
      r = std::max(r, base_dist(wrap, lhs.pt.x, rhs.pt.x));
      r = std::max(r, group_dist(lhs.pt.g[0], rhs.pt.g[0]));
      r = std::max(r, group_dist(lhs.pt.g[1], rhs.pt.g[1]));
      rep.record(ctr, r);
    }
  }
  return rep;
}

/* ----------------------------- extraction ----------------------------- */

/* A_i := s_i^*faO, B_i := -s_i^*fcO, phi_ij := (alpha_{g_ij})_*(sigma_ij^*fbO),
   g from the splitting transitions, a by solving the triple relation. */
inline DifferentialCocycle extract_cocycle(const ReconstructedBundle& B,
                                           const GammaForm& W, double h) {
  if (!B.canonical) throw NotReconstructed("bundle lacks canonical data");
  auto cm = B.c.cm;
  const Cover& cov = B.c.cover;
  auto wrap = cov.base.wrap;
  DifferentialCocycle r;
  r.cm = cm;
  r.cover = cov;
  r.generalized = B.c.generalized;
  GroupTag G = cm->G, H = cm->H;

  for (int i = 0; i < cov.size(); ++i) {
    ChartPiece pc = make_piece(cov.boxes[i], wrap, {});
    auto fae = W.fa[i].eval, fce = W.fc[i].eval;
    FormField A{pc, 1, ValueTag::Algebra(G), nullptr};
    A.eval = [fae, G](const Point& p, const std::vector<Tangent>& vs) -> Mat {
      return fae({p.x, {identity(G)}}, {{vs[0].vx, {zero_alg(G)}}});
    };
    r.A.push_back(A);
    FormField Bf{pc, 2, ValueTag::Algebra(H), nullptr};
    Bf.eval = [fce, G](const Point& p, const std::vector<Tangent>& vs) -> Mat {
      return -fce({p.x, {identity(G)}},
                  {{vs[0].vx, {zero_alg(G)}}, {vs[1].vx, {zero_alg(G)}}});
    };
    r.B.push_back(Bf);
  }

  std::vector<Splitting> sig = canonical_splittings(B);
  std::map<std::vector<int>, int> sidx;
  for (size_t m = 0; m < sig.size(); ++m) sidx[sig[m].pair] = (int)m;

  for (size_t m = 0; m < B.mor_pairs.size(); ++m) {
    auto t = B.mor_pairs[m];
    const Splitting& s = sig[m];
    r.g[t] = s.g;
    /* sigma^*fb: push a base tangent through sigma; the G-leg is the
       left-logarithmic derivative of g_ij */
    FormField gtheta = maurer_cartan_left(s.g, h);
    auto fbe = W.fb[m].eval;
    auto ge = s.g.eval;
    auto the = gtheta.eval;
    FormField ph{s.domain, 1, ValueTag::Algebra(H), nullptr};
    ph.eval = [fbe, ge, the, cm, H](const Point& p,
                                    const std::vector<Tangent>& vs) -> Mat {
      GroupEl gv = ge(p);
      AlgEl dg{cm->G, the(p, vs)};
      Mat pulled =
          fbe({p.x, {identity(H), gv}}, {{vs[0].vx, {zero_alg(H), dg}}});
      return cm->alpha_g_star(gv, {cm->H, pulled}).m;
    };
    r.phi[t] = ph;
  }

  for (auto& t : ordered_tuples(cov, 3)) {
    int i = t[0], j = t[1], k = t[2];
    ChartPiece pc = overlap_piece(cov, tuple_support(t));
    const Splitting& sij = sig[sidx.at({i, j})];
    const Splitting& sjk = sig[sidx.at({j, k})];
    const Splitting& sik = sig[sidx.at({i, k})];
    auto P = B.P;
    auto wr = wrap;
    GroupMapField a{pc, H, nullptr};
    a.eval = [P, sij, sjk, sik, wr, cm](const Point& p) -> GroupEl {
      GroupEl gij = sij.g({into_frame(sij.domain.box, wr, p.x), {}});
      GPR lhs = P.compose(
          sij.sigma(into_frame(sij.domain.box, wr, p.x)),
          P.act_mor(sjk.sigma(into_frame(sjk.domain.box, wr, p.x)),
                    {identity(cm->H), gij}));
      /* lhs = (i,k,x, a_ijk, g_jk g_ij); verify it is R(sigma_ik, -) */
      GroupEl a = lhs.pt.g[0];
      GroupEl gik = sik.g({into_frame(sik.domain.box, wr, p.x), {}});
      GPR rhs = P.act_mor(sik.sigma(into_frame(sik.domain.box, wr, p.x)),
                          {cm->alpha(inv(gik), a),
                           mul(inv(gik), lhs.pt.g[1])});
      if (group_dist(lhs.pt.g[0], rhs.pt.g[0]) > 1e-9 ||
          group_dist(lhs.pt.g[1], rhs.pt.g[1]) > 1e-9)
        throw NotReconstructed("splitting comparison does not close");
      return a;
    };
    r.a[t] = a;
  }
  return r;
}

}  // namespace hgt

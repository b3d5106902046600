#pragma once

/* Connections on principal patchwork 2-bundles: the defining equivariance
   conditions, curvature, Bianchi identity and R-invariance, trivial-bundle
   connections Omega_Psi, and the action-groupoid example. */

#include "groupoid.hpp"

namespace hgt {

struct Connection {
  PatchworkGroupoid bundle;
  GammaForm omega;  // degree 1
};

/* Max |form| over random samples, componentwise. */
inline double gf_max(const PatchworkGroupoid& P, const GammaForm& F,
                     int samples, uint64_t seed) {
  return gf_dist(P, F, gf_zero(P, F.degree), samples, seed);
}

namespace detail {

/* Product chart Obj x G with the action map and the two projections. */
struct ObjAction {
  ChartPiece prod;
  PointMap act;
  int nf;  // factor count of the object piece
};
inline ObjAction obj_action(const PatchworkGroupoid& P, int i) {
  ObjAction r;
  r.prod = P.obj_pieces[i];
  r.nf = r.prod.nfac();
  r.prod.factors.push_back(P.cm->G);
  auto actf = P.act_obj;
  int nf = r.nf;
  r.act = [actf, i, nf](const Point& p) -> GPR {
    Point op{p.x, std::vector<GroupEl>(p.g.begin(), p.g.begin() + nf)};
    return actf({i, op}, p.g[nf]);
  };
  return r;
}

/* Product chart Mor x (H x G) with the action map. */
struct MorAction {
  ChartPiece prod;
  PointMap act;
  int nf;
};
inline MorAction mor_action(const PatchworkGroupoid& P, int j) {
  MorAction r;
  r.prod = P.mor_pieces[j];
  r.nf = r.prod.nfac();
  r.prod.factors.push_back(P.cm->H);
  r.prod.factors.push_back(P.cm->G);
  auto actf = P.act_mor;
  int nf = r.nf;
  r.act = [actf, j, nf](const Point& p) -> GPR {
    Point mp{p.x, std::vector<GroupEl>(p.g.begin(), p.g.begin() + nf)};
    return actf({j, mp}, {p.g[nf], p.g[nf + 1]});
  };
  return r;
}

/* Drop the trailing k factors of a product tangent / point. */
inline Tangent drop_tail(const Tangent& v, int k) {
  Tangent w = v;
  w.vg.resize(w.vg.size() - k);
  return w;
}
inline Point drop_tail(const Point& p, int k) {
  Point q = p;
  q.g.resize(q.g.size() - k);
  return q;
}

}  // namespace detail

/* Residuals of the equivariance conditions for a gamma-form W of degree p
   under the Gamma-action of P.  with_theta adds the Maurer-Cartan terms of
   the connection axioms (only meaningful for p = 1); without them this is
   the R-invariance shape satisfied by curvatures. */
inline void equivariance_check(const PatchworkGroupoid& P, const GammaForm& W,
                               bool with_theta, double h, int samples,
                               uint64_t seed, Report& rep,
                               const std::string& la, const std::string& lb,
                               const std::string& lc, double threshold) {
  if (!P.act_obj || !P.act_mor)
    throw MissingAction("equivariance_check: bundle has no Gamma-action");
  auto cm = P.cm;
  Rng rng(seed);
  int p = W.degree;
  auto& ca = rep.add(la, threshold);
  auto& cc = rep.add(lc, threshold);
  for (int s = 0; s < samples; ++s) {
    int i = rng.uniform_int(0, (int)P.obj_pieces.size() - 1);
    auto oa = detail::obj_action(P, i);
    Point pp = random_point(oa.prod, rng, 0.12);
    GroupEl g0 = pp.g[oa.nf];
    Point op = detail::drop_tail(pp, 1);
    /* condition (a): p tangents */
    {
      std::vector<Tangent> vs, wact, w0;
      GPR img;
      for (int q = 0; q < p; ++q) {
        vs.push_back(random_tangent(oa.prod, rng));
        wact.push_back(fd_push(oa.act, oa.prod, P.obj_pieces, pp, vs[q], h, &img));
        w0.push_back(detail::drop_tail(vs[q], 1));
      }
      if (p == 0) img = oa.act(pp);
      Mat lhs = W.fa[img.piece](img.pt, wact);
      Mat rhs = Ad(inv(g0), {cm->G, W.fa[i](op, w0)}).m;
      if (with_theta && p == 1) rhs += vs[0].vg[oa.nf].m;
      rep.record(ca, max_abs(lhs - rhs));
    }
    /* condition (c): p+1 tangents */
    {
      std::vector<Tangent> vs, wact, w0;
      GPR img;
      for (int q = 0; q < p + 1; ++q) {
        vs.push_back(random_tangent(oa.prod, rng));
        wact.push_back(fd_push(oa.act, oa.prod, P.obj_pieces, pp, vs[q], h, &img));
        w0.push_back(detail::drop_tail(vs[q], 1));
      }
      Mat lhs = W.fc[img.piece](img.pt, wact);
      Mat rhs = cm->alpha_g_star(inv(g0), {cm->H, W.fc[i](op, w0)}).m;
      rep.record(cc, max_abs(lhs - rhs));
    }
  }
  auto& cb = rep.add(lb, threshold);
  auto srcf = P.src;
  for (int s = 0; s < samples; ++s) {
    int j = rng.uniform_int(0, (int)P.mor_pieces.size() - 1);
    auto ma = detail::mor_action(P, j);
    Point pp = random_point(ma.prod, rng, 0.12);
    GroupEl gh = pp.g[ma.nf], gg = pp.g[ma.nf + 1];
    Point mp = detail::drop_tail(pp, 2);
    PointMap p1src = [srcf, j](const Point& q) {
      return srcf(j, detail::drop_tail(q, 2));
    };
    std::vector<Tangent> vs, wact, w1, ws;
    GPR img;
    GPR si = P.src(j, mp);
    for (int q = 0; q < p; ++q) {
      vs.push_back(random_tangent(ma.prod, rng));
      wact.push_back(fd_push(ma.act, ma.prod, P.mor_pieces, pp, vs[q], h, &img));
      w1.push_back(detail::drop_tail(vs[q], 2));
      ws.push_back(fd_push(p1src, ma.prod, P.obj_pieces, pp, vs[q], h, &si));
    }
    if (p == 0) img = ma.act(pp);
    Mat lhs = W.fb[img.piece](img.pt, wact);
    Mat inner = Ad(inv(gh), {cm->H, W.fb[j](mp, w1)}).m +
                cm->tilde_alpha_star(gh, {cm->G, W.fa[si.piece](si.pt, ws)}).m;
    if (with_theta && p == 1) inner += vs[0].vg[ma.nf].m;
    Mat rhs = cm->alpha_g_star(inv(gg), {cm->H, inner}).m;
    rep.record(cb, max_abs(lhs - rhs));
  }
}

/* The three defining conditions of a connection. */
inline Report conn_validate(const Connection& C, int samples, double h,
                            uint64_t seed = 1, double threshold = 0) {
  if (threshold <= 0) threshold = 10 * tol::fd(h);
  Report rep;
  equivariance_check(C.bundle, C.omega, true, h, samples, seed, rep,
                     "eq:conform:a", "eq:conform:b", "eq:conform:c",
                     threshold);
  return rep;
}

/* Curvature, assembled from the componentwise displays. */
inline GammaForm conn_curvature(const Connection& C, double h) {
  const PatchworkGroupoid& P = C.bundle;
  auto cm = P.cm;
  const GammaForm& W = C.omega;
  auto astar = [cm](const Mat& a, const Mat& b) {
    return cm->alpha_star({cm->G, a}, {cm->H, b}).m;
  };
  ValueTag vh = ValueTag::Algebra(cm->H);
  GammaForm r;
  r.degree = 2;
  for (size_t i = 0; i < P.obj_pieces.size(); ++i) {
    FormField tfc = form_map(W.fc[i], ValueTag::Algebra(cm->G),
                             [cm](const Point&, const Mat& m) {
                               return cm->t_star({cm->H, m}).m;
                             });
    r.fa.push_back(form_add(
        form_add(ext_d(W.fa[i], h), form_scale(0.5, wedge_bracket(W.fa[i], W.fa[i]))),
        tfc));
    r.fc.push_back(form_add(ext_d(W.fc[i], h), wedge_with(W.fa[i], W.fc[i], vh, astar)));
  }
  for (size_t j = 0; j < P.mor_pieces.size(); ++j) {
    FormField delta_fc = form_sub(target_pullback_fc(P, W, (int)j, h),
                                  source_pullback_fc(P, W, (int)j, h));
    FormField sfa = source_pullback_fa(P, W, (int)j, h);
    FormField term = form_add(delta_fc, ext_d(W.fb[j], h));
    term = form_add(term, form_scale(0.5, wedge_bracket(W.fb[j], W.fb[j])));
    term = form_add(term, wedge_with(sfa, W.fb[j], vh, astar));
    r.fb.push_back(term);
  }
  return r;
}

struct CurvatureReport {
  double fa_max = 0, fb_max = 0, fc_max = 0;
  double flat_threshold = 0;
  bool flat = false, fake_flat = false;
  int regular = -1;  // 1 = verified via a splitting, 0 = refuted, -1 = undetermined
};

inline CurvatureReport conn_curvature_report(const Connection& C,
                                             const GammaForm& curv, double h,
                                             int samples, uint64_t seed) {
  const PatchworkGroupoid& P = C.bundle;
  CurvatureReport r;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    GPR o = P.sample_obj(rng);
    const ChartPiece& pc = P.obj_pieces[o.piece];
    std::vector<Tangent> v2 = {random_tangent(pc, rng), random_tangent(pc, rng)};
    std::vector<Tangent> v3 = v2;
    v3.push_back(random_tangent(pc, rng));
    r.fa_max = std::max(r.fa_max, max_abs(curv.fa[o.piece](o.pt, v2)));
    r.fc_max = std::max(r.fc_max, max_abs(curv.fc[o.piece](o.pt, v3)));
    GPR m = P.sample_mor(rng);
    const ChartPiece& mpc = P.mor_pieces[m.piece];
    std::vector<Tangent> w2 = {random_tangent(mpc, rng), random_tangent(mpc, rng)};
    r.fb_max = std::max(r.fb_max, max_abs(curv.fb[m.piece](m.pt, w2)));
  }
  r.flat_threshold = 10 * tol::fd(h);
  r.fake_flat = r.fa_max <= r.flat_threshold;
  r.flat = r.fake_flat && r.fb_max <= r.flat_threshold &&
           r.fc_max <= r.flat_threshold;
  return r;
}

/* Bianchi identity D curv = [curv ^ Omega] and R-invariance of the
   curvature (equivariance shape without the Maurer-Cartan terms). */
inline Report bianchi_and_invariance(const Connection& C, double h,
                                     int samples, uint64_t seed,
                                     double threshold) {
  const PatchworkGroupoid& P = C.bundle;
  Report rep;
  GammaForm curv = conn_curvature(C, h);
  GammaForm res = gf_sub(gf_D(P, curv, h), gf_bracket(P, curv, C.omega, h));
  auto& cb = rep.add("bianchi", threshold);
  rep.record(cb, gf_max(P, res, samples, seed));
  equivariance_check(P, curv, false, h, samples, seed + 1, rep, "rinv:a",
                     "rinv:b", "rinv:c", threshold);
  return rep;
}

/* Omega_Psi on the trivial bundle over one base chart.  Psi is given by its
   object components: A (degree-1 g-valued) and fcPsi (degree-2 h-valued),
   both on the bare base chart. */
inline Connection trivial_connection(std::shared_ptr<const CrossedModule> cm,
                                     const Box& base,
                                     const std::vector<bool>& wrap,
                                     const FormField& A, const FormField& fcPsi) {
  Connection C;
  C.bundle = trivial_bundle(cm, base, wrap);
  const PatchworkGroupoid& P = C.bundle;
  GammaForm W;
  W.degree = 1;
  auto Ae = A.eval, Ce = fcPsi.eval;
  auto base_args = [](const Point& p, const std::vector<Tangent>& vs) {
    Point q{p.x, {}};
    std::vector<Tangent> ws;
    for (auto& v : vs) ws.push_back({v.vx, {}});
    return std::make_pair(q, ws);
  };
  FormField fa{P.obj_pieces[0], 1, ValueTag::Algebra(cm->G), nullptr};
  fa.eval = [Ae, cm, base_args](const Point& p,
                                const std::vector<Tangent>& vs) -> Mat {
    auto [q, ws] = base_args(p, vs);
    return Ad(inv(p.g[0]), {cm->G, Ae(q, ws)}).m + vs[0].vg[0].m;
  };
  FormField fc{P.obj_pieces[0], 2, ValueTag::Algebra(cm->H), nullptr};
  fc.eval = [Ce, cm, base_args](const Point& p,
                                const std::vector<Tangent>& vs) -> Mat {
    auto [q, ws] = base_args(p, vs);
    return cm->alpha_g_star(inv(p.g[0]), {cm->H, Ce(q, ws)}).m;
  };
  FormField fb{P.mor_pieces[0], 1, ValueTag::Algebra(cm->H), nullptr};
  fb.eval = [Ae, cm, base_args](const Point& p,
                                const std::vector<Tangent>& vs) -> Mat {
    auto [q, ws] = base_args(p, vs);
    Mat inner = cm->tilde_alpha_star(p.g[0], {cm->G, Ae(q, ws)}).m +
                vs[0].vg[0].m;
    return cm->alpha_g_star(inv(p.g[1]), {cm->H, inner}).m;
  };
  W.fa = {fa};
  W.fb = {fb};
  W.fc = {fc};
  C.omega = W;
  return C;
}

/* Inverse of trivial_connection: restrict along s(x) = (x, 1). */
inline std::pair<FormField, FormField> trivial_connection_data(const Connection& C) {
  const PatchworkGroupoid& P = C.bundle;
  auto cm = P.cm;
  const ChartPiece& opc = P.obj_pieces[0];
  ChartPiece basep = make_piece(opc.box, opc.wrap, {});
  GroupTag G = cm->G;
  auto lift = [G](const Point& p, const std::vector<Tangent>& vs) {
    Point q{p.x, {identity(G)}};
    std::vector<Tangent> ws;
    for (auto& v : vs) ws.push_back({v.vx, {zero_alg(G)}});
    return std::make_pair(q, ws);
  };
  FormField A{basep, 1, ValueTag::Algebra(cm->G), nullptr};
  auto fae = C.omega.fa[0].eval;
  A.eval = [fae, lift](const Point& p, const std::vector<Tangent>& vs) -> Mat {
    auto [q, ws] = lift(p, vs);
    return fae(q, ws);
  };
  FormField Cf{basep, 2, ValueTag::Algebra(cm->H), nullptr};
  auto fce = C.omega.fc[0].eval;
  Cf.eval = [fce, lift](const Point& p, const std::vector<Tangent>& vs) -> Mat {
    auto [q, ws] = lift(p, vs);
    return fce(q, ws);
  };
  return {A, Cf};
}

/* sigma^* fb(curv) for the global splitting sigma((x,g1),(x,g2)) = (x,1,g1)
   of the trivial bundle ("every connection on the trivial bundle is
   regular"). */
inline Report trivial_regularity_check(const Connection& C, double h,
                                       int samples, uint64_t seed,
                                       double threshold) {
  const PatchworkGroupoid& P = C.bundle;
  auto cm = P.cm;
  GammaForm curv = conn_curvature(C, h);
  const ChartPiece& opc = P.obj_pieces[0];
  ChartPiece dom = make_piece(opc.box, opc.wrap, {cm->G, cm->G});
  GroupTag H = cm->H;
  PointMap sig = [H](const Point& p) -> GPR {
    return {0, {p.x, {identity(H), p.g[0]}}};
  };
  FormField pulled = pullback_form(curv.fb, P.mor_pieces, sig, dom, 2,
                                   ValueTag::Algebra(cm->H), h);
  Report rep;
  auto& c = rep.add("regular:sigma-fb", threshold);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Point p = random_point(dom, rng, 0.12);
    std::vector<Tangent> vs = {random_tangent(dom, rng), random_tangent(dom, rng)};
    rep.record(c, max_abs(pulled(p, vs)));
  }
  return rep;
}

/* Connection on the action groupoid of P = M x G from an ordinary
   connection 1-form omega on M. */
inline Connection action_groupoid_bundle(std::shared_ptr<const CrossedModule> cm,
                                         const Box& base,
                                         const std::vector<bool>& wrap,
                                         const FormField& omegaM) {
  Connection C;
  C.bundle = action_groupoid(cm, base, wrap);
  const PatchworkGroupoid& P = C.bundle;
  auto we = omegaM.eval;
  auto base_args = [](const Point& p, const std::vector<Tangent>& vs) {
    Point q{p.x, {}};
    std::vector<Tangent> ws;
    for (auto& v : vs) ws.push_back({v.vx, {}});
    return std::make_pair(q, ws);
  };
  GammaForm W;
  W.degree = 1;
  FormField fa{P.obj_pieces[0], 1, ValueTag::Algebra(cm->G), nullptr};
  fa.eval = [we, cm, base_args](const Point& p,
                                const std::vector<Tangent>& vs) -> Mat {
    auto [q, ws] = base_args(p, vs);
    return Ad(inv(p.g[0]), {cm->G, we(q, ws)}).m + vs[0].vg[0].m;
  };
  FormField fb{P.mor_pieces[0], 1, ValueTag::Algebra(cm->H), nullptr};
  fb.eval = [we, cm, base_args](const Point& p,
                                const std::vector<Tangent>& vs) -> Mat {
    auto [q, ws] = base_args(p, vs);
    Mat omP = Ad(inv(p.g[0]), {cm->G, we(q, ws)}).m + vs[0].vg[0].m;
    return cm->tilde_alpha_star(p.g[1], {cm->G, omP}).m + vs[0].vg[1].m;
  };
  W.fa = {fa};
  W.fb = {fb};
  W.fc = {zero_form(P.obj_pieces[0], 2, ValueTag::Algebra(cm->H))};
  C.omega = W;
  return C;
}

}  // namespace hgt

#pragma once

/* Seeded random analytic generators: scalar/group closures on the base,
   algebra-valued forms, the canonical functor family on built-in groupoids,
   and structurally valid random gamma-forms. */

#include "groupoid.hpp"

#include <algorithm>

namespace hgt {

/* ---- random smooth scalar closures (periodic-capable) ---- */

struct ScalarClosure {
  double c0;
  std::vector<double> amp, ph;
  std::vector<int> freq, axis;
  double operator()(const Vec& x) const {
    double v = c0;
    for (size_t i = 0; i < amp.size(); ++i)
      v += amp[i] * std::sin(2 * M_PI * freq[i] * x(axis[i]) + ph[i]);
    return v;
  }
};

inline ScalarClosure random_scalar_closure(int dim, Rng& rng, double scale) {
  ScalarClosure s;
  s.c0 = rng.uniform(-scale, scale);
  int terms = dim == 0 ? 0 : 2;
  for (int i = 0; i < terms; ++i) {
    s.amp.push_back(rng.uniform(-scale, scale));
    s.ph.push_back(rng.uniform(0, 2 * M_PI));
    s.freq.push_back(rng.uniform_int(1, 2));
    s.axis.push_back(rng.uniform_int(0, dim - 1));
  }
  return s;
}

/* Random smooth group-valued map on the base: exp(f1 E1) exp(f2 E2). */
inline std::function<GroupEl(const Vec&)> random_group_closure(GroupTag t,
                                                               int dim,
                                                               Rng& rng,
                                                               double scl) {
  auto f1 = random_scalar_closure(dim, rng, scl);
  auto f2 = random_scalar_closure(dim, rng, scl);
  AlgEl E1 = random_alg(t, rng), E2 = random_alg(t, rng);
  return [f1, f2, E1, E2](const Vec& x) {
    return mul(grp_exp(scale(f1(x), E1)), grp_exp(scale(f2(x), E2)));
  };
}

/* Random algebra-valued p-form depending on base and group coordinates. */
inline FormField random_form(const ChartPiece& pc, int degree, GroupTag alg,
                             Rng& rng, double scl = 1.0) {
  /* sum of terms: f(x) * Re tr(g_k) modulation * E * (linear in tangents) */
  struct Term {
    ScalarClosure f;
    int gfac;  // modulating group factor or -1
    AlgEl E;
    std::vector<int> slot_axis;   // per tangent: base axis or ~group coords
    std::vector<int> slot_kind;   // 0 = base axis, 1 = group coord
    std::vector<int> slot_fac, slot_coord;
  };
  bool base_ok = pc.dim() > 0;
  bool grp_ok = false;
  for (auto f : pc.factors)
    if (algebra_dim(f) > 0) grp_ok = true;
  if (degree > 0 && !base_ok && !grp_ok)
    return zero_form(pc, degree, ValueTag::Algebra(alg));
  std::vector<Term> terms;
  int nterms = 2;
  for (int t = 0; t < nterms; ++t) {
    Term tm;
    tm.f = random_scalar_closure(pc.dim(), rng, scl);
    tm.gfac = pc.nfac() > 0 ? rng.uniform_int(-1, pc.nfac() - 1) : -1;
    tm.E = random_alg(alg, rng, scl);
    for (int s = 0; s < degree; ++s) {
      int kind = (base_ok && grp_ok) ? rng.uniform_int(0, 1) : (base_ok ? 0 : 1);
      tm.slot_kind.push_back(kind);
      if (kind == 0) {
        tm.slot_axis.push_back(rng.uniform_int(0, pc.dim() - 1));
        tm.slot_fac.push_back(0);
        tm.slot_coord.push_back(0);
      } else {
        int fac;
        do { fac = rng.uniform_int(0, pc.nfac() - 1); }
        while (algebra_dim(pc.factors[fac]) == 0);
        tm.slot_axis.push_back(0);
        tm.slot_fac.push_back(fac);
        tm.slot_coord.push_back(rng.uniform_int(0, algebra_dim(pc.factors[fac]) - 1));
      }
    }
    terms.push_back(tm);
  }
  FormField r{pc, degree, ValueTag::Algebra(alg), nullptr};
  int n = group_mat_dim(alg);
  r.eval = [terms, degree, n](const Point& p, const std::vector<Tangent>& vs) {
    Mat acc = Mat::Zero(n, n);
    /* antisymmetrize over tangent slots to make a genuine form */
    std::vector<int> perm(degree);
    for (int i = 0; i < degree; ++i) perm[i] = i;
    auto coeff = [&](const Term& tm, const Tangent& v, int s) -> double {
      if (tm.slot_kind[s] == 0) return v.vx(tm.slot_axis[s]);
      return algebra_coords(v.vg[tm.slot_fac[s]])(tm.slot_coord[s]);
    };
    do {
      int sign = 1;
      for (int i = 0; i < degree; ++i)
        for (int j = i + 1; j < degree; ++j)
          if (perm[i] > perm[j]) sign = -sign;
      for (auto& tm : terms) {
        double c = tm.f(p.x) * sign;
        if (tm.gfac >= 0) c *= std::real(p.g[tm.gfac].m.trace());
        for (int s = 0; s < degree; ++s) c *= coeff(tm, vs[perm[s]], s);
        acc += c * tm.E.m;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
  };
  return r;
}

/* The canonical functor family F_c on a built-in groupoid (c: base -> G):
   Gamma/trivial bundle: F0 = c(x).g, FH = alpha(c(x), h);
   action groupoid:      F0 = c(x).p_g, FH = alpha(c(x).p_g, h). */
enum class FamilyKind { Gamma, Trivial, Action };

inline FunctorToGamma family_functor(std::shared_ptr<const CrossedModule> cm,
                                     FamilyKind kind,
                                     std::function<GroupEl(const Vec&)> c) {
  FunctorToGamma F;
  if (kind == FamilyKind::Action) {
    F.F0 = [c](int, const Point& p) { return mul(c(p.x), p.g[0]); };
    F.FH = [c, cm](int, const Point& p) {
      return cm->alpha(mul(c(p.x), p.g[0]), p.g[1]);
    };
  } else {
    /* object G-coordinate is the last factor, morphism layout (.., H, G) */
    F.F0 = [c](int, const Point& p) { return mul(c(p.x), p.g.back()); };
    F.FH = [c, cm](int, const Point& p) {
      return cm->alpha(c(p.x), p.g[p.g.size() - 2]);
    };
  }
  return F;
}

/* Random valid gamma-form of the given degree on a built-in family. */
inline GammaForm random_gamma_form(const PatchworkGroupoid& P, FamilyKind kind,
                                   int degree, Rng& rng, double h) {
  auto cm = P.cm;
  GammaForm r = gf_zero(P, degree);
  if (degree == 1) {
    auto c = random_group_closure(cm->G, P.obj_pieces[0].dim(), rng, 0.8);
    GammaForm th = functor_pullback_theta(P, family_functor(cm, kind, c), h);
    r = gf_add(r, gf_scale(rng.uniform(0.3, 1.0), th));
  }
  /* base-pullback fa part (vanishes on d=0 pieces) */
  if (P.obj_pieces[0].dim() > 0) {
    ChartPiece base_pc = make_piece(P.obj_pieces[0].box, P.obj_pieces[0].wrap, {});
    FormField beta = random_form(base_pc, degree, cm->G, rng, 0.7);
    auto be = beta.eval;
    for (size_t i = 0; i < P.obj_pieces.size(); ++i) {
      FormField fa{P.obj_pieces[i], degree, ValueTag::Algebra(cm->G), nullptr};
      fa.eval = [be](const Point& p, const std::vector<Tangent>& vs) {
        Point q;
        q.x = p.x;
        std::vector<Tangent> ws;
        for (auto& v : vs) ws.push_back({v.vx, {}});
        return be(q, ws);
      };
      r.fa[i] = form_add(r.fa[i], fa);
    }
  }
  /* free fc part */
  for (size_t i = 0; i < P.obj_pieces.size(); ++i)
    r.fc[i] = form_add(r.fc[i],
                       random_form(P.obj_pieces[i], degree + 1, cm->H, rng, 0.7));
  return r;
}


}  // namespace hgt

#pragma once

/* Canonical example cocycles and seeded random cocycle/equivalence data. */

#include "cocycle.hpp"
#include "generators.hpp"

namespace hgt {

/* --- covers on the circle / torus --- */

inline Cover circle_cover(const std::vector<double>& lo,
                          const std::vector<double>& len) {
  Cover cov;
  cov.base = {1, {true}};
  for (size_t i = 0; i < lo.size(); ++i) {
    Box b;
    b.lo = Vec::Constant(1, lo[i]);
    b.hi = Vec::Constant(1, lo[i] + len[i]);
    cov.boxes.push_back(b);
  }
  check_cover_boxes(cov);
  return cov;
}

/* five arcs with triple overlaps (every consecutive triple meets) */
inline Cover circle_cover_triple() {
  return circle_cover({0, 0.2, 0.4, 0.6, 0.8}, {0.45, 0.45, 0.45, 0.45, 0.45});
}

/* six boxes with one 4-fold overlap {0,1,2,3} on [0.36, 0.45] */
inline Cover circle_cover_quadruple() {
  return circle_cover({0, 0.12, 0.24, 0.36, 0.6, 0.8},
                      {0.45, 0.45, 0.45, 0.45, 0.3, 0.3});
}

/* four x-strips spanning T^2 (full y circle) */
inline Cover torus_strip_cover() {
  Cover cov;
  cov.base = {2, {true, true}};
  for (double o : {0.0, 0.25, 0.5, 0.75}) {
    Box b;
    b.lo = Vec(2);
    b.hi = Vec(2);
    b.lo << o, 0;
    b.hi << o + 0.3, 1;
    cov.boxes.push_back(b);
  }
  check_cover_boxes(cov);
  return cov;
}

/* --- the charge-1 monopole cocycle for U(1)_dis over T^2 ---
   A_i = -2 pi i x dy in the chart frame; the only nontrivial transitions
   are across the x wrap seam, g_30 = exp(-2 pi i y).  c1 = +1. */
inline DifferentialCocycle monopole_cocycle() {
  auto cm = crossed_module("Gdis:U1");
  Cover cov = torus_strip_cover();
  DifferentialCocycle c = make_trivial_cocycle(cm, cov);
  for (int i = 0; i < cov.size(); ++i) {
    ChartPiece pc = chart_piece(cov, i);
    c.A[i] = {pc, 1, ValueTag::Algebra(cm->G),
              [](const Point& p, const std::vector<Tangent>& vs) -> Mat {
                Mat m(1, 1);
                m(0, 0) = cplx(0, -2 * M_PI) * p.x(0) * vs[0].vx(1);
                return m;
              }};
  }
  auto winding = [cm](double sign) {
    return [cm, sign](const Point& p) -> GroupEl {
      Mat m(1, 1);
      m(0, 0) = std::exp(cplx(0, sign * 2 * M_PI) * p.x(1));
      return {cm->G, m};
    };
  };
  c.g[{3, 0}].eval = winding(-1.0);
  c.g[{0, 3}].eval = winding(+1.0);
  return c;
}

/* --- random equivalence data (identity components scaled by scl) --- */
inline EquivalenceData random_equivalence(std::shared_ptr<const CrossedModule> cm,
                                          const Cover& cover, uint64_t seed,
                                          double scl = 0.4,
                                          bool generalized = false) {
  Rng rng(seed);
  EquivalenceData E = make_trivial_equivalence(cm, cover, generalized);
  int dim = cover.base.dim;
  for (int i = 0; i < cover.size(); ++i) {
    auto hc = random_group_closure(cm->G, dim, rng, scl);
    E.hmap[i].eval = [hc](const Point& p) { return hc(p.x); };
    E.phi0[i] = random_form(chart_piece(cover, i), 1, cm->H, rng, scl);
  }
  for (auto& [t, e] : E.e) {
    auto ec = random_group_closure(cm->H, dim, rng, scl);
    e.eval = [ec](const Point& p) { return ec(p.x); };
  }
  return E;
}

/* Random valid cocycle: twist the trivial cocycle by a random equivalence. */
inline DifferentialCocycle random_cocycle(std::shared_ptr<const CrossedModule> cm,
                                          const Cover& cover, uint64_t seed,
                                          double h, double scl = 0.4,
                                          bool generalized = false) {
  DifferentialCocycle c = make_trivial_cocycle(cm, cover, generalized);
  return eq_apply(c, random_equivalence(cm, cover, seed, scl, generalized), h);
}

/* --- random bare (g, a) cocycle via a coboundary twist ---
   g_ij = t(v_ij) u_j u_i^{-1},  a_ijk = v_ik alpha(u_k u_j^{-1}, v_ij)^{-1} v_jk^{-1};
   eq:transtrans and 31c then hold identically. */
struct BareCocycle {
  std::shared_ptr<const CrossedModule> cm;
  Cover cover;
  std::map<std::vector<int>, GroupMapField> g, a;
};

inline BareCocycle random_bare_cocycle(std::shared_ptr<const CrossedModule> cm,
                                       const Cover& cover, uint64_t seed,
                                       double scl = 0.5) {
  Rng rng(seed);
  int dim = cover.base.dim;
  BareCocycle bc{cm, cover, {}, {}};
  std::vector<std::function<GroupEl(const Vec&)>> u;
  for (int i = 0; i < cover.size(); ++i)
    u.push_back(random_group_closure(cm->G, dim, rng, scl));
  std::map<std::vector<int>, std::function<GroupEl(const Vec&)>> v;
  for (auto& t : ordered_tuples(cover, 2))
    v[t] = random_group_closure(cm->H, dim, rng, scl);
  for (auto& t : ordered_tuples(cover, 2)) {
    int i = t[0], j = t[1];
    ChartPiece pc = overlap_piece(cover, tuple_support(t));
    auto ui = u[i], uj = u[j], vij = v[t];
    bc.g[t] = {pc, cm->G, [cm, ui, uj, vij](const Point& p) -> GroupEl {
                 return mul(cm->t(vij(p.x)), mul(uj(p.x), inv(ui(p.x))));
               }};
  }
  for (auto& t : ordered_tuples(cover, 3)) {
    int i = t[0], j = t[1], k = t[2];
    ChartPiece pc = overlap_piece(cover, tuple_support(t));
    auto uj = u[j], uk = u[k];
    auto vij = v.at({i, j}), vjk = v.at({j, k}), vik = v.at({i, k});
    bc.a[t] = {pc, cm->H, [cm, uj, uk, vij, vjk, vik](const Point& p) -> GroupEl {
                 GroupEl gjk = mul(uk(p.x), inv(uj(p.x)));
                 return mul(vik(p.x),
                            mul(inv(cm->alpha(gjk, vij(p.x))), inv(vjk(p.x))));
               }};
  }
  return bc;
}

}  // namespace hgt

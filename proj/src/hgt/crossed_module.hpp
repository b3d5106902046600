#pragma once

/* Crossed modules (G, H, t, alpha) with closed-form differentials, the
   associated groupoid structure on Gamma = H x| G, and the axiom verifier. */

#include "common.hpp"
#include "groups.hpp"

#include <memory>

namespace hgt {

enum class CmKind { BU1, Gdis, AUT_SU2, Identity };

/* Lift SO(3) -> SU(2) (quaternion from rotation matrix; sign irrelevant
   wherever it is used, since it only ever acts by conjugation). */
inline Mat su2_lift(const Mat& R) {
  Eigen::Matrix3d r = R.real();
  double w2 = (1.0 + r.trace()) / 4.0;
  double q[4];  // (w, x, y, z)
  if (w2 > 0.1) {
    q[0] = std::sqrt(w2);
    q[1] = (r(2, 1) - r(1, 2)) / (4 * q[0]);
    q[2] = (r(0, 2) - r(2, 0)) / (4 * q[0]);
    q[3] = (r(1, 0) - r(0, 1)) / (4 * q[0]);
  } else {
    /* find dominant diagonal entry */
    int i = 0;
    if (r(1, 1) > r(i, i)) i = 1;
    if (r(2, 2) > r(i, i)) i = 2;
    int j = (i + 1) % 3, k = (i + 2) % 3;
    double s = std::sqrt(std::max(0.0, 1.0 + r(i, i) - r(j, j) - r(k, k)));
    q[1 + i] = 0.5 * s;
    q[0] = (r(k, j) - r(j, k)) / (2 * s);
    q[1 + j] = (r(j, i) + r(i, j)) / (2 * s);
    q[1 + k] = (r(k, i) + r(i, k)) / (2 * s);
  }
  /* u = w I + (x,y,z) . (-i sigma) */
  Mat u(2, 2);
  u(0, 0) = cplx(q[0], -q[3]);
  u(0, 1) = cplx(-q[2], -q[1]);
  u(1, 0) = cplx(q[2], -q[1]);
  u(1, 1) = cplx(q[0], q[3]);
  return u;
}

/* Adjoint rotation matrix of u in SU(2): (u (x.sigma) u^dag) = (Rx).sigma. */
inline Mat so3_of_su2(const Mat& u) {
  auto T = algebra_basis(GroupTag::SU2);
  Mat R = Mat::Zero(3, 3);
  for (int b = 0; b < 3; ++b) {
    AlgEl img{GroupTag::SU2, u * T[b] * u.adjoint()};
    Eigen::VectorXd c = algebra_coords(img);
    for (int a = 0; a < 3; ++a) R(a, b) = c(a);
  }
  return R;
}

struct CrossedModule {
  CmKind kind;
  std::string name;   // CLI name, e.g. "AUT:SU2"
  GroupTag G, H;

  GroupEl t(const GroupEl& h) const {
    require_same_tag(h.tag, H, "cm.t");
    switch (kind) {
      case CmKind::BU1: return identity(G);
      case CmKind::Gdis: return identity(G);
      case CmKind::AUT_SU2: return {G, so3_of_su2(h.m)};
      case CmKind::Identity: return {G, h.m};
    }
    return identity(G);
  }

  GroupEl alpha(const GroupEl& g, const GroupEl& h) const {
    require_same_tag(g.tag, G, "cm.alpha");
    require_same_tag(h.tag, H, "cm.alpha");
    switch (kind) {
      case CmKind::BU1: return h;
      case CmKind::Gdis: return identity(H);
      case CmKind::AUT_SU2: {
        Mat u = su2_lift(g.m);
        return {H, u * h.m * u.adjoint()};
      }
      case CmKind::Identity: return {H, g.m * h.m * g.m.adjoint()};
    }
    return h;
  }

  /* alpha~_h(g) := h^{-1} alpha(g,h). */
  GroupEl tilde_alpha(const GroupEl& h, const GroupEl& g) const {
    return mul(inv(h), alpha(g, h));
  }

  AlgEl t_star(const AlgEl& Y) const {
    require_same_tag(Y.tag, H, "cm.t_star");
    switch (kind) {
      case CmKind::BU1: return zero_alg(G);
      case CmKind::Gdis: return zero_alg(G);
      case CmKind::AUT_SU2:
        /* coefficient vector carries over: y.T -> y.L */
        return algebra_from_coords(G, algebra_coords(Y));
      case CmKind::Identity: return {G, Y.m};
    }
    return zero_alg(G);
  }

  /* Inverse of t_star where it exists; used internally for alpha_star. */
  AlgEl lift_star(const AlgEl& X) const {
    require_same_tag(X.tag, G, "cm.lift_star");
    switch (kind) {
      case CmKind::AUT_SU2:
        return algebra_from_coords(H, algebra_coords(X));
      case CmKind::Identity: return {H, X.m};
      default: return zero_alg(H);
    }
  }

  /* alpha_*(X, Y), X in g, Y in h. */
  AlgEl alpha_star(const AlgEl& X, const AlgEl& Y) const {
    require_same_tag(X.tag, G, "cm.alpha_star");
    require_same_tag(Y.tag, H, "cm.alpha_star");
    switch (kind) {
      case CmKind::BU1: return zero_alg(H);
      case CmKind::Gdis: return zero_alg(H);
      case CmKind::AUT_SU2:
      case CmKind::Identity: return bracket(lift_star(X), Y);
    }
    return zero_alg(H);
  }

  /* (alpha_g)_*: h -> h. */
  AlgEl alpha_g_star(const GroupEl& g, const AlgEl& Y) const {
    require_same_tag(g.tag, G, "cm.alpha_g_star");
    require_same_tag(Y.tag, H, "cm.alpha_g_star");
    switch (kind) {
      case CmKind::BU1: return Y;
      case CmKind::Gdis: return Y;
      case CmKind::AUT_SU2: {
        Mat u = su2_lift(g.m);
        return {H, u * Y.m * u.adjoint()};
      }
      case CmKind::Identity: return Ad(g, Y);
    }
    return Y;
  }

  /* (alpha~_h)_*: g -> h,  X |-> Ad_{h^{-1}}(lift(X)) - lift(X) generally;
     for BU1/Gdis the relevant maps vanish. */
  AlgEl tilde_alpha_star(const GroupEl& h, const AlgEl& X) const {
    require_same_tag(h.tag, H, "cm.tilde_alpha_star");
    require_same_tag(X.tag, G, "cm.tilde_alpha_star");
    switch (kind) {
      case CmKind::BU1: return zero_alg(H);
      case CmKind::Gdis: return zero_alg(H);
      case CmKind::AUT_SU2:
      case CmKind::Identity: {
        AlgEl L = lift_star(X);
        return sub(Ad(inv(h), L), L);
      }
    }
    return zero_alg(H);
  }
};

inline std::shared_ptr<const CrossedModule> crossed_module(const std::string& name) {
  auto cm = std::make_shared<CrossedModule>();
  cm->name = name;
  auto parse_group = [](const std::string& s) {
    if (s == "U1") return GroupTag::U1;
    if (s == "SU2") return GroupTag::SU2;
    if (s == "SO3") return GroupTag::SO3;
    throw KindMismatch("unknown group: " + s);
  };
  if (name == "BU1") {
    cm->kind = CmKind::BU1;
    cm->G = GroupTag::Trivial;
    cm->H = GroupTag::U1;
  } else if (name.rfind("Gdis:", 0) == 0) {
    cm->kind = CmKind::Gdis;
    cm->G = parse_group(name.substr(5));
    cm->H = GroupTag::Trivial;
  } else if (name == "AUT:SU2") {
    cm->kind = CmKind::AUT_SU2;
    cm->G = GroupTag::SO3;
    cm->H = GroupTag::SU2;
  } else if (name.rfind("ID:", 0) == 0) {
    cm->kind = CmKind::Identity;
    GroupTag t = parse_group(name.substr(3));
    cm->G = cm->H = t;
  } else {
    throw KindMismatch("unknown crossed module: " + name);
  }
  return cm;
}

/* --- Gamma as a group and as a groupoid (objects G, morphisms H x| G) --- */

struct GammaMorphism {
  GroupEl h, g;
};

inline GroupEl gamma_source(const CrossedModule&, const GammaMorphism& m) {
  return m.g;
}
inline GroupEl gamma_target(const CrossedModule& cm, const GammaMorphism& m) {
  return mul(cm.t(m.h), m.g);
}
/* Composition m2 o m1 (s(m2) = t(m1)). */
inline GammaMorphism gamma_compose(const CrossedModule& cm, const GammaMorphism& m2,
                                   const GammaMorphism& m1, double tol = 1e-9) {
  if (group_dist(gamma_source(cm, m2), gamma_target(cm, m1)) > tol)
    throw NotComposable("gamma_compose: s(m2) != t(m1)");
  return {mul(m2.h, m1.h), m1.g};
}
/* Semidirect product (h1,g1).(h2,g2) = (h1 alpha(g1,h2), g1 g2). */
inline GammaMorphism gamma_mul(const CrossedModule& cm, const GammaMorphism& a,
                               const GammaMorphism& b) {
  return {mul(a.h, cm.alpha(a.g, b.h)), mul(a.g, b.g)};
}
inline GammaMorphism gamma_inv(const CrossedModule& cm, const GammaMorphism& a) {
  return {cm.alpha(inv(a.g), inv(a.h)), inv(a.g)};
}
inline GammaMorphism gamma_id(const CrossedModule& cm, const GroupEl& g) {
  return {identity(cm.H), g};
}

/* --- axiom verifier (Appendix-style identity list) --- */

Report verify_axioms(const CrossedModule& cm, int samples, uint64_t seed,
                     double threshold = tol::algebraic);

}  // namespace hgt

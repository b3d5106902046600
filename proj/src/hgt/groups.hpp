#pragma once

/* Matrix groups used by the built-in crossed modules: U(1), SU(2), SO(3),
   and the trivial group.  Group elements and algebra elements are small
   dense complex matrices carrying a tag; exp/log are closed-form. */

#include "common.hpp"

namespace hgt {

enum class GroupTag { Trivial, U1, SU2, SO3 };

inline const char* group_name(GroupTag t) {
  switch (t) {
    case GroupTag::Trivial: return "1";
    case GroupTag::U1: return "U1";
    case GroupTag::SU2: return "SU2";
    case GroupTag::SO3: return "SO3";
  }
  return "?";
}

inline int group_mat_dim(GroupTag t) {
  switch (t) {
    case GroupTag::Trivial: return 1;
    case GroupTag::U1: return 1;
    case GroupTag::SU2: return 2;
    case GroupTag::SO3: return 3;
  }
  return 1;
}

/* Dimension of the Lie algebra. */
inline int algebra_dim(GroupTag t) {
  switch (t) {
    case GroupTag::Trivial: return 0;
    case GroupTag::U1: return 1;
    case GroupTag::SU2: return 3;
    case GroupTag::SO3: return 3;
  }
  return 0;
}

struct GroupEl {
  GroupTag tag = GroupTag::Trivial;
  Mat m;
  GroupEl() : m(Mat::Identity(1, 1)) {}
  GroupEl(GroupTag t, Mat mm) : tag(t), m(std::move(mm)) {}
};

struct AlgEl {
  GroupTag tag = GroupTag::Trivial;  // algebra of this group
  Mat m;
  AlgEl() : m(Mat::Zero(1, 1)) {}
  AlgEl(GroupTag t, Mat mm) : tag(t), m(std::move(mm)) {}
};

inline void require_same_tag(GroupTag a, GroupTag b, const char* where) {
  if (a != b)
    throw TagMismatch(std::string(where) + ": " + group_name(a) + " vs " +
                      group_name(b));
}

inline GroupEl identity(GroupTag t) {
  return {t, Mat::Identity(group_mat_dim(t), group_mat_dim(t))};
}
inline AlgEl zero_alg(GroupTag t) {
  return {t, Mat::Zero(group_mat_dim(t), group_mat_dim(t))};
}

inline GroupEl mul(const GroupEl& a, const GroupEl& b) {
  require_same_tag(a.tag, b.tag, "mul");
  return {a.tag, a.m * b.m};
}
inline GroupEl inv(const GroupEl& a) { return {a.tag, a.m.adjoint()}; }

inline AlgEl add(const AlgEl& a, const AlgEl& b) {
  require_same_tag(a.tag, b.tag, "add");
  return {a.tag, a.m + b.m};
}
inline AlgEl sub(const AlgEl& a, const AlgEl& b) {
  require_same_tag(a.tag, b.tag, "sub");
  return {a.tag, a.m - b.m};
}
inline AlgEl scale(double s, const AlgEl& a) { return {a.tag, s * a.m}; }
inline AlgEl bracket(const AlgEl& a, const AlgEl& b) {
  require_same_tag(a.tag, b.tag, "bracket");
  return {a.tag, a.m * b.m - b.m * a.m};
}
inline AlgEl Ad(const GroupEl& g, const AlgEl& x) {
  require_same_tag(g.tag, x.tag, "Ad");
  return {x.tag, g.m * x.m * g.m.adjoint()};
}

/* Orthonormal-ish algebra bases with [T_a,T_b] = eps_abc T_c (SU2/SO3). */
inline std::vector<Mat> algebra_basis(GroupTag t) {
  std::vector<Mat> basis;
  switch (t) {
    case GroupTag::Trivial:
      break;
    case GroupTag::U1: {
      Mat e(1, 1);
      e(0, 0) = cplx(0, 1);
      basis.push_back(e);
      break;
    }
    case GroupTag::SU2: {
      /* T_a = -(i/2) sigma_a */
      Mat s1(2, 2), s2(2, 2), s3(2, 2);
      s1 << 0, 1, 1, 0;
      s2 << 0, cplx(0, -1), cplx(0, 1), 0;
      s3 << 1, 0, 0, -1;
      for (const Mat& s : {s1, s2, s3}) basis.push_back(cplx(0, -0.5) * s);
      break;
    }
    case GroupTag::SO3: {
      /* (L_a)_{bc} = -eps_{abc}, so L_a v = e_a x v. */
      for (int a = 0; a < 3; ++a) {
        Mat L = Mat::Zero(3, 3);
        int b = (a + 1) % 3, c = (a + 2) % 3;
        L(c, b) = 1;
        L(b, c) = -1;
        basis.push_back(L);
      }
      break;
    }
  }
  return basis;
}

/* Coefficients of x in the algebra basis (exact 3x3 / 1x1 linear algebra). */
inline Eigen::VectorXd algebra_coords(const AlgEl& x) {
  auto basis = algebra_basis(x.tag);
  Eigen::VectorXd c(basis.size());
  for (size_t a = 0; a < basis.size(); ++a) {
    /* <A,B> = Re tr(A^dag B); bases here are orthogonal. */
    double nn = std::real((basis[a].adjoint() * basis[a]).trace());
    c(a) = std::real((basis[a].adjoint() * x.m).trace()) / nn;
  }
  return c;
}
inline AlgEl algebra_from_coords(GroupTag t, const Eigen::VectorXd& c) {
  auto basis = algebra_basis(t);
  Mat m = Mat::Zero(group_mat_dim(t), group_mat_dim(t));
  for (size_t a = 0; a < basis.size(); ++a) m += c((int)a) * basis[a];
  return {t, m};
}

inline constexpr double kBranchMargin = 1e-6;

inline GroupEl grp_exp(const AlgEl& x) {
  switch (x.tag) {
    case GroupTag::Trivial:
      return identity(x.tag);
    case GroupTag::U1: {
      Mat m(1, 1);
      m(0, 0) = std::exp(x.m(0, 0));
      return {x.tag, m};
    }
    case GroupTag::SU2: {
      /* x = phi*K with K^2 = -1: exp = cos(phi) + sin(phi) K. */
      Eigen::VectorXd c = algebra_coords(x);
      double phi = c.norm() / 2.0;  // |T-coords|/2 = principal angle
      Mat I = Mat::Identity(2, 2);
      if (phi < 1e-12) return {x.tag, I + x.m + 0.5 * x.m * x.m};
      return {x.tag, std::cos(phi) * I + (std::sin(phi) / phi) * x.m};
    }
    case GroupTag::SO3: {
      Eigen::VectorXd c = algebra_coords(x);
      double th = c.norm();
      Mat I = Mat::Identity(3, 3);
      if (th < 1e-12)
        return {x.tag, I + x.m + 0.5 * x.m * x.m};
      return {x.tag, I + (std::sin(th) / th) * x.m +
                         ((1 - std::cos(th)) / (th * th)) * x.m * x.m};
    }
  }
  return identity(x.tag);
}

/* Principal-branch log; throws BranchCut within 1e-6 of the branch point. */
inline AlgEl grp_log(const GroupEl& g) {
  switch (g.tag) {
    case GroupTag::Trivial:
      return zero_alg(g.tag);
    case GroupTag::U1: {
      double th = std::arg(g.m(0, 0));
      if (std::abs(th) >= M_PI - kBranchMargin)
        throw BranchCut("U1 log near angle pi");
      Mat m(1, 1);
      m(0, 0) = cplx(0, th);
      return {g.tag, m};
    }
    case GroupTag::SU2: {
      /* g = cos(phi) I + sin(phi) K, K antihermitian traceless, K^2=-I. */
      double cph = std::real(g.m.trace()) / 2.0;
      Mat V = 0.5 * (g.m - g.m.adjoint());
      V -= 0.5 * V.trace() * Mat::Identity(2, 2);
      double sph = std::sqrt(std::max(0.0, std::real((V.adjoint() * V).trace()) / 2.0));
      double phi = std::atan2(sph, cph);
      if (phi >= M_PI - kBranchMargin) throw BranchCut("SU2 log near angle pi");
      if (sph < 1e-12) return {g.tag, V};  // phi ~ 0
      return {g.tag, (phi / sph) * V};
    }
    case GroupTag::SO3: {
      double ctr = (std::real(g.m.trace()) - 1) / 2.0;
      ctr = std::min(1.0, std::max(-1.0, ctr));
      Mat V = 0.5 * (g.m - g.m.transpose());
      /* |axis|*sin(th): coords of V in L-basis have norm sin(th). */
      double sth = std::sqrt(std::max(0.0, std::real((V.adjoint() * V).trace()) / 2.0));
      double th = std::atan2(sth, ctr);
      if (th >= M_PI - kBranchMargin) throw BranchCut("SO3 log near angle pi");
      if (sth < 1e-12) return {g.tag, V};
      return {g.tag, (th / sth) * V};
    }
  }
  return zero_alg(g.tag);
}

/* Membership checks (used by validators and tests). */
inline double group_membership_residual(const GroupEl& g) {
  int n = group_mat_dim(g.tag);
  if (g.m.rows() != n || g.m.cols() != n) return 1e99;
  double r = max_abs(g.m * g.m.adjoint() - Mat::Identity(n, n));
  switch (g.tag) {
    case GroupTag::Trivial:
      r = std::max(r, std::abs(g.m(0, 0) - cplx(1, 0)));
      break;
    case GroupTag::U1:
      break;
    case GroupTag::SU2:
      r = std::max(r, std::abs(g.m.determinant() - cplx(1, 0)));
      break;
    case GroupTag::SO3:
      r = std::max(r, std::abs(g.m.determinant() - cplx(1, 0)));
      r = std::max(r, max_abs(g.m.imag().cast<cplx>()));
      break;
  }
  return r;
}

inline double algebra_membership_residual(const AlgEl& x) {
  double r = max_abs(x.m + x.m.adjoint());
  switch (x.tag) {
    case GroupTag::SU2:
      r = std::max(r, std::abs(x.m.trace()));
      break;
    case GroupTag::SO3:
      r = std::max(r, max_abs(x.m.imag().cast<cplx>()));
      break;
    default:
      break;
  }
  return r;
}

inline AlgEl random_alg(GroupTag t, Rng& rng, double scale = 1.0) {
  int n = algebra_dim(t);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = rng.uniform(-scale, scale);
  return algebra_from_coords(t, c);
}
inline GroupEl random_group(GroupTag t, Rng& rng, double scale = 1.0) {
  return grp_exp(random_alg(t, rng, scale));
}

inline double group_dist(const GroupEl& a, const GroupEl& b) {
  require_same_tag(a.tag, b.tag, "group_dist");
  return max_abs(a.m - b.m);
}

}  // namespace hgt

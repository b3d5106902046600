#pragma once

/* Charts, points, tangents, differential forms and group-valued maps on
   pieces of the form (box in R^d or T^d) x (product of group factors).
   Tangents use left-logarithmic coordinates on group factors.  All
   derivative operators are order-2 central differences in step h; the
   exterior derivative carries the frame-bracket correction required by
   left-invariant group frames. */

#include "common.hpp"
#include "groups.hpp"

#include <cmath>
#include <map>

namespace hgt {

struct Box {
  Vec lo, hi;  // dim d (possibly 0)
  int dim() const { return (int)lo.size(); }
};

struct ChartPiece {
  Box box;
  std::vector<bool> wrap;        // per base axis: torus axis (period 1)?
  std::vector<GroupTag> factors; // group factors, in order
  int dim() const { return box.dim(); }
  int nfac() const { return (int)factors.size(); }
};

inline ChartPiece make_piece(const Box& b, std::vector<bool> wrap,
                             std::vector<GroupTag> factors) {
  return {b, std::move(wrap), std::move(factors)};
}
inline ChartPiece point_piece(std::vector<GroupTag> factors) {
  return {{Vec(0), Vec(0)}, {}, std::move(factors)};
}

struct Point {
  Vec x;                    // base coordinates (absolute; wrap handled by closures)
  std::vector<GroupEl> g;   // one element per group factor
};

struct Tangent {
  Vec vx;                   // base components
  std::vector<AlgEl> vg;    // left-log components per factor
};

inline Tangent zero_tangent(const ChartPiece& pc) {
  Tangent t;
  t.vx = Vec::Zero(pc.dim());
  for (auto f : pc.factors) t.vg.push_back(zero_alg(f));
  return t;
}

inline Tangent scale_tangent(double s, const Tangent& t) {
  Tangent r = t;
  r.vx *= s;
  for (auto& a : r.vg) a.m *= s;
  return r;
}

/* Lie bracket of two tangents viewed as (coordinate, left-invariant) frames:
   base and mixed parts commute, group parts bracket per factor. */
inline Tangent frame_bracket(const Tangent& a, const Tangent& b) {
  Tangent r;
  r.vx = Vec::Zero(a.vx.size());
  for (size_t k = 0; k < a.vg.size(); ++k)
    r.vg.push_back(bracket(a.vg[k], b.vg[k]));
  return r;
}

/* Flow the point distance s along tangent v (base straight line, group
   factors along g exp(s X)). */
inline Point flow(const Point& p, const Tangent& v, double s) {
  Point q = p;
  q.x += s * v.vx;
  for (size_t k = 0; k < p.g.size(); ++k)
    q.g[k] = mul(p.g[k], grp_exp(scale(s, v.vg[k])));
  return q;
}

inline Point random_point(const ChartPiece& pc, Rng& rng, double margin = 0.0) {
  Point p;
  p.x = Vec(pc.dim());
  for (int i = 0; i < pc.dim(); ++i) {
    double m = margin * (pc.box.hi(i) - pc.box.lo(i));
    p.x(i) = rng.uniform(pc.box.lo(i) + m, pc.box.hi(i) - m);
  }
  for (auto f : pc.factors) p.g.push_back(random_group(f, rng));
  return p;
}

inline Tangent random_tangent(const ChartPiece& pc, Rng& rng, double scale = 1.0) {
  Tangent t;
  t.vx = Vec(pc.dim());
  for (int i = 0; i < pc.dim(); ++i) t.vx(i) = rng.uniform(-scale, scale);
  for (auto f : pc.factors) t.vg.push_back(random_alg(f, rng, scale));
  return t;
}

/* Value tag for form targets: an algebra (by group tag) or plain scalars. */
struct ValueTag {
  bool scalar = false;
  GroupTag alg = GroupTag::Trivial;
  static ValueTag Scalar() { return {true, GroupTag::Trivial}; }
  static ValueTag Algebra(GroupTag t) { return {false, t}; }
  int mat_dim() const { return scalar ? 1 : group_mat_dim(alg); }
  bool operator==(const ValueTag& o) const {
    return scalar == o.scalar && (scalar || alg == o.alg);
  }
};

/* A p-form on a chart piece: alternating multilinear evaluator. */
struct FormField {
  ChartPiece piece;
  int degree = 0;
  ValueTag target;
  std::function<Mat(const Point&, const std::vector<Tangent>&)> eval;

  Mat operator()(const Point& p, const std::vector<Tangent>& vs) const {
    if ((int)vs.size() != degree)
      throw KindMismatch("form arity mismatch");
    return eval(p, vs);
  }
  Mat at(const Point& p) const { return eval(p, {}); }
};

inline FormField zero_form(const ChartPiece& pc, int degree, ValueTag vt) {
  FormField f{pc, degree, vt, nullptr};
  int n = vt.mat_dim();
  f.eval = [n](const Point&, const std::vector<Tangent>&) {
    return Mat::Zero(n, n);
  };
  return f;
}

inline FormField form_add(const FormField& a, const FormField& b) {
  if (a.degree != b.degree || !(a.target == b.target))
    throw KindMismatch("form_add: degree/target mismatch");
  FormField r = a;
  auto ae = a.eval, be = b.eval;
  r.eval = [ae, be](const Point& p, const std::vector<Tangent>& vs) -> Mat {
    return ae(p, vs) + be(p, vs);
  };
  return r;
}

inline FormField form_scale(double s, const FormField& a) {
  FormField r = a;
  auto ae = a.eval;
  r.eval = [ae, s](const Point& p, const std::vector<Tangent>& vs) {
    return Mat(s * ae(p, vs));
  };
  return r;
}

inline FormField form_sub(const FormField& a, const FormField& b) {
  return form_add(a, form_scale(-1.0, b));
}

/* Apply a pointwise linear map to the values of a form. */
inline FormField form_map(const FormField& a, ValueTag new_target,
                          std::function<Mat(const Point&, const Mat&)> fn) {
  FormField r = a;
  r.target = new_target;
  auto ae = a.eval;
  r.eval = [ae, fn](const Point& p, const std::vector<Tangent>& vs) {
    return fn(p, ae(p, vs));
  };
  return r;
}

/* Group-valued map on a chart piece. */
struct GroupMapField {
  ChartPiece piece;
  GroupTag target = GroupTag::Trivial;
  std::function<GroupEl(const Point&)> eval;
  GroupEl operator()(const Point& p) const { return eval(p); }
};

/* Guard against stepping outside a non-periodic box during FD. */
inline void check_fd_margin(const ChartPiece& pc, const Point& p,
                            const std::vector<Tangent>& vs, double h) {
  for (int i = 0; i < pc.dim(); ++i) {
    if (pc.wrap.size() > (size_t)i && pc.wrap[i]) continue;
    double reach = 0;
    for (auto& v : vs) reach = std::max(reach, std::abs(v.vx(i)));
    reach = reach * h * 1.5;
    if (p.x(i) - reach < pc.box.lo(i) || p.x(i) + reach > pc.box.hi(i))
      throw BoundaryTooClose("FD stencil leaves the box on axis " +
                             std::to_string(i));
  }
}

/* Exterior derivative, order-2 central differences in step h.
   dF(v_0..v_p) = sum_i (-1)^i D_{v_i} F(..v^_i..)
                + sum_{i<j} (-1)^{i+j} F([v_i,v_j], ..v^_i..v^_j..),
   the second sum being the frame-bracket term for left-invariant frames. */
inline FormField ext_d(const FormField& F, double h) {
  FormField r = F;
  r.degree = F.degree + 1;
  auto Fe = F.eval;
  ChartPiece pc = F.piece;
  r.eval = [Fe, pc, h](const Point& p, const std::vector<Tangent>& vs) -> Mat {
    check_fd_margin(pc, p, vs, h);
    int n = (int)vs.size();
    Mat acc = Mat::Zero(1, 1);
    bool first = true;
    auto drop = [&](int i) {
      std::vector<Tangent> r2;
      for (int k = 0; k < n; ++k)
        if (k != i) r2.push_back(vs[k]);
      return r2;
    };
    for (int i = 0; i < n; ++i) {
      std::vector<Tangent> rest = drop(i);
      Mat dplus = Fe(flow(p, vs[i], h), rest);
      Mat dminus = Fe(flow(p, vs[i], -h), rest);
      Mat term = ((i % 2 == 0) ? 1.0 : -1.0) / (2 * h) * (dplus - dminus);
      if (first) { acc = term; first = false; } else acc += term;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        std::vector<Tangent> args;
        args.push_back(frame_bracket(vs[i], vs[j]));
        for (int k = 0; k < n; ++k)
          if (k != i && k != j) args.push_back(vs[k]);
        Mat term = (((i + j) % 2 == 0) ? 1.0 : -1.0) * Fe(p, args);
        if (first) { acc = term; first = false; } else acc += term;
      }
    return acc;
  };
  return r;
}

/* Wedge with a bilinear map B on values: shuffle sum, no 1/k!l! factor. */
inline FormField wedge_with(const FormField& F, const FormField& G,
                            ValueTag target,
                            std::function<Mat(const Mat&, const Mat&)> B) {
  FormField r = F;
  r.degree = F.degree + G.degree;
  r.target = target;
  auto Fe = F.eval, Ge = G.eval;
  int k = F.degree, l = G.degree;
  r.eval = [Fe, Ge, B, k, l](const Point& p,
                             const std::vector<Tangent>& vs) -> Mat {
    int n = k + l;
    /* enumerate k-subsets (shuffles) */
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    Mat acc;
    bool first = true;
    auto emit = [&]() {
      std::vector<char> ink(n, 0);
      for (int i : idx) ink[i] = 1;
      std::vector<Tangent> a, b;
      for (int i = 0; i < n; ++i) (ink[i] ? a : b).push_back(vs[i]);
      /* sign of the shuffle permutation */
      int inversions = 0, seen_b = 0;
      for (int i = 0; i < n; ++i) {
        if (ink[i]) inversions += seen_b; else ++seen_b;
      }
      Mat term = ((inversions % 2 == 0) ? 1.0 : -1.0) * B(Fe(p, a), Ge(p, b));
      if (first) { acc = term; first = false; } else acc += term;
    };
    if (k == 0 || l == 0) {
      std::vector<Tangent> a(vs.begin(), vs.begin() + k);
      std::vector<Tangent> b(vs.begin() + k, vs.end());
      return B(Fe(p, a), Ge(p, b));
    }
    while (true) {
      emit();
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return acc;
  };
  return r;
}

/* [F ^ G] with the target-algebra commutator. */
inline FormField wedge_bracket(const FormField& F, const FormField& G) {
  if (!(F.target == G.target)) throw KindMismatch("wedge_bracket targets");
  return wedge_with(F, G, F.target,
                    [](const Mat& a, const Mat& b) { return Mat(a * b - b * a); });
}

/* Left/right Maurer-Cartan pullbacks of a group-valued map, log-based so
   pure group directions on identity-like maps come out exactly. */
inline FormField maurer_cartan_left(const GroupMapField& gmap, double h) {
  FormField r{gmap.piece, 1, ValueTag::Algebra(gmap.target), nullptr};
  auto ge = gmap.eval;
  ChartPiece pc = gmap.piece;
  r.eval = [ge, pc, h](const Point& p, const std::vector<Tangent>& vs) -> Mat {
    check_fd_margin(pc, p, vs, h);
    GroupEl g0i = inv(ge(p));
    AlgEl lp = grp_log(mul(g0i, ge(flow(p, vs[0], h))));
    AlgEl lm = grp_log(mul(g0i, ge(flow(p, vs[0], -h))));
    return (lp.m - lm.m) / (2 * h);
  };
  return r;
}

inline FormField maurer_cartan_right(const GroupMapField& gmap, double h) {
  FormField r{gmap.piece, 1, ValueTag::Algebra(gmap.target), nullptr};
  auto ge = gmap.eval;
  ChartPiece pc = gmap.piece;
  r.eval = [ge, pc, h](const Point& p, const std::vector<Tangent>& vs) -> Mat {
    check_fd_margin(pc, p, vs, h);
    GroupEl g0i = inv(ge(p));
    AlgEl lp = grp_log(mul(ge(flow(p, vs[0], h)), g0i));
    AlgEl lm = grp_log(mul(ge(flow(p, vs[0], -h)), g0i));
    return (lp.m - lm.m) / (2 * h);
  };
  return r;
}

/* Curvature of an algebra-valued 1-form: dA + (1/2)[A ^ A]. */
inline FormField curvature2(const FormField& A, double h) {
  return form_add(ext_d(A, h), form_scale(0.5, wedge_bracket(A, A)));
}

/* ------------------------------ covers ------------------------------ */

struct BaseDomain {
  int dim = 1;
  std::vector<bool> wrap;  // per axis; period 1 on wrapped axes
};

/* Torus-aware interval intersection of [al,ah] and [bl,bh] (+shift n). */
struct Interval { double lo, hi; bool empty; };

inline Interval box_axis_overlap(double al, double ah, double bl, double bh,
                                 bool wrap, int& shift_out) {
  auto isect = [](double a, double b, double c, double d) {
    return Interval{std::max(a, c), std::min(b, d), std::max(a, c) >= std::min(b, d) - 1e-12};
  };
  if (!wrap) {
    shift_out = 0;
    return isect(al, ah, bl, bh);
  }
  /* full-axis boxes (length 1) overlap everything with shift 0 */
  if (ah - al >= 1.0 - 1e-12) { shift_out = 0; return Interval{bl, bh, false}; }
  if (bh - bl >= 1.0 - 1e-12) { shift_out = 0; return Interval{al, ah, false}; }
  for (int n = -1; n <= 1; ++n) {
    Interval iv = isect(al, ah, bl + n, bh + n);
    if (!iv.empty) { shift_out = n; return iv; }
  }
  shift_out = 0;
  return Interval{0, 0, true};
}

struct Cover {
  BaseDomain base;
  std::vector<Box> boxes;
  int size() const { return (int)boxes.size(); }
};

/* Validate the torus half-period rule: each axis of each box is either the
   full circle (length 1) or shorter than 1/2. */
inline void check_cover_boxes(const Cover& cov) {
  for (auto& b : cov.boxes)
    for (int a = 0; a < cov.base.dim; ++a) {
      double len = b.hi(a) - b.lo(a);
      if (cov.base.wrap[a] && len < 1.0 - 1e-12 && len >= 0.5)
        throw CoverMismatch("torus box edge in [1/2,1) on axis " +
                            std::to_string(a));
    }
}

struct OverlapBox {
  std::vector<int> indices;           // sorted member indices
  Box box;                            // in the frame of indices[0]
  std::vector<std::vector<int>> shifts;  // per member, per axis integer shift
  bool empty = false;
};

/* Intersect cover boxes for the given sorted index tuple. */
inline OverlapBox cover_overlap(const Cover& cov, const std::vector<int>& idx) {
  OverlapBox ob;
  ob.indices = idx;
  int d = cov.base.dim;
  ob.box = cov.boxes[idx[0]];
  ob.shifts.assign(idx.size(), std::vector<int>(d, 0));
  for (size_t m = 1; m < idx.size(); ++m) {
    const Box& b = cov.boxes[idx[m]];
    Box nb;
    nb.lo = Vec(d);
    nb.hi = Vec(d);
    for (int a = 0; a < d; ++a) {
      int shift = 0;
      Interval iv = box_axis_overlap(ob.box.lo(a), ob.box.hi(a), b.lo(a),
                                     b.hi(a), cov.base.wrap[a], shift);
      if (iv.empty) { ob.empty = true; return ob; }
      nb.lo(a) = iv.lo;
      nb.hi(a) = iv.hi;
      ob.shifts[m][a] = shift;
    }
    ob.box = nb;
  }
  return ob;
}

/* All nonempty k-fold overlaps up to depth 4, deterministic index order. */
inline std::vector<OverlapBox> cover_overlaps(const Cover& cov, int max_depth = 4) {
  check_cover_boxes(cov);
  std::vector<OverlapBox> out;
  int n = cov.size();
  std::vector<std::vector<int>> frontier;
  for (int i = 0; i < n; ++i) frontier.push_back({i});
  for (int depth = 2; depth <= max_depth; ++depth) {
    std::vector<std::vector<int>> next;
    for (int i = 0; i < n; ++i)
      if (depth == 2)
        for (int j = i + 1; j < n; ++j) next.push_back({i, j});
    if (depth > 2) {
      for (auto& ob : out)
        if ((int)ob.indices.size() == depth - 1 && !ob.empty)
          for (int j = ob.indices.back() + 1; j < n; ++j) {
            auto idx = ob.indices;
            idx.push_back(j);
            next.push_back(idx);
          }
    }
    for (auto& idx : next) {
      OverlapBox ob = cover_overlap(cov, idx);
      if (!ob.empty) out.push_back(ob);
    }
  }
  return out;
}

/* C^2 bump per box: product over axes of (u(1-u))^3 in normalized box
   coordinates (full-circle axes contribute 1). */
inline double box_bump(const Cover& cov, int i, const Vec& x) {
  const Box& b = cov.boxes[i];
  double v = 1.0;
  for (int a = 0; a < cov.base.dim; ++a) {
    double len = b.hi(a) - b.lo(a);
    if (cov.base.wrap[a] && len >= 1.0 - 1e-12) continue;
    double t = x(a) - b.lo(a);
    if (cov.base.wrap[a]) t -= std::floor(t);  // into [0,1): box frame
    double u = t / len;
    if (u <= 0 || u >= 1) return 0.0;
    double q = u * (1 - u);
    v *= q * q * q * 64.0;  // peak-normalized-ish; absolute scale irrelevant
  }
  return v;
}

struct PartitionOfUnity {
  Cover cover;
  /* psi_i(x); throws CoverGap when the unnormalized sum is < 1e-8. */
  double operator()(int i, const Vec& x) const {
    double s = 0, vi = 0;
    for (int k = 0; k < cover.size(); ++k) {
      double v = box_bump(cover, k, x);
      s += v;
      if (k == i) vi = v;
    }
    if (s < 1e-8) throw CoverGap("partition of unity: bump sum < 1e-8");
    return vi / s;
  }
};

inline PartitionOfUnity partition_of_unity(const Cover& cov) {
  check_cover_boxes(cov);
  return {cov};
}

}  // namespace hgt

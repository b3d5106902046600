#pragma once

/* File formats: grid-sampled and analytic field data, cocycle /
   equivalence / connection / gauge-transformation manifests, and report
   serialization. JSON manifests with inline base64 float64 payloads. */

#include "cocycle.hpp"
#include "gauge.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace hgt {

using json = nlohmann::json;

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

/* ----------------------------- base64 ------------------------------ */

inline std::string b64_encode(const uint8_t* data, size_t len) {
  static const char* tbl =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (size_t i = 0; i < len; i += 3) {
    uint32_t v = data[i] << 16;
    if (i + 1 < len) v |= data[i + 1] << 8;
    if (i + 2 < len) v |= data[i + 2];
    out.push_back(tbl[(v >> 18) & 63]);
    out.push_back(tbl[(v >> 12) & 63]);
    out.push_back(i + 1 < len ? tbl[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? tbl[v & 63] : '=');
  }
  return out;
}

inline std::vector<uint8_t> b64_decode(const std::string& s) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<uint8_t> out;
  int buf = 0, bits = 0;
  for (char c : s) {
    if (c == '=' || c == '\n') continue;
    int v = val(c);
    if (v < 0) throw IoError("invalid base64 character");
    buf = (buf << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back((buf >> bits) & 0xff);
    }
  }
  return out;
}

inline std::string doubles_to_b64(const std::vector<double>& v) {
  /* row-major little-endian float64 (this code assumes an LE host) */
  return b64_encode(reinterpret_cast<const uint8_t*>(v.data()),
                    v.size() * sizeof(double));
}

inline std::vector<double> b64_to_doubles(const std::string& s) {
  std::vector<uint8_t> raw = b64_decode(s);
  if (raw.size() % sizeof(double) != 0) throw IoError("payload size not /8");
  std::vector<double> v(raw.size() / sizeof(double));
  std::memcpy(v.data(), raw.data(), raw.size());
  return v;
}

/* --------------------------- small pieces --------------------------- */

inline GroupTag tag_from_name(const std::string& s) {
  if (s == "1") return GroupTag::Trivial;
  if (s == "U1") return GroupTag::U1;
  if (s == "SU2") return GroupTag::SU2;
  if (s == "SO3") return GroupTag::SO3;
  throw IoError("unknown group tag: " + s);
}

inline json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline Mat mat_from_json(const json& j) {
  int nr = (int)j.size(), nc = nr ? (int)j[0].size() : 0;
  Mat m(nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c)
      m(r, c) = cplx(j[r][c][0].get<double>(), j[r][c][1].get<double>());
  return m;
}

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Vec vec_from_json(const json& j) {
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

/* --------------------- group projections (grid IO) ------------------ */

inline GroupEl project_group(GroupTag t, const Mat& m) {
  switch (t) {
    case GroupTag::Trivial:
      return identity(t);
    case GroupTag::U1: {
      cplx z = m(0, 0);
      if (std::abs(z) < 1e-8) throw IoError("U1 grid value near zero");
      Mat r(1, 1);
      r(0, 0) = z / std::abs(z);
      return {t, r};
    }
    case GroupTag::SU2: {
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Mat u = svd.matrixU() * svd.matrixV().adjoint();
      cplx d = u.determinant();
      u /= std::sqrt(d);
      return {t, u};
    }
    case GroupTag::SO3: {
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Mat mu = svd.matrixU(), mv = svd.matrixV();
      Mat u = mu * mv.adjoint();
      if (u.determinant().real() < 0) {
        mu.col(2) = -mu.col(2);
        u = mu * mv.adjoint();
      }
      u = u.real().cast<cplx>();
      return {t, u};
    }
  }
  return identity(t);
}

/* ------------------------- grid interpolation ----------------------- */

struct GridPayload {
  std::vector<int> shape;   /* points per axis, endpoints inclusive */
  int ncomp = 1, n = 1;     /* components, matrix dimension */
  std::vector<double> vals; /* [grid rm][comp][r][c][re,im] */
};

inline size_t grid_points(const std::vector<int>& shape) {
  size_t t = 1;
  for (int s : shape) t *= (size_t)s;
  return t;
}

/* Multilinear interpolation of component matrices at base point x. */
inline std::vector<Mat> grid_eval(const GridPayload& gp, const ChartPiece& pc,
                                  Vec x) {
  int d = pc.dim();
  std::vector<double> tfrac(d);
  std::vector<int> i0(d);
  for (int a = 0; a < d; ++a) {
    double lo = pc.box.lo(a), hi = pc.box.hi(a);
    double xa = x(a);
    if (pc.wrap[a]) {
      while (xa < lo - 0.5) xa += 1.0;
      while (xa > hi + 0.5) xa -= 1.0;
    }
    xa = std::min(std::max(xa, lo), hi);
    double u = (gp.shape[a] - 1) * (xa - lo) / (hi - lo);
    i0[a] = std::min((int)std::floor(u), gp.shape[a] - 2);
    i0[a] = std::max(i0[a], 0);
    tfrac[a] = u - i0[a];
  }
  int n = gp.n;
  std::vector<Mat> out(gp.ncomp, Mat::Zero(n, n));
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1;
    size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      int bit = (corner >> a) & 1;
      w *= bit ? tfrac[a] : 1 - tfrac[a];
      idx = idx * gp.shape[a] + (i0[a] + bit);
    }
    if (w == 0) continue;
    for (int c = 0; c < gp.ncomp; ++c) {
      size_t off = ((idx * gp.ncomp) + c) * n * n * 2;
      for (int r = 0; r < n; ++r)
        for (int cc = 0; cc < n; ++cc) {
          size_t o = off + (r * n + cc) * 2;
          out[c](r, cc) += w * cplx(gp.vals[o], gp.vals[o + 1]);
        }
    }
  }
  return out;
}

inline json grid_to_json(const GridPayload& gp) {
  return {{"grid_shape", gp.shape},
          {"ncomp", gp.ncomp},
          {"n", gp.n},
          {"data", doubles_to_b64(gp.vals)}};
}

inline GridPayload grid_from_json(const json& j) {
  GridPayload gp;
  gp.shape = j.at("grid_shape").get<std::vector<int>>();
  gp.ncomp = j.at("ncomp").get<int>();
  gp.n = j.at("n").get<int>();
  gp.vals = b64_to_doubles(j.at("data").get<std::string>());
  if (gp.vals.size() != grid_points(gp.shape) * gp.ncomp * gp.n * gp.n * 2)
    throw IoError("grid payload size mismatch");
  return gp;
}

inline std::vector<int> grid_shape_for(const ChartPiece& pc, double step) {
  std::vector<int> shape(pc.dim());
  for (int a = 0; a < pc.dim(); ++a) {
    double len = pc.box.hi(a) - pc.box.lo(a);
    shape[a] = std::max(2, (int)std::ceil(len / step) + 1);
  }
  return shape;
}

/* ascending axis subsets of size p, lexicographic */
inline std::vector<std::vector<int>> axis_combos(int d, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(p);
  if (p == 0) return {{}};
  if (p > d) return out;
  for (int i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[i] == d - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int k = i + 1; k < p; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

/* ----------------------------- form IO ------------------------------ */

inline json form_to_json(const FormField& F, double grid_step) {
  json j;
  j["degree"] = F.degree;
  j["target"] = F.target.scalar ? "scalar" : group_name(F.target.alg);
  int d = F.piece.dim();
  auto combos = axis_combos(d, F.degree);
  if (combos.empty()) {
    j["type"] = "zero";
    return j;
  }
  j["type"] = "grid";
  j["grid_step"] = grid_step;
  GridPayload gp;
  gp.shape = grid_shape_for(F.piece, grid_step);
  gp.ncomp = (int)combos.size();
  gp.n = F.target.mat_dim();
  gp.vals.resize(grid_points(gp.shape) * gp.ncomp * gp.n * gp.n * 2);
  size_t npts = grid_points(gp.shape);
  for (size_t li = 0; li < npts; ++li) {
    Point p;
    p.x = Vec(d);
    size_t rem = li;
    for (int a = d - 1; a >= 0; --a) {
      int ia = (int)(rem % gp.shape[a]);
      rem /= gp.shape[a];
      p.x(a) = F.piece.box.lo(a) +
               ia * (F.piece.box.hi(a) - F.piece.box.lo(a)) / (gp.shape[a] - 1);
    }
    for (size_t c = 0; c < combos.size(); ++c) {
      std::vector<Tangent> vs;
      for (int ax : combos[c]) {
        Tangent t;
        t.vx = Vec::Zero(d);
        t.vx(ax) = 1.0;
        vs.push_back(t);
      }
      Mat m = F.eval(p, vs);
      size_t off = ((li * gp.ncomp) + c) * gp.n * gp.n * 2;
      for (int r = 0; r < gp.n; ++r)
        for (int cc = 0; cc < gp.n; ++cc) {
          gp.vals[off + (r * gp.n + cc) * 2] = m(r, cc).real();
          gp.vals[off + (r * gp.n + cc) * 2 + 1] = m(r, cc).imag();
        }
    }
  }
  j.update(grid_to_json(gp));
  return j;
}

inline ValueTag target_from_json(const json& j) {
  std::string t = j.at("target").get<std::string>();
  if (t == "scalar") return ValueTag::Scalar();
  return ValueTag::Algebra(tag_from_name(t));
}

inline FormField form_from_json(const json& j, const ChartPiece& pc) {
  int degree = j.at("degree").get<int>();
  ValueTag vt = target_from_json(j);
  std::string type = j.at("type").get<std::string>();
  if (type == "zero") return zero_form(pc, degree, vt);
  int d = pc.dim();
  auto combos = axis_combos(d, degree);
  if (type == "poly1") {
    /* sum of terms (c0 + cx.x) * M * dx_{axes} */
    struct Term {
      double c0;
      Vec cx;
      Mat M;
      std::vector<int> axes;
    };
    std::vector<Term> terms;
    for (auto& tj : j.at("terms")) {
      Term t;
      t.c0 = tj.at("c0").get<double>();
      t.cx = vec_from_json(tj.at("cx"));
      t.M = mat_from_json(tj.at("matrix"));
      t.axes = tj.at("axes").get<std::vector<int>>();
      if ((int)t.axes.size() != degree) throw IoError("poly1 axes arity");
      terms.push_back(t);
    }
    FormField F{pc, degree, vt, nullptr};
    int n = vt.mat_dim();
    F.eval = [terms, degree, n](const Point& p,
                                const std::vector<Tangent>& vs) -> Mat {
      Mat acc = Mat::Zero(n, n);
      for (auto& t : terms) {
        /* det of tangent components on the term's axes */
        Eigen::MatrixXd mm(degree, degree);
        for (int r = 0; r < degree; ++r)
          for (int c = 0; c < degree; ++c) mm(r, c) = vs[r].vx(t.axes[c]);
        double w = degree == 0 ? 1.0 : mm.determinant();
        acc += (t.c0 + t.cx.dot(p.x)) * w * t.M;
      }
      return acc;
    };
    return F;
  }
  if (type == "grid") {
    GridPayload gp = grid_from_json(j);
    if (gp.ncomp != (int)combos.size()) throw IoError("grid component count");
    FormField F{pc, degree, vt, nullptr};
    int n = vt.mat_dim();
    F.eval = [gp, pc, combos, degree, n](
                 const Point& p, const std::vector<Tangent>& vs) -> Mat {
      std::vector<Mat> comp = grid_eval(gp, pc, p.x);
      Mat acc = Mat::Zero(n, n);
      for (size_t c = 0; c < combos.size(); ++c) {
        Eigen::MatrixXd mm(degree, degree);
        for (int r = 0; r < degree; ++r)
          for (int cc = 0; cc < degree; ++cc) mm(r, cc) = vs[r].vx(combos[c][cc]);
        double w = degree == 0 ? 1.0 : mm.determinant();
        acc += w * comp[c];
      }
      return acc;
    };
    return F;
  }
  throw IoError("unknown form datum type: " + type);
}

/* --------------------------- group map IO --------------------------- */

inline json gmap_to_json(const GroupMapField& g, double grid_step) {
  json j;
  j["target"] = group_name(g.target);
  j["type"] = "grid";
  j["grid_step"] = grid_step;
  GridPayload gp;
  gp.shape = grid_shape_for(g.piece, grid_step);
  gp.ncomp = 1;
  gp.n = group_mat_dim(g.target);
  size_t npts = grid_points(gp.shape);
  gp.vals.resize(npts * gp.n * gp.n * 2);
  int d = g.piece.dim();
  for (size_t li = 0; li < npts; ++li) {
    Point p;
    p.x = Vec(d);
    size_t rem = li;
    for (int a = d - 1; a >= 0; --a) {
      int ia = (int)(rem % gp.shape[a]);
      rem /= gp.shape[a];
      p.x(a) = g.piece.box.lo(a) +
               ia * (g.piece.box.hi(a) - g.piece.box.lo(a)) / (gp.shape[a] - 1);
    }
    Mat m = g.eval(p).m;
    size_t off = li * gp.n * gp.n * 2;
    for (int r = 0; r < gp.n; ++r)
      for (int cc = 0; cc < gp.n; ++cc) {
        gp.vals[off + (r * gp.n + cc) * 2] = m(r, cc).real();
        gp.vals[off + (r * gp.n + cc) * 2 + 1] = m(r, cc).imag();
      }
  }
  j.update(grid_to_json(gp));
  return j;
}

inline GroupMapField gmap_from_json(const json& j, const ChartPiece& pc) {
  GroupTag tag = tag_from_name(j.at("target").get<std::string>());
  std::string type = j.at("type").get<std::string>();
  if (type == "const") {
    Mat m = mat_from_json(j.at("matrix"));
    GroupEl v{tag, m};
    return const_gmap(pc, v);
  }
  if (type == "exp_linear") {
    /* g(x) = exp((c0 + cx.x) E) */
    Mat E = mat_from_json(j.at("E"));
    double c0 = j.at("c0").get<double>();
    Vec cx = vec_from_json(j.at("cx"));
    return {pc, tag, [tag, E, c0, cx](const Point& p) {
              return grp_exp({tag, Mat((c0 + cx.dot(p.x)) * E)});
            }};
  }
  if (type == "grid") {
    GridPayload gp = grid_from_json(j);
    return {pc, tag, [gp, pc, tag](const Point& p) {
              return project_group(tag, grid_eval(gp, pc, p.x)[0]);
            }};
  }
  throw IoError("unknown group map datum type: " + type);
}

/* --------------------------- manifests ------------------------------ */

inline std::string tuple_key(const std::vector<int>& t) {
  std::string s;
  for (size_t i = 0; i < t.size(); ++i)
    s += (i ? "-" : "") + std::to_string(t[i]);
  return s;
}

inline std::vector<int> tuple_from_key(const std::string& s) {
  std::vector<int> t;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t dash = s.find('-', pos);
    if (dash == std::string::npos) dash = s.size();
    t.push_back(std::stoi(s.substr(pos, dash - pos)));
    pos = dash + 1;
  }
  return t;
}

inline json cover_to_json(const Cover& cov) {
  json j;
  j["dim"] = cov.base.dim;
  j["wrap"] = cov.base.wrap;
  json boxes = json::array();
  for (auto& b : cov.boxes)
    boxes.push_back({{"lo", vec_to_json(b.lo)}, {"hi", vec_to_json(b.hi)}});
  j["boxes"] = boxes;
  return j;
}

inline Cover cover_from_json(const json& j) {
  Cover cov;
  cov.base.dim = j.at("dim").get<int>();
  cov.base.wrap = j.at("wrap").get<std::vector<bool>>();
  for (auto& bj : j.at("boxes")) {
    Box b;
    b.lo = vec_from_json(bj.at("lo"));
    b.hi = vec_from_json(bj.at("hi"));
    cov.boxes.push_back(b);
  }
  check_cover_boxes(cov);
  return cov;
}

inline json piece_to_json(const ChartPiece& pc) {
  return {{"lo", vec_to_json(pc.box.lo)},
          {"hi", vec_to_json(pc.box.hi)},
          {"wrap", pc.wrap}};
}

inline ChartPiece piece_from_json(const json& j) {
  Box b;
  b.lo = vec_from_json(j.at("lo"));
  b.hi = vec_from_json(j.at("hi"));
  return make_piece(b, j.at("wrap").get<std::vector<bool>>(), {});
}

inline json cocycle_to_json(const DifferentialCocycle& c, double grid_step) {
  json j;
  j["format"] = "hgt-cocycle";
  j["crossed_module"] = c.cm->name;
  j["cover"] = cover_to_json(c.cover);
  j["mode"] = c.generalized ? "generalized" : "full";
  json A = json::array(), B = json::array();
  for (auto& a : c.A) A.push_back(form_to_json(a, grid_step));
  for (auto& b : c.B) B.push_back(form_to_json(b, grid_step));
  j["A"] = A;
  j["B"] = B;
  json g = json::object(), phi = json::object(), aj = json::object();
  for (auto& [t, gm] : c.g) g[tuple_key(t)] = gmap_to_json(gm, grid_step);
  for (auto& [t, f] : c.phi) phi[tuple_key(t)] = form_to_json(f, grid_step);
  for (auto& [t, am] : c.a) aj[tuple_key(t)] = gmap_to_json(am, grid_step);
  j["g"] = g;
  j["phi"] = phi;
  j["a"] = aj;
  return j;
}

/* bare: only (g, a) required; full/generalized: A, B, phi too */
inline DifferentialCocycle cocycle_from_json(const json& j) {
  if (j.at("format") != "hgt-cocycle") throw IoError("not a cocycle file");
  DifferentialCocycle c;
  c.cm = crossed_module(j.at("crossed_module").get<std::string>());
  c.cover = cover_from_json(j.at("cover"));
  std::string mode = j.value("mode", "full");
  c.generalized = (mode != "full");
  for (auto& [key, gj] : j.at("g").items()) {
    std::vector<int> t = tuple_from_key(key);
    c.g[t] = gmap_from_json(gj, overlap_piece(c.cover, tuple_support(t)));
  }
  for (auto& [key, aj] : j.at("a").items()) {
    std::vector<int> t = tuple_from_key(key);
    c.a[t] = gmap_from_json(aj, overlap_piece(c.cover, tuple_support(t)));
  }
  if (mode == "bare") return c;
  for (auto& aj : j.at("A"))
    c.A.push_back(form_from_json(aj, chart_piece(c.cover, (int)c.A.size())));
  for (auto& bj : j.at("B"))
    c.B.push_back(form_from_json(bj, chart_piece(c.cover, (int)c.B.size())));
  for (auto& [key, pj] : j.at("phi").items()) {
    std::vector<int> t = tuple_from_key(key);
    c.phi[t] = form_from_json(pj, overlap_piece(c.cover, tuple_support(t)));
  }
  if ((int)c.A.size() != c.cover.size() || (int)c.B.size() != c.cover.size())
    throw IoError("cocycle file: A/B count != cover size");
  return c;
}

inline bool cocycle_is_bare(const json& j) {
  return j.value("mode", "full") == "bare";
}

inline json equivalence_to_json(const EquivalenceData& E, double grid_step) {
  json j;
  j["format"] = "hgt-equivalence";
  j["crossed_module"] = E.cm->name;
  j["cover"] = cover_to_json(E.cover);
  j["mode"] = E.generalized ? "generalized" : "full";
  json h = json::array(), phi = json::array(), e = json::object();
  for (auto& hm : E.hmap) h.push_back(gmap_to_json(hm, grid_step));
  for (auto& f : E.phi0) phi.push_back(form_to_json(f, grid_step));
  for (auto& [t, em] : E.e) e[tuple_key(t)] = gmap_to_json(em, grid_step);
  j["h"] = h;
  j["phi"] = phi;
  j["e"] = e;
  return j;
}

inline EquivalenceData equivalence_from_json(const json& j) {
  if (j.at("format") != "hgt-equivalence") throw IoError("not an equivalence file");
  EquivalenceData E;
  E.cm = crossed_module(j.at("crossed_module").get<std::string>());
  E.cover = cover_from_json(j.at("cover"));
  E.generalized = j.value("mode", "full") != "full";
  int i = 0;
  for (auto& hj : j.at("h"))
    E.hmap.push_back(gmap_from_json(hj, chart_piece(E.cover, i++)));
  i = 0;
  for (auto& pj : j.at("phi"))
    E.phi0.push_back(form_from_json(pj, chart_piece(E.cover, i++)));
  for (auto& [key, ej] : j.at("e").items()) {
    std::vector<int> t = tuple_from_key(key);
    E.e[t] = gmap_from_json(ej, overlap_piece(E.cover, tuple_support(t)));
  }
  return E;
}

inline json connection_to_json(const GammaConnection& gc, double grid_step) {
  return {{"format", "hgt-connection"},
          {"crossed_module", gc.cm->name},
          {"piece", piece_to_json(gc.base)},
          {"A", form_to_json(gc.A, grid_step)},
          {"B", form_to_json(gc.B, grid_step)}};
}

inline GammaConnection connection_from_json(const json& j) {
  if (j.at("format") != "hgt-connection") throw IoError("not a connection file");
  auto cm = crossed_module(j.at("crossed_module").get<std::string>());
  ChartPiece pc = piece_from_json(j.at("piece"));
  return make_connection(cm, pc, form_from_json(j.at("A"), pc),
                         form_from_json(j.at("B"), pc));
}

inline json gauge_to_json(std::shared_ptr<const CrossedModule> cm,
                          const GaugeTransformation& gt, double grid_step) {
  return {{"format", "hgt-gauge"},
          {"crossed_module", cm->name},
          {"piece", piece_to_json(gt.g.piece)},
          {"g", gmap_to_json(gt.g, grid_step)},
          {"phi", form_to_json(gt.phi, grid_step)}};
}

inline GaugeTransformation gauge_from_json(const json& j) {
  if (j.at("format") != "hgt-gauge") throw IoError("not a gauge file");
  ChartPiece pc = piece_from_json(j.at("piece"));
  return {gmap_from_json(j.at("g"), pc), form_from_json(j.at("phi"), pc)};
}

/* ------------------------------ reports ----------------------------- */

inline json report_to_json(const Report& rep) {
  json out = json::array();
  for (auto& c : rep.conditions)
    out.push_back({{"label", c.label},
                   {"max_residual", c.max_residual},
                   {"threshold", c.threshold},
                   {"pass", c.pass}});
  return out;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(1) << "\n";
}

}  // namespace hgt

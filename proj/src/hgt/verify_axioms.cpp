/* Sampling-based verification of the crossed-module / Lie-2-algebra identity
   list: structure axioms, adjoint block, alpha_g block, alpha~ block, plus
   the group-level compatibilities.  All identities here are algebraic
   (closed-form maps, no finite differences). */

#include "crossed_module.hpp"

namespace hgt {

Report verify_axioms(const CrossedModule& cm, int samples, uint64_t seed,
                     double threshold) {
  Report rep;
  Rng rng(seed);

  struct Id {
    std::string label;
    std::function<double(Rng&)> residual;
  };
  std::vector<Id> ids;
  const CrossedModule* M = &cm;

  auto rg = [M](Rng& r) { return random_group(M->G, r); };
  auto rh = [M](Rng& r) { return random_group(M->H, r); };
  auto rX = [M](Rng& r) { return random_alg(M->G, r); };
  auto rY = [M](Rng& r) { return random_alg(M->H, r); };
  auto nrm = [](const AlgEl& a) { return max_abs(a.m); };

  /* group-level axioms */
  ids.push_back({"cm:alpha-hom", [=](Rng& r) {
    auto g = rg(r); auto h1 = rh(r); auto h2 = rh(r);
    return group_dist(M->alpha(g, mul(h1, h2)),
                      mul(M->alpha(g, h1), M->alpha(g, h2)));
  }});
  ids.push_back({"cm:alpha-action", [=](Rng& r) {
    auto g1 = rg(r); auto g2 = rg(r); auto h = rh(r);
    return group_dist(M->alpha(mul(g1, g2), h), M->alpha(g1, M->alpha(g2, h)));
  }});
  ids.push_back({"cm:peiffer-group", [=](Rng& r) {
    auto h = rh(r); auto x = rh(r);
    return group_dist(M->alpha(M->t(h), x), mul(mul(h, x), inv(h)));
  }});
  ids.push_back({"cm:t-equivariance", [=](Rng& r) {
    auto g = rg(r); auto h = rh(r);
    return group_dist(M->t(M->alpha(g, h)), mul(mul(g, M->t(h)), inv(g)));
  }});
  ids.push_back({"cm:tilde-alpha-def", [=](Rng& r) {
    auto g = rg(r); auto h = rh(r);
    return group_dist(M->tilde_alpha(h, g), mul(inv(h), M->alpha(g, h)));
  }});

  /* Lie-2-algebra axioms */
  ids.push_back({"l2a:peiffer", [=](Rng& r) {
    auto Y1 = rY(r); auto Y2 = rY(r);
    return nrm(sub(M->alpha_star(M->t_star(Y1), Y2), bracket(Y1, Y2)));
  }});
  ids.push_back({"l2a:t-equivariance", [=](Rng& r) {
    auto X = rX(r); auto Y = rY(r);
    return nrm(sub(M->t_star(M->alpha_star(X, Y)), bracket(X, M->t_star(Y))));
  }});
  ids.push_back({"l2a:derivation-g", [=](Rng& r) {
    auto X1 = rX(r); auto X2 = rX(r); auto Y = rY(r);
    AlgEl lhs = M->alpha_star(bracket(X1, X2), Y);
    AlgEl rhs = sub(M->alpha_star(X1, M->alpha_star(X2, Y)),
                    M->alpha_star(X2, M->alpha_star(X1, Y)));
    return nrm(sub(lhs, rhs));
  }});
  ids.push_back({"l2a:derivation-h", [=](Rng& r) {
    auto X = rX(r); auto Y1 = rY(r); auto Y2 = rY(r);
    AlgEl lhs = M->alpha_star(X, bracket(Y1, Y2));
    AlgEl rhs = add(bracket(M->alpha_star(X, Y1), Y2),
                    bracket(Y1, M->alpha_star(X, Y2)));
    return nrm(sub(lhs, rhs));
  }});

  /* adjoint block */
  ids.push_back({"adj:t-Ad", [=](Rng& r) {
    auto h = rh(r); auto Y = rY(r);
    return nrm(sub(M->t_star(Ad(h, Y)), Ad(M->t(h), M->t_star(Y))));
  }});
  ids.push_back({"adj:Ad-alpha", [=](Rng& r) {
    auto a = rh(r); auto X = rX(r); auto Y = rY(r);
    return nrm(sub(Ad(a, M->alpha_star(X, Y)),
                   M->alpha_star(Ad(M->t(a), X), Ad(a, Y))));
  }});

  /* alpha_g block */
  ids.push_back({"ag:Ad-t", [=](Rng& r) {
    auto g = rg(r); auto Y = rY(r);
    return nrm(sub(Ad(g, M->t_star(Y)), M->t_star(M->alpha_g_star(g, Y))));
  }});
  ids.push_back({"ag:Ad-alpha-g", [=](Rng& r) {
    auto g = rg(r); auto h = rh(r); auto Y = rY(r);
    return nrm(sub(Ad(M->alpha(g, h), M->alpha_g_star(g, Y)),
                   M->alpha_g_star(g, Ad(h, Y))));
  }});
  ids.push_back({"ag:alpha-th", [=](Rng& r) {
    auto h = rh(r); auto Y = rY(r);
    return nrm(sub(M->alpha_g_star(M->t(h), Y), Ad(h, Y)));
  }});
  ids.push_back({"ag:alpha-Adg", [=](Rng& r) {
    auto g = rg(r); auto X = rX(r); auto Y = rY(r);
    AlgEl lhs = M->alpha_star(Ad(g, X), Y);
    AlgEl rhs = M->alpha_g_star(
        g, M->alpha_star(X, M->alpha_g_star(inv(g), Y)));
    return nrm(sub(lhs, rhs));
  }});
  ids.push_back({"ag:alpha-g-bracket", [=](Rng& r) {
    auto g = rg(r); auto X = rX(r); auto Y = rY(r);
    AlgEl lhs = M->alpha_g_star(g, M->alpha_star(X, Y));
    AlgEl rhs = M->alpha_star(Ad(g, X), M->alpha_g_star(g, Y));
    return nrm(sub(lhs, rhs));
  }});

  /* alpha~ block */
  ids.push_back({"at:product", [=](Rng& r) {
    auto h1 = rh(r); auto h2 = rh(r); auto X = rX(r);
    AlgEl lhs = M->tilde_alpha_star(mul(h1, h2), X);
    AlgEl rhs = add(Ad(inv(h2), M->tilde_alpha_star(h1, X)),
                    M->tilde_alpha_star(h2, X));
    return nrm(sub(lhs, rhs));
  }});
  ids.push_back({"at:alpha-twist", [=](Rng& r) {
    auto g = rg(r); auto h = rh(r); auto X = rX(r);
    AlgEl lhs = M->tilde_alpha_star(M->alpha(g, h), X);
    AlgEl rhs = M->alpha_g_star(
        g, M->tilde_alpha_star(h, Ad(inv(g), X)));
    return nrm(sub(lhs, rhs));
  }});
  ids.push_back({"at:inverse", [=](Rng& r) {
    auto h = rh(r); auto X = rX(r);
    AlgEl lhs = M->tilde_alpha_star(inv(h), X);
    AlgEl rhs = scale(-1.0, Ad(h, M->tilde_alpha_star(h, X)));
    return nrm(sub(lhs, rhs));
  }});
  ids.push_back({"at:t-post", [=](Rng& r) {
    auto h = rh(r); auto X = rX(r);
    AlgEl lhs = M->t_star(M->tilde_alpha_star(h, X));
    AlgEl rhs = sub(Ad(inv(M->t(h)), X), X);
    return nrm(sub(lhs, rhs));
  }});
  ids.push_back({"at:t-pre", [=](Rng& r) {
    auto h = rh(r); auto Y = rY(r);
    AlgEl lhs = M->tilde_alpha_star(h, M->t_star(Y));
    AlgEl rhs = sub(Ad(inv(h), Y), Y);
    return nrm(sub(lhs, rhs));
  }});
  ids.push_back({"at:bracket", [=](Rng& r) {
    auto h = rh(r); auto X = rX(r); auto Y = rX(r);
    AlgEl lhs = M->tilde_alpha_star(h, bracket(X, Y));
    AlgEl rhs = add(bracket(M->tilde_alpha_star(h, X), M->tilde_alpha_star(h, Y)),
                    sub(M->alpha_star(X, M->tilde_alpha_star(h, Y)),
                        M->alpha_star(Y, M->tilde_alpha_star(h, X))));
    return nrm(sub(lhs, rhs));
  }});

  /* Gamma group/groupoid structure sanity */
  ids.push_back({"gamma:inverse", [=](Rng& r) {
    GammaMorphism a{rh(r), rg(r)};
    GammaMorphism p = gamma_mul(*M, a, gamma_inv(*M, a));
    return std::max(group_dist(p.h, identity(M->H)),
                    group_dist(p.g, identity(M->G)));
  }});
  ids.push_back({"gamma:assoc", [=](Rng& r) {
    GammaMorphism a{rh(r), rg(r)}, b{rh(r), rg(r)}, c{rh(r), rg(r)};
    GammaMorphism p = gamma_mul(*M, gamma_mul(*M, a, b), c);
    GammaMorphism q = gamma_mul(*M, a, gamma_mul(*M, b, c));
    return std::max(group_dist(p.h, q.h), group_dist(p.g, q.g));
  }});
  ids.push_back({"gamma:functorial-mul", [=](Rng& r) {
    /* target of product = product of targets (interchange sanity) */
    GammaMorphism a{rh(r), rg(r)}, b{rh(r), rg(r)};
    GroupEl lhs = gamma_target(*M, gamma_mul(*M, a, b));
    GroupEl rhs = mul(gamma_target(*M, a), gamma_target(*M, b));
    return group_dist(lhs, rhs);
  }});

  /* exp/log round trips */
  ids.push_back({"exp-log:G", [=](Rng& r) {
    auto X = rX(r);
    return max_abs(sub(grp_log(grp_exp(X)), X).m);
  }});
  ids.push_back({"exp-log:H", [=](Rng& r) {
    auto Y = rY(r);
    return max_abs(sub(grp_log(grp_exp(Y)), Y).m);
  }});

  for (auto& id : ids) {
    auto& c = rep.add(id.label, threshold);
    for (int s = 0; s < samples; ++s) rep.record(c, id.residual(rng));
  }
  return rep;
}

}  // namespace hgt

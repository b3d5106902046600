/* Regenerates the analytic example files shipped in data/.  Both files
   store closed-form datums (no grids) so loads reproduce the canonical
   cocycles exactly. */

#include "hgt/cocycle_examples.hpp"
#include "hgt/io.hpp"

using namespace hgt;

static json zero_datum(int degree, const std::string& target) {
  return {{"degree", degree}, {"target", target}, {"type", "zero"}};
}

static json const_gmap_datum(GroupTag t) {
  return {{"target", group_name(t)},
          {"type", "const"},
          {"matrix", mat_to_json(identity(t).m)}};
}

static json trivial_file() {
  auto cm = crossed_module("AUT:SU2");
  Cover cov = circle_cover_triple();
  json j;
  j["format"] = "hgt-cocycle";
  j["crossed_module"] = cm->name;
  j["cover"] = cover_to_json(cov);
  j["mode"] = "full";
  json A = json::array(), B = json::array();
  for (int i = 0; i < cov.size(); ++i) {
    A.push_back(zero_datum(1, group_name(cm->G)));
    B.push_back(zero_datum(2, group_name(cm->H)));
  }
  j["A"] = A;
  j["B"] = B;
  json g = json::object(), phi = json::object(), a = json::object();
  for (auto& t : ordered_tuples(cov, 2)) {
    g[tuple_key(t)] = const_gmap_datum(cm->G);
    phi[tuple_key(t)] = zero_datum(1, group_name(cm->H));
  }
  for (auto& t : ordered_tuples(cov, 3))
    a[tuple_key(t)] = const_gmap_datum(cm->H);
  j["g"] = g;
  j["phi"] = phi;
  j["a"] = a;
  return j;
}

static json monopole_file() {
  auto cm = crossed_module("Gdis:U1");
  Cover cov = torus_strip_cover();
  json j;
  j["format"] = "hgt-cocycle";
  j["crossed_module"] = cm->name;
  j["cover"] = cover_to_json(cov);
  j["mode"] = "full";
  /* A_i = -2 pi i x dy in each chart frame */
  json Ad = {{"degree", 1},
             {"target", group_name(cm->G)},
             {"type", "poly1"},
             {"terms",
              json::array({{{"axes", {1}},
                            {"c0", 0.0},
                            {"cx", {1.0, 0.0}},
                            {"matrix", json::array({json::array(
                                           {json::array({0.0, -2 * M_PI})})})}}})}};
  json A = json::array(), B = json::array();
  for (int i = 0; i < cov.size(); ++i) {
    A.push_back(Ad);
    B.push_back(zero_datum(2, group_name(cm->H)));
  }
  j["A"] = A;
  j["B"] = B;
  /* winding transitions across the x seam: g_30 = exp(-2 pi i y) */
  auto winding = [&](double sign) -> json {
    return {{"target", group_name(cm->G)},
            {"type", "exp_linear"},
            {"E", json::array({json::array({json::array({0.0, 1.0})})})},
            {"c0", 0.0},
            {"cx", {0.0, sign * 2 * M_PI}}};
  };
  json g = json::object(), phi = json::object(), a = json::object();
  for (auto& t : ordered_tuples(cov, 2)) {
    if (t == std::vector<int>{3, 0})
      g[tuple_key(t)] = winding(-1.0);
    else if (t == std::vector<int>{0, 3})
      g[tuple_key(t)] = winding(+1.0);
    else
      g[tuple_key(t)] = const_gmap_datum(cm->G);
    phi[tuple_key(t)] = zero_datum(1, group_name(cm->H));
  }
  for (auto& t : ordered_tuples(cov, 3))
    a[tuple_key(t)] = const_gmap_datum(cm->H);
  j["g"] = g;
  j["phi"] = phi;
  j["a"] = a;
  return j;
}

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "data";
  save_json_file(dir + "/trivial_cocycle.json", trivial_file());
  save_json_file(dir + "/monopole.json", monopole_file());
  return 0;
}

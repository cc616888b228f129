// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "thetaslab/frames.hpp"
#include "thetaslab/toriclat.hpp"

using namespace thetaslab;

namespace {

// x^a y^b times a shift polynomial given as {offset -> coeff}.
CurveClass shifted(std::int64_t a, std::int64_t b,
                   std::initializer_list<std::pair<Point, int>> poly) {
  std::map<Point, Rational> m;
  for (const auto& [p, c] : poly) m[Point{p[0] + a, p[1] + b}] += c;
  return CurveClass(m);
}

CurveClass c1(std::int64_t a, std::int64_t b) {
  return shifted(a, b, {{{0, 0}, 1}, {{1, 0}, -1}, {{0, 1}, -1}, {{1, 1}, 1}});
}
CurveClass c2(std::int64_t a, std::int64_t b) {
  return shifted(a, b, {{{1, 0}, 1}, {{-1, 1}, 1}, {{0, 0}, -1}, {{0, 1}, -1}});
}
CurveClass c3(std::int64_t a, std::int64_t b) {
  return shifted(a, b, {{{0, 1}, 1}, {{1, -1}, 1}, {{0, 0}, -1}, {{1, 0}, -1}});
}

bool has_wall(const std::vector<Wall>& ws, const CurveClass& c) {
  for (const auto& w : ws)
    if (w.curve == c) return true;
  return false;
}

}  // namespace

TEST_CASE("build_fan windows") {
  FanData a0 = build_fan(FanSpec::ad(1), 3);
  CHECK(a0.rays.size() == 7);
  CHECK(a0.cones.size() == 6);
  CHECK(a0.rays[a0.cones[0][0]] == Point{-3});
  CHECK(a0.rays[a0.cones[0][1]] == Point{-2});
  CHECK(a0.rays.at(a0.cones.at(a0.basepoint)[0]) == Point{0});

  FanData x11 = build_fan(FanSpec::xpq(1, 1), 2);
  CHECK(x11.rays.size() == 25);
  CHECK(x11.cones.size() == 32);
  const auto& base = x11.cones.at(x11.basepoint);
  CHECK(x11.rays[base[0]] == Point{0, 0});
  CHECK(x11.rays[base[1]] == Point{1, 0});
  CHECK(x11.rays[base[2]] == Point{0, 1});

  FanData cube = build_fan(FanSpec::hypercube({1, 1, 1}), 1);
  CHECK(cube.rays.size() == 27);
  CHECK(cube.cones.size() == 48);

  FanData ak = build_fan(FanSpec::ak(3), 0);
  CHECK(ak.rays.size() == 5);
  CHECK(walls(ak).size() == 3);
}

TEST_CASE("validation rejects bad fans") {
  FanData bad = build_fan(FanSpec::ak(1), 0);
  bad.rays[2] = Point{3};
  CHECK_THROWS_AS(validate_fan(bad), std::invalid_argument);
  FanData shift = build_fan(FanSpec::xpq(1, 1), 2);
  shift.quotient = {Point{1, 0}};
  shift.rays.pop_back();
  CHECK_THROWS(validate_fan(shift));
}

TEST_CASE("fan file round-trip") {
  FanData x = build_fan(FanSpec::xpq(2, 1), 2);
  FanData y = fan_from_json(fan_to_json(x));
  CHECK(y.rays == x.rays);
  CHECK(y.cones == x.cones);
  CHECK(y.quotient == x.quotient);
  CHECK(y.basepoint == x.basepoint);
}

TEST_CASE("intersection numbers") {
  FanData x = build_fan(FanSpec::xpq(1, 1), 4);
  for (int p = -2; p <= 3; ++p)
    for (int q = -2; q <= 3; ++q) {
      CurveClass c = curve_class_of_ray(x, Point{p, q});
      if (Point{p, q} == Point{0, 0} || Point{p, q} == Point{1, 0} || Point{p, q} == Point{0, 1})
        continue;
      CHECK(intersection_number(x, c, *x.ray_index(Point{p, q})) == 1);
      CHECK(intersection_number(x, c, *x.ray_index(Point{0, 0})) == p + q - 1);
      CHECK(intersection_number(x, c, *x.ray_index(Point{1, 0})) == -p);
      CHECK(intersection_number(x, c, *x.ray_index(Point{0, 1})) == -q);
    }
  FanData a1 = build_fan(FanSpec::ad(2), 3);
  auto ws = walls(a1);
  bool found = false;
  for (const auto& w : ws)
    if (a1.rays[w.face[0]] == Point{1}) {
      found = true;
      CHECK(w.curve.pairing(Point{0}) == 1);
      CHECK(w.curve.pairing(Point{1}) == -2);
      CHECK(w.curve.pairing(Point{2}) == 1);
      CHECK(w.curve.support().size() == 3);
    }
  CHECK(found);
  CurveClass zero;
  for (std::size_t r = 0; r < a1.rays.size(); ++r) CHECK(intersection_number(a1, zero, r) == 0);
  CHECK_THROWS_AS(intersection_number(a1, zero, a1.rays.size()), std::out_of_range);
}

TEST_CASE("curve classes of rays") {
  FanData x = build_fan(FanSpec::xpq(1, 1), 4);
  CHECK(curve_class_of_ray(x, Point{0, 0}).is_zero());
  CHECK(curve_class_of_ray(x, Point{1, 0}).is_zero());
  CHECK(curve_class_of_ray(x, Point{0, 1}).is_zero());
  CHECK_THROWS_AS(curve_class_of_ray(x, Point{9, 0}), std::out_of_range);

  LatticeFrame frame({1, 1});
  auto table = make_table(frame.variables());
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q) {
      Monomial m = frame.monomial(curve_class_of_ray(x, Point{p, q}), *table);
      // first lattice direction pairs with q_tau
      CHECK(m == Monomial(*table, {{"q_tau", p * (p - 1) / 2},
                                   {"q_rho", q * (q - 1) / 2},
                                   {"q_sigma", p * q}}));
    }
}

TEST_CASE("wall shapes and homology relations of the square tiling") {
  FanData x = build_fan(FanSpec::xpq(1, 1), 3);
  auto ws = walls(x);
  CHECK(has_wall(ws, c1(0, 0)));
  CHECK(has_wall(ws, c2(0, 0)));
  CHECK(has_wall(ws, c3(0, 0)));
  for (const auto& w : ws) {
    CHECK(w.curve.degree() == 0);
    for (const auto& m : w.curve.moment(2)) CHECK(m == 0);
  }
  for (int a = -1; a <= 2; ++a)
    for (int b = -1; b <= 2; ++b) {
      CHECK(c1(a - 1, b) + c3(a - 1, b) == c1(a, b - 1) + c3(a, b));
      CHECK(c1(a - 1, b) + c2(a, b) == c1(a, b - 1) + c2(a, b - 1));
    }
  LatticeFrame f21({2, 1});
  LatticeFrame f22({2, 2});
  for (const auto* frame : {&f21, &f22}) {
    int p = frame->periods()[0], q = frame->periods()[1];
    auto column = [&](int b) {
      RVector s(frame->variables().size(), Rational(0));
      for (int a = 0; a < p; ++a) {
        RVector g = frame->coordinates(c1(a, b));
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += g[i];
      }
      return s;
    };
    for (int b = 1; b < q + 2; ++b) CHECK(column(b) == column(0));
  }
  LatticeFrame f11({1, 1});
  auto t = make_table(f11.variables());
  CHECK(f11.monomial(c1(0, 0) + c2(0, 0), *t) == Monomial(*t, {{"q_tau", 1}}));
  CHECK(f11.monomial(CurveClass(), *t).is_unit());
}

TEST_CASE("relations have zero intersection vectors") {
  FanData x = build_fan(FanSpec::xpq(1, 1), 2);
  auto ws = walls(x);
  RMatrix m(x.rays.size(), RVector(ws.size(), Rational(0)));
  for (std::size_t w = 0; w < ws.size(); ++w)
    for (std::size_t r = 0; r < x.rays.size(); ++r) m[r][w] = ws[w].curve.pairing(x.rays[r]);
  auto ker = kernel(m, ws.size());
  CHECK(!ker.empty());
  for (const auto& k : ker) {
    CurveClass sum;
    for (std::size_t w = 0; w < ws.size(); ++w) sum += ws[w].curve.scaled(k[w]);
    CHECK(sum.is_zero());
  }
}

TEST_CASE("h2 ranks") {
  CHECK(h2_rank(build_fan(FanSpec::xpq(1, 1), 4)) == 3);
  CHECK(h2_rank(build_fan(FanSpec::xpq(2, 1), 4)) == 4);
  CHECK(h2_rank(build_fan(FanSpec::xpq(1, 2), 4)) == 4);
  CHECK(h2_rank(build_fan(FanSpec::xpq(2, 2), 5)) == 6);
  for (int d = 1; d <= 4; ++d) CHECK(h2_rank(build_fan(FanSpec::ad(d), 6)) == static_cast<std::size_t>(d));
  CHECK(h2_rank(build_fan(FanSpec::ak(3), 0)) == 3);
  CHECK(h2_rank(build_fan(FanSpec::conifold(), 0)) == 1);
  // the frame basis is an independent count of the same rank
  CHECK(LatticeFrame({1, 1}).variables().size() == 3);
  CHECK(LatticeFrame({2, 1}).variables().size() == 4);
  CHECK(LatticeFrame({2, 2}).variables().size() == 6);
  CHECK(LatticeFrame({3}).variables().size() == 3);
  CHECK(LatticeFrame({1, 1, 1}).variables().size() ==
        h2_rank(build_fan(FanSpec::hypercube({1, 1, 1}), 2)));
}

TEST_CASE("fiber class of the elliptic quotient") {
  for (int d = 1; d <= 3; ++d) {
    LatticeFrame frame({d});
    auto t = make_table(frame.variables());
    FanData fan = build_fan(FanSpec::ad(d), 6);
    CurveClass fiber;
    for (const auto& w : walls(fan)) {
      auto v = fan.rays[w.face[0]][0];
      if (v >= 1 && v <= d) fiber += w.curve;
    }
    Monomial m = frame.monomial(fiber, *t);
    Monomial expect(t->size());
    for (auto& e : expect.exps) e = 1;
    CHECK(m == expect);
    for (const auto& w : walls(fan)) {
      auto v = fan.rays[w.face[0]][0];
      int label = static_cast<int>(((v % d) + d) % d);
      std::string name = d == 1 ? "q" : "q" + std::to_string(label == 0 ? d : label);
      CHECK(frame.monomial(w.curve, *t) == Monomial(*t, {{name, 1}}));
    }
  }
}

TEST_CASE("quotient invariance of ray classes") {
  FanData x = build_fan(FanSpec::xpq(2, 1), 5);
  LatticeFrame frame({2, 1});
  auto t = make_table(frame.variables());
  for (int p = -2; p <= 2; ++p)
    for (int q = -2; q <= 2; ++q) {
      CurveClass diff = curve_class_of_ray(x, Point{p + 2, q}) - curve_class_of_ray(x, Point{p, q});
      CHECK_NOTHROW(frame.monomial(diff, *t));
    }
  CurveClass not_compact(std::map<Point, Rational>{{Point{0, 0}, 1}});
  CHECK_THROWS_AS(frame.coordinates(not_compact), std::domain_error);
}

TEST_CASE("second-difference quotients") {
  auto h3 = square_quotient(3);
  CHECK(h3.size() == 2);
  CHECK(h3[0] == 2);
  CHECK(h3[1] == 1);
  auto hm2 = square_quotient(-2);
  CHECK(hm2[-2] == 1);
  CHECK(hm2[-1] == 2);
  for (int c = -5; c <= 6; ++c) {
    Rational s = 0;
    for (const auto& [k, x] : square_quotient(c)) s += x;
    CHECK(s == ratio(c * (c - 1), 2));
    Rational g = 0;
    for (const auto& [k, x] : linear_quotient(c)) g += x;
    CHECK(g == c);
  }
}

TEST_CASE("finite fan frames") {
  FanData a3 = build_fan(FanSpec::ak(3), 0);
  WallFrame f(a3);
  REQUIRE(f.variables().size() == 3);
  CHECK(f.variables()[0].name == "q1");
  CHECK(f.variables()[2].name == "q3");
  FanData coni = build_fan(FanSpec::conifold(), 0);
  WallFrame fc(coni);
  CHECK(fc.variables().size() == 1);
  FanData sub = sub_fan(a3, {Point{1}, Point{2}, Point{3}});
  CHECK(sub.rays.size() == 3);
  CHECK(sub.cones.size() == 2);
  CHECK(walls(sub).size() == 1);
}

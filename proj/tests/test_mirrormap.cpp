// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "thetaslab/mirrormap.hpp"
#include "thetaslab/slabgen.hpp"

using namespace thetaslab;

namespace {

Series single(TablePtr t, std::initializer_list<std::pair<int, Rational>> coeffs, int order) {
  SeriesBuilder b(t, Rational(order));
  for (const auto& [k, c] : coeffs) {
    Monomial m(t->size());
    m.exps[0] = k;
    b.add(m, c);
  }
  return b.build();
}

}  // namespace

TEST_CASE("log series calculus") {
  TablePtr t = make_table({q_var("y")});
  LogSeries l = LogSeries::log_of(t, {"y"}, "y", 4);
  CHECK(l.log_degree() == 1);
  // theta(log y) = 1, theta(y^2) = 2 y^2
  LogSeries d = l.theta("y");
  CHECK(d.log_degree() == 0);
  CHECK(d.base() == Series::constant(t, 1, 4));
  LogSeries f = LogSeries::from_series(single(t, {{2, 1}}, 4), {"y"});
  CHECK(f.theta("y").base() == single(t, {{2, 2}}, 4));
  // theta(y log y) = y log y + y
  LogSeries yl = l.times(single(t, {{1, 1}}, 4));
  LogSeries dyl = yl.theta("y");
  CHECK(dyl.part({1}) == single(t, {{1, 1}}, 4));
  CHECK(dyl.base() == single(t, {{1, 1}}, 4));
  CHECK((l - l).is_zero());
  CHECK_THROWS_AS(LogSeries::log_of(t, {"y"}, "w", 4), std::invalid_argument);
  CHECK(euler_derivative(single(t, {{3, 2}}, 4), "y") == single(t, {{3, 6}}, 4));
  CHECK(l.to_json().size() == 1);
}

TEST_CASE("g-functions") {
  Geometry a1 = Geometry::builtin("Ak(1)");
  Series g = g_function(a1, 1, 6);
  const auto ex = oracle::a1_gfunction(6);
  for (int k = 1; k <= 6; ++k) {
    Monomial m(1);
    m.exps[0] = k;
    CHECK(g.coeff(m) == ratio(ex[static_cast<std::size_t>(k - 1)].first, ex[static_cast<std::size_t>(k - 1)].second));
  }
  CHECK(g.coeff(Monomial(*g.table(), {{"y1", 3}})) == ratio(10, 3));
  CHECK(g_function(a1, 0, 6).is_zero());
  CHECK(g_function(a1, 2, 6).is_zero());
  Geometry con = Geometry::builtin("Conifold");
  for (std::size_t i = 0; i < con.finite_fan().rays.size(); ++i) CHECK(g_function(con, i, 5).is_zero());
  CHECK_THROWS_AS(g_function(Geometry::builtin("A0"), 0, 2), std::invalid_argument);
}

TEST_CASE("mirror map of A1") {
  Geometry a1 = Geometry::builtin("Ak(1)");
  MirrorMap m = mirror_map(a1, 10);
  CHECK(m.inverts());
  REQUIRE(m.y_of_q.size() == 1);
  const Series& y = m.y_of_q[0];
  auto c = [&](int k) { return y.coeff(Monomial(*m.kahler, {{"q1", k}})); };
  CHECK(c(1) == 1);
  CHECK(c(2) == -2);
  CHECK(c(3) == 3);  // q / (1 + q)^2
  CHECK(m.log_q[0].part({1}) == Series::constant(m.complex, 1, 10));

  Geometry con = Geometry::builtin("Conifold");
  MirrorMap mc = mirror_map(con, 6);
  CHECK(mc.inverts());
  CHECK(mc.y_of_q[0] == Series::variable(mc.kahler, mc.kahler->var(0).name, 6));
}

TEST_CASE("open mirror theorem") {
  Geometry a1 = Geometry::builtin("Ak(1)");
  OpenMirrorCheck c = open_mirror_check(a1, 1, 10);
  CHECK(c.passed());
  CHECK(c.mirror == single(c.mirror.table(), {{0, 1}, {1, 1}}, 10));
  CHECK(open_mirror_check(a1, 0, 10).passed());
  Geometry a2 = Geometry::builtin("Ak(2)");
  CHECK(open_mirror_check(a2, 1, 6).passed());
  CHECK(open_mirror_check(a2, 2, 6).passed());
}

TEST_CASE("GKZ operators") {
  Geometry a1 = Geometry::builtin("Ak(1)");
  const Rational order = 10;
  MirrorMap m = mirror_map(a1, order);
  const auto& basis = dynamic_cast<const WallFrame&>(a1.frame()).basis_classes();
  GKZOperator op = gkz_operator(a1, basis[0], *m.complex);
  CHECK(op.positive.size() == 2);
  CHECK(op.negative.size() == 2);
  LogSeries one = LogSeries::from_series(Series::constant(m.complex, 1, order), m.log_vars);
  CHECK(gkz_apply(a1, op, one, order).is_zero());
  CHECK(gkz_apply(a1, op, m.log_q[0], order).is_zero());
  LogSeries bare = LogSeries::log_of(m.complex, m.log_vars, m.log_vars[0], order);
  LogSeries r = gkz_apply(a1, op, bare, order);
  CHECK_FALSE(r.is_zero());
  // -y (-2 theta)(-2 theta - 1) log y = -y * 2 * (2 theta + 1)(1) ... = -2y
  CHECK(r.base().coeff(Monomial(*m.complex, {{"y1", 1}})) == -2);
  LogSeries squared = bare;
  squared.add_part({2}, Series::constant(m.complex, 1, order));
  CHECK_THROWS_AS(gkz_apply(a1, op, squared, order), std::domain_error);

  Geometry a2 = Geometry::builtin("Ak(2)");
  MirrorMap m2 = mirror_map(a2, 6);
  const auto& b2 = dynamic_cast<const WallFrame&>(a2.frame()).basis_classes();
  for (const auto& d : {b2[0], b2[1], b2[0] + b2[1]}) {
    GKZOperator o = gkz_operator(a2, d, *m2.complex);
    CHECK(gkz_apply(a2, o, LogSeries::from_series(Series::constant(m2.complex, 1, 6), m2.log_vars), 6).is_zero());
    for (const auto& l : m2.log_q) CHECK(gkz_apply(a2, o, l, 6).is_zero());
  }
}

TEST_CASE("g-functions along the A3 chain") {
  Geometry a3 = Geometry::builtin("Ak(3)");
  EquivarianceReport r = g_equivariance(a3, 1, 3, Point{2}, 6);
  CHECK(r.passed());
  CHECK(r.skipped > 0);
  EquivarianceReport wrong = g_equivariance(a3, 1, 2, Point{2}, 6);
  CHECK_FALSE(wrong.passed());
}

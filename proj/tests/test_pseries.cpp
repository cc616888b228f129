// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "thetaslab/pseries.hpp"

#include <random>

using namespace thetaslab;

namespace {

TablePtr qz_table() { return make_table({q_var("q"), z_var("z")}); }
TablePtr q_table() { return make_table({q_var("q")}); }

Series q_poly(const TablePtr& t, std::initializer_list<std::pair<int, Rational>> terms,
              std::optional<Rational> order) {
  SeriesBuilder b(t, order);
  for (const auto& [k, c] : terms) b.add(Monomial(*t, {{"q", k}}), c);
  return b.build();
}

Rational qcoeff(const Series& s, Rational k) { return s.coeff(Monomial(*s.table(), {{"q", k}})); }

Series eta_core(const TablePtr& t, int order) {
  Series p = Series::constant(t, 1, Rational(order));
  for (int n = 1; n <= order; ++n)
    p = p * q_poly(t, {{0, 1}, {n, -1}}, std::nullopt);
  return p;
}

Series random_series(std::mt19937_64& rng, const TablePtr& t, int order, bool zero_constant) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> zexp(-2, 2);
  SeriesBuilder b(t, Rational(order));
  for (int k = 0; k <= order; ++k)
    for (int j = 0; j < 2; ++j) {
      int z = k == 0 ? 0 : zexp(rng);
      b.add(Monomial(*t, {{"q", k}, {"z", z}}), coef(rng));
    }
  Series s = b.build();
  Rational c0 = s.constant_term();
  Series fix = Series::constant(t, (zero_constant ? 0 : 1) - c0, std::nullopt);
  return s + fix;
}

}  // namespace

TEST_CASE("rational formatting round-trips") {
  CHECK(to_fraction(Rational(0)) == "0/1");
  CHECK(to_fraction(Rational(3)) == "3/1");
  CHECK(to_fraction(parse_rational("-6/4")) == "-3/2");
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("ring operations") {
  auto t = q_table();
  Series a = q_poly(t, {{0, 1}, {1, 1}}, Rational(5));
  Series b = q_poly(t, {{0, 1}, {1, -1}}, Rational(5));
  CHECK(a * b == q_poly(t, {{0, 1}, {2, -1}}, Rational(5)));
  CHECK(a + Series::zero(t, std::nullopt) == a);

  auto tz = qz_table();
  Series one_z = Series::constant(tz, 1, std::nullopt) + Series::variable(tz, "z", std::nullopt);
  Series one_qz = Series::constant(tz, 1, std::nullopt) +
                  Series::monomial(tz, Monomial(*tz, {{"q", 1}, {"z", 1}}), 1, std::nullopt);
  Series prod = one_z * one_qz;
  SeriesBuilder expect(tz, std::nullopt);
  expect.add(Monomial(*tz, {}), 1);
  expect.add(Monomial(*tz, {{"z", 1}}), 1);
  expect.add(Monomial(*tz, {{"q", 1}, {"z", 1}}), 1);
  expect.add(Monomial(*tz, {{"q", 1}, {"z", 2}}), 1);
  CHECK(prod == expect.build());
  CHECK(prod.is_exact());
}

TEST_CASE("mismatched tables and lower bounds are rejected") {
  auto t1 = q_table();
  auto t2 = make_table({q_var("p")});
  CHECK_THROWS_AS(Series::constant(t1, 1, Rational(3)) + Series::constant(t2, 1, Rational(3)),
                  std::invalid_argument);
  auto laurent = make_table({q_var("q", 1, Rational(-1))});
  Series inv_q = Series::monomial(laurent, Monomial(*laurent, {{"q", -1}}), 1, Rational(4));
  CHECK_NOTHROW(inv_q * Series::variable(laurent, "q", std::nullopt));
  CHECK_THROWS_AS(inv_q * inv_q, std::domain_error);
}

TEST_CASE("exp, log, invert examples") {
  auto t = q_table();
  CHECK(exp_series(Series::zero(t, Rational(4))) == Series::constant(t, 1, Rational(4)));
  Series e = exp_series(q_poly(t, {{1, 1}, {2, Rational(3, 2)}}, Rational(2)));
  CHECK(e == q_poly(t, {{0, 1}, {1, 1}, {2, 2}}, Rational(2)));

  Series one_plus_q = q_poly(t, {{0, 1}, {1, 1}}, Rational(20));
  CHECK(exp_series(log_series(one_plus_q)) == one_plus_q);
  CHECK(log_series(Series::constant(t, 1, Rational(5))) == Series::zero(t, Rational(5)));

  auto tz = qz_table();
  SeriesBuilder b(tz, Rational(2));
  b.add(Monomial(*tz, {}), 1);
  b.add(Monomial(*tz, {{"q", 1}}), 1);
  b.add(Monomial(*tz, {{"q", 1}, {"z", 1}}), 1);
  Series z0 = log_series(b.build()).z0_part();
  SeriesBuilder expect(tz, Rational(2));
  expect.add(Monomial(*tz, {{"q", 1}}), 1);
  expect.add(Monomial(*tz, {{"q", 2}}), Rational(-1, 2));
  CHECK(z0 == expect.build());

  Series prod3 = Series::constant(t, 1, Rational(3));
  for (int k = 1; k <= 3; ++k) prod3 = prod3 * q_poly(t, {{0, 1}, {k, -1}}, std::nullopt);
  Series l = log_series(invert(prod3));
  CHECK(l == q_poly(t, {{1, 1}, {2, Rational(3, 2)}, {3, Rational(4, 3)}}, Rational(3)));

  CHECK(invert(q_poly(t, {{0, 1}, {1, -1}}, std::nullopt), Rational(6)) ==
        q_poly(t, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}}, Rational(6)));
  CHECK(invert(Series::constant(t, 2, Rational(3))) == Series::constant(t, Rational(1, 2), Rational(3)));

  CHECK_THROWS_AS(exp_series(one_plus_q), std::domain_error);
  CHECK_THROWS_AS(log_series(one_plus_q.scaled(2)), std::domain_error);
  CHECK_THROWS_AS(invert(Series::variable(t, "q", Rational(3))), std::domain_error);
}

TEST_CASE("partition series from inverted Euler product") {
  auto t = q_table();
  const int n = 15;
  Series p = invert(eta_core(t, n));
  auto expect = oracle::partitions(n);
  for (int k = 0; k <= n; ++k) CHECK(qcoeff(p, k) == expect[k]);
  CHECK(qcoeff(p, 5) == 7);
  auto pent = oracle::euler_product(n);
  Series core = eta_core(t, n);
  for (int k = 0; k <= n; ++k) CHECK(qcoeff(core, k) == pent[k]);
}

TEST_CASE("coeff distinguishes unknown from zero") {
  auto tz = qz_table();
  SeriesBuilder b(tz, Rational(3));
  b.add(Monomial(*tz, {}), 1);
  b.add(Monomial(*tz, {{"q", 1}, {"z", 1}}), 2);
  Series f = b.build();
  CHECK(f.coeff(Monomial(*tz, {{"q", 1}, {"z", 1}})) == 2);
  CHECK(f.coeff(Monomial(*tz, {{"q", 2}})) == 0);
  CHECK_THROWS_WITH_AS(f.coeff(Monomial(*tz, {{"q", 4}})), "beyond truncation", std::out_of_range);
}

TEST_CASE("monomial substitution") {
  auto t2 = make_table({q_var("q1"), q_var("q2")});
  auto t1 = q_table();
  SeriesBuilder b(t2, std::nullopt);
  b.add(Monomial(*t2, {}), 1);
  b.add(Monomial(*t2, {{"q1", 1}, {"q2", 1}}), 1);
  Series s = substitute_monomials(b.build(),
                                  {{"q1", {1, Monomial(*t1, {{"q", 1}})}},
                                   {"q2", {1, Monomial(*t1, {{"q", 1}})}}},
                                  t1, Rational(5));
  CHECK(s == q_poly(t1, {{0, 1}, {2, 1}}, Rational(5)));

  auto tp = make_table({q_var("q"), q_var("qp")});
  Series f = Series::variable(tp, "q", Rational(3)) + Series::variable(tp, "qp", Rational(3));
  Series restricted = substitute_monomials(
      f, {{"q", {1, Monomial(*t1, {{"q", 1}})}}, {"qp", {0, Monomial(*t1, {})}}}, t1, Rational(3));
  CHECK(restricted == q_poly(t1, {{1, 1}}, Rational(3)));

  auto tz = qz_table();
  auto laurent = make_table({q_var("q", 1, std::nullopt), z_var("z")});
  SeriesBuilder theta(tz, std::nullopt);
  SeriesBuilder shifted(laurent, std::nullopt);
  for (int l = -3; l <= 4; ++l) {
    theta.add(Monomial(*tz, {{"q", l * (l - 1) / 2}, {"z", l}}), 1);
    shifted.add(Monomial(*laurent, {{"q", l * (l - 1) / 2 - l}, {"z", l}}), 1);
  }
  Series moved = substitute_monomials(theta.build(),
                                      {{"q", {1, Monomial(*laurent, {{"q", 1}})}},
                                       {"z", {1, Monomial(*laurent, {{"q", -1}, {"z", 1}})}}},
                                      laurent, std::nullopt);
  CHECK(moved == shifted.build());

  CHECK_THROWS_AS(substitute_monomials(theta.build(),
                                       {{"q", {1, Monomial(*tz, {{"q", 1}})}},
                                        {"z", {1, Monomial(*tz, {{"q", -1}, {"z", 1}})}}},
                                       tz, std::nullopt),
                  std::domain_error);
  CHECK_THROWS_AS(substitute_monomials(theta.build(), {{"q", {1, Monomial(*tz, {{"q", 1}})}}}, tz,
                                       std::nullopt),
                  std::invalid_argument);
}

TEST_CASE("fractional exponents normalize their denominator") {
  auto t = q_table();
  Series h = Series::monomial(t, Monomial(*t, {{"q", Rational(1, 2)}}), 1, Rational(4));
  Series sq = h * h;
  CHECK(sq.den() == 1);
  CHECK(*sq.order() == Rational(9, 2));
  CHECK(sq == Series::variable(t, "q", Rational(9, 2)));
  auto j = to_json(h);
  CHECK(j.dump() == R"([{"coeff":"1/1","exponents":{"q":"1/2"}}])");
}

TEST_CASE("ring axioms and canonical form on random series") {
  auto t = make_table({q_var("q"), z_var("z", Rational(1, 2))});
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    Series a = random_series(rng, t, 5, false);
    Series b = random_series(rng, t, 5, false);
    Series c = random_series(rng, t, 5, false);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(to_json((a * b) * c).dump() == to_json(a * (b * c)).dump());
    CHECK((a * b).truncated(3) == a.truncated(3) * b.truncated(3));
  }
}

TEST_CASE("exp and log are inverse on random series") {
  auto t = make_table({q_var("q"), z_var("z")});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    Series f = random_series(rng, t, 5, true);
    Series g = random_series(rng, t, 5, true);
    CHECK(log_series(exp_series(f)) == f);
    CHECK(exp_series(f + g) == exp_series(f) * exp_series(g));
    Series one = Series::constant(t, 1, std::nullopt);
    CHECK(exp_series(log_series(f + one)) == f + one);
    CHECK(invert(f + one) * (f + one) == Series::constant(t, 1, Rational(5)));
  }
}

TEST_CASE("compose substitutes series") {
  auto ty = make_table({q_var("y")});
  auto tq = q_table();
  SeriesBuilder b(ty, Rational(4));
  b.add(Monomial(*ty, {{"y", 1}}), 1);
  b.add(Monomial(*ty, {{"y", 2}}), 1);
  Series g = b.build();
  Series image = q_poly(tq, {{1, 1}, {2, -1}}, Rational(4));
  Series r = compose(g, {{"y", image}}, tq, Rational(4));
  // (q - q^2) + (q - q^2)^2 = q - 2q^3 + q^4
  CHECK(r == q_poly(tq, {{1, 1}, {3, -2}, {4, 1}}, Rational(4)));
}

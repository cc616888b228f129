// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "thetaslab/slabgen.hpp"
#include "thetaslab/thetaform.hpp"

#include <algorithm>

using namespace thetaslab;

namespace {

Monomial qz(const Rational& q, const Rational& z) {
  Monomial m(2);
  m.exps[0] = q;
  m.exps[1] = z;
  return m;
}

bool has_note(const IdentityCheck& c, const std::string& text) {
  return std::any_of(c.notes.begin(), c.notes.end(),
                     [&](const std::string& n) { return n.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("eta core against the pentagonal numbers") {
  Series e = eta_core(20);
  auto expect = oracle::euler_product(20);
  for (int k = 0; k <= 20; ++k) {
    Monomial m(1);
    m.exps[0] = k;
    CHECK(e.coeff(m) == expect[static_cast<std::size_t>(k)]);
  }
  CHECK(*e.order() == 20);
}

TEST_CASE("formal theta series") {
  TablePtr t = make_table({q_var("q"), z_var("z")});
  // theta(zeta - tau/2; tau) = sum q^{n(n-1)/2} z^n
  FormalTheta th{{{qz(1, 0)}}, {Rational(0)}, {qz(ratio(-1, 2), 1)}, Monomial(2)};
  Series s = theta_series(th, t, 10);
  CHECK(s.size() == 10);  // n = -4..5
  for (int n = -4; n <= 5; ++n) CHECK(s.coeff(qz(n * (n - 1) / 2, n)) == 1);

  // characteristic 1/2: q^{(n+1/2)^2/2} z^{n+1/2}
  FormalTheta half{{{qz(1, 0)}}, {ratio(1, 2)}, {qz(0, 1)}, Monomial(2)};
  Series h = theta_series(half, t, 5);
  CHECK(h.coeff(qz(ratio(1, 8), ratio(1, 2))) == 1);
  CHECK(h.coeff(qz(ratio(1, 8), ratio(-1, 2))) == 1);
  CHECK(h.coeff(qz(ratio(9, 8), ratio(3, 2))) == 1);

  FormalTheta flat{{{qz(0, 0)}}, {Rational(0)}, {qz(0, 1)}, Monomial(2)};
  CHECK_THROWS_AS(theta_series(flat, t, 3), std::invalid_argument);

  // genus 2 with a vanishing off-diagonal degree
  TablePtr t2 = make_table({q_var("a"), q_var("b"), q_var("c", 0, std::nullopt), z_var("x"), z_var("y")});
  Monomial a(*t2, {{"a", 1}}), b(*t2, {{"b", 1}}), c(*t2, {{"c", 1}});
  FormalTheta g2{{{a, c}, {c, b}}, {Rational(0), Rational(0)}, {Monomial(*t2, {{"x", 1}}), Monomial(*t2, {{"y", 1}})},
                 Monomial(5)};
  Series s2 = theta_series(g2, t2, 2);
  // n1^2 + n2^2 <= 4
  CHECK(s2.size() == 13);
  CHECK(s2.coeff(Monomial(*t2, {{"a", ratio(1, 2)}, {"b", ratio(1, 2)}, {"c", 1}, {"x", -1}, {"y", -1}})) == 1);
  CHECK(s2.coeff(Monomial(*t2, {{"a", ratio(1, 2)}, {"b", ratio(1, 2)}, {"c", -1}, {"x", 1}, {"y", -1}})) == 1);
  CHECK(s2.coeff(Monomial(*t2, {{"b", 2}, {"y", 2}})) == 1);
}

TEST_CASE("triple product") {
  IdentityCheck c = verify_triple_product(20, 7);
  CHECK(c.passed());
  CHECK(c.lhs.size() > 100);
  IdentityCheck broken = verify_triple_product(20, 7, true);
  CHECK_FALSE(broken.passed());
  CHECK(broken.to_json()["passed"] == false);
}

TEST_CASE("log identity") {
  LogIdentity li = verify_log_identity(12);
  CHECK(li.passed());
  // [q^n] = sigma(n)/n
  for (int n = 1; n <= 12; ++n) {
    long sigma = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) sigma += d;
    Monomial m(1);
    m.exps[0] = n;
    CHECK(li.compositions.coeff(m) == ratio(sigma, n));
  }
}

TEST_CASE("direct delta") {
  Geometry a = Geometry::builtin("X1l(1)");
  Series d = delta_direct(a, 8);
  auto p = oracle::partitions(8);
  for (int k = 0; k <= 8; ++k) CHECK(d.coeff(Monomial(*d.table(), {{"q", k}})) == p[static_cast<std::size_t>(k)]);

  Geometry x = Geometry::builtin("X11");
  Normalization n = gs_normalize(x, 4);
  CHECK(delta_direct(x, 4) == n.delta(Point{0, 0}));
  CHECK_THROWS_AS(delta_direct(Geometry::builtin("Xpq(2,1)"), 2), std::invalid_argument);
}

TEST_CASE("surface identities") {
  for (auto [name, order] : {std::pair<const char*, int>{"AZ", 10}, {"Ad(2)", 6}, {"Ad(3)", 6}}) {
    CAPTURE(name);
    IdentityCheck c = verify_identity(name, order);
    CHECK(c.passed());
    CHECK(c.lhs.size() > 20);
  }
}

TEST_CASE("threefold identities") {
  for (auto [name, order] : {std::pair<const char*, int>{"X11", 5}, {"Xpq(2,1)", 4}, {"Xpq(1,2)", 4},
                             {"Xpq(1,1)", 4}, {"Xpq(3,2)", 3}, {"X1l(3)", 3}}) {
    CAPTURE(name);
    IdentityCheck c = verify_identity(name, order);
    CHECK(c.passed());
    CHECK(c.residual.is_zero());
  }
  CHECK(has_note(verify_identity("X11", 3), "equals"));
}

TEST_CASE("axis positions in the general K factor") {
  IdentityCheck c = verify_identity("Hypercube(3,2)", 4);
  CHECK_FALSE(c.passed());
  CHECK(has_note(c, "vanishes"));
  CHECK(verify_identity("Hypercube(2,2)", 3).passed());
  CHECK_THROWS_AS(verify_identity("Ak(2)", 2), std::invalid_argument);
}

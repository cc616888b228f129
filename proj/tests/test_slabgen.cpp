// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "thetaslab/slabgen.hpp"

using namespace thetaslab;

namespace {

Monomial mono(const VarTable& t, std::initializer_list<std::pair<std::string_view, Rational>> e) {
  return Monomial(t, e);
}

std::vector<std::int64_t> single_var_coeffs(const Series& f, int n) {
  std::vector<std::int64_t> out;
  for (int k = 0; k <= n; ++k) {
    Monomial m(1);
    m.exps[0] = k;
    out.push_back(to_int64(Integer(f.coeff(m).get_num())));
  }
  return out;
}

}  // namespace

TEST_CASE("lattice sums") {
  Geometry a0 = Geometry::builtin("A0");
  Series s = lattice_sum(a0, 3);
  const auto& t = *s.table();
  CHECK(s.coeff(Monomial(t.size())) == 1);
  CHECK(s.coeff(mono(t, {{"z", 1}})) == 1);
  CHECK(s.coeff(mono(t, {{"q", 1}, {"z", 2}})) == 1);
  CHECK(s.coeff(mono(t, {{"q", 1}, {"z", -1}})) == 1);
  CHECK(s.coeff(mono(t, {{"q", 2}, {"z", 1}})) == 0);
  CHECK(s.coeff(mono(t, {{"q", 3}, {"z", -2}})) == 1);
  CHECK(s.size() == 5);  // |v|^2 <= 6

  Geometry a1 = Geometry::builtin("Ak(1)");
  Series f = lattice_sum(a1, 10);
  const auto& ta = *f.table();
  CHECK(f.size() == 3);
  CHECK(f.coeff(mono(ta, {{"z", 2}, {"q1", 1}})) == 1);
  CHECK(f.coeff(mono(ta, {{"z", 1}})) == 1);

  Geometry x11 = Geometry::builtin("X11");
  Series x = lattice_sum(x11, 4);
  const auto& tx = *x.table();
  // q_tau^{p(p-1)/2} q_rho^{q(q-1)/2} q_sigma^{pq} z1^p z2^q
  for (const auto& [m, c] : x.terms()) {
    Rational p = m.exps[tx.index("z1")], q = m.exps[tx.index("z2")];
    CHECK(c == 1);
    CHECK(m.exps[tx.index("q_tau")] == p * (p - 1) / 2);
    CHECK(m.exps[tx.index("q_rho")] == q * (q - 1) / 2);
    CHECK(m.exps[tx.index("q_sigma")] == p * q);
  }
}

TEST_CASE("normalization of A0 gives partition numbers") {
  Geometry g = Geometry::builtin("A0");
  Normalization n = gs_normalize(g, 9);
  CHECK(n.converged());
  CHECK(n.integral());
  auto p = oracle::partitions(9);
  const Series& d = n.delta(Point{0});
  for (int k = 0; k <= 9; ++k) CHECK(d.coeff(mono(*d.table(), {{"q", k}})) == p[static_cast<std::size_t>(k)]);
  CHECK_THROWS_AS(d.coeff(mono(*d.table(), {{"q", 10}})), std::out_of_range);
  // n_{beta + 4F} = p(4)
  CurveClass fiber(std::map<Point, Rational>{{{-1}, 4}, {{0}, -8}, {{1}, 4}});
  CHECK(extract_ogw(g, n, Point{7}, fiber) == 5);
  CHECK(extract_ogw(g, n, Point{0}, CurveClass()) == 1);
}

TEST_CASE("normalization of the A1 chain") {
  Geometry g = Geometry::builtin("Ak(1)");
  Normalization n = gs_normalize(g, 6);
  CHECK(n.converged());
  const auto& t = *n.table;
  CHECK(n.delta(Point{0}) == Series::constant(n.table, 1, 6));
  CHECK(n.delta(Point{2}) == Series::constant(n.table, 1, 6));
  SeriesBuilder b(n.table, Rational(6));
  b.add(Monomial(t.size()), 1);
  b.add(mono(t, {{"q1", 1}}), 1);
  CHECK(n.delta(Point{1}) == b.build());
  // F = (1+z)(1+q z)
  SeriesBuilder l(n.table, std::nullopt), r(n.table, std::nullopt);
  l.add(Monomial(t.size()), 1);
  l.add(mono(t, {{"z", 1}}), 1);
  r.add(Monomial(t.size()), 1);
  r.add(mono(t, {{"z", 1}, {"q1", 1}}), 1);
  CHECK(normalized_F(g, n) == (l.build() * r.build()).with_order(Rational(6)));
  const WallFrame* wf = dynamic_cast<const WallFrame*>(&g.frame());
  REQUIRE(wf);
  CHECK(extract_ogw(g, n, Point{1}, wf->basis_classes()[0]) == 1);
}

TEST_CASE("normalization of X11 at low degree") {
  Geometry g = Geometry::builtin("X11");
  Normalization n = gs_normalize(g, 1);
  const Series& d = n.delta(Point{0, 0});
  const auto& t = *n.table;
  SeriesBuilder b(n.table, Rational(1));
  b.add(Monomial(t.size()), 1);
  b.add(mono(t, {{"q_tau", 1}}), 1);
  b.add(mono(t, {{"q_rho", 1}}), 1);
  CHECK(d == b.build());
  CHECK(n.converged());
}

TEST_CASE("fiber restriction for Ad") {
  auto p = oracle::partitions(6);
  for (int d : {2, 3}) {
    Geometry g = Geometry::lattice({d});
    const int kmax = d == 2 ? 3 : 2;
    Normalization n = gs_normalize(g, d * kmax);
    CHECK(n.converged());
    CHECK(n.integral());
    Monomial fiber(n.table->size());
    for (const auto& v : g.kahler_names()) fiber.exps[n.table->index(v)] = 1;
    auto expect = oracle::power(p, d, kmax);
    for (const auto& rep : n.reps) {
      Series f = fiber_restriction(n.delta(rep), fiber);
      REQUIRE(f.order() == Rational(kmax));
      CHECK(single_var_coeffs(f, kmax) == expect);
    }
  }
  CHECK(oracle::power(oracle::partitions(3), 3, 3) == std::vector<std::int64_t>{1, 3, 9, 22});
}

TEST_CASE("product formula for Ad") {
  // d = 1: the triple product against the lattice sum times 1/prod(1-q^k)
  Geometry a0 = Geometry::builtin("A0");
  Series lhs = product_formula_Ad(1, 6);
  Normalization n = gs_normalize(a0, 6);
  CHECK(lhs == normalized_F(a0, n));
  // z^0 q^1: only q z^{-1} from the first product times z from the second
  CHECK(lhs.coeff(Monomial(*lhs.table(), {{"q", 1}})) == 1);

  Geometry a1 = Geometry::lattice({2});
  Normalization n2 = gs_normalize(a1, 4);
  CHECK(product_formula_Ad(2, 4) == normalized_F(a1, n2));
}

TEST_CASE("slab change covariance") {
  Geometry g = Geometry::builtin("A0");
  const Rational order = 8;
  Normalization n = gs_normalize(g, order);
  Series base = normalized_F(g, n);
  // Same cone, apex moved to 1: F_{b,1} = z^{-1} F_{b,0}, written in the
  // chart coordinate a = 1 - v.
  Series moved = slab_function(g, n, SlabChart{Point{1}, {Point{0}}});
  const auto& t = *base.table();
  std::map<std::string, MonomialImage> flip{{"q", {1, mono(t, {{"q", 1}})}}, {"z", {1, mono(t, {{"z", -1}})}}};
  Series mapped = substitute_monomials(base.times_monomial(mono(t, {{"z", -1}})), flip, base.table(), std::nullopt);
  auto window = [&](const Monomial& m) {
    return abs(m.exps[t.index("z")]) <= 2 && m.exps[t.index("q")] <= 4;
  };
  CHECK(mapped.filter(window).with_order(std::nullopt) == moved.filter(window).with_order(std::nullopt));
  CHECK(moved.filter(window).size() > 10);
}

TEST_CASE("stabilization of the A_k chains") {
  Geometry a0 = Geometry::builtin("A0");
  Normalization ref = gs_normalize(a0, 3);
  Series target = collapse_kahler(ref.delta(Point{0}), a0);
  for (int k : {3, 5}) {
    Geometry g = Geometry::builtin("Ak(" + std::to_string(k) + ")");
    const int deg = (k - 1) / 2;
    Normalization n = gs_normalize(g, deg);
    CHECK(n.converged());
    Series c = collapse_kahler(n.delta(Point{(k + 1) / 2}), g);
    CHECK(c == target.truncated(deg));
  }
}

TEST_CASE("restriction to a sub-chain") {
  Geometry a3 = Geometry::builtin("Ak(3)");
  Geometry a1 = Geometry::builtin("Ak(1)");
  const Rational order = 6;
  Series f3 = normalized_F(a3, gs_normalize(a3, order));
  Series f1 = normalized_F(a1, gs_normalize(a1, order));
  Geometry sub = Geometry::finite(sub_fan(a3.finite_fan(), {Point{0}, Point{1}, Point{2}}), "Ak(1)");
  Series r = restrict_to_subfan(f3, sub, a3, f1.table());
  CHECK(r == f1);
  CHECK(restrict_to_subfan(r, a1, a1, f1.table()) == r);
}

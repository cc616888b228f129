// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/slabgen.hpp"
#include "thetaslab/thetaform.hpp"

#include <algorithm>
#include <functional>
#include <regex>
#include <stdexcept>

namespace thetaslab {

namespace {

Monomial z_monomial(const Geometry& g, const VarTable& t, std::size_t axis, const Rational& e) {
  Monomial m(t.size());
  m.exps[t.index(g.z_names()[axis])] = e;
  return m;
}

IdentityCheck finish(std::string name, const Rational& order, Series lhs, Series rhs) {
  IdentityCheck c;
  c.name = std::move(name);
  c.order = order;
  c.residual = lhs - rhs;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  if (c.residual.order() && *c.residual.order() < order)
    c.notes.push_back("residual complete only to order " + to_fraction(*c.residual.order()));
  return c;
}

// prod(1 - r^k)^{-d} sum_p r^{p^2/2 - p^2/2d} (Q_1..Q_{d-1})^{-p/d}
//   vartheta_{d-1}(T_i - p rho; rho) Theta_1[p/d; sum T_i - d rho/2](d xi; d rho)
Series ad_theta_form(const Geometry& g, TablePtr t, const Rational& order) {
  const int d = g.periods()[0];
  auto names = g.kahler_names();
  const std::size_t n = t->size();
  Monomial r(n);
  for (const auto& nm : names) r.exps[t->index(nm)] = 1;
  std::vector<Monomial> cum;  // Q_1 .. Q_{d-1}
  Monomial acc(n);
  for (int j = 0; j + 1 < d; ++j) {
    acc.exps[t->index(names[static_cast<std::size_t>(j)])] += 1;
    cum.push_back(acc);
  }
  const auto m = static_cast<std::size_t>(d);
  Series sum = Series::zero(t, order);
  for (int p = 0; p < d; ++p) {
    FormalTheta th;
    th.period = std::vector<std::vector<Monomial>>(m, std::vector<Monomial>(m, Monomial(n)));
    auto inner = bellman_period(r, m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = 0; j + 1 < m; ++j) th.period[i][j] = inner[i][j];
    th.period[m - 1][m - 1] = r.pow(d);
    th.characteristic.assign(m, Rational(0));
    th.characteristic[m - 1] = ratio(p, d);
    for (std::size_t i = 0; i + 1 < m; ++i) th.shift.push_back(r.pow(-p) * cum[i]);
    Monomial last = z_monomial(g, *t, 0, d) * r.pow(ratio(-d, 2));
    for (const auto& c : cum) last = last * c;
    th.shift.push_back(last);
    th.prefactor = r.pow(ratio(p * p, 2) - ratio(p * p, 2 * d));
    for (const auto& c : cum) th.prefactor = th.prefactor * c.pow(ratio(-p, d));
    sum += theta_series(th, t, order);
  }
  Series eta = euler_product(t, r, order);
  return invert(eta).pow(d) * sum;
}

// Theta form of a lattice geometry with periods d_1..d_l:
//   sum_a K_a Delta_a Theta_l[a_i/d_i; -d_i tau_i/2 + sum_k k tau_{i,(-1-k)e_i}](d_i zeta_i; Omega)
// with the square generator at v standing for tau_{i,v} and the mixed one for
// sigma_{(i,j),v}. mixed_row_at_a keeps the row index a_j (j != i) in the
// tau_{i,(a_i-1-k) e_i} factors, as in the two-dimensional statement.
Series lattice_theta_form(const Geometry& g, TablePtr t, const Rational& order,
                          const std::function<Series(const Point&)>& delta, bool mixed_row_at_a) {
  const LatticeFrame& f = *g.lattice_frame();
  const auto& d = g.periods();
  const std::size_t l = d.size();
  const std::size_t n = t->size();
  auto gen = [&](std::size_t i, std::size_t j, const Point& v) {
    return f.generator_monomial(static_cast<int>(i), static_cast<int>(j), v, *t);
  };
  auto axis_point = [&](std::size_t i, std::int64_t x) {
    Point p(l, 0);
    p[i] = x;
    return p;
  };
  // Q_i and Q_(i,j), independent of the orbit.
  std::vector<Monomial> qi(l, Monomial(n));
  std::vector<std::vector<Monomial>> qij(l, std::vector<Monomial>(l, Monomial(n)));
  for (std::size_t i = 0; i < l; ++i)
    for (int k = 0; k < d[i]; ++k) qi[i] = qi[i] * gen(i, i, axis_point(i, k));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = i + 1; j < l; ++j) {
      Monomial s(n);
      for (int k = 0; k < d[j]; ++k) s = s * gen(i, j, axis_point(j, k));
      qij[i][j] = qij[j][i] = s.pow(d[i]);
    }
  // prod_k Q_{i,(-1-k) e_i}^k
  std::vector<Monomial> tilt(l, Monomial(n));
  for (std::size_t i = 0; i < l; ++i)
    for (int k = 0; k < d[i]; ++k) tilt[i] = tilt[i] * gen(i, i, axis_point(i, -1 - k)).pow(k);

  std::vector<std::vector<Monomial>> period(l, std::vector<Monomial>(l));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) period[i][j] = i == j ? qi[i].pow(d[i]) : qij[i][j];
  std::vector<Monomial> shift;
  for (std::size_t i = 0; i < l; ++i)
    shift.push_back(z_monomial(g, *t, i, d[i]) * qi[i].pow(ratio(-d[i], 2)) * tilt[i]);

  Series sum = Series::zero(t, order);
  for (const auto& a : g.orbit_reps()) {
    Monomial k(n);
    for (std::size_t i = 0; i < l; ++i) {
      const Rational ai = static_cast<long>(a[i]);
      k = k * qi[i].pow(-ai * ai / (2 * d[i]) + ai / 2);
      for (std::size_t j = i + 1; j < l; ++j)
        k = k * qij[i][j].pow(-ai * static_cast<long>(a[j]) / (d[i] * d[j]));
      k = k * tilt[i].pow(-ai / d[i]);
      for (std::int64_t m = 0; m < a[i]; ++m) {
        Point v = mixed_row_at_a ? a : Point(l, 0);
        v[i] = a[i] - 1 - m;
        k = k * gen(i, i, v).pow(Rational(static_cast<long>(m)));
      }
    }
    for (std::size_t i = 1; i < l; ++i)
      for (std::size_t kk = 0; kk < i; ++kk) {
        Monomial s(n);
        for (std::int64_t j = 0; j < a[i]; ++j) {
          Point v(l, 0);
          v[i] = j;
          for (std::size_t r = i + 1; r < l; ++r) v[r] = a[r];
          s = s * gen(kk, i, v);
        }
        k = k * s.pow(Rational(static_cast<long>(a[kk])));
      }
    FormalTheta th;
    th.period = period;
    th.shift = shift;
    th.prefactor = k;
    for (std::size_t i = 0; i < l; ++i) th.characteristic.push_back(ratio(a[i], d[i]));
    sum += delta(a) * theta_series(th, t, order);
  }
  return sum;
}

}  // namespace

IdentityCheck verify_identity(const std::string& name, const Rational& order) {
  static const std::regex ad(R"(^Ad\((\d+)\)$)");
  std::smatch m;
  const bool is_az = name == "AZ";
  const bool is_ad = std::regex_match(name, m, ad);
  Geometry g = is_az ? Geometry::builtin("A0") : Geometry::builtin(name);
  if (!g.is_lattice()) throw std::invalid_argument("no theta form for '" + name + "'");
  Normalization n = gs_normalize(g, order);
  TablePtr t = g.table(ratio(1, 2), true);
  Series lhs = regraded(normalized_F(g, n), t, order);

  if (is_az || is_ad) {
    if (g.lattice_dim() != 1) throw std::invalid_argument(name + " is not a surface");
    return finish(name, order, lhs, ad_theta_form(g, t, order));
  }

  const bool unit = std::all_of(g.periods().begin(), g.periods().end(), [](int d) { return d == 1; });
  const bool direct = unit && (name == "X11" || name.rfind("X1l", 0) == 0);
  std::vector<std::string> notes;
  std::function<Series(const Point&)> delta;
  if (direct) {
    Series dd = delta_direct(g, order);
    const Series& gs = n.delta(g.orbit_reps().front());
    notes.push_back(std::string("direct delta ") + (dd == gs ? "equals" : "differs from") +
                    " the normalization delta");
    Series dl = regraded(dd, t, order);
    delta = [dl](const Point&) { return dl; };
  } else {
    delta = [&](const Point& a) { return regraded(n.delta(a), t, order); };
  }
  const bool two_dim = name.rfind("Xpq", 0) == 0;
  IdentityCheck c = finish(name, order, lhs, lattice_theta_form(g, t, order, delta, two_dim));
  c.notes.insert(c.notes.end(), notes.begin(), notes.end());
  if (!c.passed() && !two_dim) {
    Series alt = lhs - lattice_theta_form(g, t, order, delta, true);
    c.notes.push_back(std::string("with row index a_j kept in the tau factors the residual ") +
                      (alt.is_zero() ? "vanishes" : "has " + std::to_string(alt.size()) + " terms"));
  }
  return c;
}

}  // namespace thetaslab

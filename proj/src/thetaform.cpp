// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/thetaform.hpp"

#include "thetaslab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace thetaslab {

namespace {

Rational mono_degree(const Monomial& m, const VarTable& t) {
  Rational d = 0;
  for (std::size_t i = 0; i < t.size(); ++i) d += t.var(i).weight * m.exps[i];
  return d;
}

std::int64_t abs_sum(const Point& p) {
  std::int64_t s = 0;
  for (auto x : p) s += x < 0 ? -x : x;
  return s;
}

std::int64_t norm2(const Point& p) {
  std::int64_t s = 0;
  for (auto x : p) s += x * x;
  return s;
}

// Enumerates integer n with x = n + a on or inside the ellipsoid
// f(x) <= order, where G is the Hessian, s the linear part and c the constant.
template <class Body>
void ellipsoid_points(const RMatrix& g, const RVector& s, const Rational& c, const RVector& a,
                      const Rational& order, Body&& body) {
  const std::size_t m = g.size();
  for (std::size_t k = 1; k <= m; ++k) {
    RMatrix minor(k, RVector(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor[i][j] = g[i][j];
    if (determinant(minor) <= 0) throw std::invalid_argument("theta degree form is not positive definite");
  }
  // Inverse columns give the centre and the bounding box of the ellipsoid.
  RMatrix inv(m, RVector(m));
  for (std::size_t j = 0; j < m; ++j) {
    RVector e(m, Rational(0));
    e[j] = 1;
    auto col = solve(g, e, m);
    for (std::size_t i = 0; i < m; ++i) inv[i][j] = (*col)[i];
  }
  RVector centre = mat_vec(inv, s);
  Rational fmin = c;
  for (std::size_t i = 0; i < m; ++i) {
    centre[i] = -centre[i];
    fmin += s[i] * centre[i] / 2;
  }
  Rational budget = order - fmin;
  if (budget < 0) return;
  std::vector<std::int64_t> lo(m), hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    double r = std::sqrt(Rational(2 * budget * inv[i][i]).get_d());
    double mid = Rational(centre[i] - a[i]).get_d();
    lo[i] = static_cast<std::int64_t>(std::floor(mid - r)) - 1;
    hi[i] = static_cast<std::int64_t>(std::ceil(mid + r)) + 1;
  }
  std::vector<std::int64_t> n(lo);
  RVector x(m);
  while (true) {
    for (std::size_t i = 0; i < m; ++i) x[i] = a[i] + static_cast<long>(n[i]);
    Rational f = c;
    for (std::size_t i = 0; i < m; ++i) {
      f += s[i] * x[i];
      for (std::size_t j = 0; j < m; ++j) f += g[i][j] * x[i] * x[j] / 2;
    }
    if (f <= order) body(x);
    std::size_t k = 0;
    while (k < m && n[k] == hi[k]) {
      n[k] = lo[k];
      ++k;
    }
    if (k == m) break;
    ++n[k];
  }
}

}  // namespace

Series euler_product(TablePtr table, const Monomial& m, const Rational& order) {
  Rational d = mono_degree(m, *table);
  if (d <= 0) throw std::invalid_argument("euler product needs a positive-degree monomial");
  Series out = Series::constant(table, 1, order);
  for (long k = 1; d * k <= order; ++k) {
    SeriesBuilder f(table, std::nullopt);
    f.add(Monomial(table->size()), 1);
    f.add(m.pow(k), -1);
    out = out * f.build();
  }
  return out;
}

Series eta_core(const Rational& order, const std::string& var) {
  TablePtr t = make_table({q_var(var)});
  Monomial q(1);
  q.exps[0] = 1;
  return euler_product(t, q, order);
}

Series theta_series(const FormalTheta& theta, TablePtr table, const Rational& order) {
  const std::size_t m = theta.genus();
  if (theta.period.size() != m || theta.characteristic.size() != m)
    throw std::invalid_argument("theta data of inconsistent genus");
  const auto& t = *table;
  RMatrix g(m, RVector(m));
  RVector s(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (theta.period[i].size() != m) throw std::invalid_argument("period matrix is not square");
    for (std::size_t j = 0; j < m; ++j) {
      if (!(theta.period[i][j] == theta.period[j][i])) throw std::invalid_argument("period matrix is not symmetric");
      g[i][j] = mono_degree(theta.period[i][j], t);
    }
    s[i] = mono_degree(theta.shift[i], t);
  }
  Monomial pref = theta.prefactor.exps.empty() ? Monomial(t.size()) : theta.prefactor;
  SeriesBuilder b(table, order);
  ellipsoid_points(g, s, mono_degree(pref, t), theta.characteristic, order, [&](const RVector& x) {
    Monomial term = pref;
    for (std::size_t i = 0; i < m; ++i) {
      term = term * theta.shift[i].pow(x[i]);
      for (std::size_t j = 0; j < m; ++j) term = term * theta.period[i][j].pow(x[i] * x[j] / 2);
    }
    b.add(term, 1);
  });
  return b.build();
}

std::vector<std::vector<Monomial>> bellman_period(const Monomial& m, std::size_t genus) {
  std::vector<std::vector<Monomial>> p(genus, std::vector<Monomial>(genus, m));
  for (std::size_t i = 0; i < genus; ++i) p[i][i] = m.pow(2);
  return p;
}

nlohmann::json IdentityCheck::to_json() const {
  nlohmann::json j;
  j["identity"] = name;
  j["order"] = to_fraction(order);
  j["passed"] = passed();
  j["lhs_terms"] = lhs.size();
  j["rhs_terms"] = rhs.size();
  j["residual"] = thetaslab::to_json(residual);
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

IdentityCheck verify_triple_product(const Rational& order, int z_window, bool drop_factor) {
  TablePtr t = make_table({q_var("q"), z_var("z")});
  auto mono = [&](const Rational& qe, const Rational& ze) {
    Monomial m(2);
    m.exps[0] = qe;
    m.exps[1] = ze;
    return m;
  };
  Series prod = Series::constant(t, 1, order);
  auto times = [&](const Monomial& m) {
    SeriesBuilder f(t, std::nullopt);
    f.add(Monomial(2), 1);
    f.add(m, 1);
    prod = prod * f.build();
  };
  for (long i = 1; i <= order; ++i) times(mono(i, -1));
  for (long j = 0; j <= order; ++j)
    if (!(drop_factor && j == 1)) times(mono(j, 1));

  FormalTheta th{{{mono(1, 0)}}, {Rational(0)}, {mono(ratio(-1, 2), 1)}, Monomial(2)};
  Monomial q = mono(1, 0);
  Series rhs = invert(euler_product(t, q, order)) * theta_series(th, t, order);
  auto window = [&](const Monomial& m) { return abs(m.exps[1]) <= z_window; };

  IdentityCheck c;
  c.name = drop_factor ? "triple product (factor 1+qz removed)" : "triple product";
  c.order = order;
  c.lhs = prod.filter(window);
  c.rhs = rhs.filter(window);
  c.residual = c.lhs - c.rhs;
  c.notes.push_back("z window " + std::to_string(z_window));
  return c;
}

LogIdentity verify_log_identity(int order) {
  if (order < 1) throw std::invalid_argument("log identity needs order >= 1");
  TablePtr t = make_table({q_var("q")});
  auto qpow = [](long k) {
    Monomial m(1);
    m.exps[0] = k;
    return m;
  };
  LogIdentity out;

  SeriesBuilder direct(t, Rational(order));
  for (long n = 1; n <= order; ++n)
    for (long l = 1; l <= n; ++l)
      if (n % l == 0) direct.add(qpow(n), ratio(1, l));
  out.divisor_sum = direct.build();

  // (partial sum, sum of squares) -> number of compositions; a state can
  // still close only if squares + |sum| stay within 2 * order.
  const long cap = 2L * order;
  std::map<std::pair<long, long>, Integer> states{{{0, 0}, 1}};
  std::vector<Rational> coeff(static_cast<std::size_t>(order) + 1, Rational(0));
  for (long j = 1; j <= cap && !states.empty(); ++j) {
    std::map<std::pair<long, long>, Integer> next;
    for (const auto& [st, cnt] : states) {
      auto [s, sq] = st;
      for (long l = -cap; l <= cap; ++l) {
        if (l == 0) continue;
        long ns = s + l, nsq = sq + l * l;
        if (nsq + (ns < 0 ? -ns : ns) > cap) continue;
        next[{ns, nsq}] += cnt;
      }
    }
    states = std::move(next);
    Rational sign = (j % 2 == 0) ? ratio(1, j) : ratio(-1, j);
    for (const auto& [st, cnt] : states)
      if (st.first == 0) coeff[static_cast<std::size_t>(st.second / 2)] += sign * Rational(cnt);
  }
  SeriesBuilder comp(t, Rational(order));
  for (long n = 1; n <= order; ++n) comp.add(qpow(n), coeff[static_cast<std::size_t>(n)]);
  out.compositions = comp.build();

  Series logs = Series::zero(t, Rational(order));
  for (long k = 1; k <= order; ++k) {
    SeriesBuilder f(t, Rational(order));
    f.add(qpow(0), 1);
    f.add(qpow(k), -1);
    logs -= log_series(f.build());
  }
  out.logarithm = logs;
  return out;
}

Series delta_direct(const Geometry& g, const Rational& order) {
  const LatticeFrame* frame = g.lattice_frame();
  if (!frame) throw std::invalid_argument("direct delta needs a lattice geometry");
  for (int d : g.periods())
    if (d != 1) throw std::invalid_argument("direct delta needs unit periods");
  const std::size_t l = static_cast<std::size_t>(g.lattice_dim());
  TablePtr t = g.phi_table();
  Point origin(l, 0);
  std::vector<std::vector<Monomial>> gen(l, std::vector<Monomial>(l));
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j)
      gen[i][j] = frame->generator_monomial(static_cast<int>(i), static_cast<int>(j), origin, *t);
  // exp(pi i m Omega m)
  auto weight = [&](const Point& m) {
    Monomial w(t->size());
    for (std::size_t i = 0; i < l; ++i) {
      w = w * gen[i][i].pow(ratio(m[i] * m[i], 2));
      for (std::size_t j = i + 1; j < l; ++j) w = w * gen[i][j].pow(Rational(static_cast<long>(m[i] * m[j])));
    }
    return w;
  };
  const auto reach = static_cast<int>(std::floor(std::sqrt(Rational(2 * order).get_d()))) + 1;
  std::vector<std::pair<Point, Monomial>> parts;
  for (const auto& m : lattice_box(static_cast<int>(l), -reach, reach)) {
    if (norm2(m) == 0 || Rational(static_cast<long>(norm2(m))) > 2 * order) continue;
    parts.emplace_back(m, weight(m));
  }
  // A state with partial sum s needs at least |s|_1 / 2 more degree to close.
  auto budget = [&](const Point& s) -> Rational { return order - ratio(abs_sum(s), 2); };

  std::map<Point, Series> states{{origin, Series::constant(t, 1, order)}};
  Series log_delta = Series::zero(t, order);
  const long max_parts = to_int64(floor_of(2 * order));
  for (long j = 1; j <= max_parts && !states.empty(); ++j) {
    std::map<Point, Series> next;
    for (const auto& [s, f] : states) {
      for (const auto& [m, w] : parts) {
        Point u = s;
        for (std::size_t i = 0; i < l; ++i) u[i] += m[i];
        Rational room = budget(u);
        auto val = f.valuation();
        if (room < 0 || !val || *val + mono_degree(w, *t) > room) continue;
        Series term = f.times_monomial(w).truncated(room);
        if (term.is_zero()) continue;
        auto it = next.find(u);
        if (it == next.end())
          next.emplace(u, std::move(term));
        else
          it->second += term;
      }
    }
    states = std::move(next);
    auto closed = states.find(origin);
    if (j >= 2 && closed != states.end())
      log_delta += closed->second.scaled(j % 2 == 0 ? ratio(1, j) : ratio(-1, j));
  }
  return exp_series(log_delta.truncated(order), order);
}

}  // namespace thetaslab

// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/mirrormap.hpp"

#include "thetaslab/slabgen.hpp"

#include <functional>
#include <set>
#include <stdexcept>

namespace thetaslab {

namespace {

const FanData& finite_only(const Geometry& g) {
  if (g.is_lattice()) throw std::invalid_argument("mirror map needs a finite fan");
  return g.finite_fan();
}

Rational class_degree(const Geometry& g, const CurveClass& c) {
  Rational d = 0;
  auto coords = g.frame().coordinates(c);
  for (std::size_t b = 0; b < coords.size(); ++b) d += g.kahler_vars()[b].weight * coords[b];
  return d;
}

Monomial class_in(const Geometry& g, const CurveClass& c, const VarTable& t) {
  auto coords = g.frame().coordinates(c);
  Monomial m(t.size());
  for (std::size_t b = 0; b < coords.size(); ++b) m.exps[b] = coords[b];
  return m;
}

bool inside(const FanData& fan, const CurveClass& c) {
  for (const auto& [v, x] : c.support())
    if (!fan.ray_index(v)) return false;
  return true;
}

// D_i.alpha_b for every ray i and basis class b.
std::vector<std::vector<Rational>> divisor_pairings(const Geometry& g) {
  const FanData& fan = finite_only(g);
  const auto& basis = dynamic_cast<const WallFrame&>(g.frame()).basis_classes();
  std::vector<std::vector<Rational>> out(fan.rays.size(), std::vector<Rational>(basis.size()));
  for (std::size_t i = 0; i < fan.rays.size(); ++i)
    for (std::size_t b = 0; b < basis.size(); ++b) out[i][b] = basis[b].pairing(fan.rays[i]);
  return out;
}

// -sum_i (D_i.alpha_b) g_i(y)
std::vector<Series> log_corrections(const Geometry& g, const Rational& order) {
  const FanData& fan = finite_only(g);
  TablePtr y = complex_table(g);
  auto pair = divisor_pairings(g);
  std::vector<Series> gs;
  for (std::size_t i = 0; i < fan.rays.size(); ++i) gs.push_back(g_function(g, i, order));
  std::vector<Series> out;
  for (std::size_t b = 0; b < g.kahler_vars().size(); ++b) {
    Series h = Series::zero(y, order);
    for (std::size_t i = 0; i < fan.rays.size(); ++i)
      if (pair[i][b] != 0) h -= gs[i].scaled(pair[i][b]);
    out.push_back(h);
  }
  return out;
}

// Re-express f in `target`, which may lack variables f only carries at exponent 0.
Series project(const Series& f, TablePtr target, const Rational& order) {
  const auto& src = *f.table();
  SeriesBuilder b(target, order);
  for (const auto& [e, c] : f.raw_terms()) {
    Monomial m(target->size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto k = target->find(src.var(i).name);
      if (!k) throw std::domain_error("term in " + src.var(i).name + " has no counterpart");
      m.exps[*k] = f.exponent(e, i);
    }
    b.add(m, c);
  }
  return b.build();
}

Series variable_times_exp(TablePtr t, const std::string& name, const Series& h, const Rational& order) {
  return Series::variable(t, name, order) * exp_series(h, order);
}

}  // namespace

std::string complex_name(const std::string& kahler_name) {
  if (!kahler_name.empty() && kahler_name[0] == 'q') return "y" + kahler_name.substr(1);
  return "y_" + kahler_name;
}

TablePtr kahler_table(const Geometry& g) { return make_table(g.kahler_vars()); }

TablePtr complex_table(const Geometry& g) {
  std::vector<Variable> vars = g.kahler_vars();
  for (auto& v : vars) v.name = complex_name(v.name);
  return make_table(std::move(vars));
}

std::vector<CurveClass> effective_classes(const Geometry& g, const Rational& order) {
  std::vector<Wall> ws = walls(finite_only(g));
  std::vector<CurveClass> gens;
  std::vector<Rational> degs;
  for (const auto& w : ws) {
    Rational d = class_degree(g, w.curve);
    if (d <= 0) throw std::logic_error("wall curve of non-positive degree");
    gens.push_back(w.curve);
    degs.push_back(d);
  }
  std::set<std::map<Point, Rational>> seen;
  std::vector<CurveClass> out;
  // depth-first over multiplicities of each wall
  std::function<void(std::size_t, const CurveClass&, const Rational&)> walk =
      [&](std::size_t w, const CurveClass& acc, const Rational& deg) {
        if (w == gens.size()) {
          if (deg > 0 && seen.insert(acc.support()).second) out.push_back(acc);
          return;
        }
        CurveClass c = acc;
        for (Rational d = deg; d <= order; d += degs[w]) {
          walk(w + 1, c, d);
          c += gens[w];
        }
      };
  walk(0, CurveClass(), Rational(0));
  return out;
}

Series g_function(const Geometry& g, std::size_t ray, const Rational& order) {
  const FanData& fan = finite_only(g);
  if (ray >= fan.rays.size()) throw std::out_of_range("ray index");
  TablePtr y = complex_table(g);
  SeriesBuilder b(y, order);
  for (const auto& d : effective_classes(g, order)) {
    Rational own = d.pairing(fan.rays[ray]);
    if (own >= 0) continue;
    Rational denom = 1;
    bool ok = true;
    for (std::size_t p = 0; p < fan.rays.size() && ok; ++p) {
      if (p == ray) continue;
      Rational x = d.pairing(fan.rays[p]);
      if (x < 0 || !is_integer(x)) ok = false;
      else denom *= factorial(to_int64(x.get_num()));
    }
    if (!ok || !is_integer(own)) continue;
    const long n = to_int64(own.get_num());
    Rational c = factorial(-n - 1) / denom;
    if (n % 2 != 0) c = -c;
    b.add(class_in(g, d, *y), c);
  }
  return b.build();
}

bool MirrorMap::inverts() const {
  for (const auto& r : round_trip)
    if (!r.is_zero()) return false;
  return true;
}

MirrorMap mirror_map(const Geometry& g, const Rational& order) {
  MirrorMap m;
  m.kahler = kahler_table(g);
  m.complex = complex_table(g);
  for (const auto& v : m.complex->vars()) m.log_vars.push_back(v.name);
  auto h = log_corrections(g, order);
  const std::size_t n = h.size();
  for (std::size_t b = 0; b < n; ++b) {
    if (h[b].constant_term() != 0) throw std::logic_error("mirror map is not identity plus higher order");
    LogSeries l = LogSeries::log_of(m.complex, m.log_vars, m.log_vars[b], order);
    l += LogSeries::from_series(h[b], m.log_vars);
    m.log_q.push_back(l);
    m.q_of_y.push_back(variable_times_exp(m.complex, m.log_vars[b], h[b], order));
  }
  // y = q exp(-h(y)), one more correct degree per pass
  std::vector<Series> y;
  for (std::size_t b = 0; b < n; ++b) y.push_back(Series::variable(m.kahler, m.kahler->var(b).name, order));
  const long passes = to_int64(floor_of(order)) + 2;
  for (long it = 0; it < passes; ++it) {
    std::map<std::string, Series> images;
    for (std::size_t b = 0; b < n; ++b) images.emplace(m.log_vars[b], y[b]);
    std::vector<Series> next;
    for (std::size_t b = 0; b < n; ++b) {
      Series hq = compose(h[b], images, m.kahler, order);
      next.push_back(variable_times_exp(m.kahler, m.kahler->var(b).name, -hq, order));
    }
    const bool stable = next == y;
    y = std::move(next);
    if (stable) break;
  }
  m.y_of_q = y;
  std::map<std::string, Series> images;
  for (std::size_t b = 0; b < n; ++b) images.emplace(m.log_vars[b], y[b]);
  for (std::size_t b = 0; b < n; ++b)
    m.round_trip.push_back(compose(m.q_of_y[b], images, m.kahler, order) -
                           Series::variable(m.kahler, m.kahler->var(b).name, order));
  return m;
}

OpenMirrorCheck open_mirror_check(const Geometry& g, std::size_t ray, const Rational& order) {
  const FanData& fan = finite_only(g);
  MirrorMap m = mirror_map(g, order);
  std::map<std::string, Series> images;
  for (std::size_t b = 0; b < m.log_vars.size(); ++b) images.emplace(m.log_vars[b], m.y_of_q[b]);
  OpenMirrorCheck c;
  c.mirror = exp_series(compose(g_function(g, ray, order), images, m.kahler, order), order);
  Normalization n = gs_normalize(g, order);
  c.delta = project(n.delta(fan.rays.at(ray)), m.kahler, order);
  c.residual = c.mirror - c.delta;
  return c;
}

GKZOperator gkz_operator(const Geometry& g, const CurveClass& d, const VarTable& complex) {
  const FanData& fan = finite_only(g);
  GKZOperator op;
  op.d = d;
  for (std::size_t i = 0; i < fan.rays.size(); ++i) {
    Rational x = d.pairing(fan.rays[i]);
    if (!is_integer(x)) throw std::invalid_argument("GKZ class must be integral");
    const long n = to_int64(x.get_num());
    for (long k = 0; k < n; ++k) op.positive.push_back({i, k});
    for (long k = 0; k < -n; ++k) op.negative.push_back({i, k});
  }
  if (op.positive.size() != op.negative.size())
    throw std::logic_error("factor counts differ; the fan is not Calabi-Yau");
  op.y_power = class_in(g, d, complex);
  return op;
}

LogSeries gkz_apply(const Geometry& g, const GKZOperator& op, const LogSeries& f, const Rational& order) {
  if (f.log_degree() > 1) throw std::domain_error("GKZ inputs must have log-degree <= 1");
  auto pair = divisor_pairings(g);
  const auto& vars = f.log_vars();
  auto apply = [&](const std::vector<GKZFactor>& factors) {
    LogSeries x = f.truncated(order);
    for (const auto& fac : factors) {
      LogSeries next = x.scaled(-fac.shift);
      for (std::size_t b = 0; b < vars.size(); ++b)
        if (pair[fac.ray][b] != 0) next += x.theta(vars[b]).scaled(pair[fac.ray][b]);
      x = next;
    }
    return x;
  };
  LogSeries pos = apply(op.positive);
  LogSeries neg = apply(op.negative).times(Series::monomial(f.table(), op.y_power, 1, std::nullopt));
  return (pos - neg).truncated(order);
}

EquivarianceReport g_equivariance(const Geometry& g, std::size_t ray_a, std::size_t ray_b,
                                  const Point& shift, const Rational& order) {
  const FanData& fan = finite_only(g);
  TablePtr y = complex_table(g);
  Series ga = g_function(g, ray_a, order), gb = g_function(g, ray_b, order);
  EquivarianceReport r;
  for (const auto& d : effective_classes(g, order)) {
    Rational ca = ga.coeff(class_in(g, d, *y));
    if (ca == 0) continue;
    CurveClass moved = d.translated(shift);
    if (!inside(fan, moved)) {
      ++r.skipped;
      continue;
    }
    ++r.compared;
    if (gb.coeff(class_in(g, moved, *y)) != ca) ++r.mismatched;
  }
  return r;
}

}  // namespace thetaslab

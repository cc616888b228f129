// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/slabgen.hpp"

#include "thetaslab/parallel.hpp"

#include <sstream>
#include <stdexcept>

namespace thetaslab {

namespace {

Rational monomial_degree(const Monomial& m, const VarTable& t) {
  Rational d = 0;
  for (std::size_t i = 0; i < t.size(); ++i) d += t.var(i).weight * m.exps[i];
  return d;
}

struct ChartTerm {
  Point rep;
  Monomial mono;
};

std::vector<ChartTerm> chart_terms(const Geometry& g, const SlabChart& chart, const VarTable& table,
                                   const Rational& order) {
  std::vector<ChartTerm> out;
  for (const auto& v : g.rays_near(chart.apex, order)) {
    ChartTerm t{g.orbit_rep(v), g.ray_monomial(v, chart, table)};
    Rational deg = monomial_degree(t.mono, table);
    if (v == chart.apex) continue;
    if (deg <= 0) throw std::logic_error("slab term of non-positive degree; grading does not apply");
    if (deg <= order) out.push_back(std::move(t));
  }
  return out;
}

Series assemble(const std::map<Point, Series>& deltas, const Point& apex_rep,
                const std::vector<ChartTerm>& terms) {
  Series f = deltas.at(apex_rep);
  for (const auto& t : terms) f += deltas.at(t.rep).times_monomial(t.mono);
  return f;
}

}  // namespace

Series lattice_sum(const Geometry& g, const Rational& order) {
  TablePtr t = g.phi_table();
  SlabChart chart = g.base_chart();
  SeriesBuilder b(t, order);
  for (const auto& v : g.rays_near(chart.apex, order)) b.add(g.ray_monomial(v, chart, *t), 1);
  return b.build();
}

bool Normalization::converged() const {
  for (const auto& [rep, r] : residuals)
    if (!r.is_zero()) return false;
  return true;
}

bool Normalization::integral() const {
  for (const auto& [rep, d] : deltas)
    for (const auto& [e, c] : d.raw_terms())
      if (!is_integer(c)) return false;
  return true;
}

Normalization gs_normalize(const Geometry& g, const Rational& order) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  Normalization n;
  n.table = g.phi_table();
  n.order = order;
  n.reps = g.orbit_reps();
  std::vector<SlabChart> charts;
  std::vector<std::vector<ChartTerm>> terms;
  for (const auto& v0 : n.reps) {
    charts.push_back(g.chart(v0));
    terms.push_back(chart_terms(g, charts.back(), *n.table, order));
    n.deltas.emplace(v0, Series::constant(n.table, 1, order));
  }
  // Each sweep settles at least the lowest unsettled degree level of every
  // slab (other orbits enter a slab only at positive degree).
  const std::int64_t levels = to_int64(floor_of(order * n.table->weight_scale())) + 1;
  const int max_sweeps = static_cast<int>(2 * levels + 4);
  std::vector<Series> logs(n.reps.size());
  for (int sweep = 1;; ++sweep) {
    parallel_for(n.reps.size(), [&](std::size_t i) {
      Series f = assemble(n.deltas, n.reps[i], terms[i]);
      logs[i] = log_series(f).z0_part();
    });
    bool clean = true;
    for (const auto& l : logs) clean = clean && l.is_zero();
    n.sweeps = sweep;
    if (clean) break;
    if (sweep >= max_sweeps) {
      std::ostringstream msg;
      msg << "normalization did not settle at order " << order.get_str() << " after " << sweep << " sweeps";
      for (std::size_t i = 0; i < logs.size(); ++i)
        if (!logs[i].is_zero()) msg << "; residual at orbit " << i << ": " << to_string(logs[i]);
      throw std::runtime_error(msg.str());
    }
    for (std::size_t i = 0; i < n.reps.size(); ++i)
      if (!logs[i].is_zero()) {
        Series& d = n.deltas.at(n.reps[i]);
        d = d * exp_series(-logs[i]);
      }
  }
  for (std::size_t i = 0; i < n.reps.size(); ++i) n.residuals.emplace(n.reps[i], logs[i]);
  return n;
}

Series slab_function(const Geometry& g, const Normalization& n, const SlabChart& chart) {
  auto terms = chart_terms(g, chart, *n.table, n.order);
  return assemble(n.deltas, g.orbit_rep(chart.apex), terms);
}

Series product_formula_Ad(int d, const Rational& order) {
  Geometry g = Geometry::lattice({d}, "Ad(" + std::to_string(d) + ")");
  TablePtr t = g.phi_table();
  auto names = g.kahler_names();
  Monomial r(t->size());
  for (const auto& nm : names) r.exps[t->index(nm)] = 1;
  Monomial z(t->size());
  z.exps[t->index("z")] = 1;
  Series prod = Series::constant(t, 1, order);
  auto times_factor = [&](const Monomial& m) {
    SeriesBuilder b(t, std::nullopt);
    b.add(Monomial(t->size()), 1);
    b.add(m, 1);
    prod = prod * b.build();
  };
  for (int k = 1; k <= d; ++k) {
    Monomial qz = z;  // Q_{k-1} z
    for (int l = 1; l < k; ++l) qz.exps[t->index(names[static_cast<std::size_t>(l - 1)])] += 1;
    Monomial inv = qz.pow(-1);
    for (long i = 1;; ++i) {
      Monomial m = r.pow(i) * inv;
      if (monomial_degree(m, *t) > order) break;
      times_factor(m);
    }
    for (long j = 0;; ++j) {
      Monomial m = r.pow(j) * qz;
      if (monomial_degree(m, *t) > order) break;
      times_factor(m);
    }
  }
  return prod;
}

Rational extract_ogw(const Geometry& g, const Normalization& n, const Point& ray, const CurveClass& c) {
  Monomial m = g.class_monomial(c, *n.table);
  return n.delta(g.orbit_rep(ray)).coeff(m);
}

Series fiber_restriction(const Series& delta, const Monomial& fiber, const std::string& var) {
  const auto& t = *delta.table();
  Rational fdeg = monomial_degree(fiber, t);
  if (fdeg <= 0) throw std::invalid_argument("fiber class must have positive degree");
  TablePtr out_t = make_table({q_var(var)});
  std::optional<Rational> order;
  if (delta.order()) order = Rational(floor_of(*delta.order() / fdeg));
  SeriesBuilder b(out_t, order);
  std::size_t pivot = 0;
  while (pivot < fiber.exps.size() && fiber.exps[pivot] == 0) ++pivot;
  for (const auto& [m, c] : delta.terms()) {
    Rational k = m.exps[pivot] / fiber.exps[pivot];
    if (!is_integer(k) || k < 0) continue;
    if (!(fiber.pow(k) == m)) continue;
    Monomial e(1);
    e.exps[0] = k;
    b.add(e, c);
  }
  return b.build();
}

Series collapse_kahler(const Series& f, const Geometry& g, const std::string& var) {
  for (const auto& v : g.kahler_vars())
    if (v.weight != 1) throw std::invalid_argument("collapse needs unit Kaehler weights");
  TablePtr out_t = make_table({q_var(var)});
  std::map<std::string, MonomialImage> images;
  for (const auto& v : f.table()->vars()) {
    MonomialImage im{1, Monomial(1)};
    if (v.kind == VarKind::q_like) im.mono.exps[0] = 1;
    images.emplace(v.name, im);
  }
  return substitute_monomials(f, images, out_t, f.order());
}

}  // namespace thetaslab

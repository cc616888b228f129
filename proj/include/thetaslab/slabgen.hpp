// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Lattice sums, Gross-Siebert normalization of the slab functions and the
// surface product formulas.

#pragma once

#include "thetaslab/geometry.hpp"
#include "thetaslab/pseries.hpp"

#include <map>
#include <string>
#include <vector>

namespace thetaslab {

// sum_v q^{A_v} z^v over the base chart, in the geometry's phi table,
// complete to `order`.
Series lattice_sum(const Geometry& g, const Rational& order);

struct Normalization {
  TablePtr table;  // phi table of the geometry
  Rational order;
  std::vector<Point> reps;
  std::map<Point, Series> deltas;     // per orbit representative, no z
  std::map<Point, Series> residuals;  // [z^0] log F_{v0}; zero on success
  int sweeps = 0;

  const Series& delta(const Point& rep) const { return deltas.at(rep); }
  bool converged() const;
  bool integral() const;
};

// Solves for one Delta per orbit so that every recentered slab function has
// constant term 1 and no pure Kaehler term in its logarithm. Throws
// std::runtime_error (naming order and residual) when the sweep stalls.
Normalization gs_normalize(const Geometry& g, const Rational& order);

// sum_v Delta_[v] q^{A_v} z^{a(v)} in the chart, phi table, to n.order.
Series slab_function(const Geometry& g, const Normalization& n, const SlabChart& chart);
inline Series normalized_F(const Geometry& g, const Normalization& n) {
  return slab_function(g, n, g.base_chart());
}

// prod_k prod_{i>=1} (1 + r^i (Q_{k-1} z)^{-1}) prod_{j>=0} (1 + r^j Q_{k-1} z)
// with Q_j = q_1...q_j, r = q_1...q_d, in the phi table of Ad(d).
Series product_formula_Ad(int d, const Rational& order);

// Coefficient of q^c in Delta of the orbit of `ray`.
Rational extract_ogw(const Geometry& g, const Normalization& n, const Point& ray, const CurveClass& c);

// Terms of delta that are powers of q^fiber, as a series in one variable
// named `var` of weight 1.
Series fiber_restriction(const Series& delta, const Monomial& fiber, const std::string& var = "q");

// Every Kaehler variable of f mapped to the single variable `var`.
Series collapse_kahler(const Series& f, const Geometry& g, const std::string& var = "q");

}  // namespace thetaslab

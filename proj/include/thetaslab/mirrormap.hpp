// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// g-functions, the mirror map and its inverse, the open mirror check and the
// GKZ operators on finite toric fans. Complex parameters y<suffix> pair with
// the Kaehler parameters q<suffix> of the wall frame.

#pragma once

#include "thetaslab/geometry.hpp"
#include "thetaslab/logseries.hpp"
#include "thetaslab/pseries.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace thetaslab {

// Kaehler variables only (no z), and the matching y variables.
TablePtr kahler_table(const Geometry& g);
TablePtr complex_table(const Geometry& g);
std::string complex_name(const std::string& kahler_name);

// Nonnegative integer combinations of the wall curves with frame degree in
// [1, order], one entry per distinct class.
std::vector<CurveClass> effective_classes(const Geometry& g, const Rational& order);

// sum_d (-1)^{D_l.d} (-D_l.d - 1)! / prod_{p != l} (D_p.d)! y^d over effective
// d with D_l.d < 0 and D_p.d >= 0 otherwise.
Series g_function(const Geometry& g, std::size_t ray, const Rational& order);

struct MirrorMap {
  TablePtr kahler, complex;
  std::vector<std::string> log_vars;  // y names, one per basis class
  std::vector<LogSeries> log_q;       // log q_b = log y_b - sum_i (D_i.alpha_b) g_i(y)
  std::vector<Series> q_of_y;
  std::vector<Series> y_of_q;
  std::vector<Series> round_trip;     // q_b(y(q)) - q_b

  bool inverts() const;
};

MirrorMap mirror_map(const Geometry& g, const Rational& order);

struct OpenMirrorCheck {
  Series mirror;  // exp(g_l(y(q)))
  Series delta;   // from the normalization
  Series residual;
  bool passed() const { return residual.is_zero(); }
};

OpenMirrorCheck open_mirror_check(const Geometry& g, std::size_t ray, const Rational& order);

struct GKZFactor {
  std::size_t ray;
  long shift;  // k in (D_i - k z)
};

struct GKZOperator {
  CurveClass d;
  std::vector<GKZFactor> positive, negative;
  Monomial y_power;  // y^d in the complex table
};

// Throws std::logic_error when the factor counts differ (not Calabi-Yau).
GKZOperator gkz_operator(const Geometry& g, const CurveClass& d, const VarTable& complex);

// Applies the operator with z = 1 (both products carry the same power of z).
// f must have log-degree <= 1; throws std::domain_error otherwise.
LogSeries gkz_apply(const Geometry& g, const GKZOperator& op, const LogSeries& f, const Rational& order);

// Compares g_a and g_b after translating classes by `shift`; classes whose
// translate leaves the fan are counted as skipped.
struct EquivarianceReport {
  std::size_t compared = 0, skipped = 0, mismatched = 0;
  bool passed() const { return mismatched == 0 && compared > 0; }
};
EquivarianceReport g_equivariance(const Geometry& g, std::size_t ray_a, std::size_t ray_b,
                                  const Point& shift, const Rational& order);

}  // namespace thetaslab

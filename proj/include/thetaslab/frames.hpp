// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Kaehler coordinates: a basis of curve classes and the map from classes to
// exponent vectors over that basis.

#pragma once

#include "thetaslab/pseries.hpp"
#include "thetaslab/toriclat.hpp"

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace thetaslab {

class KahlerFrame {
 public:
  virtual ~KahlerFrame() = default;

  const std::vector<Variable>& variables() const { return vars_; }

  // Exponents over the basis; throws std::domain_error when the class is not
  // in the rational span.
  virtual RVector coordinates(const CurveClass& c) const = 0;

  // The class as a monomial of `table`, which must declare the frame
  // variables by name.
  Monomial monomial(const CurveClass& c, const VarTable& table) const;
  Monomial monomial_of(const RVector& coords, const VarTable& table) const;

 protected:
  std::vector<Variable> vars_;
};

// Orbit-labelled second differences x^m (1-x_i)^2 and x^m (1-x_i)(1-x_j) of
// the Z^l-quotient with periods d_i, modulo the pushed syzygies.
class LatticeFrame : public KahlerFrame {
 public:
  explicit LatticeFrame(std::vector<int> periods);

  const std::vector<int>& periods() const { return periods_; }
  int lattice_dim() const { return static_cast<int>(periods_.size()); }

  // Coordinates of x^m (1-x_i)(1-x_j) (i == j for the square), 0-based axes.
  RVector generator(int i, int j, const Point& position) const;
  Monomial generator_monomial(int i, int j, const Point& position, const VarTable& table) const;

  RVector coordinates(const CurveClass& c) const override;

  // Candidate count and number of independent relations among them.
  std::size_t candidate_count() const { return candidate_count_; }

 private:
  using Key = std::tuple<int, int, Point>;
  std::vector<int> periods_;
  std::map<Key, RVector> reduce_;
  std::size_t candidate_count_ = 0;
};

// Finite fans: independent wall curves form the basis.
class WallFrame : public KahlerFrame {
 public:
  explicit WallFrame(const FanData& fan);

  RVector coordinates(const CurveClass& c) const override;
  const std::vector<CurveClass>& basis_classes() const { return basis_; }

 private:
  std::vector<Point> ray_points_;
  std::vector<CurveClass> basis_;
};

// Laurent coefficients of (x^c - 1 - c(x-1))/(x-1)^2 and (x^c - 1)/(x-1).
std::map<std::int64_t, Rational> square_quotient(std::int64_t c);
std::map<std::int64_t, Rational> linear_quotient(std::int64_t c);

}  // namespace thetaslab

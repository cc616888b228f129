// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Small exact linear algebra over the rationals.

#pragma once

#include "thetaslab/rational.hpp"

#include <optional>
#include <vector>

namespace thetaslab {

using RVector = std::vector<Rational>;
using RMatrix = std::vector<RVector>;  // row-major

struct Echelon {
  RMatrix reduced;                 // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column per row
};

Echelon row_reduce(RMatrix m, std::size_t cols);
std::size_t rank(const RMatrix& m, std::size_t cols);
Rational determinant(RMatrix m);

// Basis of {x : m x = 0}.
std::vector<RVector> kernel(const RMatrix& m, std::size_t cols);

// Some x with a x = b, or nullopt when inconsistent. Free variables are 0.
std::optional<RVector> solve(const RMatrix& a, const RVector& b, std::size_t cols);

RMatrix transpose(const RMatrix& m, std::size_t cols);
RVector mat_vec(const RMatrix& m, const RVector& x);

}  // namespace thetaslab

// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Formal eta and theta series, and exact checks of the theta-function
// descriptions of the slab functions.

#pragma once

#include "thetaslab/geometry.hpp"
#include "thetaslab/pseries.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace thetaslab {

// prod_{k>=1} (1 - m^k) to `order`; m must have positive degree.
Series euler_product(TablePtr table, const Monomial& m, const Rational& order);

// eta(q) = q^{1/24} prod (1 - q^k): the product part in a one-variable
// table named `var`. The prefactor exponent is always 1/24.
Series eta_core(const Rational& order, const std::string& var = "q");

// Theta_m[a; b](zeta; Omega) with every exponential written as a monomial:
//   period[i][j] = e^{2 pi i Omega_ij}   (symmetric)
//   shift[k]     = e^{2 pi i (zeta_k + b_k)}
// term(n) = prefactor * prod_{i,j} period_ij^{x_i x_j / 2} * prod_k shift_k^{x_k},
// x = n + a.
struct FormalTheta {
  std::vector<std::vector<Monomial>> period;
  std::vector<Rational> characteristic;
  std::vector<Monomial> shift;
  Monomial prefactor;

  std::size_t genus() const { return shift.size(); }
};

// Every term of degree <= order. The degree of a term is a quadratic form in
// x and must be positive definite; throws std::invalid_argument otherwise.
Series theta_series(const FormalTheta& theta, TablePtr table, const Rational& order);

// e^{2 pi i tau(I + J)}-style period: entries m^2 on the diagonal, m off it.
std::vector<std::vector<Monomial>> bellman_period(const Monomial& m, std::size_t genus);

struct IdentityCheck {
  std::string name;
  Rational order;
  Series lhs, rhs, residual;
  std::vector<std::string> notes;

  bool passed() const { return residual.is_zero(); }
  nlohmann::json to_json() const;
};

// prod_{i>=1}(1 + q^i z^{-1}) prod_{j>=0}(1 + q^j z) against
// prod(1-q^k)^{-1} sum_l q^{l(l-1)/2} z^l, z exponents in [-z_window, z_window].
// drop_factor removes (1 + q z) from the product (negative control).
IdentityCheck verify_triple_product(const Rational& order, int z_window, bool drop_factor = false);

// sum_{k,l>=1} q^{kl}/l computed three ways: directly, as the alternating sum
// over zero-sum compositions of q^{sum l_i^2/2}, and as -sum_k log(1-q^k).
struct LogIdentity {
  Series divisor_sum, compositions, logarithm;
  bool passed() const { return divisor_sum == compositions && divisor_sum == logarithm; }
};
LogIdentity verify_log_identity(int order);

// exp(sum_{n>=2} (-1)^n/n sum_{m_1+...+m_n=0, m_i != 0} prod q^{m_i Omega m_i / 2})
// for a lattice geometry with unit periods, in its phi table.
Series delta_direct(const Geometry& g, const Rational& order);

// AZ, Ad(d), X11, Xpq(p,q), X1l(l), Hypercube(d1,...): F^open from the
// normalization against its theta form, in the phi Laurent table.
IdentityCheck verify_identity(const std::string& name, const Rational& order);

}  // namespace thetaslab

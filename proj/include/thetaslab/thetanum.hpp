// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Double-precision evaluation of eta, Jacobi and Riemann theta functions and
// of Delta(Omega), each with a conservative bound on the discarded tail.

#pragma once

#include "thetaslab/pseries.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>

namespace thetaslab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using DVector = Eigen::VectorXd;

// Symmetric complex matrix with positive definite imaginary part.
class PeriodMatrix {
public:
  // Throws std::invalid_argument unless symmetric (1e-12) with Im > 0 (leading minors).
  explicit PeriodMatrix(CMatrix omega);
  static PeriodMatrix diagonal(std::initializer_list<cplx> entries);

  const CMatrix& value() const { return omega_; }
  Eigen::MatrixXd imag() const { return omega_.imag(); }
  Eigen::Index dim() const { return omega_.rows(); }
  double min_eigenvalue() const;  // of Im

  PeriodMatrix inverse_negated() const;  // -Omega^{-1}
  PeriodMatrix congruent(const Eigen::MatrixXi& a) const;  // A Omega A^t
  PeriodMatrix translated(const Eigen::MatrixXi& b) const;  // Omega + B, B symmetric

private:
  CMatrix omega_;
};

struct TailBound {
  double radius = 0;  // truncation radius (lattice norm, or product length)
  double bound = 0;   // absolute bound on what was dropped
};

struct NumValue {
  cplx value;
  TailBound tail;
};

// e^{pi i tau/12} prod (1 - e^{2 pi i n tau}); throws std::domain_error if Im tau <= 0.
NumValue eta_value(cplx tau, double tol = 1e-16);
cplx eta_num(cplx tau, double tol = 1e-16);

// sum_n exp 2 pi i (1/2 (n+a) Omega (n+a) + (n+a)(z+b)), tail <= tol.
NumValue riemann_theta_num(const CVector& z, const PeriodMatrix& omega, const DVector& a, const DVector& b,
                           double tol = 1e-14);
NumValue riemann_theta_num(const CVector& z, const PeriodMatrix& omega, double tol = 1e-14);
NumValue jacobi_theta_num(cplx zeta, cplx tau, double tol = 1e-14);

// exp of sum_{j>=2} (-1)^j/j sum_{l_1+..+l_j = 0, l_i != 0} exp(pi i sum l_k Omega l_k).
// tail.bound is relative. Throws std::domain_error when the sum cannot be
// certified at tol (Im Omega too small).
NumValue delta_num(const PeriodMatrix& omega, double tol = 1e-13);

// sqrt(det(-i Omega)), the branch continuous from Omega = iI.
cplx sqrt_det_minus_i(const PeriodMatrix& omega);

// Evaluates a formal series with each variable v = exp(2 pi i t_v), t given
// per name. Fractional exponents are taken along this logarithm.
cplx evaluate(const Series& f, const std::map<std::string, cplx>& log_coords);

// |x - y| / max(|x|, |y|), 0 when both vanish.
double relative_residual(cplx x, cplx y);

}  // namespace thetaslab

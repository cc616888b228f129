// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/thetanum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace thetaslab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx two_pi_i{0, 2 * pi};

// fixed pairwise order, independent of threading
cplx pairwise_sum(const std::vector<cplx>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    cplx s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

cplx pairwise_sum(const std::vector<cplx>& v) { return v.empty() ? cplx(0) : pairwise_sum(v, 0, v.size()); }

// sum_{x in c + Z^m} exp(-pi/2 (x-c) Y (x-c)) <= (1 + sqrt(2/lambda))^m
double gaussian_mass(double lambda, Eigen::Index m) {
  return std::pow(1 + std::sqrt(2 / lambda), static_cast<double>(m));
}

// Visits every integer point of the box [lo_i, hi_i].
template <class F>
void for_box(const std::vector<long>& lo, const std::vector<long>& hi, F&& f) {
  const std::size_t m = lo.size();
  std::vector<long> n = lo;
  if (m == 0) return;
  for (;;) {
    f(n);
    std::size_t i = m;
    while (i-- > 0) {
      if (n[i] < hi[i]) {
        ++n[i];
        break;
      }
      n[i] = lo[i];
      if (i == 0) return;
    }
  }
}

}  // namespace

PeriodMatrix::PeriodMatrix(CMatrix omega) {
  if (omega.rows() != omega.cols() || omega.rows() == 0) throw std::invalid_argument("period matrix must be square");
  const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("period matrix must be symmetric");
  omega_ = (omega + omega.transpose()) / 2.0;
  const Eigen::MatrixXd y = omega_.imag();
  for (Eigen::Index k = 1; k <= y.rows(); ++k)
    if (y.topLeftCorner(k, k).determinant() <= 1e-12)
      throw std::invalid_argument("imaginary part of the period matrix is not positive definite");
}

PeriodMatrix PeriodMatrix::diagonal(std::initializer_list<cplx> entries) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (cplx e : entries) m(i, i) = e, ++i;
  return PeriodMatrix(m);
}

double PeriodMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(imag());
  return es.eigenvalues().minCoeff();
}

PeriodMatrix PeriodMatrix::inverse_negated() const { return PeriodMatrix(-omega_.inverse()); }

PeriodMatrix PeriodMatrix::congruent(const Eigen::MatrixXi& a) const {
  const CMatrix ac = a.cast<double>().cast<cplx>();
  return PeriodMatrix(ac * omega_ * ac.transpose());
}

PeriodMatrix PeriodMatrix::translated(const Eigen::MatrixXi& b) const {
  if (b != b.transpose()) throw std::invalid_argument("translation must be symmetric");
  return PeriodMatrix(omega_ + b.cast<double>().cast<cplx>());
}

NumValue eta_value(cplx tau, double tol) {
  if (tau.imag() <= 0) throw std::domain_error("eta needs Im tau > 0");
  const double r = std::exp(-2 * pi * tau.imag());
  // |log prod_{n>N}(1-q^n)| <= 2 r^{N+1} / (1 - r) once r^{N+1} <= 1/2
  long n = 0;
  double rn = r;  // r^{n+1}
  while (rn > 0.5 || 2 * rn / (1 - r) > tol) {
    ++n;
    rn *= r;
  }
  cplx p = 1;
  for (long k = 1; k <= n; ++k) p *= 1.0 - std::exp(two_pi_i * static_cast<double>(k) * tau);
  NumValue v;
  v.value = std::exp(cplx(0, pi) * tau / 12.0) * p;
  v.tail.radius = static_cast<double>(n);
  v.tail.bound = std::abs(v.value) * std::expm1(2 * rn / (1 - r));
  return v;
}

cplx eta_num(cplx tau, double tol) { return eta_value(tau, tol).value; }

NumValue riemann_theta_num(const CVector& z, const PeriodMatrix& omega, const DVector& a, const DVector& b,
                           double tol) {
  const Eigen::Index m = omega.dim();
  if (z.size() != m || a.size() != m || b.size() != m) throw std::invalid_argument("theta argument size mismatch");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const Eigen::MatrixXd y = omega.imag();
  const Eigen::MatrixXd yinv = y.inverse();
  const double lambda = omega.min_eigenvalue();
  // |term(x)| = exp(pi c.Y.c) exp(-pi (x-c) Y (x-c))
  const DVector c = -yinv * z.imag();
  const double lift = pi * c.dot(y * c);
  const double big_c = std::exp(lift) * gaussian_mass(lambda, m);
  const double r2 = std::max(0.0, 2 / pi * std::log(big_c / tol));
  std::vector<long> lo(static_cast<std::size_t>(m)), hi(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double w = std::sqrt(r2 * yinv(i, i));
    lo[static_cast<std::size_t>(i)] = static_cast<long>(std::ceil(c(i) - a(i) - w));
    hi[static_cast<std::size_t>(i)] = static_cast<long>(std::floor(c(i) - a(i) + w));
  }
  const CVector zb = z + b.cast<cplx>();
  std::vector<cplx> terms;
  for_box(lo, hi, [&](const std::vector<long>& n) {
    CVector x(m);
    for (Eigen::Index i = 0; i < m; ++i) x(i) = static_cast<double>(n[static_cast<std::size_t>(i)]) + a(i);
    const cplx e = 0.5 * x.dot(omega.value() * x) + x.dot(zb);  // dot conjugates the left, x is real
    terms.push_back(std::exp(two_pi_i * e));
  });
  NumValue v;
  v.value = pairwise_sum(terms);
  v.tail.radius = std::sqrt(r2);
  v.tail.bound = big_c * std::exp(-pi * r2 / 2);
  return v;
}

NumValue riemann_theta_num(const CVector& z, const PeriodMatrix& omega, double tol) {
  const DVector zero = DVector::Zero(omega.dim());
  return riemann_theta_num(z, omega, zero, zero, tol);
}

NumValue jacobi_theta_num(cplx zeta, cplx tau, double tol) {
  CVector z(1);
  z(0) = zeta;
  return riemann_theta_num(z, PeriodMatrix::diagonal({tau}), tol);
}

NumValue delta_num(const PeriodMatrix& omega, double tol) {
  const Eigen::Index m = omega.dim();
  if (m > 3) throw std::invalid_argument("delta_num supports m <= 3");
  const Eigen::MatrixXd y = omega.imag();
  const Eigen::MatrixXd yinv = y.inverse();
  const double lambda = omega.min_eigenvalue();
  // drop l with pi lYl > cut; dropped mass <= e^{-cut/2} (1 + sqrt(2/lambda))^m
  const double cut = 2 * std::log(gaussian_mass(lambda, m) * 8 / tol);
  const double dropped = gaussian_mass(lambda, m) * std::exp(-cut / 2);
  const auto mu = static_cast<std::size_t>(m);
  std::vector<long> width(mu);
  for (std::size_t i = 0; i < mu; ++i)
    width[i] = static_cast<long>(std::floor(std::sqrt(cut / pi * yinv(static_cast<Eigen::Index>(i),
                                                                          static_cast<Eigen::Index>(i)))));
  struct Step {
    std::vector<long> l;
    cplx c;
  };
  std::vector<Step> steps;
  double s = dropped;
  {
    std::vector<long> lo(mu), hi(mu);
    for (std::size_t i = 0; i < mu; ++i) lo[i] = -width[i], hi[i] = width[i];
    for_box(lo, hi, [&](const std::vector<long>& l) {
      if (std::all_of(l.begin(), l.end(), [](long x) { return x == 0; })) return;
      CVector v(m);
      for (std::size_t i = 0; i < mu; ++i) v(static_cast<Eigen::Index>(i)) = static_cast<double>(l[i]);
      const cplx q = v.dot(omega.value() * v);
      if (pi * q.imag() > cut) return;
      steps.push_back({l, std::exp(cplx(0, pi) * q)});
      s += std::abs(steps.back().c);
    });
  }
  if (s >= 0.9)
    throw std::domain_error("Delta composition sum not certifiable: lattice mass " + std::to_string(s) +
                            " >= 0.9, Im Omega too small");
  // sum_{j>J} s^j / j <= s^{J+1} / (1 - s)
  long jmax = 1;
  while (std::pow(s, static_cast<double>(jmax + 1)) / (1 - s) > tol / 4) ++jmax;
  const double err = dropped / ((1 - s) * (1 - s)) + std::pow(s, static_cast<double>(jmax + 1)) / (1 - s);

  // dense grid over positions reachable from and back to 0
  const long half = (jmax + 1) / 2;
  std::vector<long> ext(mu);
  std::vector<std::size_t> stride(mu);
  std::size_t cells = 1;
  for (std::size_t i = mu; i-- > 0;) {
    ext[i] = half * width[i];
    stride[i] = cells;
    cells *= static_cast<std::size_t>(2 * ext[i] + 1);
  }
  auto index = [&](const std::vector<long>& p) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < mu; ++i) k += static_cast<std::size_t>(p[i] + ext[i]) * stride[i];
    return k;
  };
  std::vector<long> origin(mu, 0);
  std::vector<cplx> cur(cells, 0);
  std::vector<char> live(cells, 0);
  for (const auto& st : steps) {
    bool fits = true;
    for (std::size_t i = 0; i < mu; ++i) fits = fits && std::abs(st.l[i]) <= ext[i];
    if (fits) cur[index(st.l)] += st.c, live[index(st.l)] = 1;
  }
  std::vector<cplx> parts;
  for (long k = 1; k <= jmax; ++k) {
    if (k >= 2) parts.push_back((k % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(k) * cur[index(origin)]);
    if (k == jmax) break;
    // after k+1 factors a position must return to 0 within jmax - k - 1 steps
    const long reach = std::min(k + 1, jmax - k - 1);
    std::vector<cplx> next(cells, 0);
    std::vector<char> next_live(cells, 0);
    std::vector<long> lo(mu), hi(mu), p(mu);
    for (std::size_t i = 0; i < mu; ++i) lo[i] = -std::min(k, half) * width[i], hi[i] = -lo[i];
    for_box(lo, hi, [&](const std::vector<long>& src) {
      const std::size_t si = index(src);
      if (!live[si]) return;
      const cplx a = cur[si];
      for (const auto& st : steps) {
        bool ok = true;
        for (std::size_t i = 0; i < mu && ok; ++i) {
          p[i] = src[i] + st.l[i];
          ok = std::abs(p[i]) <= reach * width[i];
        }
        if (!ok) continue;
        const std::size_t di = index(p);
        next[di] += a * st.c;
        next_live[di] = 1;
      }
    });
    cur.swap(next);
    live.swap(next_live);
  }
  NumValue v;
  v.value = std::exp(pairwise_sum(parts));
  v.tail.radius = static_cast<double>(jmax);
  v.tail.bound = std::expm1(err);
  return v;
}

cplx sqrt_det_minus_i(const PeriodMatrix& omega) {
  // Re(-i Omega) = Im Omega > 0 keeps every eigenvalue in the right half plane
  Eigen::ComplexEigenSolver<CMatrix> es(cplx(0, -1) * omega.value());
  cplx r = 1;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r *= std::sqrt(es.eigenvalues()(i));
  return r;
}

cplx evaluate(const Series& f, const std::map<std::string, cplx>& log_coords) {
  const VarTable& t = *f.table();
  std::vector<const cplx*> coord(t.size(), nullptr);
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto it = log_coords.find(t.var(i).name);
    if (it != log_coords.end()) coord[i] = &it->second;
  }
  std::vector<cplx> terms;
  for (const auto& [e, c] : f.raw_terms()) {
    cplx phase = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!coord[i]) throw std::invalid_argument("no value for variable " + t.var(i).name);
      phase += Rational(f.exponent(e, i)).get_d() * *coord[i];
    }
    terms.push_back(c.get_d() * std::exp(two_pi_i * phase));
  }
  return pairwise_sum(terms);
}

double relative_residual(cplx x, cplx y) {
  const double d = std::max(std::abs(x), std::abs(y));
  return d == 0 ? 0 : std::abs(x - y) / d;
}

}  // namespace thetaslab

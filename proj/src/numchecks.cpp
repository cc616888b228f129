// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/numchecks.hpp"

#include "thetaslab/parallel.hpp"
#include "thetaslab/thetanum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace thetaslab {

namespace {

constexpr double theta_tol = 1e-14;
constexpr double delta_tol = 1e-13;
constexpr double tail_limit = 1e-12;

using Rng = std::mt19937_64;

struct Sample {
  double residual = 0;
  double tail = 0;
};

struct Law {
  std::string name;
  std::string suite;
  double floor = 0;
  int fixed_samples = 0;  // 0: use the requested count
  bool gating = true;
  std::function<Sample(Rng&, int)> run;
};

double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }
int uniform_int(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }

cplx sample_tau(Rng& r) { return {uniform(r, -0.5, 0.5), uniform(r, 0.7, 1.5)}; }
cplx sample_zeta(Rng& r) { return {uniform(r, 0, 1), uniform(r, -0.3, 0.3)}; }

CVector sample_z(Rng& r, Eigen::Index m) {
  CVector z(m);
  for (Eigen::Index i = 0; i < m; ++i) z(i) = sample_zeta(r);
  return z;
}

// Re uniform in [-1/2, 1/2], Im = L L^t + shift I
PeriodMatrix sample_omega(Rng& r, Eigen::Index m, double shift, double spread = 0.5) {
  Eigen::MatrixXd x(m, m), l(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = uniform(r, -0.5, 0.5), l(i, j) = uniform(r, -spread, spread);
  x = (x + x.transpose()).eval() / 2.0;
  Eigen::MatrixXd y = l * l.transpose() + shift * Eigen::MatrixXd::Identity(m, m);
  CMatrix o(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) o(i, j) = cplx(x(i, j), y(i, j));
  return PeriodMatrix(o);
}

Eigen::MatrixXi sample_unimodular(Rng& r, Eigen::Index m) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Identity(m, m);
  for (int t = 0; t < 2; ++t) {
    const int i = uniform_int(r, 0, static_cast<int>(m) - 1);
    int j = uniform_int(r, 0, static_cast<int>(m) - 2);
    if (j >= i) ++j;
    a.row(i) += (uniform_int(r, 0, 1) ? 1 : -1) * a.row(j);
  }
  if (uniform_int(r, 0, 1)) a.row(0).swap(a.row(m - 1));
  if (uniform_int(r, 0, 1)) a.row(uniform_int(r, 0, static_cast<int>(m) - 1)) *= -1;
  return a;
}

Eigen::MatrixXi sample_symmetric(Rng& r, Eigen::Index m, bool even_diagonal) {
  Eigen::MatrixXi b(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i, i) = even_diagonal ? 2 * uniform_int(r, -1, 1) : uniform_int(r, -2, 2);
    for (Eigen::Index j = i + 1; j < m; ++j) b(i, j) = b(j, i) = uniform_int(r, -2, 2);
  }
  return b;
}

Sample compare(cplx lhs, cplx rhs, double tail) { return {relative_residual(lhs, rhs), tail}; }

Eigen::Index genus_of(int k) { return 2 + k % 2; }  // alternate 2 and 3

Sample theta_congruence(Rng& r, int k) {
  const Eigen::Index m = genus_of(k);
  PeriodMatrix o = sample_omega(r, m, 0.7);
  CVector z = sample_z(r, m);
  Eigen::MatrixXi a = sample_unimodular(r, m);
  NumValue lhs = riemann_theta_num(a.cast<double>().cast<cplx>() * z, o.congruent(a), theta_tol);
  NumValue rhs = riemann_theta_num(z, o, theta_tol);
  return compare(lhs.value, rhs.value, std::max(lhs.tail.bound, rhs.tail.bound));
}

Sample theta_translation(Rng& r, int k, bool even) {
  const Eigen::Index m = genus_of(k);
  PeriodMatrix o = sample_omega(r, m, 0.7);
  CVector z = sample_z(r, m);
  Eigen::MatrixXi b = sample_symmetric(r, m, even);
  NumValue lhs = riemann_theta_num(z, o.translated(b), theta_tol);
  CVector shifted = z;
  for (Eigen::Index i = 0; i < m; ++i) shifted(i) += b(i, i) / 2.0;
  NumValue rhs = riemann_theta_num(even ? z : shifted, o, theta_tol);
  return compare(lhs.value, rhs.value, std::max(lhs.tail.bound, rhs.tail.bound));
}

Sample theta_inversion(Rng& r, int k) {
  const Eigen::Index m = genus_of(k);
  PeriodMatrix o = sample_omega(r, m, 0.7);
  CVector z = sample_z(r, m);
  const CMatrix w = o.value().inverse();
  NumValue lhs = riemann_theta_num(w * z, o.inverse_negated(), theta_tol);
  const cplx quad = (z.transpose() * w * z)(0, 0);
  const cplx factor = sqrt_det_minus_i(o) * std::exp(cplx(0, std::numbers::pi) * quad);
  NumValue th = riemann_theta_num(z, o, theta_tol / std::max(1.0, std::abs(factor)));
  return compare(lhs.value, factor * th.value, std::max(lhs.tail.bound, std::abs(factor) * th.tail.bound));
}

Sample eta_t(Rng& r, int) {
  const cplx tau = sample_tau(r);
  NumValue a = eta_value(tau + 1.0), b = eta_value(tau);
  return compare(a.value, std::exp(cplx(0, std::numbers::pi / 12)) * b.value, std::max(a.tail.bound, b.tail.bound));
}

Sample eta_s(Rng& r, int) {
  const cplx tau = sample_tau(r);
  NumValue a = eta_value(-1.0 / tau), b = eta_value(tau);
  const cplx f = std::sqrt(cplx(0, -1) * tau);
  return compare(a.value, f * b.value, std::max(a.tail.bound, std::abs(f) * b.tail.bound));
}

Sample jacobi_t(Rng& r, int) {
  const cplx tau = sample_tau(r), zeta = sample_zeta(r);
  NumValue a = jacobi_theta_num(zeta, tau + 1.0, theta_tol), b = jacobi_theta_num(zeta + 0.5, tau, theta_tol);
  return compare(a.value, b.value, std::max(a.tail.bound, b.tail.bound));
}

Sample jacobi_s(Rng& r, int) {
  const cplx tau = sample_tau(r), zeta = sample_zeta(r);
  NumValue a = jacobi_theta_num(zeta / tau, -1.0 / tau, theta_tol), b = jacobi_theta_num(zeta, tau, theta_tol);
  const cplx f = std::sqrt(cplx(0, -1) * tau) * std::exp(cplx(0, std::numbers::pi) * zeta * zeta / tau);
  return compare(a.value, f * b.value, std::max(a.tail.bound, std::abs(f) * b.tail.bound));
}

Eigen::MatrixXi gl2_generator(int which) {
  Eigen::MatrixXi a(2, 2);
  switch (which) {
    case 0: a << 0, 1, 1, 0; break;
    case 1: a << 1, 1, 0, 1; break;
    case 2: a << 1, 0, 1, 1; break;
    case 3: a << 1, -1, 0, 1; break;
    default: a << -1, 0, 0, 1; break;
  }
  return a;
}

Sample delta_congruence(Rng& r, int k) {
  PeriodMatrix o = sample_omega(r, 2, 1.2, 0.3);
  Eigen::MatrixXi a = gl2_generator(k % 5);
  NumValue lhs = delta_num(o.congruent(a), delta_tol), rhs = delta_num(o, delta_tol);
  return compare(lhs.value, rhs.value, std::max(lhs.tail.bound, rhs.tail.bound));
}

// l (Omega + B) l only sees the symmetric part (B + B^t)/2
PeriodMatrix form_translated(const PeriodMatrix& o, const Eigen::Matrix2i& b) {
  CMatrix t = o.value();
  t(0, 0) += b(0, 0);
  t(1, 1) += b(1, 1);
  t(0, 1) += (b(0, 1) + b(1, 0)) / 2.0;
  t(1, 0) = t(0, 1);
  return PeriodMatrix(t);
}

Sample delta_translation(Rng& r, int, bool even) {
  PeriodMatrix o = sample_omega(r, 2, 1.2, 0.3);
  Eigen::Matrix2i b;
  b << uniform_int(r, -2, 2), uniform_int(r, -2, 2), uniform_int(r, -2, 2), uniform_int(r, -2, 2);
  if (((b(0, 1) + b(1, 0)) % 2 == 0) != even) b(1, 0) += 1;
  NumValue lhs = delta_num(form_translated(o, b), delta_tol), rhs = delta_num(o, delta_tol);
  return compare(lhs.value, rhs.value, std::max(lhs.tail.bound, rhs.tail.bound));
}

cplx diagonal_factor(cplx tau, cplx rho) {
  return std::exp(cplx(0, 2 * std::numbers::pi) * (tau + rho) / 24.0);
}

Sample delta_diagonal_eta(Rng& r, int k) {
  cplx tau{0, 1.3}, rho{0, 1.7};
  if (k > 0) tau = {uniform(r, -0.5, 0.5), uniform(r, 0.9, 1.8)}, rho = {uniform(r, -0.5, 0.5), uniform(r, 0.9, 1.8)};
  NumValue d = delta_num(PeriodMatrix::diagonal({tau, rho}), delta_tol);
  NumValue et = eta_value(tau), er = eta_value(rho);
  const cplx rhs = diagonal_factor(tau, rho) / (et.value * er.value);
  return compare(d.value, rhs, std::max(d.tail.bound, (et.tail.bound / std::abs(et.value) +
                                                         er.tail.bound / std::abs(er.value))));
}

Sample delta_diagonal_s(Rng& r, int k) {
  cplx tau{0, 1.1}, rho{0, 0.9};
  if (k > 0) tau = {uniform(r, -0.2, 0.2), uniform(r, 0.8, 1.25)}, rho = {uniform(r, -0.2, 0.2), uniform(r, 0.8, 1.25)};
  PeriodMatrix o = PeriodMatrix::diagonal({tau, rho});
  PeriodMatrix s = o.inverse_negated();
  NumValue d = delta_num(o, delta_tol), ds = delta_num(s, delta_tol);
  const cplx lhs = diagonal_factor(s.value()(0, 0), s.value()(1, 1)) / ds.value;
  const cplx rhs = sqrt_det_minus_i(o) * diagonal_factor(tau, rho) / d.value;
  return compare(lhs, rhs, std::max(d.tail.bound, ds.tail.bound));
}

Sample delta_large(Rng& r, int) {
  PeriodMatrix o = sample_omega(r, 2, 10.0, 0.5);
  NumValue d = delta_num(o, delta_tol);
  return compare(d.value, 1.0, d.tail.bound);
}

const std::vector<Law>& laws() {
  static const std::vector<Law> all = {
      {"theta_congruence", "appendix", 0, 0, true, theta_congruence},
      {"theta_even_translation", "appendix", 0, 0, true, [](Rng& r, int k) { return theta_translation(r, k, true); }},
      {"theta_translation", "appendix", 0, 0, true, [](Rng& r, int k) { return theta_translation(r, k, false); }},
      {"theta_inversion", "appendix", 0, 0, true, theta_inversion},
      {"eta_T", "appendix", 0, 0, true, eta_t},
      {"eta_S", "appendix", 0, 0, true, eta_s},
      {"jacobi_T", "appendix", 0, 0, true, jacobi_t},
      {"jacobi_S", "appendix", 0, 0, true, jacobi_s},
      {"delta_gl2_congruence", "delta", 0, 0, true, delta_congruence},
      {"delta_even_translation", "delta", 0, 0, true, [](Rng& r, int k) { return delta_translation(r, k, true); }},
      {"delta_general_translation", "delta", 0, 0, false,
       [](Rng& r, int k) { return delta_translation(r, k, false); }},
      {"delta_diagonal_eta", "delta", 1e-8, 5, true, delta_diagonal_eta},
      {"delta_diagonal_S", "delta", 1e-7, 0, true, delta_diagonal_s},
      {"delta_large_imaginary", "delta", 0, 0, true, delta_large},
  };
  return all;
}

}  // namespace

nlohmann::json LawResult::to_json() const {
  nlohmann::json j{{"name", name},     {"samples", samples},    {"max_residual", max_residual},
                   {"max_tail", max_tail}, {"tol", tol},         {"tail_tol", tail_tol},
                   {"gating", gating}, {"holds", holds()},      {"passed", passed()}};
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

bool NumericReport::passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawResult& l) { return l.passed(); });
}

const LawResult& NumericReport::law(const std::string& name) const {
  for (const auto& l : laws)
    if (l.name == name) return l;
  throw std::out_of_range("no law " + name);
}

nlohmann::json NumericReport::to_json() const {
  nlohmann::json j{{"suite", suite}, {"seed", seed}, {"samples", samples}, {"tol", tol}, {"passed", passed()}};
  j["laws"] = nlohmann::json::array();
  for (const auto& l : laws) j["laws"].push_back(l.to_json());
  return j;
}

std::vector<std::string> numeric_suites() { return {"appendix", "delta", "all"}; }

NumericReport check_transformations(const std::string& suite, int samples, double tol, std::uint64_t seed) {
  if (suite != "appendix" && suite != "delta" && suite != "all")
    throw std::invalid_argument("unknown numeric suite '" + suite + "' (appendix, delta, all)");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < laws().size(); ++i)
    if (suite == "all" || laws()[i].suite == suite) chosen.push_back(i);

  NumericReport rep;
  rep.suite = suite;
  rep.seed = seed;
  rep.samples = samples;
  rep.tol = tol;
  rep.laws.resize(chosen.size());
  parallel_for(chosen.size(), [&](std::size_t k) {
    const Law& law = laws()[chosen[k]];
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chosen[k])};
    Rng rng(seq);
    LawResult& out = rep.laws[k];
    out.name = law.name;
    out.gating = law.gating;
    out.tol = std::max(tol, law.floor);
    out.tail_tol = tail_limit;
    out.samples = law.fixed_samples ? law.fixed_samples : samples;
    for (int s = 0; s < out.samples; ++s) {
      Sample r = law.run(rng, s);
      out.max_residual = std::max(out.max_residual, r.residual);
      out.max_tail = std::max(out.max_tail, r.tail);
    }
    if (!law.gating) out.notes.push_back(out.holds() ? "holds on every sample" : "fails on the sampled points");
  });
  return rep;
}

}  // namespace thetaslab

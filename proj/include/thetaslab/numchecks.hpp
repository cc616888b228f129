// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded numeric checks of the theta, eta and Delta transformation laws.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace thetaslab {

struct LawResult {
  std::string name;
  int samples = 0;
  double max_residual = 0;
  double max_tail = 0;
  double tol = 0;
  double tail_tol = 0;
  bool gating = true;  // informational laws never fail a report
  std::vector<std::string> notes;

  bool holds() const { return max_residual <= tol && max_tail <= tail_tol; }
  bool passed() const { return !gating || holds(); }
  nlohmann::json to_json() const;
};

struct NumericReport {
  std::string suite;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0;
  std::vector<LawResult> laws;

  bool passed() const;
  const LawResult& law(const std::string& name) const;
  nlohmann::json to_json() const;
};

// Suites: "appendix" (theta laws 1-4, eta and Jacobi theta T/S laws),
// "delta" (Delta modularity), "all". Laws with a looser contract keep it
// (diagonal eta factorization 1e-8, diagonal S-law 1e-7) when tol is tighter.
// Throws std::invalid_argument for an unknown suite or samples < 1.
NumericReport check_transformations(const std::string& suite, int samples, double tol, std::uint64_t seed);

std::vector<std::string> numeric_suites();

}  // namespace thetaslab

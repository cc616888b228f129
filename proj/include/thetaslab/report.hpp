// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Formal check suites and the JSON/CSV artifacts shared by the CLI and the
// acceptance runner. Formal reports carry no timings so reruns are
// byte-identical.

#pragma once

#include "thetaslab/geometry.hpp"
#include "thetaslab/slabgen.hpp"
#include "thetaslab/thetaform.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace thetaslab {

// One row per monomial of lhs or rhs with both coefficients and the residual.
nlohmann::json per_monomial(const Series& lhs, const Series& rhs);
nlohmann::json identity_report(const IdentityCheck& c);

// Delta per orbit, normalized F and the normalization residuals.
nlohmann::json normalization_report(const Geometry& g, const Normalization& n);

// Coefficients of Delta for the first orbit of a one-variable geometry, or
// all terms otherwise.
nlohmann::json ogw_table(const Geometry& g, const Normalization& n);

// Lowercase hex FNV-1a 64 of the text; a compact fingerprint for reports.
std::string fingerprint(const std::string& text);

struct SuiteEntry {
  std::string name;
  bool passed = false;
  nlohmann::json detail;
  double seconds = 0;  // not serialized
};

struct FormalReport {
  std::string suite;
  std::vector<SuiteEntry> entries;

  bool passed() const;
  const SuiteEntry& entry(const std::string& name) const;
  nlohmann::json to_json() const;
};

// "quick" (small orders) or "full" (the release orders). Throws
// std::invalid_argument for other names.
FormalReport run_formal_suite(const std::string& suite);
std::vector<std::string> formal_suites();

// Writes JSON (indent 1) or CSV text to `path`, "-" for stdout.
void write_text(const std::string& text, const std::string& path);

}  // namespace thetaslab

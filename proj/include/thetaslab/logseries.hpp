// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "thetaslab/pseries.hpp"

#include <map>
#include <string>
#include <vector>

namespace thetaslab {

// Polynomial in formal symbols log(y_j) with Series coefficients. Total
// log-degree is capped at 2.
class LogSeries {
 public:
  using LogIndex = std::vector<int>;
  static constexpr int max_log_degree = 2;

  LogSeries(TablePtr table, std::vector<std::string> log_vars, std::optional<Rational> order);

  static LogSeries from_series(const Series& base, std::vector<std::string> log_vars);
  // log(y_var) as a LogSeries.
  static LogSeries log_of(TablePtr table, std::vector<std::string> log_vars,
                          const std::string& var, std::optional<Rational> order);

  const TablePtr& table() const { return table_; }
  const std::vector<std::string>& log_vars() const { return log_vars_; }
  const std::map<LogIndex, Series>& parts() const { return parts_; }
  Series part(const LogIndex& idx) const;
  Series base() const { return part(LogIndex(log_vars_.size(), 0)); }
  int log_degree() const;
  bool is_zero() const;

  void add_part(const LogIndex& idx, const Series& s);

  LogSeries& operator+=(const LogSeries& o);
  LogSeries& operator-=(const LogSeries& o);
  friend LogSeries operator+(LogSeries a, const LogSeries& b) { return a += b; }
  friend LogSeries operator-(LogSeries a, const LogSeries& b) { return a -= b; }
  LogSeries scaled(const Rational& c) const;
  LogSeries times(const Series& s) const;
  LogSeries truncated(const Rational& order) const;

  // y_var d/dy_var, acting on both the series exponents and the log symbols.
  LogSeries theta(const std::string& var) const;

  nlohmann::json to_json() const;

 private:
  void prune();

  TablePtr table_;
  std::vector<std::string> log_vars_;
  std::optional<Rational> order_;
  std::map<LogIndex, Series> parts_;
};

// Coefficientwise multiplication by the exponent of var (the Euler operator).
Series euler_derivative(const Series& f, std::string_view var);

}  // namespace thetaslab

// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/logseries.hpp"

#include <numeric>
#include <stdexcept>

namespace thetaslab {

Series euler_derivative(const Series& f, std::string_view var) {
  std::size_t i = f.table()->index(var);
  Series::TermMap out;
  for (const auto& [e, c] : f.raw_terms())
    if (e[i] != 0) out.emplace_hint(out.end(), e, c * ratio(e[i], f.den()));
  return Series::from_raw(f.table(), f.order(), f.den(), std::move(out));
}

LogSeries::LogSeries(TablePtr table, std::vector<std::string> log_vars,
                     std::optional<Rational> order)
    : table_(std::move(table)), log_vars_(std::move(log_vars)), order_(std::move(order)) {
  for (const auto& v : log_vars_) table_->index(v);
}

LogSeries LogSeries::from_series(const Series& base, std::vector<std::string> log_vars) {
  LogSeries l(base.table(), std::move(log_vars), base.order());
  l.add_part(LogIndex(l.log_vars_.size(), 0), base);
  return l;
}

LogSeries LogSeries::log_of(TablePtr table, std::vector<std::string> log_vars,
                            const std::string& var, std::optional<Rational> order) {
  LogSeries l(table, std::move(log_vars), order);
  LogIndex idx(l.log_vars_.size(), 0);
  bool found = false;
  for (std::size_t j = 0; j < l.log_vars_.size(); ++j)
    if (l.log_vars_[j] == var) {
      idx[j] = 1;
      found = true;
    }
  if (!found) throw std::invalid_argument("no log symbol for " + var);
  l.add_part(idx, Series::constant(table, 1, order));
  return l;
}

Series LogSeries::part(const LogIndex& idx) const {
  auto it = parts_.find(idx);
  if (it != parts_.end()) return it->second;
  return Series::zero(table_, order_);
}

int LogSeries::log_degree() const {
  int best = 0;
  for (const auto& [idx, s] : parts_) best = std::max(best, std::accumulate(idx.begin(), idx.end(), 0));
  return best;
}

bool LogSeries::is_zero() const { return parts_.empty(); }

void LogSeries::add_part(const LogIndex& idx, const Series& s) {
  if (idx.size() != log_vars_.size()) throw std::invalid_argument("log index size mismatch");
  if (std::accumulate(idx.begin(), idx.end(), 0) > max_log_degree)
    throw std::domain_error("log-degree exceeds 2");
  for (int k : idx)
    if (k < 0) throw std::invalid_argument("negative log power");
  auto it = parts_.find(idx);
  if (it == parts_.end()) {
    Series z = Series::zero(table_, order_);
    parts_.emplace(idx, z + s);
  } else {
    it->second += s;
  }
  prune();
}

void LogSeries::prune() {
  for (auto it = parts_.begin(); it != parts_.end();) {
    if (it->second.is_zero()) it = parts_.erase(it);
    else ++it;
  }
}

LogSeries& LogSeries::operator+=(const LogSeries& o) {
  if (o.log_vars_ != log_vars_) throw std::invalid_argument("log symbol mismatch");
  for (const auto& [idx, s] : o.parts_) add_part(idx, s);
  if (o.order_ && (!order_ || *o.order_ < *order_)) order_ = o.order_;
  return *this;
}

LogSeries& LogSeries::operator-=(const LogSeries& o) { return *this += o.scaled(-1); }

LogSeries LogSeries::scaled(const Rational& c) const {
  LogSeries r(table_, log_vars_, order_);
  for (const auto& [idx, s] : parts_) r.add_part(idx, s.scaled(c));
  return r;
}

LogSeries LogSeries::times(const Series& f) const {
  LogSeries r(table_, log_vars_, order_);
  for (const auto& [idx, s] : parts_) r.add_part(idx, s * f);
  return r;
}

LogSeries LogSeries::truncated(const Rational& order) const {
  LogSeries r(table_, log_vars_, order_ && *order_ < order ? order_ : std::optional<Rational>(order));
  for (const auto& [idx, s] : parts_) r.add_part(idx, s.truncated(order));
  return r;
}

LogSeries LogSeries::theta(const std::string& var) const {
  LogSeries r(table_, log_vars_, order_);
  std::optional<std::size_t> slot;
  for (std::size_t j = 0; j < log_vars_.size(); ++j)
    if (log_vars_[j] == var) slot = j;
  for (const auto& [idx, s] : parts_) {
    r.add_part(idx, euler_derivative(s, var));
    if (slot && idx[*slot] > 0) {
      LogIndex lower = idx;
      lower[*slot] -= 1;
      r.add_part(lower, s.scaled(idx[*slot]));
    }
  }
  return r;
}

nlohmann::json LogSeries::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [idx, s] : parts_) {
    nlohmann::json logs = nlohmann::json::object();
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (idx[j] != 0) logs[log_vars_[j]] = idx[j];
    arr.push_back({{"log_powers", logs}, {"series", thetaslab::to_json(s)}});
  }
  return arr;
}

}  // namespace thetaslab

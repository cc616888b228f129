// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Truncated multivariate Puiseux/Laurent series with exact rational
// coefficients. A series is graded by a weighted degree
//   deg(x^e) = sum_i w_i e_i
// and stores every term of degree <= order. An "exact" series has no order
// and represents a polynomial.

#pragma once

#include "thetaslab/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thetaslab {

enum class VarKind { q_like, z_like };

struct Variable {
  std::string name;
  VarKind kind = VarKind::q_like;
  Rational weight = 1;
  std::optional<Rational> lower_bound;  // exponents must stay >= this
};

Variable q_var(std::string name, Rational weight = 1,
               std::optional<Rational> lower_bound = Rational(0));
Variable z_var(std::string name, Rational weight = 0);

class VarTable {
 public:
  explicit VarTable(std::vector<Variable> vars);

  std::size_t size() const { return vars_.size(); }
  const Variable& var(std::size_t i) const { return vars_.at(i); }
  const std::vector<Variable>& vars() const { return vars_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;
  std::vector<std::string> names() const;
  bool has_q_like() const;

  // Weights rescaled to integers: w_i = scaled_weights()[i] / weight_scale().
  const std::vector<std::int64_t>& scaled_weights() const { return scaled_; }
  std::int64_t weight_scale() const { return scale_; }

  bool operator==(const VarTable& other) const;

 private:
  std::vector<Variable> vars_;
  std::vector<std::int64_t> scaled_;
  std::int64_t scale_ = 1;
};

using TablePtr = std::shared_ptr<const VarTable>;
TablePtr make_table(std::vector<Variable> vars);

// Dense exponent vector indexed like the table.
struct Monomial {
  std::vector<Rational> exps;

  Monomial() = default;
  explicit Monomial(std::size_t n) : exps(n, Rational(0)) {}
  Monomial(const VarTable& table,
           std::initializer_list<std::pair<std::string_view, Rational>> e);

  Monomial operator*(const Monomial& o) const;
  Monomial pow(const Rational& k) const;
  bool is_unit() const;
  bool operator==(const Monomial& o) const = default;
};

using ExpVec = std::vector<std::int64_t>;

class Series {
 public:
  using TermMap = std::map<ExpVec, Rational>;

  Series() = default;
  Series(TablePtr table, std::optional<Rational> order);

  static Series zero(TablePtr table, std::optional<Rational> order);
  static Series constant(TablePtr table, const Rational& c,
                         std::optional<Rational> order);
  static Series monomial(TablePtr table, const Monomial& m, const Rational& c,
                         std::optional<Rational> order);
  static Series variable(TablePtr table, std::string_view name,
                         std::optional<Rational> order);

  const TablePtr& table() const { return table_; }
  const std::optional<Rational>& order() const { return order_; }
  bool is_exact() const { return !order_.has_value(); }
  std::int64_t den() const { return den_; }
  const TermMap& raw_terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  std::vector<std::pair<Monomial, Rational>> terms() const;
  Monomial monomial_of(const ExpVec& e) const;
  Rational exponent(const ExpVec& e, std::size_t var) const {
    return ratio(e[var], den_);
  }
  Rational degree_of(const ExpVec& e) const;
  Rational degree_of(const Monomial& m) const;
  std::optional<Rational> valuation() const;

  // Throws std::out_of_range("beyond truncation") if deg(m) > order.
  Rational coeff(const Monomial& m) const;
  Rational constant_term() const;

  Series truncated(const Rational& order) const;
  Series with_order(std::optional<Rational> order) const;
  Series filter(const std::function<bool(const Monomial&)>& keep) const;
  Series z0_part() const;
  Series times_monomial(const Monomial& m, const Rational& c = 1) const;
  Series scaled(const Rational& c) const;
  Series pow(long k) const;

  Series operator-() const;
  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b);

  // Equal tables, order and terms.
  bool operator==(const Series& o) const;

  // Internal construction from numerators over a denominator; normalizes.
  static Series from_raw(TablePtr table, std::optional<Rational> order,
                         std::int64_t den, TermMap terms);

 private:
  void normalize();
  Series rescaled(std::int64_t den) const;
  std::int64_t degnum(const ExpVec& e) const;
  std::optional<std::int64_t> limit() const;
  void check_bounds() const;

  TablePtr table_;
  std::optional<Rational> order_;
  std::int64_t den_ = 1;
  TermMap terms_;
};

// Accumulates terms with arbitrary rational exponents; terms beyond the
// order are dropped on build().
class SeriesBuilder {
 public:
  SeriesBuilder(TablePtr table, std::optional<Rational> order)
      : table_(std::move(table)), order_(std::move(order)) {}
  void add(const Monomial& m, const Rational& c);
  void add(const Series& s);
  Series build() const;

 private:
  TablePtr table_;
  std::optional<Rational> order_;
  std::vector<std::pair<Monomial, Rational>> pending_;
};

// f must have scalar degree-0 part and only positive-degree other terms.
// An exact input needs an explicit order.
Series exp_series(const Series& f, std::optional<Rational> order = {});
Series log_series(const Series& f, std::optional<Rational> order = {});
Series invert(const Series& f, std::optional<Rational> order = {});

struct MonomialImage {
  Rational coeff = 1;
  Monomial mono;  // in the target table
};

// Homomorphic substitution var -> coeff * monomial. Every variable of f's
// table must be mapped (by name).
Series substitute_monomials(
    const Series& f, const std::map<std::string, MonomialImage>& images,
    TablePtr target, std::optional<Rational> order);

// Substitution var -> series. Unmapped variables are carried over by name.
Series compose(const Series& f, const std::map<std::string, Series>& images,
               TablePtr target, std::optional<Rational> order);

// Reinterprets variables by name in another table (possibly other weights).
Series regraded(const Series& f, TablePtr target,
                std::optional<Rational> order);

nlohmann::json to_json(const Series& f);
std::string to_csv(const Series& f);
std::string to_string(const Series& f);

}  // namespace thetaslab

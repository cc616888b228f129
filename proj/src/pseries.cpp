// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/pseries.hpp"

#include "thetaslab/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace thetaslab {

namespace {

struct ExpHash {
  std::size_t operator()(const ExpVec& e) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int64_t x : e) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

using Accumulator = std::unordered_map<ExpVec, Rational, ExpHash>;

std::optional<Rational> min_order(const std::optional<Rational>& a,
                                  const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

void require_same_table(const TablePtr& a, const TablePtr& b) {
  if (!a || !b) throw std::invalid_argument("series without variable table");
  if (a != b && !(*a == *b)) throw std::invalid_argument("variable-table mismatch");
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("exponent overflow");
  return r;
}

}  // namespace

Variable q_var(std::string name, Rational weight, std::optional<Rational> lower_bound) {
  return Variable{std::move(name), VarKind::q_like, std::move(weight), std::move(lower_bound)};
}

Variable z_var(std::string name, Rational weight) {
  return Variable{std::move(name), VarKind::z_like, std::move(weight), std::nullopt};
}

VarTable::VarTable(std::vector<Variable> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name.empty()) throw std::invalid_argument("empty variable name");
    if (vars_[i].weight < 0) throw std::invalid_argument("negative weight for " + vars_[i].name);
    for (std::size_t j = 0; j < i; ++j)
      if (vars_[j].name == vars_[i].name)
        throw std::invalid_argument("duplicate variable name " + vars_[i].name);
  }
  scale_ = 1;
  for (const auto& v : vars_) scale_ = lcm64(scale_, to_int64(v.weight.get_den()));
  for (const auto& v : vars_) scaled_.push_back(to_int64(Integer(v.weight * scale_)));
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::size_t VarTable::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw std::invalid_argument("undeclared variable " + std::string(name));
  return *i;
}

std::vector<std::string> VarTable::names() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

bool VarTable::has_q_like() const {
  return std::any_of(vars_.begin(), vars_.end(),
                     [](const Variable& v) { return v.kind == VarKind::q_like; });
}

bool VarTable::operator==(const VarTable& o) const {
  if (vars_.size() != o.vars_.size()) return false;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& a = vars_[i];
    const auto& b = o.vars_[i];
    if (a.name != b.name || a.kind != b.kind || a.weight != b.weight ||
        a.lower_bound != b.lower_bound)
      return false;
  }
  return true;
}

TablePtr make_table(std::vector<Variable> vars) {
  return std::make_shared<const VarTable>(std::move(vars));
}

Monomial::Monomial(const VarTable& table,
                   std::initializer_list<std::pair<std::string_view, Rational>> e)
    : exps(table.size(), Rational(0)) {
  for (const auto& [name, x] : e) exps[table.index(name)] += x;
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (exps.size() != o.exps.size()) throw std::invalid_argument("monomial size mismatch");
  Monomial r = *this;
  for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += o.exps[i];
  return r;
}

Monomial Monomial::pow(const Rational& k) const {
  Monomial r = *this;
  for (auto& x : r.exps) x *= k;
  return r;
}

bool Monomial::is_unit() const {
  return std::all_of(exps.begin(), exps.end(), [](const Rational& x) { return x == 0; });
}

// ---------------------------------------------------------------------------

Series::Series(TablePtr table, std::optional<Rational> order)
    : table_(std::move(table)), order_(std::move(order)) {
  if (!table_) throw std::invalid_argument("series without variable table");
}

Series Series::zero(TablePtr table, std::optional<Rational> order) {
  return Series(std::move(table), std::move(order));
}

Series Series::constant(TablePtr table, const Rational& c, std::optional<Rational> order) {
  return monomial(table, Monomial(table->size()), c, std::move(order));
}

Series Series::monomial(TablePtr table, const Monomial& m, const Rational& c,
                        std::optional<Rational> order) {
  SeriesBuilder b(std::move(table), std::move(order));
  b.add(m, c);
  return b.build();
}

Series Series::variable(TablePtr table, std::string_view name, std::optional<Rational> order) {
  Monomial m(table->size());
  m.exps[table->index(name)] = 1;
  return monomial(std::move(table), m, 1, std::move(order));
}

Series Series::from_raw(TablePtr table, std::optional<Rational> order, std::int64_t den,
                        TermMap terms) {
  Series s(std::move(table), std::move(order));
  if (den <= 0) throw std::invalid_argument("non-positive exponent denominator");
  s.den_ = den;
  s.terms_ = std::move(terms);
  s.normalize();
  return s;
}

std::int64_t Series::degnum(const ExpVec& e) const {
  const auto& w = table_->scaled_weights();
  std::int64_t d = 0;
  for (std::size_t i = 0; i < e.size(); ++i) d += w[i] * e[i];
  return d;
}

std::optional<std::int64_t> Series::limit() const {
  if (!order_) return std::nullopt;
  return to_int64(floor_of(*order_ * Rational(table_->weight_scale()) * Rational(den_)));
}

void Series::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0) it = terms_.erase(it);
    else ++it;
  }
  if (auto lim = limit()) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (degnum(it->first) > *lim) it = terms_.erase(it);
      else ++it;
    }
  }
  std::int64_t g = den_;
  for (const auto& [e, c] : terms_) {
    for (std::int64_t x : e) g = std::gcd(g, x);
    if (g == 1) break;
  }
  if (g > 1) {
    TermMap reduced;
    for (auto& [e, c] : terms_) {
      ExpVec r = e;
      for (auto& x : r) x /= g;
      reduced.emplace(std::move(r), std::move(c));
    }
    terms_ = std::move(reduced);
    den_ /= g;
  }
  check_bounds();
}

void Series::check_bounds() const {
  std::vector<std::optional<std::int64_t>> floors(table_->size());
  bool any = false;
  for (std::size_t i = 0; i < table_->size(); ++i) {
    if (const auto& lb = table_->var(i).lower_bound) {
      floors[i] = to_int64(ceil_of(*lb * Rational(den_)));
      any = true;
    }
  }
  if (!any) return;
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (floors[i] && e[i] < *floors[i])
        throw std::domain_error("exponent below lower bound for variable " +
                                table_->var(i).name);
    }
  }
}

Series Series::rescaled(std::int64_t den) const {
  if (den % den_ != 0) throw std::logic_error("rescale to non-multiple denominator");
  std::int64_t f = den / den_;
  Series s(table_, order_);
  s.den_ = den;
  if (f == 1) {
    s.terms_ = terms_;
    return s;
  }
  for (const auto& [e, c] : terms_) {
    ExpVec r = e;
    for (auto& x : r) x = checked_mul(x, f);
    s.terms_.emplace_hint(s.terms_.end(), std::move(r), c);
  }
  return s;
}

std::vector<std::pair<Monomial, Rational>> Series::terms() const {
  std::vector<std::pair<Monomial, Rational>> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.emplace_back(monomial_of(e), c);
  return out;
}

Monomial Series::monomial_of(const ExpVec& e) const {
  Monomial m(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) m.exps[i] = ratio(e[i], den_);
  return m;
}

Rational Series::degree_of(const ExpVec& e) const {
  return ratio(degnum(e), table_->weight_scale() * den_);
}

Rational Series::degree_of(const Monomial& m) const {
  Rational d = 0;
  for (std::size_t i = 0; i < m.exps.size(); ++i) d += table_->var(i).weight * m.exps[i];
  return d;
}

std::optional<Rational> Series::valuation() const {
  if (terms_.empty()) return std::nullopt;
  std::int64_t best = degnum(terms_.begin()->first);
  for (const auto& [e, c] : terms_) best = std::min(best, degnum(e));
  return ratio(best, table_->weight_scale() * den_);
}

Rational Series::coeff(const Monomial& m) const {
  if (m.exps.size() != table_->size()) throw std::invalid_argument("monomial size mismatch");
  if (order_ && degree_of(m) > *order_) throw std::out_of_range("beyond truncation");
  ExpVec e(m.exps.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    Rational x = m.exps[i] * Rational(den_);
    if (!is_integer(x)) return 0;
    e[i] = to_int64(x.get_num());
  }
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Series::constant_term() const {
  return coeff(Monomial(table_->size()));
}

Series Series::truncated(const Rational& order) const {
  return with_order(min_order(order_, order));
}

Series Series::with_order(std::optional<Rational> order) const {
  return from_raw(table_, std::move(order), den_, terms_);
}

Series Series::filter(const std::function<bool(const Monomial&)>& keep) const {
  TermMap out;
  for (const auto& [e, c] : terms_)
    if (keep(monomial_of(e))) out.emplace_hint(out.end(), e, c);
  return from_raw(table_, order_, den_, std::move(out));
}

Series Series::z0_part() const {
  TermMap out;
  for (const auto& [e, c] : terms_) {
    bool pure = true;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (table_->var(i).kind == VarKind::z_like && e[i] != 0) pure = false;
    if (pure) out.emplace_hint(out.end(), e, c);
  }
  return from_raw(table_, order_, den_, std::move(out));
}

Series Series::times_monomial(const Monomial& m, const Rational& c) const {
  Series mono = Series::monomial(table_, m, c, std::nullopt);
  return mono * *this;
}

Series Series::scaled(const Rational& c) const {
  TermMap out;
  if (c != 0)
    for (const auto& [e, x] : terms_) out.emplace_hint(out.end(), e, x * c);
  return from_raw(table_, order_, den_, std::move(out));
}

Series Series::pow(long k) const {
  if (k < 0) return invert(*this).pow(-k);
  Series result = Series::constant(table_, 1, std::nullopt);
  Series base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Series Series::operator-() const { return scaled(-1); }

Series& Series::operator+=(const Series& o) {
  require_same_table(table_, o.table_);
  std::int64_t den = lcm64(den_, o.den_);
  Series a = rescaled(den);
  Series b = o.rescaled(den);
  for (auto& [e, c] : b.terms_) a.terms_[e] += c;
  a.order_ = min_order(order_, o.order_);
  a.normalize();
  *this = std::move(a);
  return *this;
}

Series& Series::operator-=(const Series& o) { return *this += -o; }

Series operator*(const Series& a, const Series& b) {
  require_same_table(a.table_, b.table_);
  std::optional<Rational> order;
  auto val_or_order = [](const Series& s) -> Rational {
    auto v = s.valuation();
    return v ? *v : *s.order_;
  };
  if (a.order_ && b.order_) {
    order = std::min(*a.order_ + val_or_order(b), *b.order_ + val_or_order(a));
  } else if (a.order_) {
    if (b.terms_.empty()) return Series(a.table_, std::nullopt);
    order = *a.order_ + *b.valuation();
  } else if (b.order_) {
    if (a.terms_.empty()) return Series(a.table_, std::nullopt);
    order = *b.order_ + *a.valuation();
  }
  std::int64_t den = lcm64(a.den_, b.den_);
  Series x = a.rescaled(den);
  Series y = b.rescaled(den);
  Series result(a.table_, order);
  result.den_ = den;
  std::optional<std::int64_t> lim = result.limit();

  std::vector<std::pair<std::int64_t, const std::pair<const ExpVec, Rational>*>> ys;
  ys.reserve(y.terms_.size());
  for (const auto& t : y.terms_) ys.emplace_back(y.degnum(t.first), &t);
  std::stable_sort(ys.begin(), ys.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<const std::pair<const ExpVec, Rational>*> xs;
  xs.reserve(x.terms_.size());
  for (const auto& t : x.terms_) xs.push_back(&t);

  std::size_t n = a.table_->size();
  auto accumulate = [&](std::size_t lo, std::size_t hi, Accumulator& acc) {
    ExpVec scratch(n);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& [ex, cx] = *xs[i];
      std::int64_t dx = x.degnum(ex);
      for (const auto& [dy, ty] : ys) {
        if (lim && dx + dy > *lim) break;
        for (std::size_t k = 0; k < n; ++k) scratch[k] = ex[k] + ty->first[k];
        auto [it, fresh] = acc.try_emplace(scratch);
        it->second += cx * ty->second;
      }
    }
  };

  const std::size_t work = xs.size() * ys.size();
  const unsigned workers = worker_count();
  std::vector<Accumulator> parts;
  if (workers > 1 && work > 200000 && xs.size() >= 2 * workers) {
    std::size_t chunks = std::min<std::size_t>(xs.size(), 4 * workers);
    parts.resize(chunks);
    parallel_for(chunks, [&](std::size_t c) {
      accumulate(xs.size() * c / chunks, xs.size() * (c + 1) / chunks, parts[c]);
    });
  } else {
    parts.resize(1);
    accumulate(0, xs.size(), parts[0]);
  }
  for (auto& part : parts)
    for (auto& [e, c] : part) result.terms_[e] += c;
  result.normalize();
  return result;
}

bool Series::operator==(const Series& o) const {
  if (!table_ || !o.table_) return table_ == o.table_ && terms_ == o.terms_;
  return *table_ == *o.table_ && order_ == o.order_ && den_ == o.den_ && terms_ == o.terms_;
}

// ---------------------------------------------------------------------------

void SeriesBuilder::add(const Monomial& m, const Rational& c) {
  if (m.exps.size() != table_->size()) throw std::invalid_argument("monomial size mismatch");
  if (c != 0) pending_.emplace_back(m, c);
}

void SeriesBuilder::add(const Series& s) {
  require_same_table(table_, s.table());
  for (auto& t : s.terms()) pending_.push_back(std::move(t));
}

Series SeriesBuilder::build() const {
  std::int64_t den = 1;
  for (const auto& [m, c] : pending_)
    for (const auto& x : m.exps) den = lcm64(den, to_int64(x.get_den()));
  Series::TermMap terms;
  for (const auto& [m, c] : pending_) {
    ExpVec e(m.exps.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = to_int64(Integer(m.exps[i] * Rational(den)));
    terms[e] += c;
  }
  return Series::from_raw(table_, order_, den, std::move(terms));
}

// ---------------------------------------------------------------------------

namespace {

// Terms of f split by scaled degree; bucket 0 holds only the constant.
struct Buckets {
  std::int64_t den = 1;
  std::int64_t limit = 0;
  std::vector<std::vector<std::pair<ExpVec, Rational>>> by_degree;
  Rational constant = 0;
};

Buckets split(const Series& f, const std::optional<Rational>& order, const char* what) {
  std::optional<Rational> ord = min_order(f.order(), order);
  if (!ord) throw std::invalid_argument(std::string(what) + ": exact input needs an order");
  Buckets b;
  b.den = f.den();
  const auto& table = *f.table();
  b.limit = to_int64(floor_of(*ord * Rational(table.weight_scale()) * Rational(b.den)));
  if (b.limit < 0) b.limit = -1;
  b.by_degree.resize(static_cast<std::size_t>(b.limit + 1));
  const auto& w = table.scaled_weights();
  for (const auto& [e, c] : f.raw_terms()) {
    std::int64_t d = 0;
    bool unit = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      d += w[i] * e[i];
      if (e[i] != 0) unit = false;
    }
    if (d < 0) throw std::domain_error(std::string(what) + ": term of negative degree");
    if (d == 0 && !unit)
      throw std::domain_error(std::string(what) + ": non-constant term of degree 0");
    if (unit) {
      b.constant = c;
      continue;
    }
    if (d <= b.limit) b.by_degree[static_cast<std::size_t>(d)].emplace_back(e, c);
  }
  return b;
}

void multiply_into(Accumulator& acc, const std::vector<std::pair<ExpVec, Rational>>& x,
                   const std::vector<std::pair<ExpVec, Rational>>& y, const Rational& scale) {
  if (x.empty() || y.empty()) return;
  std::size_t n = x.front().first.size();
  ExpVec scratch(n);
  for (const auto& [ex, cx] : x) {
    Rational sx = cx * scale;
    for (const auto& [ey, cy] : y) {
      for (std::size_t k = 0; k < n; ++k) scratch[k] = ex[k] + ey[k];
      auto [it, fresh] = acc.try_emplace(scratch);
      it->second += sx * cy;
    }
  }
}

std::vector<std::pair<ExpVec, Rational>> drain(Accumulator& acc, const Rational& scale) {
  std::vector<std::pair<ExpVec, Rational>> out;
  out.reserve(acc.size());
  for (auto& [e, c] : acc) {
    if (c == 0) continue;
    out.emplace_back(e, c * scale);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  return out;
}

Series assemble(const Series& f, const Buckets& b, const std::optional<Rational>& order,
                const Rational& constant,
                const std::vector<std::vector<std::pair<ExpVec, Rational>>>& buckets) {
  Series::TermMap terms;
  if (constant != 0) terms.emplace(ExpVec(f.table()->size(), 0), constant);
  for (const auto& bucket : buckets)
    for (const auto& [e, c] : bucket) terms[e] += c;
  return Series::from_raw(f.table(), min_order(f.order(), order), b.den, std::move(terms));
}

}  // namespace

Series log_series(const Series& f, std::optional<Rational> order) {
  Buckets b = split(f, order, "log_series");
  if (b.constant != 1) throw std::domain_error("log_series: constant term must be 1");
  const auto& fd = b.by_degree;
  std::vector<std::vector<std::pair<ExpVec, Rational>>> g(fd.size());
  for (std::int64_t D = 1; D <= b.limit; ++D) {
    Accumulator acc;
    for (const auto& [e, c] : fd[D]) acc[e] += c * Rational(D);
    for (std::int64_t d = 1; d < D; ++d)
      multiply_into(acc, g[d], fd[D - d], Rational(-d));
    g[D] = drain(acc, ratio(1, D));
  }
  return assemble(f, b, order, 0, g);
}

Series exp_series(const Series& f, std::optional<Rational> order) {
  Buckets b = split(f, order, "exp_series");
  if (b.constant != 0) throw std::domain_error("exp_series: constant term must be 0");
  const auto& gd = b.by_degree;
  std::vector<std::vector<std::pair<ExpVec, Rational>>> h(gd.size());
  std::vector<std::pair<ExpVec, Rational>> one;
  one.emplace_back(ExpVec(f.table()->size(), 0), 1);
  for (std::int64_t D = 1; D <= b.limit; ++D) {
    Accumulator acc;
    for (std::int64_t d = 1; d <= D; ++d)
      multiply_into(acc, gd[d], D == d ? one : h[D - d], Rational(d));
    h[D] = drain(acc, ratio(1, D));
  }
  return assemble(f, b, order, 1, h);
}

Series invert(const Series& f, std::optional<Rational> order) {
  Buckets b = split(f, order, "invert");
  if (b.constant == 0) throw std::domain_error("invert: zero constant term");
  Rational inv = 1 / b.constant;
  const auto& fd = b.by_degree;
  std::vector<std::vector<std::pair<ExpVec, Rational>>> h(fd.size());
  std::vector<std::pair<ExpVec, Rational>> h0;
  h0.emplace_back(ExpVec(f.table()->size(), 0), inv);
  for (std::int64_t D = 1; D <= b.limit; ++D) {
    Accumulator acc;
    for (std::int64_t d = 1; d <= D; ++d)
      multiply_into(acc, fd[d], D == d ? h0 : h[D - d], Rational(1));
    h[D] = drain(acc, -inv);
  }
  return assemble(f, b, order, inv, h);
}

// ---------------------------------------------------------------------------

namespace {

Rational rational_power(const Rational& c, const Rational& e, const std::string& var) {
  if (e == 0 || c == 1) return 1;
  if (!is_integer(e))
    throw std::domain_error("fractional power of non-unit coefficient for " + var);
  long k = to_int64(e.get_num());
  if (c == 0) {
    if (k < 0) throw std::domain_error("negative power of zero for " + var);
    return 0;
  }
  Rational base = k < 0 ? Rational(1 / c) : c;
  unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), n);
  return r;
}

}  // namespace

Series substitute_monomials(const Series& f, const std::map<std::string, MonomialImage>& images,
                            TablePtr target, std::optional<Rational> order) {
  const auto& src = *f.table();
  std::vector<const MonomialImage*> img(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto it = images.find(src.var(i).name);
    if (it == images.end())
      throw std::invalid_argument("substitution not total: missing " + src.var(i).name);
    if (it->second.mono.exps.size() != target->size())
      throw std::invalid_argument("image monomial not in the target table");
    img[i] = &it->second;
  }
  SeriesBuilder out(target, order);
  for (const auto& [e, c] : f.raw_terms()) {
    Rational coeff = c;
    Monomial m(target->size());
    for (std::size_t i = 0; i < e.size() && coeff != 0; ++i) {
      if (e[i] == 0) continue;
      Rational x = ratio(e[i], f.den());
      coeff *= rational_power(img[i]->coeff, x, src.var(i).name);
      for (std::size_t k = 0; k < m.exps.size(); ++k) m.exps[k] += img[i]->mono.exps[k] * x;
    }
    if (coeff != 0) out.add(m, coeff);
  }
  return out.build();
}

Series compose(const Series& f, const std::map<std::string, Series>& images, TablePtr target,
               std::optional<Rational> order) {
  const auto& src = *f.table();
  std::vector<const Series*> img(src.size(), nullptr);
  std::vector<std::size_t> carry(src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto it = images.find(src.var(i).name);
    if (it != images.end()) {
      require_same_table(it->second.table(), target);
      img[i] = &it->second;
    } else {
      carry[i] = target->index(src.var(i).name);
    }
  }
  // group terms by the exponents of substituted variables
  std::map<std::vector<std::int64_t>, SeriesBuilder> groups;
  for (const auto& [e, c] : f.raw_terms()) {
    std::vector<std::int64_t> key(src.size(), 0);
    Monomial rest(target->size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      Rational x = ratio(e[i], f.den());
      if (img[i]) {
        if (!is_integer(x))
          throw std::domain_error("fractional power of substituted series for " + src.var(i).name);
        key[i] = to_int64(x.get_num());
      } else {
        rest.exps[carry[i]] += x;
      }
    }
    auto it = groups.try_emplace(key, target, std::nullopt).first;
    it->second.add(rest, c);
  }
  std::map<std::pair<std::size_t, std::int64_t>, Series> powers;
  auto power = [&](std::size_t i, std::int64_t k) -> const Series& {
    auto key = std::make_pair(i, k);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    Series base = k < 0 ? invert(*img[i], order) : img[i]->with_order(min_order(img[i]->order(), order));
    Series p = Series::constant(target, 1, std::nullopt);
    for (std::int64_t j = 0; j < (k < 0 ? -k : k); ++j) {
      p = p * base;
      if (order) p = p.truncated(*order);
    }
    return powers.emplace(key, std::move(p)).first->second;
  };
  Series total(target, order);
  for (const auto& [key, builder] : groups) {
    Series term = builder.build();
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] == 0) continue;
      term = term * power(i, key[i]);
      if (order) term = term.truncated(*order);
    }
    total += term;
  }
  return order ? total.truncated(*order) : total;
}

Series regraded(const Series& f, TablePtr target, std::optional<Rational> order) {
  const auto& src = *f.table();
  std::vector<std::size_t> map(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) map[i] = target->index(src.var(i).name);
  Series::TermMap terms;
  for (const auto& [e, c] : f.raw_terms()) {
    ExpVec r(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) r[map[i]] = e[i];
    terms.emplace(std::move(r), c);
  }
  return Series::from_raw(std::move(target), std::move(order), f.den(), std::move(terms));
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const Series& f) {
  nlohmann::json arr = nlohmann::json::array();
  const auto& table = *f.table();
  for (const auto& [e, c] : f.raw_terms()) {
    nlohmann::json exps = nlohmann::json::object();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) exps[table.var(i).name] = to_fraction(f.exponent(e, i));
    arr.push_back({{"exponents", exps}, {"coeff", to_fraction(c)}});
  }
  return arr;
}

std::string to_csv(const Series& f) {
  std::ostringstream out;
  const auto& table = *f.table();
  for (const auto& v : table.vars()) out << v.name << ',';
  out << "coeff\n";
  for (const auto& [e, c] : f.raw_terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << to_fraction(f.exponent(e, i)) << ',';
    out << to_fraction(c) << '\n';
  }
  return out.str();
}

std::string to_string(const Series& f) {
  std::ostringstream out;
  const auto& table = *f.table();
  bool first = true;
  for (const auto& [e, c] : f.raw_terms()) {
    out << (first ? "" : " + ") << c.get_str();
    first = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      Rational x = f.exponent(e, i);
      out << '*' << table.var(i).name;
      if (x != 1) out << '^' << (is_integer(x) ? x.get_str() : "(" + x.get_str() + ")");
    }
  }
  if (first) out << '0';
  if (f.order()) out << " + O(" << f.order()->get_str() << ')';
  return out.str();
}

}  // namespace thetaslab

// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/frames.hpp"

#include <algorithm>
#include <stdexcept>

namespace thetaslab {

namespace {

std::map<std::int64_t, Rational> divide_by_x_minus_1(const std::map<std::int64_t, Rational>& p) {
  std::map<std::int64_t, Rational> q;
  if (p.empty()) return q;
  Rational running = 0;
  std::int64_t lo = p.begin()->first, hi = p.rbegin()->first;
  for (std::int64_t k = lo; k < hi; ++k) {
    auto it = p.find(k);
    if (it != p.end()) running += it->second;
    if (running != 0) q[k] = -running;
  }
  running += p.rbegin()->second;
  if (running != 0) throw std::logic_error("polynomial does not vanish at 1");
  return q;
}

std::vector<Point> fundamental_domain(const std::vector<int>& periods) {
  std::vector<Point> out{Point{}};
  for (int d : periods) {
    std::vector<Point> next;
    for (const auto& p : out)
      for (int k = 0; k < d; ++k) {
        Point q = p;
        q.push_back(k);
        next.push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

std::string orbit_suffix(const Point& v) {
  std::string s;
  for (auto x : v) s += "_" + std::to_string(x);
  return s;
}

}  // namespace

std::map<std::int64_t, Rational> square_quotient(std::int64_t c) {
  std::map<std::int64_t, Rational> p;
  p[c] += 1;
  p[0] += -1 + c;
  p[1] += -c;
  for (auto it = p.begin(); it != p.end();) {
    if (it->second == 0) it = p.erase(it);
    else ++it;
  }
  return divide_by_x_minus_1(divide_by_x_minus_1(p));
}

std::map<std::int64_t, Rational> linear_quotient(std::int64_t c) {
  std::map<std::int64_t, Rational> p;
  p[c] += 1;
  p[0] += -1;
  for (auto it = p.begin(); it != p.end();) {
    if (it->second == 0) it = p.erase(it);
    else ++it;
  }
  return divide_by_x_minus_1(p);
}

Monomial KahlerFrame::monomial_of(const RVector& coords, const VarTable& table) const {
  Monomial m(table.size());
  for (std::size_t b = 0; b < vars_.size(); ++b)
    if (coords[b] != 0) m.exps[table.index(vars_[b].name)] += coords[b];
  return m;
}

Monomial KahlerFrame::monomial(const CurveClass& c, const VarTable& table) const {
  return monomial_of(coordinates(c), table);
}

// ---------------------------------------------------------------------------

LatticeFrame::LatticeFrame(std::vector<int> periods) : periods_(std::move(periods)) {
  const int l = static_cast<int>(periods_.size());
  if (l < 1 || l > 3) throw std::invalid_argument("lattice frame needs 1 <= l <= 3");
  for (int d : periods_)
    if (d < 1) throw std::invalid_argument("periods must be >= 1");
  std::vector<Point> orbits = fundamental_domain(periods_);
  std::vector<Key> cands;
  for (int i = 0; i < l; ++i)
    for (const auto& v : orbits) cands.emplace_back(i, i, v);
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j)
      for (const auto& v : orbits) cands.emplace_back(i, j, v);
  candidate_count_ = cands.size();
  std::map<Key, std::size_t> pos;
  for (std::size_t c = 0; c < cands.size(); ++c) pos[cands[c]] = c;
  auto at = [&](int i, int j, Point v) {
    if (i > j) std::swap(i, j);
    return pos.at(Key(i, j, reduce_mod(v, periods_)));
  };
  auto shifted = [&](const Point& v, int k) {
    Point w = v;
    w[static_cast<std::size_t>(k)] += 1;
    return w;
  };

  // Columns are taken in reverse candidate order so that the non-pivot
  // columns are the greedily chosen (earliest) independent candidates.
  const std::size_t n = cands.size();
  auto col = [&](std::size_t c) { return n - 1 - c; };
  RMatrix rel;
  auto push = [&](std::vector<std::pair<std::size_t, int>> terms) {
    RVector row(n, Rational(0));
    for (auto [c, s] : terms) row[col(c)] += s;
    if (std::any_of(row.begin(), row.end(), [](const Rational& x) { return x != 0; }))
      rel.push_back(std::move(row));
  };
  for (const auto& v : orbits) {
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) {
        if (i == j) continue;
        push({{at(i, i, v), 1}, {at(i, i, shifted(v, j)), -1}, {at(i, j, v), -1},
              {at(i, j, shifted(v, i)), 1}});
      }
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        for (int k = 0; k < l; ++k) {
          if (i == j || j == k || i == k) continue;
          push({{at(i, j, v), 1}, {at(i, j, shifted(v, k)), -1}, {at(i, k, v), -1},
                {at(i, k, shifted(v, j)), 1}});
        }
  }
  Echelon e = row_reduce(rel, n);
  std::vector<bool> pivot(n, false);
  for (auto p : e.pivots) pivot[p] = true;
  std::vector<std::size_t> basis;  // candidate indices
  for (std::size_t c = 0; c < n; ++c)
    if (!pivot[col(c)]) basis.push_back(c);
  std::map<std::size_t, std::size_t> basis_slot;
  for (std::size_t b = 0; b < basis.size(); ++b) basis_slot[basis[b]] = b;

  const bool free_module = basis.size() == n;
  const bool all_ones = std::all_of(periods_.begin(), periods_.end(), [](int d) { return d == 1; });
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const auto& [i, j, v] = cands[basis[b]];
    std::string name;
    if (l == 1) {
      int d = periods_[0];
      name = d == 1 ? "q" : "q" + std::to_string((v[0] + 1) % d == 0 ? d : (v[0] + 1) % d);
    } else if (l == 2 && all_ones) {
      name = i != j ? "q_sigma" : (i == 0 ? "q_tau" : "q_rho");
    } else if (l == 2) {
      name = (i != j ? "sigma" : (i == 0 ? "tau" : "rho")) + orbit_suffix(v);
    } else if (all_ones) {
      name = "q_" + std::to_string(i + 1) + std::to_string(j + 1);
    } else {
      name = (i == j ? "t" + std::to_string(i + 1) : "s" + std::to_string(i + 1) + std::to_string(j + 1)) +
             orbit_suffix(v);
    }
    std::optional<Rational> lower;
    if (free_module && i == j) lower = Rational(0);
    vars_.push_back(q_var(name, i == j ? Rational(1) : Rational(0), lower));
  }
  for (std::size_t c = 0; c < n; ++c) {
    RVector coords(basis.size(), Rational(0));
    if (!pivot[col(c)]) {
      coords[basis_slot.at(c)] = 1;
    } else {
      for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] != col(c)) continue;
        for (std::size_t b = 0; b < basis.size(); ++b) coords[b] = -e.reduced[r][col(basis[b])];
      }
    }
    reduce_.emplace(cands[c], std::move(coords));
  }
}

RVector LatticeFrame::generator(int i, int j, const Point& position) const {
  if (i > j) std::swap(i, j);
  if (static_cast<int>(position.size()) != lattice_dim())
    throw std::invalid_argument("generator position of wrong dimension");
  return reduce_.at(Key(i, j, reduce_mod(position, periods_)));
}

Monomial LatticeFrame::generator_monomial(int i, int j, const Point& position,
                                          const VarTable& table) const {
  return monomial_of(generator(i, j, position), table);
}

RVector LatticeFrame::coordinates(const CurveClass& c) const {
  const int l = lattice_dim();
  if (c.degree() != 0) throw std::domain_error("class not in the rational span (degree)");
  for (const auto& m : c.moment(l))
    if (m != 0) throw std::domain_error("class not in the rational span (moment)");
  RVector out(vars_.size(), Rational(0));
  auto add = [&](int i, int j, const Point& p, const Rational& w) {
    const RVector& g = generator(i, j, p);
    for (std::size_t b = 0; b < out.size(); ++b)
      if (g[b] != 0) out[b] += w * g[b];
  };
  for (const auto& [u, fu] : c.support()) {
    for (int j = 0; j < l; ++j) {
      Point p(static_cast<std::size_t>(l), 0);
      for (int k = 0; k < j; ++k) p[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(k)];
      for (const auto& [m, h] : square_quotient(u[static_cast<std::size_t>(j)])) {
        p[static_cast<std::size_t>(j)] = m;
        add(j, j, p, fu * h);
      }
    }
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j) {
        std::int64_t uj = u[static_cast<std::size_t>(j)];
        if (uj == 0) continue;
        Point p(static_cast<std::size_t>(l), 0);
        for (int k = 0; k < i; ++k) p[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(k)];
        for (const auto& [m, g] : linear_quotient(u[static_cast<std::size_t>(i)])) {
          p[static_cast<std::size_t>(i)] = m;
          add(i, j, p, fu * Rational(static_cast<long>(uj)) * g);
        }
      }
  }
  return out;
}

// ---------------------------------------------------------------------------

WallFrame::WallFrame(const FanData& fan) : ray_points_(fan.rays) {
  if (!fan.quotient.empty()) throw std::invalid_argument("wall frame is for finite fans");
  std::vector<Wall> ws = walls(fan);
  RMatrix chosen;
  std::size_t idx = 0;
  for (const auto& w : ws) {
    ++idx;
    RVector col;
    for (const auto& v : ray_points_) col.push_back(w.curve.pairing(v));
    RMatrix trial = chosen;
    trial.push_back(col);
    if (rank(trial, ray_points_.size()) == chosen.size()) continue;
    chosen = std::move(trial);
    basis_.push_back(w.curve);
    std::string name = "q";
    if (w.face.size() == 1 && fan.rays[w.face[0]].size() == 1)
      name += std::to_string(fan.rays[w.face[0]][0]);
    else
      name += std::to_string(idx);
    vars_.push_back(q_var(name, 1, Rational(0)));
  }
}

RVector WallFrame::coordinates(const CurveClass& c) const {
  for (const auto& [v, x] : c.support())
    if (std::find(ray_points_.begin(), ray_points_.end(), v) == ray_points_.end())
      throw std::domain_error("class pairs with a ray outside the fan");
  RMatrix a(ray_points_.size(), RVector(basis_.size(), Rational(0)));
  RVector rhs(ray_points_.size(), Rational(0));
  for (std::size_t r = 0; r < ray_points_.size(); ++r) {
    for (std::size_t b = 0; b < basis_.size(); ++b) a[r][b] = basis_[b].pairing(ray_points_[r]);
    rhs[r] = c.pairing(ray_points_[r]);
  }
  auto x = solve(a, rhs, basis_.size());
  if (!x) throw std::domain_error("class not in the rational span");
  return *x;
}

}  // namespace thetaslab

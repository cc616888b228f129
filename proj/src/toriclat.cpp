// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/toriclat.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace thetaslab {

namespace {

Point add(const Point& a, const Point& b) {
  Point r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Point unit(int dim, int k) {
  Point e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(k)] = 1;
  return e;
}

// All points of [lo, hi]^dim in lexicographic order.
std::vector<Point> box(int dim, int lo, int hi) {
  std::vector<Point> out;
  if (dim == 0) return {Point{}};
  Point p(static_cast<std::size_t>(dim), lo);
  for (;;) {
    out.push_back(p);
    int k = dim - 1;
    while (k >= 0 && p[static_cast<std::size_t>(k)] == hi) {
      p[static_cast<std::size_t>(k)] = lo;
      --k;
    }
    if (k < 0) break;
    ++p[static_cast<std::size_t>(k)];
  }
  return out;
}

class FanAssembler {
 public:
  explicit FanAssembler(int dim) { fan_.dim = dim; }

  std::size_t ray(const Point& v) {
    auto it = index_.find(v);
    if (it != index_.end()) return it->second;
    fan_.rays.push_back(v);
    index_.emplace(v, fan_.rays.size() - 1);
    return fan_.rays.size() - 1;
  }

  std::size_t cone(const std::vector<Point>& vs) {
    std::vector<std::size_t> idx;
    for (const auto& v : vs) idx.push_back(ray(v));
    fan_.cones.push_back(std::move(idx));
    return fan_.cones.size() - 1;
  }

  FanData take() { return std::move(fan_); }

 private:
  FanData fan_;
  std::map<Point, std::size_t> index_;
};

FanData build_lattice(const std::vector<int>& periods, int window) {
  const int l = static_cast<int>(periods.size());
  if (l < 1 || l > 3) throw std::invalid_argument("lattice fans need 1 <= l <= 3");
  for (int d : periods)
    if (d < 1) throw std::invalid_argument("quotient periods must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  FanAssembler a(l + 1);
  for (const auto& p : box(l, -window, window)) a.ray(p);
  std::optional<std::size_t> base;
  for (const auto& b : box(l, -window, window - 1)) {
    bool origin = std::all_of(b.begin(), b.end(), [](std::int64_t x) { return x == 0; });
    if (l == 1) {
      std::size_t c = a.cone({b, add(b, unit(1, 0))});
      if (origin) base = c;
    } else if (l == 2) {
      Point e1 = unit(2, 0), e2 = unit(2, 1);
      std::size_t c = a.cone({b, add(b, e1), add(b, e2)});
      a.cone({add(b, e1), add(b, e2), add(add(b, e1), e2)});
      if (origin) base = c;
    } else {
      std::vector<int> perm{0, 1, 2};
      bool first = true;
      do {
        std::vector<Point> simplex{b};
        Point cur = b;
        for (int k : perm) {
          cur = add(cur, unit(3, k));
          simplex.push_back(cur);
        }
        std::size_t c = a.cone(simplex);
        if (origin && first) base = c;
        first = false;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  FanData fan = a.take();
  for (int k = 0; k < l; ++k) {
    Point g(static_cast<std::size_t>(l), 0);
    g[static_cast<std::size_t>(k)] = periods[static_cast<std::size_t>(k)];
    fan.quotient.push_back(g);
  }
  fan.basepoint = *base;
  return fan;
}

}  // namespace

std::optional<std::size_t> FanData::ray_index(const Point& v) const {
  for (std::size_t i = 0; i < rays.size(); ++i)
    if (rays[i] == v) return i;
  return std::nullopt;
}

std::vector<int> FanSpec::periods() const {
  switch (kind) {
    case FanKind::Ad: return {params.at(0)};
    case FanKind::Xpq: return {params.at(0), params.at(1)};
    case FanKind::Hypercube: return params;
    case FanKind::Ak:
    case FanKind::Conifold: return {};
  }
  return {};
}

std::string FanSpec::name() const {
  auto join = [&] {
    std::string s;
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : "") + std::to_string(params[i]);
    return s;
  };
  switch (kind) {
    case FanKind::Ad: return "Ad(" + join() + ")";
    case FanKind::Xpq: return "Xpq(" + join() + ")";
    case FanKind::Hypercube: return "Hypercube(" + join() + ")";
    case FanKind::Ak: return "Ak(" + join() + ")";
    case FanKind::Conifold: return "Conifold";
  }
  return "?";
}

FanData build_fan(const FanSpec& spec, int window) {
  FanData fan;
  switch (spec.kind) {
    case FanKind::Ad:
      fan = build_lattice({spec.params.at(0)}, window);
      break;
    case FanKind::Xpq:
      fan = build_lattice({spec.params.at(0), spec.params.at(1)}, window);
      break;
    case FanKind::Hypercube:
      fan = build_lattice(spec.params, window);
      break;
    case FanKind::Ak: {
      int k = spec.params.at(0);
      if (k < 1) throw std::invalid_argument("Ak needs k >= 1");
      FanAssembler a(2);
      for (int i = 0; i <= k; ++i) a.cone({Point{i}, Point{i + 1}});
      fan = a.take();
      break;
    }
    case FanKind::Conifold: {
      FanAssembler a(3);
      a.cone({Point{0, 0}, Point{1, 0}, Point{0, 1}});
      a.cone({Point{1, 0}, Point{0, 1}, Point{1, 1}});
      fan = a.take();
      break;
    }
  }
  validate_fan(fan);
  return fan;
}

void validate_fan(const FanData& fan) {
  const int n = fan.dim;
  if (n < 2) throw std::invalid_argument("fan dimension must be >= 2");
  for (const auto& v : fan.rays)
    if (static_cast<int>(v.size()) != n - 1) throw std::invalid_argument("ray of wrong dimension");
  for (const auto& cone : fan.cones) {
    if (static_cast<int>(cone.size()) != n) throw std::invalid_argument("non-simplicial cone");
    RMatrix m;
    for (auto r : cone) {
      RVector row;
      for (auto x : fan.rays.at(r)) row.emplace_back(static_cast<long>(x));
      row.emplace_back(1);
      m.push_back(std::move(row));
    }
    Rational det = determinant(m);
    if (det != 1 && det != -1) throw std::invalid_argument("non-unimodular cone");
  }
  if (fan.basepoint >= fan.cones.size() && !fan.cones.empty())
    throw std::invalid_argument("basepoint cone out of range");
  if (fan.quotient.empty() || fan.rays.empty()) return;
  const std::size_t l = fan.rays.front().size();
  Point lo = fan.rays.front(), hi = fan.rays.front();
  for (const auto& v : fan.rays)
    for (std::size_t i = 0; i < l; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  auto inside = [&](const Point& v) {
    for (std::size_t i = 0; i < l; ++i)
      if (v[i] < lo[i] || v[i] > hi[i]) return false;
    return true;
  };
  std::set<Point> rays(fan.rays.begin(), fan.rays.end());
  std::set<std::vector<Point>> cones;
  for (const auto& c : fan.cones) {
    std::vector<Point> pts;
    for (auto r : c) pts.push_back(fan.rays[r]);
    std::sort(pts.begin(), pts.end());
    cones.insert(pts);
  }
  for (const auto& g : fan.quotient) {
    if (g.size() != l) throw std::invalid_argument("quotient generator of wrong dimension");
    for (const auto& v : fan.rays) {
      Point w = add(v, g);
      if (inside(w) && !rays.count(w))
        throw std::invalid_argument("quotient does not permute window rays");
    }
    for (const auto& c : cones) {
      std::vector<Point> moved;
      bool in = true;
      for (const auto& v : c) {
        moved.push_back(add(v, g));
        in = in && inside(moved.back());
      }
      std::sort(moved.begin(), moved.end());
      if (in && !cones.count(moved))
        throw std::invalid_argument("quotient does not permute window cones");
    }
  }
}

FanData fan_from_json(const nlohmann::json& j) {
  FanData fan;
  fan.dim = j.at("dim").get<int>();
  for (const auto& r : j.at("rays")) {
    auto full = r.get<std::vector<std::int64_t>>();
    if (static_cast<int>(full.size()) != fan.dim || full.back() != 1)
      throw std::invalid_argument("fan file rays must be (v,1) of length dim");
    full.pop_back();
    fan.rays.push_back(full);
  }
  for (const auto& c : j.at("cones")) fan.cones.push_back(c.get<std::vector<std::size_t>>());
  for (const auto& c : fan.cones)
    for (auto r : c)
      if (r >= fan.rays.size()) throw std::invalid_argument("cone references unknown ray");
  if (j.contains("quotient"))
    for (const auto& g : j.at("quotient")) fan.quotient.push_back(g.get<Point>());
  fan.basepoint = j.value("basepoint", std::size_t{0});
  validate_fan(fan);
  return fan;
}

nlohmann::json fan_to_json(const FanData& fan) {
  nlohmann::json rays = nlohmann::json::array();
  for (const auto& v : fan.rays) {
    Point full = v;
    full.push_back(1);
    rays.push_back(full);
  }
  return {{"dim", fan.dim},
          {"rays", rays},
          {"cones", fan.cones},
          {"quotient", fan.quotient},
          {"basepoint", fan.basepoint}};
}

// ---------------------------------------------------------------------------

CurveClass::CurveClass(std::map<Point, Rational> pairing) : pairing_(std::move(pairing)) {
  prune();
}

void CurveClass::prune() {
  for (auto it = pairing_.begin(); it != pairing_.end();) {
    if (it->second == 0) it = pairing_.erase(it);
    else ++it;
  }
}

Rational CurveClass::pairing(const Point& v) const {
  auto it = pairing_.find(v);
  return it == pairing_.end() ? Rational(0) : it->second;
}

CurveClass& CurveClass::operator+=(const CurveClass& o) {
  for (const auto& [v, c] : o.pairing_) pairing_[v] += c;
  prune();
  return *this;
}

CurveClass& CurveClass::operator-=(const CurveClass& o) { return *this += o.scaled(-1); }

CurveClass CurveClass::scaled(const Rational& c) const {
  std::map<Point, Rational> out;
  for (const auto& [v, x] : pairing_) out.emplace(v, x * c);
  return CurveClass(std::move(out));
}

CurveClass CurveClass::translated(const Point& shift) const {
  std::map<Point, Rational> out;
  for (const auto& [v, x] : pairing_) out.emplace(add(v, shift), x);
  return CurveClass(std::move(out));
}

Rational CurveClass::degree() const {
  Rational s = 0;
  for (const auto& [v, c] : pairing_) s += c;
  return s;
}

std::vector<Rational> CurveClass::moment(int lattice_dim) const {
  std::vector<Rational> m(static_cast<std::size_t>(lattice_dim), Rational(0));
  for (const auto& [v, c] : pairing_)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += c * Rational(static_cast<long>(v[i]));
  return m;
}

// ---------------------------------------------------------------------------

std::vector<Wall> walls(const FanData& fan) {
  std::map<std::vector<std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> facets;
  for (std::size_t ci = 0; ci < fan.cones.size(); ++ci) {
    const auto& cone = fan.cones[ci];
    for (std::size_t drop = 0; drop < cone.size(); ++drop) {
      std::vector<std::size_t> face;
      for (std::size_t k = 0; k < cone.size(); ++k)
        if (k != drop) face.push_back(cone[k]);
      std::sort(face.begin(), face.end(), [&](std::size_t a, std::size_t b) {
        return fan.rays[a] < fan.rays[b];
      });
      facets[face].emplace_back(ci, cone[drop]);
    }
  }
  std::map<std::vector<Point>, Wall> ordered;
  const std::size_t n = static_cast<std::size_t>(fan.dim);
  for (const auto& [face, adj] : facets) {
    if (adj.size() == 1) continue;
    if (adj.size() != 2) throw std::invalid_argument("facet shared by more than two cones");
    Wall w;
    w.face = face;
    w.opposite[0] = adj[0].second;
    w.opposite[1] = adj[1].second;
    if (fan.rays[w.opposite[1]] < fan.rays[w.opposite[0]]) std::swap(w.opposite[0], w.opposite[1]);
    // w1 + w2 + sum_i c_i v_i = 0 in Z^n
    RMatrix a(n, RVector(face.size(), Rational(0)));
    RVector rhs(n, Rational(0));
    auto lift = [&](std::size_t r, std::size_t coord) -> long {
      return coord + 1 == n ? 1 : static_cast<long>(fan.rays[r][coord]);
    };
    for (std::size_t coord = 0; coord < n; ++coord) {
      for (std::size_t k = 0; k < face.size(); ++k) a[coord][k] = lift(face[k], coord);
      rhs[coord] = -(lift(w.opposite[0], coord) + lift(w.opposite[1], coord));
    }
    auto c = solve(a, rhs, face.size());
    if (!c) throw std::logic_error("wall relation is inconsistent");
    std::map<Point, Rational> pairing;
    pairing[fan.rays[w.opposite[0]]] += 1;
    pairing[fan.rays[w.opposite[1]]] += 1;
    for (std::size_t k = 0; k < face.size(); ++k) pairing[fan.rays[face[k]]] += (*c)[k];
    w.curve = CurveClass(std::move(pairing));
    std::vector<Point> key;
    for (auto r : face) key.push_back(fan.rays[r]);
    ordered.emplace(std::move(key), std::move(w));
  }
  std::vector<Wall> out;
  for (auto& [k, w] : ordered) out.push_back(std::move(w));
  return out;
}

Rational intersection_number(const FanData& fan, const CurveClass& c, std::size_t ray) {
  if (ray >= fan.rays.size()) throw std::out_of_range("ray outside window");
  return c.pairing(fan.rays[ray]);
}

CurveClass curve_class_relative(const Point& v, const Point& apex, const std::vector<Point>& edges) {
  const std::size_t l = v.size();
  if (edges.size() != l) throw std::invalid_argument("slab cone needs one edge per lattice direction");
  RMatrix a(l, RVector(l, Rational(0)));
  RVector rhs(l, Rational(0));
  for (std::size_t i = 0; i < l; ++i) {
    rhs[i] = static_cast<long>(v[i] - apex[i]);
    for (std::size_t k = 0; k < l; ++k) a[i][k] = static_cast<long>(edges[k][i] - apex[i]);
  }
  if (determinant(a) == 0) throw std::invalid_argument("degenerate slab cone");
  RVector coef = *solve(a, rhs, l);
  std::map<Point, Rational> pairing;
  pairing[v] += 1;
  Rational total = 0;
  for (std::size_t k = 0; k < l; ++k) {
    pairing[edges[k]] -= coef[k];
    total += coef[k];
  }
  pairing[apex] += total - 1;
  return CurveClass(std::move(pairing));
}

CurveClass curve_class_of_ray(const FanData& fan, const Point& v) {
  if (!fan.ray_index(v)) throw std::out_of_range("v outside window");
  const int l = fan.lattice_dim();
  std::vector<Point> edges;
  for (int k = 0; k < l; ++k) edges.push_back(unit(l, k));
  return curve_class_relative(v, Point(static_cast<std::size_t>(l), 0), edges);
}

Point reduce_mod(const Point& v, const std::vector<int>& periods) {
  if (periods.empty()) return v;
  Point r = v;
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::int64_t d = periods.at(i);
    r[i] = ((r[i] % d) + d) % d;
  }
  return r;
}

RelationLattice relation_lattice(const FanData& fan) {
  std::vector<Wall> ws = walls(fan);
  std::vector<int> periods;
  for (std::size_t k = 0; k < fan.quotient.size(); ++k) {
    const auto& g = fan.quotient[k];
    for (std::size_t i = 0; i < g.size(); ++i)
      if ((i == k) != (g[i] != 0)) throw std::invalid_argument("quotient must be diagonal translations");
    periods.push_back(static_cast<int>(g[k]));
  }
  // orbit label of each wall: its point set translated into the fundamental domain
  std::map<std::vector<Point>, std::size_t> orbit_ids;
  std::vector<std::size_t> orbit_of(ws.size());
  for (std::size_t w = 0; w < ws.size(); ++w) {
    std::vector<Point> pts;
    for (auto r : ws[w].face) pts.push_back(fan.rays[r]);
    pts.push_back(fan.rays[ws[w].opposite[0]]);
    pts.push_back(fan.rays[ws[w].opposite[1]]);
    std::sort(pts.begin(), pts.end());
    if (!periods.empty()) {
      Point anchor = pts.front();
      Point red = reduce_mod(anchor, periods);
      Point shift(anchor.size());
      for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = red[i] - anchor[i];
      for (auto& p : pts) p = add(p, shift);
    }
    auto it = orbit_ids.try_emplace(pts, orbit_ids.size()).first;
    orbit_of[w] = it->second;
  }
  std::vector<Point> ray_list = fan.rays;
  std::map<Point, std::size_t> row;
  for (std::size_t i = 0; i < ray_list.size(); ++i) row[ray_list[i]] = i;
  RMatrix m(ray_list.size(), RVector(ws.size(), Rational(0)));
  for (std::size_t w = 0; w < ws.size(); ++w)
    for (const auto& [v, c] : ws[w].curve.support()) m[row.at(v)][w] = c;
  RelationLattice out;
  out.orbit_count = orbit_ids.size();
  for (const auto& k : kernel(m, ws.size())) {
    RVector pushed(out.orbit_count, Rational(0));
    for (std::size_t w = 0; w < ws.size(); ++w) pushed[orbit_of[w]] += k[w];
    out.relations.push_back(std::move(pushed));
  }
  out.rank = rank(out.relations, out.orbit_count);
  Echelon e = row_reduce(out.relations, out.orbit_count);
  out.relations = e.reduced;
  return out;
}

std::size_t h2_rank(const FanData& fan) {
  RelationLattice r = relation_lattice(fan);
  return r.orbit_count - r.rank;
}

FanData sub_fan(const FanData& full, const std::vector<Point>& keep) {
  std::set<Point> wanted(keep.begin(), keep.end());
  FanData sub;
  sub.dim = full.dim;
  std::map<std::size_t, std::size_t> reindex;
  for (std::size_t i = 0; i < full.rays.size(); ++i)
    if (wanted.count(full.rays[i])) {
      reindex[i] = sub.rays.size();
      sub.rays.push_back(full.rays[i]);
    }
  if (sub.rays.size() != wanted.size()) throw std::invalid_argument("sub-fan rays not in the full fan");
  for (const auto& c : full.cones) {
    std::vector<std::size_t> idx;
    for (auto r : c) {
      auto it = reindex.find(r);
      if (it == reindex.end()) break;
      idx.push_back(it->second);
    }
    if (idx.size() == c.size()) sub.cones.push_back(std::move(idx));
  }
  sub.basepoint = 0;
  validate_fan(sub);
  return sub;
}

std::vector<Point> lattice_box(int dim, int lo, int hi) { return box(dim, lo, hi); }

}  // namespace thetaslab

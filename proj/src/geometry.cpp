// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <stdexcept>

namespace thetaslab {

namespace {

std::vector<int> parse_params(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    std::string item = text.substr(pos, next - pos);
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad geometry parameter '" + item + "'");
    }
    pos = next + 1;
  }
  return out;
}

std::int64_t norm2(const Point& v) {
  std::int64_t s = 0;
  for (auto x : v) s += x * x;
  return s;
}

}  // namespace

Geometry Geometry::builtin(const std::string& name) {
  static const std::regex pattern(R"(^([A-Za-z0-9]+?)(?:\(([0-9,\s]*)\))?$)");
  std::smatch m;
  if (!std::regex_match(name, m, pattern)) throw std::invalid_argument("unknown geometry '" + name + "'");
  std::string head = m[1];
  std::string inner = m[2];
  inner.erase(std::remove_if(inner.begin(), inner.end(), ::isspace), inner.end());
  std::vector<int> p = parse_params(inner);
  auto need = [&](std::size_t n) {
    if (p.size() != n) throw std::invalid_argument(name + ": expected " + std::to_string(n) + " parameter(s)");
  };
  if (head == "A0") {
    need(0);
    return lattice({1}, "A0");
  }
  if (head == "Ad") {
    need(1);
    return lattice({p[0]}, name);
  }
  if (head == "Xpq") {
    need(2);
    return lattice({p[0], p[1]}, name);
  }
  if (head == "X11") {
    need(0);
    return lattice({1, 1}, "X11");
  }
  if (head == "X1l") {
    need(1);
    if (p[0] < 1 || p[0] > 3) throw std::invalid_argument("X1l(l) needs 1 <= l <= 3");
    return lattice(std::vector<int>(static_cast<std::size_t>(p[0]), 1), name);
  }
  if (head == "Hypercube") {
    if (p.empty()) throw std::invalid_argument("Hypercube needs periods");
    return lattice(p, name);
  }
  if (head == "Ak") {
    need(1);
    return finite(build_fan(FanSpec::ak(p[0]), 0), name);
  }
  if (head == "Conifold") {
    need(0);
    return finite(build_fan(FanSpec::conifold(), 0), "Conifold");
  }
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

Geometry Geometry::lattice(std::vector<int> periods, std::string name) {
  Geometry g;
  g.frame_ = std::make_shared<LatticeFrame>(periods);
  g.periods_ = std::move(periods);
  g.lattice_dim_ = static_cast<int>(g.periods_.size());
  if (name.empty()) name = FanSpec::hypercube(g.periods_).name();
  g.name_ = std::move(name);
  g.reps_ = {Point{}};
  for (int d : g.periods_) {
    std::vector<Point> next;
    for (const auto& r : g.reps_)
      for (int k = 0; k < d; ++k) {
        Point q = r;
        q.push_back(k);
        next.push_back(q);
      }
    g.reps_ = std::move(next);
  }
  return g;
}

Geometry Geometry::finite(FanData fan, std::string name) {
  if (!fan.quotient.empty()) throw std::invalid_argument("finite geometry given a quotient");
  validate_fan(fan);
  Geometry g;
  g.name_ = std::move(name);
  g.lattice_dim_ = fan.lattice_dim();
  g.frame_ = std::make_shared<WallFrame>(fan);
  g.reps_ = fan.rays;
  g.finite_ = std::make_shared<const FanData>(std::move(fan));
  return g;
}

Geometry Geometry::from_fan(const FanData& fan, std::string name) {
  if (fan.quotient.empty()) return finite(fan, std::move(name));
  const int l = fan.lattice_dim();
  if (static_cast<int>(fan.quotient.size()) != l)
    throw std::invalid_argument("quotient needs one generator per lattice direction");
  std::vector<int> periods(static_cast<std::size_t>(l), 0);
  for (int i = 0; i < l; ++i) {
    const Point& g = fan.quotient[static_cast<std::size_t>(i)];
    for (int j = 0; j < l; ++j) {
      auto x = g.at(static_cast<std::size_t>(j));
      if (j != i && x != 0) throw std::invalid_argument("only diagonal quotients d_i e_i are supported");
      if (j == i) periods[static_cast<std::size_t>(i)] = static_cast<int>(x);
    }
  }
  validate_fan(fan);
  // Every lattice point must be a ray of the window for the lattice frame to apply.
  std::int64_t lo = 0, hi = 0;
  for (const auto& r : fan.rays)
    for (auto x : r) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  std::int64_t w = std::min(-lo, hi);
  for (const auto& p : lattice_box(l, static_cast<int>(-w), static_cast<int>(w)))
    if (!fan.ray_index(p)) throw std::invalid_argument("lattice fan window is missing ray points");
  return lattice(periods, std::move(name));
}

const LatticeFrame* Geometry::lattice_frame() const {
  return dynamic_cast<const LatticeFrame*>(frame_.get());
}

std::vector<std::string> Geometry::kahler_names() const {
  std::vector<std::string> out;
  for (const auto& v : kahler_vars()) out.push_back(v.name);
  return out;
}

std::vector<std::string> Geometry::z_names() const {
  if (lattice_dim_ == 1) return {"z"};
  std::vector<std::string> out;
  for (int i = 1; i <= lattice_dim_; ++i) out.push_back("z" + std::to_string(i));
  return out;
}

TablePtr Geometry::table(const Rational& z_weight, bool laurent) const {
  std::vector<Variable> vars = kahler_vars();
  if (laurent)
    for (auto& v : vars) v.lower_bound.reset();
  for (const auto& z : z_names()) vars.push_back(z_var(z, z_weight));
  return make_table(std::move(vars));
}

Point Geometry::orbit_rep(const Point& v) const {
  if (is_lattice()) return reduce_mod(v, periods_);
  if (!finite_->ray_index(v)) throw std::out_of_range("not a ray of the fan");
  return v;
}

bool Geometry::has_ray(const Point& v) const {
  if (static_cast<int>(v.size()) != lattice_dim_) return false;
  return is_lattice() || finite_->ray_index(v).has_value();
}

SlabChart Geometry::base_chart() const {
  if (is_lattice()) return chart(Point(static_cast<std::size_t>(lattice_dim_), 0));
  const auto& cone = finite_->cones.at(finite_->basepoint);
  SlabChart c;
  c.apex = finite_->rays[cone[0]];
  for (std::size_t i = 1; i < cone.size(); ++i) c.edges.push_back(finite_->rays[cone[i]]);
  return c;
}

SlabChart Geometry::chart(const Point& v0) const {
  SlabChart c;
  c.apex = v0;
  if (is_lattice()) {
    for (int k = 0; k < lattice_dim_; ++k) {
      Point e = v0;
      e[static_cast<std::size_t>(k)] += 1;
      c.edges.push_back(e);
    }
    return c;
  }
  auto idx = finite_->ray_index(v0);
  if (!idx) throw std::out_of_range("not a ray of the fan");
  auto contains = [&](const std::vector<std::size_t>& cone) {
    return std::find(cone.begin(), cone.end(), *idx) != cone.end();
  };
  const std::vector<std::size_t>* cone = nullptr;
  if (contains(finite_->cones.at(finite_->basepoint))) cone = &finite_->cones[finite_->basepoint];
  for (std::size_t i = 0; !cone && i < finite_->cones.size(); ++i)
    if (contains(finite_->cones[i])) cone = &finite_->cones[i];
  if (!cone) throw std::invalid_argument("ray lies in no maximal cone");
  for (auto r : *cone)
    if (r != *idx) c.edges.push_back(finite_->rays[r]);
  return c;
}

std::vector<Rational> Geometry::chart_coordinates(const Point& v, const SlabChart& c) {
  const std::size_t l = v.size();
  RMatrix a(l, RVector(l, Rational(0)));
  RVector rhs(l, Rational(0));
  for (std::size_t i = 0; i < l; ++i) {
    rhs[i] = static_cast<long>(v[i] - c.apex[i]);
    for (std::size_t k = 0; k < l; ++k) a[i][k] = static_cast<long>(c.edges[k][i] - c.apex[i]);
  }
  auto x = solve(a, rhs, l);
  if (!x) throw std::invalid_argument("degenerate slab chart");
  return *x;
}

CurveClass Geometry::ray_class(const Point& v, const SlabChart& c) const {
  return curve_class_relative(v, c.apex, c.edges);
}

Monomial Geometry::ray_monomial(const Point& v, const SlabChart& c, const VarTable& table) const {
  Monomial m = frame_->monomial(ray_class(v, c), table);
  auto a = chart_coordinates(v, c);
  auto zs = z_names();
  for (std::size_t k = 0; k < zs.size(); ++k) m.exps[table.index(zs[k])] += a[k];
  return m;
}

std::vector<Point> Geometry::rays_near(const Point& center, const Rational& radius) const {
  if (!is_lattice()) return finite_->rays;
  if (radius < 0) return {};
  Rational r2 = 2 * radius;
  auto w = static_cast<int>(std::floor(std::sqrt(r2.get_d()))) + 1;
  std::vector<Point> out;
  for (const auto& d : lattice_box(lattice_dim_, -w, w)) {
    if (Rational(static_cast<long>(norm2(d))) > r2) continue;
    Point v = center;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += d[i];
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FanData Geometry::fan(int window) const {
  if (!is_lattice()) return *finite_;
  return build_fan(FanSpec::hypercube(periods_), window);
}

const FanData& Geometry::finite_fan() const {
  if (!finite_) throw std::logic_error("lattice geometry has no finite fan");
  return *finite_;
}

Series restrict_to_subfan(const Series& f, const Geometry& sub, const Geometry& full, TablePtr target) {
  auto* full_frame = dynamic_cast<const WallFrame*>(&full.frame());
  if (!full_frame || sub.is_lattice()) throw std::invalid_argument("restriction needs finite geometries");
  const auto& src = *f.table();
  const auto fk = full.kahler_names();
  SeriesBuilder out(target, f.order());
  for (const auto& [m, c] : f.terms()) {
    CurveClass cls;
    for (std::size_t b = 0; b < fk.size(); ++b) {
      auto i = src.find(fk[b]);
      if (!i) continue;
      const Rational& e = m.exps[*i];
      if (e != 0) cls += full_frame->basis_classes()[b].scaled(e);
    }
    Monomial img;
    try {
      img = sub.class_monomial(cls, *target);
    } catch (const std::domain_error&) {
      continue;
    }
    bool dropped = false;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (std::find(fk.begin(), fk.end(), src.var(i).name) != fk.end()) continue;
      if (m.exps[i] == 0) continue;
      auto t = target->find(src.var(i).name);
      if (!t) {
        dropped = true;
        break;
      }
      img.exps[*t] += m.exps[i];
    }
    if (!dropped) out.add(img, c);
  }
  return out.build();
}

}  // namespace thetaslab

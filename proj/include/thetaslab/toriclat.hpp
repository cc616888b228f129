// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// Fans with all rays at height 1, their wall curves and curve classes.
// A ray (v,1) is stored by its lattice part v. Curve classes are stored as
// intersection vectors against the toric divisors: class -> sum_u c_u [D_u].

#pragma once

#include "thetaslab/linalg.hpp"
#include "thetaslab/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace thetaslab {

using Point = std::vector<std::int64_t>;

struct FanData {
  int dim = 0;  // n; ray vectors are (v,1) with v in Z^(n-1)
  std::vector<Point> rays;
  std::vector<std::vector<std::size_t>> cones;
  std::vector<Point> quotient;  // translation generators acting on v
  std::size_t basepoint = 0;    // cone index

  int lattice_dim() const { return dim - 1; }
  std::optional<std::size_t> ray_index(const Point& v) const;
};

enum class FanKind { Ad, Xpq, Hypercube, Ak, Conifold };

struct FanSpec {
  FanKind kind = FanKind::Ad;
  std::vector<int> params;

  static FanSpec ad(int d) { return {FanKind::Ad, {d}}; }
  static FanSpec xpq(int p, int q) { return {FanKind::Xpq, {p, q}}; }
  static FanSpec hypercube(std::vector<int> d) { return {FanKind::Hypercube, std::move(d)}; }
  static FanSpec ak(int k) { return {FanKind::Ak, {k}}; }
  static FanSpec conifold() { return {FanKind::Conifold, {}}; }

  // Translations d_i e_i of the quotient; empty for finite fans.
  std::vector<int> periods() const;
  std::string name() const;
};

// Builds a fundamental window |v_i| <= window (infinite fans) or the whole
// fan (finite ones), then validates it.
FanData build_fan(const FanSpec& spec, int window);

// Unimodularity of every maximal cone and that each quotient generator maps
// window rays to window rays where both are present. Throws on failure.
void validate_fan(const FanData& fan);

FanData fan_from_json(const nlohmann::json& j);
nlohmann::json fan_to_json(const FanData& fan);

class CurveClass {
 public:
  CurveClass() = default;
  explicit CurveClass(std::map<Point, Rational> pairing);

  // Pairing with D_v; 0 for rays outside the support.
  Rational pairing(const Point& v) const;
  const std::map<Point, Rational>& support() const { return pairing_; }
  bool is_zero() const { return pairing_.empty(); }

  CurveClass& operator+=(const CurveClass& o);
  CurveClass& operator-=(const CurveClass& o);
  friend CurveClass operator+(CurveClass a, const CurveClass& b) { return a += b; }
  friend CurveClass operator-(CurveClass a, const CurveClass& b) { return a -= b; }
  CurveClass scaled(const Rational& c) const;
  CurveClass translated(const Point& shift) const;
  bool operator==(const CurveClass& o) const = default;

  // Sum of the pairings and the first moment sum_u c_u u; both vanish for
  // compactly supported classes of a Calabi-Yau fan.
  Rational degree() const;
  std::vector<Rational> moment(int lattice_dim) const;

 private:
  void prune();
  std::map<Point, Rational> pairing_;
};

struct Wall {
  std::vector<std::size_t> face;       // rays spanning the shared facet
  std::size_t opposite[2] = {0, 0};    // the remaining ray of each adjacent cone
  CurveClass curve;
};

// Interior walls of the window, in a canonical order.
std::vector<Wall> walls(const FanData& fan);

Rational intersection_number(const FanData& fan, const CurveClass& c, std::size_t ray);

// beta_v - beta_apex - sum_k a_k (beta_{edge_k} - beta_apex), where
// v - apex = sum_k a_k (edge_k - apex).
CurveClass curve_class_relative(const Point& v, const Point& apex, const std::vector<Point>& edges);

// Relative to the origin and the unit vectors.
CurveClass curve_class_of_ray(const FanData& fan, const Point& v);

struct RelationLattice {
  std::size_t orbit_count = 0;         // wall orbits under the quotient
  std::vector<RVector> relations;      // pushed to orbit coordinates
  std::size_t rank = 0;
};

// Window relations among wall curves, pushed forward along the quotient.
RelationLattice relation_lattice(const FanData& fan);
std::size_t h2_rank(const FanData& fan);

// Sub-fan spanned by the listed rays: cones whose rays all lie in the set.
FanData sub_fan(const FanData& full, const std::vector<Point>& keep);

Point reduce_mod(const Point& v, const std::vector<int>& periods);

// Points of [lo, hi]^dim in lexicographic order.
std::vector<Point> lattice_box(int dim, int lo, int hi);

}  // namespace thetaslab

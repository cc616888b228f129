// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// A geometry bundles the fan (a window plus the quotient for lattice
// geometries), its Kaehler frame, the ray orbits and the slab charts used to
// recenter the lattice sum.

#pragma once

#include "thetaslab/frames.hpp"
#include "thetaslab/pseries.hpp"
#include "thetaslab/toriclat.hpp"

#include <memory>
#include <string>
#include <vector>

namespace thetaslab {

// A maximal cone with a chosen apex; z-exponents are the coordinates of
// v - apex over the edge directions.
struct SlabChart {
  Point apex;
  std::vector<Point> edges;
};

class Geometry {
 public:
  // A0, Ad(d), Xpq(p,q), X11, X1l(l), Hypercube(d1,...), Ak(k), Conifold.
  static Geometry builtin(const std::string& name);
  static Geometry lattice(std::vector<int> periods, std::string name = "");
  static Geometry finite(FanData fan, std::string name);
  // Fans with a diagonal quotient become lattice geometries (the frame does
  // not depend on the triangulation); fans without one are finite.
  static Geometry from_fan(const FanData& fan, std::string name);

  const std::string& name() const { return name_; }
  bool is_lattice() const { return !periods_.empty(); }
  const std::vector<int>& periods() const { return periods_; }
  int lattice_dim() const { return lattice_dim_; }
  const KahlerFrame& frame() const { return *frame_; }
  const LatticeFrame* lattice_frame() const;
  const std::vector<Variable>& kahler_vars() const { return frame_->variables(); }
  std::vector<std::string> kahler_names() const;
  std::vector<std::string> z_names() const;

  // Kaehler variables followed by the z variables of weight z_weight. The
  // Laurent variant drops the lower bounds of the Kaehler variables.
  TablePtr table(const Rational& z_weight, bool laurent = false) const;
  // z weight 1/2: every lattice term q^{A_v} z^v has degree |v|^2/2.
  TablePtr phi_table() const { return table(ratio(1, 2)); }
  TablePtr q_table() const { return table(0); }

  // One representative per ray orbit: the fundamental domain [0,d_i) for
  // lattice geometries, every ray for finite ones.
  const std::vector<Point>& orbit_reps() const { return reps_; }
  Point orbit_rep(const Point& v) const;
  bool has_ray(const Point& v) const;

  SlabChart base_chart() const;
  SlabChart chart(const Point& v0) const;
  static std::vector<Rational> chart_coordinates(const Point& v, const SlabChart& c);

  // beta_v - beta_apex - sum_k a_k (beta_edge_k - beta_apex).
  CurveClass ray_class(const Point& v, const SlabChart& c) const;
  // q^{ray_class} z^{a} in the table.
  Monomial ray_monomial(const Point& v, const SlabChart& c, const VarTable& table) const;

  // Rays with |v - center|^2 <= 2 radius (lattice) or all rays (finite).
  std::vector<Point> rays_near(const Point& center, const Rational& radius) const;

  // Window of a lattice fan, or the finite fan itself.
  FanData fan(int window) const;
  const FanData& finite_fan() const;

  // Class of a frame exponent vector, as a pairing vector (finite frames).
  Monomial class_monomial(const CurveClass& c, const VarTable& table) const {
    return frame_->monomial(c, table);
  }

 private:
  std::string name_;
  std::vector<int> periods_;
  int lattice_dim_ = 0;
  std::shared_ptr<const KahlerFrame> frame_;
  std::shared_ptr<const FanData> finite_;
  std::vector<Point> reps_;
};

// Rewrites each term of f (full geometry's Kaehler variables, z carried by
// name) in the sub geometry's coordinates; terms whose class involves rays or
// curves outside the sub fan are dropped. Both geometries must be finite.
Series restrict_to_subfan(const Series& f, const Geometry& sub, const Geometry& full,
                          TablePtr target);

}  // namespace thetaslab

// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include "thetaslab/report.hpp"

#include "thetaslab/mirrormap.hpp"
#include "thetaslab/parallel.hpp"
#include "thetaslab/toriclat.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <stdexcept>

namespace thetaslab {

nlohmann::json per_monomial(const Series& lhs, const Series& rhs) {
  if (!(*lhs.table() == *rhs.table())) throw std::invalid_argument("per_monomial needs one table");
  std::set<ExpVec> keys;
  const Series l = lhs.with_order(std::nullopt), r = rhs.with_order(std::nullopt);
  for (const auto& [e, c] : l.raw_terms()) keys.insert(e);
  for (const auto& [e, c] : r.raw_terms()) keys.insert(e);
  const auto& vars = lhs.table()->vars();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : keys) {
    Monomial m = l.monomial_of(e);
    nlohmann::json exps = nlohmann::json::object();
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (m.exps[i] != 0) exps[vars[i].name] = to_fraction(m.exps[i]);
    const Rational a = lhs.coeff(m), b = rhs.coeff(m);
    rows.push_back({{"exponents", exps}, {"lhs", to_fraction(a)}, {"rhs", to_fraction(b)},
                    {"residual", to_fraction(a - b)}});
  }
  return rows;
}

nlohmann::json identity_report(const IdentityCheck& c) {
  nlohmann::json j = c.to_json();
  j["monomials"] = per_monomial(c.lhs, c.rhs);
  return j;
}

nlohmann::json normalization_report(const Geometry& g, const Normalization& n) {
  nlohmann::json j;
  j["geometry"] = g.name();
  j["order"] = to_fraction(n.order);
  j["converged"] = n.converged();
  j["integral"] = n.integral();
  j["sweeps"] = n.sweeps;
  nlohmann::json deltas = nlohmann::json::array(), residuals = nlohmann::json::array();
  for (const auto& rep : n.reps) {
    deltas.push_back({{"orbit", rep}, {"delta", to_json(n.delta(rep))}});
    residuals.push_back({{"orbit", rep}, {"residual", to_json(n.residuals.at(rep))}});
  }
  j["deltas"] = deltas;
  j["residuals"] = residuals;
  j["F"] = to_json(normalized_F(g, n));
  return j;
}

nlohmann::json ogw_table(const Geometry& g, const Normalization& n) {
  const Series& d = n.delta(n.reps.front());
  if (g.kahler_vars().size() == 1) {
    const std::string v = g.kahler_vars()[0].name;
    nlohmann::json row = nlohmann::json::array();
    for (long k = 0; k <= to_int64(floor_of(n.order)); ++k)
      row.push_back(to_fraction(d.coeff(Monomial(*d.table(), {{v, k}}))));
    return row;
  }
  return to_json(d);
}

std::string fingerprint(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool FormalReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.passed; });
}

const SuiteEntry& FormalReport::entry(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw std::out_of_range("no entry " + name);
}

nlohmann::json FormalReport::to_json() const {
  nlohmann::json j{{"suite", suite}, {"passed", passed()}};
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) j["entries"].push_back({{"name", e.name}, {"passed", e.passed}, {"detail", e.detail}});
  return j;
}

namespace {

struct Job {
  std::string name;
  std::function<SuiteEntry()> run;
};

SuiteEntry from_identity(const IdentityCheck& c) {
  nlohmann::json d = c.to_json();
  d["lhs_fingerprint"] = fingerprint(to_csv(c.lhs));
  return {c.name, c.passed(), d};
}

Series inverse_euler(int order) { return invert(eta_core(order)); }

SuiteEntry yau_zaslow_root(int order) {
  Geometry g = Geometry::builtin("A0");
  Normalization n = gs_normalize(g, order);
  Series d = n.delta(n.reps.front());
  Series expect = regraded(inverse_euler(order), d.table(), Rational(order));
  return {"yau_zaslow_root", n.converged() && d == expect, {{"order", order}, {"delta", ogw_table(g, n)}}};
}

SuiteEntry fiber_power(int d, int kmax) {
  Geometry g = Geometry::lattice({d});
  Normalization n = gs_normalize(g, d * kmax);
  Monomial fiber(n.table->size());
  for (const auto& v : g.kahler_names()) fiber.exps[n.table->index(v)] = 1;
  Series expect = inverse_euler(kmax).pow(d);
  bool ok = n.converged();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& rep : n.reps) {
    Series f = fiber_restriction(n.delta(rep), fiber);
    ok = ok && f == regraded(expect, f.table(), Rational(kmax));
    rows.push_back({{"orbit", rep}, {"restricted", to_json(f)}});
  }
  return {"fiber_restriction(" + std::to_string(d) + ")", ok, {{"order", kmax}, {"orbits", rows}}};
}

SuiteEntry stabilization(int k) {
  const int deg = (k - 1) / 2;
  Geometry a0 = Geometry::builtin("A0");
  Series target = collapse_kahler(gs_normalize(a0, deg).delta(Point{0}), a0);
  Geometry g = Geometry::builtin("Ak(" + std::to_string(k) + ")");
  Normalization n = gs_normalize(g, deg);
  Series c = collapse_kahler(n.delta(Point{(k + 1) / 2}), g);
  return {"stabilization(" + std::to_string(k) + ")", n.converged() && c == target.truncated(deg),
          {{"degree", deg}, {"collapsed", to_json(c)}, {"target", to_json(target.truncated(deg))}}};
}

SuiteEntry open_mirror(int k, std::size_t ray, int order) {
  OpenMirrorCheck c = open_mirror_check(Geometry::builtin("Ak(" + std::to_string(k) + ")"), ray, order);
  return {"open_mirror(" + std::to_string(k) + "," + std::to_string(ray) + ")", c.passed(),
          {{"order", order}, {"delta", to_json(c.delta)}, {"residual", to_json(c.residual)}}};
}

SuiteEntry gkz(int order) {
  Geometry g = Geometry::builtin("Ak(1)");
  MirrorMap m = mirror_map(g, order);
  const auto& basis = dynamic_cast<const WallFrame&>(g.frame()).basis_classes();
  GKZOperator op = gkz_operator(g, basis[0], *m.complex);
  LogSeries one = LogSeries::from_series(Series::constant(m.complex, 1, order), m.log_vars);
  LogSeries on_one = gkz_apply(g, op, one, order);
  LogSeries on_period = gkz_apply(g, op, m.log_q[0], order);
  LogSeries control = gkz_apply(g, op, LogSeries::log_of(m.complex, m.log_vars, m.log_vars[0], order), order);
  return {"gkz(1)", on_one.is_zero() && on_period.is_zero() && !control.is_zero(),
          {{"order", order},
           {"on_1", on_one.to_json()},
           {"on_log_y_plus_2g", on_period.to_json()},
           {"control_log_y", control.to_json()}}};
}

SuiteEntry ranks() {
  struct R {
    int p, q, window;
    std::size_t expect;
  };
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  for (auto r : {R{1, 1, 4, 3}, R{2, 1, 4, 4}, R{2, 2, 5, 6}}) {
    const std::size_t got = h2_rank(build_fan(FanSpec::xpq(r.p, r.q), r.window));
    ok = ok && got == r.expect;
    rows.push_back({{"p", r.p}, {"q", r.q}, {"rank", got}});
  }
  return {"h2_rank", ok, rows};
}

std::vector<Job> jobs(const std::string& suite) {
  const bool full = suite == "full";
  auto ident = [](std::string name, int order) {
    return Job{name, [name, order] { return from_identity(verify_identity(name, order)); }};
  };
  std::vector<Job> out = {
      {"triple_product", [full] { return from_identity(verify_triple_product(full ? 20 : 10, full ? 7 : 4)); }},
      {"log_identity",
       [full] {
         LogIdentity li = verify_log_identity(full ? 12 : 6);
         return SuiteEntry{"log_identity", li.passed(), {{"compositions", to_json(li.compositions)}}};
       }},
      ident("AZ", full ? 12 : 6),
      ident("Ad(2)", full ? 8 : 4),
      ident("Ad(3)", full ? 8 : 4),
      ident("X11", full ? 8 : 3),
      ident("Xpq(2,1)", full ? 5 : 3),
      ident("Xpq(1,2)", full ? 5 : 3),
      ident("X1l(3)", full ? 4 : 2),
      {"yau_zaslow_root", [full] { return yau_zaslow_root(full ? 9 : 5); }},
      {"fiber_restriction", [full] { return fiber_power(3, full ? 5 : 2); }},
      {"stabilization(3)", [] { return stabilization(3); }},
      {"open_mirror(1)", [full] { return open_mirror(1, 1, full ? 10 : 5); }},
      {"gkz", [full] { return gkz(full ? 10 : 5); }},
      {"h2_rank", [] { return ranks(); }},
  };
  if (full) {
    out.push_back({"stabilization(5)", [] { return stabilization(5); }});
    out.push_back({"stabilization(7)", [] { return stabilization(7); }});
    out.push_back({"open_mirror(2,1)", [] { return open_mirror(2, 1, 6); }});
    out.push_back({"open_mirror(2,2)", [] { return open_mirror(2, 2, 6); }});
  }
  return out;
}

}  // namespace

std::vector<std::string> formal_suites() { return {"quick", "full"}; }

FormalReport run_formal_suite(const std::string& suite) {
  if (suite != "quick" && suite != "full")
    throw std::invalid_argument("unknown formal suite '" + suite + "' (quick, full)");
  auto js = jobs(suite);
  FormalReport r;
  r.suite = suite;
  r.entries.resize(js.size());
  parallel_for(js.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteEntry e = js[i].run();
    e.name = js[i].name;
    e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.entries[i] = std::move(e);
  });
  return r;
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace thetaslab

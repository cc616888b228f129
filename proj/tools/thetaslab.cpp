// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

// thetaslab: expansions, identity checks, open GW tables, mirror maps and the
// numeric suites. Exit status 0 iff every contracted check passes, 1 when a
// check fails, 2 on bad usage, 3 when the computation itself cannot proceed.

#include "thetaslab/mirrormap.hpp"
#include "thetaslab/numchecks.hpp"
#include "thetaslab/report.hpp"
#include "thetaslab/thetaform.hpp"
#include "thetaslab/toriclat.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

using namespace thetaslab;
using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

constexpr double max_window_points = 400;

struct RunConfig {
  std::string geometry;
  std::string fan;
  std::string order = "6";
  double tol = 1e-9;
  std::uint64_t seed = 7;
  int samples = 20;
  std::string out = "-";
  std::string format = "json";
  std::string series = "eta";
  std::string identity;
  std::string suite;
  int window = 7;
  std::vector<long> cls;
};

// "--out json" (or csv) picks the format and writes to stdout.
void settle_output(RunConfig& c) {
  if (c.out == "json" || c.out == "csv") {
    c.format = c.out;
    c.out = "-";
  }
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
}

Rational order_of(const RunConfig& c) {
  Rational n;
  try {
    n = parse_rational(c.order);
  } catch (const std::invalid_argument&) {
    throw UsageError("--order must be a number, got '" + c.order + "'");
  }
  if (n < 1) throw UsageError("--order must be >= 1");
  return n;
}

Geometry load_geometry(const RunConfig& c) {
  if (!c.geometry.empty() && !c.fan.empty()) throw UsageError("give either --geometry or --fan, not both");
  if (!c.fan.empty()) {
    std::ifstream in(c.fan);
    if (!in) throw UsageError("cannot read fan file " + c.fan);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("fan file " + c.fan + ": " + e.what());
    }
    return Geometry::from_fan(fan_from_json(j), std::filesystem::path(c.fan).stem().string());
  }
  if (c.geometry.empty()) throw UsageError("--geometry or --fan is required");
  try {
    return Geometry::builtin(c.geometry);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Window rule: a lattice term v enters at degree |v|^2/2, so order N needs the
// rays with |v| <= sqrt(2N) plus one period in every direction.
void check_window(const Geometry& g, const Rational& order) {
  if (!g.is_lattice()) return;
  const double radius = std::floor(std::sqrt(2 * order.get_d())) +
                        *std::max_element(g.periods().begin(), g.periods().end());
  const double points = std::pow(2 * radius + 1, static_cast<double>(g.lattice_dim()));
  if (points > max_window_points)
    throw std::runtime_error("order " + order.get_str() + " is infeasible for " + g.name() +
                             ": the window rule |v|^2/2 <= order needs radius " + std::to_string(long(radius)) +
                             ", about " + std::to_string(long(points)) + " lattice points (limit " +
                             std::to_string(long(max_window_points)) + ")");
}

void emit(const RunConfig& c, const json& j, const std::string& csv) {
  write_text(c.format == "csv" ? csv : j.dump(1) + "\n", c.out);
}

std::string rows_csv(const json& rows) {
  std::ostringstream out;
  out << "monomial,lhs,rhs,residual\n";
  for (const auto& r : rows) {
    std::string mono;
    for (const auto& [k, v] : r["exponents"].items()) mono += (mono.empty() ? "" : " ") + k + "^" + v.get<std::string>();
    out << (mono.empty() ? "1" : mono) << ',' << r["lhs"].get<std::string>() << ',' << r["rhs"].get<std::string>()
        << ',' << r["residual"].get<std::string>() << '\n';
  }
  return out.str();
}

int run_expand(RunConfig c) {
  settle_output(c);
  const Rational n = order_of(c);
  Series s;
  if (c.series == "eta") {
    s = eta_core(n);
  } else if (c.series == "partitions") {
    s = invert(eta_core(n));
  } else if (c.series == "yz") {
    // q / prod(1 - q^k)^24
    Series core = invert(eta_core(n - 1)).pow(24);
    s = core.times_monomial(Monomial(*core.table(), {{"q", 1}})).truncated(n);
  } else {
    throw UsageError("--series must be eta, partitions or yz");
  }
  json coeffs = json::array();
  for (long k = 0; k <= to_int64(floor_of(n)); ++k) coeffs.push_back(to_fraction(s.coeff(Monomial(*s.table(), {{"q", k}}))));
  emit(c, {{"series", c.series}, {"order", to_fraction(n)}, {"coefficients", coeffs}}, to_csv(s));
  return 0;
}

int run_verify(RunConfig c) {
  settle_output(c);
  if (!c.suite.empty()) {
    if (!c.identity.empty()) throw UsageError("give either --identity or --suite");
    FormalReport r;
    try {
      r = run_formal_suite(c.suite);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    std::ostringstream csv;
    csv << "entry,passed\n";
    for (const auto& e : r.entries) csv << e.name << ',' << (e.passed ? 1 : 0) << '\n';
    emit(c, r.to_json(), csv.str());
    return r.passed() ? 0 : 1;
  }
  if (c.identity.empty()) throw UsageError("--identity or --suite is required");
  const Rational n = order_of(c);
  if (c.identity == "triple") {
    IdentityCheck r = verify_triple_product(n, c.window);
    json j = identity_report(r);
    emit(c, j, rows_csv(j["monomials"]));
    return r.passed() ? 0 : 1;
  }
  if (c.identity == "log") {
    if (!is_integer(n)) throw UsageError("the log identity needs an integral order");
    LogIdentity li = verify_log_identity(static_cast<int>(to_int64(n.get_num())));
    json rows = per_monomial(li.divisor_sum, li.compositions);
    json j{{"identity", "log"}, {"order", to_fraction(n)}, {"passed", li.passed()}, {"monomials", rows},
           {"logarithm_matches", li.divisor_sum == li.logarithm}};
    emit(c, j, rows_csv(rows));
    return li.passed() ? 0 : 1;
  }
  IdentityCheck r;
  try {
    check_window(Geometry::builtin(c.identity == "AZ" ? "A0" : c.identity), n);
    r = verify_identity(c.identity, n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json j = identity_report(r);
  emit(c, j, rows_csv(j["monomials"]));
  return r.passed() ? 0 : 1;
}

int run_ogw(RunConfig c) {
  settle_output(c);
  Geometry g = load_geometry(c);
  const Rational n = order_of(c);
  check_window(g, n);
  Normalization norm = gs_normalize(g, n);
  json orbits = json::array();
  for (const auto& rep : norm.reps) orbits.push_back({{"orbit", rep}, {"delta", to_json(norm.delta(rep))}});
  json j{{"geometry", g.name()}, {"order", to_fraction(n)}, {"converged", norm.converged()},
         {"table", ogw_table(g, norm)}, {"orbits", orbits}};
  emit(c, j, to_csv(norm.delta(norm.reps.front())));
  return norm.converged() ? 0 : 1;
}

int run_slab(RunConfig c) {
  settle_output(c);
  Geometry g = load_geometry(c);
  check_window(g, order_of(c));
  Normalization norm = gs_normalize(g, order_of(c));
  std::ostringstream csv;
  for (const auto& rep : norm.reps) csv << to_csv(norm.delta(rep));
  emit(c, normalization_report(g, norm), csv.str());
  return norm.converged() ? 0 : 1;
}

int run_mirror_map(RunConfig c) {
  settle_output(c);
  Geometry g = load_geometry(c);
  if (g.is_lattice()) throw UsageError("mirror map needs a finite fan (Ak(k), Conifold or a fan file)");
  const Rational n = order_of(c);
  MirrorMap m = mirror_map(g, n);
  json log_q = json::array(), y = json::array(), trip = json::array();
  for (std::size_t b = 0; b < m.log_q.size(); ++b) {
    log_q.push_back(m.log_q[b].to_json());
    y.push_back(to_json(m.y_of_q[b]));
    trip.push_back(to_json(m.round_trip[b]));
  }
  std::ostringstream csv;
  for (const auto& s : m.y_of_q) csv << to_csv(s);
  emit(c, {{"geometry", g.name()}, {"order", to_fraction(n)}, {"log_q", log_q}, {"y_of_q", y},
           {"round_trip", trip}, {"inverts", m.inverts()}},
       csv.str());
  return m.inverts() ? 0 : 1;
}

int run_gkz(RunConfig c) {
  settle_output(c);
  Geometry g = load_geometry(c);
  if (g.is_lattice()) throw UsageError("gkz needs a finite fan (Ak(k), Conifold or a fan file)");
  const Rational n = order_of(c);
  const auto& basis = dynamic_cast<const WallFrame&>(g.frame()).basis_classes();
  if (c.cls.size() != basis.size())
    throw UsageError("--class needs " + std::to_string(basis.size()) + " coefficient(s) in the wall basis");
  CurveClass d;
  for (std::size_t b = 0; b < basis.size(); ++b)
    d += basis[b].scaled(c.cls[b]);
  MirrorMap m = mirror_map(g, n);
  GKZOperator op;
  try {
    op = gkz_operator(g, d, *m.complex);
  } catch (const std::logic_error& e) {
    throw UsageError(e.what());
  }
  json rows = json::array();
  bool ok = true;
  std::ostringstream csv;
  auto apply = [&](const std::string& label, const LogSeries& f) {
    LogSeries r = gkz_apply(g, op, f, n);
    ok = ok && r.is_zero();
    rows.push_back({{"input", label}, {"zero", r.is_zero()}, {"residual", r.to_json()}});
    csv << label << ',' << (r.is_zero() ? 1 : 0) << '\n';
  };
  apply("1", LogSeries::from_series(Series::constant(m.complex, 1, n), m.log_vars));
  for (std::size_t b = 0; b < m.log_q.size(); ++b) apply("log " + m.kahler->var(b).name, m.log_q[b]);
  emit(c, {{"geometry", g.name()}, {"order", to_fraction(n)}, {"class", c.cls}, {"results", rows}, {"passed", ok}},
       "input,annihilated\n" + csv.str());
  return ok ? 0 : 1;
}

int run_numeric(RunConfig c) {
  settle_output(c);
  if (!(c.tol > 0)) throw UsageError("--tol must be positive");
  NumericReport r;
  try {
    r = check_transformations(c.suite.empty() ? "appendix" : c.suite, c.samples, c.tol, c.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ostringstream csv;
  csv << "law,samples,max_residual,max_tail,tol,gating,passed\n";
  csv.precision(17);
  for (const auto& l : r.laws)
    csv << l.name << ',' << l.samples << ',' << l.max_residual << ',' << l.max_tail << ',' << l.tol << ','
        << (l.gating ? 1 : 0) << ',' << (l.passed() ? 1 : 0) << '\n';
  emit(c, r.to_json(), csv.str());
  return r.passed() ? 0 : 1;
}

void add_output(CLI::App* app, RunConfig& c) {
  app->add_option("--out", c.out, "output path, '-' for stdout, or json/csv");
  app->add_option("--format", c.format, "json or csv");
}

void add_source(CLI::App* app, RunConfig& c) {
  app->add_option("--geometry", c.geometry, "A0, Ad(d), Xpq(p,q), X11, X1l(l), Hypercube(..), Ak(k), Conifold");
  app->add_option("--fan", c.fan, "fan file (JSON)");
  app->add_option("--order", c.order, "truncation order");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thetaslab: open GW potentials, theta functions and their checks"};
  app.require_subcommand(1);
  RunConfig c;
  std::function<int()> action;

  auto* expand = app.add_subcommand("expand", "coefficient table of a named q-series");
  expand->add_option("--series", c.series, "eta, partitions or yz");
  expand->add_option("--order", c.order, "truncation order");
  add_output(expand, c);
  expand->callback([&] { action = [&] { return run_expand(c); }; });

  auto verify_opts = [&](CLI::App* v) {
    v->add_option("--identity", c.identity, "triple, log, AZ, Ad(d), X11, Xpq(p,q), X1l(l), Hypercube(..)");
    v->add_option("--suite", c.suite, "quick or full");
    v->add_option("--order", c.order, "truncation order");
    v->add_option("--window", c.window, "z window for the triple product");
    add_output(v, c);
    v->callback([&] { action = [&] { return run_verify(c); }; });
  };
  verify_opts(app.add_subcommand("verify", "check an identity or a formal suite"));
  auto* theta = app.add_subcommand("theta", "theta-form identities");
  theta->require_subcommand(1);
  verify_opts(theta->add_subcommand("verify", "check an identity or a formal suite"));

  auto* ogw = app.add_subcommand("ogw", "open GW generating series Delta");
  add_source(ogw, c);
  add_output(ogw, c);
  ogw->callback([&] { action = [&] { return run_ogw(c); }; });

  auto* slab = app.add_subcommand("slab", "slab functions");
  slab->require_subcommand(1);
  auto* normalize = slab->add_subcommand("normalize", "Gross-Siebert normalization");
  add_source(normalize, c);
  add_output(normalize, c);
  normalize->callback([&] { action = [&] { return run_slab(c); }; });

  auto gkz_opts = [&](CLI::App* g) {
    add_source(g, c);
    add_output(g, c);
    g->add_option("--class", c.cls, "class in the wall basis")->delimiter(',')->required();
    g->callback([&] { action = [&] { return run_gkz(c); }; });
  };
  auto* mirror = app.add_subcommand("mirror", "mirror map and GKZ");
  mirror->require_subcommand(1);
  auto* map = mirror->add_subcommand("map", "mirror map and its inverse");
  add_source(map, c);
  add_output(map, c);
  map->callback([&] { action = [&] { return run_mirror_map(c); }; });
  gkz_opts(mirror->add_subcommand("gkz", "apply a GKZ operator"));
  gkz_opts(app.add_subcommand("gkz", "apply a GKZ operator"));

  auto* numeric = app.add_subcommand("numeric", "numeric transformation laws");
  numeric->require_subcommand(1);
  auto* check = numeric->add_subcommand("check", "run a numeric suite");
  check->add_option("--suite", c.suite, "appendix, delta or all");
  check->add_option("--tol", c.tol, "max relative residual");
  check->add_option("--samples", c.samples, "samples per law");
  check->add_option("--seed", c.seed, "RNG seed");
  add_output(check, c);
  check->callback([&] { action = [&] { return run_numeric(c); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

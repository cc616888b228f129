// Copyright 2026 The thetaslab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <json.hpp>

#include "oracles.hpp"

#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code;
  std::string out;
};

// stdout plus stderr of the CLI, with its exit status.
Run cli(const std::string& args) {
  const std::string cmd = std::string("'") + THETASLAB_CLI_PATH + "' " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("cli ogw table for A0 is the partition sequence") {
  Run r = cli("ogw --geometry A0 --order 6");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  const auto p = oracle::partitions(6);
  REQUIRE(j["table"].size() == p.size());
  for (std::size_t k = 0; k < p.size(); ++k) CHECK(j["table"][k] == std::to_string(p[k]) + "/1");
}

TEST_CASE("cli expand") {
  Run r = cli("expand --series eta --order 8");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  const auto e = oracle::euler_product(8);
  for (std::size_t k = 0; k < e.size(); ++k) CHECK(j["coefficients"][k] == std::to_string(e[k]) + "/1");

  Run yz = cli("expand --series yz --order 6");
  REQUIRE(yz.code == 0);
  auto c = nlohmann::json::parse(yz.out)["coefficients"];
  CHECK(c[0] == "0/1");
  CHECK(c[2] == "24/1");
  CHECK(c[6] == "176256/1");

  Run csv = cli("expand --series partitions --order 4 --out csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find("q,coeff") == 0);
  CHECK(csv.out.find("4/1,5/1") != std::string::npos);
}

TEST_CASE("cli verify reports per-monomial residuals") {
  Run r = cli("verify --identity AZ --order 8");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  REQUIRE(!j["monomials"].empty());
  for (const auto& row : j["monomials"]) CHECK(row["residual"] == "0/1");

  Run t = cli("theta verify --identity triple --order 6 --window 3 --out csv");
  CHECK(t.code == 0);
  CHECK(t.out.find("monomial,lhs,rhs,residual") == 0);
}

TEST_CASE("cli exit codes") {
  CHECK(cli("").code == 2);
  CHECK(cli("ogw --geometry Nope --order 3").code == 2);
  CHECK(cli("ogw --geometry A0 --order 0").code == 2);
  CHECK(cli("ogw --geometry A0 --order six").code == 2);
  CHECK(cli("verify --suite nightly").code == 2);
  CHECK(cli("numeric check --suite appendix --samples 0").code == 2);
  Run big = cli("ogw --geometry X11 --order 400");
  CHECK(big.code == 3);
  CHECK(big.out.find("window rule") != std::string::npos);
}

TEST_CASE("cli numeric check is deterministic per seed") {
  Run a = cli("numeric check --suite appendix --samples 2 --seed 11");
  Run b = cli("numeric check --suite appendix --samples 2 --seed 11");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["passed"] == true);
  CHECK(j["laws"].size() == 8);
}

TEST_CASE("cli quick suite and mirror commands") {
  Run q = cli("verify --suite quick");
  CHECK(q.code == 0);
  CHECK(nlohmann::json::parse(q.out)["passed"] == true);

  Run m = cli("mirror map --geometry 'Ak(1)' --order 4 --out csv");
  CHECK(m.code == 0);
  CHECK(m.out.find("3/1,3/1") != std::string::npos);

  CHECK(cli("mirror gkz --geometry 'Ak(1)' --class 1 --order 6").code == 0);
  CHECK(cli("slab normalize --geometry 'Ad(2)' --order 2").code == 0);
}

// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "poshrink/error.hpp"
#include "poshrink/prior_grammar.hpp"

using namespace poshrink;

namespace {

FPrior as_f(const PriorSpec& p) { return std::get<FPrior>(p); }

std::string parse_message(const std::string& text, std::size_t d) {
  try {
    parse_prior(text, d, false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    return e.what();
  }
  FAIL("expected a parse error for " << text);
  return {};
}

std::string temp_path(const char* name) {
  return std::string(P_tmpdir) + "/poshrink_test_" + name;
}

}  // namespace

TEST_CASE("closed-form priors") {
  const auto j = parse_prior("jeffreys", 3);
  REQUIRE(std::holds_alternative<PowerPrior>(j));
  CHECK(std::get<PowerPrior>(j).beta == std::vector<double>{0.5, 0.5, 0.5});
  const auto p = parse_prior("power:beta=1", 2);
  CHECK(std::get<PowerPrior>(p).beta == std::vector<double>{1.0, 1.0});
  const auto g = parse_prior("gamma:alpha=1,beta=0.5", 2);
  CHECK(std::get<GammaPrior>(g).alpha == std::vector<double>{1.0, 1.0});
  const auto v = parse_prior("power:beta=0.5,1,2", 3);
  CHECK(std::get<PowerPrior>(v).beta == std::vector<double>{0.5, 1.0, 2.0});
}

TEST_CASE("shrinkage families parse with defaults") {
  const FPrior sp = as_f(parse_prior("shift-point:alpha=0.5,eta=1", 3));
  const auto& f = std::get<ShiftPointFamily>(sp.family().kind);
  CHECK(f.alpha == 0.5);
  CHECK(f.eta == 1.0);
  CHECK(sp.jeffreys_beta());

  const FPrior sym = as_f(parse_prior("sym-point:alpha=0.5,center=2,2,2", 3));
  CHECK(std::get<SymPointFamily>(sym.family().kind).center == std::vector<double>{2.0, 2.0, 2.0});
  const FPrior bc = as_f(parse_prior("sym-point:alpha=0.5,center=2", 3));
  CHECK(std::get<SymPointFamily>(bc.family().kind).center == std::vector<double>{2.0, 2.0, 2.0});

  const FPrior coord = as_f(parse_prior("coord-subspace:alpha=0.5,include=1,2,3", 4));
  CHECK(std::get<CoordSubspaceFamily>(coord.family().kind).indices ==
        std::vector<std::size_t>{0, 1, 2});

  const FPrior mix = as_f(parse_prior("mix-coord-subspace:alpha=0.5", 4));
  CHECK(std::get<SumFamily>(mix.family().kind).parts.size() == 4);

  const FPrior c = as_f(parse_prior("constant", 2));
  CHECK(std::holds_alternative<ConstantFamily>(c.family().kind));
}

TEST_CASE("sym-subspace from inline bases, a spanning set and a file") {
  const FPrior a = as_f(parse_prior("sym-subspace:alpha=0.5,vperp=1,0,0|0,1,0", 3, false));
  CHECK(std::get<SymSubspaceFamily>(a.family().kind).vperp.size() == 2);
  const FPrior b = as_f(parse_prior("sym-subspace:alpha=0.5,v=1,1,1,1", 4));
  CHECK(std::get<SymSubspaceFamily>(b.family().kind).vperp.size() == 3);

  const std::string path = temp_path("basis.csv");
  {
    std::ofstream out(path);
    out << "0.5,0.5,-0.5,-0.5\n0.5,-0.5,0.5,-0.5\n0.5,-0.5,-0.5,0.5\n";
  }
  const FPrior c = as_f(parse_prior("sym-subspace:alpha=0.5,vperp=@" + path, 4));
  CHECK(std::get<SymSubspaceFamily>(c.family().kind).vperp.size() == 3);
  std::remove(path.c_str());

  try {
    parse_prior("sym-subspace:alpha=0.5,vperp=@/nonexistent/basis.csv", 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}

TEST_CASE("basis file errors carry line numbers") {
  const std::string path = temp_path("bad_basis.csv");
  {
    std::ofstream out(path);
    out << "1,0,0\n0,x,0\n";
  }
  try {
    read_basis_file(path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("sums take beta and eps at the top level only") {
  const FPrior s = as_f(parse_prior(
      "sum:(coord-subspace:alpha=0.5,include=1,2,3)+(coord-subspace:alpha=0.5,include=2,3,4),eps=0.01",
      4));
  CHECK(std::get<SumFamily>(s.family().kind).parts.size() == 2);
  CHECK(s.epsilon() == 0.01);
  const std::string msg =
      parse_message("sum:(shift-point:alpha=0.5,beta=1)+(shift-point:alpha=0.5)", 3);
  CHECK(msg.find("must be set on the sum") != std::string::npos);
}

TEST_CASE("parse errors report the character position") {
  CHECK(parse_message("harmonic", 3).find("position 0") != std::string::npos);
  CHECK(parse_message("shift-point:alpha=abc", 3).find("position 18") != std::string::npos);
  CHECK(parse_message("shift-point:alpha=0.5,color=3", 3).find("unknown option 'color'") !=
        std::string::npos);
  CHECK(parse_message("sym-point:alpha=0.5,center=1,2", 3).find("needs 1 or 3 values") !=
        std::string::npos);
  CHECK(parse_message("coord-subspace:alpha=0.5,include=0,1", 3).find("1..3") !=
        std::string::npos);
  CHECK(parse_message("shift-point:alpha=0.5)", 3).find("trailing") != std::string::npos);
  CHECK(parse_message("shift-point:eta=1", 3).find("missing alpha=") != std::string::npos);
  CHECK(parse_message("shift-point:alpha=0.5,alpha=1", 3).find("duplicate") != std::string::npos);
  CHECK(parse_message("power:beta=0", 3).find("positive") != std::string::npos);
}

TEST_CASE("hypotheses are enforced unless disabled") {
  CHECK_THROWS_AS(parse_prior("sym-point:alpha=0.51,center=0", 3), Error);
  CHECK_NOTHROW(parse_prior("sym-point:alpha=0.51,center=0", 3, false));
  CHECK_THROWS_AS(parse_prior("point:alpha=0.5,center=2", 3), Error);
  CHECK_NOTHROW(parse_prior("point:alpha=0.5,center=2", 3, false));
}

TEST_CASE("canonical descriptions re-parse to the same prior") {
  for (const char* text :
       {"shift-point:alpha=0.5,eta=1", "sym-point:alpha=0.5,center=2,2,2",
        "coord-subspace:alpha=0.5,include=1,3", "mix-coord-subspace:alpha=0.25",
        "constant:beta=1", "sym-subspace:alpha=0.5,v=1,1,1",
        "sum:(shift-point:alpha=0.5)+(coord-subspace:alpha=0.5,include=1,2),eps=0.001"}) {
    const FPrior p = as_f(parse_prior(text, 3, false));
    const FPrior q = as_f(parse_prior(p.describe(), 3, false));
    CHECK(p.describe() == q.describe());
    CHECK(p.fingerprint() == q.fingerprint());
  }
}

TEST_CASE("prior lists split on top-level semicolons") {
  const auto parts = split_prior_list("jeffreys; sum:(shift-point:alpha=0.5)+(constant);power:beta=1");
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == "jeffreys");
  CHECK(parts[2] == "power:beta=1");
}

TEST_CASE("dimension zero is rejected") {
  CHECK_THROWS_AS(parse_prior("jeffreys", 0), Error);
}

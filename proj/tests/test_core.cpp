// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "poshrink/core.hpp"
#include "poshrink/error.hpp"
#include "poshrink/quadrature.hpp"

using namespace poshrink;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("derive_gamma at equal durations is one half") {
  const std::vector<double> r{1.0, 2.0}, s{1.0, 2.0};
  const auto g = derive_gamma(r, s);
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(0.25));
}

TEST_CASE("derive_gamma stays strictly inside (0, 1/r)") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> logu(-6.0, 6.0);
  for (int k = 0; k < 500; ++k) {
    const double r = std::pow(10.0, logu(gen)), s = std::pow(10.0, logu(gen));
    const double g = derive_gamma(std::vector<double>{r}, std::vector<double>{s})[0];
    CHECK(g > 0.0);
    CHECK(g < 1.0 / r);
  }
}

TEST_CASE("non-positive durations name the offending index") {
  try {
    ProblemSpec({1.0, 0.0, 1.0}, {1.0, 1.0, 1.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
  CHECK(code_of([] { ProblemSpec({1.0}, {-1.0}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { ProblemSpec({1.0, 1.0}, {1.0}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { ProblemSpec({}, {}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("theta and lambda round-trip to 1e-12 over [1e-8, 1e8]") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> logu(-8.0, 8.0);
  for (int k = 0; k < 1000; ++k) {
    const std::vector<double> lambda{std::pow(10.0, logu(gen)), std::pow(10.0, logu(gen))};
    const std::vector<double> gamma{std::pow(10.0, logu(gen) / 4), 0.5};
    const auto back = lambda_from_theta(theta_from_lambda(lambda, gamma), gamma);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(back[i] - lambda[i]) <= 1e-12 * lambda[i]);
    }
  }
}

TEST_CASE("negative lambda is rejected") {
  const std::vector<double> gamma{0.5};
  CHECK(code_of([&] { theta_from_lambda(std::vector<double>{-1.0}, gamma); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("count vectors reject negative entries and shifts") {
  CHECK(code_of([] { CountVector({1, -1}); }) == ErrorCode::invalid_argument);
  const CountVector z{0, 2};
  CHECK(z.shifted(1, -2) == CountVector{0, 0});
  CHECK(code_of([&] { z.shifted(0, -1); }) == ErrorCode::invalid_argument);
  CHECK(z.total() == 2);
  CHECK((z + CountVector{1, 1}) == CountVector{1, 3});
}

TEST_CASE("log_gamma_fn matches std::lgamma") {
  for (double v : {1e-10, 1e-3, 0.5, 1.0, 1.5, 2.0, 7.25, 30.0, 171.5, 1e4, 1e6, 1e10}) {
    const double expected = std::lgamma(v);
    CHECK(std::abs(log_gamma_fn(v) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
  }
  CHECK(log_gamma_fn(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_gamma_fn(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
}

TEST_CASE("log_gamma_fn domain errors") {
  CHECK(code_of([] { log_gamma_fn(0.0); }) == ErrorCode::domain);
  CHECK(code_of([] { log_gamma_fn(-1.5); }) == ErrorCode::domain);
  CHECK(code_of([] { log_gamma_fn(INFINITY); }) == ErrorCode::domain);
}

TEST_CASE("log_sum_exp handles extremes") {
  const std::vector<double> big{1000.0, 1000.0};
  CHECK(log_sum_exp(big) == doctest::Approx(1000.0 + std::log(2.0)));
  const std::vector<double> with_neg_inf{-INFINITY, 0.0};
  CHECK(log_sum_exp(with_neg_inf) == doctest::Approx(0.0));
  const std::vector<double> all_neg_inf{-INFINITY, -INFINITY};
  CHECK(log_sum_exp(all_neg_inf) == -INFINITY);
  CHECK(log_add_exp(-800.0, -800.0) == doctest::Approx(-800.0 + std::log(2.0)));
}

TEST_CASE("poisson_log_pmf matches the direct formula") {
  for (double mean : {0.01, 0.4, 3.0, 250.0}) {
    for (Count k : {0, 1, 5, 40}) {
      CHECK(poisson_log_pmf(k, mean) == doctest::Approx(oracle::log_poisson(k, mean)).epsilon(1e-12));
    }
  }
  CHECK(poisson_log_pmf(0, 0.0) == 0.0);
  CHECK(poisson_log_pmf(3, 0.0) == -INFINITY);
  CHECK(poisson_truncation(100.0) >= 100 + 12 * 10);
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(42, 3), b(42, 3), c(42, 4), e(43, 3);
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 1000; ++k) {
    const auto va = a.next();
    CHECK(va == b.next());
    seen.insert(va);
    CHECK(va != c.next());
    CHECK(va != e.next());
  }
  CHECK(seen.size() == 1000);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("rng samplers have the right first two moments") {
  Rng rng(2024, 0);
  const int n = 200000;
  auto moments = [&](auto draw, double mean, double var) {
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = draw();
      s += v;
      s2 += v * v;
    }
    const double m = s / n, v = s2 / n - m * m;
    CHECK(std::abs(m - mean) < 5.0 * std::sqrt(var / n));
    CHECK(std::abs(v - var) < 0.05 * var);
  };
  moments([&] { return rng.uniform(); }, 0.5, 1.0 / 12.0);
  moments([&] { return rng.normal(); }, 0.0, 1.0);
  moments([&] { return rng.exponential(); }, 1.0, 1.0);
  for (double shape : {0.3, 0.5, 1.0, 4.5, 60.0}) {
    moments([&] { return rng.gamma(shape); }, shape, shape);
  }
  for (double mean : {0.2, 3.0, 29.0, 31.0, 500.0}) {
    moments([&] { return static_cast<double>(rng.poisson(mean)); }, mean, mean);
  }
}

TEST_CASE("uniform draws avoid the endpoints") {
  Rng rng(1, 1);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gauss-kronrod integrates smooth and peaked functions") {
  const auto r1 = integrate_gauss_kronrod([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  const auto r2 = integrate_gauss_kronrod([](double x) { return 1.0 / (1.0 + x * x); }, -50.0, 50.0);
  CHECK(r2.value == doctest::Approx(2.0 * std::atan(50.0)).epsilon(1e-11));
  const auto r3 = integrate_gauss_kronrod(
      [](double x) { return std::exp(-1e4 * (x - 0.3) * (x - 0.3)); }, 0.0, 1.0);
  CHECK(r3.value == doctest::Approx(std::sqrt(M_PI / 1e4)).epsilon(1e-10));
  const auto r4 = integrate_gauss_kronrod([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(r4.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

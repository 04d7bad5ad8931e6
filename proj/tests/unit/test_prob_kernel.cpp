#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "mlcs/exact_oracle.hpp"
#include "mlcs/prob_kernel.hpp"
#include "mlcs/rng.hpp"

using namespace mlcs;

namespace {

// Brute-force p(k,n): fraction of all |Σ|^n strings that contain the pattern 0,1,2,...
// (symbol j mod |Σ|) as a subsequence.
double enumerate_p(std::uint32_t k, std::uint32_t n, std::uint32_t sigma) {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n; ++i) total *= sigma;
  std::uint64_t hits = 0;
  std::vector<std::uint32_t> digits(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (auto& d : digits) {
      d = static_cast<std::uint32_t>(c % sigma);
      c /= sigma;
    }
    std::uint32_t matched = 0;
    for (std::uint32_t j = 0; j < n && matched < k; ++j) {
      if (digits[j] == matched % sigma) ++matched;
    }
    if (matched == k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("table base cases and hand-unrolled value") {
  const ProbTable t = build_table(4, 5);
  CHECK(t.p(0, 5) == 1.0);
  CHECK(t.p(3, 2) == 0.0);
  CHECK(t.p(2, 3) == doctest::Approx(0.15625).epsilon(1e-15));
  CHECK(t.p(1, 1) == doctest::Approx(0.25));
  CHECK(t.p(1, 2) == doctest::Approx(0.4375));
  CHECK(t.p(2, 2) == doctest::Approx(0.0625));
  CHECK(std::exp(t.log_p(2, 3)) == doctest::Approx(0.15625));
  CHECK(std::isinf(t.log_p(3, 2)));
  CHECK_THROWS_AS((void)t.p(0, 6), std::out_of_range);
}

TEST_CASE("table matches brute-force enumeration") {
  for (std::uint32_t sigma : {2u, 3u}) {
    const ProbTable t = build_table(sigma, 8);
    for (std::uint32_t n = 0; n <= 8; ++n) {
      for (std::uint32_t k = 0; k <= n; ++k) {
        CAPTURE(sigma);
        CAPTURE(k);
        CAPTURE(n);
        CHECK(t.p(k, n) == doctest::Approx(enumerate_p(k, n, sigma)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("closed form examples") {
  CHECK(p_closed(2, 3, AlphabetParams(4)) == doctest::Approx(0.15625).epsilon(1e-15));
  CHECK(p_closed(0, 7, AlphabetParams(20)) == 1.0);
  CHECK(p_closed(5, 3, AlphabetParams(4)) == 0.0);
  CHECK(p_closed_formII(2, 3, AlphabetParams(4)) == doctest::Approx(0.15625).epsilon(1e-15));
  CHECK(p_closed_formII(1, 1, AlphabetParams(4)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p_closed_formII(0, 0, AlphabetParams(2)) == 1.0);
  CHECK(p_beta_form(2, 3, AlphabetParams(4)) == doctest::Approx(0.15625).epsilon(1e-14));
  CHECK(p_beta_form(1, 4, AlphabetParams(4)) == doctest::Approx(0.68359375).epsilon(1e-15));
  CHECK(p_beta_form(3, 3, AlphabetParams(2)) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("closed forms in every numeric mode agree with the exact table") {
  for (std::uint32_t sigma : {2u, 4u, 7u}) {
    const AlphabetParams params(sigma);
    const ExactProbTable exact(sigma, 60);
    for (std::uint32_t n = 0; n <= 60; n += 3) {
      for (std::uint32_t k = 0; k <= n; ++k) {
        const double want = exact.to_double(k, n);
        CAPTURE(sigma);
        CAPTURE(k);
        CAPTURE(n);
        CHECK(std::abs(p_closed(k, n, params, NumericMode::Linear) - want) <= 1e-12);
        CHECK(std::abs(p_closed(k, n, params, NumericMode::LogSpace) - want) <= 1e-12);
        CHECK(std::abs(p_closed(k, n, params, NumericMode::ExactRational) - want) <= 1e-15);
        CHECK(std::abs(p_closed_formII(k, n, params, NumericMode::Linear) - want) <= 1e-12);
        CHECK(std::abs(p_closed_formII(k, n, params, NumericMode::LogSpace) - want) <= 1e-12);
        CHECK(std::abs(p_beta_form(k, n, params, NumericMode::Linear) - want) <= 1e-12);
        CHECK(std::abs(p_beta_form(k, n, params, NumericMode::LogSpace) - want) <= 1e-12);
      }
    }
  }
}

TEST_CASE("exact closed form equals the exact recurrence as rationals") {
  for (std::uint32_t sigma : {2u, 3u, 5u}) {
    const ExactProbTable exact(sigma, 40);
    for (std::uint32_t n = 0; n <= 40; ++n) {
      for (std::uint32_t k = 0; k <= n; ++k) {
        CHECK(exact.value(k, n) == exact_closed_form(k, n, sigma));
      }
    }
  }
}

TEST_CASE("recurrence holds in the float table (property)") {
  Xoshiro256 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sigma = static_cast<std::uint32_t>(2 + rng.below(25));
    const auto table = cached_table(sigma, 300);
    const auto n = static_cast<std::uint32_t>(1 + rng.below(300));
    const auto k = static_cast<std::uint32_t>(1 + rng.below(n));
    const double alpha = 1.0 / sigma;
    const double rhs = alpha * table->p(k - 1, n - 1) + (1.0 - alpha) * table->p(k, n - 1);
    CHECK(table->p(k, n) == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("q examples and its relation to p") {
  const AlphabetParams four(4);
  CHECK(q_value(1, 200, four, NumericMode::Linear) == 1.0);
  CHECK(q_value(2, 3, four, NumericMode::Linear) == doctest::Approx(1.5));
  CHECK(q_value(0, 10, four, NumericMode::Linear) == 0.0);
  CHECK(q_value(1, 200, four, NumericMode::LogSpace) == 0.0);

  const ExactProbTable exact(4, 120);
  for (std::uint32_t n = 1; n <= 120; n += 7) {
    for (std::uint32_t k = 1; k <= n; ++k) {
      // 1 - p = beta^(n-k+1) q
      const double ln_q = q_value(k, n, four, NumericMode::LogSpace);
      const double one_minus_p = 1.0 - exact.to_double(k, n);
      const double rebuilt = std::exp(ln_q + (n - k + 1) * std::log(0.75));
      CHECK(rebuilt == doctest::Approx(one_minus_p).epsilon(1e-10));
    }
  }
}

TEST_CASE("q stays finite in log space for large n") {
  const AlphabetParams four(4);
  for (std::uint32_t k = 1; k <= 2000; k += 37) {
    const double ln_q = q_value(k, 2000, four, NumericMode::LogSpace);
    CHECK(std::isfinite(ln_q));
    CHECK(ln_q >= 0.0);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(AlphabetParams(0), DomainError);
  CHECK_THROWS_AS(build_table(0, 5), DomainError);
  CHECK_THROWS_AS(q_value(3, 2, AlphabetParams(4)), DomainError);
  CHECK_THROWS_AS(q_value(1, 2, AlphabetParams(1)), DomainError);
  CHECK_THROWS_AS(p_beta_form(1, 2, AlphabetParams(1)), DomainError);
  CHECK_THROWS_AS(p_closed_formII(1, 2, AlphabetParams(4), NumericMode::ExactRational), DomainError);
  CHECK_THROWS_AS(beta_density(0.5, 0.0, 1.0), DomainError);
  CHECK(p_closed(2, 5, AlphabetParams(1)) == 1.0);
}

TEST_CASE("memory budget") {
  CHECK_THROWS_AS(build_table(4, 1000, 1024), CapacityError);
  CHECK_NOTHROW(build_table(4, 10, ProbTable::bytes_required(10)));

  setenv("MLCS_KERNEL_MEMORY_BUDGET", "3M", 1);
  CHECK(kernel_memory_budget() == 3u * 1024 * 1024);
  setenv("MLCS_KERNEL_MEMORY_BUDGET", "512", 1);
  CHECK(kernel_memory_budget() == 512u);
  unsetenv("MLCS_KERNEL_MEMORY_BUDGET");
  CHECK(kernel_memory_budget() == std::size_t{2} << 30);
}

TEST_CASE("mode resolution") {
  CHECK(resolve_mode(NumericMode::Auto, 100, 4) == NumericMode::Linear);
  CHECK(resolve_mode(NumericMode::Auto, 301, 4) == NumericMode::LogSpace);
  CHECK(resolve_mode(NumericMode::Auto, 50, 20) == NumericMode::LogSpace);
  CHECK(resolve_mode(NumericMode::ExactRational, 50, 20) == NumericMode::ExactRational);
}

TEST_CASE("kernel facade") {
  const ProbKernel table(4, EvalMethod::TabularDP, NumericMode::Auto, 10);
  const ProbKernel closed(4, EvalMethod::ClosedForm);
  const ProbKernel beta(4, EvalMethod::BetaForm);
  for (std::uint32_t n = 0; n <= 10; ++n) {
    for (std::uint32_t k = 0; k <= n + 1; ++k) {
      CHECK(table.p(k, n) == doctest::Approx(closed.p(k, n)).epsilon(1e-12));
      CHECK(beta.p(k, n) == doctest::Approx(closed.p(k, n)).epsilon(1e-12));
    }
  }
  CHECK(closed.log_p(2, 3) == doctest::Approx(std::log(0.15625)));
  CHECK(closed.q(2, 3) == doctest::Approx(1.5));
}

TEST_CASE("cross validation") {
  for (std::uint32_t sigma : {4u, 2u}) {
    const ConsistencyReport r = cross_validate(sigma, 50, 1e-9);
    CHECK(r.passed);
    CHECK(r.max_deviation <= 1e-9);
    CHECK_FALSE(r.pairs.empty());
  }
  const ConsistencyReport big = cross_validate(20, 200, 1e-9);
  CHECK(big.passed);
}

TEST_CASE("monotone in k and n (property, random points)") {
  Xoshiro256 rng(3);
  const AlphabetParams params(4);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::uint32_t>(rng.below(800));
    const auto k = static_cast<std::uint32_t>(rng.below(n + 1));
    const double here = p_closed(k, n, params);
    CHECK(p_closed(k + 1, n, params) <= here + 1e-12);
    CHECK(p_closed(k, n + 1, params) >= here - 1e-12);
    CHECK(here >= 0.0);
    CHECK(here <= 1.0);
  }
}

TEST_CASE("log binomial") {
  CHECK(std::exp(static_cast<double>(log_binomial(10, 3))) == doctest::Approx(120.0));
  CHECK(log_binomial(5, 0) == 0.0L);
  CHECK(std::exp(static_cast<double>(log_binomial(200, 100))) ==
        doctest::Approx(9.054851465610328e58).epsilon(1e-10));
}

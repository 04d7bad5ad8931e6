#pragma once

// Probability that a uniform random string of length n over an alphabet of
// size |Σ| contains a fixed subsequence of length k, evaluated by the
// recurrence table and by its closed forms.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlcs {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// α = 1/|Σ| and β = 1 − α for one alphabet size.
class AlphabetParams {
 public:
  explicit AlphabetParams(std::uint32_t sigma_size);

  std::uint32_t sigma_size() const noexcept { return sigma_size_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  long double log_alpha() const noexcept { return log_alpha_; }
  /// -inf when |Σ| = 1.
  long double log_beta() const noexcept { return log_beta_; }

 private:
  std::uint32_t sigma_size_;
  double alpha_;
  double beta_;
  long double log_alpha_;
  long double log_beta_;
};

enum class EvalMethod { TabularDP, ClosedForm, ClosedFormII, BetaForm };

/// Auto picks LogSpace for n > 300 or |Σ| >= 20 and Linear otherwise.
enum class NumericMode { Auto, Linear, LogSpace, ExactRational };

std::string to_string(EvalMethod method);
std::string to_string(NumericMode mode);

NumericMode resolve_mode(NumericMode requested, std::uint32_t n, std::uint32_t sigma_size);

/// Dense triangular table of p(k, n) for 0 <= k <= n <= n_max, holding both
/// the linear values and their natural logarithms.
class ProbTable {
 public:
  ProbTable(std::uint32_t sigma_size, std::uint32_t n_max);

  std::uint32_t sigma_size() const noexcept { return sigma_size_; }
  std::uint32_t n_max() const noexcept { return n_max_; }

  /// 0 for k > n. Requires n <= n_max.
  double p(std::uint32_t k, std::uint32_t n) const;
  /// -inf for k > n.
  double log_p(std::uint32_t k, std::uint32_t n) const;

  static std::size_t bytes_required(std::uint32_t n_max);

 private:
  static std::size_t offset(std::uint32_t k, std::uint32_t n) noexcept {
    return static_cast<std::size_t>(n) * (n + 1) / 2 + k;
  }

  std::uint32_t sigma_size_;
  std::uint32_t n_max_;
  std::vector<double> values_;
  std::vector<double> log_values_;
};

/// Memory cap for a single table, from MLCS_KERNEL_MEMORY_BUDGET (bytes, with
/// optional K/M/G suffix). Defaults to 2 GiB.
std::size_t kernel_memory_budget();

/// Builds the table from the recurrence. Throws CapacityError above budget.
ProbTable build_table(std::uint32_t sigma_size, std::uint32_t n_max,
                      std::size_t budget = kernel_memory_budget());

/// Process-wide cache keyed by (|Σ|, n_max). Concurrent callers for the same
/// key share one build.
std::shared_ptr<const ProbTable> cached_table(std::uint32_t sigma_size, std::uint32_t n_max);

// Closed forms. The public entry points clamp to [0, 1]; the raw variants
// return the unclamped floating-point evaluation so that verification can
// check the forms before any clamping hides an error.

double p_closed(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                NumericMode mode = NumericMode::Auto);
double p_closed_formII(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                       NumericMode mode = NumericMode::Auto);
double p_beta_form(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                   NumericMode mode = NumericMode::Auto);

namespace raw {
double p_closed(std::uint32_t k, std::uint32_t n, const AlphabetParams& params, NumericMode mode);
double p_closed_formII(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                       NumericMode mode);
double p_beta_form(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                   NumericMode mode);
}  // namespace raw

/// q(k, n) = Σ_{i<k} α^i C(n−k+i, i). Returns ln q in LogSpace mode.
/// Throws DomainError for |Σ| = 1 or k > n.
double q_value(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
               NumericMode mode = NumericMode::Auto);

/// Beta probability density at x with shape parameters (a, b).
double beta_density(double x, double a, double b);
long double log_binomial(std::uint64_t n, std::uint64_t k);

/// Evaluator bound to one alphabet size, method and numeric mode.
class ProbKernel {
 public:
  ProbKernel(std::uint32_t sigma_size, EvalMethod method, NumericMode mode = NumericMode::Auto,
             std::uint32_t n_max = 0);

  const AlphabetParams& params() const noexcept { return params_; }
  EvalMethod method() const noexcept { return method_; }
  NumericMode mode() const noexcept { return mode_; }

  double p(std::uint32_t k, std::uint32_t n) const;
  double log_p(std::uint32_t k, std::uint32_t n) const;
  double q(std::uint32_t k, std::uint32_t n) const;

 private:
  AlphabetParams params_;
  EvalMethod method_;
  NumericMode mode_;
  std::shared_ptr<const ProbTable> table_;
};

struct PairDeviation {
  EvalMethod first;
  EvalMethod second;
  double max_abs_deviation = 0.0;
  std::uint32_t at_k = 0;
  std::uint32_t at_n = 0;
};

struct ConsistencyReport {
  std::uint32_t sigma_size = 0;
  std::uint32_t n_max = 0;
  double tolerance = 0.0;
  std::vector<PairDeviation> pairs;
  double max_deviation = 0.0;
  bool passed = false;
};

/// Evaluates all four methods over the full grid (tabular in exact rationals)
/// and reports the worst pairwise deviation. Requires n_max <= 500.
ConsistencyReport cross_validate(std::uint32_t sigma_size, std::uint32_t n_max, double tolerance);

}  // namespace mlcs

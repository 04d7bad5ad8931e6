#pragma once

// Ground truth used to referee the heuristic machinery: exact LCS for two and
// three strings, brute-force enumeration for tiny sets, and the probability
// recurrence in exact rational arithmetic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace mlcs {

class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct OracleBudget {
  std::size_t max_cells = std::size_t{1} << 27;
  std::size_t max_enum = std::size_t{1} << 20;
};

struct Lcs2Result {
  std::size_t length = 0;
  std::string witness;
};

Lcs2Result exact_lcs2(std::string_view s1, std::string_view s2, const OracleBudget& budget = {});
std::size_t exact_lcs3(std::string_view s1, std::string_view s2, std::string_view s3,
                       const OracleBudget& budget = {});
std::size_t exhaustive_lcs(std::span<const std::string> strings, const OracleBudget& budget = {});

/// True iff `needle` is a subsequence of `haystack` (plain linear scan).
bool is_subsequence(std::string_view needle, std::string_view haystack) noexcept;

inline constexpr std::uint32_t kExactTableMaxN = 500;

/// p(k, n) from the recurrence in exact rationals. Every entry has the form
/// P / |Σ|^n with integer P, which is how it is stored.
class ExactProbTable {
 public:
  ExactProbTable(std::uint32_t sigma_size, std::uint32_t n_max);

  std::uint32_t sigma_size() const noexcept { return sigma_size_; }
  std::uint32_t n_max() const noexcept { return n_max_; }

  mpq_class value(std::uint32_t k, std::uint32_t n) const;
  double to_double(std::uint32_t k, std::uint32_t n) const;

 private:
  std::uint32_t sigma_size_;
  std::uint32_t n_max_;
  std::vector<mpz_class> numerators_;
  std::vector<mpz_class> denominators_;  // |Σ|^n, one per n
};

/// Closed-form sum evaluated exactly.
mpq_class exact_closed_form(std::uint32_t k, std::uint32_t n, std::uint32_t sigma_size);

}  // namespace mlcs

#include "mlcs/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace mlcs {

namespace {

void require_cells(std::size_t cells, const OracleBudget& budget, const char* what) {
  if (cells > budget.max_cells) {
    throw BudgetError(std::string(what) + ": " + std::to_string(cells) +
                      " cells exceed budget of " + std::to_string(budget.max_cells));
  }
}

std::size_t checked_product(std::initializer_list<std::size_t> sizes) {
  std::size_t product = 1;
  for (std::size_t s : sizes) {
    if (s != 0 && product > static_cast<std::size_t>(-1) / s) {
      return static_cast<std::size_t>(-1);
    }
    product *= s;
  }
  return product;
}

}  // namespace

bool is_subsequence(std::string_view needle, std::string_view haystack) noexcept {
  std::size_t pos = 0;
  for (char c : haystack) {
    if (pos == needle.size()) break;
    if (c == needle[pos]) ++pos;
  }
  return pos == needle.size();
}

Lcs2Result exact_lcs2(std::string_view s1, std::string_view s2, const OracleBudget& budget) {
  require_cells(checked_product({s1.size(), s2.size()}), budget, "exact_lcs2");
  const std::size_t rows = s1.size() + 1;
  const std::size_t cols = s2.size() + 1;
  std::vector<std::uint32_t> table(rows * cols, 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return table[i * cols + j]; };

  for (std::size_t i = 1; i < rows; ++i) {
    for (std::size_t j = 1; j < cols; ++j) {
      if (s1[i - 1] == s2[j - 1]) {
        at(i, j) = at(i - 1, j - 1) + 1;
      } else {
        at(i, j) = std::max(at(i - 1, j), at(i, j - 1));
      }
    }
  }

  Lcs2Result result;
  result.length = at(rows - 1, cols - 1);
  result.witness.reserve(result.length);
  std::size_t i = rows - 1;
  std::size_t j = cols - 1;
  while (i > 0 && j > 0) {
    if (s1[i - 1] == s2[j - 1]) {
      result.witness.push_back(s1[i - 1]);
      --i;
      --j;
    } else if (at(i - 1, j) >= at(i, j - 1)) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(result.witness.begin(), result.witness.end());
  return result;
}

std::size_t exact_lcs3(std::string_view s1, std::string_view s2, std::string_view s3,
                       const OracleBudget& budget) {
  require_cells(checked_product({s1.size(), s2.size(), s3.size()}), budget, "exact_lcs3");
  const std::size_t n2 = s2.size() + 1;
  const std::size_t n3 = s3.size() + 1;
  // Two layers over the first string suffice for the length.
  std::vector<std::uint32_t> prev(n2 * n3, 0);
  std::vector<std::uint32_t> cur(n2 * n3, 0);
  for (std::size_t i = 1; i <= s1.size(); ++i) {
    for (std::size_t j = 1; j < n2; ++j) {
      for (std::size_t l = 1; l < n3; ++l) {
        std::uint32_t& cell = cur[j * n3 + l];
        if (s1[i - 1] == s2[j - 1] && s2[j - 1] == s3[l - 1]) {
          cell = prev[(j - 1) * n3 + (l - 1)] + 1;
        } else {
          cell = std::max({prev[j * n3 + l], cur[(j - 1) * n3 + l], cur[j * n3 + (l - 1)]});
        }
      }
    }
    std::swap(prev, cur);
  }
  return prev[n2 * n3 - 1];
}

std::size_t exhaustive_lcs(std::span<const std::string> strings, const OracleBudget& budget) {
  if (strings.empty()) return 0;
  const auto shortest =
      std::min_element(strings.begin(), strings.end(),
                       [](const std::string& a, const std::string& b) { return a.size() < b.size(); });
  const std::size_t m = shortest->size();
  if (m > 20) {
    throw BudgetError("exhaustive_lcs: shortest string has " + std::to_string(m) +
                      " symbols, limit is 20");
  }
  if ((std::size_t{1} << m) > budget.max_enum) {
    throw BudgetError("exhaustive_lcs: 2^" + std::to_string(m) + " subsequences exceed budget of " +
                      std::to_string(budget.max_enum));
  }

  std::string candidate;
  candidate.reserve(m);
  for (std::size_t length = m; length > 0; --length) {
    // Gosper's hack walks every m-bit mask with exactly `length` bits set.
    std::uint32_t mask = (std::uint32_t{1} << length) - 1;
    const std::uint32_t limit = std::uint32_t{1} << m;
    while (mask < limit) {
      candidate.clear();
      for (std::size_t bit = 0; bit < m; ++bit) {
        if (mask & (std::uint32_t{1} << bit)) candidate.push_back((*shortest)[bit]);
      }
      const bool common = std::all_of(strings.begin(), strings.end(), [&](const std::string& s) {
        return is_subsequence(candidate, s);
      });
      if (common) return length;
      const std::uint32_t low = mask & (~mask + 1);
      const std::uint32_t ripple = mask + low;
      mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
  }
  return 0;
}

ExactProbTable::ExactProbTable(std::uint32_t sigma_size, std::uint32_t n_max)
    : sigma_size_(sigma_size), n_max_(n_max) {
  if (sigma_size == 0) throw std::invalid_argument("alphabet size must be positive");
  if (n_max > kExactTableMaxN) {
    throw BudgetError("exact probability table is capped at n = " +
                      std::to_string(kExactTableMaxN));
  }
  const std::size_t cells = static_cast<std::size_t>(n_max + 1) * (n_max + 2) / 2;
  numerators_.resize(cells);
  denominators_.resize(n_max + 1);

  // P(k, n) = p(k, n)·|Σ|^n obeys P(k, n) = P(k−1, n−1) + (|Σ|−1)·P(k, n−1).
  const unsigned long other = sigma_size - 1;
  auto idx = [](std::uint32_t k, std::uint32_t n) {
    return static_cast<std::size_t>(n) * (n + 1) / 2 + k;
  };
  mpz_class power = 1;
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    denominators_[n] = power;
    numerators_[idx(0, n)] = power;
    for (std::uint32_t k = 1; k <= n; ++k) {
      mpz_class& cell = numerators_[idx(k, n)];
      cell = numerators_[idx(k - 1, n - 1)];
      if (k <= n - 1) cell += numerators_[idx(k, n - 1)] * other;
    }
    power *= sigma_size;
  }
}

mpq_class ExactProbTable::value(std::uint32_t k, std::uint32_t n) const {
  if (n > n_max_) throw std::out_of_range("n exceeds exact table range");
  if (k > n) return 0;
  mpq_class q(numerators_[static_cast<std::size_t>(n) * (n + 1) / 2 + k], denominators_[n]);
  q.canonicalize();
  return q;
}

double ExactProbTable::to_double(std::uint32_t k, std::uint32_t n) const {
  return value(k, n).get_d();
}

mpq_class exact_closed_form(std::uint32_t k, std::uint32_t n, std::uint32_t sigma_size) {
  if (sigma_size == 0) throw std::invalid_argument("alphabet size must be positive");
  if (k == 0) return 1;
  if (k > n) return 0;
  // 1 − ((|Σ|−1)^m / |Σ|^m) Σ_i C(n−k+i, i) / |Σ|^i with m = n−k+1, over the
  // common denominator |Σ|^(m+k−1) = |Σ|^n.
  const std::uint32_t m = n - k + 1;
  mpz_class sum = 0;
  mpz_class binom;
  mpz_class scale;
  for (std::uint32_t i = 0; i < k; ++i) {
    mpz_bin_uiui(binom.get_mpz_t(), n - k + i, i);
    mpz_ui_pow_ui(scale.get_mpz_t(), sigma_size, k - 1 - i);
    sum += binom * scale;
  }
  mpz_class beta_num;
  mpz_ui_pow_ui(beta_num.get_mpz_t(), sigma_size - 1, m);
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), sigma_size, n);
  mpq_class result(denom - beta_num * sum, denom);
  result.canonicalize();
  return result;
}

}  // namespace mlcs

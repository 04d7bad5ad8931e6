#include "mlcs/prob_kernel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "mlcs/exact_oracle.hpp"

namespace mlcs {

namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();
constexpr std::uint32_t kLogSpaceMinN = 300;
constexpr std::uint32_t kLogSpaceMinSigma = 20;
constexpr std::uint64_t kExactBinomialMaxN = 60;
constexpr std::size_t kLogGammaCacheSize = 4096;

long double log_gamma_uncached(long double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgammal_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// ln Γ(j) for small integer j, memoized. ln Γ(0) is unused.
const std::array<long double, kLogGammaCacheSize>& log_gamma_cache() {
  static const auto cache = [] {
    std::array<long double, kLogGammaCacheSize> values{};
    values[0] = std::numeric_limits<long double>::infinity();
    for (std::size_t j = 1; j < kLogGammaCacheSize; ++j) {
      values[j] = log_gamma_uncached(static_cast<long double>(j));
    }
    return values;
  }();
  return cache;
}

long double log_gamma_int(std::uint64_t j) {
  if (j < kLogGammaCacheSize) return log_gamma_cache()[j];
  return log_gamma_uncached(static_cast<long double>(j));
}

long double log_beta_function(std::uint64_t a, std::uint64_t b) {
  return log_gamma_int(a) + log_gamma_int(b) - log_gamma_int(a + b);
}

std::uint64_t exact_binomial(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    r = r * (n - k + j) / j;
  }
  return r;
}

double binomial_linear(std::uint64_t n, std::uint64_t k) {
  if (n <= kExactBinomialMaxN) return static_cast<double>(exact_binomial(n, k));
  return static_cast<double>(std::exp(log_binomial(n, k)));
}

long double log_sum_exp(const std::vector<long double>& terms) {
  if (terms.empty()) return kNegInf;
  const long double peak = *std::max_element(terms.begin(), terms.end());
  if (peak == kNegInf) return kNegInf;
  long double acc = 0.0L;
  for (long double t : terms) acc += std::exp(t - peak);
  return peak + std::log(acc);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

void require_float_mode(NumericMode mode, const char* form) {
  if (mode == NumericMode::ExactRational) {
    throw DomainError(std::string(form) + " has no exact-rational evaluation");
  }
}

}  // namespace

AlphabetParams::AlphabetParams(std::uint32_t sigma_size) : sigma_size_(sigma_size) {
  if (sigma_size == 0) throw DomainError("alphabet size must be at least 1");
  alpha_ = 1.0 / static_cast<double>(sigma_size);
  beta_ = 1.0 - alpha_;
  log_alpha_ = -std::log(static_cast<long double>(sigma_size));
  log_beta_ = sigma_size == 1
                  ? kNegInf
                  : std::log(static_cast<long double>(sigma_size - 1)) + log_alpha_;
}

std::string to_string(EvalMethod method) {
  switch (method) {
    case EvalMethod::TabularDP: return "table";
    case EvalMethod::ClosedForm: return "closed";
    case EvalMethod::ClosedFormII: return "closed2";
    case EvalMethod::BetaForm: return "beta";
  }
  return "unknown";
}

std::string to_string(NumericMode mode) {
  switch (mode) {
    case NumericMode::Auto: return "auto";
    case NumericMode::Linear: return "linear";
    case NumericMode::LogSpace: return "log";
    case NumericMode::ExactRational: return "exact";
  }
  return "unknown";
}

NumericMode resolve_mode(NumericMode requested, std::uint32_t n, std::uint32_t sigma_size) {
  if (requested != NumericMode::Auto) return requested;
  return (n > kLogSpaceMinN || sigma_size >= kLogSpaceMinSigma) ? NumericMode::LogSpace
                                                                 : NumericMode::Linear;
}

long double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return kNegInf;
  return log_gamma_int(n + 1) - log_gamma_int(k + 1) - log_gamma_int(n - k + 1);
}

double beta_density(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta density needs positive shapes");
  if (x < 0.0 || x > 1.0) return 0.0;
  return std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0) / std::beta(a, b);
}

// ---------------------------------------------------------------------------
// Table

ProbTable::ProbTable(std::uint32_t sigma_size, std::uint32_t n_max)
    : sigma_size_(sigma_size), n_max_(n_max) {
  const AlphabetParams params(sigma_size);
  const std::size_t cells = static_cast<std::size_t>(n_max + 1) * (n_max + 2) / 2;
  values_.assign(cells, 0.0);
  log_values_.assign(cells, -std::numeric_limits<double>::infinity());

  const double alpha = params.alpha();
  const double beta = params.beta();
  const double log_alpha = static_cast<double>(params.log_alpha());
  const double log_beta = static_cast<double>(params.log_beta());
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    values_[offset(0, n)] = 1.0;
    log_values_[offset(0, n)] = 0.0;
    for (std::uint32_t k = 1; k <= n; ++k) {
      const bool has_upper = k <= n - 1;
      const double take = values_[offset(k - 1, n - 1)];
      const double skip = has_upper ? values_[offset(k, n - 1)] : 0.0;
      values_[offset(k, n)] = alpha * take + beta * skip;

      const double log_take = log_alpha + log_values_[offset(k - 1, n - 1)];
      const double log_skip = has_upper ? log_beta + log_values_[offset(k, n - 1)]
                                        : -std::numeric_limits<double>::infinity();
      log_values_[offset(k, n)] = log_add_exp(log_take, log_skip);
    }
  }
}

double ProbTable::p(std::uint32_t k, std::uint32_t n) const {
  if (n > n_max_) throw std::out_of_range("n exceeds probability table range");
  if (k > n) return 0.0;
  return values_[offset(k, n)];
}

double ProbTable::log_p(std::uint32_t k, std::uint32_t n) const {
  if (n > n_max_) throw std::out_of_range("n exceeds probability table range");
  if (k > n) return -std::numeric_limits<double>::infinity();
  return log_values_[offset(k, n)];
}

std::size_t ProbTable::bytes_required(std::uint32_t n_max) {
  const std::size_t cells = static_cast<std::size_t>(n_max + 1) * (n_max + 2) / 2;
  return cells * 2 * sizeof(double);
}

std::size_t kernel_memory_budget() {
  constexpr std::size_t kDefault = std::size_t{2} << 30;
  const char* env = std::getenv("MLCS_KERNEL_MEMORY_BUDGET");
  if (env == nullptr || *env == '\0') return kDefault;
  char* end = nullptr;
  const unsigned long long base = std::strtoull(env, &end, 10);
  if (end == env) return kDefault;
  std::size_t scale = 1;
  switch (std::toupper(static_cast<unsigned char>(*end))) {
    case 'K': scale = std::size_t{1} << 10; break;
    case 'M': scale = std::size_t{1} << 20; break;
    case 'G': scale = std::size_t{1} << 30; break;
    default: break;
  }
  return static_cast<std::size_t>(base) * scale;
}

ProbTable build_table(std::uint32_t sigma_size, std::uint32_t n_max, std::size_t budget) {
  if (sigma_size == 0) throw DomainError("alphabet size must be at least 1");
  const std::size_t bytes = ProbTable::bytes_required(n_max);
  if (bytes > budget) {
    throw CapacityError("probability table for n_max = " + std::to_string(n_max) + " needs " +
                        std::to_string(bytes) + " bytes, budget is " + std::to_string(budget));
  }
  return ProbTable(sigma_size, n_max);
}

std::shared_ptr<const ProbTable> cached_table(std::uint32_t sigma_size, std::uint32_t n_max) {
  struct Entry {
    std::once_flag once;
    std::shared_ptr<const ProbTable> table;
  };
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<Entry>> cache;

  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(mutex);
    auto& slot = cache[{sigma_size, n_max}];
    if (!slot) slot = std::make_shared<Entry>();
    entry = slot;
  }
  std::call_once(entry->once, [&] {
    entry->table = std::make_shared<const ProbTable>(build_table(sigma_size, n_max));
  });
  return entry->table;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace raw {

double p_closed(std::uint32_t k, std::uint32_t n, const AlphabetParams& params, NumericMode mode) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (params.sigma_size() == 1) return 1.0;
  mode = resolve_mode(mode, n, params.sigma_size());
  if (mode == NumericMode::ExactRational) {
    return exact_closed_form(k, n, params.sigma_size()).get_d();
  }

  const std::uint32_t gap = n - k;
  const std::uint32_t m = gap + 1;
  if (mode == NumericMode::Linear) {
    double sum = 0.0;
    for (std::uint32_t i = 0; i < k; ++i) {
      sum += std::pow(params.alpha(), static_cast<double>(i)) * binomial_linear(gap + i, i);
    }
    return 1.0 - std::pow(params.beta(), static_cast<double>(m)) * sum;
  }

  std::vector<long double> terms(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    terms[i] = static_cast<long double>(i) * params.log_alpha() + log_binomial(gap + i, i);
  }
  const long double log_tail = static_cast<long double>(m) * params.log_beta() + log_sum_exp(terms);
  return static_cast<double>(1.0L - std::exp(log_tail));
}

double p_closed_formII(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                       NumericMode mode) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (params.sigma_size() == 1) return 1.0;
  mode = resolve_mode(mode, n, params.sigma_size());
  require_float_mode(mode, "closed form II");

  // The running product Π_{j<=i} α(n−k+j)/j equals α^i C(n−k+i, i); the i = 0
  // term is split out as the lone β^m.
  const std::uint32_t gap = n - k;
  const std::uint32_t m = gap + 1;
  if (mode == NumericMode::Linear) {
    double product = 1.0;
    double sum = 0.0;
    for (std::uint32_t i = 1; i < k; ++i) {
      product *= params.alpha() * static_cast<double>(gap + i) / static_cast<double>(i);
      sum += product;
    }
    const double beta_m = std::pow(params.beta(), static_cast<double>(m));
    return 1.0 - beta_m - beta_m * sum;
  }

  std::vector<long double> terms;
  terms.reserve(k);
  long double log_product = 0.0L;
  for (std::uint32_t i = 1; i < k; ++i) {
    log_product += params.log_alpha() + std::log(static_cast<long double>(gap + i)) -
                   std::log(static_cast<long double>(i));
    terms.push_back(log_product);
  }
  const long double log_beta_m = static_cast<long double>(m) * params.log_beta();
  return static_cast<double>(1.0L - std::exp(log_beta_m) -
                             std::exp(log_beta_m + log_sum_exp(terms)));
}

double p_beta_form(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                   NumericMode mode) {
  if (params.sigma_size() == 1) {
    throw DomainError("beta form is undefined for a single-letter alphabet (beta = 0)");
  }
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  mode = resolve_mode(mode, n, params.sigma_size());
  require_float_mode(mode, "beta form");

  const std::uint32_t gap = n - k;
  const std::uint32_t m = gap + 1;
  if (mode == NumericMode::Linear) {
    double sum = 0.0;
    for (std::uint32_t i = 1; i < k; ++i) {
      sum += beta_density(params.beta(), static_cast<double>(m), static_cast<double>(i)) /
             static_cast<double>(i);
    }
    return 1.0 - std::pow(params.beta(), static_cast<double>(m)) -
           params.alpha() * params.beta() * sum;
  }

  std::vector<long double> terms;
  terms.reserve(k);
  for (std::uint32_t i = 1; i < k; ++i) {
    const long double log_density = static_cast<long double>(gap) * params.log_beta() +
                                    static_cast<long double>(i - 1) * params.log_alpha() -
                                    log_beta_function(m, i);
    terms.push_back(log_density - std::log(static_cast<long double>(i)));
  }
  const long double log_scale = params.log_alpha() + params.log_beta();
  return static_cast<double>(1.0L - std::exp(static_cast<long double>(m) * params.log_beta()) -
                             std::exp(log_scale + log_sum_exp(terms)));
}

}  // namespace raw

double p_closed(std::uint32_t k, std::uint32_t n, const AlphabetParams& params, NumericMode mode) {
  return clamp_unit(raw::p_closed(k, n, params, mode));
}

double p_closed_formII(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                       NumericMode mode) {
  return clamp_unit(raw::p_closed_formII(k, n, params, mode));
}

double p_beta_form(std::uint32_t k, std::uint32_t n, const AlphabetParams& params,
                   NumericMode mode) {
  return clamp_unit(raw::p_beta_form(k, n, params, mode));
}

double q_value(std::uint32_t k, std::uint32_t n, const AlphabetParams& params, NumericMode mode) {
  if (params.sigma_size() == 1) throw DomainError("q(k, n) is undefined for |Σ| = 1");
  if (k > n) throw DomainError("q(k, n) requires k <= n");
  mode = resolve_mode(mode, n, params.sigma_size());
  require_float_mode(mode, "q(k, n)");

  const std::uint32_t gap = n - k;
  if (mode == NumericMode::Linear) {
    double sum = 0.0;
    for (std::uint32_t i = 0; i < k; ++i) {
      sum += std::pow(params.alpha(), static_cast<double>(i)) * binomial_linear(gap + i, i);
    }
    return sum;
  }
  std::vector<long double> terms(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    terms[i] = static_cast<long double>(i) * params.log_alpha() + log_binomial(gap + i, i);
  }
  return static_cast<double>(log_sum_exp(terms));
}

// ---------------------------------------------------------------------------
// Kernel

ProbKernel::ProbKernel(std::uint32_t sigma_size, EvalMethod method, NumericMode mode,
                       std::uint32_t n_max)
    : params_(sigma_size), method_(method), mode_(mode) {
  if (method == EvalMethod::TabularDP) table_ = cached_table(sigma_size, n_max);
}

double ProbKernel::p(std::uint32_t k, std::uint32_t n) const {
  switch (method_) {
    case EvalMethod::TabularDP: return table_->p(k, n);
    case EvalMethod::ClosedForm: return p_closed(k, n, params_, mode_);
    case EvalMethod::ClosedFormII: return p_closed_formII(k, n, params_, mode_);
    case EvalMethod::BetaForm: return p_beta_form(k, n, params_, mode_);
  }
  return 0.0;
}

double ProbKernel::log_p(std::uint32_t k, std::uint32_t n) const {
  if (method_ == EvalMethod::TabularDP) return table_->log_p(k, n);
  return std::log(p(k, n));
}

double ProbKernel::q(std::uint32_t k, std::uint32_t n) const {
  return q_value(k, n, params_, mode_);
}

// ---------------------------------------------------------------------------
// Cross-validation

ConsistencyReport cross_validate(std::uint32_t sigma_size, std::uint32_t n_max, double tolerance) {
  const ExactProbTable exact(sigma_size, n_max);
  const AlphabetParams params(sigma_size);

  constexpr std::array<EvalMethod, 4> kMethods = {EvalMethod::TabularDP, EvalMethod::ClosedForm,
                                                  EvalMethod::ClosedFormII, EvalMethod::BetaForm};
  ConsistencyReport report;
  report.sigma_size = sigma_size;
  report.n_max = n_max;
  report.tolerance = tolerance;
  for (std::size_t a = 0; a < kMethods.size(); ++a) {
    for (std::size_t b = a + 1; b < kMethods.size(); ++b) {
      report.pairs.push_back({kMethods[a], kMethods[b]});
    }
  }

  std::array<double, 4> values{};
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    for (std::uint32_t k = 0; k <= n; ++k) {
      values[0] = exact.to_double(k, n);
      values[1] = raw::p_closed(k, n, params, NumericMode::Auto);
      values[2] = raw::p_closed_formII(k, n, params, NumericMode::Auto);
      values[3] = raw::p_beta_form(k, n, params, NumericMode::Auto);
      std::size_t pair = 0;
      for (std::size_t a = 0; a < values.size(); ++a) {
        for (std::size_t b = a + 1; b < values.size(); ++b, ++pair) {
          double dev = std::abs(values[a] - values[b]);
          if (std::isnan(dev)) dev = std::numeric_limits<double>::infinity();
          PairDeviation& slot = report.pairs[pair];
          if (dev > slot.max_abs_deviation) {
            slot.max_abs_deviation = dev;
            slot.at_k = k;
            slot.at_n = n;
          }
        }
      }
    }
  }
  for (const auto& pair : report.pairs) {
    report.max_deviation = std::max(report.max_deviation, pair.max_abs_deviation);
  }
  report.passed = report.max_deviation <= tolerance;
  return report;
}

}  // namespace mlcs

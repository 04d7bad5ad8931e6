#include "mlcs/heuristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace mlcs {

namespace {

constexpr std::array<std::pair<HeuristicKind, std::string_view>, 6> kKindNames = {{
    {HeuristicKind::MinLen, "minlen"},
    {HeuristicKind::ProbKGuess, "kguess"},
    {HeuristicKind::ProbKAnalyticUncorr, "kanalytic-uncorr"},
    {HeuristicKind::ProbKAnalyticCorr, "kanalytic-corr"},
    {HeuristicKind::GCoV, "gcov"},
    {HeuristicKind::ProbFixedK, "fixedk"},
}};

std::uint32_t clamp_k(double raw, std::uint32_t max_remaining) {
  const double upper = std::max<double>(1.0, max_remaining);
  if (!(raw >= 1.0)) return 1;  // also catches NaN
  return static_cast<std::uint32_t>(std::min(raw, upper));
}

}  // namespace

std::string to_string(HeuristicKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return std::string(name);
  }
  return "unknown";
}

std::optional<HeuristicKind> heuristic_kind_from_string(std::string_view name) {
  for (const auto& [k, text] : kKindNames) {
    if (text == name) return k;
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const HeuristicSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)},
                     {"a", spec.constants.a},
                     {"b", spec.constants.b},
                     {"c", spec.constants.c},
                     {"gamma_slope", spec.constants.gamma_slope},
                     {"gamma_intercept", spec.constants.gamma_intercept}};
  if (spec.kind == HeuristicKind::ProbFixedK) j["fixed_k"] = spec.fixed_k;
}

void from_json(const nlohmann::json& j, HeuristicSpec& spec) {
  const auto name = j.at("kind").get<std::string>();
  const auto kind = heuristic_kind_from_string(name);
  if (!kind) throw std::invalid_argument("unknown heuristic kind '" + name + "'");
  spec = HeuristicSpec{};
  spec.kind = *kind;
  spec.constants.a = j.value("a", spec.constants.a);
  spec.constants.b = j.value("b", spec.constants.b);
  spec.constants.c = j.value("c", spec.constants.c);
  spec.constants.gamma_slope = j.value("gamma_slope", spec.constants.gamma_slope);
  spec.constants.gamma_intercept = j.value("gamma_intercept", spec.constants.gamma_intercept);
  spec.fixed_k = j.value("fixed_k", 0u);
}

std::uint32_t select_k(const HeuristicSpec& spec, LevelExtent extent, std::uint32_t sigma_size,
                       std::uint32_t num_strings) {
  const double sigma = static_cast<double>(sigma_size);
  const HeuristicConstants& c = spec.constants;
  double raw = 1.0;
  switch (spec.kind) {
    case HeuristicKind::ProbKGuess:
      raw = std::floor(static_cast<double>(extent.min_remaining) / sigma);
      break;
    case HeuristicKind::ProbKAnalyticUncorr:
      raw = std::round(static_cast<double>(extent.max_remaining) *
                       (c.a - c.b * std::log(static_cast<double>(num_strings))) / sigma);
      break;
    case HeuristicKind::ProbKAnalyticCorr:
      raw = std::floor((static_cast<double>(extent.min_remaining) - c.c) / sigma);
      break;
    case HeuristicKind::ProbFixedK:
      raw = static_cast<double>(spec.fixed_k);
      break;
    case HeuristicKind::MinLen:
    case HeuristicKind::GCoV:
      break;
  }
  return clamp_k(raw, extent.max_remaining);
}

double gcov_gamma(const HeuristicConstants& constants, std::uint32_t num_strings) {
  return constants.gamma_slope * static_cast<double>(num_strings) + constants.gamma_intercept;
}

Score score_prob(const Instance& inst, std::span<const std::uint32_t> cursors, std::uint32_t k,
                 const ProbTable& table) {
  double total = 0.0;
  for (std::size_t i = 0; i < cursors.size(); ++i) {
    const std::uint32_t remaining = inst.length(i) - cursors[i];
    if (k > remaining) return Score{-std::numeric_limits<double>::infinity()};
    total += table.log_p(k, remaining);
  }
  return Score{total};
}

Score score_gcov(const Instance& inst, std::span<const std::uint32_t> cursors,
                 const HeuristicConstants& constants) {
  const RemainderStats st = remainder_stats(inst, cursors);
  const std::uint32_t ub = upper_bound(inst, cursors);
  if (ub == 0 || st.mean == 0.0) return Score{0.0};
  const double gamma = gcov_gamma(constants, static_cast<std::uint32_t>(cursors.size()));
  const double dispersion = st.variance > 0.0 ? std::pow(st.variance, gamma) : 1.0;
  return Score{st.mean * st.mean / dispersion * std::sqrt(static_cast<double>(ub))};
}

Score score_minlen(const Instance& inst, std::span<const std::uint32_t> cursors) {
  return Score{static_cast<double>(min_remaining(inst, cursors))};
}

}  // namespace mlcs

#pragma once

// Node scoring for the beam search: the probability-product score with its
// k-selection rules, GCoV, and the minimum-remaining-length baseline.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mlcs/instance.hpp"
#include "mlcs/prob_kernel.hpp"

namespace mlcs {

enum class HeuristicKind {
  MinLen,
  ProbKGuess,
  ProbKAnalyticUncorr,
  ProbKAnalyticCorr,
  GCoV,
  ProbFixedK,  // constant k; used by the k-sweep
};

/// Published regression outputs for the k rules and the GCoV exponent.
struct HeuristicConstants {
  double a = 1.8233;
  double b = 0.1588;
  double c = 31.0;
  double gamma_slope = 0.0036;
  double gamma_intercept = -0.0161;

  friend bool operator==(const HeuristicConstants&, const HeuristicConstants&) = default;
};

struct HeuristicSpec {
  HeuristicKind kind = HeuristicKind::ProbKAnalyticUncorr;
  HeuristicConstants constants{};
  std::uint32_t fixed_k = 0;

  bool is_probabilistic() const noexcept {
    return kind == HeuristicKind::ProbKGuess || kind == HeuristicKind::ProbKAnalyticUncorr ||
           kind == HeuristicKind::ProbKAnalyticCorr || kind == HeuristicKind::ProbFixedK;
  }

  friend bool operator==(const HeuristicSpec&, const HeuristicSpec&) = default;
};

std::string to_string(HeuristicKind kind);
std::optional<HeuristicKind> heuristic_kind_from_string(std::string_view name);

void to_json(nlohmann::json& j, const HeuristicSpec& spec);
/// Accepts {"kind": ..., "a": ..., "b": ..., "c": ..., "gamma_slope": ...,
/// "gamma_intercept": ..., "fixed_k": ...}; missing constants keep defaults.
void from_json(const nlohmann::json& j, HeuristicSpec& spec);

/// Higher is better. Probability scores are log-products; -inf ranks last.
struct Score {
  double value = 0.0;
  friend auto operator<=>(const Score&, const Score&) = default;
};

/// Remaining-length extremes over every string of every child in a level.
struct LevelExtent {
  std::uint32_t min_remaining = 0;
  std::uint32_t max_remaining = 0;
};

/// k for the probability score. Guess and Corr floor, Uncorr rounds half away
/// from zero; the result is clamped to [1, max_remaining] (and to 1 when the
/// level has nothing left).
std::uint32_t select_k(const HeuristicSpec& spec, LevelExtent extent, std::uint32_t sigma_size,
                       std::uint32_t num_strings);

double gcov_gamma(const HeuristicConstants& constants, std::uint32_t num_strings);

/// Σ_i ln p(k, |r_i|). -inf as soon as some remainder is shorter than k.
Score score_prob(const Instance& inst, std::span<const std::uint32_t> cursors, std::uint32_t k,
                 const ProbTable& table);
/// μ² / var^γ · sqrt(ub), with var^γ taken as 1 when var = 0.
Score score_gcov(const Instance& inst, std::span<const std::uint32_t> cursors,
                 const HeuristicConstants& constants);
Score score_minlen(const Instance& inst, std::span<const std::uint32_t> cursors);

inline Score score_prob(const Instance& inst, const NodeState& state, std::uint32_t k,
                        const ProbTable& table) {
  return score_prob(inst, state.cursors, k, table);
}
inline Score score_gcov(const Instance& inst, const NodeState& state,
                        const HeuristicConstants& constants = {}) {
  return score_gcov(inst, state.cursors, constants);
}
inline Score score_minlen(const Instance& inst, const NodeState& state) {
  return score_minlen(inst, state.cursors);
}

}  // namespace mlcs

#pragma once

// Beam search over LCS construction and the two-heuristic hyper-heuristic.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mlcs/heuristics.hpp"
#include "mlcs/instance.hpp"

namespace mlcs {

enum class TieBreak { CursorLex };

struct BeamConfig {
  std::uint32_t beam_width = 200;
  std::uint32_t probe_width = 60;
  HeuristicSpec heuristic{};
  bool dominance_filter = false;
  TieBreak tie_break = TieBreak::CursorLex;
  /// Workers for child scoring. Output does not depend on this.
  unsigned threads = 1;
};

struct HyperOutcome {
  HeuristicSpec first;
  HeuristicSpec second;
  std::size_t probe_first = 0;
  std::size_t probe_second = 0;
  int chosen = 1;  // 1 or 2

  const HeuristicSpec& chosen_spec() const noexcept { return chosen == 1 ? first : second; }
};

struct RunReport {
  std::string solution;
  std::size_t length = 0;
  std::size_t levels = 0;
  std::size_t nodes_expanded = 0;
  std::size_t children_generated = 0;
  std::chrono::nanoseconds wall_time{0};
  BeamConfig config{};
  std::optional<HyperOutcome> hyper;
  bool verified = false;

  double wall_ms() const noexcept { return std::chrono::duration<double, std::milli>(wall_time).count(); }
};

/// Throws std::invalid_argument for a zero beam width or probe width above it.
void validate(const BeamConfig& config);

RunReport beam_search(const Instance& inst, const BeamConfig& config);

/// Probes hf1 and hf2 at config.probe_width, keeps hf1 when its probe is at
/// least as long, and reruns the winner at config.beam_width.
/// Probe outcome to heuristic index: ties go to hf1.
inline int hyper_choice(std::size_t probe_first, std::size_t probe_second) noexcept {
  return probe_first >= probe_second ? 1 : 2;
}

RunReport hyper_heuristic(const Instance& inst, const BeamConfig& config, const HeuristicSpec& hf1,
                          const HeuristicSpec& hf2);

/// Subsequence check against the raw input strings, independent of the
/// next-occurrence tables.
bool verify_solution(const Instance& inst, std::string_view solution);

void to_json(nlohmann::json& j, const BeamConfig& config);
void from_json(const nlohmann::json& j, BeamConfig& config);
void to_json(nlohmann::json& j, const RunReport& report);
void from_json(const nlohmann::json& j, RunReport& report);

}  // namespace mlcs

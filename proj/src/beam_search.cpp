#include "mlcs/beam_search.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "mlcs/exact_oracle.hpp"
#include "mlcs/prob_kernel.hpp"

namespace mlcs {

namespace {

using Clock = std::chrono::steady_clock;

// Flat storage for one level of children: cursors back to back, N per child.
struct ChildBuffer {
  std::size_t width = 0;
  std::vector<std::uint32_t> cursors;
  std::vector<PathArena::Id> parent;
  std::vector<Symbol> symbol;

  std::size_t size() const noexcept { return parent.size(); }
  std::span<const std::uint32_t> at(std::size_t idx) const noexcept {
    return {cursors.data() + idx * width, width};
  }
  void clear() {
    cursors.clear();
    parent.clear();
    symbol.clear();
  }
};

struct CursorKeyHash {
  std::size_t operator()(std::string_view key) const noexcept {
    return std::hash<std::string_view>{}(key);
  }
};

std::string_view cursor_key(std::span<const std::uint32_t> cursors) {
  return {reinterpret_cast<const char*>(cursors.data()), cursors.size_bytes()};
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  constexpr std::size_t kMinPerWorker = 64;
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(1, count / kMinPerWorker));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace

void validate(const BeamConfig& config) {
  if (config.beam_width == 0) throw std::invalid_argument("beam width must be positive");
  if (config.probe_width == 0) throw std::invalid_argument("probe width must be positive");
  if (config.probe_width > config.beam_width) {
    throw std::invalid_argument("probe width must not exceed beam width");
  }
}

bool verify_solution(const Instance& inst, std::string_view solution) {
  for (const std::string& text : inst.texts()) {
    if (!is_subsequence(solution, text)) return false;
  }
  return true;
}

RunReport beam_search(const Instance& inst, const BeamConfig& config) {
  if (config.beam_width == 0) throw std::invalid_argument("beam width must be positive");
  if (inst.num_strings() == 0) throw InstanceError("empty instance");

  const std::size_t n = inst.num_strings();
  const auto sigma = static_cast<std::uint32_t>(inst.sigma());
  const HeuristicSpec& spec = config.heuristic;

  std::shared_ptr<const ProbTable> table;
  if (spec.is_probabilistic()) table = cached_table(sigma, inst.max_length());

  RunReport report;
  report.config = config;
  const auto started = Clock::now();

  PathArena arena;
  std::vector<std::uint32_t> beam(n, 0);
  std::vector<PathArena::Id> beam_paths{PathArena::kRoot};
  PathArena::Id best_path = PathArena::kRoot;

  ChildBuffer children;
  children.width = n;
  std::vector<Score> scores;
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> next_beam;
  std::vector<PathArena::Id> next_paths;

  while (!beam_paths.empty()) {
    // Expansion.
    children.clear();
    for (std::size_t b = 0; b < beam_paths.size(); ++b) {
      const std::span<const std::uint32_t> from(beam.data() + b * n, n);
      for (std::uint32_t s = 0; s < sigma; ++s) {
        const std::size_t base = children.cursors.size();
        children.cursors.resize(base + n);
        if (advance_cursors(inst, from, static_cast<Symbol>(s),
                            std::span<std::uint32_t>(children.cursors.data() + base, n))) {
          children.parent.push_back(beam_paths[b]);
          children.symbol.push_back(static_cast<Symbol>(s));
        } else {
          children.cursors.resize(base);
        }
      }
    }
    report.nodes_expanded += beam_paths.size();
    report.children_generated += children.size();
    if (children.size() == 0) break;
    ++report.levels;

    // Scoring. k is shared by the whole level.
    std::uint32_t k = 0;
    if (spec.is_probabilistic()) {
      LevelExtent extent{std::numeric_limits<std::uint32_t>::max(), 0};
      for (std::size_t c = 0; c < children.size(); ++c) {
        const auto cur = children.at(c);
        extent.min_remaining = std::min(extent.min_remaining, min_remaining(inst, cur));
        extent.max_remaining = std::max(extent.max_remaining, max_remaining(inst, cur));
      }
      k = select_k(spec, extent, sigma, static_cast<std::uint32_t>(n));
    }
    scores.resize(children.size());
    parallel_for(children.size(), config.threads, [&](std::size_t c) {
      const auto cur = children.at(c);
      switch (spec.kind) {
        case HeuristicKind::MinLen: scores[c] = score_minlen(inst, cur); break;
        case HeuristicKind::GCoV: scores[c] = score_gcov(inst, cur, spec.constants); break;
        default: scores[c] = score_prob(inst, cur, k, *table); break;
      }
    });

    // Selection: score descending, then cursor vector ascending.
    order.resize(children.size());
    std::iota(order.begin(), order.end(), 0u);
    const auto better = [&](std::uint32_t a, std::uint32_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      const auto ca = children.at(a);
      const auto cb = children.at(b);
      const auto lex =
          std::lexicographical_compare_three_way(ca.begin(), ca.end(), cb.begin(), cb.end());
      if (lex != 0) return lex < 0;
      return a < b;
    };

    std::size_t keep = std::min<std::size_t>(config.beam_width, order.size());
    if (config.dominance_filter) {
      std::sort(order.begin(), order.end(), better);
      std::unordered_set<std::string_view, CursorKeyHash> seen;
      seen.reserve(order.size());
      std::size_t out = 0;
      for (std::size_t i = 0; i < order.size() && out < config.beam_width; ++i) {
        if (seen.insert(cursor_key(children.at(order[i]))).second) order[out++] = order[i];
      }
      keep = out;
    } else if (keep < order.size()) {
      std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                       better);
      std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), better);
    } else {
      std::sort(order.begin(), order.end(), better);
    }

    next_beam.resize(keep * n);
    next_paths.resize(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      const std::uint32_t c = order[i];
      next_paths[i] = arena.push(children.parent[c], children.symbol[c]);
      const auto cur = children.at(c);
      std::copy(cur.begin(), cur.end(), next_beam.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    beam.swap(next_beam);
    beam_paths.swap(next_paths);
    // Every node of a level has the same depth, so the top-ranked node of the
    // newest level is the longest solution seen so far.
    best_path = beam_paths.front();
  }

  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - started);
  report.solution = arena.spell(best_path, inst.alphabet());
  report.length = report.solution.size();
  report.verified = verify_solution(inst, report.solution);
  return report;
}

RunReport hyper_heuristic(const Instance& inst, const BeamConfig& config, const HeuristicSpec& hf1,
                          const HeuristicSpec& hf2) {
  validate(config);
  BeamConfig probe = config;
  probe.beam_width = config.probe_width;

  probe.heuristic = hf1;
  const RunReport first = beam_search(inst, probe);
  probe.heuristic = hf2;
  const RunReport second = beam_search(inst, probe);

  HyperOutcome outcome;
  outcome.first = hf1;
  outcome.second = hf2;
  outcome.probe_first = first.length;
  outcome.probe_second = second.length;
  outcome.chosen = hyper_choice(first.length, second.length);

  BeamConfig full = config;
  full.heuristic = outcome.chosen_spec();
  RunReport report = beam_search(inst, full);
  report.wall_time += first.wall_time + second.wall_time;
  report.hyper = outcome;
  return report;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const BeamConfig& config) {
  j = nlohmann::json{{"beta", config.beam_width},
                     {"beta_h", config.probe_width},
                     {"heuristic", config.heuristic},
                     {"dominance_filter", config.dominance_filter},
                     {"tie_break", "cursor-lex"},
                     {"threads", config.threads}};
}

void from_json(const nlohmann::json& j, BeamConfig& config) {
  config = BeamConfig{};
  config.beam_width = j.at("beta").get<std::uint32_t>();
  config.probe_width = j.at("beta_h").get<std::uint32_t>();
  config.heuristic = j.at("heuristic").get<HeuristicSpec>();
  config.dominance_filter = j.value("dominance_filter", false);
  config.threads = j.value("threads", 1u);
  if (j.value("tie_break", std::string("cursor-lex")) != "cursor-lex") {
    throw std::invalid_argument("unknown tie-break policy");
  }
}

void to_json(nlohmann::json& j, const RunReport& report) {
  j = nlohmann::json{{"solution", report.solution},
                     {"length", report.length},
                     {"levels", report.levels},
                     {"nodes_expanded", report.nodes_expanded},
                     {"children_generated", report.children_generated},
                     {"wall_ns", report.wall_time.count()},
                     {"config", report.config},
                     {"verified", report.verified}};
  if (report.hyper) {
    const HyperOutcome& h = *report.hyper;
    j["hyper"] = {{"hf1", h.first},
                  {"hf2", h.second},
                  {"probe_hf1", h.probe_first},
                  {"probe_hf2", h.probe_second},
                  {"chosen", h.chosen},
                  {"chosen_heuristic", to_string(h.chosen_spec().kind)}};
  } else {
    j["hyper"] = nullptr;
  }
}

void from_json(const nlohmann::json& j, RunReport& report) {
  report = RunReport{};
  report.solution = j.at("solution").get<std::string>();
  report.length = j.at("length").get<std::size_t>();
  report.levels = j.at("levels").get<std::size_t>();
  report.nodes_expanded = j.at("nodes_expanded").get<std::size_t>();
  report.children_generated = j.at("children_generated").get<std::size_t>();
  report.wall_time = std::chrono::nanoseconds(j.at("wall_ns").get<std::int64_t>());
  report.config = j.at("config").get<BeamConfig>();
  report.verified = j.at("verified").get<bool>();
  const auto& h = j.at("hyper");
  if (!h.is_null()) {
    HyperOutcome outcome;
    outcome.first = h.at("hf1").get<HeuristicSpec>();
    outcome.second = h.at("hf2").get<HeuristicSpec>();
    outcome.probe_first = h.at("probe_hf1").get<std::size_t>();
    outcome.probe_second = h.at("probe_hf2").get<std::size_t>();
    outcome.chosen = h.at("chosen").get<int>();
    report.hyper = outcome;
  }
}

}  // namespace mlcs

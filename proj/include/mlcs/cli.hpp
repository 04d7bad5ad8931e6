#pragma once

// Benchmark harness behind the `mlcs` executable. Everything is reachable
// in-process so tests can drive the subcommands without spawning processes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlcs/beam_search.hpp"
#include "mlcs/dataset_io.hpp"

namespace mlcs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDataset = 3;

/// Bad flag combination detected after parsing; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Runs one command line (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Manifest: one dataset per line, '#' starts a comment.
//   <path> <family> [format=plain|fasta] [alphabet=ACGT] [truncate=400] [name=...]
//   gen: <uncorr|corr> sigma=K n=N len=L seed=S [mutation=R] [name=...]
// Relative paths resolve against the manifest's directory.
struct ManifestEntry {
  std::string name;
  DatasetFamily family = DatasetFamily::Unknown;
  std::optional<std::filesystem::path> path;
  std::string format = "plain";
  std::string alphabet = "ACGT";
  std::optional<std::size_t> truncate;
  std::optional<GeneratorParams> generator;
};

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
Dataset load_entry(const ManifestEntry& entry);

/// CLI heuristic names: minlen, kguess, kanalytic, gcov, hh. kanalytic picks
/// its k rule from the family; kanalytic-uncorr / kanalytic-corr force one.
bool is_known_heuristic(const std::string& name);

/// Solves with a CLI heuristic name and returns the report.
RunReport solve_named(const Instance& inst, const std::string& heuristic, DatasetFamily family,
                      const BeamConfig& base);

struct SweepRow {
  std::string dataset;
  std::uint32_t sigma = 0;
  std::uint32_t n = 0;
  std::uint32_t len = 0;
  std::string heuristic;
  std::optional<std::size_t> length;  // empty when the cell failed
  double ms = 0.0;
  std::optional<std::uint64_t> seed;
  std::string error;
};

struct SweepAverage {
  std::string heuristic;
  double length = 0.0;
  double ms = 0.0;
  std::size_t count = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<SweepAverage> averages;  // one per heuristic, in request order
};

SweepReport run_sweep(const std::vector<ManifestEntry>& manifest,
                      const std::vector<std::string>& heuristics, const BeamConfig& base);
void write_sweep_csv(const SweepReport& report, std::ostream& out);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace mlcs::cli

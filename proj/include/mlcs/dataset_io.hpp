#pragma once

// Benchmark ingestion and synthesis.
//
// Plain format:
//   N |Σ|
//   <alphabet as one contiguous string>
//   <length> <string>      (N lines)

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlcs/heuristics.hpp"
#include "mlcs/instance.hpp"

namespace mlcs {

/// Dataset-level failure. `line()` is 0 when not tied to a line.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class DatasetFamily { Uncorrelated, Correlated, Unknown };

std::string to_string(DatasetFamily family);
std::optional<DatasetFamily> dataset_family_from_string(std::string_view name);

struct GeneratorParams {
  DatasetFamily family = DatasetFamily::Uncorrelated;
  std::uint32_t sigma_size = 4;
  std::uint32_t num_strings = 10;
  std::uint32_t length = 600;
  double mutation_rate = 0.0;  // correlated only
  std::uint64_t seed = 0;
};

struct DatasetDescriptor {
  std::string name;
  DatasetFamily family = DatasetFamily::Unknown;
  std::uint32_t sigma_size = 0;
  std::uint32_t num_strings = 0;
  std::vector<std::uint32_t> lengths;
  std::string source;  // file path, or "generator"
  std::optional<GeneratorParams> generator;
  std::vector<std::string> headers;  // FASTA record headers, in order
};

void to_json(nlohmann::json& j, const DatasetDescriptor& d);

struct Dataset {
  Instance instance;
  DatasetDescriptor descriptor;
};

Dataset parse_plain(std::istream& in, const std::string& name);
Dataset load_plain(const std::filesystem::path& path);
void save_plain(const Instance& inst, std::ostream& out);

struct FastaOptions {
  std::optional<std::size_t> truncate;  // keep only this prefix of each record
};
Dataset parse_fasta(std::istream& in, const Alphabet& alphabet, const std::string& name,
                    const FastaOptions& options = {});
Dataset load_fasta(const std::filesystem::path& path, const Alphabet& alphabet,
                   const FastaOptions& options = {});

/// N strings of length l with i.i.d. uniform symbols over the first |Σ|
/// letters. String i is drawn from stream i of the seed.
Instance gen_uncorrelated(std::uint32_t sigma_size, std::uint32_t num_strings, std::uint32_t length,
                          std::uint64_t seed);
/// One uniform base string; each output replaces every position, with
/// probability mutation_rate, by a fresh uniform symbol.
Instance gen_correlated(std::uint32_t sigma_size, std::uint32_t num_strings, std::uint32_t length,
                        double mutation_rate, std::uint64_t seed);
Dataset generate(const GeneratorParams& params);

/// Uncorrelated and Unknown select the max-based analytic k rule; Correlated
/// selects the min-minus-offset rule.
HeuristicKind default_k_rule(DatasetFamily family);

}  // namespace mlcs

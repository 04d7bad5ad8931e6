#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "mlcs/cli.hpp"

namespace mlcs::cli {

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& text, std::size_t line) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw DatasetError("manifest: bad value for '" + key + "': '" + text + "'", line);
  }
  return value;
}

std::pair<std::string, std::string> split_pair(const std::string& token, std::size_t line) {
  const auto eq = token.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw DatasetError("manifest: expected key=value, got '" + token + "'", line);
  }
  return {token.substr(0, eq), token.substr(eq + 1)};
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> entries;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    std::vector<std::string> parts;
    for (std::string tok; ss >> tok;) parts.push_back(std::move(tok));
    if (parts.empty()) continue;

    ManifestEntry entry;
    if (parts[0] == "gen:") {
      if (parts.size() < 2) throw DatasetError("manifest: gen line needs a family", number);
      const auto family = dataset_family_from_string(parts[1]);
      if (!family || *family == DatasetFamily::Unknown) {
        throw DatasetError("manifest: unknown generator family '" + parts[1] + "'", number);
      }
      GeneratorParams g;
      g.family = *family;
      bool has_seed = false;
      for (std::size_t t = 2; t < parts.size(); ++t) {
        const auto [key, value] = split_pair(parts[t], number);
        if (key == "sigma") g.sigma_size = parse_value<std::uint32_t>(key, value, number);
        else if (key == "n") g.num_strings = parse_value<std::uint32_t>(key, value, number);
        else if (key == "len") g.length = parse_value<std::uint32_t>(key, value, number);
        else if (key == "mutation") g.mutation_rate = parse_value<double>(key, value, number);
        else if (key == "seed") {
          g.seed = parse_value<std::uint64_t>(key, value, number);
          has_seed = true;
        } else if (key == "name") entry.name = value;
        else throw DatasetError("manifest: unknown generator key '" + key + "'", number);
      }
      if (!has_seed) throw DatasetError("manifest: generator lines need an explicit seed", number);
      entry.family = g.family;
      entry.generator = g;
      if (entry.name.empty()) entry.name = generate(g).descriptor.name;
    } else {
      if (parts.size() < 2) throw DatasetError("manifest: expected '<path> <family>'", number);
      std::filesystem::path path(parts[0]);
      if (path.is_relative()) path = base_dir / path;
      const auto family = dataset_family_from_string(parts[1]);
      if (!family) throw DatasetError("manifest: unknown family '" + parts[1] + "'", number);
      entry.path = path;
      entry.family = *family;
      entry.name = path.stem().string();
      for (std::size_t t = 2; t < parts.size(); ++t) {
        const auto [key, value] = split_pair(parts[t], number);
        if (key == "format") {
          if (value != "plain" && value != "fasta") {
            throw DatasetError("manifest: unknown format '" + value + "'", number);
          }
          entry.format = value;
        } else if (key == "alphabet") entry.alphabet = value;
        else if (key == "truncate") entry.truncate = parse_value<std::size_t>(key, value, number);
        else if (key == "name") entry.name = value;
        else throw DatasetError("manifest: unknown key '" + key + "'", number);
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

Dataset load_entry(const ManifestEntry& entry) {
  Dataset ds = [&] {
    if (entry.generator) return generate(*entry.generator);
    if (entry.format == "fasta") {
      return load_fasta(*entry.path, Alphabet(entry.alphabet), FastaOptions{entry.truncate});
    }
    return load_plain(*entry.path);
  }();
  ds.descriptor.name = entry.name;
  ds.descriptor.family = entry.family;
  return ds;
}

}  // namespace mlcs::cli

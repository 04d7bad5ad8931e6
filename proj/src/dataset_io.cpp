#include "mlcs/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mlcs/rng.hpp"

namespace mlcs {

namespace {

std::string with_line(const std::string& what, std::size_t line) {
  return line == 0 ? what : "line " + std::to_string(line) + ": " + what;
}

std::string trim(const std::string& s) {
  const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); });
  if (first >= last.base()) return {};
  return std::string(first, last.base());
}

struct NumberedLine {
  std::size_t number;
  std::string text;
};

std::vector<NumberedLine> nonblank_lines(std::istream& in) {
  std::vector<NumberedLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string t = trim(line);
    if (!t.empty()) out.push_back({number, std::move(t)});
  }
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(std::move(tok));
  return out;
}

std::uint64_t parse_count(const std::string& tok, std::size_t line, const char* what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw DatasetError(std::string("expected ") + what + ", got '" + tok + "'", line);
  }
  try {
    return std::stoull(tok);
  } catch (const std::out_of_range&) {
    throw DatasetError(std::string(what) + " out of range", line);
  }
}

DatasetDescriptor describe(const Instance& inst, std::string name, std::string source) {
  DatasetDescriptor d;
  d.name = std::move(name);
  d.sigma_size = static_cast<std::uint32_t>(inst.sigma());
  d.num_strings = static_cast<std::uint32_t>(inst.num_strings());
  d.lengths.assign(inst.lengths().begin(), inst.lengths().end());
  d.source = std::move(source);
  return d;
}

Instance build_or_throw(Alphabet alphabet, std::vector<std::string> strings) {
  try {
    return Instance::build(std::move(alphabet), std::move(strings));
  } catch (const InstanceError& e) {
    throw DatasetError(e.what());
  }
}

}  // namespace

DatasetError::DatasetError(const std::string& what, std::size_t line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

std::string to_string(DatasetFamily family) {
  switch (family) {
    case DatasetFamily::Uncorrelated: return "uncorr";
    case DatasetFamily::Correlated: return "corr";
    case DatasetFamily::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<DatasetFamily> dataset_family_from_string(std::string_view name) {
  if (name == "uncorr" || name == "uncorrelated") return DatasetFamily::Uncorrelated;
  if (name == "corr" || name == "correlated") return DatasetFamily::Correlated;
  if (name == "unknown") return DatasetFamily::Unknown;
  return std::nullopt;
}

HeuristicKind default_k_rule(DatasetFamily family) {
  return family == DatasetFamily::Correlated ? HeuristicKind::ProbKAnalyticCorr
                                             : HeuristicKind::ProbKAnalyticUncorr;
}

void to_json(nlohmann::json& j, const DatasetDescriptor& d) {
  j = nlohmann::json{{"name", d.name},
                     {"family", to_string(d.family)},
                     {"sigma", d.sigma_size},
                     {"n", d.num_strings},
                     {"lengths", d.lengths},
                     {"source", d.source}};
  if (d.generator) {
    const GeneratorParams& g = *d.generator;
    j["generator"] = {{"family", to_string(g.family)},
                      {"sigma", g.sigma_size},
                      {"n", g.num_strings},
                      {"len", g.length},
                      {"mutation_rate", g.mutation_rate},
                      {"seed", g.seed}};
  }
  if (!d.headers.empty()) j["headers"] = d.headers;
}

// ---------------------------------------------------------------------------
// Plain format

Dataset parse_plain(std::istream& in, const std::string& name) {
  const std::vector<NumberedLine> lines = nonblank_lines(in);
  if (lines.empty()) throw DatasetError("empty dataset file");

  const auto header = tokens(lines[0].text);
  if (header.size() != 2) {
    throw DatasetError("header must be 'N |Σ|'", lines[0].number);
  }
  const std::uint64_t count = parse_count(header[0], lines[0].number, "string count");
  const std::uint64_t sigma = parse_count(header[1], lines[0].number, "alphabet size");

  if (lines.size() < 2) throw DatasetError("missing alphabet line");
  const auto alpha_tokens = tokens(lines[1].text);
  if (alpha_tokens.size() != 1) {
    throw DatasetError("alphabet must be one contiguous string", lines[1].number);
  }
  if (alpha_tokens[0].size() != sigma) {
    throw DatasetError("alphabet has " + std::to_string(alpha_tokens[0].size()) +
                           " symbols, header declares " + std::to_string(sigma),
                       lines[1].number);
  }
  Alphabet alphabet;
  try {
    alphabet = Alphabet(alpha_tokens[0]);
  } catch (const InstanceError& e) {
    throw DatasetError(e.what(), lines[1].number);
  }

  if (lines.size() - 2 != count) {
    throw DatasetError("header declares " + std::to_string(count) + " strings, found " +
                       std::to_string(lines.size() - 2));
  }
  std::vector<std::string> strings;
  strings.reserve(count);
  for (std::size_t r = 2; r < lines.size(); ++r) {
    const auto& line = lines[r];
    const auto parts = tokens(line.text);
    if (parts.empty() || parts.size() > 2) {
      throw DatasetError("expected '<length> <string>'", line.number);
    }
    const std::uint64_t declared = parse_count(parts[0], line.number, "string length");
    std::string text = parts.size() == 2 ? parts[1] : std::string();
    if (text.size() != declared) {
      throw DatasetError("length mismatch: declared " + std::to_string(declared) + ", found " +
                             std::to_string(text.size()),
                         line.number);
    }
    for (std::size_t j = 0; j < text.size(); ++j) {
      if (!alphabet.contains(text[j])) {
        throw DatasetError(std::string("symbol '") + text[j] + "' at position " +
                               std::to_string(j) + " is not in the alphabet",
                           line.number);
      }
    }
    strings.push_back(std::move(text));
  }

  Instance inst = build_or_throw(std::move(alphabet), std::move(strings));
  DatasetDescriptor d = describe(inst, name, name);
  return Dataset{std::move(inst), std::move(d)};
}

Dataset load_plain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path.string());
  Dataset ds = parse_plain(in, path.string());
  ds.descriptor.name = path.stem().string();
  return ds;
}

void save_plain(const Instance& inst, std::ostream& out) {
  out << inst.num_strings() << ' ' << inst.sigma() << '\n' << inst.alphabet().symbols() << '\n';
  for (const std::string& text : inst.texts()) {
    out << text.size();
    if (!text.empty()) out << ' ' << text;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// FASTA

Dataset parse_fasta(std::istream& in, const Alphabet& alphabet, const std::string& name,
                    const FastaOptions& options) {
  std::vector<std::string> headers;
  std::vector<std::string> strings;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';') continue;
    if (t[0] == '>') {
      headers.push_back(trim(t.substr(1)));
      strings.emplace_back();
      continue;
    }
    if (headers.empty()) throw DatasetError("sequence data before the first '>' header", number);
    for (char c : t) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (!alphabet.contains(up)) {
        throw DatasetError("record '" + headers.back() + "' contains symbol '" + c +
                               "' outside the alphabet " + alphabet.symbols(),
                           number);
      }
      strings.back().push_back(up);
    }
  }
  if (headers.empty()) throw DatasetError("no FASTA records found");
  if (options.truncate) {
    for (auto& s : strings) {
      if (s.size() > *options.truncate) s.resize(*options.truncate);
    }
  }

  Instance inst = build_or_throw(alphabet, std::move(strings));
  DatasetDescriptor d = describe(inst, name, name);
  d.headers = std::move(headers);
  return Dataset{std::move(inst), std::move(d)};
}

Dataset load_fasta(const std::filesystem::path& path, const Alphabet& alphabet,
                   const FastaOptions& options) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path.string());
  Dataset ds = parse_fasta(in, alphabet, path.string(), options);
  ds.descriptor.name = path.stem().string();
  return ds;
}

// ---------------------------------------------------------------------------
// Generators

Instance gen_uncorrelated(std::uint32_t sigma_size, std::uint32_t num_strings, std::uint32_t length,
                          std::uint64_t seed) {
  const Alphabet alphabet = Alphabet::first_letters(sigma_size);
  const Xoshiro256 root(seed);
  std::vector<std::string> strings(num_strings);
  for (std::uint32_t i = 0; i < num_strings; ++i) {
    Xoshiro256 rng = root.split(i);
    strings[i].resize(length);
    for (auto& c : strings[i]) c = alphabet.symbol(static_cast<Symbol>(rng.below(sigma_size)));
  }
  return Instance::build(alphabet, std::move(strings));
}

Instance gen_correlated(std::uint32_t sigma_size, std::uint32_t num_strings, std::uint32_t length,
                        double mutation_rate, std::uint64_t seed) {
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation rate must lie in [0, 1]");
  }
  const Alphabet alphabet = Alphabet::first_letters(sigma_size);
  const Xoshiro256 root(seed);
  Xoshiro256 base_rng = root.split(0);
  std::string base(length, '\0');
  for (auto& c : base) c = alphabet.symbol(static_cast<Symbol>(base_rng.below(sigma_size)));

  std::vector<std::string> strings(num_strings, base);
  for (std::uint32_t i = 0; i < num_strings; ++i) {
    Xoshiro256 rng = root.split(std::uint64_t{i} + 1);
    for (auto& c : strings[i]) {
      if (rng.unit() < mutation_rate) c = alphabet.symbol(static_cast<Symbol>(rng.below(sigma_size)));
    }
  }
  return Instance::build(alphabet, std::move(strings));
}

Dataset generate(const GeneratorParams& params) {
  Instance inst = params.family == DatasetFamily::Correlated
                      ? gen_correlated(params.sigma_size, params.num_strings, params.length,
                                       params.mutation_rate, params.seed)
                      : gen_uncorrelated(params.sigma_size, params.num_strings, params.length,
                                         params.seed);
  std::ostringstream name;
  name << (params.family == DatasetFamily::Correlated ? "corr" : "uncorr") << '_'
       << params.sigma_size << '_' << params.num_strings << '_' << params.length << "_s"
       << params.seed;
  DatasetDescriptor d = describe(inst, name.str(), "generator");
  d.family = params.family;
  d.generator = params;
  return Dataset{std::move(inst), std::move(d)};
}

}  // namespace mlcs

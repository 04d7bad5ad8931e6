#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "mlcs/cli.hpp"
#include "mlcs/exact_oracle.hpp"
#include "mlcs/prob_kernel.hpp"

namespace mlcs::cli {

namespace {

constexpr std::array<const char*, 7> kHeuristicNames = {
    "minlen", "kguess", "kanalytic", "kanalytic-uncorr", "kanalytic-corr", "gcov", "hh"};

struct DatasetOptions {
  std::string input;
  std::string format = "plain";
  std::string alphabet = "ACGT";
  std::optional<std::size_t> truncate;
  std::string gen;
  std::uint32_t sigma = 4;
  std::uint32_t n = 10;
  std::uint32_t len = 600;
  double mutation = 0.1;
  std::optional<std::uint64_t> seed;
  std::string family;
};

struct BeamOptions {
  std::uint32_t beta = 200;
  std::optional<std::uint32_t> beta_h;  // defaults to min(60, beta)
  bool dominance = false;
  unsigned threads = 1;
};

void add_dataset_options(CLI::App* cmd, DatasetOptions& o) {
  cmd->add_option("--input", o.input, "Dataset file");
  cmd->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"plain", "fasta"}));
  cmd->add_option("--alphabet", o.alphabet, "Alphabet for FASTA input");
  cmd->add_option("--truncate", o.truncate, "Keep only this prefix of each FASTA record");
  cmd->add_option("--gen", o.gen, "Generate an instance instead of reading one")
      ->check(CLI::IsMember({"uncorr", "corr"}));
  cmd->add_option("--sigma", o.sigma, "Generated alphabet size");
  cmd->add_option("--n", o.n, "Generated string count");
  cmd->add_option("--len", o.len, "Generated string length");
  cmd->add_option("--mutation", o.mutation, "Per-position mutation rate for --gen corr");
  cmd->add_option("--seed", o.seed, "Generator seed (required with --gen)");
  cmd->add_option("--family", o.family, "Dataset family; selects the analytic k rule")
      ->check(CLI::IsMember({"uncorr", "corr"}));
}

void add_beam_options(CLI::App* cmd, BeamOptions& o) {
  cmd->add_option("--beta", o.beta, "Beam width")->capture_default_str();
  cmd->add_option("--beta-h", o.beta_h, "Probe beam width for hh (default 60)");
  cmd->add_flag("--dominance-filter", o.dominance, "Merge children with identical cursors");
  cmd->add_option("--threads", o.threads, "Scoring threads");
}

BeamConfig to_config(const BeamOptions& o) {
  BeamConfig c;
  c.beam_width = o.beta;
  c.probe_width = o.beta_h ? *o.beta_h : std::min(60u, o.beta);
  c.dominance_filter = o.dominance;
  c.threads = std::max(1u, o.threads);
  return c;
}

Dataset load_dataset(const DatasetOptions& o) {
  const bool has_input = !o.input.empty();
  const bool has_gen = !o.gen.empty();
  if (has_input == has_gen) throw UsageError("give exactly one of --input or --gen");
  Dataset ds = [&] {
    if (has_gen) {
      if (!o.seed) throw UsageError("--gen requires an explicit --seed");
      GeneratorParams g;
      g.family = *dataset_family_from_string(o.gen);
      g.sigma_size = o.sigma;
      g.num_strings = o.n;
      g.length = o.len;
      g.mutation_rate = o.mutation;
      g.seed = *o.seed;
      return generate(g);
    }
    if (o.format == "fasta") {
      return load_fasta(o.input, Alphabet(o.alphabet), FastaOptions{o.truncate});
    }
    return load_plain(o.input);
  }();
  if (!o.family.empty()) ds.descriptor.family = *dataset_family_from_string(o.family);
  return ds;
}

std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& text, std::uint32_t* step) {
  std::vector<std::uint32_t> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    const std::string piece = text.substr(start, colon == std::string::npos ? std::string::npos
                                                                            : colon - start);
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size()) {
      throw UsageError("bad range '" + text + "', expected A:B");
    }
    parts.push_back(v);
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > (step ? 3u : 2u)) {
    throw UsageError("bad range '" + text + "', expected A:B");
  }
  if (parts[0] > parts[1]) throw UsageError("range start exceeds range end");
  if (step) {
    *step = parts.size() == 3 ? parts[2] : 1;
    if (*step == 0) throw UsageError("range step must be positive");
  }
  return {parts[0], parts[1]};
}

HeuristicSpec analytic_for(DatasetFamily family, const HeuristicConstants& constants) {
  HeuristicSpec s;
  s.kind = default_k_rule(family);
  s.constants = constants;
  return s;
}

std::string display_name(const HeuristicSpec& spec) {
  switch (spec.kind) {
    case HeuristicKind::ProbKAnalyticUncorr:
    case HeuristicKind::ProbKAnalyticCorr:
      return "kanalytic";
    default:
      return to_string(spec.kind);
  }
}

void print_report(const Dataset& ds, const RunReport& r, const std::string& heuristic,
                  std::ostream& out) {
  out << "dataset:    " << ds.descriptor.name << " (|S|=" << ds.descriptor.num_strings
      << ", |Sigma|=" << ds.descriptor.sigma_size << ", family=" << to_string(ds.descriptor.family)
      << ")\n";
  out << "heuristic:  " << heuristic << " [" << to_string(r.config.heuristic.kind) << "]\n";
  if (r.hyper) {
    out << "probes:     " << display_name(r.hyper->first) << "=" << r.hyper->probe_first << " "
        << display_name(r.hyper->second) << "=" << r.hyper->probe_second
        << " -> chosen_heuristic=" << display_name(r.hyper->chosen_spec()) << "\n";
  }
  out << "beta:       " << r.config.beam_width << " (beta_h " << r.config.probe_width << ")\n";
  out << "length:     " << r.length << "\n";
  out << "levels:     " << r.levels << "\n";
  out << "expanded:   " << r.nodes_expanded << "\n";
  out << "wall_ms:    " << format_number(r.wall_ms()) << "\n";
  out << "verified:   " << (r.verified ? "yes" : "no") << "\n";
  out << "solution:   " << r.solution << "\n";
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void require_known(const std::vector<std::string>& heuristics) {
  for (const auto& h : heuristics) {
    if (!is_known_heuristic(h)) throw UsageError("unknown heuristic '" + h + "'");
  }
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_solve(const DatasetOptions& data, const BeamOptions& beam, const std::string& heuristic,
              const std::string& config_path, bool json, std::ostream& out, std::ostream& err) {
  Dataset ds = load_dataset(data);
  BeamConfig base = to_config(beam);
  HeuristicConstants constants;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot open heuristic config " + config_path);
    const auto spec = nlohmann::json::parse(in).get<HeuristicSpec>();
    constants = spec.constants;
  }
  base.heuristic.constants = constants;
  const RunReport report = solve_named(ds.instance, heuristic, ds.descriptor.family, base);
  if (!report.verified) {
    err << "error: solution failed the common-subsequence check\n";
    return kExitFailure;
  }
  if (json) {
    nlohmann::json j{{"dataset", ds.descriptor}, {"heuristic", heuristic}, {"report", report}};
    if (report.hyper) j["chosen_heuristic"] = display_name(report.hyper->chosen_spec());
    out << j.dump(2) << "\n";
  } else {
    print_report(ds, report, heuristic, out);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& manifest, const std::string& heuristics, const std::string& out_path,
              const BeamOptions& beam, std::ostream& out, std::ostream& err) {
  const auto list = split_list(heuristics);
  require_known(list);
  const auto entries = load_manifest(manifest);
  const SweepReport report = run_sweep(entries, list, to_config(beam));
  if (out_path.empty()) {
    write_sweep_csv(report, out);
  } else {
    std::ofstream file(out_path);
    if (!file) throw UsageError("cannot write " + out_path);
    write_sweep_csv(report, file);
  }
  bool failed = false;
  for (const auto& row : report.rows) {
    if (!row.length) {
      err << "error: " << row.dataset << " / " << row.heuristic << ": " << row.error << "\n";
      failed = true;
    }
  }
  return failed ? kExitFailure : kExitOk;
}

int cmd_probe(std::uint32_t sigma, std::uint32_t n, const std::string& range,
              const std::string& method, const std::string& mode_name, bool q, bool log_output,
              std::ostream& out) {
  const auto [k_lo, k_hi] = parse_range(range, nullptr);
  NumericMode mode = NumericMode::Auto;
  if (mode_name == "linear") mode = NumericMode::Linear;
  else if (mode_name == "log") mode = NumericMode::LogSpace;
  else if (mode_name == "exact") mode = NumericMode::ExactRational;
  const AlphabetParams params(sigma);
  const NumericMode resolved = resolve_mode(mode, n, sigma);

  std::shared_ptr<const ProbTable> table;
  std::optional<ExactProbTable> exact;
  if (!q && method == "table") {
    if (resolved == NumericMode::ExactRational) exact.emplace(sigma, n);
    else table = cached_table(sigma, n);
  }

  std::ostringstream buffer;
  buffer << "k,value\n";
  for (std::uint32_t k = k_lo; k <= k_hi; ++k) {
    double value = 0.0;
    if (q) {
      const double raw = q_value(k, n, params, resolved);
      const bool is_log = resolved == NumericMode::LogSpace;
      value = log_output ? (is_log ? raw : std::log(raw)) : (is_log ? std::exp(raw) : raw);
    } else {
      if (method == "table") value = exact ? exact->to_double(k, n) : table->p(k, n);
      else if (method == "closed") value = p_closed(k, n, params, resolved);
      else if (method == "closed2") value = p_closed_formII(k, n, params, resolved);
      else value = p_beta_form(k, n, params, resolved);
      if (log_output) value = std::log(value);
    }
    buffer << k << ',' << format_number(value) << '\n';
    if (k == k_hi) break;
  }
  out << buffer.str();
  return kExitOk;
}

int cmd_ksweep(const DatasetOptions& data, const BeamOptions& beam, const std::string& range,
               std::ostream& out) {
  std::uint32_t step = 1;
  const auto [k_lo, k_hi] = parse_range(range, &step);
  const Dataset ds = load_dataset(data);
  BeamConfig config = to_config(beam);
  config.heuristic.kind = HeuristicKind::ProbFixedK;
  out << "k,length\n";
  for (std::uint64_t k = k_lo; k <= k_hi; k += step) {
    config.heuristic.fixed_k = static_cast<std::uint32_t>(k);
    const RunReport r = beam_search(ds.instance, config);
    if (!r.verified) throw std::runtime_error("solution failed the common-subsequence check");
    out << k << ',' << r.length << '\n';
  }
  return kExitOk;
}

int cmd_timing(const std::string& manifest, const std::string& heuristics, unsigned repeats,
               const BeamOptions& beam, std::ostream& out) {
  if (repeats == 0) throw UsageError("--repeats must be positive");
  const auto list = split_list(heuristics);
  require_known(list);
  const auto entries = load_manifest(manifest);
  const BeamConfig base = to_config(beam);
  out << "dataset,sigma,n,heuristic,ms\n";
  for (const auto& entry : entries) {
    const Dataset ds = load_entry(entry);
    for (const auto& h : list) {
      std::vector<double> samples;
      for (unsigned r = 0; r < repeats; ++r) {
        const RunReport report = solve_named(ds.instance, h, ds.descriptor.family, base);
        if (!report.verified) throw std::runtime_error("solution failed the common-subsequence check");
        samples.push_back(report.wall_ms());
      }
      out << ds.descriptor.name << ',' << ds.descriptor.sigma_size << ','
          << ds.descriptor.num_strings << ',' << h << ',' << format_number(median(samples)) << '\n';
    }
  }
  return kExitOk;
}

int cmd_oracle(const DatasetOptions& data, bool json, std::ostream& out) {
  const Dataset ds = load_dataset(data);
  const Instance& inst = ds.instance;
  nlohmann::json j{{"dataset", ds.descriptor.name}, {"n", inst.num_strings()}};
  if (inst.num_strings() == 2) {
    const auto r = exact_lcs2(inst.text(0), inst.text(1));
    j["method"] = "dp2";
    j["length"] = r.length;
    j["witness"] = r.witness;
  } else if (inst.num_strings() == 3) {
    j["method"] = "dp3";
    j["length"] = exact_lcs3(inst.text(0), inst.text(1), inst.text(2));
  } else {
    j["method"] = "exhaustive";
    j["length"] = exhaustive_lcs(inst.texts());
  }
  if (json) {
    out << j.dump(2) << "\n";
  } else {
    out << "method: " << j["method"].get<std::string>() << "\nlength: " << j["length"] << "\n";
    if (j.contains("witness")) out << "witness: " << j["witness"].get<std::string>() << "\n";
  }
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

bool is_known_heuristic(const std::string& name) {
  return std::find(kHeuristicNames.begin(), kHeuristicNames.end(), name) != kHeuristicNames.end();
}

RunReport solve_named(const Instance& inst, const std::string& heuristic, DatasetFamily family,
                      const BeamConfig& base) {
  BeamConfig config = base;
  const HeuristicConstants constants = base.heuristic.constants;
  config.heuristic = HeuristicSpec{};
  config.heuristic.constants = constants;
  if (heuristic == "hh") {
    HeuristicSpec gcov;
    gcov.kind = HeuristicKind::GCoV;
    gcov.constants = constants;
    return hyper_heuristic(inst, config, analytic_for(family, constants), gcov);
  }
  if (heuristic == "kanalytic") {
    config.heuristic = analytic_for(family, constants);
  } else {
    const auto kind = heuristic_kind_from_string(heuristic);
    if (!kind || *kind == HeuristicKind::ProbFixedK) {
      throw UsageError("unknown heuristic '" + heuristic + "'");
    }
    config.heuristic.kind = *kind;
  }
  return beam_search(inst, config);
}

SweepReport run_sweep(const std::vector<ManifestEntry>& manifest,
                      const std::vector<std::string>& heuristics, const BeamConfig& base) {
  SweepReport report;
  for (const auto& entry : manifest) {
    std::optional<Dataset> ds;
    std::string load_error;
    try {
      ds = load_entry(entry);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (const auto& h : heuristics) {
      SweepRow row;
      row.dataset = entry.name;
      row.heuristic = h;
      if (entry.generator) row.seed = entry.generator->seed;
      if (!ds) {
        row.error = load_error;
        report.rows.push_back(std::move(row));
        continue;
      }
      row.sigma = ds->descriptor.sigma_size;
      row.n = ds->descriptor.num_strings;
      row.len = ds->instance.max_length();
      try {
        const RunReport r = solve_named(ds->instance, h, ds->descriptor.family, base);
        if (!r.verified) throw std::runtime_error("solution failed the common-subsequence check");
        row.length = r.length;
        row.ms = r.wall_ms();
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      report.rows.push_back(std::move(row));
    }
  }
  for (const auto& h : heuristics) {
    SweepAverage avg;
    avg.heuristic = h;
    for (const auto& row : report.rows) {
      if (row.heuristic != h || !row.length) continue;
      avg.length += static_cast<double>(*row.length);
      avg.ms += row.ms;
      ++avg.count;
    }
    if (avg.count > 0) {
      avg.length /= static_cast<double>(avg.count);
      avg.ms /= static_cast<double>(avg.count);
      report.averages.push_back(avg);
    }
  }
  return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "dataset,sigma,n,len,heuristic,length,ms,seed\n";
  for (const auto& row : report.rows) {
    out << row.dataset << ',';
    if (row.length) {
      out << row.sigma << ',' << row.n << ',' << row.len << ',' << row.heuristic << ','
          << *row.length << ',' << format_number(row.ms) << ',';
    } else {
      out << ",,," << row.heuristic << ",,,";
    }
    if (row.seed) out << *row.seed;
    out << '\n';
  }
  for (const auto& avg : report.averages) {
    out << "average,,,," << avg.heuristic << ',' << format_number(avg.length) << ','
        << format_number(avg.ms) << ",\n";
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple longest common subsequence: beam search solver and benchmark harness",
               "mlcs"};
  app.require_subcommand(1);

  DatasetOptions data;
  BeamOptions beam;
  std::string heuristic = "kanalytic";
  std::string heuristic_config;
  bool json = false;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  add_dataset_options(solve, data);
  add_beam_options(solve, beam);
  solve->add_option("--heuristic", heuristic, "minlen|kguess|kanalytic|gcov|hh")
      ->check(CLI::IsMember(std::vector<std::string>(kHeuristicNames.begin(), kHeuristicNames.end())))
      ->capture_default_str();
  solve->add_option("--heuristic-config", heuristic_config, "JSON file with heuristic constants");
  solve->add_flag("--json", json, "Emit the report as JSON");

  std::string manifest;
  std::string heuristics = "kguess,kanalytic,gcov,hh";
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Run heuristics over a dataset manifest, CSV out");
  sweep->add_option("--manifest", manifest, "Manifest file")->required();
  sweep->add_option("--heuristics", heuristics, "Comma-separated heuristic list")->capture_default_str();
  sweep->add_option("--out", out_path, "CSV destination (default stdout)");
  add_beam_options(sweep, beam);

  std::uint32_t sigma = 4;
  std::uint32_t n = 200;
  std::string range = "0:200";
  std::string method = "table";
  std::string mode = "auto";
  bool q = false;
  bool log_output = false;
  auto* probe = app.add_subcommand("probe", "Emit p(k,n) or q(k,n) as CSV");
  probe->add_option("--sigma", sigma, "Alphabet size")->required();
  probe->add_option("--n", n, "String length")->required();
  probe->add_option("--k-range", range, "A:B, inclusive")->required();
  probe->add_option("--method", method, "table|closed|closed2|beta")
      ->check(CLI::IsMember({"table", "closed", "closed2", "beta"}));
  probe->add_option("--mode", mode, "auto|linear|log|exact")
      ->check(CLI::IsMember({"auto", "linear", "log", "exact"}));
  probe->add_flag("--q", q, "Emit q(k,n) instead of p(k,n)");
  probe->add_flag("--log", log_output, "Emit natural logarithms");

  DatasetOptions ksweep_data;
  BeamOptions ksweep_beam;
  std::string k_range = "1:50";
  auto* ksweep = app.add_subcommand("ksweep", "Beam length for each constant k, CSV out");
  add_dataset_options(ksweep, ksweep_data);
  add_beam_options(ksweep, ksweep_beam);
  ksweep->add_option("--k-range", k_range, "A:B or A:B:step")->required();

  unsigned repeats = 3;
  std::string timing_manifest;
  std::string timing_heuristics = "kanalytic,gcov,hh";
  BeamOptions timing_beam;
  auto* timing = app.add_subcommand("timing", "Median beam-search wall time per dataset, CSV out");
  timing->add_option("--manifest", timing_manifest, "Manifest file")->required();
  timing->add_option("--heuristics", timing_heuristics, "Comma-separated heuristic list");
  timing->add_option("--repeats", repeats, "Runs per cell")->capture_default_str();
  add_beam_options(timing, timing_beam);

  DatasetOptions oracle_data;
  bool oracle_json = false;
  auto* oracle = app.add_subcommand("oracle", "Exact LCS for 2 or 3 strings, brute force beyond");
  add_dataset_options(oracle, oracle_data);
  oracle->add_flag("--json", oracle_json, "Emit JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(data, beam, heuristic, heuristic_config, json, out, err);
    if (*sweep) return cmd_sweep(manifest, heuristics, out_path, beam, out, err);
    if (*probe) return cmd_probe(sigma, n, range, method, mode, q, log_output, out);
    if (*ksweep) return cmd_ksweep(ksweep_data, ksweep_beam, k_range, out);
    if (*timing) return cmd_timing(timing_manifest, timing_heuristics, repeats, timing_beam, out);
    if (*oracle) return cmd_oracle(oracle_data, oracle_json, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DatasetError& e) {
    err << "dataset error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const InstanceError& e) {
    err << "dataset error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mlcs::cli

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlcs/cli.hpp"
#include "mlcs/exact_oracle.hpp"

using namespace mlcs;

namespace {

const std::string kData = MLCS_TEST_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

bool is_decimal(const std::string& cell) {
  if (cell.empty()) return false;
  std::size_t used = 0;
  try {
    (void)std::stod(cell, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == cell.size();
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("solve: generated greedy run stays below the exact LCS") {
  const Result r = run({"solve", "--gen", "uncorr", "--sigma", "4", "--n", "2", "--len", "50", "--seed", "1",
                        "--heuristic", "minlen", "--beta", "1", "--beta-h", "1", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const Instance inst = gen_uncorrelated(4, 2, 50, 1);
  const auto report = j.at("report").get<RunReport>();
  CHECK(report.verified);
  CHECK(report.length <= exact_lcs2(inst.text(0), inst.text(1)).length);
  CHECK(verify_solution(inst, report.solution));
}

TEST_CASE("solve: hh reports its chosen heuristic") {
  for (const std::string family : {"uncorr", "corr"}) {
    const Result r = run({"solve", "--gen", family, "--sigma", "4", "--n", "5", "--len", "120", "--seed", "2",
                          "--heuristic", "hh", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const std::string chosen = j.at("chosen_heuristic");
    CHECK((chosen == "kanalytic" || chosen == "gcov"));
    CHECK(j.at("report").at("verified") == true);
  }
}

TEST_CASE("solve: plain file and human output") {
  const Result r = run({"solve", "--input", kData + "/example.txt", "--heuristic", "gcov"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("verified:   yes") != std::string::npos);
  CHECK(r.out.find("length:     ") != std::string::npos);
}

TEST_CASE("solve: json report round trips") {
  const Result r = run({"solve", "--gen", "uncorr", "--sigma", "4", "--n", "4", "--len", "60", "--seed", "5",
                        "--json"});
  REQUIRE(r.code == 0);
  const auto first = nlohmann::json::parse(r.out);
  const auto report = first.at("report").get<RunReport>();
  CHECK(nlohmann::json(report) == first.at("report"));
}

TEST_CASE("solve: heuristic constants from a config file") {
  const auto cfg = temp_file("mlcs_cfg.json", R"({"kind": "kanalytic-corr", "c": 5})");
  const Result r = run({"solve", "--gen", "corr", "--sigma", "4", "--n", "4", "--len", "60", "--seed", "5",
                        "--heuristic", "kanalytic", "--heuristic-config", cfg.string(), "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("report").at("config").at("heuristic").at("c") == 5.0);
  CHECK(j.at("report").at("config").at("heuristic").at("kind") == "kanalytic-corr");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"solve", "--gen", "uncorr"}).code == 2);  // missing seed
  CHECK(run({"solve", "--heuristic", "nope", "--input", kData + "/example.txt"}).code == 2);
  CHECK(run({"solve", "--beta", "abc", "--input", kData + "/example.txt"}).code == 2);
  CHECK(run({"solve", "--input", kData + "/example.txt", "--beta", "10", "--beta-h", "20", "--heuristic",
             "hh"}).code == 2);
  CHECK(run({"solve", "--input", kData + "/missing.txt"}).code == 3);
  const auto broken = temp_file("mlcs_broken.txt", "2 3\nABC\n9 BCABAABC\n8 CAACBBAA\n");
  const Result b = run({"solve", "--input", broken.string()});
  CHECK(b.code == 3);
  CHECK(b.err.find("length mismatch") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("probe: q curve rows") {
  const Result r = run({"probe", "--sigma", "4", "--n", "200", "--k-range", "0:200", "--q"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 202);
  CHECK(rows[0] == std::vector<std::string>{"k", "value"});
  CHECK(rows[1] == std::vector<std::string>{"0", "0"});
  CHECK(rows[2] == std::vector<std::string>{"1", "1"});
}

TEST_CASE("probe: closed form matches the table") {
  const Result closed = run({"probe", "--sigma", "4", "--n", "200", "--k-range", "0:200", "--method", "closed"});
  const Result table = run({"probe", "--sigma", "4", "--n", "200", "--k-range", "0:200", "--method", "table"});
  REQUIRE(closed.code == 0);
  REQUIRE(table.code == 0);
  const auto a = csv(closed.out);
  const auto b = csv(table.out);
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(a[i][0] == b[i][0]);
    worst = std::max(worst, std::abs(std::stod(a[i][1]) - std::stod(b[i][1])));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("probe: single value and errors") {
  const Result r = run({"probe", "--sigma", "4", "--n", "3", "--k-range", "2:2", "--method", "beta"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "k,value\n2,0.15625\n");
  CHECK(run({"probe", "--sigma", "4", "--n", "3", "--k-range", "3:2"}).code == 2);
  CHECK(run({"probe", "--sigma", "4", "--n", "3", "--k-range", "1-2"}).code == 2);
  CHECK(run({"probe", "--sigma", "4", "--n", "3", "--k-range", "1:5", "--q"}).code == 2);
  CHECK(run({"probe", "--sigma", "1", "--n", "3", "--k-range", "1:2", "--method", "beta"}).code == 2);
  const Result exact = run({"probe", "--sigma", "4", "--n", "3", "--k-range", "2:2", "--mode", "exact"});
  CHECK(exact.out == "k,value\n2,0.15625\n");
}

TEST_CASE("ksweep") {
  const Result one = run({"ksweep", "--gen", "uncorr", "--sigma", "4", "--n", "4", "--len", "80", "--seed", "1",
                          "--k-range", "1:1"});
  REQUIRE(one.code == 0);
  CHECK(csv(one.out).size() == 2);
  const Result steps = run({"ksweep", "--gen", "uncorr", "--sigma", "4", "--n", "4", "--len", "80", "--seed",
                            "1", "--k-range", "2:20:6", "--beta", "20"});
  REQUIRE(steps.code == 0);
  const auto rows = csv(steps.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"k", "length"});
  CHECK(rows[1][0] == "2");
  CHECK(rows[4][0] == "20");
}

TEST_CASE("sweep: empty manifest") {
  const Result r = run({"sweep", "--manifest", kData + "/empty_manifest.txt", "--heuristics", "kguess"});
  CHECK(r.code == 0);
  CHECK(r.out == "dataset,sigma,n,len,heuristic,length,ms,seed\n");
}

TEST_CASE("sweep: schema and averages") {
  const Result r = run({"sweep", "--manifest", kData + "/manifest.txt", "--heuristics", "kguess,kanalytic,hh",
                        "--beta", "50", "--beta-h", "10"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 1 + 9 + 3);
  CHECK(rows[0] == std::vector<std::string>{"dataset", "sigma", "n", "len", "heuristic", "length", "ms", "seed"});
  std::map<std::string, std::vector<double>> lengths;
  for (std::size_t i = 1; i <= 9; ++i) {
    REQUIRE(rows[i].size() == 8);
    for (std::size_t col : {1u, 2u, 3u, 5u, 6u}) CHECK(is_decimal(rows[i][col]));
    lengths[rows[i][4]].push_back(std::stod(rows[i][5]));
  }
  CHECK(rows[1][0] == "example");
  CHECK(rows[4][0] == "genomes60");
  CHECK(rows[4][3] == "60");
  CHECK(rows[7][7] == "3");
  CHECK(rows[1][7].empty());
  for (std::size_t i = 10; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 8);
    CHECK(rows[i][0] == "average");
    const auto& v = lengths[rows[i][4]];
    const double mean = (v[0] + v[1] + v[2]) / 3.0;
    CHECK(std::abs(std::stod(rows[i][5]) - mean) <= 1e-9);
  }
}

TEST_CASE("sweep: failures are reported and exit 1") {
  const auto manifest = temp_file("mlcs_bad_manifest.txt", std::string(kData) + "/missing.txt uncorr\n" +
                                                               std::string(kData) + "/example.txt unknown\n");
  const Result r = run({"sweep", "--manifest", manifest.string(), "--heuristics", "kguess"});
  CHECK(r.code == 1);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][0] == "missing");
  CHECK(rows[1][5].empty());
  CHECK(rows[2][0] == "example");
  CHECK_FALSE(rows[2][5].empty());
  CHECK(r.err.find("missing") != std::string::npos);
  CHECK(run({"sweep", "--manifest", manifest.string(), "--heuristics", "bogus"}).code == 2);
}

TEST_CASE("manifest parsing") {
  std::istringstream in("# comment\n\na.txt corr format=fasta truncate=400 alphabet=ACGT\n"
                        "gen: uncorr sigma=4 n=3 len=10 seed=9 name=g\n");
  const auto entries = cli::parse_manifest(in, "/base");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].path == std::filesystem::path("/base/a.txt"));
  CHECK(entries[0].family == DatasetFamily::Correlated);
  CHECK(entries[0].truncate == std::size_t{400});
  CHECK(entries[1].name == "g");
  CHECK(entries[1].generator->seed == 9u);

  std::istringstream no_seed("gen: uncorr sigma=4 n=3 len=10\n");
  CHECK_THROWS_AS(cli::parse_manifest(no_seed, "."), DatasetError);
  std::istringstream bad_key("a.txt corr colour=blue\n");
  CHECK_THROWS_AS(cli::parse_manifest(bad_key, "."), DatasetError);
}

TEST_CASE("timing") {
  const Result r = run({"timing", "--manifest", kData + "/manifest.txt", "--heuristics", "kanalytic,gcov",
                        "--repeats", "1", "--beta", "20", "--beta-h", "5"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 1 + 6);
  CHECK(rows[0] == std::vector<std::string>{"dataset", "sigma", "n", "heuristic", "ms"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(is_decimal(rows[i][4]));
  CHECK(run({"timing", "--manifest", kData + "/manifest.txt", "--repeats", "0"}).code == 2);
}

TEST_CASE("oracle") {
  const Result r = run({"oracle", "--input", kData + "/example.txt", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("method") == "dp2");
  CHECK(j.at("length") == exact_lcs2("BCABAABC", "CAACBBAA").length);
  const Result four = run({"oracle", "--gen", "uncorr", "--sigma", "2", "--n", "4", "--len", "12", "--seed", "3"});
  CHECK(four.code == 0);
  CHECK(four.out.find("exhaustive") != std::string::npos);
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.0, 1.0, 0.15625, 1.0 / 3.0, 9.5367431640625e-07, 123456.789}) {
    CHECK(std::stod(cli::format_number(v)) == v);
  }
  CHECK(cli::format_number(2.0) == "2");
}

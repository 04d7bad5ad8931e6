#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "mlcs/beam_search.hpp"
#include "mlcs/dataset_io.hpp"
#include "mlcs/exact_oracle.hpp"
#include "mlcs/rng.hpp"

using namespace mlcs;

namespace {

BeamConfig with(HeuristicKind kind, std::uint32_t width = 200) {
  BeamConfig c;
  c.beam_width = width;
  c.probe_width = std::min<std::uint32_t>(60, width);
  c.heuristic.kind = kind;
  return c;
}

const HeuristicKind kAllKinds[] = {HeuristicKind::MinLen, HeuristicKind::ProbKGuess,
                                   HeuristicKind::ProbKAnalyticUncorr, HeuristicKind::ProbKAnalyticCorr,
                                   HeuristicKind::GCoV};

}  // namespace

TEST_CASE("identical strings") {
  const Instance inst = Instance::build(Alphabet("AB"), {"AB", "AB"});
  for (auto kind : kAllKinds) {
    for (std::uint32_t width : {1u, 5u}) {
      const RunReport r = beam_search(inst, with(kind, width));
      CHECK(r.solution == "AB");
      CHECK(r.length == 2);
      CHECK(r.verified);
    }
  }
}

TEST_CASE("small instance reaches the exhaustive optimum") {
  const Instance inst = Instance::build(Alphabet("ABC"), {"ABC", "BCA"});
  const RunReport r = beam_search(inst, with(HeuristicKind::MinLen, 3));
  CHECK(r.length == exhaustive_lcs(inst.texts()));
  CHECK(r.length == 2);
}

TEST_CASE("empty and disjoint inputs") {
  const Instance empty = gen_uncorrelated(4, 2, 0, 1);
  const RunReport e = beam_search(empty, with(HeuristicKind::GCoV));
  CHECK(e.length == 0);
  CHECK(e.verified);
  const Instance disjoint = Instance::build(Alphabet("AB"), {"AAAA", "BBBB"});
  CHECK(beam_search(disjoint, with(HeuristicKind::ProbKGuess)).length == 0);
}

TEST_CASE("results are admissible against the exact oracles (property)") {
  Xoshiro256 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto sigma = static_cast<std::uint32_t>(2 + 2 * rng.below(2));
    const auto len = static_cast<std::uint32_t>(rng.below(60));
    const auto n = static_cast<std::uint32_t>(2 + rng.below(2));
    const Instance inst = gen_uncorrelated(sigma, n, len, rng.next());
    const std::size_t exact = n == 2 ? exact_lcs2(inst.text(0), inst.text(1)).length
                                     : exact_lcs3(inst.text(0), inst.text(1), inst.text(2));
    for (auto kind : kAllKinds) {
      for (std::uint32_t width : {1u, 10u}) {
        const RunReport r = beam_search(inst, with(kind, width));
        CHECK(r.verified);
        CHECK(verify_solution(inst, r.solution));
        CHECK(r.length <= exact);
        CHECK(r.length == r.levels);
      }
    }
  }
}

TEST_CASE("greedy width-1 run from the CLI example") {
  const Instance inst = gen_uncorrelated(4, 2, 50, 1);
  const RunReport r = beam_search(inst, with(HeuristicKind::MinLen, 1));
  CHECK(r.verified);
  CHECK(r.length <= exact_lcs2(inst.text(0), inst.text(1)).length);
}

TEST_CASE("deterministic across runs and thread counts") {
  const Instance inst = gen_uncorrelated(4, 8, 300, 42);
  for (auto kind : kAllKinds) {
    BeamConfig one = with(kind, 50);
    BeamConfig many = one;
    many.threads = 4;
    const RunReport a = beam_search(inst, one);
    const RunReport b = beam_search(inst, one);
    const RunReport c = beam_search(inst, many);
    CHECK(a.solution == b.solution);
    CHECK(a.solution == c.solution);
    CHECK(a.nodes_expanded == c.nodes_expanded);
  }
}

TEST_CASE("duplicate filter keeps results valid") {
  const Instance inst = gen_correlated(4, 6, 200, 0.2, 5);
  for (auto kind : kAllKinds) {
    BeamConfig c = with(kind, 30);
    c.dominance_filter = true;
    const RunReport r = beam_search(inst, c);
    CHECK(r.verified);
    CHECK(r.length > 0);
  }
}

TEST_CASE("unmutated correlated strings are recovered in full") {
  const Instance inst = gen_correlated(4, 5, 150, 0.0, 9);
  const RunReport r = beam_search(inst, with(HeuristicKind::ProbKAnalyticCorr, 20));
  CHECK(r.length == 150);
  CHECK(r.solution == inst.text(0));
}

TEST_CASE("hyper-heuristic rule") {
  CHECK(hyper_choice(10, 10) == 1);
  CHECK(hyper_choice(8, 12) == 2);
  CHECK(hyper_choice(12, 8) == 1);

  HeuristicSpec hf1;
  hf1.kind = HeuristicKind::ProbKAnalyticUncorr;
  HeuristicSpec hf2;
  hf2.kind = HeuristicKind::GCoV;
  const Instance same = Instance::build(Alphabet("AB"), {"ABBA", "ABBA"});
  const RunReport tie = hyper_heuristic(same, with(hf1.kind), hf1, hf2);
  REQUIRE(tie.hyper.has_value());
  CHECK(tie.hyper->probe_first == tie.hyper->probe_second);
  CHECK(tie.hyper->chosen == 1);
  CHECK(tie.config.heuristic == hf1);

  const Instance inst = gen_uncorrelated(4, 10, 200, 3);
  BeamConfig c = with(hf1.kind, 80);
  c.probe_width = 20;
  const RunReport r = hyper_heuristic(inst, c, hf1, hf2);
  REQUIRE(r.hyper.has_value());
  CHECK(r.hyper->chosen == hyper_choice(r.hyper->probe_first, r.hyper->probe_second));
  BeamConfig rerun = c;
  rerun.heuristic = r.hyper->chosen_spec();
  CHECK(beam_search(inst, rerun).solution == r.solution);
}

TEST_CASE("config validation") {
  BeamConfig c;
  c.beam_width = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.beam_width = 10;
  c.probe_width = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.probe_width = 11;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.probe_width = 10;
  CHECK_NOTHROW(validate(c));
  const Instance inst = Instance::build(Alphabet("AB"), {"AB", "AB"});
  BeamConfig zero;
  zero.beam_width = 0;
  CHECK_THROWS_AS(beam_search(inst, zero), std::invalid_argument);
}

TEST_CASE("report json round trip") {
  const Instance inst = gen_uncorrelated(4, 5, 100, 2);
  HeuristicSpec hf1;
  HeuristicSpec hf2;
  hf2.kind = HeuristicKind::GCoV;
  for (bool hyper : {false, true}) {
    BeamConfig c = with(HeuristicKind::ProbKGuess, 40);
    c.probe_width = 10;
    const RunReport r = hyper ? hyper_heuristic(inst, c, hf1, hf2) : beam_search(inst, c);
    const nlohmann::json first = r;
    const RunReport back = first.get<RunReport>();
    const nlohmann::json second = back;
    CHECK(first == second);
    CHECK(back.solution == r.solution);
    CHECK(back.hyper.has_value() == hyper);
  }
}

TEST_CASE("benchmark Rat row (needs MLCS_BENCHMARK_DIR)") {
  const char* dir = std::getenv("MLCS_BENCHMARK_DIR");
  const std::filesystem::path rat = dir ? std::filesystem::path(dir) / "rat_4_10.txt" : "";
  if (!dir || !std::filesystem::exists(rat)) {
    MESSAGE("skipped: rat_4_10.txt not available");
    return;
  }
  const Dataset ds = load_plain(rat);
  const RunReport r = beam_search(ds.instance, with(HeuristicKind::ProbKAnalyticUncorr));
  CHECK(r.length >= 200);
  CHECK(r.length <= 204);
}

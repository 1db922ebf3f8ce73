#include <cstdio>
#include <string>

#include "doctest.h"

#include "ising/factoring.hpp"
#include "ising/io.hpp"
#include "ising/rng.hpp"
#include "test_util.hpp"

using namespace ising;
using namespace ising::testing;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("io_test_") + name;
}

}  // namespace

TEST_CASE("minimal one-spin file round-trips") {
  const std::string text = "ising 1 1 0\nh 0 0.5\noffset 0\n";
  const auto sys = parse_instance(text);
  CHECK(sys.num_spins() == 1);
  CHECK(sys.magnetizations()[0] == 0.5);
  CHECK(serialize_instance(sys) == text);
}

TEST_CASE("factoring-21 system round-trips with its hyperedge line") {
  const auto enc = encode_direct(21, 2, 3);
  const std::string text = serialize_instance(enc.system);
  CHECK(text.find("e 3 0 1 2 16\n") != std::string::npos);
  const auto back = parse_instance(text);
  CHECK(serialize_instance(back) == text);
  SpinConfiguration ground(3, -1.0);
  CHECK(back.energy(ground) == 0.0);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_instance("ising 1 3 1\ne 3 0 1 2\n");  // arity says 3 spins + weight, one missing
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_instance("ising 2 1 0\noffset 0\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("ising 1 2 0\ne 2 0 0 1.5\noffset 0\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("ising 1 2 0\nh 5 1\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("ising 1 2 1\noffset 0\n"), ParseError);  // edge count mismatch
  CHECK_THROWS_AS(parse_instance("bogus\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("ising 1 2 0\nz 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_instance(""), ParseError);
}

TEST_CASE("parser accepts scientific notation and signed integers") {
  const auto sys = parse_instance("ising 1 3 1\nh 0 -1.5e-17\ne 2 0 +1 2.25e2\nc 2 +1\noffset -3\n");
  CHECK(sys.magnetizations()[0] == -1.5e-17);
  CHECK(sys.edges()[0].weight == 225.0);
  CHECK(sys.clamp_value(2) == 1);
  CHECK(sys.constant_offset() == -3.0);
  CHECK(serialize_instance(parse_instance(serialize_instance(sys))) == serialize_instance(sys));
}

TEST_CASE("round-trip identity on random systems, serialization canonical") {
  Rng rng(301);
  for (int trial = 0; trial < 200; ++trial) {
    RandomSystemOptions opt;
    opt.allow_hyper = trial % 2 == 0;
    opt.fields = trial % 3 == 0;
    opt.gaussian = trial % 2 == 1;
    opt.clamps = trial % 4 == 0;
    const auto sys = random_instance(rng, opt).build();
    const std::string text = serialize_instance(sys);
    const auto back = parse_instance(text);

    CHECK(back.num_spins() == sys.num_spins());
    CHECK(back.constant_offset() == sys.constant_offset());
    CHECK(back.edges().size() == sys.edges().size());
    // canonical fixed point after one round trip
    CHECK(serialize_instance(back) == text);
    // parsed system evaluates identically
    const auto c = random_config(sys, rng);
    CHECK(back.energy(c) == doctest::Approx(sys.energy(c)).epsilon(1e-12));
  }
}

TEST_CASE("samples CSV: empty list gives header only, list round-trips") {
  const std::string path = temp_path("samples.csv");
  export_samples({}, path);
  CHECK(read_text_file(path) == "start_index,seed,energy,passes,wall_ms\n");

  std::vector<StartSample> samples{{0, 42, -12.5, 3, 1.25}, {1, 43, -10.0, 2, 0.5}};
  export_samples(samples, path);
  const auto back = import_samples(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].seed == 42);
  CHECK(back[0].energy == -12.5);
  CHECK(back[1].passes == 2);
  std::remove(path.c_str());
}

TEST_CASE("distribution CSV reimports to the identical histogram") {
  const auto enc = encode_direct(21);
  const auto dist = factoring_experiment(enc, 60, 7, 1);
  const std::string path = temp_path("dist.csv");
  export_distribution(dist, 21, path);
  const auto back = import_distribution(path);
  REQUIRE(back.size() == dist.bins.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].product == dist.bins[i].product);
    CHECK(back[i].count == dist.bins[i].count);
  }
  std::remove(path.c_str());
}

TEST_CASE("report JSON carries the documented keys") {
  SolveReport report;
  report.best_config = SpinConfiguration(3, 1.0);
  report.best_energy = -2.0;
  report.nodes_explored = 5;
  const auto j = report_to_json(report);
  for (const char* key :
       {"best_energy", "best_config", "nodes_explored", "bound_prunes", "dominance_prunes",
        "passes", "moves", "proven_optimal", "incumbent_energies", "wall_ms"})
    CHECK(j.contains(key));
  CHECK(j["best_config"].size() == 3);
  CHECK(j["best_config"][0] == 1);
}

TEST_CASE("format_double round-trips") {
  Rng rng(303);
  for (int trial = 0; trial < 200; ++trial) {
    const double v = trial % 2 == 0 ? rng.gaussian() : static_cast<double>(rng.next_u64() % 1000);
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
}

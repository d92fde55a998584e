// Genome JSON round-trips, including the states that are easy to lose:
// repressed genes, dead genes, absent robot_count, unbound motors. Parse
// errors must name the offending gene record.

#include <string>

#include "ant/genome.hpp"
#include "ant/genome_json.hpp"
#include "ant/rng.hpp"
#include "doctest.h"

using namespace ant;

namespace {

Genome sample_genome(uint64_t seed, bool with_robot_count) {
  Rng rng(seed);
  Genome g;
  g.replication_prob = rng.uniform();
  g.decision_ratio = rng.uniform();
  g.seed_index = 0;
  if (with_robot_count) g.robot_count = draw_robot_count(rng);
  for (int i = 0; i < 12; ++i) {
    Gene gene;
    gene.kind = (i % 3 == 0) ? GeneKind::Decision : GeneKind::Motor;
    gene.pos = {i % 4, (i / 4) % 4, i % kLayerCount};
    randomize_gene_params(gene, rng);
    if (i == 3) gene.expressed = false;
    if (i == 5) gene.dead = true;
    if (i == 7) gene.output_binding.reset();  // unbound motor
    g.genes.push_back(gene);
  }
  return g;
}

}  // namespace

TEST_CASE("round trip is lossless") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    const Genome g = sample_genome(seed, seed == 2);
    const Genome back = genome_from_string(genome_to_string(g));
    REQUIRE(back == g);
  }
}

TEST_CASE("round trip preserves flags and optionals") {
  const Genome g = sample_genome(9, true);
  const Genome back = genome_from_string(genome_to_string(g));
  CHECK(!back.genes[3].expressed);
  CHECK(back.genes[5].dead);
  CHECK(!back.genes[7].output_binding.has_value());
  CHECK(back.robot_count == g.robot_count);

  const Genome no_n = sample_genome(9, false);
  CHECK(!genome_from_string(genome_to_string(no_n)).robot_count.has_value());
}

TEST_CASE("parse failures name the offending gene") {
  Genome g = sample_genome(4, false);
  auto j = genome_to_json(g);
  j["genes"][2]["kind"] = "banana";
  try {
    genome_from_json(j);
    FAIL("expected GenomeParseError");
  } catch (const GenomeParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("gene 2") != std::string::npos);
    CHECK(msg.find("banana") != std::string::npos);
  }
}

TEST_CASE("malformed payloads are rejected") {
  const Genome g = sample_genome(5, false);

  SUBCASE("wrong sensor vector length") {
    auto j = genome_to_json(g);
    j["genes"][0]["sensor"].erase(0);
    CHECK_THROWS_AS(genome_from_json(j), GenomeParseError);
  }
  SUBCASE("binding out of range") {
    auto j = genome_to_json(g);
    j["genes"][1]["binding"] = 12;
    CHECK_THROWS_AS(genome_from_json(j), GenomeParseError);
  }
  SUBCASE("k bits beyond binary") {
    auto j = genome_to_json(g);
    j["genes"][1]["k1"] = 2;
    CHECK_THROWS_AS(genome_from_json(j), GenomeParseError);
  }
  SUBCASE("negative concentration") {
    auto j = genome_to_json(g);
    j["genes"][0]["concentration"] = -0.25;
    CHECK_THROWS_AS(genome_from_json(j), GenomeParseError);
  }
  SUBCASE("negative extent") {
    auto j = genome_to_json(g);
    j["genes"][0]["extent"][1] = -1;
    CHECK_THROWS_AS(genome_from_json(j), GenomeParseError);
  }
  SUBCASE("bad pos arity") {
    auto j = genome_to_json(g);
    j["genes"][1]["pos"] = {1, 2};
    CHECK_THROWS_AS(genome_from_json(j), GenomeParseError);
  }
  SUBCASE("unknown format tag") {
    auto j = genome_to_json(g);
    j["format"] = "ant-genome-v999";
    CHECK_THROWS_AS(genome_from_json(j), GenomeParseError);
  }
  SUBCASE("invalid JSON text") {
    CHECK_THROWS_AS(genome_from_string("{ not json"), GenomeParseError);
  }
}

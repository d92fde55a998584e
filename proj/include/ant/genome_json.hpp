#pragma once
// Genome serialization. One JSON record per gene, genome order preserved,
// lossless for repressed and dead genes. Parse failures name the offending
// gene record so a bad checkpoint is diagnosable.

#include <string>

#include <json.hpp>

#include "ant/genome.hpp"

namespace ant {

struct GenomeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::json gene_to_json(const Gene& g) {
  nlohmann::json j;
  j["kind"] = g.kind == GeneKind::Motor ? "motor" : "decision";
  j["pos"] = {g.pos.l, g.pos.m, g.pos.n};
  j["theta1"] = g.act.theta1;
  j["theta2"] = g.act.theta2;
  j["k1"] = g.act.k1;
  j["k2"] = g.act.k2;
  j["sensor"] = g.sensor;
  if (g.kind == GeneKind::Motor) {
    j["nominal"] = g.nominal;
    if (g.output_binding) j["binding"] = *g.output_binding;
  } else {
    j["concentration"] = g.concentration;
    j["extent"] = g.extent;
  }
  j["expressed"] = g.expressed;
  j["dead"] = g.dead;
  return j;
}

inline Gene gene_from_json(const nlohmann::json& j) {
  Gene g;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "motor")
    g.kind = GeneKind::Motor;
  else if (kind == "decision")
    g.kind = GeneKind::Decision;
  else
    throw GenomeParseError("unknown gene kind '" + kind + "'");
  const auto& pos = j.at("pos");
  if (!pos.is_array() || pos.size() != 3)
    throw GenomeParseError("pos must be a 3-element array");
  g.pos = {pos[0].get<int32_t>(), pos[1].get<int32_t>(), pos[2].get<int32_t>()};
  g.act.theta1 = j.at("theta1").get<double>();
  g.act.theta2 = j.at("theta2").get<double>();
  g.act.k1 = j.at("k1").get<uint8_t>();
  g.act.k2 = j.at("k2").get<uint8_t>();
  if (g.act.k1 > 1 || g.act.k2 > 1) throw GenomeParseError("k-bits must be 0 or 1");
  const auto& sensor = j.at("sensor");
  if (!sensor.is_array() || sensor.size() != kInputCount)
    throw GenomeParseError("sensor weight vector must have " +
                           std::to_string(kInputCount) + " entries");
  for (int i = 0; i < kInputCount; ++i) g.sensor[i] = sensor[i].get<double>();
  if (g.kind == GeneKind::Motor) {
    const auto& nominal = j.at("nominal");
    if (!nominal.is_array() || nominal.size() != 9)
      throw GenomeParseError("nominal weight vector must have 9 entries");
    for (int i = 0; i < 9; ++i) g.nominal[i] = nominal[i].get<double>();
    if (j.contains("binding")) {
      const int b = j.at("binding").get<int>();
      if (b < 0 || b >= kBehaviorCount)
        throw GenomeParseError("binding out of range: " + std::to_string(b));
      g.output_binding = b;
    }
  } else {
    g.concentration = j.at("concentration").get<double>();
    if (g.concentration < 0.0) throw GenomeParseError("negative concentration");
    const auto& extent = j.at("extent");
    if (!extent.is_array() || extent.size() != 3)
      throw GenomeParseError("extent must be a 3-element array");
    for (int i = 0; i < 3; ++i) {
      g.extent[i] = extent[i].get<int32_t>();
      if (g.extent[i] < 0) throw GenomeParseError("negative field extent");
    }
  }
  g.expressed = j.at("expressed").get<bool>();
  g.dead = j.at("dead").get<bool>();
  return g;
}

}  // namespace detail

inline nlohmann::json genome_to_json(const Genome& g) {
  nlohmann::json j;
  j["format"] = "ant-genome-v1";
  j["replication_prob"] = g.replication_prob;
  j["decision_ratio"] = g.decision_ratio;
  j["seed_index"] = g.seed_index;
  if (g.robot_count) j["robot_count"] = *g.robot_count;
  j["genes"] = nlohmann::json::array();
  for (const auto& gene : g.genes) j["genes"].push_back(detail::gene_to_json(gene));
  return j;
}

inline std::string genome_to_string(const Genome& g) {
  return genome_to_json(g).dump(1) + "\n";
}

inline Genome genome_from_json(const nlohmann::json& j) {
  try {
    Genome g;
    if (j.at("format").get<std::string>() != "ant-genome-v1")
      throw GenomeParseError("unknown format tag");
    g.replication_prob = j.at("replication_prob").get<double>();
    g.decision_ratio = j.at("decision_ratio").get<double>();
    g.seed_index = j.at("seed_index").get<int32_t>();
    if (j.contains("robot_count") && !j.at("robot_count").is_null())
      g.robot_count = j.at("robot_count").get<int32_t>();
    const auto& genes = j.at("genes");
    if (!genes.is_array()) throw GenomeParseError("genes must be an array");
    for (size_t i = 0; i < genes.size(); ++i) {
      try {
        g.genes.push_back(detail::gene_from_json(genes[i]));
      } catch (const std::exception& e) {
        throw GenomeParseError("gene " + std::to_string(i) + ": " + e.what());
      }
    }
    return g;
  } catch (const GenomeParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw GenomeParseError(std::string("malformed genome: ") + e.what());
  }
}

inline Genome genome_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw GenomeParseError(std::string("invalid JSON: ") + e.what());
  }
  return genome_from_json(j);
}

}  // namespace ant

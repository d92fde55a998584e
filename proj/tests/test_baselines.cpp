// Reference controllers. The hand-coded program is checked rule by rule and
// then against an independently structured oracle over random frames; the
// fixed-topology network is checked against hand-built signal paths and
// against a gated tissue wrapped in an everything-covering field.

#include <set>

#include "ant/baselines.hpp"
#include "ant/evolution.hpp"
#include "doctest.h"

using namespace ant;

namespace {

SensorFrame quiet_frame() {
  SensorFrame f;
  // Both consulted zones Dump with an empty blade matches no rule.
  f.z[1] = Zone::Dump;
  f.z[2] = Zone::Dump;
  return f;
}

std::set<Behavior> on_set(const BehaviorVector& v) {
  std::set<Behavior> s;
  for (int b = 0; b < kBehaviorCount; ++b)
    if (v[static_cast<Behavior>(b)]) s.insert(static_cast<Behavior>(b));
  return s;
}

// Oracle kept as per-behavior flag logic rather than table-number selection.
BehaviorVector oracle_decide(const SensorFrame& f) {
  BehaviorVector v;
  const auto consulted = [&f](Zone z) { return f.z[1] == z || f.z[2] == z; };
  if (f.stuck) {
    v.set(Behavior::ThrottleUp);
    v.set(Behavior::RandomTurn);
    v.set(Behavior::BladeAbove);
    v.set(Behavior::BladeHome);
    v.set(Behavior::BitClear);
    return v;
  }
  if (f.obstacle) {
    v.set(Behavior::RandomTurn);
    return v;
  }
  bool mf = false, mb = false, rt = false, above = false, below = false;
  bool level = false, set_bit = false, clear_bit = false;
  if (consulted(Zone::Dump) && f.load > 0) mf = mb = rt = true;
  if (consulted(Zone::DontCare)) {
    if (f.load > 0) {
      mb = rt = clear_bit = true;
    } else {
      mf = rt = true;
    }
  }
  if (consulted(Zone::Level)) mf = rt = true;
  if (consulted(Zone::Below)) {
    mf = above = set_bit = true;
  }
  if (consulted(Zone::Above)) {
    mf = true;
    if (!f.memory) {
      below = set_bit = true;
    } else {
      level = true;
    }
  }
  v.set(Behavior::MoveForward, mf);
  v.set(Behavior::MoveBackward, mb);
  v.set(Behavior::RandomTurn, rt);
  v.set(Behavior::BladeAbove, above);
  v.set(Behavior::BladeBelow, below);
  v.set(Behavior::BladeLevel, level);
  v.set(Behavior::BitSet, set_bit);
  v.set(Behavior::BitClear, clear_bit);
  return v;
}

SensorFrame random_frame(Rng& rng) {
  SensorFrame f;
  for (auto& z : f.z) z = static_cast<Zone>(rng.uniform_int(0, 4));
  for (auto& e : f.e) e = static_cast<Edge>(rng.uniform_int(0, 2));
  f.blade = static_cast<Blade>(rng.uniform_int(0, 3));
  f.load = static_cast<uint8_t>(rng.uniform_int(0, 4));
  f.obstacle = rng.bernoulli(0.3);
  f.robot_distance = static_cast<uint8_t>(rng.uniform_int(0, 3));
  f.robot_heading = static_cast<Heading>(rng.uniform_int(0, 3));
  f.tilted = rng.bernoulli(0.3);
  f.stuck = rng.bernoulli(0.3);
  f.memory = rng.bernoulli(0.5);
  return f;
}

Gene motor_gene(LatticePos pos, std::optional<int> binding, ActivationParams act) {
  Gene g;
  g.kind = GeneKind::Motor;
  g.pos = pos;
  g.act = act;
  g.output_binding = binding;
  return g;
}

}  // namespace

TEST_CASE("hand-coded rules, case by case") {
  constexpr ActivationParams kUnused{0, 0, 0, 0};
  (void)kUnused;

  SUBCASE("stuck recovery preempts everything") {
    SensorFrame f = quiet_frame();
    f.stuck = true;
    f.obstacle = true;
    f.load = 3;
    f.z[1] = Zone::Above;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::ThrottleUp, Behavior::RandomTurn,
                             Behavior::BladeAbove, Behavior::BladeHome,
                             Behavior::BitClear});
  }
  SUBCASE("obstacle yields a lone random turn") {
    SensorFrame f = quiet_frame();
    f.obstacle = true;
    f.z[1] = Zone::Level;
    CHECK(on_set(hand_coded_decide(f)) == std::set<Behavior>{Behavior::RandomTurn});
  }
  SUBCASE("dump zone with a load shakes the blade loose") {
    SensorFrame f = quiet_frame();
    f.load = 2;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveForward, Behavior::MoveBackward,
                             Behavior::RandomTurn});
  }
  SUBCASE("dump zone with an empty blade matches nothing") {
    CHECK(on_set(hand_coded_decide(quiet_frame())).empty());
  }
  SUBCASE("don't-care zone, loaded and unloaded") {
    SensorFrame f = quiet_frame();
    f.z[1] = Zone::DontCare;
    f.z[2] = Zone::DontCare;
    f.load = 1;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveBackward, Behavior::RandomTurn,
                             Behavior::BitClear});
    f.load = 0;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveForward, Behavior::RandomTurn});
  }
  SUBCASE("goal depth reached, keep roaming") {
    SensorFrame f = quiet_frame();
    f.z[2] = Zone::Level;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveForward, Behavior::RandomTurn});
  }
  SUBCASE("overdug cell raises the blade and marks memory") {
    SensorFrame f = quiet_frame();
    f.z[1] = Zone::Below;
    f.z[2] = Zone::Below;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveForward, Behavior::BladeAbove,
                             Behavior::BitSet});
  }
  SUBCASE("undug cell: first pass cuts, marked pass levels") {
    SensorFrame f = quiet_frame();
    f.z[1] = Zone::Above;
    f.z[2] = Zone::Above;
    f.memory = false;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveForward, Behavior::BladeBelow,
                             Behavior::BitSet});
    f.memory = true;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveForward, Behavior::BladeLevel});
  }
  SUBCASE("distinct consulted zones union their rules") {
    SensorFrame f = quiet_frame();
    f.z[1] = Zone::Dump;
    f.z[2] = Zone::Above;
    f.load = 3;
    f.memory = true;
    CHECK(on_set(hand_coded_decide(f)) ==
          std::set<Behavior>{Behavior::MoveForward, Behavior::MoveBackward,
                             Behavior::RandomTurn, Behavior::BladeLevel});
  }
  SUBCASE("Z1 and Z4 are never consulted") {
    SensorFrame f = quiet_frame();
    f.z[0] = Zone::Above;
    f.z[3] = Zone::Below;
    CHECK(on_set(hand_coded_decide(f)).empty());
  }
}

TEST_CASE("hand-coded program matches the flag oracle on random frames") {
  Rng rng(880011);
  HandCodedController c;
  for (int i = 0; i < 100000; ++i) {
    const SensorFrame f = random_frame(rng);
    REQUIRE(c.decide(f) == oracle_decide(f));
  }
}

TEST_CASE("fixed net fires per activation when ungated") {
  // No decision neurons at all: a gated tissue is inert, the fixed net runs.
  constexpr ActivationParams kFire{-10.0, -1.0, 0, 1};
  constexpr ActivationParams kSilent{-1.0, -10.0, 0, 0};
  std::vector<Gene> genes;
  genes.push_back(motor_gene({0, 0, 3}, static_cast<int>(Behavior::TurnRight), kFire));
  genes.push_back(motor_gene({1, 0, 3}, static_cast<int>(Behavior::TurnRight), kFire));
  genes.push_back(motor_gene({2, 0, 3}, static_cast<int>(Behavior::TurnLeft), kSilent));
  Genome g;
  g.genes = genes;
  const Tissue t = Tissue::develop(g);

  FixedNetController fixed(Tissue::develop(g));
  const BehaviorVector bv = fixed_net_infer(fixed, SensorFrame{});
  CHECK(bv[Behavior::TurnRight]);
  CHECK(!bv[Behavior::TurnLeft]);

  AntController gated(t);
  CHECK(on_set(gated.decide(SensorFrame{})).empty());
}

TEST_CASE("fixed net: a sensor-driven chain through all layers") {
  // Layer-1 motor fires exactly when S1 is set (w[36] = 1, threshold between
  // 0 and 1/14); layers 2 and 3 relay through the center block weight.
  constexpr int kObstacleTrue = 36;
  Gene l1 = motor_gene({2, 2, 1}, {}, {0.0, 0.03, 0, 1});
  l1.sensor[kObstacleTrue] = 1.0;
  Gene l2 = motor_gene({2, 2, 2}, {}, {0.0, 0.5, 0, 1});
  l2.nominal[4] = 1.0;
  Gene l3 = motor_gene({2, 2, 3}, static_cast<int>(Behavior::TurnLeft),
                       {0.0, 0.5, 0, 1});
  l3.nominal[4] = 1.0;
  Genome g;
  g.genes = {l1, l2, l3};

  FixedNetController c(Tissue::develop(g));
  Rng rng(661);
  for (int i = 0; i < 2000; ++i) {
    const SensorFrame f = random_frame(rng);
    REQUIRE(c.decide(f)[Behavior::TurnLeft] == f.obstacle);
  }
}

TEST_CASE("gated tissue under a covering field equals the fixed net") {
  Rng rng(417);
  for (int trial = 0; trial < 10; ++trial) {
    Genome motors;
    std::set<std::tuple<int, int, int>> used = {{2, 2, 0}};
    while (motors.genes.size() < 30) {
      Gene g;
      g.kind = GeneKind::Motor;
      g.pos = {static_cast<int32_t>(rng.below(kSeedBoxSide)),
               static_cast<int32_t>(rng.below(kSeedBoxSide)),
               static_cast<int32_t>(rng.below(kLayerCount))};
      if (!used.insert({g.pos.l, g.pos.m, g.pos.n}).second) continue;
      randomize_gene_params(g, rng);
      g.kind = GeneKind::Motor;
      motors.genes.push_back(g);
    }
    Genome covered = motors;
    Gene field;
    field.kind = GeneKind::Decision;
    field.pos = {2, 2, 0};
    field.act = {-10.0, -1.0, 0, 1};  // active at any input
    field.concentration = 0.5;
    field.extent = {3, 3, 3};
    covered.genes.push_back(field);

    FixedNetController fixed(Tissue::develop(motors));
    AntController gated(Tissue::develop(covered), true);
    for (int i = 0; i < 200; ++i) {
      const SensorFrame f = random_frame(rng);
      REQUIRE(fixed.decide(f) == gated.decide(f));
    }
  }
}

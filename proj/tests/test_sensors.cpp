// One-hot sensor layout and the packed frame key. The offsets are part of
// the genome format, so they are asserted literally.

#include <array>
#include <set>

#include "ant/rng.hpp"
#include "ant/sensors.hpp"
#include "doctest.h"

using namespace ant;

namespace {

// State count per sensor group, in layout order.
constexpr std::array<int, kSensorGroups> kGroupSizes = {5, 5, 5, 5, 3, 3, 4,
                                                        5, 2, 4, 4, 2, 2, 2};

SensorFrame random_frame(Rng& rng) {
  SensorFrame f;
  for (auto& z : f.z) z = static_cast<Zone>(rng.uniform_int(0, 4));
  for (auto& e : f.e) e = static_cast<Edge>(rng.uniform_int(0, 2));
  f.blade = static_cast<Blade>(rng.uniform_int(0, 3));
  f.load = static_cast<uint8_t>(rng.uniform_int(0, 4));
  f.obstacle = rng.bernoulli(0.5);
  f.robot_distance = static_cast<uint8_t>(rng.uniform_int(0, 3));
  f.robot_heading = static_cast<Heading>(rng.uniform_int(0, 3));
  f.tilted = rng.bernoulli(0.5);
  f.stuck = rng.bernoulli(0.5);
  f.memory = rng.bernoulli(0.5);
  return f;
}

}  // namespace

TEST_CASE("layout offsets are the running sum of the group sizes") {
  int off = 0;
  for (int g = 0; g < kSensorGroups; ++g) {
    CHECK(SensorLayout::offsets[g] == off);
    off += kGroupSizes[g];
  }
  CHECK(off == kInputCount);
}

TEST_CASE("active_inputs picks one neuron per group, inside its group") {
  Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const SensorFrame f = random_frame(rng);
    const auto a = active_inputs(f);
    std::set<int> distinct;
    for (int g = 0; g < kSensorGroups; ++g) {
      const int lo = SensorLayout::offsets[g];
      REQUIRE(a[g] >= lo);
      REQUIRE(a[g] < lo + kGroupSizes[g]);
      distinct.insert(a[g]);
    }
    REQUIRE(distinct.size() == kSensorGroups);
  }
}

TEST_CASE("active_inputs reflects each field") {
  SensorFrame f;  // all defaults
  auto base = active_inputs(f);
  CHECK(base[0] == SensorLayout::offsets[0] + static_cast<int>(Zone::DontCare));
  f.z[0] = Zone::Dump;
  CHECK(active_inputs(f)[0] == SensorLayout::offsets[0] + static_cast<int>(Zone::Dump));
  f.load = 4;
  CHECK(active_inputs(f)[7] == SensorLayout::offsets[7] + 4);
  f.memory = true;
  CHECK(active_inputs(f)[13] == SensorLayout::offsets[13] + 1);
}

TEST_CASE("pack is injective") {
  // Mixed-radix decode inverts pack exactly when every radix covers its
  // group's state count; reconstruct the frame and compare.
  Rng rng(37);
  for (int trial = 0; trial < 5000; ++trial) {
    const SensorFrame f = random_frame(rng);
    uint64_t k = pack(f);
    SensorFrame g;
    g.memory = k % 2, k /= 2;
    g.stuck = k % 2, k /= 2;
    g.tilted = k % 2, k /= 2;
    g.robot_heading = static_cast<Heading>(k % 4), k /= 4;
    g.robot_distance = static_cast<uint8_t>(k % 4), k /= 4;
    g.obstacle = k % 2, k /= 2;
    g.load = static_cast<uint8_t>(k % 5), k /= 5;
    g.blade = static_cast<Blade>(k % 4), k /= 4;
    for (int i = 1; i >= 0; --i) g.e[i] = static_cast<Edge>(k % 3), k /= 3;
    for (int i = 3; i >= 0; --i) g.z[i] = static_cast<Zone>(k % 5), k /= 5;
    CHECK(k == 0);
    REQUIRE(g == f);
  }
}

TEST_CASE("distinct frames pack to distinct keys") {
  Rng rng(41);
  std::set<std::array<int, 16>> frames;
  std::set<uint64_t> keys;
  for (int trial = 0; trial < 5000; ++trial) {
    const SensorFrame f = random_frame(rng);
    frames.insert({static_cast<int>(f.z[0]), static_cast<int>(f.z[1]),
                   static_cast<int>(f.z[2]), static_cast<int>(f.z[3]),
                   static_cast<int>(f.e[0]), static_cast<int>(f.e[1]),
                   static_cast<int>(f.blade), f.load, f.obstacle,
                   f.robot_distance, static_cast<int>(f.robot_heading),
                   f.tilted, f.stuck, f.memory, 0, 0});
    keys.insert(pack(f));
  }
  CHECK(keys.size() == frames.size());
}

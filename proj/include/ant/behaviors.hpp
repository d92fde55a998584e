#pragma once
// The 12 basis behaviors. The enum order is the execution order within one
// timestep and also the vote-tally order, so it is load-bearing.

#include <array>
#include <cstdint>

namespace ant {

enum class Behavior : uint8_t {
  ThrottleUp = 0,
  MoveForward,
  MoveBackward,
  RandomTurn,
  TurnRight,
  TurnLeft,
  BladeAbove,
  BladeBelow,
  BladeLevel,
  BladeHome,
  BitSet,
  BitClear,
};

constexpr int kBehaviorCount = 12;

inline const char* to_string(Behavior b) {
  static constexpr const char* names[kBehaviorCount] = {
      "ThrottleUp", "MoveForward", "MoveBackward", "RandomTurn",
      "TurnRight",  "TurnLeft",    "BladeAbove",   "BladeBelow",
      "BladeLevel", "BladeHome",   "BitSet",       "BitClear"};
  return names[static_cast<int>(b)];
}

struct BehaviorVector {
  std::array<bool, kBehaviorCount> active{};
  std::array<int, kBehaviorCount> voters{};        // n_q per behavior
  std::array<double, kBehaviorCount> vote_share{};  // p(q), 0 when n_q == 0

  bool operator[](Behavior b) const { return active[static_cast<int>(b)]; }

  void set(Behavior b, bool v = true) { active[static_cast<int>(b)] = v; }

  bool operator==(const BehaviorVector& o) const { return active == o.active; }
};

// Output arbitration. Behavior q fires iff at least one output neuron is
// bound to it and the mean state of its voters reaches 1/2.
inline BehaviorVector arbitrate(const std::array<int, kBehaviorCount>& voters,
                                const std::array<int, kBehaviorCount>& votes) {
  BehaviorVector bv;
  for (int q = 0; q < kBehaviorCount; ++q) {
    bv.voters[q] = voters[q];
    if (voters[q] > 0) {
      bv.vote_share[q] = static_cast<double>(votes[q]) / voters[q];
      bv.active[q] = bv.vote_share[q] >= 0.5;
    }
  }
  return bv;
}

}  // namespace ant

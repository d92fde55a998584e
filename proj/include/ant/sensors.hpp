#pragma once
// The robot's discretized sensor readings and their one-hot encoding as the
// tissue's input layer. The 14 sensor variables become 14 one-hot groups of
// 51 input neurons total; exactly one neuron per group is active per frame.

#include <array>
#include <cstdint>

namespace ant {

enum class Zone : uint8_t { Level = 0, Above, Below, DontCare, Dump };
enum class Edge : uint8_t { Above = 0, Below, Level };
enum class Blade : uint8_t { Below = 0, Level, Above, Home };
enum class Heading : uint8_t { North = 0, East, South, West };  // clockwise

inline const char* to_string(Heading h) {
  switch (h) {
    case Heading::North: return "N";
    case Heading::East: return "E";
    case Heading::South: return "S";
    default: return "W";
  }
}

struct SensorFrame {
  std::array<Zone, 4> z{Zone::DontCare, Zone::DontCare, Zone::DontCare,
                        Zone::DontCare};           // Z1..Z4
  std::array<Edge, 2> e{Edge::Level, Edge::Level};  // E1, E2
  Blade blade = Blade::Home;                        // B1
  uint8_t load = 0;                                 // L1, 0..4
  bool obstacle = false;                            // S1
  uint8_t robot_distance = 3;                       // D1, 0..3
  Heading robot_heading = Heading::North;           // H1
  bool tilted = false;                              // R1
  bool stuck = false;                               // U1
  bool memory = false;                              // M1

  bool operator==(const SensorFrame&) const = default;
};

// One-hot layout. Group order and offsets are part of the genome format
// (sensor weight vectors index into this layout), so they must never change.
constexpr int kInputCount = 51;
constexpr int kSensorGroups = 14;

struct SensorLayout {
  // offset of each group: Z1 Z2 Z3 Z4 E1 E2 B1 L1 S1 D1 H1 R1 U1 M1
  static constexpr std::array<int, kSensorGroups> offsets = {
      0, 5, 10, 15, 20, 23, 26, 30, 35, 37, 41, 45, 47, 49};
};

// Index of the single active input neuron within each group.
inline std::array<uint8_t, kSensorGroups> active_inputs(const SensorFrame& f) {
  const auto& off = SensorLayout::offsets;
  std::array<uint8_t, kSensorGroups> a{};
  for (int i = 0; i < 4; ++i)
    a[i] = static_cast<uint8_t>(off[i] + static_cast<int>(f.z[i]));
  for (int i = 0; i < 2; ++i)
    a[4 + i] = static_cast<uint8_t>(off[4 + i] + static_cast<int>(f.e[i]));
  a[6] = static_cast<uint8_t>(off[6] + static_cast<int>(f.blade));
  a[7] = static_cast<uint8_t>(off[7] + f.load);
  a[8] = static_cast<uint8_t>(off[8] + (f.obstacle ? 1 : 0));
  a[9] = static_cast<uint8_t>(off[9] + f.robot_distance);
  a[10] = static_cast<uint8_t>(off[10] + static_cast<int>(f.robot_heading));
  a[11] = static_cast<uint8_t>(off[11] + (f.tilted ? 1 : 0));
  a[12] = static_cast<uint8_t>(off[12] + (f.stuck ? 1 : 0));
  a[13] = static_cast<uint8_t>(off[13] + (f.memory ? 1 : 0));
  return a;
}

// Compact frame key for inference memoization (29 bits used).
inline uint64_t pack(const SensorFrame& f) {
  uint64_t k = 0;
  for (int i = 0; i < 4; ++i) k = k * 5 + static_cast<uint64_t>(f.z[i]);
  for (int i = 0; i < 2; ++i) k = k * 3 + static_cast<uint64_t>(f.e[i]);
  k = k * 4 + static_cast<uint64_t>(f.blade);
  k = k * 5 + f.load;
  k = k * 2 + (f.obstacle ? 1 : 0);
  k = k * 4 + f.robot_distance;
  k = k * 4 + static_cast<uint64_t>(f.robot_heading);
  k = k * 2 + (f.tilted ? 1 : 0);
  k = k * 2 + (f.stuck ? 1 : 0);
  k = k * 2 + (f.memory ? 1 : 0);
  return k;
}

}  // namespace ant

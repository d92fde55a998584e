#pragma once
// Controller interface shared by the tissue controller and the baselines.

#include <cstdint>
#include <vector>

#include "ant/behaviors.hpp"
#include "ant/sensors.hpp"

namespace ant {

struct Controller {
  virtual ~Controller() = default;

  virtual BehaviorVector decide(const SensorFrame& frame) = 0;

  // Decision-neuron states of the most recent decide() call, for activity
  // logging. Null for controllers without decision neurons.
  virtual const std::vector<uint8_t>* decision_states() const { return nullptr; }
};

}  // namespace ant

#pragma once
// Reference controllers: the 11-rule hand-coded program and the
// fixed-topology network (an ungated tissue, every neuron always active).
//
// Hand-coded rule table. Rules select behaviors by their table number
// (1-based); all selections are unioned and executed in behavior order.
//
//   1  stuck                          -> 1, 4, 7, 10, 12   (rules 2-11 skipped)
//   2  obstacle ahead                 -> 4                 (rules 3-11 skipped)
//   3  Z2|Z3 = Dump        and L1 > 0 -> 2, 3, 4
//   4  Z2|Z3 = Don't care  and L1 > 0 -> 3, 4, 12  \
//   5  Z2|Z3 = Don't care             -> 2, 4       | first match of 4-6 only
//   6  Z2|Z3 = Don't care  and L1 = 0 -> 3         /
//   7  Z2|Z3 at goal depth            -> 2, 4
//   8  Z2|Z3 below goal depth         -> 2, 7, 11
//   9  Z2|Z3 above goal depth         -> 2
//  10  Z2|Z3 above goal, M1 = 0       -> 8, 11
//  11  Z2|Z3 above goal, M1 = 1       -> 2, 9
//
// Rules 4-6 share the "don't care" guard and prescribe conflicting actions,
// so only the first whose condition holds contributes. Under that reading
// rule 6 never fires: any frame satisfying it (L1 = 0) also satisfies the
// broader rule 5. Kept as listed; rules give an order, not exclusivity.

#include <cstdint>
#include <initializer_list>

#include "ant/behaviors.hpp"
#include "ant/controller.hpp"
#include "ant/sensors.hpp"
#include "ant/tissue.hpp"

namespace ant {

inline BehaviorVector hand_coded_decide(const SensorFrame& f) {
  BehaviorVector bv;
  auto select = [&bv](std::initializer_list<int> table_numbers) {
    for (int n : table_numbers) bv.set(static_cast<Behavior>(n - 1));
  };
  if (f.stuck) {
    select({1, 4, 7, 10, 12});
    return bv;
  }
  if (f.obstacle) {
    select({4});
    return bv;
  }
  auto z23 = [&f](Zone z) { return f.z[1] == z || f.z[2] == z; };
  if (z23(Zone::Dump) && f.load > 0) select({2, 3, 4});
  if (z23(Zone::DontCare)) {
    if (f.load > 0)
      select({3, 4, 12});  // rule 4
    else
      select({2, 4});  // rule 5; rule 6 shadowed
  }
  if (z23(Zone::Level)) select({2, 4});
  if (z23(Zone::Below)) select({2, 7, 11});
  if (z23(Zone::Above)) {
    select({2});
    if (f.memory == 0)
      select({8, 11});
    else
      select({2, 9});
  }
  return bv;
}

class HandCodedController : public Controller {
 public:
  BehaviorVector decide(const SensorFrame& frame) override {
    return hand_coded_decide(frame);
  }
};

// The fixed-topology baseline shares the tissue machinery: same genome
// format (gating fields unused), same lattice wiring, but no coarse coding.
class FixedNetController : public AntController {
 public:
  explicit FixedNetController(const Tissue& tissue)
      : AntController(tissue, /*gated=*/false) {}
  explicit FixedNetController(Tissue&& tissue)
      : AntController(std::move(tissue), /*gated=*/false) {}
};

inline BehaviorVector fixed_net_infer(FixedNetController& controller,
                                      const SensorFrame& frame) {
  return controller.decide(frame);
}

}  // namespace ant

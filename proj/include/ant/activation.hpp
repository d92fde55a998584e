#pragma once
// Neuron arithmetic: the four threshold activation functions, the (k1,k2)
// selector that picks between them, and the normalized weighted input sum.

#include <algorithm>
#include <cstdint>

namespace ant {

struct ActivationParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  uint8_t k1 = 0;  // selector bits, each 0 or 1
  uint8_t k2 = 0;

  bool operator==(const ActivationParams&) const = default;
};

// The four families. Orientation of the inequalities matters and is pinned
// by the unit tests; note that ditch and mound are not exact complements
// (both are 0 at sigma == min and both are 1 at sigma == max).
inline int psi_down(double sigma, double theta1) { return sigma >= theta1 ? 0 : 1; }

inline int psi_up(double sigma, double theta2) { return sigma <= theta2 ? 0 : 1; }

inline int psi_ditch(double sigma, double theta1, double theta2) {
  const double lo = std::min(theta1, theta2), hi = std::max(theta1, theta2);
  return (lo <= sigma && sigma < hi) ? 0 : 1;
}

inline int psi_mound(double sigma, double theta1, double theta2) {
  const double lo = std::min(theta1, theta2), hi = std::max(theta1, theta2);
  return (sigma <= lo || sigma > hi) ? 0 : 1;
}

// (k1,k2) = (0,0) down, (0,1) up, (1,0) ditch, (1,1) mound.
inline int modular_activation(double sigma, const ActivationParams& p) {
  if (p.k1 == 0) {
    return p.k2 == 0 ? psi_down(sigma, p.theta1) : psi_up(sigma, p.theta2);
  }
  return p.k2 == 0 ? psi_ditch(sigma, p.theta1, p.theta2)
                   : psi_mound(sigma, p.theta1, p.theta2);
}

// Normalized weighted sum over input states. Total function: when the state
// sum is zero every product term is zero too, and the result is defined as 0.
template <typename WIt, typename SIt>
double weighted_input(WIt w_begin, SIt s_begin, int count) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < count; ++i) {
    num += static_cast<double>(w_begin[i]) * static_cast<double>(s_begin[i]);
    den += static_cast<double>(s_begin[i]);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

}  // namespace ant

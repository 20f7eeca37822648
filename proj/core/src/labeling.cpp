#include "newsgraph/labeling.hpp"

#include <cmath>
#include <stdexcept>

namespace newsgraph {

double compute_return(double p_t, double p_prev) {
  if (!(p_prev > 0.0)) {
    throw std::domain_error("previous price must be positive, got " + std::to_string(p_prev));
  }
  return p_t / p_prev - 1.0;
}

MovementLabel label_movement(double r, const Thresholds& th) {
  th.validate();
  if (std::isnan(r)) throw std::domain_error("return is NaN");
  if (r >= th.up) return MovementLabel::Up;
  if (r <= th.down) return MovementLabel::Down;
  return MovementLabel::Neutral;
}

}  // namespace newsgraph

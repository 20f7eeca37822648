#pragma once

#include "newsgraph/types.hpp"

namespace newsgraph {

// Simple return p_t / p_prev - 1. Throws std::domain_error when p_prev <= 0.
double compute_return(double p_t, double p_prev);

// Threshold classification of a return fraction. Boundary returns map to
// Up/Down (r >= up is Up, r <= down is Down). NaN throws std::domain_error.
MovementLabel label_movement(double r, const Thresholds& th = Thresholds{});

}  // namespace newsgraph

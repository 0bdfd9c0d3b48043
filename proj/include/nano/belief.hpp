#pragma once

#include "nano/linalg.hpp"

namespace nano {

// Mean and covariance of a Gaussian state estimate.
struct GaussianBelief {
  Vector mean;
  Matrix cov;
};

}  // namespace nano

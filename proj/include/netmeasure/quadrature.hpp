#pragma once

#include "netmeasure/vector_field.hpp"

#include <functional>

namespace netmeasure {

/// Axis-aligned box [lower_i, upper_i].
struct Box {
  VectorXd lower;
  VectorXd upper;
};

struct QuadratureEntropy {
  double value = 0.0;       ///< Richardson-extrapolated -int u log u, nats
  double fine = 0.0;        ///< midpoint rule at `resolution`
  double coarse = 0.0;      ///< midpoint rule at resolution / 2
  double normalizer = 0.0;  ///< int density over the box
  double outside_mass = 0.0;  ///< fraction of mass in a 10% margin around the box
};

/// Differential entropy of the (possibly unnormalized) density on `box` by
/// tensor-grid midpoint quadrature at two resolutions. The density is
/// normalized on the box; the normalizer is checked for convergence by
/// integrating a margin of 10% of the box around it, and InvalidArgument is
/// thrown when more than 1e-6 of the mass lies in that margin.
QuadratureEntropy quadrature_entropy(const std::function<double(const Eigen::Ref<const VectorXd>&)>& density,
                                     const Box& box, Index resolution);

}  // namespace netmeasure

#include "netmeasure/quadrature.hpp"

#include "netmeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace netmeasure {

namespace {

struct GridSums {
  double mass = 0.0;
  double mass_log = 0.0;  // int u log u (unnormalized)
  double outside = 0.0;
};

// Midpoint grid of `resolution` cells per axis on `box`, extended by `margin`
// cells of the same width on every side. Cells in the margin only feed
// `outside`.
GridSums midpoint(const std::function<double(const Eigen::Ref<const VectorXd>&)>& density, const Box& box,
                  Index resolution, Index margin) {
  const Index d = box.lower.size();
  const VectorXd h = (box.upper - box.lower) / static_cast<double>(resolution);
  const double cell = h.prod();
  const Index per_axis = resolution + 2 * margin;
  std::vector<Index> counter(static_cast<std::size_t>(d), 0);
  VectorXd x(d);
  GridSums sums;
  // Kahan-compensated accumulation; the grids run to ~1e8 cells.
  double c_mass = 0.0, c_log = 0.0;
  auto add = [](double& sum, double& comp, double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  while (true) {
    bool outside = false;
    for (Index i = 0; i < d; ++i) {
      const Index c = counter[static_cast<std::size_t>(i)] - margin;
      x[i] = box.lower[i] + (static_cast<double>(c) + 0.5) * h[i];
      outside = outside || c < 0 || c >= resolution;
    }
    const double u = density(x);
    if (!(u >= 0.0) || !std::isfinite(u)) throw InvalidArgument("quadrature_entropy: density must be finite and nonnegative");
    if (u > 0.0) {
      if (outside) {
        sums.outside += u * cell;
      } else {
        add(sums.mass, c_mass, u * cell);
        add(sums.mass_log, c_log, u * std::log(u) * cell);
      }
    }
    Index i = 0;
    for (; i < d; ++i) {
      if (++counter[static_cast<std::size_t>(i)] < per_axis) break;
      counter[static_cast<std::size_t>(i)] = 0;
    }
    if (i == d) break;
  }
  return sums;
}

double entropy_of(const GridSums& s) {
  // -int (u/Z) log(u/Z) = log Z - (1/Z) int u log u
  return std::log(s.mass) - s.mass_log / s.mass;
}

}  // namespace

QuadratureEntropy quadrature_entropy(const std::function<double(const Eigen::Ref<const VectorXd>&)>& density,
                                     const Box& box, Index resolution) {
  const Index d = box.lower.size();
  if (d < 1 || box.upper.size() != d) throw InvalidArgument("quadrature_entropy: malformed box");
  if (!((box.upper - box.lower).array() > 0.0).all()) throw InvalidArgument("quadrature_entropy: empty box");
  if (resolution < 4 || resolution % 2 != 0)
    throw InvalidArgument("quadrature_entropy: resolution must be an even number >= 4");

  const Index margin = std::max<Index>(1, resolution / 10);
  const GridSums fine = midpoint(density, box, resolution, margin);
  if (!(fine.mass > 0.0)) throw InvalidArgument("quadrature_entropy: density has no mass on the box");
  const GridSums coarse = midpoint(density, box, resolution / 2, 0);

  QuadratureEntropy out;
  out.fine = entropy_of(fine);
  out.coarse = entropy_of(coarse);
  // Midpoint error is O(h^2): extrapolate with the 4:1 ratio.
  out.value = (4.0 * out.fine - out.coarse) / 3.0;
  out.normalizer = fine.mass;
  out.outside_mass = fine.outside / (fine.mass + fine.outside);
  if (out.outside_mass > 1e-6)
    throw InvalidArgument("quadrature_entropy: mass deficit, " + std::to_string(out.outside_mass) +
                          " of the mass lies outside the box");
  return out;
}

}  // namespace netmeasure

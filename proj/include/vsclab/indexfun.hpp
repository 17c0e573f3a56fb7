#ifndef VSCLAB_INDEXFUN_HPP
#define VSCLAB_INDEXFUN_HPP

#include "vsclab/distfun.hpp"

#include <utility>
#include <vector>

namespace vsclab {

/// Concave piecewise-linear index function phi on a t-grid.
struct IndexFunction {
  std::vector<double> t_grid;
  std::vector<double> values;
  std::vector<double> slopes_used;  // minimizing r per node
  bool trivial = false;             // profile was flagged trivial_vsc or linear_vsc
};

/// phi(t) = min over the profile's r-grid of (D(r) + r t).
///
/// The requested t-grid is augmented with the breakpoints of the lower envelope
/// of the affine family, so piecewise-linear interpolation of the result
/// reproduces the grid infimum exactly for every t >= 0.
///
/// decay_tol < 0 selects the default 1e-6 * max(values[0], 1). A profile with
/// values.back() > decay_tol is rejected (extend r_max and resample).
///
/// Profiles flagged trivial_vsc or linear_vsc yield phi(t) = slope * t with
/// slope = trivial_slope resp. the profile's recorded linear_slope.
IndexFunction index_from_distance(const DistanceProfile& profile,
                                  const std::vector<double>& t_grid, double decay_tol = -1.0,
                                  double trivial_slope = 1.0);

/// Piecewise-linear interpolation; beyond the last node the final segment's
/// slope extrapolates.
double evaluate(const IndexFunction& phi, double t);

/// Default t-grid: 0 plus num_points geometric nodes on [1e-6, 10] * scale.
std::vector<double> default_t_grid(double scale, int num_points = 50);

/// Least concave majorant of sampled points, restricted to the input abscissae.
std::vector<std::pair<double, double>> concave_envelope(
    const std::vector<std::pair<double, double>>& points);

/// Greatest convex minorant of sampled points, restricted to the input abscissae.
std::vector<std::pair<double, double>> convex_minorant(
    const std::vector<std::pair<double, double>>& points);

}  // namespace vsclab

#endif

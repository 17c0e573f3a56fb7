#include "vsclab/indexfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsclab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

IndexFunction linear_phi(const std::vector<double>& t_grid, double slope) {
  IndexFunction phi;
  phi.t_grid = t_grid;
  phi.values.reserve(t_grid.size());
  phi.slopes_used.assign(t_grid.size(), slope);
  for (double t : t_grid) phi.values.push_back(slope * t);
  phi.trivial = true;
  return phi;
}

}  // namespace

IndexFunction index_from_distance(const DistanceProfile& profile,
                                  const std::vector<double>& t_grid, double decay_tol,
                                  double trivial_slope) {
  require(!t_grid.empty() && t_grid.front() == 0.0, "t_grid must start at 0");
  for (size_t i = 1; i < t_grid.size(); ++i)
    require(t_grid[i] > t_grid[i - 1], "t_grid must be strictly increasing");
  require(profile.r_grid.size() == profile.values.size(), "malformed profile");
  require(!profile.values.empty(), "empty profile");

  if (profile.trivial_vsc) return linear_phi(t_grid, trivial_slope);
  if (profile.linear_vsc) return linear_phi(t_grid, profile.linear_slope);

  for (double v : profile.values) require(v >= 0.0, "profile values must be nonnegative");
  if (decay_tol < 0.0) decay_tol = 1e-6 * std::max(profile.values.front(), 1.0);
  if (profile.values.back() > decay_tol) {
    throw std::runtime_error(
        "NonDecayingProfile: D at the largest r is " + std::to_string(profile.values.back()) +
        " > decay tolerance " + std::to_string(decay_tol) + "; extend r_max and resample");
  }

  const size_t np = profile.r_grid.size();

  // Lower convex hull of (r, D); only hull vertices carry the envelope
  // phi(t) = min_j (D_j + r_j t), and consecutive vertices give its breakpoints.
  std::vector<size_t> hull;
  for (size_t i = 0; i < np; ++i) {
    const double r = profile.r_grid[i];
    const double d = profile.values[i];
    while (hull.size() >= 2) {
      const size_t a = hull[hull.size() - 2];
      const size_t b = hull[hull.size() - 1];
      const double cross = (profile.r_grid[b] - profile.r_grid[a]) * (d - profile.values[a]) -
                           (r - profile.r_grid[a]) * (profile.values[b] - profile.values[a]);
      if (cross <= 0.0) hull.pop_back(); else break;
    }
    hull.push_back(i);
  }

  std::vector<double> grid = t_grid;
  for (size_t i = 0; i + 1 < hull.size(); ++i) {
    const size_t a = hull[i];
    const size_t b = hull[i + 1];
    const double t_break =
        (profile.values[a] - profile.values[b]) / (profile.r_grid[b] - profile.r_grid[a]);
    if (t_break > 0.0 && std::isfinite(t_break)) grid.push_back(t_break);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  IndexFunction phi;
  phi.t_grid = std::move(grid);
  phi.values.reserve(phi.t_grid.size());
  phi.slopes_used.reserve(phi.t_grid.size());
  for (double t : phi.t_grid) {
    double best = std::numeric_limits<double>::infinity();
    double slope = 0.0;
    for (size_t j = 0; j < np; ++j) {
      const double v = profile.values[j] + profile.r_grid[j] * t;
      if (v < best || (v == best && profile.r_grid[j] < slope)) {
        best = v;
        slope = profile.r_grid[j];
      }
    }
    phi.values.push_back(std::max(best, 0.0));
    phi.slopes_used.push_back(slope);
  }
  return phi;
}

double evaluate(const IndexFunction& phi, double t) {
  require(t >= 0.0, "t must be nonnegative");
  require(phi.t_grid.size() == phi.values.size() && !phi.t_grid.empty(), "malformed index function");
  const auto& tg = phi.t_grid;
  const auto& v = phi.values;
  if (tg.size() == 1) return v[0];
  if (t >= tg.back()) {
    const size_t k = tg.size() - 1;
    const double slope = (v[k] - v[k - 1]) / (tg[k] - tg[k - 1]);
    return v[k] + slope * (t - tg[k]);
  }
  const auto it = std::upper_bound(tg.begin(), tg.end(), t);
  const size_t hi = static_cast<size_t>(it - tg.begin());
  const size_t lo = hi == 0 ? 0 : hi - 1;
  if (hi == 0) return v[0];
  const double w = (t - tg[lo]) / (tg[hi] - tg[lo]);
  return v[lo] + w * (v[hi] - v[lo]);
}

std::vector<double> default_t_grid(double scale, int num_points) {
  require(scale > 0.0, "scale must be positive");
  require(num_points >= 2, "need at least two grid points");
  std::vector<double> grid{0.0};
  const double lo = 1e-6 * scale;
  const double hi = 10.0 * scale;
  const double ratio = std::pow(hi / lo, 1.0 / (num_points - 1));
  for (int i = 0; i < num_points; ++i) grid.push_back(lo * std::pow(ratio, i));
  return grid;
}

namespace {

// Hull of sampled points, evaluated back on the input abscissae.
// sign = +1 gives the upper (concave) hull, -1 the lower (convex) hull.
std::vector<std::pair<double, double>> hull_envelope(
    const std::vector<std::pair<double, double>>& points, double sign) {
  require(!points.empty(), "empty point list");
  for (size_t i = 1; i < points.size(); ++i)
    require(points[i].first > points[i - 1].first, "abscissae must be strictly increasing");

  std::vector<size_t> hull;
  for (size_t i = 0; i < points.size(); ++i) {
    while (hull.size() >= 2) {
      const auto& a = points[hull[hull.size() - 2]];
      const auto& b = points[hull[hull.size() - 1]];
      const double cross = (b.first - a.first) * (points[i].second - a.second) -
                           (points[i].first - a.first) * (b.second - a.second);
      if (sign * cross >= 0.0) hull.pop_back(); else break;
    }
    hull.push_back(i);
  }

  std::vector<std::pair<double, double>> out;
  out.reserve(points.size());
  size_t seg = 0;
  for (const auto& [t, unused] : points) {
    while (seg + 1 < hull.size() && points[hull[seg + 1]].first < t) ++seg;
    const auto& a = points[hull[seg]];
    if (seg + 1 == hull.size() || t <= a.first) {
      out.emplace_back(t, a.second);
      continue;
    }
    const auto& b = points[hull[seg + 1]];
    const double w = (t - a.first) / (b.first - a.first);
    out.emplace_back(t, a.second + w * (b.second - a.second));
  }
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> concave_envelope(
    const std::vector<std::pair<double, double>>& points) {
  return hull_envelope(points, 1.0);
}

std::vector<std::pair<double, double>> convex_minorant(
    const std::vector<std::pair<double, double>>& points) {
  return hull_envelope(points, -1.0);
}

}  // namespace vsclab

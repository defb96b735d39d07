#include "bimodal/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "bimodal/errors.hpp"

namespace bimodal {

double find_root(const std::function<double(double)>& f, double lo, double hi) {
  if (!(lo <= hi)) std::swap(lo, hi);
  const double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || (flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("find_root: f(" + std::to_string(lo) + ") and f(" + std::to_string(hi) +
                       ") do not bracket a root");
  }
  auto narrow = [](double a, double b) {
    return std::fabs(b - a) < 1e-13 * std::max(1.0, std::min(std::fabs(a), std::fabs(b)));
  };
  std::uintmax_t max_iter = 500;
  const auto bracket =
      boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, narrow, max_iter);
  // Return the endpoint with the smaller residual.
  const double a = bracket.first;
  const double b = bracket.second;
  return std::fabs(f(a)) <= std::fabs(f(b)) ? a : b;
}

double argmax_on_interval(const std::function<double(double)>& f, double lo, double hi) {
  auto neg = [&](double x) { return -f(x); };
  const int bits = std::numeric_limits<double>::digits / 2;
  std::uintmax_t max_iter = 500;
  return boost::math::tools::brent_find_minima(neg, lo, hi, bits, max_iter).first;
}

std::vector<double> grid_local_maxima(const std::function<double(double)>& f, double lo,
                                      double hi, int grid_points) {
  if (grid_points < 3 || !(hi > lo)) {
    throw DomainError("grid_local_maxima: need at least 3 points over a nonempty interval");
  }
  const double step = (hi - lo) / (grid_points - 1);
  std::vector<double> xs(grid_points);
  std::vector<double> fs(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    xs[i] = lo + step * i;
    fs[i] = f(xs[i]);
  }
  std::vector<double> modes;
  for (int i = 1; i + 1 < grid_points; ++i) {
    if (fs[i] > fs[i - 1] && fs[i] >= fs[i + 1]) {
      const double m = argmax_on_interval(f, xs[i - 1], xs[i + 1]);
      if (modes.empty() || std::fabs(m - modes.back()) > 1e-9 * std::max(1.0, std::fabs(m))) {
        modes.push_back(m);
      }
    }
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

}  // namespace bimodal

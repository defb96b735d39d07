#pragma once

#include <functional>
#include <vector>

namespace bimodal {

/// Bracketing root finder (TOMS 748). Requires f(lo)*f(hi) <= 0, otherwise
/// throws BracketError. Stops when |f(x)| hits zero or the bracket is
/// narrower than 1e-13*max(1,|x|).
double find_root(const std::function<double(double)>& f, double lo, double hi);

/// Maximizes a unimodal function on [lo, hi] by Brent's method and returns
/// the argmax.
double argmax_on_interval(const std::function<double(double)>& f, double lo, double hi);

/// Every strict local maximum of f found on an n-point grid over [lo, hi]
/// and refined by argmax_on_interval, sorted ascending.
std::vector<double> grid_local_maxima(const std::function<double(double)>& f, double lo,
                                      double hi, int grid_points = 4096);

}  // namespace bimodal

#include "bimodal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bimodal/errors.hpp"
#include "bimodal/special.hpp"

namespace bimodal {

void Quadrature::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("Quadrature: tolerances must be strictly positive");
  }
  if (max_subdivisions < 1) {
    throw DomainError("Quadrature: max_subdivisions must be at least 1");
  }
}

namespace {

constexpr double kHalfPi = 0.5 * kPi;

enum class MapKind { kIdentity, kUpperInfinite, kLowerInfinite, kBothInfinite };

// One piece of the integration range, expressed in the variable u.
struct Segment {
  MapKind kind;
  double anchor;  // finite endpoint (or center for kBothInfinite)
  double scale;
};

struct Panel {
  std::size_t segment;
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

class Integrator {
 public:
  Integrator(const ScalarFn& f, std::vector<Segment> segments)
      : f_(f), segments_(std::move(segments)) {}

  double mapped(std::size_t seg, double u) const {
    const Segment& s = segments_[seg];
    double x;
    double jac;
    switch (s.kind) {
      case MapKind::kIdentity:
        x = u;
        jac = 1.0;
        break;
      case MapKind::kUpperInfinite: {
        const double c = std::cos(u);
        x = s.anchor + s.scale * std::tan(u);
        jac = s.scale / (c * c);
        break;
      }
      case MapKind::kLowerInfinite: {
        const double c = std::cos(u);
        x = s.anchor - s.scale * std::tan(u);
        jac = s.scale / (c * c);
        break;
      }
      case MapKind::kBothInfinite:
      default: {
        const double c = std::cos(u);
        x = s.anchor + s.scale * std::tan(u);
        jac = s.scale / (c * c);
        break;
      }
    }
    const double fx = f_(x);
    if (fx == 0.0) return 0.0;
    const double v = fx * jac;
    if (!std::isfinite(v)) {
      throw IntegrationError("integrate: non-finite integrand at x = " + std::to_string(x),
                             std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::infinity());
    }
    return v;
  }

  Panel evaluate(std::size_t seg, double a, double b) const {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = mapped(seg, mid);
    double kronrod = wk[0] * f0;
    double gauss = 0.0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
      const double dx = half * xk[i];
      const double pair = mapped(seg, mid - dx) + mapped(seg, mid + dx);
      kronrod += wk[i] * pair;
      // The 10-point Gauss nodes sit at the odd Kronrod indices.
      if (i % 2 == 1) gauss += wg[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return Panel{seg, a, b, kronrod, std::fabs(kronrod - gauss)};
  }

 private:
  const ScalarFn& f_;
  std::vector<Segment> segments_;
};

}  // namespace

QuadratureResult integrate_detailed(const ScalarFn& f, double lo, double hi,
                                    const Quadrature& q, const RealLineHint& hint) {
  q.validate();
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("integrate: NaN limit");
  if (lo == hi) return {};
  if (lo > hi) {
    QuadratureResult r = integrate_detailed(f, hi, lo, q, hint);
    r.value = -r.value;
    return r;
  }
  if (!(hint.scale > 0.0)) throw DomainError("integrate: hint scale must be positive");

  std::vector<double> cuts;
  for (double b : hint.breakpoints) {
    if (std::isfinite(b) && b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> edges;
  edges.push_back(lo);
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(hi);

  std::vector<Segment> segments;
  std::vector<std::pair<double, double>> ranges;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const bool a_inf = std::isinf(a);
    const bool b_inf = std::isinf(b);
    if (a_inf && b_inf) {
      segments.push_back({MapKind::kBothInfinite, hint.center, hint.scale});
      // Split at u = 0 so the center is a panel edge.
      ranges.emplace_back(-kHalfPi, 0.0);
      segments.push_back({MapKind::kBothInfinite, hint.center, hint.scale});
      ranges.emplace_back(0.0, kHalfPi);
    } else if (b_inf) {
      segments.push_back({MapKind::kUpperInfinite, a, hint.scale});
      ranges.emplace_back(0.0, kHalfPi);
    } else if (a_inf) {
      segments.push_back({MapKind::kLowerInfinite, b, hint.scale});
      ranges.emplace_back(0.0, kHalfPi);
    } else {
      segments.push_back({MapKind::kIdentity, 0.0, 1.0});
      ranges.emplace_back(a, b);
    }
  }

  Integrator integrator(f, segments);
  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    Panel p = integrator.evaluate(s, ranges[s].first, ranges[s].second);
    total += p.value;
    total_err += p.error;
    panels.push(p);
  }

  int subdivisions = 0;
  while (total_err > std::max(q.abs_tol, q.rel_tol * std::fabs(total))) {
    if (subdivisions >= q.max_subdivisions) {
      throw IntegrationError("integrate: tolerance not reached within " +
                                 std::to_string(q.max_subdivisions) + " subdivisions",
                             total, total_err);
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = integrator.evaluate(worst.segment, worst.a, mid);
    Panel right = integrator.evaluate(worst.segment, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of the running update.
  double resummed = 0.0;
  double err = 0.0;
  while (!panels.empty()) {
    resummed += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {resummed, err, subdivisions};
}

double integrate(const ScalarFn& f, double lo, double hi, const Quadrature& q,
                 const RealLineHint& hint) {
  return integrate_detailed(f, lo, hi, q, hint).value;
}

double integrate_real_line(const ScalarFn& f, const Quadrature& q, const RealLineHint& hint) {
  const double inf = std::numeric_limits<double>::infinity();
  return integrate_detailed(f, -inf, inf, q, hint).value;
}

}  // namespace bimodal

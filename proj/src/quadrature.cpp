#include "vring/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace vring::quad {
namespace {

Rule compute_rule(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess followed by Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(compute_rule(n));
  return *slot;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double composite(const std::function<double(double)>& f, std::span<const double> breaks,
                 int nodes_per_panel) {
  if (breaks.size() < 2) throw std::invalid_argument("composite: need at least two breaks");
  const Rule& rule = gauss_legendre(nodes_per_panel);
  CompensatedSum acc;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      acc.add(half * rule.weights[i] * f(mid + half * rule.nodes[i]));
    }
  }
  return acc.value();
}

std::vector<double> graded_breaks(double a, double b, int panels, double ratio) {
  std::vector<double> out;
  out.reserve(panels + 1);
  out.push_back(a);
  for (int k = panels - 1; k >= 1; --k) out.push_back(a + (b - a) * std::pow(ratio, k));
  out.push_back(b);
  return out;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double* error, unsigned max_depth) {
  // Global adaptive bisection: always split the panel with the largest
  // Gauss-Kronrod error estimate, until the summed estimate meets the
  // tolerance, reaches roundoff level, or the panel budget is exhausted.
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  struct Panel {
    double a, b, value, error, l1;
    unsigned depth;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto estimate = [&](double lo, double hi, unsigned depth) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    return Panel{lo, hi, v, err, l1, depth};
  };
  std::priority_queue<Panel> heap;
  heap.push(estimate(a, b, 0));
  constexpr std::size_t kMaxPanels = 4000;
  double total = heap.top().value;
  double total_err = heap.top().error;
  double l1_total = heap.top().l1;
  while (heap.size() < kMaxPanels) {
    // Below roughly 64 ulp of the L1 norm the Kronrod estimate is roundoff.
    const double target = std::max(rel_tol * std::abs(total), 64.0 * 2.2e-16 * l1_total);
    if (total_err <= target) break;
    Panel worst = heap.top();
    if (worst.depth >= max_depth) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = estimate(worst.a, mid, worst.depth + 1);
    const Panel right = estimate(mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    l1_total += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // Resum in panel order for a result independent of the refinement history.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  CompensatedSum value;
  CompensatedSum err;
  for (const Panel& p : panels) {
    value.add(p.value);
    err.add(p.error);
  }
  if (error) *error = err.value();
  return value.value();
}

double adaptive_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                       double rel_tol) {
  CompensatedSum acc;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    acc.add(adaptive(f, breaks[p], breaks[p + 1], rel_tol));
  }
  return acc.value();
}

}  // namespace vring::quad

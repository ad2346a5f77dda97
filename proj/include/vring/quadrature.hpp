#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vring::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Returns the n-point rule. Rules are computed once and cached for the
/// lifetime of the process; the returned reference stays valid.
const Rule& gauss_legendre(int n);

/// Neumaier compensated sum. Order of `add` calls fully determines the result.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Fixed composite Gauss-Legendre over the panels defined by `breaks`
/// (strictly increasing, at least two entries).
double composite(const std::function<double(double)>& f, std::span<const double> breaks,
                 int nodes_per_panel);

/// Geometric breakpoints on [a, b] graded toward `a`: a, a + h, a + 2h ... is
/// replaced by a, a + (b-a) q^{n-1}, ..., a + (b-a) q, b.
std::vector<double> graded_breaks(double a, double b, int panels, double ratio);

/// Adaptive Gauss-Kronrod (21 point) on [a, b]; returns the estimate and
/// stores the error estimate in `error` when non-null.
double adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double* error = nullptr, unsigned max_depth = 30);

/// Adaptive integration over consecutive panels given by `breaks`.
double adaptive_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                       double rel_tol);

}  // namespace vring::quad

#include "ttorsion/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace ttorsion::detail {

namespace {

GaussRule make_rule(int npoints) {
  GaussRule rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  const int half = (npoints + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= npoints; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npoints * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute the derivative at the converged node for the weight.
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= npoints; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npoints * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[npoints - 1 - i] = x;
    rule.weights[npoints - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_rule_15() {
  static const GaussRule rule = make_rule(15);
  return rule;
}

const GaussRule& gauss_rule_30() {
  static const GaussRule rule = make_rule(30);
  return rule;
}

}  // namespace ttorsion::detail

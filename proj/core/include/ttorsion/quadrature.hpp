#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "ttorsion/errors.hpp"

namespace ttorsion {

// Kahan-Babuska compensated accumulator; fixed insertion order gives
// reproducible sums.
class NeumaierSum {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// Nodes and weights computed once by Newton iteration on Legendre polynomials.
const GaussRule& gauss_rule_15();
const GaussRule& gauss_rule_30();

inline double error_norm(double x) { return std::abs(x); }
inline double error_norm(const std::complex<double>& x) { return std::abs(x); }

template <class F, class T>
T panel_value(F& f, double a, double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T acc{};
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += T(rule.weights[i] * half) * f(mid + half * rule.nodes[i]);
  }
  return acc;
}

}  // namespace detail

// Adaptive bisection with embedded 15/30-point Gauss rules. The error
// estimate per panel is |G30 - G15|; tolerance is apportioned by length.
template <class F>
auto adaptive_integrate(F&& f, double a, double b, double abs_tol,
                        int max_depth = 48) -> decltype(f(a)) {
  using T = decltype(f(a));
  if (!(abs_tol > 0)) throw domain_error("adaptive_integrate: tolerance must be positive");
  if (a == b) return T{};
  const auto& lo = detail::gauss_rule_15();
  const auto& hi = detail::gauss_rule_30();
  const double total_len = std::abs(b - a);
  struct Panel {
    double a, b;
    int depth;
  };
  std::vector<Panel> stack = {{a, b, 0}};
  T result{};
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    T coarse = detail::panel_value<F, T>(f, p.a, p.b, lo);
    T fine = detail::panel_value<F, T>(f, p.a, p.b, hi);
    double err = detail::error_norm(fine - coarse);
    double share = abs_tol * std::abs(p.b - p.a) / total_len;
    if (err <= share || err <= 1e-300) {
      result += fine;
      continue;
    }
    if (p.depth >= max_depth) {
      throw certification_error("adaptive_integrate: panel tolerance not met at max depth");
    }
    double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b, p.depth + 1});
    stack.push_back({p.a, mid, p.depth + 1});
  }
  return result;
}

}  // namespace ttorsion

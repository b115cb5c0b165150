#pragma once

#include <map>
#include <string>
#include <vector>

#include "ttorsion/exact.hpp"
#include "ttorsion/model.hpp"

namespace ttorsion {

// Exponent vector over the 2n real coordinates.
using MultiIndex = std::vector<int>;

int multi_total(const MultiIndex& m);
MultiIndex multi_zero(int n2);
MultiIndex multi_unit(int n2, int i);

struct TermKey {
  int p_power;
  MultiIndex x;
  MultiIndex d;
  bool operator<(const TermKey& o) const {
    if (p_power != o.p_power) return p_power < o.p_power;
    if (x != o.x) return x < o.x;
    return d < o.d;
  }
};

// Formal sum of terms coeff * p^l * x^I * d^J with exact matrix coefficients,
// kept normalized (sorted keys, merged like terms, zero terms pruned).
class SymbolicOperator {
public:
  SymbolicOperator(int n, int fiber_dim);
  static SymbolicOperator identity(int n, int fiber_dim);

  int n() const { return n_; }
  int coords() const { return 2 * n_; }
  int fiber_dim() const { return fiber_; }

  void add(int p_power, const MultiIndex& x, const MultiIndex& d, const RatMatrix& coeff);
  const std::map<TermKey, RatMatrix>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  // Max over terms of 2l - |I| + |J|; degree_sentinel() when zero.
  int degree() const;
  static int degree_sentinel();

  SymbolicOperator operator-() const;
  SymbolicOperator& operator+=(const SymbolicOperator& o);
  SymbolicOperator& operator-=(const SymbolicOperator& o);
  SymbolicOperator& operator*=(const GaussRat& s);
  friend SymbolicOperator operator+(SymbolicOperator a, const SymbolicOperator& b) {
    return a += b;
  }
  friend SymbolicOperator operator-(SymbolicOperator a, const SymbolicOperator& b) {
    return a -= b;
  }
  friend SymbolicOperator operator*(const GaussRat& s, SymbolicOperator a) { return a *= s; }

  // Constant coefficient at x = 0 of the purely multiplicative part with the
  // given p power (terms with I = J = 0).
  RatMatrix constant_coefficient(int p_power) const;

  SymbolicOperator max_degree_part() const;

  std::string to_text() const;

private:
  int n_;
  int fiber_;
  std::map<TermKey, RatMatrix> terms_;
};

SymbolicOperator compose(const SymbolicOperator& T, const SymbolicOperator& S);

// Polynomial section: sum of coeff * p^l * x^I (no derivatives).
class PolySection {
public:
  struct Key {
    int p_power;
    MultiIndex x;
    bool operator<(const Key& o) const {
      if (p_power != o.p_power) return p_power < o.p_power;
      return x < o.x;
    }
  };

  PolySection(int n, int fiber_dim);
  static PolySection identity(int n, int fiber_dim);

  int n() const { return n_; }
  int fiber_dim() const { return fiber_; }

  void add(int p_power, const MultiIndex& x, const RatMatrix& coeff);
  const std::map<Key, RatMatrix>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Max over monomials of 2l - |I|.
  int degree() const;

  // x^M -> x^M / (j + |M|).
  PolySection radial_integrate(int j) const;

  // p-power -> matrix coefficient of the constant monomial.
  std::map<int, RatMatrix> at_origin() const;
  int max_p_power_at_origin() const;

  PolySection operator-() const;

  std::string to_text() const;

private:
  int n_;
  int fiber_;
  std::map<Key, RatMatrix> terms_;
};

// Apply a differential operator to a polynomial section.
PolySection apply(const SymbolicOperator& op, const PolySection& f);

// Heat parametrix coefficients on the flat model, from the transport
// equation (j + r d_r - S) Theta_j = -op Theta_{j-1} with Theta_0(0) = Id,
// where S is half the first-order part of op contracted with x (the
// gradient coupling of the Gaussian factor). When S vanishes, as it does for
// the purely magnetic operators, the sections are the exact polynomials.
// Odd first-order terms make the exact sections entire series in x; each
// returned section then keeps every x-degree that can still reach the origin
// values of Theta_0..Theta_jmax, so at_origin() is exact for all of them.
// Requires jmax <= 4.
std::vector<PolySection> parametrix_coefficients(const SymbolicOperator& op, int jmax);

// The twisted Dirac operator sum_i c(e_i)(d_i + p Gamma_i) + c(B) in the
// synchronous gauge Gamma_{2l} = (i a_l/2) x_{2l+1}, Gamma_{2l+1} = -(i a_l/2) x_{2l}.
SymbolicOperator assemble_dirac(const TorusModel& model);

// Mechanical square compose(D, D); degree exactly 2.
SymbolicOperator assemble_dirac_squared(const TorusModel& model);

// The Bochner-style transcription -sum_i (d_i + p Gamma_i + c(iota_i B))^2
// + p c(R^L) - |B|^2. Differs from the mechanical square by a constant
// endomorphism when B != 0; kept as a tested diagnostic, not as the operator.
SymbolicOperator lichnerowicz_form(const TorusModel& model);

}  // namespace ttorsion

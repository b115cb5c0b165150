#pragma once

#include <map>
#include <vector>

#include "ttorsion/exact.hpp"
#include "ttorsion/pgrading.hpp"

namespace ttorsion::weyl {

// Normal-ordered monomials G^g V^v over the 2n guiding-center operators G_i
// and the 2n magnetic derivatives V_i (per complex mode l, written 0-based:
// V_{2l} = d_{2l} + (i b_l/2) x_{2l+1}, V_{2l+1} = d_{2l+1} - (i b_l/2) x_{2l},
// G_{2l} = d_{2l} - (i b_l/2) x_{2l+1}, G_{2l+1} = d_{2l+1} + (i b_l/2) x_{2l},
// b_l = p a_l). Nonzero commutators: [G_{2l}, G_{2l+1}] = i b_l and
// [V_{2l}, V_{2l+1}] = -i b_l; every G commutes with every V.
struct Key {
  MultiIndex g;
  MultiIndex v;
  bool operator<(const Key& o) const {
    if (g != o.g) return g < o.g;
    return v < o.v;
  }
};

class Poly {
public:
  Poly(int n, int fiber_dim);

  int n() const { return n_; }
  int coords() const { return 2 * n_; }
  int fiber_dim() const { return fiber_; }

  void add(const Key& key, const RatMatrix& coeff);
  const std::map<Key, RatMatrix>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // True when no monomial carries a guiding-center factor.
  bool g_free() const;

  Poly& operator+=(const Poly& o);

private:
  int n_;
  int fiber_;
  std::map<Key, RatMatrix> terms_;
};

// Product with exact normal-ordering; b[l] are the commutator scales b_l.
Poly multiply(const Poly& A, const Poly& B, const std::vector<Rational>& b);

// Substitute x_i and d_i by their G/V combinations at tensor power p.
// A differential operator that is a polynomial in the magnetic derivatives
// alone comes out g_free; landau-spectral asserts this.
Poly from_symbolic(const SymbolicOperator& op, int p, const std::vector<Rational>& a);

}  // namespace ttorsion::weyl

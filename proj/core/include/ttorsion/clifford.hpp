#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

#include "ttorsion/errors.hpp"
#include "ttorsion/exact.hpp"

namespace ttorsion {

enum class Parity { Even, Odd, Mixed };

// Exterior algebra of antiholomorphic covectors in n complex dimensions.
// Basis vector index is the subset bitmask: bit l-1 set iff mode l occurs;
// this realizes the lexicographic characteristic-vector order on subsets.
struct SpinorSpace {
  explicit SpinorSpace(int n_in);
  int n;
  int dim;  // 2^n

  int degree(int index) const;  // popcount of the subset mask
};

struct CliffordElement {
  Eigen::MatrixXcd mat;
  Parity parity = Parity::Mixed;
};

Parity parity_of(const Eigen::MatrixXcd& m);

// Constant real three-form on flat coordinates, stored as B_{ijk} for
// 0 <= i < j < k < 2n (zero-based real indices).
class ThreeForm {
public:
  explicit ThreeForm(int n_in);

  int n() const { return n_; }
  int real_dim() const { return 2 * n_; }

  void set(int i, int j, int k, double value);
  double get(int i, int j, int k) const;  // any index order, with sign

  double norm_squared() const;  // sum of squares over i<j<k
  bool is_zero() const;

private:
  int n_;
  std::vector<double> coeff_;  // indexed over i<j<k triples
  int flat_index(int i, int j, int k) const;
};

// Wedge/contraction ladder pair for each mode l = 1..n.
std::vector<std::pair<CliffordElement, CliffordElement>> ladder_operators(
    const SpinorSpace& space);

// Clifford action of the real coordinate vector e_i (zero-based i < 2n):
// c(e_{2l-1}) = cr_l - an_l and c(e_{2l}) = i(cr_l + an_l) in 1-based labels.
CliffordElement clifford_generator(const SpinorSpace& space, int i);

// Clifford action of a general real vector (length 2n).
CliffordElement clifford_vector(const SpinorSpace& space, const Eigen::VectorXd& v);

// c(B) = sum_{i<j<k} B_{ijk} c(e_i)c(e_j)c(e_k); odd and self-adjoint.
CliffordElement clifford_three_form(const SpinorSpace& space, const ThreeForm& B);

// c(iota_{e_m} B) = sum over pairs with contraction signs; even parity.
CliffordElement clifford_contraction_three_form(const SpinorSpace& space,
                                                const ThreeForm& B, int m);

// omega_d = -sum_l a_l (number operator of mode l); diagonal.
CliffordElement omega_d(const SpinorSpace& space, const std::vector<double>& a);

// Clifford action of the curvature two-form, assembled from generator
// products; equals -2*omega_d - (sum_l a_l) Id on the diagonal.
CliffordElement clifford_curvature(const SpinorSpace& space, const std::vector<double>& a);

// Diagonal exponential of u*omega_d.
Eigen::MatrixXcd exp_omega_d(const SpinorSpace& space, const std::vector<double>& a,
                             double u);

Eigen::MatrixXcd number_operator(const SpinorSpace& space);
Eigen::MatrixXcd parity_operator(const SpinorSpace& space);

std::complex<double> supertrace(const SpinorSpace& space, const Eigen::MatrixXcd& A);
std::complex<double> number_weighted_supertrace(const SpinorSpace& space,
                                                const Eigen::MatrixXcd& A);

// Exact-arithmetic twins (entries are Gaussian rationals).
RatMatrix ladder_creation_rat(int n, int l);      // l = 1..n
RatMatrix ladder_annihilation_rat(int n, int l);  // l = 1..n
RatMatrix clifford_generator_rat(int n, int i);   // i = 0..2n-1
RatMatrix clifford_three_form_rat(int n, const ThreeForm& B);
RatMatrix clifford_contraction_three_form_rat(int n, const ThreeForm& B, int m);
RatMatrix omega_d_rat(int n, const std::vector<Rational>& a);
RatMatrix clifford_curvature_rat(int n, const std::vector<Rational>& a);
RatMatrix number_operator_rat(int n);

}  // namespace ttorsion

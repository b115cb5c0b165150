#include "ttorsion/clifford.hpp"

#include <bit>
#include <cmath>

namespace ttorsion {

namespace {

int popcount_below(int mask, int bit) {
  return std::popcount(static_cast<unsigned>(mask & ((1 << bit) - 1)));
}

}  // namespace

SpinorSpace::SpinorSpace(int n_in) : n(n_in), dim(0) {
  if (n < 1 || n > 12) throw domain_error("SpinorSpace: n out of range [1,12]");
  dim = 1 << n;
}

int SpinorSpace::degree(int index) const {
  if (index < 0 || index >= dim) throw domain_error("SpinorSpace::degree: bad index");
  return std::popcount(static_cast<unsigned>(index));
}

Parity parity_of(const Eigen::MatrixXcd& m) {
  bool has_even = false;
  bool has_odd = false;
  for (int c = 0; c < m.cols(); ++c) {
    for (int r = 0; r < m.rows(); ++r) {
      if (m(r, c) == 0.0) continue;
      int d = std::popcount(static_cast<unsigned>(r)) ^
              std::popcount(static_cast<unsigned>(c));
      if (d & 1) {
        has_odd = true;
      } else {
        has_even = true;
      }
    }
  }
  if (has_even && has_odd) return Parity::Mixed;
  if (has_odd) return Parity::Odd;
  return Parity::Even;
}

ThreeForm::ThreeForm(int n_in) : n_(n_in) {
  if (n_ < 1 || n_ > 12) throw domain_error("ThreeForm: n out of range [1,12]");
  int d = 2 * n_;
  coeff_.assign(static_cast<size_t>(d) * d * d, 0.0);
}

int ThreeForm::flat_index(int i, int j, int k) const {
  int d = 2 * n_;
  return (i * d + j) * d + k;
}

void ThreeForm::set(int i, int j, int k, double value) {
  int d = 2 * n_;
  if (!(0 <= i && i < j && j < k && k < d))
    throw domain_error("ThreeForm::set: need 0 <= i < j < k < 2n");
  coeff_[flat_index(i, j, k)] = value;
  coeff_[flat_index(j, k, i)] = value;
  coeff_[flat_index(k, i, j)] = value;
  coeff_[flat_index(j, i, k)] = -value;
  coeff_[flat_index(i, k, j)] = -value;
  coeff_[flat_index(k, j, i)] = -value;
}

double ThreeForm::get(int i, int j, int k) const {
  int d = 2 * n_;
  if (i < 0 || j < 0 || k < 0 || i >= d || j >= d || k >= d)
    throw domain_error("ThreeForm::get: index out of range");
  if (i == j || j == k || i == k) return 0.0;
  return coeff_[flat_index(i, j, k)];
}

double ThreeForm::norm_squared() const {
  double s = 0.0;
  int d = 2 * n_;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        double v = coeff_[flat_index(i, j, k)];
        s += v * v;
      }
  return s;
}

bool ThreeForm::is_zero() const {
  for (double v : coeff_)
    if (v != 0.0) return false;
  return true;
}

std::vector<std::pair<CliffordElement, CliffordElement>> ladder_operators(
    const SpinorSpace& space) {
  std::vector<std::pair<CliffordElement, CliffordElement>> out;
  out.reserve(space.n);
  for (int l = 1; l <= space.n; ++l) {
    Eigen::MatrixXcd cr = Eigen::MatrixXcd::Zero(space.dim, space.dim);
    int bit = 1 << (l - 1);
    for (int mask = 0; mask < space.dim; ++mask) {
      if (mask & bit) continue;
      double sign = (popcount_below(mask, l - 1) & 1) ? -1.0 : 1.0;
      cr(mask | bit, mask) = sign;
    }
    CliffordElement creation{cr, Parity::Odd};
    CliffordElement annihilation{cr.adjoint(), Parity::Odd};
    out.emplace_back(std::move(creation), std::move(annihilation));
  }
  return out;
}

CliffordElement clifford_generator(const SpinorSpace& space, int i) {
  if (i < 0 || i >= 2 * space.n) throw domain_error("clifford_generator: index out of range");
  int l = i / 2 + 1;
  int bit = 1 << (l - 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  const std::complex<double> iu(0.0, 1.0);
  for (int mask = 0; mask < space.dim; ++mask) {
    double sign = (popcount_below(mask, l - 1) & 1) ? -1.0 : 1.0;
    if (!(mask & bit)) {
      // creation contribution
      m(mask | bit, mask) += (i % 2 == 0) ? std::complex<double>(sign) : iu * sign;
    } else {
      // annihilation contribution
      m(mask & ~bit, mask) += (i % 2 == 0) ? std::complex<double>(-sign) : iu * sign;
    }
  }
  return {std::move(m), Parity::Odd};
}

CliffordElement clifford_vector(const SpinorSpace& space, const Eigen::VectorXd& v) {
  if (v.size() != 2 * space.n) throw domain_error("clifford_vector: length must be 2n");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    m += v[i] * clifford_generator(space, i).mat;
  }
  return {std::move(m), Parity::Odd};
}

CliffordElement clifford_three_form(const SpinorSpace& space, const ThreeForm& B) {
  if (B.n() != space.n) throw domain_error("clifford_three_form: dimension mismatch");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  int d = 2 * space.n;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        double b = B.get(i, j, k);
        if (b == 0.0) continue;
        m += b * (clifford_generator(space, i).mat * clifford_generator(space, j).mat *
                  clifford_generator(space, k).mat);
      }
  double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw domain_error("clifford_three_form: self-adjointness check failed");
  return {std::move(m), Parity::Odd};
}

CliffordElement clifford_contraction_three_form(const SpinorSpace& space,
                                                const ThreeForm& B, int m) {
  if (B.n() != space.n) throw domain_error("clifford_contraction: dimension mismatch");
  if (m < 0 || m >= 2 * space.n) throw domain_error("clifford_contraction: index out of range");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  int d = 2 * space.n;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        double b = B.get(i, j, k);
        if (b == 0.0) continue;
        if (m == i) {
          out += b * (clifford_generator(space, j).mat * clifford_generator(space, k).mat);
        } else if (m == j) {
          out -= b * (clifford_generator(space, i).mat * clifford_generator(space, k).mat);
        } else if (m == k) {
          out += b * (clifford_generator(space, i).mat * clifford_generator(space, j).mat);
        }
      }
  return {std::move(out), Parity::Even};
}

CliffordElement omega_d(const SpinorSpace& space, const std::vector<double>& a) {
  if (static_cast<int>(a.size()) != space.n) throw domain_error("omega_d: need n eigenvalues");
  for (double v : a)
    if (!(v > 0.0)) throw domain_error("omega_d: curvature eigenvalues must be positive");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int mask = 0; mask < space.dim; ++mask) {
    double s = 0.0;
    for (int l = 0; l < space.n; ++l)
      if (mask & (1 << l)) s += a[l];
    m(mask, mask) = -s;
  }
  return {std::move(m), Parity::Even};
}

CliffordElement clifford_curvature(const SpinorSpace& space, const std::vector<double>& a) {
  if (static_cast<int>(a.size()) != space.n)
    throw domain_error("clifford_curvature: need n eigenvalues");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  const std::complex<double> minus_i(0.0, -1.0);
  for (int l = 0; l < space.n; ++l) {
    m += (minus_i * a[l]) * (clifford_generator(space, 2 * l).mat *
                             clifford_generator(space, 2 * l + 1).mat);
  }
  return {std::move(m), Parity::Even};
}

Eigen::MatrixXcd exp_omega_d(const SpinorSpace& space, const std::vector<double>& a,
                             double u) {
  if (static_cast<int>(a.size()) != space.n) throw domain_error("exp_omega_d: need n eigenvalues");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int mask = 0; mask < space.dim; ++mask) {
    double s = 0.0;
    for (int l = 0; l < space.n; ++l)
      if (mask & (1 << l)) s += a[l];
    m(mask, mask) = std::exp(-u * s);
  }
  return m;
}

Eigen::MatrixXcd number_operator(const SpinorSpace& space) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int mask = 0; mask < space.dim; ++mask) m(mask, mask) = space.degree(mask);
  return m;
}

Eigen::MatrixXcd parity_operator(const SpinorSpace& space) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim, space.dim);
  for (int mask = 0; mask < space.dim; ++mask)
    m(mask, mask) = (space.degree(mask) & 1) ? -1.0 : 1.0;
  return m;
}

std::complex<double> supertrace(const SpinorSpace& space, const Eigen::MatrixXcd& A) {
  if (A.rows() != space.dim || A.cols() != space.dim)
    throw domain_error("supertrace: dimension mismatch");
  std::complex<double> s = 0.0;
  for (int mask = 0; mask < space.dim; ++mask) {
    double sign = (space.degree(mask) & 1) ? -1.0 : 1.0;
    s += sign * A(mask, mask);
  }
  return s;
}

std::complex<double> number_weighted_supertrace(const SpinorSpace& space,
                                                const Eigen::MatrixXcd& A) {
  if (A.rows() != space.dim || A.cols() != space.dim)
    throw domain_error("number_weighted_supertrace: dimension mismatch");
  std::complex<double> s = 0.0;
  for (int mask = 0; mask < space.dim; ++mask) {
    int q = space.degree(mask);
    double sign = (q & 1) ? -1.0 : 1.0;
    s += sign * static_cast<double>(q) * A(mask, mask);
  }
  return s;
}

RatMatrix ladder_creation_rat(int n, int l) {
  if (n < 1 || n > 12 || l < 1 || l > n) throw domain_error("ladder_creation_rat: bad index");
  int dim = 1 << n;
  int bit = 1 << (l - 1);
  RatMatrix m(dim, dim);
  for (int mask = 0; mask < dim; ++mask) {
    if (mask & bit) continue;
    int sign = (popcount_below(mask, l - 1) & 1) ? -1 : 1;
    m(mask | bit, mask) = GaussRat(sign);
  }
  return m;
}

RatMatrix ladder_annihilation_rat(int n, int l) { return ladder_creation_rat(n, l).adjoint(); }

RatMatrix clifford_generator_rat(int n, int i) {
  if (n < 1 || n > 12 || i < 0 || i >= 2 * n)
    throw domain_error("clifford_generator_rat: bad index");
  int l = i / 2 + 1;
  RatMatrix cr = ladder_creation_rat(n, l);
  RatMatrix an = ladder_annihilation_rat(n, l);
  if (i % 2 == 0) return cr - an;
  return GaussRat::i() * (cr + an);
}

RatMatrix clifford_three_form_rat(int n, const ThreeForm& B) {
  if (B.n() != n) throw domain_error("clifford_three_form_rat: dimension mismatch");
  int dim = 1 << n;
  RatMatrix m(dim, dim);
  int d = 2 * n;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        double b = B.get(i, j, k);
        if (b == 0.0) continue;
        GaussRat rb(rational_from_double(b));
        m += rb * (clifford_generator_rat(n, i) * clifford_generator_rat(n, j) *
                   clifford_generator_rat(n, k));
      }
  return m;
}

RatMatrix clifford_contraction_three_form_rat(int n, const ThreeForm& B, int mi) {
  if (B.n() != n) throw domain_error("clifford_contraction_rat: dimension mismatch");
  if (mi < 0 || mi >= 2 * n) throw domain_error("clifford_contraction_rat: index out of range");
  int dim = 1 << n;
  RatMatrix out(dim, dim);
  int d = 2 * n;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        double b = B.get(i, j, k);
        if (b == 0.0) continue;
        GaussRat rb(rational_from_double(b));
        if (mi == i) {
          out += rb * (clifford_generator_rat(n, j) * clifford_generator_rat(n, k));
        } else if (mi == j) {
          out -= rb * (clifford_generator_rat(n, i) * clifford_generator_rat(n, k));
        } else if (mi == k) {
          out += rb * (clifford_generator_rat(n, i) * clifford_generator_rat(n, j));
        }
      }
  return out;
}

RatMatrix omega_d_rat(int n, const std::vector<Rational>& a) {
  if (static_cast<int>(a.size()) != n) throw domain_error("omega_d_rat: need n eigenvalues");
  int dim = 1 << n;
  RatMatrix m(dim, dim);
  for (int mask = 0; mask < dim; ++mask) {
    Rational s(0);
    for (int l = 0; l < n; ++l)
      if (mask & (1 << l)) s += a[l];
    m(mask, mask) = GaussRat(-s);
  }
  return m;
}

RatMatrix clifford_curvature_rat(int n, const std::vector<Rational>& a) {
  if (static_cast<int>(a.size()) != n)
    throw domain_error("clifford_curvature_rat: need n eigenvalues");
  int dim = 1 << n;
  RatMatrix m(dim, dim);
  for (int l = 0; l < n; ++l) {
    GaussRat minus_i_al(Rational(0), -a[l]);
    m += minus_i_al *
         (clifford_generator_rat(n, 2 * l) * clifford_generator_rat(n, 2 * l + 1));
  }
  return m;
}

RatMatrix number_operator_rat(int n) {
  int dim = 1 << n;
  RatMatrix m(dim, dim);
  for (int mask = 0; mask < dim; ++mask)
    m(mask, mask) = GaussRat(std::popcount(static_cast<unsigned>(mask)));
  return m;
}

}  // namespace ttorsion

#include "ttorsion/exact.hpp"

#include <cmath>

namespace ttorsion {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw domain_error("rational_from_double: non-finite input");
  if (x == 0.0) return Rational(0);
  int e = 0;
  double m = std::frexp(x, &e);
  auto mantissa = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r(mantissa);
  boost::multiprecision::cpp_int one(1);
  if (e >= 0) {
    r *= Rational(one << e);
  } else {
    r /= Rational(one << (-e));
  }
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) { return r.str(); }

std::complex<double> to_complex(const GaussRat& g) {
  return {to_double(g.re), to_double(g.im)};
}

std::string to_string(const GaussRat& g) {
  if (g.im == 0) return to_string(g.re);
  if (g.re == 0) return to_string(g.im) + "*i";
  std::string s = to_string(g.re);
  if (g.im > 0) s += "+";
  s += to_string(g.im) + "*i";
  return s;
}

RatMatrix RatMatrix::Identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = GaussRat(1);
  return m;
}

bool RatMatrix::is_zero() const {
  for (const auto& v : data_)
    if (!v.is_zero()) return false;
  return true;
}

RatMatrix RatMatrix::adjoint() const {
  RatMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c).conj();
  return out;
}

GaussRat RatMatrix::trace() const {
  if (rows_ != cols_) throw domain_error("RatMatrix::trace: non-square matrix");
  GaussRat t;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

RatMatrix RatMatrix::operator-() const {
  RatMatrix out(rows_, cols_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = -data_[k];
  return out;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw domain_error("RatMatrix: size mismatch in addition");
  for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw domain_error("RatMatrix: size mismatch in subtraction");
  for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

RatMatrix& RatMatrix::operator*=(const GaussRat& s) {
  for (auto& v : data_) v *= s;
  return *this;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw domain_error("RatMatrix: size mismatch in product");
  RatMatrix out(a.rows_, b.cols_);
  for (int r = 0; r < a.rows_; ++r) {
    for (int k = 0; k < a.cols_; ++k) {
      const GaussRat& v = a(r, k);
      if (v.is_zero()) continue;
      for (int c = 0; c < b.cols_; ++c) {
        if (b(k, c).is_zero()) continue;
        out(r, c) += v * b(k, c);
      }
    }
  }
  return out;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Eigen::MatrixXcd RatMatrix::to_complex() const {
  Eigen::MatrixXcd out(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = ttorsion::to_complex((*this)(r, c));
  return out;
}

RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ar = 0; ar < a.rows(); ++ar)
    for (int ac = 0; ac < a.cols(); ++ac) {
      const GaussRat& v = a(ar, ac);
      if (v.is_zero()) continue;
      for (int br = 0; br < b.rows(); ++br)
        for (int bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
    }
  return out;
}

}  // namespace ttorsion

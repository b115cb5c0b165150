#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <vector>

#include "ttorsion/errors.hpp"

namespace ttorsion {

using Rational = boost::multiprecision::cpp_rational;

// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

// Gaussian rational a + b*i.
struct GaussRat {
  Rational re;
  Rational im;

  GaussRat() : re(0), im(0) {}
  GaussRat(Rational r) : re(std::move(r)), im(0) {}
  GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussRat(int r) : re(r), im(0) {}

  static GaussRat i() { return GaussRat(Rational(0), Rational(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat conj() const { return GaussRat(re, -im); }

  GaussRat operator-() const { return GaussRat(-re, -im); }
  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussRat& operator/=(const GaussRat& o) {
    Rational n = o.re * o.re + o.im * o.im;
    if (n == 0) throw domain_error("GaussRat: division by zero");
    Rational r = (re * o.re + im * o.im) / n;
    Rational i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
};

std::complex<double> to_complex(const GaussRat& g);
std::string to_string(const GaussRat& g);

// Small dense matrix over Gaussian rationals, row major.
class RatMatrix {
public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw domain_error("RatMatrix: negative size");
  }

  static RatMatrix Zero(int rows, int cols) { return RatMatrix(rows, cols); }
  static RatMatrix Identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  GaussRat& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const GaussRat& operator()(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }

  bool is_zero() const;
  RatMatrix adjoint() const;
  GaussRat trace() const;

  RatMatrix operator-() const;
  RatMatrix& operator+=(const RatMatrix& o);
  RatMatrix& operator-=(const RatMatrix& o);
  RatMatrix& operator*=(const GaussRat& s);

  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
  friend RatMatrix operator*(RatMatrix a, const GaussRat& s) { return a *= s; }
  friend RatMatrix operator*(const GaussRat& s, RatMatrix a) { return a *= s; }
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);
  friend bool operator!=(const RatMatrix& a, const RatMatrix& b) { return !(a == b); }

  Eigen::MatrixXcd to_complex() const;

private:
  int rows_;
  int cols_;
  std::vector<GaussRat> data_;
};

RatMatrix kron(const RatMatrix& a, const RatMatrix& b);

}  // namespace ttorsion

#include "ttorsion/pgrading.hpp"

#include <limits>
#include <sstream>

namespace ttorsion {

int multi_total(const MultiIndex& m) {
  int t = 0;
  for (int v : m) t += v;
  return t;
}

MultiIndex multi_zero(int n2) { return MultiIndex(static_cast<size_t>(n2), 0); }

MultiIndex multi_unit(int n2, int i) {
  MultiIndex m = multi_zero(n2);
  m[i] = 1;
  return m;
}

namespace {

Rational binomial_rat(int j, int r) {
  Rational num(1), den(1);
  for (int t = 0; t < r; ++t) {
    num *= (j - t);
    den *= (t + 1);
  }
  return num / den;
}

Rational falling_rat(int k, int r) {
  Rational f(1);
  for (int t = 0; t < r; ++t) f *= (k - t);
  return f;
}

void format_multi(std::ostringstream& os, const char* label, const MultiIndex& m) {
  os << label << "^(";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) os << ",";
    os << m[i];
  }
  os << ")";
}

void format_matrix(std::ostringstream& os, const RatMatrix& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      if (m(r, c).is_zero()) continue;
      os << "  [" << r << "," << c << "] = " << to_string(m(r, c)) << "\n";
    }
}

}  // namespace

SymbolicOperator::SymbolicOperator(int n, int fiber_dim) : n_(n), fiber_(fiber_dim) {
  if (n < 1) throw domain_error("SymbolicOperator: n must be positive");
  if (fiber_dim < 1) throw domain_error("SymbolicOperator: fiber dimension must be positive");
}

SymbolicOperator SymbolicOperator::identity(int n, int fiber_dim) {
  SymbolicOperator op(n, fiber_dim);
  op.add(0, multi_zero(2 * n), multi_zero(2 * n), RatMatrix::Identity(fiber_dim));
  return op;
}

void SymbolicOperator::add(int p_power, const MultiIndex& x, const MultiIndex& d,
                           const RatMatrix& coeff) {
  if (p_power < 0) throw domain_error("SymbolicOperator::add: negative p power");
  if (static_cast<int>(x.size()) != coords() || static_cast<int>(d.size()) != coords())
    throw domain_error("SymbolicOperator::add: multi-index length must be 2n");
  if (coeff.rows() != fiber_ || coeff.cols() != fiber_)
    throw domain_error("SymbolicOperator::add: coefficient dimension mismatch");
  if (coeff.is_zero()) return;
  TermKey key{p_power, x, d};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int SymbolicOperator::degree_sentinel() { return std::numeric_limits<int>::min(); }

int SymbolicOperator::degree() const {
  int deg = degree_sentinel();
  for (const auto& [key, coeff] : terms_) {
    int d = 2 * key.p_power - multi_total(key.x) + multi_total(key.d);
    if (d > deg) deg = d;
  }
  return deg;
}

SymbolicOperator SymbolicOperator::operator-() const {
  SymbolicOperator out(n_, fiber_);
  for (const auto& [key, coeff] : terms_) out.terms_.emplace(key, -coeff);
  return out;
}

SymbolicOperator& SymbolicOperator::operator+=(const SymbolicOperator& o) {
  if (n_ != o.n_ || fiber_ != o.fiber_)
    throw domain_error("SymbolicOperator: shape mismatch in addition");
  for (const auto& [key, coeff] : o.terms_) add(key.p_power, key.x, key.d, coeff);
  return *this;
}

SymbolicOperator& SymbolicOperator::operator-=(const SymbolicOperator& o) {
  if (n_ != o.n_ || fiber_ != o.fiber_)
    throw domain_error("SymbolicOperator: shape mismatch in subtraction");
  for (const auto& [key, coeff] : o.terms_) add(key.p_power, key.x, key.d, -coeff);
  return *this;
}

SymbolicOperator& SymbolicOperator::operator*=(const GaussRat& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, coeff] : terms_) coeff *= s;
  return *this;
}

RatMatrix SymbolicOperator::constant_coefficient(int p_power) const {
  TermKey key{p_power, multi_zero(coords()), multi_zero(coords())};
  auto it = terms_.find(key);
  if (it == terms_.end()) return RatMatrix::Zero(fiber_, fiber_);
  return it->second;
}

SymbolicOperator SymbolicOperator::max_degree_part() const {
  if (is_zero()) throw domain_error("max_degree_part: zero operator");
  int deg = degree();
  SymbolicOperator out(n_, fiber_);
  for (const auto& [key, coeff] : terms_) {
    if (2 * key.p_power - multi_total(key.x) + multi_total(key.d) == deg)
      out.terms_.emplace(key, coeff);
  }
  return out;
}

std::string SymbolicOperator::to_text() const {
  std::ostringstream os;
  os << "operator n=" << n_ << " fiber=" << fiber_ << " terms=" << terms_.size() << "\n";
  for (const auto& [key, coeff] : terms_) {
    os << "p^" << key.p_power << " ";
    format_multi(os, "x", key.x);
    os << " ";
    format_multi(os, "d", key.d);
    os << "\n";
    format_matrix(os, coeff);
  }
  return os.str();
}

SymbolicOperator compose(const SymbolicOperator& T, const SymbolicOperator& S) {
  if (T.n() != S.n() || T.fiber_dim() != S.fiber_dim())
    throw domain_error("compose: shape mismatch");
  const int nc = T.coords();
  SymbolicOperator out(T.n(), T.fiber_dim());
  for (const auto& [tk, ta] : T.terms()) {
    for (const auto& [sk, sb] : S.terms()) {
      RatMatrix ab = ta * sb;
      if (ab.is_zero()) continue;
      // Reorder d^J x^K by Leibniz: sum over R <= min(J, K).
      MultiIndex rmax(static_cast<size_t>(nc), 0);
      for (int i = 0; i < nc; ++i) rmax[i] = std::min(tk.d[i], sk.x[i]);
      MultiIndex r = multi_zero(nc);
      while (true) {
        Rational scalar(1);
        for (int i = 0; i < nc; ++i) {
          if (r[i]) scalar *= binomial_rat(tk.d[i], r[i]) * falling_rat(sk.x[i], r[i]);
        }
        MultiIndex x(static_cast<size_t>(nc)), d(static_cast<size_t>(nc));
        for (int i = 0; i < nc; ++i) {
          x[i] = tk.x[i] + sk.x[i] - r[i];
          d[i] = tk.d[i] - r[i] + sk.d[i];
        }
        RatMatrix scaled = ab;
        scaled *= GaussRat(scalar);
        out.add(tk.p_power + sk.p_power, x, d, scaled);
        // odometer advance of r within rmax
        int pos = 0;
        while (pos < nc) {
          if (r[pos] < rmax[pos]) {
            ++r[pos];
            break;
          }
          r[pos] = 0;
          ++pos;
        }
        if (pos == nc) break;
      }
    }
  }
  return out;
}

PolySection::PolySection(int n, int fiber_dim) : n_(n), fiber_(fiber_dim) {
  if (n < 1) throw domain_error("PolySection: n must be positive");
  if (fiber_dim < 1) throw domain_error("PolySection: fiber dimension must be positive");
}

PolySection PolySection::identity(int n, int fiber_dim) {
  PolySection f(n, fiber_dim);
  f.add(0, multi_zero(2 * n), RatMatrix::Identity(fiber_dim));
  return f;
}

void PolySection::add(int p_power, const MultiIndex& x, const RatMatrix& coeff) {
  if (p_power < 0) throw domain_error("PolySection::add: negative p power");
  if (static_cast<int>(x.size()) != 2 * n_)
    throw domain_error("PolySection::add: multi-index length must be 2n");
  if (coeff.rows() != fiber_ || coeff.cols() != fiber_)
    throw domain_error("PolySection::add: coefficient dimension mismatch");
  if (coeff.is_zero()) return;
  Key key{p_power, x};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int PolySection::degree() const {
  int deg = SymbolicOperator::degree_sentinel();
  for (const auto& [key, coeff] : terms_) {
    int d = 2 * key.p_power - multi_total(key.x);
    if (d > deg) deg = d;
  }
  return deg;
}

PolySection PolySection::radial_integrate(int j) const {
  if (j < 1) throw domain_error("radial_integrate: j must be positive");
  PolySection out(n_, fiber_);
  for (const auto& [key, coeff] : terms_) {
    RatMatrix scaled = coeff;
    scaled *= GaussRat(Rational(1) / Rational(j + multi_total(key.x)));
    out.terms_.emplace(key, std::move(scaled));
  }
  return out;
}

std::map<int, RatMatrix> PolySection::at_origin() const {
  std::map<int, RatMatrix> out;
  for (const auto& [key, coeff] : terms_) {
    if (multi_total(key.x) == 0) out.emplace(key.p_power, coeff);
  }
  return out;
}

int PolySection::max_p_power_at_origin() const {
  int best = -1;
  for (const auto& [key, coeff] : terms_) {
    if (multi_total(key.x) == 0 && key.p_power > best) best = key.p_power;
  }
  return best;
}

PolySection PolySection::operator-() const {
  PolySection out(n_, fiber_);
  for (const auto& [key, coeff] : terms_) out.terms_.emplace(key, -coeff);
  return out;
}

std::string PolySection::to_text() const {
  std::ostringstream os;
  os << "section n=" << n_ << " fiber=" << fiber_ << " terms=" << terms_.size() << "\n";
  for (const auto& [key, coeff] : terms_) {
    os << "p^" << key.p_power << " ";
    format_multi(os, "x", key.x);
    os << "\n";
    format_matrix(os, coeff);
  }
  return os.str();
}

PolySection apply(const SymbolicOperator& op, const PolySection& f) {
  if (op.n() != f.n() || op.fiber_dim() != f.fiber_dim())
    throw domain_error("apply: shape mismatch");
  const int nc = op.coords();
  PolySection out(f.n(), f.fiber_dim());
  for (const auto& [tk, ta] : op.terms()) {
    for (const auto& [sk, sb] : f.terms()) {
      // d^J applied to monomial x^K: falling factorial or zero.
      bool vanishes = false;
      Rational scalar(1);
      MultiIndex x(static_cast<size_t>(nc));
      for (int i = 0; i < nc; ++i) {
        if (tk.d[i] > sk.x[i]) {
          vanishes = true;
          break;
        }
        if (tk.d[i]) scalar *= falling_rat(sk.x[i], tk.d[i]);
        x[i] = tk.x[i] + sk.x[i] - tk.d[i];
      }
      if (vanishes) continue;
      RatMatrix coeff = ta * sb;
      coeff *= GaussRat(scalar);
      out.add(tk.p_power + sk.p_power, x, coeff);
    }
  }
  return out;
}

std::vector<PolySection> parametrix_coefficients(const SymbolicOperator& op, int jmax) {
  if (jmax < 0 || jmax > 4) throw domain_error("parametrix_coefficients: jmax out of range [0,4]");
  const int nc = op.coords();

  // Gradient coupling of the Gaussian factor: a first-order term M p^l x^J d_i
  // feeds (1/2) M p^l x^{J+e_i} times the section itself into the transport
  // equation. The magnetic pairs cancel in this sum; odd twist terms survive
  // and turn the exact sections into entire series in x.
  PolySection feedback(op.n(), op.fiber_dim());
  for (const auto& [key, coeff] : op.terms()) {
    if (multi_total(key.d) != 1) continue;
    int slot = 0;
    for (int i = 0; i < nc; ++i)
      if (key.d[i] == 1) slot = i;
    MultiIndex x = key.x;
    x[static_cast<size_t>(slot)] += 1;
    RatMatrix half = coeff;
    half *= GaussRat(Rational(1, 2));
    feedback.add(key.p_power, x, half);
  }

  std::vector<PolySection> theta;
  theta.reserve(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    // Solving (j + g - S) on the degree-g slice only reads degrees below g,
    // so keeping x-degrees up to 2 (jmax - j) + 2 leaves every at_origin()
    // of theta_0..theta_jmax exact. Without feedback the sections are honest
    // polynomials and are kept whole.
    int cap = 2 * (jmax - j) + 2;
    PolySection out(op.n(), op.fiber_dim());
    PolySection rhs(op.n(), op.fiber_dim());
    int g0 = 0;
    if (j == 0) {
      out = PolySection::identity(op.n(), op.fiber_dim());
      g0 = 1;
    } else {
      rhs = -apply(op, theta.back());
    }
    if (feedback.is_zero()) {
      cap = 0;
      for (const auto& [key, coeff] : rhs.terms()) cap = std::max(cap, multi_total(key.x));
    }
    for (int g = g0; g <= cap; ++g) {
      const GaussRat inv(Rational(1) / Rational(j + g));
      std::vector<std::tuple<int, MultiIndex, RatMatrix>> adds;
      for (const auto& [key, coeff] : rhs.terms()) {
        if (multi_total(key.x) != g) continue;
        RatMatrix m = coeff;
        m *= inv;
        adds.emplace_back(key.p_power, key.x, std::move(m));
      }
      for (const auto& [fk, fc] : feedback.terms()) {
        const int want = g - multi_total(fk.x);
        if (want < 0) continue;
        for (const auto& [key, coeff] : out.terms()) {
          if (multi_total(key.x) != want) continue;
          MultiIndex x(static_cast<size_t>(nc));
          for (int i = 0; i < nc; ++i) x[i] = fk.x[i] + key.x[i];
          RatMatrix m = fc * coeff;
          m *= inv;
          adds.emplace_back(fk.p_power + key.p_power, std::move(x), std::move(m));
        }
      }
      for (auto& [pw, x, m] : adds) out.add(pw, x, m);
    }
    theta.push_back(std::move(out));
  }
  return theta;
}

SymbolicOperator assemble_dirac(const TorusModel& model) {
  const int n = model.n();
  const int nc = 2 * n;
  const int fiber = 1 << n;
  SymbolicOperator D(n, fiber);
  std::vector<Rational> a;
  a.reserve(n);
  for (double v : model.spec.a) a.push_back(rational_from_double(v));
  for (int i = 0; i < nc; ++i) {
    RatMatrix ci = clifford_generator_rat(n, i);
    D.add(0, multi_zero(nc), multi_unit(nc, i), ci);
    int l = i / 2;
    GaussRat gamma = (i % 2 == 0) ? GaussRat(Rational(0), a[l] / 2)
                                  : GaussRat(Rational(0), -a[l] / 2);
    int xvar = (i % 2 == 0) ? i + 1 : i - 1;
    RatMatrix scaled = ci;
    scaled *= gamma;
    D.add(1, multi_unit(nc, xvar), multi_zero(nc), scaled);
  }
  if (!model.B.is_zero()) {
    D.add(0, multi_zero(nc), multi_zero(nc), clifford_three_form_rat(n, model.B));
  }
  return D;
}

SymbolicOperator assemble_dirac_squared(const TorusModel& model) {
  SymbolicOperator D = assemble_dirac(model);
  return compose(D, D);
}

SymbolicOperator lichnerowicz_form(const TorusModel& model) {
  const int n = model.n();
  const int nc = 2 * n;
  const int fiber = 1 << n;
  std::vector<Rational> a;
  a.reserve(n);
  for (double v : model.spec.a) a.push_back(rational_from_double(v));

  SymbolicOperator result(n, fiber);
  for (int i = 0; i < nc; ++i) {
    SymbolicOperator nabla(n, fiber);
    nabla.add(0, multi_zero(nc), multi_unit(nc, i), RatMatrix::Identity(fiber));
    int l = i / 2;
    GaussRat gamma = (i % 2 == 0) ? GaussRat(Rational(0), a[l] / 2)
                                  : GaussRat(Rational(0), -a[l] / 2);
    int xvar = (i % 2 == 0) ? i + 1 : i - 1;
    RatMatrix gm = RatMatrix::Identity(fiber);
    gm *= gamma;
    nabla.add(1, multi_unit(nc, xvar), multi_zero(nc), gm);
    if (!model.B.is_zero()) {
      nabla.add(0, multi_zero(nc), multi_zero(nc),
                clifford_contraction_three_form_rat(n, model.B, i));
    }
    result -= compose(nabla, nabla);
  }
  result.add(1, multi_zero(nc), multi_zero(nc), clifford_curvature_rat(n, a));
  if (!model.B.is_zero()) {
    Rational norm_sq(0);
    for (int i = 0; i < nc; ++i)
      for (int j = i + 1; j < nc; ++j)
        for (int k = j + 1; k < nc; ++k) {
          Rational b = rational_from_double(model.B.get(i, j, k));
          norm_sq += b * b;
        }
    RatMatrix m = RatMatrix::Identity(fiber);
    m *= GaussRat(-norm_sq);
    result.add(0, multi_zero(nc), multi_zero(nc), m);
  }
  return result;
}

}  // namespace ttorsion

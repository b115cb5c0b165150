#include "ttorsion/weyl.hpp"

#include <stdexcept>

#include "ttorsion/errors.hpp"

namespace ttorsion::weyl {

namespace {

Rational rat_binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  Rational out(1);
  for (int i = 0; i < k; ++i) {
    out *= Rational(n - i);
    out /= Rational(i + 1);
  }
  return out;
}

Rational rat_factorial(int n) {
  Rational out(1);
  for (int i = 2; i <= n; ++i) out *= Rational(i);
  return out;
}

// One reordering choice for a canonically ordered pair with [A, B] = s:
// B^b A^a = sum_r C(b,r) C(a,r) r! (-s)^r A^{a-r} B^{b-r}.
struct ReorderOption {
  int r;
  GaussRat scale;
};

std::vector<ReorderOption> reorder_options(int b_exp, int a_exp, const GaussRat& s) {
  std::vector<ReorderOption> out;
  const int rmax = std::min(b_exp, a_exp);
  GaussRat neg_s_pow{Rational(1), Rational(0)};
  const GaussRat neg_s{-s.re, -s.im};
  for (int r = 0; r <= rmax; ++r) {
    GaussRat c{rat_binomial(b_exp, r) * rat_binomial(a_exp, r) * rat_factorial(r), Rational(0)};
    out.push_back({r, c * neg_s_pow});
    neg_s_pow = neg_s_pow * neg_s;
  }
  return out;
}

}  // namespace

Poly::Poly(int n, int fiber_dim) : n_(n), fiber_(fiber_dim) {
  if (n < 1) throw domain_error("weyl::Poly: n must be positive");
  if (fiber_dim < 1) throw domain_error("weyl::Poly: fiber_dim must be positive");
}

void Poly::add(const Key& key, const RatMatrix& coeff) {
  if (static_cast<int>(key.g.size()) != coords() || static_cast<int>(key.v.size()) != coords())
    throw domain_error("weyl::Poly::add: exponent length mismatch");
  for (int e : key.g)
    if (e < 0) throw domain_error("weyl::Poly::add: negative exponent");
  for (int e : key.v)
    if (e < 0) throw domain_error("weyl::Poly::add: negative exponent");
  if (coeff.rows() != fiber_ || coeff.cols() != fiber_)
    throw domain_error("weyl::Poly::add: coefficient shape mismatch");
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(key, coeff);
    return;
  }
  it->second = it->second + coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

bool Poly::g_free() const {
  for (const auto& [key, coeff] : terms_)
    for (int e : key.g)
      if (e != 0) return false;
  return true;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.n_ != n_ || o.fiber_ != fiber_) throw domain_error("weyl::Poly::+=: shape mismatch");
  for (const auto& [key, coeff] : o.terms_) add(key, coeff);
  return *this;
}

Poly multiply(const Poly& A, const Poly& B, const std::vector<Rational>& b) {
  if (A.n() != B.n() || A.fiber_dim() != B.fiber_dim())
    throw domain_error("weyl::multiply: shape mismatch");
  const int n = A.n();
  if (static_cast<int>(b.size()) != n) throw domain_error("weyl::multiply: commutator scale count");

  Poly out(n, A.fiber_dim());
  for (const auto& [k1, m1] : A.terms()) {
    for (const auto& [k2, m2] : B.terms()) {
      RatMatrix base = m1 * m2;
      if (base.is_zero()) continue;

      // Per mode: reorder the G pair (s = +i b_l) and the V pair (s = -i b_l).
      std::vector<std::vector<ReorderOption>> options;
      options.reserve(2 * n);
      for (int l = 0; l < n; ++l) {
        const GaussRat s_g{Rational(0), b[l]};
        const GaussRat s_v{Rational(0), -b[l]};
        options.push_back(reorder_options(k1.g[2 * l + 1], k2.g[2 * l], s_g));
        options.push_back(reorder_options(k1.v[2 * l + 1], k2.v[2 * l], s_v));
      }

      std::vector<std::size_t> pick(options.size(), 0);
      while (true) {
        GaussRat scale{Rational(1), Rational(0)};
        Key key;
        key.g.assign(2 * n, 0);
        key.v.assign(2 * n, 0);
        for (int l = 0; l < n; ++l) {
          const ReorderOption& og = options[2 * l][pick[2 * l]];
          const ReorderOption& ov = options[2 * l + 1][pick[2 * l + 1]];
          scale = scale * og.scale;
          scale = scale * ov.scale;
          key.g[2 * l] = k1.g[2 * l] + k2.g[2 * l] - og.r;
          key.g[2 * l + 1] = k1.g[2 * l + 1] + k2.g[2 * l + 1] - og.r;
          key.v[2 * l] = k1.v[2 * l] + k2.v[2 * l] - ov.r;
          key.v[2 * l + 1] = k1.v[2 * l + 1] + k2.v[2 * l + 1] - ov.r;
        }
        if (!scale.is_zero()) out.add(key, base * scale);

        std::size_t d = 0;
        while (d < pick.size()) {
          if (++pick[d] < options[d].size()) break;
          pick[d] = 0;
          ++d;
        }
        if (d == pick.size()) break;
      }
    }
  }
  return out;
}

Poly from_symbolic(const SymbolicOperator& op, int p, const std::vector<Rational>& a) {
  const int n = op.n();
  if (static_cast<int>(a.size()) != n) throw domain_error("weyl::from_symbolic: scale count mismatch");
  if (p < 1) throw domain_error("weyl::from_symbolic: p must be positive");

  std::vector<Rational> b(a);
  for (auto& v : b) v *= p;

  const int fiber = op.fiber_dim();
  const int m = 2 * n;
  auto unit_key = [m](bool g_side, int i) {
    Key k;
    k.g.assign(m, 0);
    k.v.assign(m, 0);
    (g_side ? k.g : k.v)[i] = 1;
    return k;
  };
  auto scalar_mat = [fiber](const GaussRat& c) {
    RatMatrix id = RatMatrix::Identity(fiber);
    return id * c;
  };

  // x_{2l}   = (G_{2l+1} - V_{2l+1}) / (i b_l)
  // x_{2l+1} = (V_{2l}   - G_{2l})   / (i b_l)
  // d_i      = (G_i + V_i) / 2
  std::vector<Poly> xpoly;
  std::vector<Poly> dpoly;
  for (int i = 0; i < m; ++i) {
    const int l = i / 2;
    const GaussRat inv_ib{Rational(0), -Rational(1) / b[l]};  // 1/(i b_l) = -i/b_l
    const GaussRat neg_inv_ib{Rational(0), Rational(1) / b[l]};
    Poly px(n, fiber);
    if (i % 2 == 0) {
      px.add(unit_key(true, 2 * l + 1), scalar_mat(inv_ib));
      px.add(unit_key(false, 2 * l + 1), scalar_mat(neg_inv_ib));
    } else {
      px.add(unit_key(true, 2 * l), scalar_mat(neg_inv_ib));
      px.add(unit_key(false, 2 * l), scalar_mat(inv_ib));
    }
    xpoly.push_back(px);

    Poly pd(n, fiber);
    const GaussRat half{Rational(1, 2), Rational(0)};
    pd.add(unit_key(true, i), scalar_mat(half));
    pd.add(unit_key(false, i), scalar_mat(half));
    dpoly.push_back(pd);
  }

  Poly total(n, fiber);
  for (const auto& [key, coeff] : op.terms()) {
    Rational p_pow(1);
    for (int e = 0; e < key.p_power; ++e) p_pow *= p;

    Poly acc(n, fiber);
    Key constant;
    constant.g.assign(m, 0);
    constant.v.assign(m, 0);
    acc.add(constant, coeff * GaussRat{p_pow, Rational(0)});

    for (int i = 0; i < m; ++i)
      for (int rep = 0; rep < key.x[i]; ++rep) acc = multiply(acc, xpoly[i], b);
    for (int i = 0; i < m; ++i)
      for (int rep = 0; rep < key.d[i]; ++rep) acc = multiply(acc, dpoly[i], b);

    total += acc;
  }
  return total;
}

}  // namespace ttorsion::weyl

#pragma once

// Truncated polynomial rings Q[g_1..g_s]/(g_i^{e_i+1}) with an integration
// functional, used as cohomology rings of fixed components. Elements are
// dense coefficient arrays indexed mixed-radix by the multidegree.
//
// A Nilpotent with no model attached is a pure scalar and adopts the model
// of whatever it is combined with.

#include "rlab/cyclotomic.hpp"

#include <complex>
#include <memory>
#include <type_traits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rlab {

/// Embeds a rational (or anything already convertible) into the ring C.
template <class C, class S>
C embed(const S& s) {
  if constexpr (std::is_same_v<S, Rational> && std::is_same_v<C, std::complex<double>>)
    return {s.get_d(), 0.0};
  else
    return C(s);
}

class NilpotentModel {
 public:
  /// tops[i] = e_i; integral[j] = (multidegree, value).
  NilpotentModel(std::vector<int> tops, std::vector<std::pair<std::vector<int>, Rational>> integral,
                 std::vector<std::string> names = {});

  static std::shared_ptr<const NilpotentModel> point();

  std::size_t generators() const { return tops_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<int>& tops() const { return tops_; }
  const std::vector<std::string>& names() const { return names_; }
  /// Sum of exponents of the basis monomial at `index`.
  int degree(std::size_t index) const { return degree_[index]; }
  int max_degree() const { return max_degree_; }

  std::size_t index_of(const std::vector<int>& multidegree) const;
  std::vector<int> multidegree(std::size_t index) const;

  /// Index of the product of two basis monomials, or -1 when it vanishes.
  long product(std::size_t a, std::size_t b) const { return mul_[a * dim_ + b]; }

  /// (index, value) pairs of the integration table.
  const std::vector<std::pair<std::size_t, Rational>>& integral() const { return integral_; }

 private:
  std::vector<int> tops_;
  std::vector<std::string> names_;
  std::size_t dim_ = 1;
  std::vector<int> degree_;
  int max_degree_ = 0;
  std::vector<long> mul_;
  std::vector<std::pair<std::size_t, Rational>> integral_;
};

using NilModelPtr = std::shared_ptr<const NilpotentModel>;

template <class C>
class Nilpotent {
 public:
  Nilpotent() : c_{C(0L)} {}
  Nilpotent(const C& scalar) : c_{scalar} {}  // NOLINT(google-explicit-constructor)
  Nilpotent(long scalar) : c_{C(scalar)} {}   // NOLINT(google-explicit-constructor)
  Nilpotent(NilModelPtr model, std::vector<C> coeffs) : model_(std::move(model)), c_(std::move(coeffs)) {
    if (model_ && c_.size() != model_->dim()) throw std::invalid_argument("nilpotent coefficient count mismatch");
    if (!model_ && c_.size() != 1) throw std::invalid_argument("scalar nilpotent needs one coefficient");
  }

  static Nilpotent constant(NilModelPtr model, const C& c) {
    std::vector<C> v(model ? model->dim() : 1, C(0L));
    v[0] = c;
    return Nilpotent(std::move(model), std::move(v));
  }
  static Nilpotent generator(NilModelPtr model, std::size_t i) {
    std::vector<int> md(model->generators(), 0);
    md[i] = 1;
    std::vector<C> v(model->dim(), C(0L));
    v[model->index_of(md)] = C(1L);
    return Nilpotent(std::move(model), std::move(v));
  }

  const NilModelPtr& model() const { return model_; }
  const std::vector<C>& coeffs() const { return c_; }
  std::size_t dim() const { return c_.size(); }
  const C& constant_term() const { return c_[0]; }
  const C& coefficient(std::size_t i) const { return c_[i]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!ring::zero(x)) return false;
    return true;
  }
  bool is_scalar() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (!ring::zero(c_[i])) return false;
    return true;
  }

  /// Re-expresses a scalar element in `m`.
  Nilpotent in_model(const NilModelPtr& m) const {
    if (model_ == m || !m) return *this;
    if (model_) throw std::invalid_argument("nilpotent elements from different models");
    return constant(m, c_[0]);
  }

  Nilpotent operator-() const {
    Nilpotent out = *this;
    for (auto& x : out.c_) x = -x;
    return out;
  }
  Nilpotent& operator+=(const Nilpotent& o) {
    if (o.model_ != model_) {
      if (!model_) *this = in_model(o.model_);
      return *this += o.in_model(model_);
    }
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Nilpotent& operator-=(const Nilpotent& o) { return *this += -o; }
  Nilpotent& operator*=(const Nilpotent& o) { return *this = *this * o; }

  friend Nilpotent operator+(Nilpotent a, const Nilpotent& b) { return a += b; }
  friend Nilpotent operator-(Nilpotent a, const Nilpotent& b) { return a -= b; }
  friend Nilpotent operator*(const Nilpotent& a, const Nilpotent& b) {
    if (!a.model_ || !b.model_) {
      const Nilpotent& s = a.model_ ? b : a;
      Nilpotent out = a.model_ ? a : b;
      const C k = s.c_[0];
      for (auto& x : out.c_) x = k * x;
      return out;
    }
    if (a.model_ != b.model_) throw std::invalid_argument("nilpotent elements from different models");
    const auto& m = *a.model_;
    std::vector<C> out(m.dim(), C(0L));
    for (std::size_t i = 0; i < m.dim(); ++i) {
      if (ring::zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < m.dim(); ++j) {
        long k = m.product(i, j);
        if (k < 0 || ring::zero(b.c_[j])) continue;
        out[static_cast<std::size_t>(k)] += a.c_[i] * b.c_[j];
      }
    }
    return Nilpotent(a.model_, std::move(out));
  }
  friend bool operator==(const Nilpotent& a, const Nilpotent& b) {
    if (a.model_ != b.model_) {
      if (!a.model_) return a.in_model(b.model_) == b;
      if (!b.model_) return a == b.in_model(a.model_);
      return false;
    }
    return a.c_ == b.c_;
  }

  /// Sum_j coeffs[j] * x^j for x with zero constant term; stops at nilpotency.
  template <class S>
  Nilpotent apply_series(const std::vector<S>& coeffs) const {
    if (!ring::zero(c_[0])) throw std::domain_error("power series argument must have zero constant term");
    Nilpotent acc = constant(model_, C(0L));
    Nilpotent power = constant(model_, C(1L));
    int top = model_ ? model_->max_degree() : 0;
    for (std::size_t j = 0; j < coeffs.size() && static_cast<int>(j) <= top; ++j) {
      if (!ring::zero(coeffs[j])) acc += power * Nilpotent(embed<C>(coeffs[j]));
      power = power * *this;
      if (power.is_zero()) break;
    }
    return acc;
  }

  /// exp(x) for x with zero constant term.
  Nilpotent exp() const {
    if (!ring::zero(c_[0])) throw std::domain_error("nilpotent_exp needs zero constant term");
    int top = model_ ? model_->max_degree() : 0;
    std::vector<Rational> series(static_cast<std::size_t>(top) + 1);
    Rational f = 1;
    for (int j = 0; j <= top; ++j) {
      series[static_cast<std::size_t>(j)] = 1 / f;
      f *= (j + 1);
    }
    return apply_series(series);
  }

  /// 1/x when the constant term is a unit.
  Nilpotent inverse() const {
    C a0inv = ring::inv(c_[0]);
    Nilpotent n = *this * Nilpotent(a0inv);
    n.c_[0] = C(0L);
    // 1/(1+n) = sum (-n)^j
    Nilpotent acc = constant(model_, C(1L));
    Nilpotent power = acc;
    int top = model_ ? model_->max_degree() : 0;
    for (int j = 1; j <= top; ++j) {
      power = power * -n;
      if (power.is_zero()) break;
      acc += power;
    }
    return acc * Nilpotent(a0inv);
  }

  /// Applies the integration functional.
  C integrate() const {
    if (!model_) return c_[0];
    C acc(0L);
    for (const auto& [idx, val] : model_->integral())
      if (!ring::zero(c_[idx])) acc += c_[idx] * embed<C>(val);
    return acc;
  }

  template <class F>
  auto map(F&& f) const {
    using D = decltype(f(c_[0]));
    std::vector<D> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(f(x));
    return Nilpotent<D>(model_, std::move(out));
  }

 private:
  NilModelPtr model_;
  std::vector<C> c_;
};

template <class C>
bool is_zero(const Nilpotent<C>& x) {
  return x.is_zero();
}
template <class C>
Nilpotent<C> inverse(const Nilpotent<C>& x) {
  return x.inverse();
}

/// integrate(a * b) without forming the product.
template <class A, class B, class R>
R integrate_product(const Nilpotent<A>& a, const Nilpotent<B>& b, R zero) {
  const NilModelPtr& m = a.model() ? a.model() : b.model();
  if (!m) return zero + embed<R>(a.constant_term()) * embed<R>(b.constant_term());
  Nilpotent<A> aa = a.in_model(m);
  Nilpotent<B> bb = b.in_model(m);
  R acc = zero;
  for (const auto& [idx, val] : m->integral()) {
    for (std::size_t i = 0; i < m->dim(); ++i) {
      if (ring::zero(aa.coefficient(i))) continue;
      for (std::size_t j = 0; j < m->dim(); ++j) {
        if (m->product(i, j) != static_cast<long>(idx) || ring::zero(bb.coefficient(j))) continue;
        acc += embed<R>(aa.coefficient(i)) * embed<R>(bb.coefficient(j)) * embed<R>(val);
      }
    }
  }
  return acc;
}

}  // namespace rlab

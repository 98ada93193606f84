#pragma once

// Laurent polynomials in a single variable z with half-integer exponents.
// Exponents are keyed by twice their value, so z^{1/2} has key 1 and z^{-1}
// has key -2. Polynomial division and gcd work in the variable w = z^{1/2};
// monomials are the units of the ring.

#include "rlab/cyclotomic.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rlab {

template <class K>
class Laurent {
 public:
  using Map = std::map<int, K>;

  Laurent() = default;
  Laurent(const K& c) {  // NOLINT(google-explicit-constructor)
    if (!ring::zero(c)) terms_.emplace(0, c);
  }
  Laurent(long c) : Laurent(K(c)) {}  // NOLINT(google-explicit-constructor)

  /// c * z^{key/2}
  static Laurent monomial(const K& c, int key) {
    Laurent out;
    if (!ring::zero(c)) out.terms_.emplace(key, c);
    return out;
  }

  /// z^e for e with denominator dividing 2.
  static Laurent z_pow(const Rational& e) {
    Rational twice = 2 * e;
    if (twice.get_den() != 1)
      throw std::domain_error("z-exponent " + to_string(e) + " is not a half-integer");
    return monomial(K(1L), static_cast<int>(to_long(twice.get_num())));
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
  int min_key() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_key() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  /// Largest |exponent| of z, in half-units.
  int max_abs_key() const { return std::max(std::abs(min_key()), std::abs(max_key())); }

  /// Coefficient of z^{key/2} (zero when absent).
  K coefficient(int key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? K(0L) : it->second;
  }

  void add_term(int key, const K& c) {
    if (ring::zero(c)) return;
    auto [it, inserted] = terms_.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (ring::zero(it->second)) terms_.erase(it);
    }
  }

  Laurent operator-() const {
    Laurent out;
    for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, -c);
    return out;
  }
  Laurent& operator+=(const Laurent& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Laurent& operator-=(const Laurent& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent out;
    if (a.terms_.size() == 1 && b.terms_.size() == 1) {
      const auto& [ka, ca] = *a.terms_.begin();
      const auto& [kb, cb] = *b.terms_.begin();
      return monomial(ca * cb, ka + kb);
    }
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add_term(ka + kb, ca * cb);
    return out;
  }
  friend Laurent operator*(Laurent a, const Rational& s) {
    if (s == 0) return Laurent();
    for (auto& [k, c] : a.terms_) c *= K(s);
    return a;
  }
  friend Laurent operator*(const Rational& s, Laurent a) { return std::move(a) * s; }
  friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

  /// Multiplies by z^{key/2}.
  Laurent shifted(int key) const {
    Laurent out;
    for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), k + key, c);
    return out;
  }

  /// Substitutes z^{1/2} -> -z^{1/2}.
  Laurent negate_half() const {
    Laurent out;
    for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, (k % 2) ? K(-c) : c);
    return out;
  }

  /// Substitutes z -> z^{-1}.
  Laurent invert_variable() const {
    Laurent out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(-k, c);
    return out;
  }

  /// Substitutes z -> z^m for an integer m (key scales by m).
  Laurent power_substitute(int m) const {
    Laurent out;
    for (const auto& [k, c] : terms_) out.add_term(k * m, c);
    return out;
  }

  /// Conjugates coefficients (z itself is left alone).
  Laurent conj_coefficients() const {
    Laurent out;
    for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, ring::cj(c));
    return out;
  }

  /// Evaluates with w = z^{1/2} given.
  std::complex<double> eval_half(std::complex<double> w) const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [k, c] : terms_) acc += ring::cplx(c) * std::pow(w, k);
    return acc;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += coeff_str(c);
      if (k != 0) out += "*z^(" + to_string(ratio(k, 2)) + ")";
    }
    return out;
  }

 private:
  static std::string coeff_str(const Rational& c) { return to_string(c); }
  static std::string coeff_str(const CycRat& c) {
    if (c.is_rational()) return to_string(c.to_rational());
    return c.str();
  }

  Map terms_;
};

template <class K>
bool is_zero(const Laurent<K>& p) {
  return p.is_zero();
}

/// Units of the Laurent ring are exactly the monomials.
template <class K>
Laurent<K> inverse(const Laurent<K>& p) {
  if (!p.is_monomial()) throw std::domain_error("Laurent polynomial is not a unit: " + p.str());
  const auto& [k, c] = *p.terms().begin();
  return Laurent<K>::monomial(ring::inv(c), -k);
}

template <class K>
Laurent<K> conj(const Laurent<K>& p) {
  return p.conj_coefficients();
}

using LaurentZ = Laurent<CycRat>;

// ---- polynomial division in w = z^{1/2} -------------------------------------

namespace poly {

/// Dense polynomial in w, index = power.
template <class K>
using Dense = std::vector<K>;

template <class K>
void trim(Dense<K>& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

/// Splits p = w^{shift} * P(w) with P(0) != 0.
template <class K>
std::pair<int, Dense<K>> split(const Laurent<K>& p) {
  if (p.is_zero()) return {0, {}};
  int lo = p.min_key();
  Dense<K> d(static_cast<std::size_t>(p.max_key() - lo + 1), K(0L));
  for (const auto& [k, c] : p.terms()) d[static_cast<std::size_t>(k - lo)] = c;
  return {lo, std::move(d)};
}

template <class K>
Laurent<K> join(int shift, const Dense<K>& d) {
  Laurent<K> out;
  for (std::size_t i = 0; i < d.size(); ++i) out.add_term(shift + static_cast<int>(i), d[i]);
  return out;
}

/// a = q*b + r over the coefficient field.
template <class K>
void divmod(const Dense<K>& a, const Dense<K>& b, Dense<K>& q, Dense<K>& r) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, K(0L));
  const K lead_inv = ring::inv(b.back());
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t s = r.size() - b.size();
    K f = r.back() * lead_inv;
    q[s] = f;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (!is_zero(b[i])) r[s + i] -= f * b[i];
    r.pop_back();
    trim(r);
  }
}

template <class K>
Dense<K> monic(Dense<K> p) {
  if (p.empty()) return p;
  K inv = ring::inv(p.back());
  for (auto& c : p) c *= inv;
  return p;
}

template <class K>
Dense<K> gcd(Dense<K> a, Dense<K> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense<K> q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = monic(std::move(r));
  }
  return monic(std::move(a));
}

}  // namespace poly

/// Exact quotient a/b in the Laurent ring, or nullopt when b does not divide a.
template <class K>
std::optional<Laurent<K>> divide_exact(const Laurent<K>& a, const Laurent<K>& b) {
  if (b.is_zero()) throw std::domain_error("division by zero Laurent polynomial");
  if (a.is_zero()) return Laurent<K>();
  if (b.is_monomial()) return a * inverse(b);
  auto [sa, pa] = poly::split(a);
  auto [sb, pb] = poly::split(b);
  poly::Dense<K> q, r;
  poly::divmod(pa, pb, q, r);
  if (!r.empty()) return std::nullopt;
  return poly::join(sa - sb, q);
}

/// Monic gcd with nonzero constant term (monomial factors are units).
template <class K>
Laurent<K> gcd(const Laurent<K>& a, const Laurent<K>& b) {
  if (a.is_zero()) return b.is_zero() ? Laurent<K>() : poly::join(0, poly::monic(poly::split(b).second));
  if (b.is_zero()) return poly::join(0, poly::monic(poly::split(a).second));
  return poly::join(0, poly::gcd(poly::split(a).second, poly::split(b).second));
}

}  // namespace rlab

#pragma once

// Truncated sparse series in q with exponents in (1/D)Z.
//
// A series knows its cutoff T: coefficients at exponents above T are
// unknown, not zero. An absent cutoff means the series is exact (a finite
// sum). Terms are keyed by the integer numerator of the exponent over D.

#include "rlab/cyclotomic.hpp"
#include "rlab/laurent.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rlab {

using Cutoff = std::optional<Rational>;  // nullopt = exact

inline Cutoff min_cutoff(const Cutoff& a, const Cutoff& b) {
  if (!a) return b;
  if (!b) return a;
  return *a < *b ? a : b;
}

inline Cutoff shift_cutoff(const Cutoff& a, const Rational& by) {
  if (!a) return a;
  return Rational(*a + by);
}

template <class C>
class QSeries {
 public:
  using Map = std::map<long, C>;

  QSeries() = default;
  explicit QSeries(long denom, Cutoff cutoff = std::nullopt) : denom_(denom), cutoff_(std::move(cutoff)) {
    if (denom_ <= 0) throw std::invalid_argument("series denominator must be positive");
  }

  static QSeries monomial(const C& c, const Rational& e, Cutoff cutoff = std::nullopt) {
    QSeries out(denominator_of(e), std::move(cutoff));
    out.add_term(e, c);
    return out;
  }
  static QSeries one(Cutoff cutoff = std::nullopt) { return monomial(C(1L), Rational(0), std::move(cutoff)); }

  long denom() const { return denom_; }
  const Cutoff& cutoff() const { return cutoff_; }
  bool exact() const { return !cutoff_.has_value(); }
  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational exponent_of(long key) const { return ratio(key, denom_); }

  /// Largest key whose exponent lies within the cutoff (LONG_MAX when exact).
  long limit_key() const {
    if (!cutoff_) return std::numeric_limits<long>::max();
    return to_long(floor_of(Rational(*cutoff_ * denom_)));
  }

  bool known(const Rational& e) const { return !cutoff_ || e <= *cutoff_; }

  /// Lowest stored exponent.
  std::optional<Rational> valuation() const {
    if (terms_.empty()) return std::nullopt;
    return exponent_of(terms_.begin()->first);
  }

  C coefficient(const Rational& e) const {
    if (!known(e)) throw std::out_of_range("coefficient at q^" + to_string(e) + " lies beyond the cutoff");
    Rational k = e * denom_;
    if (k.get_den() != 1) return C(0L);
    auto it = terms_.find(to_long(k.get_num()));
    return it == terms_.end() ? C(0L) : it->second;
  }

  /// Re-keys to a multiple of the current denominator.
  QSeries with_denom(long d) const {
    if (d == denom_) return *this;
    if (d % denom_ != 0) throw std::invalid_argument("new denominator must be a multiple of the old one");
    long f = d / denom_;
    QSeries out(d, cutoff_);
    for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), k * f, c);
    return out;
  }

  void ensure_denom(long d) {
    long l = lcm_long(denom_, d);
    if (l != denom_) *this = with_denom(l);
  }

  /// Adds c q^e; silently ignored beyond the cutoff.
  void add_term(const Rational& e, const C& c) {
    if (!known(e) || ring::zero(c)) return;
    ensure_denom(denominator_of(e));
    add_key(to_long(Rational(e * denom_).get_num()), c);
  }

  /// Adds c q^{key/D} with the current denominator.
  void add_key(long key, const C& c) {
    if (key > limit_key() || ring::zero(c)) return;
    auto [it, inserted] = terms_.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (ring::zero(it->second)) terms_.erase(it);
    }
  }

  QSeries truncated(const Rational& t) const {
    Cutoff nc = min_cutoff(cutoff_, t);
    QSeries out(denom_, nc);
    long lim = out.limit_key();
    for (const auto& [k, c] : terms_) {
      if (k > lim) break;
      out.terms_.emplace_hint(out.terms_.end(), k, c);
    }
    return out;
  }

  /// Multiplies by q^e.
  QSeries q_shifted(const Rational& e) const {
    QSeries out = with_denom(lcm_long(denom_, denominator_of(e)));
    long s = to_long(Rational(e * out.denom_).get_num());
    QSeries res(out.denom_, shift_cutoff(cutoff_, e));
    for (const auto& [k, c] : out.terms_) res.terms_.emplace_hint(res.terms_.end(), k + s, c);
    return res;
  }

  QSeries scaled(const C& s) const {
    QSeries out(denom_, cutoff_);
    if (ring::zero(s)) return out;
    for (const auto& [k, c] : terms_) {
      C v = s * c;
      if (!ring::zero(v)) out.terms_.emplace_hint(out.terms_.end(), k, std::move(v));
    }
    return out;
  }

  QSeries operator-() const {
    QSeries out(denom_, cutoff_);
    for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, -c);
    return out;
  }

  QSeries& operator+=(const QSeries& o) {
    long d = lcm_long(denom_, o.denom_);
    ensure_denom(d);
    QSeries other = o.with_denom(d);
    cutoff_ = min_cutoff(cutoff_, o.cutoff_);
    long lim = limit_key();
    while (!terms_.empty() && terms_.rbegin()->first > lim) terms_.erase(std::prev(terms_.end()));
    for (const auto& [k, c] : other.terms_) add_key(k, c);
    return *this;
  }
  QSeries& operator-=(const QSeries& o) { return *this += -o; }

  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }

  friend QSeries operator*(const QSeries& a0, const QSeries& b0) {
    long d = lcm_long(a0.denom_, b0.denom_);
    if ((a0.exact() && a0.is_zero()) || (b0.exact() && b0.is_zero())) return QSeries(d);
    QSeries a = a0.with_denom(d), b = b0.with_denom(d);
    QSeries out(d, product_cutoff(a, b));
    long lim = out.limit_key();
    for (const auto& [ka, ca] : a.terms_) {
      if (!b.terms_.empty() && ka + b.terms_.begin()->first > lim) break;
      for (const auto& [kb, cb] : b.terms_) {
        if (ka + kb > lim) break;
        out.add_key(ka + kb, ca * cb);
      }
    }
    return out;
  }
  QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

  /// Exact equality of stored data (denominators normalized).
  friend bool operator==(const QSeries& a, const QSeries& b) {
    long d = lcm_long(a.denom_, b.denom_);
    return a.cutoff_ == b.cutoff_ && a.with_denom(d).terms_ == b.with_denom(d).terms_;
  }

  /// Multiplicative inverse. Needs a cutoff and a unit lowest coefficient;
  /// the result is reliable to T - 2v where v is the valuation.
  QSeries inverse() const {
    if (terms_.empty()) throw std::domain_error("cannot invert a zero series");
    if (!cutoff_) throw std::domain_error("cannot invert an exact series without a cutoff; truncate first");
    const long kv = terms_.begin()->first;
    const C a0inv = ring::inv(terms_.begin()->second);
    const Rational v = exponent_of(kv);
    QSeries out(denom_, Rational(*cutoff_ - 2 * v));
    const long lim = out.limit_key();
    if (lim < -kv) return out;
    const auto n = static_cast<std::size_t>(lim + kv);
    std::vector<C> b(n + 1, C(0L));
    std::vector<bool> nz(n + 1, false);
    b[0] = a0inv;
    nz[0] = true;
    std::vector<std::pair<long, const C*>> rest;
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) rest.emplace_back(it->first - kv, &it->second);
    for (std::size_t r = 1; r <= n; ++r) {
      C acc(0L);
      bool any = false;
      for (const auto& [s, c] : rest) {
        if (static_cast<std::size_t>(s) > r) break;
        std::size_t j = r - static_cast<std::size_t>(s);
        if (!nz[j]) continue;
        acc += *c * b[j];
        any = true;
      }
      if (!any) continue;
      b[r] = -(a0inv * acc);
      nz[r] = !ring::zero(b[r]);
    }
    for (std::size_t r = 0; r <= n; ++r)
      if (nz[r]) out.terms_.emplace_hint(out.terms_.end(), static_cast<long>(r) - kv, b[r]);
    return out;
  }

  /// this / (1 - q^e w), e > 0. Requires a cutoff unless the series is zero.
  QSeries& divide_one_minus(const Rational& e, const C& w) {
    if (e <= 0) throw std::domain_error("divide_one_minus needs a positive exponent");
    if (terms_.empty() || ring::zero(w)) return *this;
    if (!cutoff_) throw std::domain_error("geometric expansion of an exact series needs a cutoff");
    ensure_denom(denominator_of(e));
    const long s = to_long(Rational(e * denom_).get_num());
    const long lim = limit_key();
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      if (it->first + s > lim) break;
      add_key(it->first + s, w * it->second);
    }
    return *this;
  }

  /// this * (1 - q^e w), e > 0.
  QSeries& multiply_one_minus(const Rational& e, const C& w) {
    if (e <= 0) throw std::domain_error("multiply_one_minus needs a positive exponent");
    if (terms_.empty() || ring::zero(w)) return *this;
    ensure_denom(denominator_of(e));
    const long s = to_long(Rational(e * denom_).get_num());
    const long lim = limit_key();
    std::vector<std::pair<long, C>> adds;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (it->first + s > lim) continue;
      adds.emplace_back(it->first + s, -(w * it->second));
    }
    for (auto& [k, c] : adds) add_key(k, c);
    return *this;
  }

  QSeries pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    QSeries acc = one(std::nullopt);
    QSeries base = *this;
    while (n > 0) {
      if (n & 1) acc *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return acc;
  }

  template <class F>
  auto map(F&& f) const {
    using D = std::decay_t<decltype(f(std::declval<const C&>()))>;
    QSeries<D> out(denom_, cutoff_);
    for (const auto& [k, c] : terms_) out.add_key(k, f(c));
    return out;
  }

  /// Like map, with the exponent passed as well.
  template <class F>
  auto map_indexed(F&& f) const {
    using D = std::decay_t<decltype(f(std::declval<const Rational&>(), std::declval<const C&>()))>;
    QSeries<D> out(denom_, cutoff_);
    for (const auto& [k, c] : terms_) out.add_key(k, f(exponent_of(k), c));
    return out;
  }

 private:
  /// Lowest known exponent: the valuation, or the cutoff for an empty series.
  static Cutoff low(const QSeries& s) {
    if (!s.terms_.empty()) return s.exponent_of(s.terms_.begin()->first);
    return s.cutoff_;
  }
  static Cutoff product_cutoff(const QSeries& a, const QSeries& b) {
    Cutoff x, y;
    if (a.cutoff_) x = Rational(*a.cutoff_ + *low(b));
    if (b.cutoff_) y = Rational(*b.cutoff_ + *low(a));
    return min_cutoff(x, y);
  }

  long denom_ = 1;
  Cutoff cutoff_;
  Map terms_;
};

template <class C>
bool is_zero(const QSeries<C>& s) {
  return s.is_zero();
}

/// First exponent at which a and b differ on the window up to min(cutoffs, limit).
template <class C>
std::optional<Rational> first_mismatch(const QSeries<C>& a, const QSeries<C>& b, const Cutoff& limit = std::nullopt) {
  long d = lcm_long(a.denom(), b.denom());
  QSeries<C> x = a.with_denom(d), y = b.with_denom(d);
  Cutoff w = min_cutoff(min_cutoff(a.cutoff(), b.cutoff()), limit);
  QSeries<C> probe(d, w);
  long lim = probe.limit_key();
  auto ix = x.terms().begin(), iy = y.terms().begin();
  while (ix != x.terms().end() || iy != y.terms().end()) {
    long kx = ix == x.terms().end() ? std::numeric_limits<long>::max() : ix->first;
    long ky = iy == y.terms().end() ? std::numeric_limits<long>::max() : iy->first;
    long k = std::min(kx, ky);
    if (k > lim) break;
    if (kx != ky || !(ix->second == iy->second)) return ratio(k, d);
    ++ix;
    ++iy;
  }
  return std::nullopt;
}

/// Largest |z-exponent| (in units of z, possibly half-integral) over terms up to `upto`.
inline Rational max_abs_z_exponent(const QSeries<LaurentZ>& s, const Cutoff& upto = std::nullopt) {
  int best = 0;
  for (const auto& [k, c] : s.terms()) {
    if (upto && s.exponent_of(k) > *upto) break;
    best = std::max(best, c.max_abs_key());
  }
  return ratio(best, 2);
}

/// Substitutes z -> q^a z. The result is reliable up to T - |a| E when E bounds
/// |z-exponent| over the untruncated series. When not supplied, E is the largest
/// stored |z-exponent|, which is valid only if the series has no larger ones
/// beyond T (false for theta, whose z-degree grows like sqrt(2 T)).
inline QSeries<LaurentZ> shift_z(const QSeries<LaurentZ>& s, long a, std::optional<Rational> max_z = std::nullopt) {
  Rational e = max_z ? *max_z : max_abs_z_exponent(s, s.cutoff());
  long d = lcm_long(s.denom(), (a % 2 != 0) ? 2 : 1);
  Cutoff window = shift_cutoff(s.cutoff(), Rational(-abs_of(Rational(a)) * e));
  QSeries<LaurentZ> out(d, window);
  for (const auto& [k, c] : s.terms()) {
    Rational ex = s.exponent_of(k);
    for (const auto& [zk, zc] : c.terms()) out.add_term(ex + ratio(a * zk, 2), LaurentZ::monomial(zc, zk));
  }
  return out;
}

}  // namespace rlab

#include "rlab/cyclotomic.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace rlab {

namespace {

std::atomic<long> g_conductor_cap{10000};

std::vector<long> divisors(long n) {
  std::vector<long> out;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int moebius(long n) {
  int mu = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

// x^e mod Phi_N for 0 <= e < N, as integer rows of length phi(N).
struct ReductionTable {
  long n = 1;
  long phi = 1;
  std::vector<std::vector<long>> rows;
};

std::shared_ptr<const ReductionTable> table_for(long n) {
  static std::mutex mu;
  static std::map<long, std::shared_ptr<const ReductionTable>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  auto t = std::make_shared<ReductionTable>();
  IntPoly phi_poly = cyclotomic_polynomial(n);
  t->n = n;
  t->phi = static_cast<long>(phi_poly.size()) - 1;
  const long deg = t->phi;
  t->rows.assign(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(deg), 0));
  std::vector<long> cur(static_cast<std::size_t>(deg), 0);
  for (long e = 0; e < n; ++e) {
    if (e < deg) {
      std::fill(cur.begin(), cur.end(), 0);
      cur[static_cast<std::size_t>(e)] = 1;
    } else {
      // multiply previous row by x and fold the overflow back with Phi_N
      long top = cur[static_cast<std::size_t>(deg - 1)];
      for (long j = deg - 1; j > 0; --j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)];
      cur[0] = 0;
      for (long j = 0; j < deg; ++j) cur[static_cast<std::size_t>(j)] -= top * phi_poly[static_cast<std::size_t>(j)];
    }
    t->rows[static_cast<std::size_t>(e)] = cur;
  }
  cache.emplace(n, t);
  return t;
}

void check_cap(long n) {
  if (n > g_conductor_cap.load())
    throw ConductorCapExceeded("conductor " + std::to_string(n) + " exceeds cap " +
                               std::to_string(g_conductor_cap.load()));
}

// Dense polynomials over Q used for the inverse.
using QPoly = std::vector<Rational>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// a = q*b + r
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
  while (r.size() >= b.size() && !r.empty()) {
    std::size_t shift = r.size() - b.size();
    Rational f = r.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    trim(r);
  }
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly c(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  trim(c);
  return c;
}

QPoly sub(QPoly a, const QPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

}  // namespace

void set_conductor_cap(long cap) {
  if (cap < 1) throw std::invalid_argument("conductor cap must be positive");
  g_conductor_cap.store(cap);
}

long conductor_cap() { return g_conductor_cap.load(); }

long euler_phi(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

IntPoly cyclotomic_polynomial(long n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
  // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
  IntPoly p{1};
  std::vector<long> denominators;
  for (long d : divisors(n)) {
    int mu = moebius(n / d);
    if (mu == 1) {
      IntPoly next(p.size() + static_cast<std::size_t>(d), 0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        next[i + static_cast<std::size_t>(d)] += p[i];
        next[i] -= p[i];
      }
      p = std::move(next);
    } else if (mu == -1) {
      denominators.push_back(d);
    }
  }
  for (long d : denominators) {
    // exact division by x^d - 1, from the top down
    std::size_t deg = p.size() - 1;
    std::size_t qdeg = deg - static_cast<std::size_t>(d);
    IntPoly q(qdeg + 1, 0);
    IntPoly r = p;
    for (std::size_t i = deg + 1; i-- > static_cast<std::size_t>(d);) {
      long c = r[i];
      q[i - static_cast<std::size_t>(d)] = c;
      r[i] -= c;
      r[i - static_cast<std::size_t>(d)] += c;
    }
    p = std::move(q);
  }
  return p;
}

CycRat CycRat::from_power_basis(long conductor, const std::vector<Rational>& coeffs) {
  if (conductor < 1) throw std::invalid_argument("conductor must be positive");
  check_cap(conductor);
  auto t = table_for(conductor);
  std::vector<Rational> out(static_cast<std::size_t>(t->phi), Rational(0));
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0) continue;
    const auto& row = t->rows[j % static_cast<std::size_t>(conductor)];
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i]) out[i] += coeffs[j] * row[i];
  }
  return CycRat(conductor, std::move(out));
}

CycRat CycRat::root_of_unity(const Rational& r) {
  Rational f = frac_part(r);
  long n = denominator_of(f);
  long k = to_long(f.get_num());
  if (n == 1) return CycRat(1L);
  check_cap(n);
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1, Rational(0));
  c[static_cast<std::size_t>(k)] = 1;
  return from_power_basis(n, c);
}

bool CycRat::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycRat::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational CycRat::to_rational() const {
  if (!is_rational()) throw std::domain_error("cyclotomic element is not rational: " + str());
  return coeffs_[0];
}

CycRat CycRat::promote(long m) const {
  if (m % conductor_ != 0)
    throw std::invalid_argument("promote: conductor " + std::to_string(conductor_) + " does not divide " +
                                std::to_string(m));
  if (m == conductor_) return *this;
  check_cap(m);
  auto t = table_for(m);
  const long step = m / conductor_;
  std::vector<Rational> out(static_cast<std::size_t>(t->phi), Rational(0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    const auto& row = t->rows[(static_cast<long>(j) * step) % m];
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i]) out[i] += coeffs_[j] * row[i];
  }
  return CycRat(m, std::move(out));
}

CycRat CycRat::demoted() const {
  if (conductor_ == 1) return *this;
  if (is_rational()) return CycRat(coeffs_[0]);
  // Smallest divisor d of N with the value in Q(zeta_d): solve for power-basis
  // coefficients y with promote_N(y) = x by exact elimination.
  const std::size_t rows = coeffs_.size();
  for (long d = 2; d < conductor_; ++d) {
    if (conductor_ % d != 0 || d % 4 == 2) continue;
    const auto cols = static_cast<std::size_t>(euler_phi(d));
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
    for (std::size_t j = 0; j < cols; ++j) {
      CycRat b = root_of_unity(ratio(static_cast<long>(j), d)).promote(conductor_);
      for (std::size_t i = 0; i < rows; ++i) m[i][j] = b.coeffs_[i];
    }
    for (std::size_t i = 0; i < rows; ++i) m[i][cols] = coeffs_[i];
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
      std::size_t p = r;
      while (p < rows && m[p][c] == 0) ++p;
      if (p == rows) continue;
      std::swap(m[p], m[r]);
      Rational inv = 1 / m[r][c];
      for (auto& v : m[r]) v *= inv;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || m[i][c] == 0) continue;
        Rational f = m[i][c];
        for (std::size_t k = c; k <= cols; ++k) m[i][k] -= f * m[r][k];
      }
      pivots.push_back(c);
      ++r;
    }
    bool consistent = true;
    for (std::size_t i = r; i < rows && consistent; ++i) consistent = m[i][cols] == 0;
    if (!consistent) continue;
    std::vector<Rational> y(cols, Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) y[pivots[i]] = m[i][cols];
    return from_power_basis(d, y);
  }
  return *this;
}

CycRat CycRat::conj() const {
  if (conductor_ == 1) return *this;
  std::vector<Rational> c(static_cast<std::size_t>(conductor_), Rational(0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[(conductor_ - static_cast<long>(j)) % conductor_] = coeffs_[j];
  return from_power_basis(conductor_, c);
}

CycRat CycRat::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero in cyclotomic field");
  if (conductor_ == 1) return CycRat(Rational(1 / coeffs_[0]));
  // extended Euclid: find s with s*a = 1 mod Phi_N
  IntPoly phi_int = cyclotomic_polynomial(conductor_);
  QPoly r0(phi_int.begin(), phi_int.end());
  QPoly r1 = coeffs_;
  trim(r1);
  QPoly s0, s1{Rational(1)};
  while (r1.size() > 1) {
    QPoly q, r;
    divmod(r0, r1, q, r);
    QPoly s2 = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r1 is a nonzero constant since Phi_N is irreducible
  Rational inv = 1 / r1[0];
  for (auto& c : s1) c *= inv;
  return from_power_basis(conductor_, s1);
}

std::complex<double> CycRat::to_complex() const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(conductor_);
    acc += coeffs_[j].get_d() * std::polar(1.0, angle);
  }
  return acc;
}

CycRat CycRat::operator-() const {
  CycRat out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

CycRat& CycRat::operator+=(const CycRat& o) {
  if (conductor_ != o.conductor_) {
    long l = lcm_long(conductor_, o.conductor_);
    CycRat a = promote(l);
    CycRat b = o.promote(l);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
    return *this = std::move(a);
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycRat& CycRat::operator-=(const CycRat& o) { return *this += -o; }

CycRat& CycRat::operator*=(const CycRat& o) {
  if (o.conductor_ == 1) {
    for (auto& c : coeffs_) c *= o.coeffs_[0];
    return *this;
  }
  if (conductor_ == 1) {
    Rational s = coeffs_[0];
    *this = o;
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  long l = lcm_long(conductor_, o.conductor_);
  CycRat a = promote(l);
  CycRat b = o.promote(l);
  std::vector<Rational> prod(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      if (b.coeffs_[j] != 0) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return *this = from_power_basis(l, prod);
}

bool operator==(const CycRat& a, const CycRat& b) {
  if (a.conductor_ == b.conductor_) return a.coeffs_ == b.coeffs_;
  long l = lcm_long(a.conductor_, b.conductor_);
  return a.promote(l).coeffs_ == b.promote(l).coeffs_;
}

CycRat CycRat::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CycRat result(1L), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::vector<std::pair<Rational, Rational>> CycRat::terms() const {
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    out.emplace_back(ratio(static_cast<long>(j), conductor_), coeffs_[j]);
  }
  return out;
}

std::string CycRat::str() const {
  std::string out = "[";
  bool first = true;
  for (const auto& [r, c] : terms()) {
    if (!first) out += ", ";
    first = false;
    out += "(" + to_string(r) + ", " + to_string(c) + ")";
  }
  return out + "]";
}

CycRat CycRat::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty cyclotomic literal");
  if (s.front() != '[') return CycRat(parse_rational(s));
  if (s.back() != ']') throw std::invalid_argument("malformed cyclotomic literal: " + text);
  CycRat acc;
  std::size_t pos = 1;
  while (pos < s.size() - 1) {
    if (s[pos] == ',') {
      ++pos;
      continue;
    }
    if (s[pos] != '(') throw std::invalid_argument("malformed cyclotomic literal: " + text);
    auto close = s.find(')', pos);
    if (close == std::string::npos) throw std::invalid_argument("malformed cyclotomic literal: " + text);
    std::string inner = s.substr(pos + 1, close - pos - 1);
    auto comma = inner.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed cyclotomic literal: " + text);
    acc += root_of_unity(parse_rational(inner.substr(0, comma))) * CycRat(parse_rational(inner.substr(comma + 1)));
    pos = close + 1;
  }
  return acc;
}

}  // namespace rlab

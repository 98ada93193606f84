#include "rlab/rational_function.hpp"

namespace rlab {

RationalZ::RationalZ(LaurentZ num, LaurentZ den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
}

RationalZ& RationalZ::operator+=(const RationalZ& o) {
  if (o.num_.is_zero()) return *this;
  if (num_.is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    return *this;
  }
  if (o.den_.is_monomial()) {
    // o.num/o.den = (o.num * o.den^{-1}), already Laurent
    num_ += o.num_ * rlab::inverse(o.den_) * den_;
    return *this;
  }
  if (den_.is_monomial()) {
    num_ = num_ * rlab::inverse(den_) * o.den_ + o.num_;
    den_ = o.den_;
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  return *this;
}

RationalZ& RationalZ::operator*=(const RationalZ& o) {
  num_ = num_ * o.num_;
  if (num_.is_zero()) {
    den_ = LaurentZ(1L);
    return *this;
  }
  den_ = den_ * o.den_;
  return *this;
}

RationalZ RationalZ::inverse() const {
  if (num_.is_zero()) throw std::domain_error("division by the zero rational function");
  return RationalZ(den_, num_, Unchecked{});
}

RationalZ RationalZ::reduced() const {
  if (num_.is_zero()) return RationalZ();
  LaurentZ g = gcd(num_, den_);
  LaurentZ n = *divide_exact(num_, g);
  LaurentZ d = *divide_exact(den_, g);
  // normalize d: lowest exponent 0, leading coefficient 1
  auto [shift, dense] = poly::split(d);
  CycRat lead_inv = dense.back().inverse();
  LaurentZ unit = LaurentZ::monomial(lead_inv, -shift);
  return RationalZ(n * unit, d * unit, Unchecked{});
}

std::string RationalZ::str() const {
  if (den_ == LaurentZ(1L)) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

Reduction reduce_rational(const RationalZ& f) {
  if (auto q = divide_exact(f.num(), f.den())) return {std::move(*q), LaurentZ(1L)};
  RationalZ r = f.reduced();
  if (r.den().is_monomial()) return {r.num() * inverse(r.den()), LaurentZ(1L)};
  return {std::nullopt, r.den()};
}

}  // namespace rlab

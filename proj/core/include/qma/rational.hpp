#ifndef QMA_RATIONAL_HPP
#define QMA_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qma {

/// Exact rational number over int64, always kept normalized with positive
/// denominator.  (boost::rational 1.74 mis-resolves mixed comparisons under
/// C++20 operator rewriting, so we carry our own minimal type.)
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(long long n) : num_(n) {}
  constexpr Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  constexpr long long numerator() const { return num_; }
  constexpr long long denominator() const { return den_; }

  constexpr Rational operator-() const { return raw(-num_, den_); }

  constexpr Rational& operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
  }
  constexpr Rational& operator-=(const Rational& o) { return *this += -o; }
  constexpr Rational& operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
  }
  constexpr Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
  }

  friend constexpr Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend constexpr Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend constexpr Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend constexpr Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr auto operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  double to_double() const { return double(num_) / double(den_); }

 private:
  static constexpr Rational raw(long long n, long long d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  constexpr void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const long long g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  long long num_ = 0;
  long long den_ = 1;
};

/// Gaussian rational: exact element of Q + iQ, the coefficient ring of the
/// complex coframe expansions.
struct CRational {
  Rational re{0};
  Rational im{0};

  CRational() = default;
  CRational(Rational r) : re(r) {}
  CRational(long long r) : re(r) {}
  CRational(Rational r, Rational i) : re(r), im(i) {}

  static CRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  CRational conj() const { return {re, -im}; }

  CRational operator-() const { return {-re, -im}; }
  CRational& operator+=(const CRational& o) { re += o.re; im += o.im; return *this; }
  CRational& operator-=(const CRational& o) { re -= o.re; im -= o.im; return *this; }

  friend CRational operator+(CRational a, const CRational& b) { return a += b; }
  friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
  friend CRational operator*(const CRational& a, const CRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const CRational& a, const CRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

inline std::string to_string(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

} // namespace qma

#endif

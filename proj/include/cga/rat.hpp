#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cga {

using Int = mpz_class;

// Exact rational scalar. Always canonical: gcd(|num|, den) = 1, den > 0,
// zero is 0/1. Every coefficient in the engine lives here.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long n) : q_(n) {}  // NOLINT: implicit, mirrors integer literals
  Rat(const Int& n) : q_(n) {}
  Rat(long n, long d);
  Rat(const Int& n, const Int& d);

  static Rat from_string(std::string_view s);

  Int numerator() const { return Int(q_.get_num()); }
  Int denominator() const { return Int(q_.get_den()); }
  const mpq_class& raw() const { return q_; }
  mpq_class& raw() { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  int sign() const { return sgn(q_); }
  bool is_integer() const { return q_.get_den() == 1; }

  Rat operator-() const;
  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }

  Rat inv() const;
  Rat abs() const;
  Rat pow(long e) const;  // integer exponent, negative allowed for nonzero values

  // "p/q", with "/q" omitted when q = 1.
  std::string to_string() const;

 private:
  explicit Rat(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_;
};

// Half-odd label ell >= 3/2, stored as 2*ell to keep index arithmetic integral.
class HalfInt {
 public:
  explicit HalfInt(int twice);
  static HalfInt from_string(std::string_view s);  // "n/2", odd n >= 3

  int twice() const { return twice_; }
  int two_ell() const { return twice_; }
  // K = ell + 1/2 = number of spatial variables x_1..x_K.
  int k() const { return (twice_ + 1) / 2; }
  int ell_minus_half() const { return (twice_ - 1) / 2; }
  Rat value() const { return Rat(twice_, 2); }
  std::string to_string() const;

  friend bool operator==(const HalfInt& a, const HalfInt& b) { return a.twice_ == b.twice_; }
  friend bool operator!=(const HalfInt& a, const HalfInt& b) { return a.twice_ != b.twice_; }

 private:
  int twice_;
};

Int factorial(long n);
// n!/(k!(n-k)!) for 0 <= k <= n, else 0.
Int binomial(long n, long k);

// I_m = (-1)^{m+ell+1/2} (2*ell-m)! m!  for 0 <= m <= 2*ell.
Rat structure_constant_I(long m, const HalfInt& ell);
// a_ell = ((ell-1/2)!)^2
Rat a_ell(const HalfInt& ell);
// b_ell = ((ell+1/2)!)^2
Rat b_ell(const HalfInt& ell);
// lambda_k = 2*ell+1-k  for 1 <= k <= 2*ell.
Rat lambda_k(long k, const HalfInt& ell);

}  // namespace cga

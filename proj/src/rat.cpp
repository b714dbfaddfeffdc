#include "cga/rat.hpp"

#include <charconv>

namespace cga {

Rat::Rat(long n, long d) : q_(n, d) {
  if (d == 0) throw std::domain_error("Rat: zero denominator");
  q_.canonicalize();
}

Rat::Rat(const Int& n, const Int& d) : q_(n, d) {
  if (sgn(d) == 0) throw std::domain_error("Rat: zero denominator");
  q_.canonicalize();
}

Rat Rat::from_string(std::string_view s) {
  mpq_class q;
  if (s.empty() || q.set_str(std::string(s), 10) != 0)
    throw std::invalid_argument("Rat: malformed rational '" + std::string(s) + "'");
  if (sgn(mpq_class(q.get_den())) == 0)
    throw std::domain_error("Rat: zero denominator in '" + std::string(s) + "'");
  q.canonicalize();
  return Rat(std::move(q));
}

Rat Rat::operator-() const {
  Rat r(*this);
  mpq_neg(r.q_.get_mpq_t(), q_.get_mpq_t());
  return r;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::domain_error("Rat: division by zero");
  q_ /= o.q_;
  return *this;
}

Rat Rat::inv() const {
  if (is_zero()) throw std::domain_error("Rat: inverse of zero");
  Rat r;
  mpq_inv(r.q_.get_mpq_t(), q_.get_mpq_t());
  return r;
}

Rat Rat::abs() const {
  Rat r(*this);
  mpq_abs(r.q_.get_mpq_t(), q_.get_mpq_t());
  return r;
}

Rat Rat::pow(long e) const {
  if (e == 0) return Rat(1);
  Rat base = e < 0 ? inv() : *this;
  unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
  Rat r;
  mpz_pow_ui(r.q_.get_num_mpz_t(), base.q_.get_num_mpz_t(), n);
  mpz_pow_ui(r.q_.get_den_mpz_t(), base.q_.get_den_mpz_t(), n);
  return r;  // powers of a canonical value stay canonical
}

std::string Rat::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

HalfInt::HalfInt(int twice) : twice_(twice) {
  if (twice < 3 || twice % 2 == 0)
    throw std::invalid_argument("HalfInt: ell must be half-odd and >= 3/2, got " +
                                std::to_string(twice) + "/2");
}

HalfInt HalfInt::from_string(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos || s.substr(slash + 1) != "2")
    throw std::invalid_argument("HalfInt: expected 'n/2', got '" + std::string(s) + "'");
  int n = 0;
  auto digits = s.substr(0, slash);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || p != digits.data() + digits.size())
    throw std::invalid_argument("HalfInt: expected 'n/2', got '" + std::string(s) + "'");
  return HalfInt(n);
}

std::string HalfInt::to_string() const { return std::to_string(twice_) + "/2"; }

Int factorial(long n) {
  if (n < 0) throw std::domain_error("factorial: negative argument");
  Int r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Int binomial(long n, long k) {
  if (k < 0 || k > n) return Int(0);
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Rat structure_constant_I(long m, const HalfInt& ell) {
  if (m < 0 || m > ell.two_ell())
    throw std::domain_error("structure_constant_I: m out of range 0..2*ell");
  // exponent m + ell + 1/2 is an integer since ell is half-odd
  long expo = m + (ell.twice() + 1) / 2;
  Int v = factorial(ell.two_ell() - m) * factorial(m);
  return (expo % 2 != 0) ? Rat(Int(-v)) : Rat(v);
}

Rat a_ell(const HalfInt& ell) {
  Int f = factorial(ell.ell_minus_half());
  return Rat(Int(f * f));
}

Rat b_ell(const HalfInt& ell) {
  Int f = factorial(ell.k());
  return Rat(Int(f * f));
}

Rat lambda_k(long k, const HalfInt& ell) {
  if (k < 1 || k > ell.two_ell()) throw std::domain_error("lambda_k: k out of range 1..2*ell");
  return Rat(ell.two_ell() + 1 - k);
}

}  // namespace cga

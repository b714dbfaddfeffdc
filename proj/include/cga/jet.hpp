#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cga/rat.hpp"

namespace cga {

// One coordinate of second-order jet space: t = x_0, x_k, U, U_mu, U_{mu,nu}.
struct JetCoord {
  enum class Kind : uint8_t { X, U, U1, U2 };
  Kind kind = Kind::U;
  uint8_t mu = 0, nu = 0;  // U2 stored with mu <= nu
};

// Coordinate chart for a given ell. Ids are dense:
//   0      : t (= x_0)
//   1..K   : x_1..x_K
//   K+1    : U
//   K+2+m  : U_m, m = 0..K
//   then U_{mu,nu} with mu <= nu, (0,0),(0,1),..,(K,K)
class JetSpace {
 public:
  explicit JetSpace(const HalfInt& ell);

  const HalfInt& ell() const { return ell_; }
  int K() const { return K_; }
  int size() const { return n_; }

  int id_t() const { return 0; }
  int id_x(int k) const;              // k = 0 aliases t
  int id_u() const { return K_ + 1; }
  int id_u1(int mu) const;
  int id_u2(int mu, int nu) const;    // order-insensitive

  JetCoord coord(int id) const;
  std::string name(int id) const;        // t, x2, u, u_0, u_12
  std::string latex_name(int id) const;  // t, x_{2}, U, U_{0}, U_{12}

 private:
  HalfInt ell_;
  int K_;
  int n_;
};

// Dense exponent vector. Bounds chosen for K <= 6 (ell <= 11/2), which covers
// every jet space this project instantiates; JetSpace rejects larger ell.
inline constexpr int kMaxCoords = 48;

struct Monomial {
  std::array<int8_t, kMaxCoords> e{};
  int16_t deg = 0;

  static Monomial one() { return Monomial{}; }
  static Monomial var(int id, int exp = 1);

  bool is_one() const { return deg == 0 && *this == Monomial{}; }
  int exp(int id) const { return e[static_cast<size_t>(id)]; }
  void set(int id, int exp);

  Monomial mul(const Monomial& o) const;
  Monomial div(const Monomial& o) const;
  Monomial pow(int k) const;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.deg == b.deg && a.e == b.e;
  }
};

// Canonical term order: ascending total degree, ties by larger exponent on the
// earlier coordinate first. Deterministic output depends on it.
bool mono_less(const Monomial& a, const Monomial& b);

struct MonoHash {
  size_t operator()(const Monomial& m) const {
    uint64_t h = 1469598103934665603ull;
    for (int8_t v : m.e) {
      h ^= static_cast<uint8_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

struct Term {
  Monomial m;
  Rat c;
};

// Sparse multivariate Laurent polynomial over Rat: sorted unique monomials,
// no zero coefficients, zero polynomial is the empty term list.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly constant(const Rat& c);
  static LaurentPoly variable(int id, int exp = 1);
  static LaurentPoly monomial(const Rat& c, const Monomial& m);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  bool is_monomial() const { return terms_.size() == 1; }
  size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  // Coefficient of the given monomial (zero if absent).
  Rat coefficient(const Monomial& m) const;
  // Max/min exponent of a coordinate across all terms (0 for the zero poly).
  int max_exp(int id) const;
  int min_exp(int id) const;
  bool depends_on(int id) const;
  long term_degree_max() const;

  // Internal: assumes sorted/unique/nonzero.
  static LaurentPoly from_sorted(std::vector<Term> t);
  // Sorts, merges duplicates, drops zeros.
  static LaurentPoly collect(std::vector<Term> t);

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);

 private:
  std::vector<Term> terms_;
};

LaurentPoly poly_add(const LaurentPoly& p, const LaurentPoly& q);
LaurentPoly poly_sub(const LaurentPoly& p, const LaurentPoly& q);
LaurentPoly poly_neg(const LaurentPoly& p);
LaurentPoly poly_scale(const LaurentPoly& p, const Rat& c);
LaurentPoly poly_mul_monomial(const LaurentPoly& p, const Rat& c, const Monomial& m);
LaurentPoly poly_mul(const LaurentPoly& p, const LaurentPoly& q);
LaurentPoly poly_pow(const LaurentPoly& p, long e);

// Formal partial derivative, all coordinates independent symbols.
LaurentPoly poly_partial(const LaurentPoly& p, int id);

// Exact substitution of v for coordinate id. If id occurs with a negative
// exponent, v must be a nonzero monomial (else the result leaves the ring).
LaurentPoly substitute(const LaurentPoly& p, int id, const LaurentPoly& v);

// Collects the coefficient of id^k (the exponent of id is removed).
LaurentPoly coefficient_of_power(const LaurentPoly& p, int id, int k);

// Running high-water mark of term counts, for the bench command.
namespace poly_stats {
void note(size_t n);
size_t peak();
void reset();
}  // namespace poly_stats

// Unnormalized numerator/denominator pair. den != 0. No gcd normalization is
// performed; a common monomial and rational content is stripped so towers of
// operations do not accumulate monomial factors.
class RatExpr {
 public:
  RatExpr() : num_(), den_(LaurentPoly::constant(Rat(1))) {}
  RatExpr(LaurentPoly num, LaurentPoly den);
  explicit RatExpr(const Rat& c) : num_(LaurentPoly::constant(c)), den_(LaurentPoly::constant(Rat(1))) {}
  static RatExpr variable(int id) { return RatExpr(LaurentPoly::variable(id), LaurentPoly::constant(Rat(1))); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }

 private:
  LaurentPoly num_, den_;
};

RatExpr rat_add(const RatExpr& a, const RatExpr& b);
RatExpr rat_sub(const RatExpr& a, const RatExpr& b);
RatExpr rat_mul(const RatExpr& a, const RatExpr& b);
RatExpr rat_div(const RatExpr& a, const RatExpr& b);
RatExpr rat_scale(const RatExpr& a, const Rat& c);
RatExpr rat_neg(const RatExpr& a);
RatExpr rat_pow(const RatExpr& a, long e);

// True iff the numerator is the zero polynomial (terms expand eagerly, so this
// realizes the identically-zero test).
bool rat_is_zero(const RatExpr& a);
// Value equality via cross-multiplied difference.
bool rat_eq(const RatExpr& a, const RatExpr& b);

}  // namespace cga

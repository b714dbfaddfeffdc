#include "cga/jet.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <unordered_map>

namespace cga {

JetSpace::JetSpace(const HalfInt& ell) : ell_(ell), K_(ell.k()) {
  n_ = 2 * K_ + 3 + (K_ + 1) * (K_ + 2) / 2;
  if (n_ > kMaxCoords)
    throw std::domain_error("JetSpace: ell = " + ell.to_string() +
                            " exceeds the compiled coordinate bound (K <= 6)");
}

int JetSpace::id_x(int k) const {
  if (k < 0 || k > K_) throw std::out_of_range("JetSpace: x index out of range");
  return k;  // k = 0 is t
}

int JetSpace::id_u1(int mu) const {
  if (mu < 0 || mu > K_) throw std::out_of_range("JetSpace: U_mu index out of range");
  return K_ + 2 + mu;
}

int JetSpace::id_u2(int mu, int nu) const {
  if (mu > nu) std::swap(mu, nu);
  if (mu < 0 || nu > K_) throw std::out_of_range("JetSpace: U_{mu,nu} index out of range");
  int base = 2 * K_ + 3;
  int off = mu * (K_ + 1) - mu * (mu - 1) / 2 + (nu - mu);
  return base + off;
}

JetCoord JetSpace::coord(int id) const {
  if (id < 0 || id >= n_) throw std::out_of_range("JetSpace: coordinate id out of range");
  if (id <= K_) return {JetCoord::Kind::X, static_cast<uint8_t>(id), 0};
  if (id == K_ + 1) return {JetCoord::Kind::U, 0, 0};
  if (id <= 2 * K_ + 2) return {JetCoord::Kind::U1, static_cast<uint8_t>(id - K_ - 2), 0};
  int off = id - (2 * K_ + 3);
  int mu = 0;
  while (off >= K_ + 1 - mu) {
    off -= K_ + 1 - mu;
    ++mu;
  }
  return {JetCoord::Kind::U2, static_cast<uint8_t>(mu), static_cast<uint8_t>(mu + off)};
}

std::string JetSpace::name(int id) const {
  JetCoord c = coord(id);
  switch (c.kind) {
    case JetCoord::Kind::X:
      return c.mu == 0 ? "t" : "x" + std::to_string(c.mu);
    case JetCoord::Kind::U:
      return "u";
    case JetCoord::Kind::U1:
      return "u_" + std::to_string(c.mu);
    case JetCoord::Kind::U2:
      return "u_" + std::to_string(c.mu) + std::to_string(c.nu);
  }
  return {};
}

std::string JetSpace::latex_name(int id) const {
  JetCoord c = coord(id);
  switch (c.kind) {
    case JetCoord::Kind::X:
      return c.mu == 0 ? "t" : "x_{" + std::to_string(c.mu) + "}";
    case JetCoord::Kind::U:
      return "U";
    case JetCoord::Kind::U1:
      return "U_{" + std::to_string(c.mu) + "}";
    case JetCoord::Kind::U2:
      return "U_{" + std::to_string(c.mu) + std::to_string(c.nu) + "}";
  }
  return {};
}

Monomial Monomial::var(int id, int exp) {
  Monomial m;
  m.set(id, exp);
  return m;
}

void Monomial::set(int id, int exp) {
  auto i = static_cast<size_t>(id);
  deg = static_cast<int16_t>(deg - e[i] + exp);
  if (exp < -127 || exp > 127) throw std::overflow_error("Monomial: exponent out of int8 range");
  e[i] = static_cast<int8_t>(exp);
}

Monomial Monomial::mul(const Monomial& o) const {
  Monomial r;
  for (size_t i = 0; i < kMaxCoords; ++i) {
    int v = e[i] + o.e[i];
    if (v < -127 || v > 127) throw std::overflow_error("Monomial: exponent overflow");
    r.e[i] = static_cast<int8_t>(v);
  }
  r.deg = static_cast<int16_t>(deg + o.deg);
  return r;
}

Monomial Monomial::div(const Monomial& o) const {
  Monomial r;
  for (size_t i = 0; i < kMaxCoords; ++i) {
    int v = e[i] - o.e[i];
    if (v < -127 || v > 127) throw std::overflow_error("Monomial: exponent overflow");
    r.e[i] = static_cast<int8_t>(v);
  }
  r.deg = static_cast<int16_t>(deg - o.deg);
  return r;
}

Monomial Monomial::pow(int k) const {
  Monomial r;
  for (size_t i = 0; i < kMaxCoords; ++i) {
    int v = e[i] * k;
    if (v < -127 || v > 127) throw std::overflow_error("Monomial: exponent overflow");
    r.e[i] = static_cast<int8_t>(v);
  }
  r.deg = static_cast<int16_t>(deg * k);
  return r;
}

bool mono_less(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg < b.deg;
  for (size_t i = 0; i < kMaxCoords; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  return false;
}

namespace poly_stats {
namespace {
std::atomic<size_t> peak_terms{0};
}
void note(size_t n) {
  size_t cur = peak_terms.load(std::memory_order_relaxed);
  while (n > cur && !peak_terms.compare_exchange_weak(cur, n, std::memory_order_relaxed)) {
  }
}
size_t peak() { return peak_terms.load(); }
void reset() { peak_terms.store(0); }
}  // namespace poly_stats

LaurentPoly LaurentPoly::constant(const Rat& c) {
  LaurentPoly p;
  if (!c.is_zero()) p.terms_.push_back({Monomial::one(), c});
  return p;
}

LaurentPoly LaurentPoly::variable(int id, int exp) {
  if (exp == 0) return constant(Rat(1));
  LaurentPoly p;
  p.terms_.push_back({Monomial::var(id, exp), Rat(1)});
  return p;
}

LaurentPoly LaurentPoly::monomial(const Rat& c, const Monomial& m) {
  LaurentPoly p;
  if (!c.is_zero()) p.terms_.push_back({m, c});
  return p;
}

Rat LaurentPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& k) { return mono_less(t.m, k); });
  if (it != terms_.end() && it->m == m) return it->c;
  return Rat(0);
}

int LaurentPoly::max_exp(int id) const {
  int r = 0;
  for (const Term& t : terms_) r = std::max(r, t.m.exp(id));
  return r;
}

int LaurentPoly::min_exp(int id) const {
  int r = 0;
  bool first = true;
  for (const Term& t : terms_) {
    if (first) {
      r = t.m.exp(id);
      first = false;
    } else {
      r = std::min(r, t.m.exp(id));
    }
  }
  return r;
}

bool LaurentPoly::depends_on(int id) const {
  for (const Term& t : terms_)
    if (t.m.exp(id) != 0) return true;
  return false;
}

long LaurentPoly::term_degree_max() const {
  long r = 0;
  for (const Term& t : terms_) r = std::max<long>(r, t.m.deg);
  return r;
}

LaurentPoly LaurentPoly::from_sorted(std::vector<Term> t) {
  LaurentPoly p;
  p.terms_ = std::move(t);
  poly_stats::note(p.terms_.size());
  return p;
}

LaurentPoly LaurentPoly::collect(std::vector<Term> t) {
  std::sort(t.begin(), t.end(), [](const Term& a, const Term& b) { return mono_less(a.m, b.m); });
  std::vector<Term> out;
  out.reserve(t.size());
  for (auto& term : t) {
    if (!out.empty() && out.back().m == term.m) {
      out.back().c += term.c;
      if (out.back().c.is_zero()) out.pop_back();
    } else if (!term.c.is_zero()) {
      out.push_back(std::move(term));
    }
  }
  return from_sorted(std::move(out));
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].m == b.terms_[i].m) || a.terms_[i].c != b.terms_[i].c) return false;
  return true;
}

LaurentPoly poly_add(const LaurentPoly& p, const LaurentPoly& q) {
  std::vector<Term> out;
  out.reserve(p.size() + q.size());
  auto a = p.terms().begin(), ae = p.terms().end();
  auto b = q.terms().begin(), be = q.terms().end();
  while (a != ae && b != be) {
    if (a->m == b->m) {
      Rat c = a->c + b->c;
      if (!c.is_zero()) out.push_back({a->m, std::move(c)});
      ++a;
      ++b;
    } else if (mono_less(a->m, b->m)) {
      out.push_back(*a++);
    } else {
      out.push_back(*b++);
    }
  }
  out.insert(out.end(), a, ae);
  out.insert(out.end(), b, be);
  return LaurentPoly::from_sorted(std::move(out));
}

LaurentPoly poly_sub(const LaurentPoly& p, const LaurentPoly& q) { return poly_add(p, poly_neg(q)); }

LaurentPoly poly_neg(const LaurentPoly& p) {
  std::vector<Term> out(p.terms());
  for (Term& t : out) t.c = -t.c;
  return LaurentPoly::from_sorted(std::move(out));
}

LaurentPoly poly_scale(const LaurentPoly& p, const Rat& c) {
  if (c.is_zero()) return LaurentPoly::zero();
  std::vector<Term> out(p.terms());
  for (Term& t : out) t.c *= c;
  return LaurentPoly::from_sorted(std::move(out));
}

LaurentPoly poly_mul_monomial(const LaurentPoly& p, const Rat& c, const Monomial& m) {
  if (c.is_zero()) return LaurentPoly::zero();
  std::vector<Term> out;
  out.reserve(p.size());
  for (const Term& t : p.terms()) out.push_back({t.m.mul(m), t.c * c});
  // the order is translation-invariant, so sortedness is preserved
  return LaurentPoly::from_sorted(std::move(out));
}

namespace {

using AccMap = std::unordered_map<Monomial, mpq_class, MonoHash>;

void addmul_into(AccMap& acc, const LaurentPoly& a, const LaurentPoly& b, bool negate = false) {
  mpq_class tmp;
  for (const Term& ta : a.terms()) {
    for (const Term& tb : b.terms()) {
      mpq_mul(tmp.get_mpq_t(), ta.c.raw().get_mpq_t(), tb.c.raw().get_mpq_t());
      mpq_class& slot = acc[ta.m.mul(tb.m)];
      if (negate)
        mpq_sub(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
      else
        mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
    }
  }
}

LaurentPoly acc_to_poly(AccMap& acc) {
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) out.push_back({m, Rat(Int(c.get_num()), Int(c.get_den()))});
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return mono_less(a.m, b.m); });
  return LaurentPoly::from_sorted(std::move(out));
}

}  // namespace

LaurentPoly poly_mul(const LaurentPoly& p, const LaurentPoly& q) {
  if (p.is_zero() || q.is_zero()) return LaurentPoly::zero();
  if (p.size() == 1) return poly_mul_monomial(q, p.terms()[0].c, p.terms()[0].m);
  if (q.size() == 1) return poly_mul_monomial(p, q.terms()[0].c, q.terms()[0].m);
  AccMap acc;
  acc.reserve(p.size() * q.size() / 2 + 8);
  addmul_into(acc, p, q);
  return acc_to_poly(acc);
}

LaurentPoly poly_pow(const LaurentPoly& p, long e) {
  if (e < 0) throw std::domain_error("poly_pow: negative exponent");
  LaurentPoly r = LaurentPoly::constant(Rat(1));
  LaurentPoly base = p;
  while (e > 0) {
    if (e & 1) r = poly_mul(r, base);
    e >>= 1;
    if (e > 0) base = poly_mul(base, base);
  }
  return r;
}

LaurentPoly poly_partial(const LaurentPoly& p, int id) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const Term& t : p.terms()) {
    int e = t.m.exp(id);
    if (e == 0) continue;
    Monomial m = t.m;
    m.set(id, e - 1);
    out.push_back({m, t.c * Rat(e)});
  }
  // exponent shift by a fixed vector preserves the order of surviving terms
  return LaurentPoly::from_sorted(std::move(out));
}

LaurentPoly substitute(const LaurentPoly& p, int id, const LaurentPoly& v) {
  int lo = p.min_exp(id);
  if (lo < 0 && !v.is_monomial())
    throw std::domain_error("substitute: negative power requires an invertible (monomial) value");
  if (v.is_zero()) {
    // keep only terms free of the coordinate
    std::vector<Term> out;
    for (const Term& t : p.terms())
      if (t.m.exp(id) == 0) out.push_back(t);
    return LaurentPoly::from_sorted(std::move(out));
  }
  if (v.is_monomial()) {
    const Rat& vc = v.terms()[0].c;
    const Monomial& vm = v.terms()[0].m;
    std::vector<Term> out;
    out.reserve(p.size());
    for (const Term& t : p.terms()) {
      int e = t.m.exp(id);
      Monomial m = t.m;
      m.set(id, 0);
      out.push_back({m.mul(vm.pow(e)), t.c * vc.pow(e)});
    }
    return LaurentPoly::collect(std::move(out));
  }
  // general polynomial value, nonnegative powers: Horner over collected powers
  int hi = p.max_exp(id);
  LaurentPoly r = LaurentPoly::zero();
  for (int k = hi; k >= 0; --k) {
    r = poly_mul(r, v);
    r = poly_add(r, coefficient_of_power(p, id, k));
  }
  return r;
}

LaurentPoly coefficient_of_power(const LaurentPoly& p, int id, int k) {
  std::vector<Term> out;
  for (const Term& t : p.terms()) {
    if (t.m.exp(id) != k) continue;
    Monomial m = t.m;
    m.set(id, 0);
    out.push_back({m, t.c});
  }
  return LaurentPoly::collect(std::move(out));
}

namespace {

// Common monomial content of num/den (componentwise min over both), plus a
// rational factor making den primitive with positive leading coefficient.
void strip_common_content(LaurentPoly& num, LaurentPoly& den) {
  if (num.is_zero()) {
    den = LaurentPoly::constant(Rat(1));
    return;
  }
  Monomial g;
  bool first = true;
  for (const LaurentPoly* p : {&num, &den}) {
    for (const Term& t : p->terms()) {
      if (first) {
        g = t.m;
        first = false;
      } else {
        for (size_t i = 0; i < kMaxCoords; ++i) g.e[i] = std::min(g.e[i], t.m.e[i]);
      }
    }
  }
  int16_t d = 0;
  for (size_t i = 0; i < kMaxCoords; ++i) d = static_cast<int16_t>(d + g.e[i]);
  g.deg = d;

  // rational content of den
  Int num_gcd(0), den_lcm(1);
  for (const Term& t : den.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.c.numerator().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.c.denominator().get_mpz_t());
  }
  Rat content(num_gcd, den_lcm);
  if (den.terms().back().c.sign() < 0) content = -content;
  Rat inv_content = content.inv();

  bool trivial_m = g.is_one();
  if (trivial_m && content.is_one()) return;
  Monomial ginv = Monomial::one().div(g);
  num = poly_mul_monomial(num, inv_content, trivial_m ? Monomial::one() : ginv);
  den = poly_mul_monomial(den, inv_content, trivial_m ? Monomial::one() : ginv);
}

}  // namespace

RatExpr::RatExpr(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("RatExpr: zero denominator");
  strip_common_content(num_, den_);
}

RatExpr rat_add(const RatExpr& a, const RatExpr& b) {
  if (a.den() == b.den()) return RatExpr(poly_add(a.num(), b.num()), a.den());
  return RatExpr(poly_add(poly_mul(a.num(), b.den()), poly_mul(b.num(), a.den())),
                 poly_mul(a.den(), b.den()));
}

RatExpr rat_sub(const RatExpr& a, const RatExpr& b) {
  if (a.den() == b.den()) return RatExpr(poly_sub(a.num(), b.num()), a.den());
  return RatExpr(poly_sub(poly_mul(a.num(), b.den()), poly_mul(b.num(), a.den())),
                 poly_mul(a.den(), b.den()));
}

RatExpr rat_mul(const RatExpr& a, const RatExpr& b) {
  return RatExpr(poly_mul(a.num(), b.num()), poly_mul(a.den(), b.den()));
}

RatExpr rat_div(const RatExpr& a, const RatExpr& b) {
  if (b.num().is_zero()) throw std::domain_error("rat_div: division by zero expression");
  return RatExpr(poly_mul(a.num(), b.den()), poly_mul(a.den(), b.num()));
}

RatExpr rat_scale(const RatExpr& a, const Rat& c) { return RatExpr(poly_scale(a.num(), c), a.den()); }

RatExpr rat_neg(const RatExpr& a) { return RatExpr(poly_neg(a.num()), a.den()); }

RatExpr rat_pow(const RatExpr& a, long e) {
  if (e >= 0) return RatExpr(poly_pow(a.num(), e), poly_pow(a.den(), e));
  if (a.num().is_zero()) throw std::domain_error("rat_pow: negative power of zero");
  return RatExpr(poly_pow(a.den(), -e), poly_pow(a.num(), -e));
}

bool rat_is_zero(const RatExpr& a) { return a.num().is_zero(); }

bool rat_eq(const RatExpr& a, const RatExpr& b) { return rat_is_zero(rat_sub(a, b)); }

}  // namespace cga

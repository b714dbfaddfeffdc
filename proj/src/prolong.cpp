#include "cga/prolong.hpp"

#include <stdexcept>
#include <unordered_map>

namespace cga {

namespace {
const LaurentPoly kZeroPoly;

void put(std::map<int, LaurentPoly>& m, int k, LaurentPoly p) {
  if (!p.is_zero()) m[k] = std::move(p);
}

void put(std::map<std::pair<int, int>, LaurentPoly>& m, std::pair<int, int> k, LaurentPoly p) {
  if (!p.is_zero()) m[k] = std::move(p);
}

template <typename Map>
Map map_add(const Map& a, const Map& b) {
  Map r = a;
  for (const auto& [k, p] : b) {
    auto it = r.find(k);
    if (it == r.end()) {
      r[k] = p;
    } else {
      it->second = poly_add(it->second, p);
      if (it->second.is_zero()) r.erase(it);
    }
  }
  return r;
}

template <typename Map, typename Fn>
Map map_transform(const Map& a, Fn&& fn) {
  Map r;
  for (const auto& [k, p] : a) {
    LaurentPoly q = fn(p);
    if (!q.is_zero()) r[k] = std::move(q);
  }
  return r;
}

template <typename Map>
bool map_eq(const Map& a, const Map& b) {
  auto nonzero = [](const Map& m) {
    size_t n = 0;
    for (const auto& [k, p] : m)
      if (!p.is_zero()) ++n;
    return n;
  };
  if (nonzero(a) != nonzero(b)) return false;
  for (const auto& [k, p] : a) {
    if (p.is_zero()) continue;
    auto it = b.find(k);
    if (it == b.end() || !(it->second == p)) return false;
  }
  return true;
}
}  // namespace

const LaurentPoly& VectorField::xi_at(int mu) const {
  auto it = xi.find(mu);
  return it == xi.end() ? kZeroPoly : it->second;
}

bool VectorField::is_zero() const {
  if (!eta.is_zero()) return false;
  for (const auto& [k, p] : xi)
    if (!p.is_zero()) return false;
  return true;
}

VectorField vf_add(const VectorField& a, const VectorField& b) {
  return {map_add(a.xi, b.xi), poly_add(a.eta, b.eta)};
}

VectorField vf_scale(const VectorField& a, const Rat& c) {
  return {map_transform(a.xi, [&](const LaurentPoly& p) { return poly_scale(p, c); }),
          poly_scale(a.eta, c)};
}

VectorField vf_neg(const VectorField& a) { return vf_scale(a, Rat(-1)); }

bool vf_eq(const VectorField& a, const VectorField& b) {
  return map_eq(a.xi, b.xi) && a.eta == b.eta;
}

LaurentPoly vf_apply(const VectorField& X, const LaurentPoly& p, const JetSpace& sp) {
  LaurentPoly r;
  for (const auto& [mu, c] : X.xi) r = poly_add(r, poly_mul(c, poly_partial(p, sp.id_x(mu))));
  if (!X.eta.is_zero()) r = poly_add(r, poly_mul(X.eta, poly_partial(p, sp.id_u())));
  return r;
}

VectorField bracket(const VectorField& X, const VectorField& Y, const JetSpace& sp) {
  VectorField r;
  for (int mu = 0; mu <= sp.K(); ++mu) {
    LaurentPoly c = poly_sub(vf_apply(X, Y.xi_at(mu), sp), vf_apply(Y, X.xi_at(mu), sp));
    put(r.xi, mu, std::move(c));
  }
  r.eta = poly_sub(vf_apply(X, Y.eta, sp), vf_apply(Y, X.eta, sp));
  return r;
}

const LaurentPoly& ProlongedField::rho_at(int mu) const {
  auto it = rho.find(mu);
  return it == rho.end() ? kZeroPoly : it->second;
}

const LaurentPoly& ProlongedField::sigma_at(int mu, int nu) const {
  if (mu > nu) std::swap(mu, nu);
  auto it = sigma.find({mu, nu});
  return it == sigma.end() ? kZeroPoly : it->second;
}

ProlongedField pf_add(const ProlongedField& a, const ProlongedField& b) {
  return {vf_add(a.base, b.base), map_add(a.rho, b.rho), map_add(a.sigma, b.sigma)};
}

ProlongedField pf_scale(const ProlongedField& a, const Rat& c) {
  auto s = [&](const LaurentPoly& p) { return poly_scale(p, c); };
  return {vf_scale(a.base, c), map_transform(a.rho, s), map_transform(a.sigma, s)};
}

ProlongedField pf_scale_poly(const ProlongedField& a, const LaurentPoly& q) {
  auto s = [&](const LaurentPoly& p) { return poly_mul(p, q); };
  return {{map_transform(a.base.xi, s), poly_mul(a.base.eta, q)}, map_transform(a.rho, s),
          map_transform(a.sigma, s)};
}

ProlongedField pf_neg(const ProlongedField& a) { return pf_scale(a, Rat(-1)); }

bool pf_eq(const ProlongedField& a, const ProlongedField& b) {
  return vf_eq(a.base, b.base) && map_eq(a.rho, b.rho) && map_eq(a.sigma, b.sigma);
}

bool pf_is_zero(const ProlongedField& a) {
  if (!a.base.is_zero()) return false;
  for (const auto& [k, p] : a.rho)
    if (!p.is_zero()) return false;
  for (const auto& [k, p] : a.sigma)
    if (!p.is_zero()) return false;
  return true;
}

ProlongedField prolong2(const VectorField& X, const JetSpace& sp) {
  const int K = sp.K();
  const int u = sp.id_u();

  // first derivatives of the base coefficients
  std::vector<std::vector<LaurentPoly>> xi_x(K + 1), xi_xx(K + 1);
  std::vector<LaurentPoly> xi_u(K + 1), xi_uu(K + 1);
  std::vector<std::vector<LaurentPoly>> xi_xu(K + 1);
  for (int tau = 0; tau <= K; ++tau) {
    const LaurentPoly& xt = X.xi_at(tau);
    xi_u[tau] = poly_partial(xt, u);
    xi_uu[tau] = poly_partial(xi_u[tau], u);
    xi_x[tau].resize(K + 1);
    xi_xu[tau].resize(K + 1);
    for (int mu = 0; mu <= K; ++mu) {
      xi_x[tau][mu] = poly_partial(xt, sp.id_x(mu));
      xi_xu[tau][mu] = poly_partial(xi_x[tau][mu], u);
    }
  }
  std::vector<LaurentPoly> eta_x(K + 1);
  for (int mu = 0; mu <= K; ++mu) eta_x[mu] = poly_partial(X.eta, sp.id_x(mu));
  LaurentPoly eta_u = poly_partial(X.eta, u);
  LaurentPoly eta_uu = poly_partial(eta_u, u);

  auto U1 = [&](int mu) { return LaurentPoly::variable(sp.id_u1(mu)); };
  auto U2 = [&](int mu, int nu) { return LaurentPoly::variable(sp.id_u2(mu, nu)); };

  ProlongedField F;
  F.base = X;

  for (int mu = 0; mu <= K; ++mu) {
    LaurentPoly r = poly_add(eta_x[mu], poly_mul(eta_u, U1(mu)));
    for (int nu = 0; nu <= K; ++nu) {
      LaurentPoly inner = poly_add(xi_x[nu][mu], poly_mul(xi_u[nu], U1(mu)));
      r = poly_sub(r, poly_mul(U1(nu), inner));
    }
    put(F.rho, mu, std::move(r));
  }

  for (int mu = 0; mu <= K; ++mu) {
    for (int nu = mu; nu <= K; ++nu) {
      LaurentPoly s = poly_partial(eta_x[mu], sp.id_x(nu));
      s = poly_add(s, poly_mul(poly_partial(eta_x[mu], u), U1(nu)));
      s = poly_add(s, poly_mul(poly_partial(eta_x[nu], u), U1(mu)));
      s = poly_add(s, poly_mul(eta_u, U2(mu, nu)));
      s = poly_add(s, poly_mul(eta_uu, poly_mul(U1(mu), U1(nu))));
      for (int tau = 0; tau <= K; ++tau) {
        s = poly_sub(s, poly_mul(poly_partial(xi_x[tau][mu], sp.id_x(nu)), U1(tau)));
        s = poly_sub(s, poly_add(poly_mul(xi_x[tau][mu], U2(nu, tau)),
                                 poly_mul(xi_x[tau][nu], U2(mu, tau))));
        LaurentPoly three = poly_mul(U1(tau), U2(mu, nu));
        three = poly_add(three, poly_mul(U1(mu), U2(nu, tau)));
        three = poly_add(three, poly_mul(U1(nu), U2(mu, tau)));
        s = poly_sub(s, poly_mul(xi_u[tau], three));
        LaurentPoly last = poly_mul(xi_xu[tau][mu], U1(nu));
        last = poly_add(last, poly_mul(xi_xu[tau][nu], U1(mu)));
        last = poly_add(last, poly_mul(xi_uu[tau], poly_mul(U1(mu), U1(nu))));
        s = poly_sub(s, poly_mul(last, U1(tau)));
      }
      put(F.sigma, {mu, nu}, std::move(s));
    }
  }
  return F;
}

LaurentPoly apply_poly(const ProlongedField& F, const LaurentPoly& p, const JetSpace& sp) {
  std::unordered_map<Monomial, mpq_class, MonoHash> acc;
  mpq_class tmp;
  auto addmul = [&](const LaurentPoly& coeff, const LaurentPoly& dp) {
    for (const Term& ta : coeff.terms()) {
      for (const Term& tb : dp.terms()) {
        mpq_mul(tmp.get_mpq_t(), ta.c.raw().get_mpq_t(), tb.c.raw().get_mpq_t());
        mpq_class& slot = acc[ta.m.mul(tb.m)];
        mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
      }
    }
  };
  for (const auto& [mu, c] : F.base.xi) addmul(c, poly_partial(p, sp.id_x(mu)));
  if (!F.base.eta.is_zero()) addmul(F.base.eta, poly_partial(p, sp.id_u()));
  for (const auto& [mu, c] : F.rho) addmul(c, poly_partial(p, sp.id_u1(mu)));
  for (const auto& [mn, c] : F.sigma) addmul(c, poly_partial(p, sp.id_u2(mn.first, mn.second)));

  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) out.push_back({m, Rat(Int(c.get_num()), Int(c.get_den()))});
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return mono_less(a.m, b.m); });
  return LaurentPoly::from_sorted(std::move(out));
}

RatExpr apply(const ProlongedField& F, const RatExpr& e, const JetSpace& sp) {
  LaurentPoly fn = apply_poly(F, e.num(), sp);
  LaurentPoly fd = apply_poly(F, e.den(), sp);
  LaurentPoly num = poly_sub(poly_mul(fn, e.den()), poly_mul(e.num(), fd));
  if (num.is_zero()) return RatExpr();
  return RatExpr(std::move(num), poly_mul(e.den(), e.den()));
}

ProlongedField restrict_t0(const ProlongedField& F, const JetSpace& sp) {
  const int t = sp.id_t();
  auto rt = [&](const LaurentPoly& p) { return substitute(p, t, LaurentPoly::zero()); };
  return {{map_transform(F.base.xi, rt), rt(F.base.eta)}, map_transform(F.rho, rt),
          map_transform(F.sigma, rt)};
}

ProlongedField taylor_coefficient_t(const ProlongedField& F, int a, const JetSpace& sp) {
  const int t = sp.id_t();
  auto ct = [&](const LaurentPoly& p) { return coefficient_of_power(p, t, a); };
  return {{map_transform(F.base.xi, ct), ct(F.base.eta)}, map_transform(F.rho, ct),
          map_transform(F.sigma, ct)};
}

std::optional<Rat> weight_eigenvalue(const RatExpr& e, const ProlongedField& F, const JetSpace& sp) {
  RatExpr Fe = apply(F, e, sp);
  if (rat_is_zero(Fe)) return Rat(0);
  if (e.num().is_zero()) return std::nullopt;
  // solve Fe = kappa * e: R = Fe.num * e.den, S = Fe.den * e.num, R = kappa S
  LaurentPoly R = poly_mul(Fe.num(), e.den());
  LaurentPoly S = poly_mul(Fe.den(), e.num());
  const Term& lead = S.terms().front();
  Rat kappa = R.coefficient(lead.m) / lead.c;
  if (kappa.is_zero()) return std::nullopt;
  if (poly_sub(R, poly_scale(S, kappa)).is_zero()) return kappa;
  return std::nullopt;
}

}  // namespace cga

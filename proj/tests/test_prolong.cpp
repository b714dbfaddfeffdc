#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cga/algebra.hpp"
#include "cga/expr_io.hpp"
#include "cga/prolong.hpp"

using namespace cga;

namespace {

LaurentPoly P(const char* s, const JetSpace& sp) { return parse_expr(s, sp).num(); }

// random field with coefficients polynomial in {x_mu, U} only
VectorField random_field(std::mt19937_64& rng, const JetSpace& sp) {
  std::uniform_int_distribution<int> which(0, sp.K() + 1);
  std::uniform_int_distribution<int> expd(0, 2);
  std::uniform_int_distribution<long> coef(-4, 4);
  auto poly = [&] {
    std::vector<Term> ts;
    int n = which(rng) % 3 + 1;
    for (int i = 0; i < n; ++i) {
      Monomial m;
      m.set(sp.id_x(which(rng) % (sp.K() + 1)), expd(rng));
      m.set(sp.id_u(), expd(rng));
      long c = coef(rng);
      if (c != 0) ts.push_back({m, Rat(c)});
    }
    return LaurentPoly::collect(std::move(ts));
  };
  VectorField f;
  for (int mu = 0; mu <= sp.K(); ++mu)
    if (which(rng) % 2 == 0) f.xi[mu] = poly();
  if (which(rng) % 2 == 0) f.eta = poly();
  return f;
}

ProlongedField minus_mhat_part(const ProlongedField& F, const GeneratorSet& gens) {
  // subtract (eta_U at t=0) * hat-M, the part conventionally absorbed into
  // the M-invariance of the function space
  const JetSpace& sp = gens.space();
  LaurentPoly etaU = poly_partial(F.base.eta, sp.id_u());
  return pf_add(F, pf_scale_poly(gens.hat("M"), poly_neg(etaU)));
}

}  // namespace

TEST_CASE("sigma and rho against a hand-expanded two-variable instance") {
  JetSpace sp(HalfInt(3));
  // X = x1 u d/dx1 + u^2 d/du
  VectorField X;
  X.xi[1] = P("x1*u", sp);
  X.eta = P("u^2", sp);
  ProlongedField F = prolong2(X, sp);
  CHECK(F.rho_at(0) == P("2*u*u_0 - x1*u_0*u_1", sp));
  CHECK(F.rho_at(1) == P("u*u_1 - x1*u_1^2", sp));
  CHECK(F.sigma_at(1, 1) == P("-3*x1*u_1*u_11", sp));
  CHECK(F.sigma_at(1, 2) == P("u*u_12 + u_1*u_2 - 2*x1*u_1*u_12 - x1*u_2*u_11", sp));
  CHECK(F.sigma_at(2, 2) == P("2*u*u_22 + 2*u_2^2 - x1*u_1*u_22 - 2*x1*u_2*u_12", sp));
}

TEST_CASE("prolongation of M is the full scaling operator") {
  for (int twice : {3, 5}) {
    GeneratorSet gens{HalfInt(twice)};
    const JetSpace& sp = gens.space();
    const ProlongedField& M = gens.hat("M");
    for (int mu = 0; mu <= sp.K(); ++mu) {
      CHECK(M.rho_at(mu) == LaurentPoly::variable(sp.id_u1(mu)));
      for (int nu = mu; nu <= sp.K(); ++nu)
        CHECK(M.sigma_at(mu, nu) == LaurentPoly::variable(sp.id_u2(mu, nu)));
    }
  }
}

TEST_CASE("prolongation of H is trivial") {
  GeneratorSet gens{HalfInt(5)};
  const ProlongedField& H = gens.hat("H");
  CHECK(H.rho.empty());
  CHECK(H.sigma.empty());
}

TEST_CASE("prolongation of D matches the closed form") {
  GeneratorSet gens{HalfInt(3)};
  const JetSpace& sp = gens.space();
  const ProlongedField& D = gens.hat("D");
  CHECK(D.sigma_at(0, 0) == P("-4*u_00", sp));
  CHECK(D.rho_at(0) == P("-2*u_0", sp));
  // rho^k = -2(l+1-k) U_k, sigma^{km} = -2(2l+2-k-m) U_km, sigma^{0k} = -2(l+2-k) U_0k
  for (int k = 1; k <= 2; ++k) {
    CHECK(D.rho_at(k) == poly_scale(LaurentPoly::variable(sp.id_u1(k)), Rat(-(3 + 2 - 2 * k))));
    CHECK(D.sigma_at(0, k) ==
          poly_scale(LaurentPoly::variable(sp.id_u2(0, k)), Rat(-(3 + 4 - 2 * k))));
    for (int m = k; m <= 2; ++m)
      CHECK(D.sigma_at(k, m) ==
            poly_scale(LaurentPoly::variable(sp.id_u2(k, m)), Rat(-2 * (3 + 2 - k - m))));
  }
}

TEST_CASE("restricted P operators match their closed forms at ell = 3/2") {
  GeneratorSet gens{HalfInt(3)};
  const JetSpace& sp = gens.space();

  // tilde-P2 = d/dx2 - (U_1 dU_0 + 2 U_01 dU_00 + U_11 dU_01 + U_12 dU_02)
  {
    const ProlongedField& T = gens.tilde("P2");
    CHECK(T.base.xi.at(2) == LaurentPoly::constant(Rat(1)));
    CHECK(T.base.eta.is_zero());
    CHECK(T.rho_at(0) == P("-u_1", sp));
    CHECK(T.rho_at(1).is_zero());
    CHECK(T.sigma_at(0, 0) == P("-2*u_01", sp));
    CHECK(T.sigma_at(0, 1) == P("-u_11", sp));
    CHECK(T.sigma_at(0, 2) == P("-u_12", sp));
    CHECK(T.sigma_at(1, 1).is_zero());
  }

  // tilde-P3 + 2 x2 hat-M = -2[U_2 dU_0 + U dU_2 + (U_1 + 2U_02) dU_00
  //   + U_12 dU_01 + (U_0 + U_22) dU_02 + U_1 dU_12 + 2U_2 dU_22]
  {
    ProlongedField T = minus_mhat_part(gens.tilde("P3"), gens);
    CHECK(T.base.eta.is_zero());
    CHECK(T.rho_at(0) == P("-2*u_2", sp));
    CHECK(T.rho_at(2) == P("-2*u", sp));
    CHECK(T.sigma_at(0, 0) == P("-2*u_1 - 4*u_02", sp));
    CHECK(T.sigma_at(0, 1) == P("-2*u_12", sp));
    CHECK(T.sigma_at(0, 2) == P("-2*u_0 - 2*u_22", sp));
    CHECK(T.sigma_at(1, 2) == P("-2*u_1", sp));
    CHECK(T.sigma_at(2, 2) == P("-4*u_2", sp));
    CHECK(T.sigma_at(1, 1).is_zero());
  }

  // tilde-P4 - 6 x1 hat-M = -6[x2 U dU_0 - U dU_1 + (U_2 + 2 x2 U_0) dU_00
  //   + (x2 U_1 - U_0) dU_01 + (x2 U_2 + U) dU_02 - 2U_1 dU_11 - U_2 dU_12]
  {
    ProlongedField T = minus_mhat_part(gens.tilde("P4"), gens);
    CHECK(T.base.eta.is_zero());
    CHECK(T.rho_at(0) == P("-6*x2*u", sp));
    CHECK(T.rho_at(1) == P("6*u", sp));
    CHECK(T.sigma_at(0, 0) == P("-6*u_2 - 12*x2*u_0", sp));
    CHECK(T.sigma_at(0, 1) == P("-6*x2*u_1 + 6*u_0", sp));
    CHECK(T.sigma_at(0, 2) == P("-6*x2*u_2 - 6*u", sp));
    CHECK(T.sigma_at(1, 1) == P("12*u_1", sp));
    CHECK(T.sigma_at(1, 2) == P("6*u_2", sp));
  }
}

TEST_CASE("tilde-P(l+3/2) at ell = 5/2 matches the a_l block") {
  GeneratorSet gens{HalfInt(5)};
  const JetSpace& sp = gens.space();
  ProlongedField T = minus_mhat_part(gens.tilde("P4"), gens);
  // -(l+1/2)[U_3 dU_0 + sum_{k=1,2} U_k3 dU_0k
  //   + a_l (U dU_3 + sum_m U_m dU_m3 + U_3 dU_33)], a_l = 4
  CHECK(T.base.eta.is_zero());
  CHECK(T.rho_at(0) == P("-3*u_3", sp));
  CHECK(T.rho_at(3) == P("-12*u", sp));
  CHECK(T.sigma_at(0, 1) == P("-3*u_13", sp));
  CHECK(T.sigma_at(0, 2) == P("-3*u_23", sp));
  CHECK(T.sigma_at(1, 3) == P("-12*u_1", sp));
  CHECK(T.sigma_at(2, 3) == P("-12*u_2", sp));
  CHECK(T.sigma_at(3, 3) == P("-24*u_3", sp));  // the m = K and diagonal terms combine
  // the only slots beyond the printed operator act on U_00 and U_03
  CHECK(T.sigma_at(0, 0) == P("-6*u_2 - 6*u_03", sp));
  CHECK(T.sigma_at(0, 3) == P("-12*u_0 - 3*u_33", sp));
  CHECK(T.rho_at(1).is_zero());
  CHECK(T.sigma_at(1, 1).is_zero());
  CHECK(T.sigma_at(1, 2).is_zero());
}

TEST_CASE("bracket closed-form rows") {
  GeneratorSet g32{HalfInt(3)};
  const JetSpace& sp = g32.space();
  // [H, C] = D
  CHECK(vf_eq(bracket(g32.field("H"), g32.field("C"), sp), g32.field("D")));
  // [X, X] = 0
  CHECK(bracket(g32.field("C"), g32.field("C"), sp).is_zero());

  GeneratorSet g52{HalfInt(5)};
  // [P3, P4] at ell = 5/2 closes on M with magnitude |I_2| = 12
  VectorField z = bracket(g52.field("P3"), g52.field("P4"), g52.space());
  CHECK(vf_eq(z, vf_scale(g52.field("M"), Rat(-12))));
}

TEST_CASE("Jacobi identity on generator triples") {
  for (int twice : {3, 5, 7, 9}) {
    GeneratorSet gens{HalfInt(twice)};
    const JetSpace& sp = gens.space();
    const auto& names = gens.names();
    size_t checked = 0;
    for (size_t i = 0; i < names.size(); ++i)
      for (size_t j = i + 1; j < names.size(); ++j)
        for (size_t k = j + 1; k < names.size(); ++k) {
          const VectorField &X = gens.field(names[i]), &Y = gens.field(names[j]),
                            &Z = gens.field(names[k]);
          VectorField s = vf_add(bracket(X, bracket(Y, Z, sp), sp),
                                 vf_add(bracket(Y, bracket(Z, X, sp), sp),
                                        bracket(Z, bracket(X, Y, sp), sp)));
          CHECK(s.is_zero());
          ++checked;
        }
    CHECK(checked > 0);
  }
}

TEST_CASE("prolongation is linear") {
  std::mt19937_64 rng(5150);
  JetSpace sp(HalfInt(3));
  std::uniform_int_distribution<long> coef(-5, 5);
  for (int i = 0; i < 300; ++i) {
    VectorField X = random_field(rng, sp), Y = random_field(rng, sp);
    Rat a(coef(rng)), b(coef(rng));
    ProlongedField lhs = prolong2(vf_add(vf_scale(X, a), vf_scale(Y, b)), sp);
    ProlongedField rhs = pf_add(pf_scale(prolong2(X, sp), a), pf_scale(prolong2(Y, sp), b));
    CHECK(pf_eq(lhs, rhs));
  }
}

TEST_CASE("apply is a derivation") {
  std::mt19937_64 rng(424242);
  GeneratorSet gens{HalfInt(3)};
  const JetSpace& sp = gens.space();
  const auto& names = gens.names();
  std::uniform_int_distribution<size_t> pick(0, names.size() - 1);
  std::uniform_int_distribution<int> coord(0, sp.size() - 1);
  std::uniform_int_distribution<int> expd(-1, 2);
  std::uniform_int_distribution<long> coef(-3, 3);
  auto rnd_expr = [&] {
    std::vector<Term> ts;
    for (int k = 0; k < 3; ++k) {
      Monomial m;
      m.set(coord(rng), expd(rng));
      m.set(coord(rng), expd(rng));
      long c = coef(rng);
      if (c != 0) ts.push_back({m, Rat(c)});
    }
    LaurentPoly num = LaurentPoly::collect(std::move(ts));
    LaurentPoly den = poly_add(LaurentPoly::variable(sp.id_u()), LaurentPoly::constant(Rat(1)));
    return RatExpr(std::move(num), std::move(den));
  };
  for (int i = 0; i < 300; ++i) {
    const ProlongedField& F = gens.hat(names[pick(rng)]);
    RatExpr e1 = rnd_expr(), e2 = rnd_expr();
    RatExpr lhs = apply(F, rat_mul(e1, e2), sp);
    RatExpr rhs = rat_add(rat_mul(apply(F, e1, sp), e2), rat_mul(e1, apply(F, e2, sp)));
    CHECK(rat_is_zero(rat_sub(lhs, rhs)));
  }
}

TEST_CASE("restriction equals the zeroth Taylor coefficient") {
  for (int twice : {3, 5}) {
    GeneratorSet gens{HalfInt(twice)};
    const JetSpace& sp = gens.space();
    for (const auto& name : gens.names())
      CHECK(pf_eq(gens.tilde(name), taylor_coefficient_t(gens.hat(name), 0, sp)));
  }
}

TEST_CASE("Taylor structure of hat-P(n)") {
  // hat-P(n) = sum_a binom(n-1, a) t^a tilde-P(n-a), both branches of the family
  for (int twice : {3, 5}) {
    HalfInt ell(twice);
    GeneratorSet gens{ell};
    const JetSpace& sp = gens.space();
    for (int n = 1; n <= twice + 1; ++n) {
      const ProlongedField& F = gens.hat(GeneratorSet::p_name(n));
      for (int a = 0; a <= n + 1; ++a) {
        ProlongedField coeff = taylor_coefficient_t(F, a, sp);
        if (a >= n) {
          CHECK(pf_is_zero(coeff));
          continue;
        }
        ProlongedField expect =
            pf_scale(gens.tilde(GeneratorSet::p_name(n - a)), Rat(binomial(n - 1, a)));
        CHECK(pf_eq(coeff, expect));
      }
    }
  }
}

TEST_CASE("weight_eigenvalue") {
  GeneratorSet gens{HalfInt(3)};
  const JetSpace& sp = gens.space();
  const ProlongedField& D = gens.hat("D");
  CHECK(weight_eigenvalue(RatExpr(Rat(1)), D, sp) == Rat(0));
  RatExpr phi2 = parse_expr("u_22/u - (u_2/u)^2", sp);
  CHECK(weight_eigenvalue(phi2, D, sp) == Rat(-2));
  // not an eigenvector
  RatExpr mixed = parse_expr("u_22/u + u_2/u", sp);
  CHECK_FALSE(weight_eigenvalue(mixed, D, sp).has_value());
}

#pragma once

#include <map>
#include <optional>
#include <utility>

#include "cga/jet.hpp"

namespace cga {

// First-order operator X = sum_mu xi^mu d/dx_mu + eta d/dU. Coefficients are
// polynomial in {x_mu, U} only; absent entries mean zero.
struct VectorField {
  std::map<int, LaurentPoly> xi;  // mu -> coefficient of d/dx_mu
  LaurentPoly eta;

  const LaurentPoly& xi_at(int mu) const;
  bool is_zero() const;
};

VectorField vf_add(const VectorField& a, const VectorField& b);
VectorField vf_scale(const VectorField& a, const Rat& c);
VectorField vf_neg(const VectorField& a);
bool vf_eq(const VectorField& a, const VectorField& b);

// X acting on a function of (x, U) as a first-order derivation.
LaurentPoly vf_apply(const VectorField& X, const LaurentPoly& p, const JetSpace& sp);

// Commutator [X, Y] = XY - YX as a first-order field.
VectorField bracket(const VectorField& X, const VectorField& Y, const JetSpace& sp);

// Second-order operator on jet space: base plus rho^mu d/dU_mu and
// sigma^{mu,nu} d/dU_{mu,nu}. prolong2 is the canonical constructor; linear
// combinations of prolonged fields (used for the reduced C operator) are also
// represented here.
struct ProlongedField {
  VectorField base;
  std::map<int, LaurentPoly> rho;                   // mu
  std::map<std::pair<int, int>, LaurentPoly> sigma;  // mu <= nu

  const LaurentPoly& rho_at(int mu) const;
  const LaurentPoly& sigma_at(int mu, int nu) const;
};

ProlongedField pf_add(const ProlongedField& a, const ProlongedField& b);
ProlongedField pf_scale(const ProlongedField& a, const Rat& c);
ProlongedField pf_scale_poly(const ProlongedField& a, const LaurentPoly& p);
ProlongedField pf_neg(const ProlongedField& a);
bool pf_eq(const ProlongedField& a, const ProlongedField& b);
bool pf_is_zero(const ProlongedField& a);

// Exact second-order prolongation:
//   rho^mu = eta_mu + eta_U U_mu - sum_nu U_nu (xi^nu_mu + xi^nu_U U_mu)
//   sigma^{mu,nu} = eta_{mu,nu} + eta_{mu,U} U_nu + eta_{nu,U} U_mu
//                 + eta_U U_{mu,nu} + eta_{UU} U_mu U_nu
//                 - sum_tau xi^tau_{mu,nu} U_tau
//                 - sum_tau (xi^tau_mu U_{nu,tau} + xi^tau_nu U_{mu,tau})
//                 - sum_tau xi^tau_U (U_tau U_{mu,nu} + U_mu U_{nu,tau} + U_nu U_{mu,tau})
//                 - sum_tau (xi^tau_{mu,U} U_nu + xi^tau_{nu,U} U_mu + xi^tau_{UU} U_mu U_nu) U_tau
ProlongedField prolong2(const VectorField& X, const JetSpace& sp);

// F applied to a polynomial: sum over slots of coeff * d(p)/d(coord).
LaurentPoly apply_poly(const ProlongedField& F, const LaurentPoly& p, const JetSpace& sp);

// F applied to num/den through the quotient rule.
RatExpr apply(const ProlongedField& F, const RatExpr& e, const JetSpace& sp);

// Every coefficient restricted to t = 0.
ProlongedField restrict_t0(const ProlongedField& F, const JetSpace& sp);

// The operator coefficient of t^a in F (coefficients are polynomial in t).
ProlongedField taylor_coefficient_t(const ProlongedField& F, int a, const JetSpace& sp);

// kappa with F(e) = kappa * e identically, if such a rational exists.
std::optional<Rat> weight_eigenvalue(const RatExpr& e, const ProlongedField& F, const JetSpace& sp);

}  // namespace cga

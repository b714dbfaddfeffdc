#include "cga/invariants.hpp"

#include <atomic>
#include <functional>
#include <sstream>
#include <thread>

namespace cga {

PhiSpace::PhiSpace(const HalfInt& ell) : K_(ell.k()) {
  if (size() > kMaxCoords) throw std::domain_error("PhiSpace: too many phi variables");
}

int PhiSpace::id(int k, int m) const {
  if (k > m) std::swap(k, m);
  if (k < 1 || m > K_) throw std::out_of_range("PhiSpace: pair out of range");
  // pairs (1,1)..(1,K),(2,2)..: count of pairs with first index < k
  int before = (k - 1) * K_ - (k - 1) * (k - 2) / 2;
  return before + (m - k);
}

std::pair<int, int> PhiSpace::pair_of(int id) const {
  int k = 1;
  while (id >= K_ - k + 1) {
    id -= K_ - k + 1;
    ++k;
  }
  return {k, k + id};
}

std::string PhiSpace::text(int id) const {
  auto [k, m] = pair_of(id);
  return "phi_" + std::to_string(k) + std::to_string(m);
}

std::string PhiSpace::latex(int id) const {
  auto [k, m] = pair_of(id);
  return "\\phi_{" + std::to_string(k) + std::to_string(m) + "}";
}

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  size_t nw = std::min<size_t>(static_cast<size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (size_t w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

RatExpr phi_pair_expr(const JetSpace& sp, int k, int m) {
  // (U_km U - U_k U_m) / U^2
  LaurentPoly num =
      poly_sub(poly_mul(LaurentPoly::variable(sp.id_u2(k, m)), LaurentPoly::variable(sp.id_u())),
               poly_mul(LaurentPoly::variable(sp.id_u1(k)), LaurentPoly::variable(sp.id_u1(m))));
  return RatExpr(std::move(num), LaurentPoly::variable(sp.id_u(), 2));
}

// in debug builds, towers must not acquire negative powers of anything but U
void check_tower_expr(const RatExpr& e, const JetSpace& sp) {
#ifndef NDEBUG
  for (const LaurentPoly* p : {&e.num(), &e.den()})
    for (const Term& t : p->terms())
      for (int i = 0; i < sp.size(); ++i)
        if (t.m.exp(i) < 0 && i != sp.id_u()) throw std::logic_error("tower: negative exponent");
#else
  (void)e;
  (void)sp;
#endif
}

const LaurentPoly& wkm_phi_build(const TowerGeneral& t, int k, int m,
                                 std::map<std::pair<int, int>, LaurentPoly>& out) {
  auto it = out.find({k, m});
  if (it != out.end()) return it->second;
  const PhiSpace& ps = t.phi_space;
  const int K = ps.K();
  LaurentPoly p = LaurentPoly::variable(ps.id(k, m));
  for (auto [a, b] : t.coeffs.valid_ab(k, m)) {
    const Rat& c = t.coeffs.c(k, m, a, b);
    LaurentPoly nested = wkm_phi_build(t, k + a, m + b, out);
    LaurentPoly tail = LaurentPoly::variable(ps.id(K, K), a + b);
    Rat coef = c / Rat(factorial(a + b));
    p = poly_sub(p, poly_scale(poly_mul(nested, tail), coef));
  }
  int pw = t.weight(k, m);
  Rat gcoef = t.coeffs.gamma(k, m) / Rat(factorial(pw));
  p = poly_sub(p, poly_scale(LaurentPoly::variable(ps.id(K, K), pw), gcoef));
  return out.emplace(std::make_pair(k, m), std::move(p)).first->second;
}

RatExpr eval_phi_poly(const LaurentPoly& p, const TowerGeneral& t) {
  RatExpr sum;
  for (const Term& term : p.terms()) {
    RatExpr prod(term.c);
    for (int id = 0; id < t.phi_space.size(); ++id) {
      int e = term.m.exp(id);
      if (e == 0) continue;
      auto [k, m] = t.phi_space.pair_of(id);
      prod = rat_mul(prod, rat_pow(t.phi_km.at({k, m}), e));
    }
    sum = rat_add(sum, prod);
  }
  return sum;
}

std::string km_name(const char* base, int k, int m) {
  return std::string(base) + "_" + std::to_string(k) + std::to_string(m);
}

}  // namespace

Tower32 build_tower_32() {
  HalfInt ell(3);
  JetSpace sp(ell);
  auto P = [&](const char* s) { return parse_expr(s, sp); };
  auto mulv = [&](int id, const RatExpr& e) { return rat_mul(RatExpr::variable(id), e); };

  Tower32 t{sp, {}, {}, {}, RatExpr(), {}, RatExpr()};

  RatExpr u2_over_u = P("u_2/u");
  int x2 = sp.id_x(2);

  t.phi[0] = P("u_11/u - (u_1/u)^2");
  t.phi[1] = P("u_22/u - (u_2/u)^2");
  t.phi[2] = P("u_12/u - u_1*u_2/u^2");
  t.phi[3] = P("u_0/u + x2*u_1/u - u_22/(2*u)");
  t.phi[4] = rat_add(P("u_01/u - u_0*u_1/u^2"),
                     rat_sub(mulv(x2, t.phi[0]), rat_mul(u2_over_u, t.phi[2])));
  t.phi[5] = rat_add(P("u_02/u + u_1/u - u_0*u_2/u^2"),
                     rat_sub(mulv(x2, t.phi[2]), rat_mul(u2_over_u, t.phi[1])));
  t.phi[6] = rat_add(
      P("u_00/u - (u_0/u)^2 - (u_1/u + 2*u_02/u)*u_2/u + (2*u_0/u + u_22/u)*(u_2/u)^2 - (u_2/u)^4"),
      rat_add(rat_neg(rat_mul(RatExpr::variable(x2), mulv(x2, t.phi[0]))),
              rat_scale(mulv(x2, t.phi[4]), Rat(2))));

  const auto& f = t.phi;
  t.w[0] = rat_add(rat_scale(f[1], Rat(1, 2)), f[3]);
  t.w[1] = rat_sub(rat_scale(f[2], Rat(2)), rat_scale(rat_pow(f[1], 2), Rat(3, 4)));
  t.w[2] = f[5];  // printed: phi_6 / (2 sqrt 2); the prefactor leaves Q and is dropped
  // printed -(3/2)(w_2 phi_2 + phi_2^3/8) fails tC-annihilation; -(3/4) w_2 phi_2
  // - (3/16) phi_2^3 is forced, and reproduces Psi_3/Psi_2^2 exactly
  t.w[3] = rat_sub(f[0], rat_add(rat_scale(rat_mul(t.w[1], f[1]), Rat(3, 4)),
                                 rat_scale(rat_pow(f[1], 3), Rat(3, 16))));
  t.w[4] = rat_sub(f[4], rat_scale(rat_mul(f[1], f[5]), Rat(3, 4)));
  t.w[5] = rat_sub(f[6], rat_scale(rat_mul(t.w[0], f[1]), Rat(1, 2)));

  // normalized so each psi_i equals its Psi/Phi form with factor one
  t.psi[0] = rat_div(t.w[1], rat_pow(t.w[0], 2));
  t.psi[1] = rat_scale(rat_div(rat_pow(t.w[2], 2), rat_pow(t.w[0], 3)), Rat(1, 8));
  t.psi[2] = rat_scale(rat_div(t.w[3], rat_pow(t.w[2], 2)), Rat(8));
  t.psi[3] = rat_scale(rat_div(rat_pow(t.w[4], 2), rat_pow(t.w[0], 5)), Rat(1, 2));
  t.psi[4] = rat_div(t.w[5], t.w[1]);

  t.big_phi = P("2*(u_0 + x2*u_1)*u - u_2^2");
  t.big_psi[0] = P("8*(u_12*u - u_1*u_2)*u^2 - 3*(u_22*u - u_2^2)^2");
  t.big_psi[1] = P("(u_1 + u_02)*u^2 - u_2*((u_0 + u_22)*u - u_2^2) + x2*(u_12*u - u_1*u_2)*u");
  t.big_psi[2] =
      P("8*u_11*u^5 - 8*u_1^2*u^4 - 12*(u_22*u - u_2^2)*(u_12*u - u_1*u_2)*u^2 + 3*(u_22*u - u_2^2)^3");
  t.big_psi4_printed =
      P("4*u_01*u^4 - 4*u_0*u_1*u^3 - 3*((u_1 + u_02)*u - u_0*u_2)*(u_22*u - u_2^2)*u"
        " + 3*u_2*(u_22*u - u_2^2)^2"
        " + x2*(4*u_11*u^3 - 4*u_1^2*u^2 - 3*(u_22*u - u_2^2)*(u_12*u - u_1*u_2))*u");
  // the printed Psi_4 is not annihilated; the 4 U_2 (U_12 U - U_1 U_2) U^2
  // term must be removed for psi_4 = Psi_4^2/Phi^5 to hold
  t.big_psi[3] = rat_sub(t.big_psi4_printed, P("4*u_2*(u_12*u - u_1*u_2)*u^2"));
  t.big_psi[4] =
      P("4*u_00*u^3 - 2*(2*u_0^2 + u_0*u_22 + 2*(u_1 + 2*u_02)*u_2)*u^2"
        " + 5*(2*u_0 + u_22)*u_2^2*u - 5*u_2^4"
        " + 2*x2*(4*u_01*u^2 - (4*u_0*u_1 + 4*u_2*u_12 + u_1*u_22)*u + 5*u_1*u_2^2)*u"
        " + 4*x2^2*(u_11*u - u_1^2)*u^2");

  for (const auto& e : t.phi) check_tower_expr(e, sp);
  for (const auto& e : t.psi) check_tower_expr(e, sp);
  return t;
}

TowerGeneral build_tower_general(const HalfInt& ell) {
  if (ell.twice() < 5)
    throw std::domain_error("build_tower_general: requires ell >= 5/2 (use build_tower_32)");
  JetSpace sp(ell);
  TowerGeneral t{ell, sp, PhiSpace(ell), CoeffTable(ell), {}, RatExpr(), RatExpr(),
                 RatExpr(), RatExpr(), RatExpr(),  RatExpr(),       RatExpr(), {}, {}, {}, {}, {}};
  const int K = ell.k();
  auto var = [&](int id) { return RatExpr::variable(id); };
  auto U = [&]() { return var(sp.id_u()); };

  for (int k = 1; k <= K; ++k)
    for (int m = k; m <= K; ++m) t.phi_km[{k, m}] = phi_pair_expr(sp, k, m);

  t.phi = rat_div(var(sp.id_u1(0)), U());
  for (int j = 1; j <= K - 1; ++j)
    t.phi = rat_add(t.phi, rat_scale(rat_div(rat_mul(var(sp.id_x(j + 1)), var(sp.id_u1(j))), U()),
                                     Rat(j)));
  t.phi_tilde = rat_add(rat_div(var(sp.id_u1(0)), U()),
                        rat_add(rat_div(rat_mul(var(sp.id_x(2)), var(sp.id_u1(1))), U()),
                                rat_scale(rat_div(rat_mul(var(sp.id_x(3)), var(sp.id_u1(2))), U()),
                                          Rat(2))));

  t.phi01 = rat_sub(rat_div(var(sp.id_u2(0, 1)), U()),
                    rat_div(rat_mul(var(sp.id_u1(0)), var(sp.id_u1(1))), rat_pow(U(), 2)));
  t.phi02 = rat_add(rat_sub(rat_div(var(sp.id_u2(0, 2)), U()),
                            rat_div(rat_mul(var(sp.id_u1(0)), var(sp.id_u1(2))), rat_pow(U(), 2))),
                    rat_div(var(sp.id_u1(1)), U()));

  Rat a = a_ell(ell);
  RatExpr uK = var(sp.id_u1(K));
  t.w = rat_sub(t.phi, rat_scale(rat_div(rat_pow(uK, 2), rat_pow(U(), 2)), (Rat(2) * a).inv()));
  t.w01 = rat_sub(t.phi01,
                  rat_scale(rat_div(rat_mul(t.phi_km.at({1, K}), uK), U()), a.inv()));
  t.w02 = rat_sub(t.phi02,
                  rat_scale(rat_div(rat_mul(t.phi_km.at({2, K}), uK), U()), a.inv()));

  for (int n = 2; n <= K; ++n) {
    RatExpr xn = var(sp.id_x(n));
    auto norm = [&](int i, int j) {
      return t.phi_km.at({std::min(i, j), std::max(i, j)});
    };
    t.alpha[n] = rat_add(t.w01, rat_scale(rat_mul(xn, norm(1, n - 1)), Rat(n - 1)));
    t.beta[n] = rat_add(t.w02, rat_scale(rat_mul(xn, norm(2, n - 1)), Rat(n - 1)));
  }

  for (int k = 1; k <= K - 1; ++k)
    for (int m = k; m <= K; ++m) wkm_phi_build(t, k, m, t.wkm_phi);
  for (const auto& [km, p] : t.wkm_phi) t.wkm[km] = eval_phi_poly(p, t);
  for (const auto& [km, e] : t.wkm)
    t.finals[km] = rat_div(e, rat_pow(t.w, t.weight(km.first, km.second)));

  check_tower_expr(t.w, sp);
  for (const auto& [km, e] : t.finals) check_tower_expr(e, sp);
  return t;
}

const LaurentPoly& expand_wkm_in_phi(const TowerGeneral& t, int k, int m) {
  auto it = t.wkm_phi.find({k, m});
  if (it == t.wkm_phi.end()) throw std::out_of_range("expand_wkm_in_phi: no such (k,m)");
  return it->second;
}

ProlongedField build_tilde_C(const GeneratorSet& gens) {
  const JetSpace& sp = gens.space();
  const HalfInt& ell = gens.ell();
  const int K = ell.k();

  LaurentPoly xK2 = LaurentPoly::variable(sp.id_x(K), 2);
  LaurentPoly tpoly = LaurentPoly::variable(sp.id_t());
  LaurentPoly x1 = LaurentPoly::variable(sp.id_x(1));

  ProlongedField c = pf_neg(gens.hat("C"));
  c = pf_add(c, pf_scale_poly(gens.hat("M"), poly_scale(xK2, -(b_ell(ell) / Rat(2)))));
  c = pf_add(c, pf_scale_poly(gens.hat("D"), tpoly));
  c = pf_add(c, pf_scale_poly(gens.tilde("P2"), poly_scale(x1, Rat(ell.twice()))));

  c.base.xi.erase(0);  // d/dt acts trivially on the invariant function space
  if (ell.twice() >= 5) {
    c.sigma.erase({0, 0});
    for (int k = 3; k <= K; ++k) c.sigma.erase({0, k});
  }
  if (ell.twice() == 3) c = pf_scale(c, Rat(1, 3));  // match the printed action table
  return c;
}

namespace {

struct Task {
  std::string name;
  std::function<bool()> run;
};

void run_tasks(VerifyReport& rep, const std::string& summary_name, std::vector<Task>& tasks,
               int threads) {
  std::vector<uint8_t> ok(tasks.size(), 0);
  parallel_for(tasks.size(), threads, [&](size_t i) { ok[i] = tasks[i].run() ? 1 : 0; });
  size_t passed = 0;
  std::string failures;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (ok[i]) {
      ++passed;
    } else {
      if (!failures.empty()) failures += ", ";
      failures += tasks[i].name;
    }
  }
  std::ostringstream detail;
  detail << passed << "/" << tasks.size() << " exact zeros";
  if (failures.empty())
    rep.pass(summary_name, detail.str());
  else
    rep.fail(summary_name, detail.str() + "; nonzero: " + failures);
}

}  // namespace

bool annihilates_ratio(const ProlongedField& F, const RatExpr& num, const RatExpr& den, int p,
                       const JetSpace& sp) {
  RatExpr dn = apply(F, num, sp);
  RatExpr dd = apply(F, den, sp);
  RatExpr residual = rat_sub(rat_mul(dn, den), rat_scale(rat_mul(num, dd), Rat(p)));
  return rat_is_zero(residual);
}

VerifyReport verify_full_annihilation(const GeneratorSet& gens, const Tower32& t, int threads) {
  VerifyReport rep;
  const JetSpace& sp = gens.space();
  std::vector<Task> tasks;
  for (const auto& name : gens.names()) {
    for (int i = 0; i < 5; ++i) {
      const ProlongedField& F = gens.hat(name);
      const RatExpr& e = t.psi[static_cast<size_t>(i)];
      tasks.push_back({"hat(" + name + ") psi_" + std::to_string(i + 1),
                       [&F, &e, &sp] { return rat_is_zero(apply(F, e, sp)); }});
    }
  }
  run_tasks(rep, "full annihilation of psi_1..psi_5 by all " +
                     std::to_string(gens.names().size()) + " prolonged generators",
            tasks, threads);
  return rep;
}

VerifyReport verify_full_annihilation(const GeneratorSet& gens, const TowerGeneral& t, int threads,
                                      AnnihilationMode mode) {
  VerifyReport rep;
  const JetSpace& sp = gens.space();
  if (mode == AnnihilationMode::Auto)
    mode = gens.ell().k() <= 4 ? AnnihilationMode::Direct : AnnihilationMode::Factored;
  std::vector<Task> tasks;
  for (const auto& name : gens.names()) {
    const ProlongedField& F = gens.hat(name);
    for (const auto& [km, final_expr] : t.finals) {
      std::string tn = "hat(" + name + ") " + km_name("w", km.first, km.second) + "/w^" +
                       std::to_string(t.weight(km.first, km.second));
      if (mode == AnnihilationMode::Direct) {
        const RatExpr& e = final_expr;
        tasks.push_back({tn, [&F, &e, &sp] { return rat_is_zero(apply(F, e, sp)); }});
      } else {
        const RatExpr& num = t.wkm.at(km);
        const RatExpr& den = t.w;
        int p = t.weight(km.first, km.second);
        tasks.push_back(
            {tn, [&F, &num, &den, p, &sp] { return annihilates_ratio(F, num, den, p, sp); }});
      }
    }
  }
  std::ostringstream name;
  name << "full annihilation of " << t.finals.size() << " final ratios by all "
       << gens.names().size() << " prolonged generators ("
       << (mode == AnnihilationMode::Direct ? "direct" : "factored") << ")";
  run_tasks(rep, name.str(), tasks, threads);
  return rep;
}

VerifyReport verify_full_annihilation(const HalfInt& ell, int threads) {
  GeneratorSet gens(ell);
  if (ell.twice() == 3) {
    Tower32 t = build_tower_32();
    return verify_full_annihilation(gens, t, threads);
  }
  TowerGeneral t = build_tower_general(ell);
  return verify_full_annihilation(gens, t, threads);
}

VerifyReport verify_intermediate_lemmas(const GeneratorSet& gens, const Tower32& t) {
  VerifyReport rep;
  const JetSpace& sp = gens.space();
  auto annihilated = [&](const ProlongedField& F, const RatExpr& e) {
    return rat_is_zero(apply(F, e, sp));
  };

  {
    size_t zeros = 0, total = 0;
    for (int n = 2; n <= 4; ++n)
      for (int i = 0; i < 7; ++i) {
        ++total;
        if (annihilated(gens.tilde(GeneratorSet::p_name(n)), t.phi[static_cast<size_t>(i)]))
          ++zeros;
      }
    if (zeros == total)
      rep.pass("phi_1..phi_7 annihilated by tilde-P2..tilde-P4",
               std::to_string(zeros) + "/" + std::to_string(total) + " exact zeros");
    else
      rep.fail("phi_1..phi_7 annihilated by tilde-P2..tilde-P4",
               std::to_string(zeros) + "/" + std::to_string(total));
  }

  {
    bool ok = true;
    for (const auto& e : t.phi)
      if (e.num().depends_on(sp.id_t()) || e.num().depends_on(sp.id_x(1))) ok = false;
    bool phi7_u00 = t.phi[6].num().depends_on(sp.id_u2(0, 0));
    bool psi5_u00 = t.psi[4].num().depends_on(sp.id_u2(0, 0));
    if (ok && phi7_u00 && psi5_u00)
      rep.pass("structure: no t or x1 in any phi; U_00 present in phi_7 and psi_5");
    else
      rep.fail("structure: no t or x1 in any phi; U_00 present in phi_7 and psi_5", "");
  }

  {
    ProlongedField tc = build_tilde_C(gens);
    const auto& f = t.phi;
    struct Row {
      int i;
      RatExpr expect;
    };
    std::vector<Row> rows;
    rows.push_back({1, rat_scale(f[2], Rat(2))});
    rows.push_back({2, RatExpr(Rat(4, 3))});
    rows.push_back({3, f[1]});
    rows.push_back({4, RatExpr(Rat(-2, 3))});
    rows.push_back({5, f[5]});
    rows.push_back({6, RatExpr()});
    rows.push_back({7, rat_add(rat_scale(f[1], Rat(1, 3)), rat_scale(f[3], Rat(2, 3)))});
    size_t okc = 0;
    std::string bad;
    for (const auto& r : rows) {
      RatExpr got = apply(tc, f[static_cast<size_t>(r.i - 1)], sp);
      if (rat_eq(got, r.expect))
        ++okc;
      else
        bad += " phi_" + std::to_string(r.i);
    }
    if (okc == rows.size())
      rep.pass("tC action table on phi_1..phi_7", "7/7 exact");
    else
      rep.fail("tC action table on phi_1..phi_7", "mismatch:" + bad);

    size_t wz = 0;
    for (const auto& w : t.w)
      if (annihilated(tc, w)) ++wz;
    if (wz == t.w.size())
      rep.pass("tC annihilates w_1..w_6", "6/6 exact zeros");
    else
      rep.fail("tC annihilates w_1..w_6", std::to_string(wz) + "/6");
  }

  {
    const int expected[6] = {2, 4, 3, 6, 5, 4};
    const ProlongedField& D = gens.hat("D");
    std::optional<Rat> k1 = weight_eigenvalue(t.w[0], D, sp);
    bool ok = k1.has_value() && (k1->abs() == Rat(2));
    int sign = (ok && k1->sign() < 0) ? -1 : +1;
    std::string detail = "sign ";
    detail += (sign < 0 ? "-1" : "+1");
    detail += "; eigenvalues";
    for (int i = 0; i < 6 && ok; ++i) {
      auto k = weight_eigenvalue(t.w[static_cast<size_t>(i)], D, sp);
      if (!k || *k != Rat(sign * expected[i])) ok = false;
      if (k) detail += " " + k->to_string();
    }
    if (ok)
      rep.pass("hat-D scaling weights of w_1..w_6 are (2,4,3,6,5,4) with one global sign", detail);
    else
      rep.fail("hat-D scaling weights of w_1..w_6 are (2,4,3,6,5,4) with one global sign", detail);
  }

  {
    auto frac = [&](const RatExpr& n, const RatExpr& d, int p) {
      return rat_div(n, rat_pow(d, p));
    };
    bool ok1 = rat_eq(t.psi[0], frac(t.big_psi[0], t.big_phi, 2));
    bool ok2 = rat_eq(t.psi[1], frac(rat_pow(t.big_psi[1], 2), t.big_phi, 3));
    bool ok3 = rat_eq(t.psi[2], rat_div(t.big_psi[2], rat_pow(t.big_psi[1], 2)));
    bool ok4 = rat_eq(t.psi[3], frac(rat_pow(t.big_psi[3], 2), t.big_phi, 5));
    bool ok5 = rat_eq(t.psi[4], rat_div(t.big_psi[4], t.big_psi[0]));
    if (ok1 && ok2 && ok3 && ok4 && ok5)
      rep.pass("psi_i equal their Psi/Phi forms",
               "psi_1 = Psi_1/Phi^2, psi_2 = Psi_2^2/Phi^3, psi_3 = Psi_3/Psi_2^2, "
               "psi_4 = Psi_4^2/Phi^5 (corrected Psi_4), psi_5 = Psi_5/Psi_1");
    else
      rep.fail("psi_i equal their Psi/Phi forms", "");
    bool printed4 = rat_eq(t.psi[3], frac(rat_pow(t.big_psi4_printed, 2), t.big_phi, 5));
    if (!printed4)
      rep.warn("printed Psi_4 is not an invariant numerator",
               "psi_4 = Psi_4^2/Phi^5 holds only after removing 4*u_2*(u_12*u - u_1*u_2)*u^2 "
               "from the printed Psi_4");
    else
      rep.fail("printed Psi_4 unexpectedly matches", "the recorded correction would be wrong");
  }

  return rep;
}

VerifyReport verify_intermediate_lemmas(const GeneratorSet& gens, const TowerGeneral& t) {
  VerifyReport rep;
  const JetSpace& sp = gens.space();
  const HalfInt& ell = gens.ell();
  const int K = ell.k();
  const int twice = ell.twice();
  auto annihilated = [&](const ProlongedField& F, const RatExpr& e) {
    return rat_is_zero(apply(F, e, sp));
  };
  auto pnorm = [&](int i, int j) -> const RatExpr& {
    return t.phi_km.at({std::min(i, j), std::max(i, j)});
  };

  {
    size_t zeros = 0, total = 0;
    std::vector<const RatExpr*> items = {&t.phi_tilde, &t.phi01, &t.phi02};
    for (int al = 1; al <= 2; ++al)
      for (int b = 1; b <= K; ++b) items.push_back(&pnorm(al, b));
    for (int n : {twice + 1, twice}) {
      const auto& F = gens.tilde(GeneratorSet::p_name(n));
      for (const auto* e : items) {
        ++total;
        if (annihilated(F, *e)) ++zeros;
      }
    }
    if (zeros == total)
      rep.pass("tilde-P(2l+1), tilde-P(2l) annihilate phi~, phi_0a, phi_1b, phi_2b",
               std::to_string(zeros) + "/" + std::to_string(total) + " exact zeros");
    else
      rep.fail("tilde-P(2l+1), tilde-P(2l) annihilate phi~, phi_0a, phi_1b, phi_2b",
               std::to_string(zeros) + "/" + std::to_string(total));
  }

  if (twice >= 7) {
    size_t zeros = 0, total = 0;
    for (int n = K + 2; n <= twice - 1; ++n) {
      const auto& F = gens.tilde(GeneratorSet::p_name(n));
      ++total;
      if (annihilated(F, t.phi)) ++zeros;
      for (const auto& [km, e] : t.phi_km) {
        ++total;
        if (annihilated(F, e)) ++zeros;
      }
    }
    if (zeros == total)
      rep.pass("tilde-P(l+5/2)..tilde-P(2l-1) annihilate phi and all phi_km",
               std::to_string(zeros) + "/" + std::to_string(total) + " exact zeros");
    else
      rep.fail("tilde-P(l+5/2)..tilde-P(2l-1) annihilate phi and all phi_km",
               std::to_string(zeros) + "/" + std::to_string(total));
  }

  {
    size_t zeros = 0, total = 0;
    const auto& F = gens.tilde(GeneratorSet::p_name(K + 1));
    for (const RatExpr* e : {&t.w, &t.w01, &t.w02}) {
      ++total;
      if (annihilated(F, *e)) ++zeros;
    }
    for (const auto& [km, e] : t.phi_km) {
      ++total;
      if (annihilated(F, e)) ++zeros;
    }
    if (zeros == total)
      rep.pass("tilde-P(l+3/2) annihilates w, w_01, w_02 and all phi_km",
               std::to_string(zeros) + "/" + std::to_string(total) + " exact zeros");
    else
      rep.fail("tilde-P(l+3/2) annihilates w, w_01, w_02 and all phi_km",
               std::to_string(zeros) + "/" + std::to_string(total));
  }

  {
    size_t zeros = 0, total = 0;
    for (int n = 2; n <= K; ++n) {
      const auto& F = gens.tilde(GeneratorSet::p_name(n));
      ++total;
      if (annihilated(F, t.w)) ++zeros;
      for (const auto& [km, e] : t.phi_km) {
        ++total;
        if (annihilated(F, e)) ++zeros;
      }
    }
    if (zeros == total)
      rep.pass("tilde-P2..tilde-P(l+1/2) annihilate w and all phi_km",
               std::to_string(zeros) + "/" + std::to_string(total) + " exact zeros");
    else
      rep.fail("tilde-P2..tilde-P(l+1/2) annihilate w and all phi_km",
               std::to_string(zeros) + "/" + std::to_string(total));
  }

  {
    bool ok = true;
    std::string cross;
    for (int n = 2; n <= K; ++n) {
      const auto& F = gens.tilde(GeneratorSet::p_name(n));
      if (!annihilated(F, t.alpha.at(n)) || !annihilated(F, t.beta.at(n))) ok = false;
      for (int m = 2; m <= K; ++m) {
        if (m == n) continue;
        // cross action: computed and reported, not asserted
        RatExpr r = apply(gens.tilde(GeneratorSet::p_name(m)), t.alpha.at(n), sp);
        RatExpr expect = rat_scale(pnorm(1, m - 1), Rat(-(m - 1)));
        if (!rat_eq(r, expect)) cross += " [unexpected residual for alpha_" + std::to_string(n) + "]";
      }
    }
    RatExpr joint_a = t.w01, joint_b = t.w02;
    for (int n = 2; n <= K; ++n) {
      RatExpr xn = RatExpr::variable(sp.id_x(n));
      joint_a = rat_add(joint_a, rat_scale(rat_mul(xn, pnorm(1, n - 1)), Rat(n - 1)));
      joint_b = rat_add(joint_b, rat_scale(rat_mul(xn, pnorm(2, n - 1)), Rat(n - 1)));
    }
    bool joint_ok = true;
    for (int n = 2; n <= K; ++n) {
      const auto& F = gens.tilde(GeneratorSet::p_name(n));
      if (!annihilated(F, joint_a) || !annihilated(F, joint_b)) joint_ok = false;
    }
    if (ok && joint_ok)
      rep.pass("alpha_n, beta_n annihilated by the matching tilde-P(n); joint sums by all");
    else
      rep.fail("alpha_n, beta_n annihilated by the matching tilde-P(n); joint sums by all", cross);
    rep.warn("per-n alpha_n/beta_n are not joint invariants across indices",
             "tilde-P(m) alpha_n = -(m-1) phi_{1,m-1} for m != n" + cross +
                 "; the summed combinations w_01 + sum_n (n-1) x_n phi_{1,n-1} and its beta "
                 "analogue are annihilated by every tilde-P(n)");
  }

  {
    ProlongedField tc = build_tilde_C(gens);
    size_t okc = 0, total = 0;
    std::string bad;
    for (int k = 1; k <= K; ++k) {
      for (int m = k; m <= K; ++m) {
        ++total;
        RatExpr got = apply(tc, t.phi_km.at({k, m}), sp);
        RatExpr expect;
        if (k == K && m == K) {
          expect = RatExpr(b_ell(ell));
        } else if (m == K) {
          expect = rat_scale(pnorm(k + 1, K), lambda_k(k, ell));
        } else {
          expect = rat_add(rat_scale(pnorm(k + 1, m), lambda_k(k, ell)),
                           rat_scale(pnorm(k, m + 1), lambda_k(m, ell)));
        }
        if (rat_eq(got, expect))
          ++okc;
        else
          bad += " " + km_name("phi", k, m);
      }
    }
    if (okc == total)
      rep.pass("tC phi_km = lambda_k phi_{k+1,m} + lambda_m phi_{k,m+1}; tC phi_KK = b",
               std::to_string(okc) + "/" + std::to_string(total) + " exact");
    else
      rep.fail("tC phi_km = lambda_k phi_{k+1,m} + lambda_m phi_{k,m+1}; tC phi_KK = b",
               "mismatch:" + bad);

    size_t zeros = 0, total2 = 1;
    if (annihilated(tc, t.w)) ++zeros;
    for (const auto& [km, e] : t.wkm) {
      ++total2;
      if (annihilated(tc, e)) ++zeros;
    }
    if (zeros == total2)
      rep.pass("tC annihilates w and every w_km",
               std::to_string(zeros) + "/" + std::to_string(total2) + " exact zeros");
    else
      rep.fail("tC annihilates w and every w_km",
               std::to_string(zeros) + "/" + std::to_string(total2));
  }

  {
    const ProlongedField& D = gens.hat("D");
    auto kw = weight_eigenvalue(t.w, D, sp);
    bool ok = kw.has_value() && kw->abs() == Rat(2);
    int sign = (ok && kw->sign() < 0) ? -1 : +1;
    std::string detail = "sign ";
    detail += (sign < 0 ? "-1" : "+1");
    for (const auto& [km, e] : t.wkm) {
      if (!ok) break;
      auto k = weight_eigenvalue(e, D, sp);
      if (!k || *k != Rat(sign * 2 * t.weight(km.first, km.second))) ok = false;
    }
    if (ok)
      rep.pass("hat-D scaling: w has weight 2, w_km has weight 2(2l+2-k-m), one global sign",
               detail);
    else
      rep.fail("hat-D scaling: w has weight 2, w_km has weight 2(2l+2-k-m), one global sign",
               detail);
  }

  {
    bool no_u00 = true;
    int u00 = sp.id_u2(0, 0);
    for (const auto& [km, e] : t.finals)
      if (e.num().depends_on(u00) || e.den().depends_on(u00)) no_u00 = false;
    size_t expect_count = static_cast<size_t>((twice - 1) * (twice + 5) / 8);
    bool count_ok = t.finals.size() == expect_count;
    if (no_u00 && count_ok)
      rep.pass("finals: count = (1/2)(l-1/2)(l+5/2) = " + std::to_string(expect_count) +
               ", U_00 absent everywhere");
    else
      rep.fail("finals: count/(U_00 absence)",
               "count " + std::to_string(t.finals.size()) + " expected " +
                   std::to_string(expect_count) + (no_u00 ? "" : "; U_00 present"));
  }

  {
    // internal consistency: jet-level recursion equals the phi-space expansion
    std::map<std::pair<int, int>, RatExpr> direct;
    std::function<const RatExpr&(int, int)> build = [&](int k, int m) -> const RatExpr& {
      auto it = direct.find({k, m});
      if (it != direct.end()) return it->second;
      RatExpr e = t.phi_km.at({k, m});
      const RatExpr& phiKK = t.phi_km.at({K, K});
      for (auto [a, b] : t.coeffs.valid_ab(k, m)) {
        Rat coef = t.coeffs.c(k, m, a, b) / Rat(factorial(a + b));
        e = rat_sub(e, rat_scale(rat_mul(build(k + a, m + b), rat_pow(phiKK, a + b)), coef));
      }
      int p = t.weight(k, m);
      e = rat_sub(e, rat_scale(rat_pow(phiKK, p), t.coeffs.gamma(k, m) / Rat(factorial(p))));
      return direct.emplace(std::make_pair(k, m), std::move(e)).first->second;
    };
    bool ok = true;
    for (const auto& [km, e] : t.wkm)
      if (!rat_eq(build(km.first, km.second), e)) ok = false;
    if (ok)
      rep.pass("w_km via nested jet recursion equals the phi-expansion evaluation");
    else
      rep.fail("w_km via nested jet recursion equals the phi-expansion evaluation", "");
  }

  return rep;
}

VerifyReport verify_intermediate_lemmas(const HalfInt& ell) {
  GeneratorSet gens(ell);
  if (ell.twice() == 3) {
    Tower32 t = build_tower_32();
    return verify_intermediate_lemmas(gens, t);
  }
  TowerGeneral t = build_tower_general(ell);
  return verify_intermediate_lemmas(gens, t);
}

VerifyReport known_discrepancy_warnings(const GeneratorSet& gens) {
  VerifyReport rep;
  const HalfInt& ell = gens.ell();
  const JetSpace& sp = gens.space();

  {
    // central sign measured from the realization
    int m = 1, n = ell.twice() + 1;
    VectorField z =
        bracket(gens.field(GeneratorSet::p_name(m)), gens.field(GeneratorSet::p_name(n)), sp);
    Rat c = z.eta.coefficient(Monomial::var(sp.id_u()));
    Rat im = structure_constant_I(m - 1, ell);
    std::string got = "[P^(1),P^(2l+1)] = (" + c.to_string() + ")*M = " +
                      (c == im ? "+" : "-") + "delta I_0 M";
    rep.warn("central commutator sign",
             got + "; the reference table lists [P^(m),P^(n)] = -delta_{m+n,2l+2} I_{m-1} M; the "
                   "realization closes with the opposite sign, recorded globally");
  }

  {
    int k = ell.ell_minus_half();
    Rat lam = lambda_k(k, ell);
    Rat b = b_ell(ell);
    Rat computed = coeff_gamma_recursive(k, k, ell);
    Rat stated = Rat(2) * (Rat(2) * lam / b) * (Rat(2) * lam / b);
    rep.warn("gamma(k,k) vs the printed diagonal coefficient",
             "gamma(" + std::to_string(k) + "," + std::to_string(k) + ") = " +
                 computed.to_string() + " = 2*lambda_k^2/b^2 by the recursion and "
                 "tC-annihilation; the printed closed form 2*(2*lambda_k/b)^2 = " +
                 stated.to_string() + " is not annihilated");
  }

  if (ell.twice() == 3) {
    rep.warn("tC normalization at ell = 3/2",
             "the operator extracted from hat-C = -(b/2)x_2^2 hat-M + t hat-D + 3 x_1 tilde-P2 - "
             "tC acts as 3x the printed action table (e.g. tC phi_2 = 4, not 4/3); the operator "
             "is scaled by 1/3 so the printed table holds; no rescaling is needed for ell >= 5/2");
    rep.warn("w_4 coefficient",
             "the printed w_4 = phi_1 - (3/2)(w_2 phi_2 + phi_2^3/8) is not tC-invariant; "
             "annihilation forces w_4 = phi_1 - (3/4) w_2 phi_2 - (3/16) phi_2^3, which "
             "reproduces Psi_3/Psi_2^2 exactly");
    rep.warn("irrational prefactors of w_3, w_5",
             "w_3 = phi_6/(2 sqrt 2) and w_5 = (phi_5 - (3/4) phi_6 phi_2)/sqrt 2 are kept "
             "rational as w_3 = phi_6, w_5 = phi_5 - (3/4) phi_2 phi_6; psi_2 and psi_4 carry "
             "the compensating factors 1/8 and 1/2, making every Psi/Phi identity exact");
  }

  if (ell.twice() == 5) {
    rep.warn("w_11 sign typos in the printed expansion",
             "tC-annihilation and the path oracle force w_11 = phi_11 - (5/18) phi_12 phi_33 + "
             "(5/324) phi_13 phi_33^2 + (25/1296) phi_22 phi_33^2 - (25/11664) phi_23 phi_33^3 + "
             "(5/104976) phi_33^5; the printed list flips the signs of the phi_22 phi_33^2 and "
             "phi_33^5 terms (magnitudes agree)");
  }

  return rep;
}

}  // namespace cga

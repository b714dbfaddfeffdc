#include "cga/algebra.hpp"

#include <ostream>
#include <stdexcept>

#include "cga/expr_io.hpp"
#include "json.hpp"

namespace cga {

namespace {

int p_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'P') return -1;
  return std::stoi(name.substr(1));
}

VectorField lincomb_field(const LinComb& lc, const GeneratorSet& gens) {
  VectorField r;
  for (const auto& [name, c] : lc) r = vf_add(r, vf_scale(gens.field(name), c));
  return r;
}

std::string lincomb_text(const LinComb& lc) {
  if (lc.empty()) return "0";
  std::string s;
  for (const auto& [name, c] : lc) {
    if (!s.empty()) s += " + ";
    if (c.is_one())
      s += name;
    else
      s += "(" + c.to_string() + ")*" + name;
  }
  return s;
}

}  // namespace

GeneratorSet::GeneratorSet(const HalfInt& ell) : ell_(ell), space_(ell) {
  const int K = ell.k();
  const int twice = ell.twice();
  const int t = space_.id_t();
  const int u = space_.id_u();

  auto X = [&](int k) { return LaurentPoly::variable(space_.id_x(k)); };
  auto T = [&](int e) { return LaurentPoly::variable(t, e); };
  auto U = [&]() { return LaurentPoly::variable(u); };

  VectorField M;
  M.eta = U();

  VectorField H;
  H.xi[0] = LaurentPoly::constant(Rat(1));

  VectorField D;
  D.xi[0] = poly_scale(T(1), Rat(2));
  for (int k = 1; k <= K; ++k) D.xi[k] = poly_scale(X(k), Rat(twice + 2 - 2 * k));

  VectorField C;
  C.xi[0] = T(2);
  for (int k = 1; k <= K; ++k)
    C.xi[k] = poly_scale(poly_mul(T(1), X(k)), Rat(twice + 2 - 2 * k));
  for (int k = 1; k <= K - 1; ++k)
    C.xi[k + 1] = poly_add(C.xi[k + 1], poly_scale(X(k), Rat(twice + 1 - k)));
  C.eta = poly_scale(poly_mul(poly_pow(X(K), 2), U()), -(b_ell(ell) / Rat(2)));

  fields_["M"] = std::move(M);
  fields_["H"] = std::move(H);
  fields_["D"] = std::move(D);
  fields_["C"] = std::move(C);
  names_ = {"M", "H", "D", "C"};

  for (int n = 1; n <= twice + 1; ++n) {
    VectorField P;
    int kmax = std::min(n, K);
    for (int k = 1; k <= kmax; ++k) {
      LaurentPoly c = poly_scale(T(n - k), Rat(binomial(n - 1, k - 1)));
      if (!c.is_zero()) P.xi[k] = std::move(c);
    }
    if (n >= K + 1) {
      LaurentPoly eta;
      for (int k = K + 1; k <= n; ++k) {
        Rat coef = Rat(binomial(n - 1, k - 1)) * structure_constant_I(k - 1, ell);
        eta = poly_add(eta, poly_scale(poly_mul(T(n - k), poly_mul(X(twice + 2 - k), U())), coef));
      }
      P.eta = poly_neg(eta);
    }
    std::string name = p_name(n);
    fields_[name] = std::move(P);
    names_.push_back(name);
  }

  for (const auto& name : names_) hats_[name] = prolong2(fields_[name], space_);
  for (const auto& name : names_) tildes_[name] = restrict_t0(hats_[name], space_);
}

GeneratorSet build_generators(const HalfInt& ell) { return GeneratorSet(ell); }

const VectorField& GeneratorSet::field(const std::string& name) const {
  auto it = fields_.find(name);
  if (it == fields_.end()) throw std::invalid_argument("GeneratorSet: unknown generator " + name);
  return it->second;
}

const ProlongedField& GeneratorSet::hat(const std::string& name) const {
  auto it = hats_.find(name);
  if (it == hats_.end()) throw std::invalid_argument("GeneratorSet: unknown generator " + name);
  return it->second;
}

const ProlongedField& GeneratorSet::tilde(const std::string& name) const {
  auto it = tildes_.find(name);
  if (it == tildes_.end()) throw std::invalid_argument("GeneratorSet: unknown generator " + name);
  return it->second;
}

LinComb expected_bracket(const std::string& g1, const std::string& g2, const HalfInt& ell,
                         int central_sign) {
  const int twice = ell.twice();
  auto valid = [&](const std::string& g) {
    if (g == "M" || g == "H" || g == "D" || g == "C") return true;
    int n = p_index(g);
    return n >= 1 && n <= twice + 1;
  };
  if (!valid(g1) || !valid(g2))
    throw std::invalid_argument("expected_bracket: invalid generator name");

  if (g1 == g2) return {};
  if (g1 == "M" || g2 == "M") return {};  // M is central

  // antisymmetry: compute for the canonical order, then negate
  auto rank = [&](const std::string& g) {
    if (g == "H") return 0;
    if (g == "D") return 1;
    if (g == "C") return 2;
    return 3 + p_index(g);
  };
  if (rank(g1) > rank(g2)) {
    LinComb r = expected_bracket(g2, g1, ell, central_sign);
    for (auto& [n, c] : r) c = -c;
    return r;
  }

  if (g1 == "H" && g2 == "D") return {{"H", Rat(2)}};              // [D,H] = -2H
  if (g1 == "D" && g2 == "C") return {{"C", Rat(2)}};              // [D,C] = 2C
  if (g1 == "H" && g2 == "C") return {{"D", Rat(1)}};              // [H,C] = D

  int n2 = p_index(g2);
  if (g1 == "H") {
    if (n2 >= 2) return {{GeneratorSet::p_name(n2 - 1), Rat(n2 - 1)}};
    return {};
  }
  if (g1 == "D") {
    Rat c(2 * (n2 - 1) - twice);  // 2(n-1-ell)
    if (c.is_zero()) return {};
    return {{GeneratorSet::p_name(n2), c}};
  }
  if (g1 == "C") {
    Rat c(n2 - 1 - twice);  // n-1-2*ell
    if (c.is_zero() || n2 + 1 > twice + 1) return {};
    return {{GeneratorSet::p_name(n2 + 1), c}};
  }

  int m = p_index(g1), n = p_index(g2);
  if (m + n == twice + 2) {
    Rat c = Rat(-central_sign) * structure_constant_I(m - 1, ell);
    return {{"M", c}};
  }
  return {};
}

BracketReport verify_commutation_table(const GeneratorSet& gens) {
  const HalfInt& ell = gens.ell();
  const auto& names = gens.names();
  const JetSpace& sp = gens.space();

  BracketReport rep;
  // infer the central sign from the first nonzero [P,P] pair
  std::optional<int> sign;
  bool consistent = true;
  for (size_t i = 0; i < names.size() && consistent; ++i) {
    for (size_t j = i + 1; j < names.size(); ++j) {
      int m = p_index(names[i]), n = p_index(names[j]);
      if (m < 1 || n < 1 || m + n != ell.twice() + 2) continue;
      VectorField z = bracket(gens.field(names[i]), gens.field(names[j]), sp);
      // z must be c*M: eta = c*U, xi = 0
      Rat c = z.eta.coefficient(Monomial::var(sp.id_u()));
      Rat expect_mag = structure_constant_I(m - 1, ell);
      if (c.is_zero() || (c != expect_mag && c != -expect_mag)) {
        consistent = false;
        break;
      }
      int s = (c == -expect_mag) ? +1 : -1;  // [Pm,Pn] = s*(-I_{m-1})*M
      if (!sign)
        sign = s;
      else if (*sign != s)
        consistent = false;
    }
  }
  rep.central_sign = sign.value_or(+1);
  rep.sign_consistent = consistent && sign.has_value();

  bool all = true;
  for (size_t i = 0; i < names.size(); ++i) {
    for (size_t j = i + 1; j < names.size(); ++j) {
      BracketEntry e;
      e.lhs = names[i];
      e.rhs = names[j];
      int m = p_index(names[i]), n = p_index(names[j]);
      e.central = (m >= 1 && n >= 1 && m + n == ell.twice() + 2);
      e.expected = expected_bracket(names[i], names[j], ell, rep.central_sign);
      VectorField z = bracket(gens.field(names[i]), gens.field(names[j]), sp);
      VectorField diff = vf_add(z, vf_neg(lincomb_field(e.expected, gens)));
      e.match = diff.is_zero();
      if (!e.match) {
        all = false;
        e.mismatch = render_field(diff, sp, Format::Text);
      }
      rep.entries.push_back(std::move(e));
    }
  }
  rep.all_match = all;
  return rep;
}

std::string BracketReport::to_json_string(const HalfInt& ell) const {
  nlohmann::ordered_json j;
  j["schema"] = "cga.bracket_report/1";
  j["ell"] = ell.to_string();
  j["central_sign"] = central_sign;
  j["sign_consistent"] = sign_consistent;
  j["all_match"] = all_match;
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json p;
    p["lhs"] = e.lhs;
    p["rhs"] = e.rhs;
    p["expected"] = lincomb_text(e.expected);
    p["match"] = e.match;
    p["central"] = e.central;
    if (!e.match) p["difference"] = e.mismatch;
    j["pairs"].push_back(std::move(p));
  }
  return j.dump(2);
}

void BracketReport::print(std::ostream& os, const HalfInt& ell, bool verbose) const {
  os << "commutation table, ell = " << ell.to_string() << "\n";
  os << "  central sign: " << (central_sign > 0 ? "+1" : "-1")
     << "  ([P^m,P^n] = " << (central_sign > 0 ? "-" : "+") << "delta_{m+n,2l+2} I_{m-1} M)"
     << (sign_consistent ? ", consistent" : ", INCONSISTENT") << "\n";
  size_t matched = 0;
  for (const auto& e : entries) {
    if (e.match) ++matched;
    if (verbose || !e.match) {
      os << "  [" << e.lhs << "," << e.rhs << "] = " << lincomb_text(e.expected)
         << (e.match ? "  ok" : "  MISMATCH " + e.mismatch) << "\n";
    }
  }
  os << "  " << matched << "/" << entries.size() << " brackets match\n";
}

std::optional<std::vector<Rat>> express_in_basis(const VectorField& Z, const GeneratorSet& gens) {
  const auto& names = gens.names();
  const JetSpace& sp = gens.space();
  const size_t ng = names.size();

  // rows: one equation per (slot, monomial)
  std::map<std::pair<int, Monomial>, size_t, decltype([](const auto& a, const auto& b) {
             if (a.first != b.first) return a.first < b.first;
             return mono_less(a.second, b.second);
           })>
      row_of;
  auto slot_polys = [&](const VectorField& f) {
    std::vector<std::pair<int, const LaurentPoly*>> v;
    for (const auto& [mu, p] : f.xi) v.push_back({mu, &p});
    v.push_back({sp.K() + 1, &f.eta});
    return v;
  };
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  auto row_index = [&](int slot, const Monomial& m) {
    auto key = std::make_pair(slot, m);
    auto it = row_of.find(key);
    if (it != row_of.end()) return it->second;
    size_t idx = A.size();
    row_of.emplace(key, idx);
    A.emplace_back(ng, Rat(0));
    b.emplace_back(0);
    return idx;
  };
  for (size_t gi = 0; gi < ng; ++gi) {
    for (const auto& [slot, p] : slot_polys(gens.field(names[gi]))) {
      for (const Term& t : p->terms()) A[row_index(slot, t.m)][gi] = t.c;
    }
  }
  for (const auto& [slot, p] : slot_polys(Z)) {
    for (const Term& t : p->terms()) b[row_index(slot, t.m)] = t.c;
  }

  // exact Gaussian elimination on the (rows x ng) system
  const size_t rows = A.size();
  std::vector<Rat> sol(ng, Rat(0));
  size_t rank_row = 0;
  std::vector<size_t> pivot_col;
  for (size_t col = 0; col < ng && rank_row < rows; ++col) {
    size_t piv = rank_row;
    while (piv < rows && A[piv][col].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(A[piv], A[rank_row]);
    std::swap(b[piv], b[rank_row]);
    Rat inv = A[rank_row][col].inv();
    for (size_t c = col; c < ng; ++c) A[rank_row][c] *= inv;
    b[rank_row] *= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank_row || A[r][col].is_zero()) continue;
      Rat f = A[r][col];
      for (size_t c = col; c < ng; ++c) A[r][c] -= f * A[rank_row][c];
      b[r] -= f * b[rank_row];
    }
    pivot_col.push_back(col);
    ++rank_row;
  }
  // consistency: zero rows must have zero rhs
  for (size_t r = rank_row; r < rows; ++r) {
    bool zero = true;
    for (size_t c = 0; c < ng; ++c)
      if (!A[r][c].is_zero()) {
        zero = false;
        break;
      }
    if (zero && !b[r].is_zero()) return std::nullopt;
  }
  for (size_t r = 0; r < pivot_col.size(); ++r) sol[pivot_col[r]] = b[r];
  return sol;
}

}  // namespace cga

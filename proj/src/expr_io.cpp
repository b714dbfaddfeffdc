#include "cga/expr_io.hpp"

#include <cctype>
#include <sstream>

#include "json.hpp"

namespace cga {

Format format_from_string(std::string_view s) {
  if (s == "text") return Format::Text;
  if (s == "latex") return Format::Latex;
  if (s == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

namespace {

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Token::Kind::End, "", line, col};
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        num += src_[pos_];
        advance();
      }
      return {Token::Kind::Number, num, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        id += src_[pos_];
        advance();
      }
      return {Token::Kind::Ident, id, line, col};
    }
    advance();
    switch (c) {
      case '+': return {Token::Kind::Plus, "+", line, col};
      case '-': return {Token::Kind::Minus, "-", line, col};
      case '*': return {Token::Kind::Star, "*", line, col};
      case '/': return {Token::Kind::Slash, "/", line, col};
      case '^': return {Token::Kind::Caret, "^", line, col};
      case '(': return {Token::Kind::LParen, "(", line, col};
      case ')': return {Token::Kind::RParen, ")", line, col};
      default: throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

int resolve_var(const std::string& id, const JetSpace& sp, int line, int col) {
  const int K = sp.K();
  auto bad = [&](const std::string& why) -> int {
    throw ParseError(line, col, "unknown variable '" + id + "' (" + why + ")");
  };
  auto digits = [&](const std::string& s) {
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return !s.empty();
  };
  if (id == "t") return sp.id_t();
  if (id == "u") return sp.id_u();
  if (id.size() > 1 && id[0] == 'x' && digits(id.substr(1))) {
    int k = std::stoi(id.substr(1));
    if (k == 0) return sp.id_t();
    if (k > K) return bad("index exceeds K=" + std::to_string(K));
    return sp.id_x(k);
  }
  if (id.size() > 2 && id[0] == 'u' && id[1] == '_' && digits(id.substr(2))) {
    std::string idx = id.substr(2);
    if (idx.size() == 1) {
      int mu = idx[0] - '0';
      if (mu > K) return bad("index exceeds K=" + std::to_string(K));
      return sp.id_u1(mu);
    }
    if (idx.size() == 2) {
      int mu = idx[0] - '0', nu = idx[1] - '0';
      if (std::max(mu, nu) > K) return bad("index exceeds K=" + std::to_string(K));
      return sp.id_u2(mu, nu);  // normalizes u_10 -> u_01
    }
    return bad("too many indices");
  }
  return bad("not a jet variable for this ell");
}

class Parser {
 public:
  Parser(std::string_view src, const JetSpace& sp) : lex_(src), sp_(sp) { bump(); }

  ExprAst parse_all() {
    ExprAst e = expr();
    if (tok_.kind != Token::Kind::End)
      throw ParseError(tok_.line, tok_.col, "unexpected '" + tok_.text + "'");
    return e;
  }

 private:
  void bump() { tok_ = lex_.next(); }

  static ExprAst node(ExprAst::Kind k, ExprAst a, ExprAst b) {
    ExprAst e;
    e.kind = k;
    e.lhs = std::make_unique<ExprAst>(std::move(a));
    e.rhs = std::make_unique<ExprAst>(std::move(b));
    return e;
  }

  ExprAst expr() {
    ExprAst e = term();
    while (tok_.kind == Token::Kind::Plus || tok_.kind == Token::Kind::Minus) {
      auto k = tok_.kind == Token::Kind::Plus ? ExprAst::Kind::Add : ExprAst::Kind::Sub;
      bump();
      e = node(k, std::move(e), term());
    }
    return e;
  }

  ExprAst term() {
    ExprAst e = unary();
    while (tok_.kind == Token::Kind::Star || tok_.kind == Token::Kind::Slash) {
      auto k = tok_.kind == Token::Kind::Star ? ExprAst::Kind::Mul : ExprAst::Kind::Div;
      bump();
      ExprAst r = unary();
      // fold tightest-binding division of integer literals into one rational
      if (k == ExprAst::Kind::Div && e.kind == ExprAst::Kind::Num && r.kind == ExprAst::Kind::Num &&
          !r.value.is_zero()) {
        e.value /= r.value;
        continue;
      }
      e = node(k, std::move(e), std::move(r));
    }
    return e;
  }

  ExprAst unary() {
    if (tok_.kind == Token::Kind::Minus) {
      bump();
      ExprAst e;
      e.kind = ExprAst::Kind::Neg;
      e.lhs = std::make_unique<ExprAst>(unary());
      return e;
    }
    return power();
  }

  ExprAst power() {
    ExprAst base = primary();
    if (tok_.kind != Token::Kind::Caret) return base;
    bump();
    long sign = 1;
    bool paren = tok_.kind == Token::Kind::LParen;
    if (paren) bump();
    if (tok_.kind == Token::Kind::Minus) {
      sign = -1;
      bump();
    }
    if (tok_.kind != Token::Kind::Number)
      throw ParseError(tok_.line, tok_.col, "exponent must be an integer literal");
    long e = std::stol(tok_.text);
    bump();
    if (paren) {
      if (tok_.kind != Token::Kind::RParen)
        throw ParseError(tok_.line, tok_.col, "expected ')' after exponent");
      bump();
    }
    ExprAst p;
    p.kind = ExprAst::Kind::Pow;
    p.exponent = sign * e;
    p.lhs = std::make_unique<ExprAst>(std::move(base));
    return p;
  }

  ExprAst primary() {
    if (tok_.kind == Token::Kind::Number) {
      ExprAst e;
      e.kind = ExprAst::Kind::Num;
      e.value = Rat::from_string(tok_.text);
      bump();
      return e;
    }
    if (tok_.kind == Token::Kind::Ident) {
      ExprAst e;
      e.kind = ExprAst::Kind::Var;
      e.var_id = resolve_var(tok_.text, sp_, tok_.line, tok_.col);
      bump();
      return e;
    }
    if (tok_.kind == Token::Kind::LParen) {
      bump();
      ExprAst e = expr();
      if (tok_.kind != Token::Kind::RParen)
        throw ParseError(tok_.line, tok_.col, "expected ')'");
      bump();
      return e;
    }
    throw ParseError(tok_.line, tok_.col,
                     tok_.kind == Token::Kind::End ? "unexpected end of input"
                                                   : "unexpected '" + tok_.text + "'");
  }

  Lexer lex_;
  const JetSpace& sp_;
  Token tok_;
};

}  // namespace

ExprAst parse(std::string_view src, const JetSpace& sp) { return Parser(src, sp).parse_all(); }

RatExpr lower(const ExprAst& ast, const JetSpace& sp) {
  switch (ast.kind) {
    case ExprAst::Kind::Num:
      return RatExpr(ast.value);
    case ExprAst::Kind::Var:
      return RatExpr::variable(ast.var_id);
    case ExprAst::Kind::Add:
      return rat_add(lower(*ast.lhs, sp), lower(*ast.rhs, sp));
    case ExprAst::Kind::Sub:
      return rat_sub(lower(*ast.lhs, sp), lower(*ast.rhs, sp));
    case ExprAst::Kind::Mul:
      return rat_mul(lower(*ast.lhs, sp), lower(*ast.rhs, sp));
    case ExprAst::Kind::Div:
      return rat_div(lower(*ast.lhs, sp), lower(*ast.rhs, sp));
    case ExprAst::Kind::Neg:
      return rat_neg(lower(*ast.lhs, sp));
    case ExprAst::Kind::Pow:
      return rat_pow(lower(*ast.lhs, sp), ast.exponent);
  }
  throw std::logic_error("lower: bad AST node");
}

RatExpr parse_expr(std::string_view src, const JetSpace& sp) { return lower(parse(src, sp), sp); }

namespace {

struct Factor {
  int id;
  int exp;  // > 0
};

void split_term(const Monomial& m, std::vector<Factor>& pos, std::vector<Factor>& neg) {
  pos.clear();
  neg.clear();
  for (int i = 0; i < kMaxCoords; ++i) {
    int e = m.e[static_cast<size_t>(i)];
    if (e > 0) pos.push_back({i, e});
    if (e < 0) neg.push_back({i, -e});
  }
}

std::string text_factors(const std::vector<Factor>& fs, const VarNamer& namer,
                         const std::string& lead) {
  std::string s = lead;
  for (const auto& f : fs) {
    if (!s.empty()) s += "*";
    s += namer.text(f.id);
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
  }
  return s;
}

std::string text_term(const Term& t, const VarNamer& namer) {
  std::vector<Factor> pos, neg;
  split_term(t.m, pos, neg);
  Rat c = t.c.abs();
  Int p = c.numerator(), q = c.denominator();
  std::string numerator = text_factors(pos, namer, (p == 1 && !pos.empty()) ? "" : p.get_str());
  int den_factors = (q != 1 ? 1 : 0) + static_cast<int>(neg.size());
  if (den_factors == 0) return numerator;
  std::string denominator = text_factors(neg, namer, q != 1 ? q.get_str() : "");
  if (den_factors > 1) denominator = "(" + denominator + ")";
  return numerator + "/" + denominator;
}

std::string latex_factors(const std::vector<Factor>& fs, const VarNamer& namer) {
  std::string s;
  for (const auto& f : fs) {
    if (!s.empty()) s += " ";
    s += namer.latex(f.id);
    if (f.exp != 1) s += "^{" + std::to_string(f.exp) + "}";
  }
  return s;
}

std::string latex_term(const Term& t, const VarNamer& namer) {
  std::vector<Factor> pos, neg;
  split_term(t.m, pos, neg);
  Rat c = t.c.abs();
  Int p = c.numerator(), q = c.denominator();
  bool frac = q != 1 || !neg.empty();
  std::string up = latex_factors(pos, namer);
  if (p != 1 || up.empty()) up = p.get_str() + (up.empty() ? "" : " " + up);
  if (!frac) return up;
  std::string down = latex_factors(neg, namer);
  if (q != 1 || down.empty()) down = q.get_str() + (down.empty() ? "" : " " + down);
  return "\\frac{" + up + "}{" + down + "}";
}

nlohmann::ordered_json poly_json(const LaurentPoly& p, const VarNamer& namer) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Term& t : p.terms()) {
    nlohmann::ordered_json exps;
    for (int i = 0; i < kMaxCoords; ++i) {
      int e = t.m.e[static_cast<size_t>(i)];
      if (e != 0) exps[namer.text(i)] = e;
    }
    arr.push_back({{"coef", t.c.to_string()}, {"exps", std::move(exps)}});
  }
  return arr;
}

std::string render_terms(const LaurentPoly& p, const VarNamer& namer, Format f) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const Term& t : p.terms()) {
    bool negv = t.c.sign() < 0;
    std::string body = f == Format::Latex ? latex_term(t, namer) : text_term(t, namer);
    if (first) {
      s += negv ? "-" + body : body;
      first = false;
    } else {
      s += (negv ? " - " : " + ") + body;
    }
  }
  return s;
}

}  // namespace

std::string render_poly(const LaurentPoly& p, const VarNamer& namer, Format f) {
  if (f == Format::Json) return poly_json(p, namer).dump();
  return render_terms(p, namer, f);
}

std::string render(const RatExpr& e, const JetSpace& sp, Format f) {
  JetNamer namer(sp);
  if (f == Format::Json) {
    nlohmann::ordered_json j;
    j["num"] = poly_json(e.num(), namer);
    j["den"] = poly_json(e.den(), namer);
    return j.dump();
  }
  if (e.den().is_monomial()) {
    // fold the monomial denominator into Laurent terms
    const Term& d = e.den().terms()[0];
    LaurentPoly folded = poly_mul_monomial(e.num(), d.c.inv(), Monomial::one().div(d.m));
    return render_terms(folded, namer, f);
  }
  if (f == Format::Latex)
    return "\\frac{" + render_terms(e.num(), namer, f) + "}{" + render_terms(e.den(), namer, f) + "}";
  return "(" + render_terms(e.num(), namer, f) + ")/(" + render_terms(e.den(), namer, f) + ")";
}

std::string render_field(const VectorField& X, const JetSpace& sp, Format f) {
  JetNamer namer(sp);
  if (f == Format::Json) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json xi;
    for (const auto& [mu, p] : X.xi)
      if (!p.is_zero()) xi[std::to_string(mu)] = poly_json(p, namer);
    j["xi"] = std::move(xi);
    j["eta"] = poly_json(X.eta, namer);
    return j.dump();
  }
  std::ostringstream os;
  bool any = false;
  auto emit = [&](const std::string& slot, const LaurentPoly& p) {
    if (p.is_zero()) return;
    if (any) os << (f == Format::Latex ? " + " : "  +  ");
    std::string body = render_terms(p, namer, f);
    if (p.size() > 1 || p.terms()[0].c.sign() < 0) body = "(" + body + ")";
    os << body << (f == Format::Latex ? " \\partial_{" + slot + "}" : "*d/d[" + slot + "]");
    any = true;
  };
  for (const auto& [mu, p] : X.xi) emit(f == Format::Latex ? namer.latex(sp.id_x(mu)) : namer.text(sp.id_x(mu)), p);
  emit(f == Format::Latex ? "U" : "u", X.eta);
  if (!any) return "0";
  return os.str();
}

std::string render_prolonged(const ProlongedField& F, const JetSpace& sp, Format f) {
  JetNamer namer(sp);
  if (f == Format::Json) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json xi, rho, sigma;
    for (const auto& [mu, p] : F.base.xi)
      if (!p.is_zero()) xi[std::to_string(mu)] = poly_json(p, namer);
    j["xi"] = std::move(xi);
    j["eta"] = poly_json(F.base.eta, namer);
    for (const auto& [mu, p] : F.rho)
      if (!p.is_zero()) rho[std::to_string(mu)] = poly_json(p, namer);
    j["rho"] = std::move(rho);
    for (const auto& [mn, p] : F.sigma)
      if (!p.is_zero())
        sigma[std::to_string(mn.first) + "," + std::to_string(mn.second)] = poly_json(p, namer);
    j["sigma"] = std::move(sigma);
    return j.dump();
  }
  std::ostringstream os;
  os << render_field(F.base, sp, f);
  for (const auto& [mu, p] : F.rho) {
    if (p.is_zero()) continue;
    std::string body = render_terms(p, namer, f);
    if (p.size() > 1 || p.terms()[0].c.sign() < 0) body = "(" + body + ")";
    os << "  +  " << body << "*d/d[" << namer.text(sp.id_u1(mu)) << "]";
  }
  for (const auto& [mn, p] : F.sigma) {
    if (p.is_zero()) continue;
    std::string body = render_terms(p, namer, f);
    if (p.size() > 1 || p.terms()[0].c.sign() < 0) body = "(" + body + ")";
    os << "  +  " << body << "*d/d[" << namer.text(sp.id_u2(mn.first, mn.second)) << "]";
  }
  return os.str();
}

}  // namespace cga

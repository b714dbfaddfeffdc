#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cga/jet.hpp"
#include "cga/prolong.hpp"

namespace cga {

enum class Format { Text, Latex, Json };

Format format_from_string(std::string_view s);

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

// Expression tree: rational literal | variable | add | sub | mul | div |
// negation | integer power.
struct ExprAst {
  enum class Kind { Num, Var, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind = Kind::Num;
  Rat value;              // Num
  int var_id = -1;        // Var
  long exponent = 0;      // Pow
  std::unique_ptr<ExprAst> lhs, rhs;
};

// Grammar: ^  >  unary-  >  * /  >  + -, left-associative, parentheses.
// Variables: t (= x0), x1..xK, u, u_0..u_K, u_00..u_KK (u_MN normalized to
// M <= N). Exponents are integer literals, sign allowed.
ExprAst parse(std::string_view src, const JetSpace& sp);

RatExpr lower(const ExprAst& ast, const JetSpace& sp);

RatExpr parse_expr(std::string_view src, const JetSpace& sp);  // parse + lower

// Variable naming hook so the same renderers serve jet space and the
// phi-variable space used for w_km expansions.
struct VarNamer {
  virtual ~VarNamer() = default;
  virtual std::string text(int id) const = 0;
  virtual std::string latex(int id) const = 0;
};

struct JetNamer final : VarNamer {
  const JetSpace& sp;
  explicit JetNamer(const JetSpace& s) : sp(s) {}
  std::string text(int id) const override { return sp.name(id); }
  std::string latex(int id) const override { return sp.latex_name(id); }
};

std::string render_poly(const LaurentPoly& p, const VarNamer& namer, Format f);
// Deterministic canonical output; parse(render(e, Text)) reproduces e.
std::string render(const RatExpr& e, const JetSpace& sp, Format f);
std::string render_field(const VectorField& X, const JetSpace& sp, Format f);
std::string render_prolonged(const ProlongedField& F, const JetSpace& sp, Format f);

}  // namespace cga

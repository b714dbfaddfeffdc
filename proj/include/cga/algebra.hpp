#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cga/prolong.hpp"
#include "cga/report.hpp"

namespace cga {

// The 2*ell+5 generators M, H, D, C, P^(1)..P^(2*ell+1) realized as vector
// fields on (t, x_1..x_K, U), with second-order prolongations cached.
class GeneratorSet {
 public:
  explicit GeneratorSet(const HalfInt& ell);

  const HalfInt& ell() const { return ell_; }
  const JetSpace& space() const { return space_; }
  const std::vector<std::string>& names() const { return names_; }

  const VectorField& field(const std::string& name) const;
  const ProlongedField& hat(const std::string& name) const;
  // restrict_t0 of the prolongation, cached.
  const ProlongedField& tilde(const std::string& name) const;

  static std::string p_name(int n) { return "P" + std::to_string(n); }

 private:
  HalfInt ell_;
  JetSpace space_;
  std::vector<std::string> names_;
  std::map<std::string, VectorField> fields_;
  std::map<std::string, ProlongedField> hats_;
  std::map<std::string, ProlongedField> tildes_;
};

GeneratorSet build_generators(const HalfInt& ell);

using LinComb = std::vector<std::pair<std::string, Rat>>;

// Right-hand side of the commutator table for [g1, g2]. The sign of the
// central term in [P^(m), P^(n)] is parameterized; the realization fixes it
// empirically (see verify_commutation_table).
LinComb expected_bracket(const std::string& g1, const std::string& g2, const HalfInt& ell,
                         int central_sign = +1);

struct BracketEntry {
  std::string lhs, rhs;
  bool match = false;
  bool central = false;      // a [P,P] pair closing on M
  LinComb expected;
  std::string mismatch;      // rendered difference when match fails
};

struct BracketReport {
  int central_sign = +1;  // s with [P^(m),P^(n)] = s * (-I_{m-1}) delta_{m+n,2l+2} M
  bool all_match = false;
  bool sign_consistent = false;
  std::vector<BracketEntry> entries;

  bool ok() const { return all_match && sign_consistent; }
  std::string to_json_string(const HalfInt& ell) const;
  void print(std::ostream& os, const HalfInt& ell, bool verbose = false) const;
};

// Computes every unordered pair bracket, infers the central sign from the
// first nonzero [P,P] pair, and compares against expected_bracket.
BracketReport verify_commutation_table(const GeneratorSet& gens);

// Exact coordinates of Z in the generator basis, if Z lies in the span.
std::optional<std::vector<Rat>> express_in_basis(const VectorField& Z, const GeneratorSet& gens);

}  // namespace cga

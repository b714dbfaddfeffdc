#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "cga/rat.hpp"

namespace cga {

// Vertex label (k, m) with 1 <= k <= ell-1/2, k <= m <= ell+1/2.
// (ell-1/2, ell+1/2) is the unique leaf label.
struct NodeLabel {
  int k = 0, m = 0;
  friend bool operator==(const NodeLabel& a, const NodeLabel& b) { return a.k == b.k && a.m == b.m; }
};

bool label_valid(const NodeLabel& n, const HalfInt& ell);

// Branching rules:
//   k < m < K          : (k+1, m) weight lambda_k/b and (k, m+1) weight lambda_m/b
//   k = m              : (k, k+1) weight 2*lambda_k/b
//   m = K, k < K-1     : (k+1, K) weight lambda_k/b
//   (K-1, K)           : leaf
// where K = ell+1/2 and b = b_ell.
std::vector<std::pair<NodeLabel, Rat>> children(const NodeLabel& n, const HalfInt& ell);

// Memoized recursion with base case c_00 = 1:
//   c_ab(k,m) = (lambda_k/b) c_{a-1,b}(k+1,m) + (lambda_m/b) c_{a,b-1}(k,m+1)
//   c_ab(k,k) = (2 lambda_k/b) c_{a,b-1}(k,k+1)
// Out-of-range indices contribute zero.
Rat coeff_c_recursive(int k, int m, int a, int b, const HalfInt& ell);

// gamma(K-1, K) = lambda_{K-1}/b; gamma(k,m) follows the same branching.
Rat coeff_gamma_recursive(int k, int m, const HalfInt& ell);

// Oracle: sum of edge-weight products over all root-to-vertex paths from
// (k,m) to vertices labeled (k+a, m+b). Exponential; small ell only.
Rat coeff_c_paths(int k, int m, int a, int b, const HalfInt& ell);

// Height of the rooted tree at (k,m): 2*ell - k - m.
int tree_height(const NodeLabel& n, const HalfInt& ell);

// Closed form for the chain labels (k, K):
//   c_{n0}(k,K) = binom(2l+1-k, n) n! / b^n
//   gamma(k,K)  = binom(2l+1-k, K) (K-k)! / b^{K-k}
struct CorollaryForm {
  std::vector<Rat> chain;  // chain[n-1] = coefficient of w_{k+n,K}, n = 1..K-1-k
  Rat trailing;            // gamma(k, K)
};
CorollaryForm corollary_closed_form(int k, const HalfInt& ell);

// Full table of c_ab(k,m) and gamma(k,m) for one ell, built once via the
// recursion and immutable afterwards.
class CoeffTable {
 public:
  explicit CoeffTable(const HalfInt& ell);

  const HalfInt& ell() const { return ell_; }
  // Valid (a,b) for (k,m): 1 <= a+b, a <= ell-1/2-k, b <= ell+1/2-m, k+a <= m+b.
  std::vector<std::pair<int, int>> valid_ab(int k, int m) const;
  const Rat& c(int k, int m, int a, int b) const;
  const Rat& gamma(int k, int m) const;
  const std::map<std::tuple<int, int, int, int>, Rat>& c_entries() const { return c_; }
  const std::map<std::pair<int, int>, Rat>& gamma_entries() const { return gamma_; }

  std::string to_json_string() const;

 private:
  HalfInt ell_;
  std::map<std::tuple<int, int, int, int>, Rat> c_;
  std::map<std::pair<int, int>, Rat> gamma_;
};

}  // namespace cga

#include "cga/treecoef.hpp"

#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace cga {

bool label_valid(const NodeLabel& n, const HalfInt& ell) {
  return n.k >= 1 && n.k <= ell.ell_minus_half() && n.m >= n.k && n.m <= ell.k();
}

std::vector<std::pair<NodeLabel, Rat>> children(const NodeLabel& n, const HalfInt& ell) {
  if (!label_valid(n, ell)) throw std::domain_error("children: invalid node label");
  const int K = ell.k();
  const Rat b = b_ell(ell);
  std::vector<std::pair<NodeLabel, Rat>> out;
  if (n.k == ell.ell_minus_half() && n.m == K) return out;  // leaf
  if (n.k == n.m) {
    out.push_back({{n.k, n.k + 1}, Rat(2) * lambda_k(n.k, ell) / b});
  } else if (n.m == K) {
    out.push_back({{n.k + 1, K}, lambda_k(n.k, ell) / b});
  } else {
    out.push_back({{n.k + 1, n.m}, lambda_k(n.k, ell) / b});
    out.push_back({{n.k, n.m + 1}, lambda_k(n.m, ell) / b});
  }
  return out;
}

namespace {

struct Memo {
  std::map<std::tuple<int, int, int, int>, Rat> c;
  std::map<std::pair<int, int>, Rat> gamma;
};

Rat c_rec(int k, int m, int a, int b, const HalfInt& ell, Memo& memo) {
  if (a < 0 || b < 0) return Rat(0);
  if (!label_valid({k, m}, ell)) return Rat(0);
  if (a > ell.ell_minus_half() - k || b > ell.k() - m) return Rat(0);
  if (k + a > m + b) return Rat(0);
  if (a == 0 && b == 0) return Rat(1);
  auto key = std::make_tuple(k, m, a, b);
  auto it = memo.c.find(key);
  if (it != memo.c.end()) return it->second;
  const Rat b_l = b_ell(ell);
  Rat v;
  if (k == m) {
    v = (Rat(2) * lambda_k(k, ell) / b_l) * c_rec(k, k + 1, a, b - 1, ell, memo);
  } else {
    v = (lambda_k(k, ell) / b_l) * c_rec(k + 1, m, a - 1, b, ell, memo);
    if (m < ell.k()) v += (lambda_k(m, ell) / b_l) * c_rec(k, m + 1, a, b - 1, ell, memo);
  }
  memo.c.emplace(key, v);
  return v;
}

Rat gamma_rec(int k, int m, const HalfInt& ell, Memo& memo) {
  if (!label_valid({k, m}, ell)) return Rat(0);
  const Rat b_l = b_ell(ell);
  if (k == ell.ell_minus_half() && m == ell.k()) return lambda_k(ell.ell_minus_half(), ell) / b_l;
  auto key = std::make_pair(k, m);
  auto it = memo.gamma.find(key);
  if (it != memo.gamma.end()) return it->second;
  Rat v;
  if (k == m) {
    v = (Rat(2) * lambda_k(k, ell) / b_l) * gamma_rec(k, k + 1, ell, memo);
  } else {
    v = (lambda_k(k, ell) / b_l) * gamma_rec(k + 1, m, ell, memo);
    if (m < ell.k()) v += (lambda_k(m, ell) / b_l) * gamma_rec(k, m + 1, ell, memo);
  }
  memo.gamma.emplace(key, v);
  return v;
}

}  // namespace

Rat coeff_c_recursive(int k, int m, int a, int b, const HalfInt& ell) {
  if (!label_valid({k, m}, ell)) throw std::domain_error("coeff_c_recursive: invalid (k,m)");
  Memo memo;
  return c_rec(k, m, a, b, ell, memo);
}

Rat coeff_gamma_recursive(int k, int m, const HalfInt& ell) {
  if (!label_valid({k, m}, ell)) throw std::domain_error("coeff_gamma_recursive: invalid (k,m)");
  Memo memo;
  return gamma_rec(k, m, ell, memo);
}

Rat coeff_c_paths(int k, int m, int a, int b, const HalfInt& ell) {
  if (!label_valid({k, m}, ell)) throw std::domain_error("coeff_c_paths: invalid (k,m)");
  NodeLabel target{k + a, m + b};
  Rat total(0);
  // walk the whole tree, adding the path product at every vertex with the
  // target label (the path that stops there)
  std::function<void(const NodeLabel&, const Rat&)> dfs = [&](const NodeLabel& n, const Rat& prod) {
    if (n == target) total += prod;
    for (const auto& [child, w] : children(n, ell)) dfs(child, prod * w);
  };
  dfs({k, m}, Rat(1));
  return total;
}

int tree_height(const NodeLabel& n, const HalfInt& ell) {
  if (!label_valid(n, ell)) throw std::domain_error("tree_height: invalid node label");
  int h = 0;
  std::function<void(const NodeLabel&, int)> dfs = [&](const NodeLabel& v, int d) {
    h = std::max(h, d);
    for (const auto& [child, w] : children(v, ell)) dfs(child, d + 1);
  };
  dfs(n, 0);
  return h;
}

CorollaryForm corollary_closed_form(int k, const HalfInt& ell) {
  const int K = ell.k();
  if (k < 1 || k > ell.ell_minus_half())
    throw std::domain_error("corollary_closed_form: k out of range");
  const Rat b = b_ell(ell);
  CorollaryForm out;
  for (int n = 1; n <= ell.ell_minus_half() - k; ++n) {
    Rat c = Rat(Int(binomial(ell.two_ell() + 1 - k, n) * factorial(n))) * b.pow(-n);
    out.chain.push_back(c);
  }
  out.trailing = Rat(Int(binomial(ell.two_ell() + 1 - k, K) * factorial(K - k))) * b.pow(-(K - k));
  return out;
}

CoeffTable::CoeffTable(const HalfInt& ell) : ell_(ell) {
  Memo memo;
  const int Km1 = ell.ell_minus_half();
  for (int k = 1; k <= Km1; ++k) {
    for (int m = k; m <= ell.k(); ++m) {
      gamma_[{k, m}] = gamma_rec(k, m, ell, memo);
      for (auto [a, b] : valid_ab(k, m)) c_[{k, m, a, b}] = c_rec(k, m, a, b, ell, memo);
    }
  }
}

std::vector<std::pair<int, int>> CoeffTable::valid_ab(int k, int m) const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a <= ell_.ell_minus_half() - k; ++a)
    for (int b = 0; b <= ell_.k() - m; ++b)
      if (a + b >= 1 && k + a <= m + b) out.push_back({a, b});
  return out;
}

const Rat& CoeffTable::c(int k, int m, int a, int b) const {
  auto it = c_.find({k, m, a, b});
  if (it == c_.end()) throw std::out_of_range("CoeffTable::c: no such entry");
  return it->second;
}

const Rat& CoeffTable::gamma(int k, int m) const {
  auto it = gamma_.find({k, m});
  if (it == gamma_.end()) throw std::out_of_range("CoeffTable::gamma: no such entry");
  return it->second;
}

std::string CoeffTable::to_json_string() const {
  nlohmann::ordered_json j;
  j["schema"] = "cga.coeff_table/1";
  j["ell"] = ell_.to_string();
  j["b"] = b_ell(ell_).to_string();
  j["c"] = nlohmann::ordered_json::array();
  for (const auto& [key, v] : c_) {
    auto [k, m, a, b] = key;
    j["c"].push_back({{"k", k}, {"m", m}, {"a", a}, {"b", b}, {"value", v.to_string()}});
  }
  j["gamma"] = nlohmann::ordered_json::array();
  for (const auto& [km, v] : gamma_)
    j["gamma"].push_back({{"k", km.first}, {"m", km.second}, {"value", v.to_string()}});
  return j.dump(2);
}

}  // namespace cga

#pragma once

#include <map>
#include <numeric>
#include <vector>

#include "flatcount/combinatorics.hpp"
#include "flatcount/rational.hpp"

namespace flatcount {

// Multivariate formal power series in m variables truncated at a total
// degree D. Exponent vectors are stored sparsely in lexicographic order;
// absent means zero.
class TruncatedSeries {
 public:
  TruncatedSeries(int vars, int max_total_degree)
      : m_(vars), D_(max_total_degree) {
    if (vars < 0 || max_total_degree < 0)
      throw InputError("TruncatedSeries: bad shape");
  }

  static TruncatedSeries constant(int vars, int D, const Rational& c) {
    TruncatedSeries s(vars, D);
    if (c != 0) s.coef_[std::vector<int>(vars, 0)] = c;
    return s;
  }
  // the variable s_i
  static TruncatedSeries variable(int vars, int D, int i) {
    TruncatedSeries s(vars, D);
    if (D >= 1) {
      std::vector<int> e(vars, 0);
      e[i] = 1;
      s.coef_[e] = 1;
    }
    return s;
  }

  int vars() const { return m_; }
  int max_degree() const { return D_; }
  const std::map<std::vector<int>, Rational>& coefficients() const {
    return coef_;
  }
  bool is_zero() const { return coef_.empty(); }

  Rational coeff(const std::vector<int>& k) const {
    auto it = coef_.find(k);
    return it == coef_.end() ? Rational(0) : it->second;
  }
  void set_coeff(const std::vector<int>& k, const Rational& c) {
    if (static_cast<int>(k.size()) != m_)
      throw InputError("exponent vector arity mismatch");
    if (std::accumulate(k.begin(), k.end(), 0) > D_) return;
    if (c == 0)
      coef_.erase(k);
    else
      coef_[k] = c;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.m_ == b.m_ && a.coef_ == b.coef_;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    TruncatedSeries r = a;
    for (auto& [k, c] : b.coef_) {
      auto it = r.coef_.find(k);
      if (it == r.coef_.end()) {
        r.coef_[k] = c;
      } else {
        it->second += c;
        if (it->second == 0) r.coef_.erase(it);
      }
    }
    return r;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    return a + (-b);
  }
  TruncatedSeries operator-() const {
    TruncatedSeries r(m_, D_);
    for (auto& [k, c] : coef_) r.coef_[k] = -c;
    return r;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    TruncatedSeries r(a.m_, a.D_);
    for (auto& [ka, ca] : a.coef_)
      for (auto& [kb, cb] : b.coef_) {
        std::vector<int> k(a.m_);
        int total = 0;
        for (int i = 0; i < a.m_; ++i) total += (k[i] = ka[i] + kb[i]);
        if (total > a.D_) continue;
        auto it = r.coef_.find(k);
        if (it == r.coef_.end()) {
          r.coef_[k] = ca * cb;
        } else {
          it->second += ca * cb;
          if (it->second == 0) r.coef_.erase(it);
        }
      }
    return r;
  }
  friend TruncatedSeries operator*(const Rational& c,
                                   const TruncatedSeries& a) {
    TruncatedSeries r(a.m_, a.D_);
    if (c == 0) return r;
    for (auto& [k, v] : a.coef_) r.coef_[k] = c * v;
    return r;
  }

  TruncatedSeries pow(int e) const {
    TruncatedSeries r = constant(m_, D_, 1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

 private:
  int m_, D_;
  std::map<std::vector<int>, Rational> coef_;
};

// All exponent vectors of arity m with total degree <= D, lex order.
inline std::vector<std::vector<int>> exponent_vectors(int m, int D) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m, 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == m) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= rem; ++e) {
      cur[pos] = e;
      self(self, pos + 1, rem - e);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, D);
  return out;
}

}  // namespace flatcount

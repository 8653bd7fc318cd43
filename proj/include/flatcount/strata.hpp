#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "flatcount/combinatorics.hpp"
#include "flatcount/pi_value.hpp"

namespace flatcount {

// Genus-0 stratum Q(d_1,...,d_k): multiset of singularity orders
// d_i in {-1, 0, 1, 2, ...} with sum -4. Order -1 is a simple pole,
// order 0 a marked point. Singularities are named (labeled) throughout;
// the stored order list is kept sorted descending as the canonical
// multiset representative.
class StratumSignature {
 public:
  StratumSignature() = default;
  explicit StratumSignature(std::vector<int> orders) : orders_(std::move(orders)) {
    std::sort(orders_.begin(), orders_.end(), std::greater<int>());
    validate();
  }

  const std::vector<int>& orders() const { return orders_; }
  int size() const { return static_cast<int>(orders_.size()); }

  int dimension() const { return size() - 2; }  // complex dimension

  int poles() const {
    return static_cast<int>(std::count(orders_.begin(), orders_.end(), -1));
  }
  int marked_points() const {
    return static_cast<int>(std::count(orders_.begin(), orders_.end(), 0));
  }
  // Orders of genuine zeros (order >= 1).
  std::vector<int> zeros() const {
    std::vector<int> z;
    for (int d : orders_)
      if (d >= 1) z.push_back(d);
    return z;
  }

  bool is_pillowcase() const { return orders_ == std::vector<int>{-1, -1, -1, -1}; }

  friend bool operator==(const StratumSignature& a, const StratumSignature& b) {
    return a.orders_ == b.orders_;
  }
  friend bool operator!=(const StratumSignature& a, const StratumSignature& b) {
    return !(a == b);
  }
  // Lexicographic on the sorted-descending order lists.
  friend bool operator<(const StratumSignature& a, const StratumSignature& b) {
    return a.orders_ < b.orders_;
  }

  // "Q(2,1,-1^7)": descending orders, caret for multiplicity.
  std::string str() const {
    std::string out = "Q(";
    for (size_t i = 0; i < orders_.size();) {
      size_t j = i;
      while (j < orders_.size() && orders_[j] == orders_[i]) ++j;
      if (i) out += ",";
      out += std::to_string(orders_[i]);
      if (j - i > 1) out += "^" + std::to_string(j - i);
      i = j;
    }
    return out + ")";
  }

 private:
  void validate() const {
    long sum = 0;
    for (int d : orders_) {
      if (d < -1) throw InputError("signature order below -1");
      sum += d;
    }
    if (sum != -4)
      throw InputError("signature sum is " + std::to_string(sum) +
                       ", expected -4");
  }

  std::vector<int> orders_;
};

// Whitespace-free text form "Q(2,1,-1^7)".
inline StratumSignature parse_signature(const std::string& s) {
  if (s.size() < 4 || s.substr(0, 2) != "Q(" || s.back() != ')')
    throw InputError("signature must look like Q(d1,d2,...): got '" + s + "'");
  std::vector<int> orders;
  std::string body = s.substr(2, s.size() - 3);
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t comma = body.find(',', pos);
    std::string entry =
        body.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (entry.empty()) throw InputError("empty entry in signature '" + s + "'");
    size_t caret = entry.find('^');
    try {
      int d = std::stoi(entry.substr(0, caret));
      long mult = 1;
      if (caret != std::string::npos) mult = std::stol(entry.substr(caret + 1));
      if (mult < 1) throw InputError("multiplicity must be >= 1 in '" + s + "'");
      for (long i = 0; i < mult; ++i) orders.push_back(d);
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const InputError*>(&e)) throw;
      throw InputError("bad entry '" + entry + "' in signature '" + s + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return StratumSignature(orders);
}

// v(n) = (n!! / (n+1)!!) * pi^n * (pi if n odd else 2).
inline PiValue v_factor(int n) {
  if (n < -1) throw InputError("v(n) defined only for n >= -1");
  Rational r(double_factorial(n), double_factorial(n + 1));
  if (n % 2 != 0) return PiValue::pi_power(n + 1, r);
  return PiValue::pi_power(n, 2 * r);
}

// Vol Q_1(d_1,...,d_k) = 2 pi^2 * prod v(d_i), named singularities.
inline PiValue volume(const StratumSignature& sig) {
  PiValue vol = PiValue::pi_power(2, 2);
  for (int d : sig.orders()) vol *= v_factor(d);
  return vol;
}

// Volumes above treat singularities as labeled; dividing by the product of
// multiplicity factorials converts to anonymous (unlabeled) singularities.
inline PiValue anonymous_volume(const StratumSignature& sig) {
  std::map<int, long> mult;
  for (int d : sig.orders()) ++mult[d];
  Rational f = 1;
  for (auto& [d, m] : mult) f /= Rational(factorial(m));
  return volume(sig) * PiValue(f);
}

// A stratum of disconnected two-component surfaces; the partition of the
// singularity set into components is part of the data.
struct DisconnectedSignature {
  StratumSignature part_a, part_b;
};

// Vol = 1/2 * (dim_a - 1)!(dim_b - 1)! / (dim_a + dim_b - 1)! * Vol_a * Vol_b.
inline PiValue disconnected_volume(const DisconnectedSignature& d) {
  int na = d.part_a.dimension(), nb = d.part_b.dimension();
  Rational f(factorial(na - 1) * factorial(nb - 1), 2 * factorial(na + nb - 1));
  return PiValue(f) * volume(d.part_a) * volume(d.part_b);
}

// All signatures with <= max_k entries (entries in {-1,1,2,...}, plus 0 when
// allow_marked), deterministically ordered.
inline std::vector<StratumSignature> enumerate_signatures(int max_k,
                                                          bool allow_marked) {
  if (max_k < 4) throw InputError("enumerate_signatures: max_k must be >= 4");
  std::vector<StratumSignature> out;
  // p poles contribute -p; zeros (>=1) must sum to p - 4; marked points pad.
  std::vector<int> zeros;
  auto emit = [&](int p, int marks) {
    std::vector<int> orders(zeros.rbegin(), zeros.rend());
    orders.insert(orders.end(), marks, 0);
    orders.insert(orders.end(), p, -1);
    out.push_back(StratumSignature(orders));
  };
  auto rec = [&](auto&& self, int p, int rem, int maxpart, int slots) -> void {
    if (rem == 0) {
      for (int marks = 0; marks <= (allow_marked ? slots : 0); ++marks)
        emit(p, marks);
      return;
    }
    if (slots == 0) return;
    for (int z = std::min(rem, maxpart); z >= 1; --z) {
      zeros.push_back(z);
      self(self, p, rem - z, z, slots - 1);
      zeros.pop_back();
    }
  };
  for (int p = 4; p <= max_k; ++p) rec(rec, p, p - 4, p - 4 > 0 ? p - 4 : 1, max_k - p);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flatcount

#pragma once

// Graded dimension tables: bigraded (homological, quantum), delta-collapsed,
// and Laurent polynomials used for graded Euler characteristics.

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace khmut {

/// Homological shift [h] and quantum shift {q}.
struct ShiftSpec {
  int homological = 0;
  int quantum = 0;

  friend ShiftSpec operator+(ShiftSpec a, ShiftSpec b) {
    return {a.homological + b.homological, a.quantum + b.quantum};
  }
  ShiftSpec inverse() const { return {-homological, -quantum}; }
  friend bool operator==(const ShiftSpec&, const ShiftSpec&) = default;
};

/// Finite map (i, j) -> dimension; absent keys are zero. The second grading is
/// the quantum grading for Khovanov tables and the Alexander grading for
/// knot Floer tables (where the first grading is Maslov).
class BigradedDims {
 public:
  using Key = std::pair<int, int>;

  BigradedDims() = default;
  BigradedDims(std::initializer_list<std::pair<const Key, std::int64_t>> init) {
    for (const auto& [k, v] : init) add(k.first, k.second, v);
  }

  void add(int i, int j, std::int64_t d) {
    if (d == 0) return;
    auto& slot = cells_[{i, j}];
    slot += d;
    if (slot < 0) throw std::logic_error("BigradedDims: negative dimension");
    if (slot == 0) cells_.erase({i, j});
  }
  std::int64_t at(int i, int j) const {
    auto it = cells_.find({i, j});
    return it == cells_.end() ? 0 : it->second;
  }
  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& [k, v] : cells_) t += v;
    return t;
  }
  bool empty() const { return cells_.empty(); }
  const std::map<Key, std::int64_t>& cells() const { return cells_; }

  BigradedDims shifted(ShiftSpec s) const {
    BigradedDims out;
    for (const auto& [k, v] : cells_) out.add(k.first + s.homological, k.second + s.quantum, v);
    return out;
  }
  BigradedDims shifted(int di, int dj) const { return shifted(ShiftSpec{di, dj}); }

  /// Cells with first grading equal to i.
  BigradedDims row(int i) const {
    BigradedDims out;
    for (const auto& [k, v] : cells_)
      if (k.first == i) out.add(k.first, k.second, v);
    return out;
  }

  friend bool operator==(const BigradedDims&, const BigradedDims&) = default;

  friend BigradedDims operator+(BigradedDims a, const BigradedDims& b) {
    for (const auto& [k, v] : b.cells_) a.add(k.first, k.second, v);
    return a;
  }

 private:
  std::map<Key, std::int64_t> cells_;
};

/// Finite map delta -> dimension.
using DeltaGradedDims = std::map<int, std::int64_t>;

/// Laurent polynomial with integer coefficients, keyed by exponent.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(std::initializer_list<std::pair<const int, std::int64_t>> init) {
    for (const auto& [e, c] : init) add(e, c);
  }
  void add(int e, std::int64_t c) {
    if (c == 0) return;
    auto& slot = terms_[e];
    slot += c;
    if (slot == 0) terms_.erase(e);
  }
  std::int64_t coeff(int e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
  }
  bool is_zero() const { return terms_.empty(); }
  int min_exp() const { return terms_.begin()->first; }
  int max_exp() const { return terms_.rbegin()->first; }
  const std::map<int, std::int64_t>& terms() const { return terms_; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add(ea + eb, ca * cb);
    return out;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    for (const auto& [e, c] : b.terms_) a.add(e, c);
    return a;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
    for (const auto& [e, c] : b.terms_) a.add(e, -c);
    return a;
  }
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Exact division; throws if the divisor does not divide this polynomial
  /// over the integers.
  LaurentPoly divided_by(const LaurentPoly& d) const {
    if (d.is_zero()) throw std::domain_error("LaurentPoly: division by zero");
    LaurentPoly rem = *this, quo;
    const int lead_e = d.max_exp();
    const std::int64_t lead_c = d.coeff(lead_e);
    while (!rem.is_zero()) {
      if (rem.max_exp() - rem.min_exp() < d.max_exp() - d.min_exp())
        throw std::domain_error("LaurentPoly: non-exact division");
      int e = rem.max_exp();
      std::int64_t c = rem.coeff(e);
      if (c % lead_c != 0) throw std::domain_error("LaurentPoly: non-integral division");
      LaurentPoly term{{e - lead_e, c / lead_c}};
      quo = quo + term;
      rem = rem - term * d;
    }
    return quo;
  }

  std::string str(const std::string& var = "q") const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      first = false;
      std::int64_t m = c < 0 ? -c : c;
      if (m != 1 || e == 0) os << m;
      if (e != 0) {
        os << var;
        if (e != 1) os << "^" << e;
      }
    }
    return os.str();
  }

 private:
  std::map<int, std::int64_t> terms_;
};

}  // namespace khmut

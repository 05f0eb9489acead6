#pragma once

// Dimension-level checks of the unoriented skein long exact sequence
//   ... -> Kh^{i-1}(D1){1} -> Kh^i(D) -> Kh^i(D0) -> Kh^i(D1){1} -> ...
// (unnormalized homology, maps preserve q), the closed forms for the twist
// families, and the inductive step that propagates them.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "khmut/diagram.hpp"
#include "khmut/graded.hpp"
#include "khmut/khovanov.hpp"

namespace khmut {

struct CrossingCounts {
  int n_plus = 0;
  int n_minus = 0;
  friend bool operator==(const CrossingCounts&, const CrossingCounts&) = default;
};

/// Dims of the three members of a skein triple, unnormalized, with the
/// crossing counts that fix their normalization shifts.
struct LESInstance {
  CrossingCounts counts_d, counts_d0, counts_d1;
  BigradedDims d, d0, d1;

  ShiftSpec shift_d() const { return {-counts_d.n_minus, counts_d.n_plus - 2 * counts_d.n_minus}; }
  ShiftSpec shift_d0() const { return {-counts_d0.n_minus, counts_d0.n_plus - 2 * counts_d0.n_minus}; }
  ShiftSpec shift_d1() const { return {-counts_d1.n_minus, counts_d1.n_plus - 2 * counts_d1.n_minus}; }
};

template <ExactField F>
LESInstance make_les_instance(const SkeinTriple& t, const KhOptions& opt = {}) {
  LESInstance in;
  in.counts_d = {t.d.n_plus(), t.d.n_minus()};
  in.counts_d0 = {t.d0.n_plus(), t.d0.n_minus()};
  in.counts_d1 = {t.d1.n_plus(), t.d1.n_minus()};
  in.d = unnormalized_kh<F>(t.d, opt);
  in.d0 = unnormalized_kh<F>(t.d0, opt);
  in.d1 = unnormalized_kh<F>(t.d1, opt);
  return in;
}

struct LESViolation {
  std::string kind;  // "euler" or "triangle"
  int i = 0;         // homological degree (unused for "euler")
  int q = 0;
  std::string detail;
};

struct LESReport {
  bool pass = true;
  std::vector<LESViolation> violations;
};

/// Checks, for each q, that the alternating sum of the sequence vanishes and
/// that every term is at most the sum of its two neighbours.
inline LESReport les_consistency(const LESInstance& in) {
  // The 0-smoothing of a positive crossing is the oriented one.
  if (!(in.counts_d0 == CrossingCounts{in.counts_d.n_plus - 1, in.counts_d.n_minus}))
    throw std::invalid_argument("les_consistency: crossing counts of D0 do not match D minus one positive crossing");
  if (in.counts_d1.n_plus + in.counts_d1.n_minus != in.counts_d.n_plus + in.counts_d.n_minus - 1)
    throw std::invalid_argument("les_consistency: D1 must have one crossing fewer than D");
  std::set<int> qs;
  std::set<int> is;
  for (const auto* b : {&in.d, &in.d0})
    for (const auto& [k, v] : b->cells()) {
      qs.insert(k.second);
      is.insert(k.first);
    }
  for (const auto& [k, v] : in.d1.cells()) {
    qs.insert(k.second + 1);
    is.insert(k.first);
    is.insert(k.first + 1);
  }
  LESReport rep;
  if (is.empty()) return rep;
  const int ilo = *is.begin() - 1, ihi = *is.rbegin() + 1;
  auto X = [&](int i, int q) { return in.d1.at(i, q - 1); };  // Kh^i(D1){1} at q
  auto Y = [&](int i, int q) { return in.d.at(i, q); };
  auto Z = [&](int i, int q) { return in.d0.at(i, q); };
  for (int q : qs) {
    std::int64_t sum = 0;
    for (int i = ilo; i <= ihi; ++i) {
      const std::int64_t term = Z(i, q) + X(i - 1, q) - Y(i, q);
      sum += (i % 2 == 0) ? term : -term;
      auto check = [&](std::int64_t mid, std::int64_t a, std::int64_t b, const std::string& what) {
        if (mid > a + b) {
          rep.pass = false;
          rep.violations.push_back({"triangle", i, q, what + ": " + std::to_string(mid) + " > " + std::to_string(a) + " + " + std::to_string(b)});
        }
      };
      check(Y(i, q), X(i - 1, q), Z(i, q), "Kh^i(D)");
      check(Z(i, q), Y(i, q), X(i, q), "Kh^i(D0)");
      check(X(i - 1, q), Z(i - 1, q), Y(i, q), "Kh^{i-1}(D1){1}");
    }
    if (sum != 0) {
      rep.pass = false;
      rep.violations.push_back({"euler", 0, q, "alternating sum is " + std::to_string(sum)});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Closed forms for Kh(K_n) and Kh(K_n^t).

enum class Family { K, KTau };

inline std::string family_name(Family f) { return f == Family::K ? "K" : "Ktau"; }

namespace detail {

struct TemplateCell {
  int mult;
  int i_off;  // i = n + i_off
  int q_off;  // q = 2n + q_off
};

inline const std::vector<TemplateCell>& family_template(Family f) {
  static const std::vector<TemplateCell> k = {
      {1, -7, -13}, {1, -6, -9}, {1, -4, -7}, {1, -3, -7}, {1, -3, -3}, {1, -2, -5}, {1, -2, -3}, {1, -1, -3},
      {1, -1, -1},  {1, 0, -3},  {1, 0, -1},  {1, 0, 1},   {2, 1, 1},   {1, 1, 3},   {1, 2, 1},   {1, 2, 3},
      {1, 2, 5},    {1, 3, 3},   {1, 3, 5},   {1, 3, 7},   {1, 4, 7},   {1, 5, 7},   {1, 6, 11}};
  static const std::vector<TemplateCell> kt = {
      {1, -7, -13}, {1, -6, -9}, {1, -5, -9}, {1, -4, -9}, {1, -4, -7}, {1, -4, -5}, {1, -3, -7}, {1, -3, -5},
      {1, -3, -3},  {1, -2, -5}, {2, -2, -3}, {1, -1, -3}, {1, -1, -1}, {1, -1, 1},  {1, 0, -1},  {1, 0, 1},
      {1, 1, 1},    {1, 1, 3},   {1, 2, 1},   {1, 2, 5},   {1, 3, 5},   {1, 5, 7},   {1, 6, 11}};
  return f == Family::K ? k : kt;
}

}  // namespace detail

/// The closed form: Q_{-1} + Q_1 in degree 0 plus a block moving by [1]{2} per twist.
inline BigradedDims closed_form(Family f, int n) {
  BigradedDims b{{{0, -1}, 1}, {{0, 1}, 1}};
  for (const auto& c : detail::family_template(f)) b.add(n + c.i_off, 2 * n + c.q_off, c.mult);
  return b;
}

/// Looks for a pairing of all generators except the two survivors at
/// (0, s-1), (0, s+1), where each pair is (p, q) and (p+1, q + 4k), k >= 1.
/// Returns the cells left unpaired by a maximum pairing (empty when feasible).
inline std::vector<std::pair<int, int>> lee_unpaired(const BigradedDims& kh_table, int s = 0) {
  BigradedDims rest = kh_table;
  try {
    rest.add(0, s - 1, -1);
    rest.add(0, s + 1, -1);
  } catch (const std::logic_error&) {
    return {{0, s - 1}, {0, s + 1}};
  }
  std::vector<std::pair<int, int>> even, odd;
  for (const auto& [k, v] : rest.cells())
    for (std::int64_t j = 0; j < v; ++j) ((k.first % 2 == 0) ? even : odd).push_back(k);
  auto adjacent = [](std::pair<int, int> a, std::pair<int, int> b) {
    if (a.first + 1 == b.first) std::swap(a, b);
    if (b.first + 1 != a.first) return false;
    const int dq = a.second - b.second;  // b in degree p, a in degree p+1
    return dq >= 4 && dq % 4 == 0;
  };
  std::vector<int> match_odd(odd.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t e, std::vector<bool>& seen) {
    for (std::size_t o = 0; o < odd.size(); ++o) {
      if (seen[o] || !adjacent(even[e], odd[o])) continue;
      seen[o] = true;
      if (match_odd[o] < 0 || augment(static_cast<std::size_t>(match_odd[o]), seen)) {
        match_odd[o] = static_cast<int>(e);
        return true;
      }
    }
    return false;
  };
  std::vector<bool> even_matched(even.size(), false);
  for (std::size_t e = 0; e < even.size(); ++e) {
    std::vector<bool> seen(odd.size(), false);
    even_matched[e] = augment(e, seen);
  }
  std::vector<std::pair<int, int>> left;
  for (std::size_t e = 0; e < even.size(); ++e)
    if (!even_matched[e]) left.push_back(even[e]);
  for (std::size_t o = 0; o < odd.size(); ++o)
    if (match_odd[o] < 0) left.push_back(odd[o]);
  std::sort(left.begin(), left.end());
  return left;
}

struct InductionCandidate {
  BigradedDims table;
  int a = 0;  // dim Kh^1_1
  int b = 0;  // dim Kh^1_3
  std::vector<std::pair<int, int>> lee_unpaired;
};

struct InductionResult {
  BigradedDims fixed;                          // Kh^j(K_n) for j != 0, 1
  std::vector<InductionCandidate> candidates;  // every rank choice allowed by exactness
  std::optional<BigradedDims> resolved;        // the unique candidate passing the Lee filter
};

/// One inductive step: from Kh(K_{n-1}) and exactness of the sequence for
/// (K_n, 2-unlink, K_{n-1}), enumerate the possible Kh(K_n), then keep those
/// compatible with Lee's spectral sequence converging to (0, s-1), (0, s+1).
inline InductionResult induction_step(const BigradedDims& kh_prev, int n, Family fam, int s = 0) {
  if (n < 9) throw std::invalid_argument("induction_step: n must be at least 9");
  if (!(kh_prev == closed_form(fam, n - 1)))
    throw std::invalid_argument("induction_step: Kh(K_{n-1}) does not match the closed form");
  // Unnormalized tables with D = K_n (7+n positive, 7 negative crossings),
  // D0 = 2-unlink and D1 = K_{n-1} (each 6+n positive, 7 negative).
  const ShiftSpec to_d1{7, 8 - n};
  const BigradedDims unlink{{{0, -2}, 1}, {{0, 0}, 2}, {{0, 2}, 1}};
  const BigradedDims x = kh_prev.shifted(to_d1);  // Kh^(D1)
  const BigradedDims z = unlink.shifted(to_d1);   // Kh^(D0), supported in degree 7
  const ShiftSpec from_d{-7, n - 7};

  InductionResult res;
  std::set<int> i_all;
  for (const auto& [k, v] : x.cells()) i_all.insert(k.first + 1);
  for (const auto& [k, v] : z.cells()) i_all.insert(k.first);
  // Degrees where D0 vanishes on both sides: Kh^i(D) = Kh^{i-1}(D1){1}.
  BigradedDims y_fixed;
  for (const auto& [k, v] : x.cells()) {
    const int i = k.first + 1, q = k.second + 1;
    if (z.row(i).empty() && z.row(i - 1).empty()) y_fixed.add(i, q, v);
  }
  res.fixed = y_fixed.shifted(from_d);

  // In the window: 0 -> X^{i0-1}_{q-1} -> Y^{i0}_q -> Z^{i0}_q -> X^{i0}_{q-1} -> Y^{i0+1}_q -> 0
  // where i0 is the single degree of D0. The connecting map has rank rho_q.
  const int i0 = z.cells().begin()->first.first;
  for (const auto& [k, v] : z.cells())
    if (k.first != i0) throw std::logic_error("induction_step: D0 not concentrated in one degree");
  std::set<int> qs;
  for (const auto& [k, v] : z.cells()) qs.insert(k.second);
  for (const auto& [k, v] : x.cells())
    if (k.first == i0 - 1 || k.first == i0) qs.insert(k.second + 1);
  std::vector<int> qv(qs.begin(), qs.end());
  std::vector<int> max_rank;
  for (int q : qv) max_rank.push_back(static_cast<int>(std::min(z.at(i0, q), x.at(i0, q - 1))));
  std::vector<int> rho(qv.size(), 0);
  for (;;) {
    BigradedDims y = y_fixed;
    for (std::size_t j = 0; j < qv.size(); ++j) {
      const int q = qv[j];
      y.add(i0, q, x.at(i0 - 1, q - 1) + z.at(i0, q) - rho[j]);
      y.add(i0 + 1, q, x.at(i0, q - 1) - rho[j]);
    }
    InductionCandidate c;
    c.table = y.shifted(from_d);
    c.a = static_cast<int>(c.table.at(1, 1));
    c.b = static_cast<int>(c.table.at(1, 3));
    c.lee_unpaired = lee_unpaired(c.table, s);
    res.candidates.push_back(std::move(c));
    std::size_t j = 0;
    while (j < rho.size() && rho[j] == max_rank[j]) rho[j++] = 0;
    if (j == rho.size()) break;
    ++rho[j];
  }
  std::vector<const InductionCandidate*> ok;
  for (const auto& c : res.candidates)
    if (c.lee_unpaired.empty()) ok.push_back(&c);
  if (ok.size() == 1) res.resolved = ok.front()->table;
  return res;
}

}  // namespace khmut

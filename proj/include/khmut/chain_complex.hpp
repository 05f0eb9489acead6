#pragma once

// Bigraded cochain complexes of free modules over an exact field, with
// homology computed per quantum-grading block.

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "khmut/field.hpp"
#include "khmut/graded.hpp"
#include "khmut/sparse.hpp"

namespace khmut {

/// Generators sit in bigradings (i, q); d^i maps degree i to degree i+1.
/// d^i is stored with rows indexed by generators of degree i+1 and columns by
/// generators of degree i.
template <ExactField F>
class GradedChainComplex {
 public:
  int add_generator(int i, int q) {
    auto& gens = q_[i];
    gens.push_back(q);
    const int idx = static_cast<int>(gens.size()) - 1;
    resize_adjacent(i);
    return idx;
  }

  int size(int i) const {
    auto it = q_.find(i);
    return it == q_.end() ? 0 : static_cast<int>(it->second.size());
  }
  int q_of(int i, int idx) const { return q_.at(i).at(static_cast<std::size_t>(idx)); }
  const std::vector<int>& grades(int i) const {
    static const std::vector<int> kEmpty;
    auto it = q_.find(i);
    return it == q_.end() ? kEmpty : it->second;
  }

  /// Degrees carrying at least one generator.
  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& [i, g] : q_)
      if (!g.empty()) out.push_back(i);
    return out;
  }
  int total_rank() const {
    int t = 0;
    for (const auto& [i, g] : q_) t += static_cast<int>(g.size());
    return t;
  }

  /// Adds v to the coefficient of target (degree i+1) in d(source) (degree i).
  void add_differential(int i, int source, int target, const F& v) { d_mut(i).add(target, source, v); }

  const SparseMatrix<F>& d(int i) const {
    static const SparseMatrix<F> kEmpty;
    auto it = d_.find(i);
    if (it == d_.end()) {
      if (size(i) != 0 && size(i + 1) != 0) throw std::logic_error("GradedChainComplex: missing differential");
      return kEmpty;
    }
    return it->second;
  }

  BigradedDims rank_table() const {
    BigradedDims out;
    for (const auto& [i, gens] : q_)
      for (int q : gens) out.add(i, q, 1);
    return out;
  }

  /// True when d^{i+1} d^i = 0 for every i.
  bool d_squared_is_zero() const {
    for (const auto& [i, m] : d_) {
      auto next = d_.find(i + 1);
      if (next == d_.end()) continue;
      if (!next->second.multiply(m).is_zero()) return false;
    }
    return true;
  }

  /// True when every differential entry joins generators of equal q.
  bool preserves_q() const {
    for (const auto& [i, m] : d_)
      for (const auto& [rc, v] : m.entries())
        if (q_of(i + 1, rc.first) != q_of(i, rc.second)) return false;
    return true;
  }

  /// Removes source (degree i) and target (degree i+1), which must be joined
  /// by a unit entry of d^i, and corrects d^i by the usual zig-zag term.
  GradedChainComplex eliminated(int i, int source, int target) const {
    const F pivot = d(i).get(target, source);
    if (pivot.is_zero()) throw std::invalid_argument("gaussian_eliminate: chosen entry is not a unit");
    const F inv = pivot.inverse();

    GradedChainComplex out;
    auto remap = [](int idx, int removed) { return idx < removed ? idx : idx - 1; };
    for (const auto& [deg, gens] : q_) {
      for (int k = 0; k < static_cast<int>(gens.size()); ++k) {
        if ((deg == i && k == source) || (deg == i + 1 && k == target)) continue;
        out.add_generator(deg, gens[static_cast<std::size_t>(k)]);
      }
    }
    std::vector<std::pair<int, F>> into_target;   // sources x != source with d(x) -> target
    std::vector<std::pair<int, F>> from_source;   // targets y != target with d(source) -> y
    for (const auto& [deg, m] : d_) {
      for (const auto& [rc, v] : m.entries()) {
        const int r = rc.first, c = rc.second;
        if (deg == i) {
          if (c == source && r == target) continue;
          if (c == source) { from_source.push_back({r, v}); continue; }
          if (r == target) { into_target.push_back({c, v}); continue; }
          out.add_differential(deg, remap(c, source), remap(r, target), v);
        } else if (deg == i - 1) {
          if (r == source) continue;
          out.add_differential(deg, c, remap(r, source), v);
        } else if (deg == i + 1) {
          if (c == target) continue;
          out.add_differential(deg, remap(c, target), r, v);
        } else {
          out.add_differential(deg, c, r, v);
        }
      }
    }
    for (const auto& [x, a] : into_target)
      for (const auto& [y, b] : from_source)
        out.add_differential(i, remap(x, source), remap(y, target), -(b * inv * a));
    return out;
  }

 private:
  std::map<int, std::vector<int>> q_;
  std::map<int, SparseMatrix<F>> d_;

  SparseMatrix<F>& d_mut(int i) {
    auto it = d_.find(i);
    if (it == d_.end()) it = d_.emplace(i, SparseMatrix<F>(size(i + 1), size(i))).first;
    return it->second;
  }

  void resize_adjacent(int i) {
    for (int deg : {i - 1, i}) {
      const int rows = size(deg + 1), cols = size(deg);
      auto it = d_.find(deg);
      if (it == d_.end()) {
        if (rows && cols) d_.emplace(deg, SparseMatrix<F>(rows, cols));
        continue;
      }
      it->second.grow(rows, cols);
    }
  }
};

/// dim H^{i}_q = dim ker(d^i)|_q - rank(d^{i-1})|_q.
template <ExactField F>
BigradedDims homology_dims(const GradedChainComplex<F>& c) {
  if (!c.preserves_q()) throw std::invalid_argument("homology_dims: differential does not preserve q");
  // rank of d^i restricted to each q block
  std::map<std::pair<int, int>, std::size_t> block_rank;
  std::vector<int> degs = c.degrees();
  for (int i : degs) {
    if (c.size(i + 1) == 0) continue;
    const auto& m = c.d(i);
    if (m.rows() != c.size(i + 1) || m.cols() != c.size(i))
      throw std::invalid_argument("homology_dims: dimension mismatch between adjacent differentials");
    std::map<int, std::vector<std::vector<std::pair<int, F>>>> rows_by_q;
    std::map<int, std::map<int, int>> row_slot;  // q -> (row -> local index)
    std::map<int, std::map<int, int>> col_slot;
    for (const auto& [rc, v] : m.entries()) {
      const int q = c.q_of(i, rc.second);
      auto& rs = row_slot[q];
      auto [rit, rnew] = rs.try_emplace(rc.first, static_cast<int>(rs.size()));
      if (rnew) rows_by_q[q].emplace_back();
      auto& cs = col_slot[q];
      auto cit = cs.try_emplace(rc.second, static_cast<int>(cs.size())).first;
      rows_by_q[q][static_cast<std::size_t>(rit->second)].push_back({cit->second, v});
    }
    for (auto& [q, rows] : rows_by_q)
      block_rank[{i, q}] = rank_of_rows<F>(std::move(rows), static_cast<int>(col_slot[q].size()));
  }
  BigradedDims out;
  const BigradedDims ranks = c.rank_table();
  for (const auto& [k, n] : ranks.cells()) {
    const auto [i, q] = k;
    std::int64_t h = n;
    if (auto it = block_rank.find({i, q}); it != block_rank.end()) h -= static_cast<std::int64_t>(it->second);
    if (auto it = block_rank.find({i - 1, q}); it != block_rank.end()) h -= static_cast<std::int64_t>(it->second);
    out.add(i, q, h);
  }
  return out;
}

/// Cancels the pair joined by the unit entry d^i(source -> target).
template <ExactField F>
GradedChainComplex<F> gaussian_eliminate(const GradedChainComplex<F>& c, int i, int source, int target) {
  return c.eliminated(i, source, target);
}

/// Repeatedly cancels unit entries that join generators of equal q until none remain.
template <ExactField F>
GradedChainComplex<F> eliminate_all_units(GradedChainComplex<F> c) {
  for (;;) {
    bool found = false;
    for (int i : c.degrees()) {
      if (c.size(i + 1) == 0) continue;
      for (const auto& [rc, v] : c.d(i).entries()) {
        if (c.q_of(i, rc.second) != c.q_of(i + 1, rc.first)) continue;
        c = c.eliminated(i, rc.second, rc.first);
        found = true;
        break;
      }
      if (found) break;
    }
    if (!found) return c;
  }
}

/// Graded Smith form over F[u] for a complex whose entries are monomials
/// c u^k, with k fixed by the gradings as weight(target) - weight(source).
/// Generators carry (degree, grade); differentials raise degree by one.
/// Returns the grades of free generators of homology (as a multiset) and the
/// torsion pairs (source grade, target grade, exponent).
struct MonomialSmithForm {
  BigradedDims free;  // keyed by (degree, grade)
  struct Pair {
    int degree = 0;  // degree of the source
    int grade_source = 0;
    int grade_target = 0;
    int exponent = 0;
  };
  std::vector<Pair> pairs;
};

template <ExactField F>
MonomialSmithForm monomial_smith_form(const std::vector<std::pair<int, int>>& gens, const std::vector<int>& weight,
                                      const std::vector<std::tuple<int, int, F>>& entries) {
  if (weight.size() != gens.size()) throw std::invalid_argument("monomial_smith_form: weight size mismatch");
  MonomialSmithForm out;
  for (const auto& [i, g] : gens) out.free.add(i, g, 1);
  auto expo = [&](int s, int t) { return weight[static_cast<std::size_t>(t)] - weight[static_cast<std::size_t>(s)]; };
  std::map<int, std::map<std::pair<int, int>, F>> mats;  // source degree -> (target, source) -> value
  for (const auto& [s, t, v] : entries) {
    const auto& gs = gens.at(static_cast<std::size_t>(s));
    const auto& gt = gens.at(static_cast<std::size_t>(t));
    if (gt.first != gs.first + 1) throw std::invalid_argument("monomial_smith_form: entry must raise degree by one");
    if (expo(s, t) < 0) throw std::invalid_argument("monomial_smith_form: negative exponent");
    mats[gs.first][{t, s}] += v;
  }
  for (auto& [i, m] : mats) {
    std::erase_if(m, [](const auto& e) { return e.second.is_zero(); });
    std::map<int, std::set<int>> by_row, by_col;
    for (const auto& [rc, v] : m) {
      by_row[rc.first].insert(rc.second);
      by_col[rc.second].insert(rc.first);
    }
    auto drop = [&](int r, int c) {
      m.erase({r, c});
      by_row[r].erase(c);
      by_col[c].erase(r);
    };
    while (!m.empty()) {
      auto best = m.begin();
      int best_e = std::numeric_limits<int>::max();
      for (auto it = m.begin(); it != m.end(); ++it) {
        const int e = expo(it->first.second, it->first.first);
        if (e < best_e || (e == best_e && detail::is_unit_like(it->second) && !detail::is_unit_like(best->second))) {
          best = it;
          best_e = e;
        }
      }
      const int pr = best->first.first, pc = best->first.second;
      const F inv = best->second.inverse();
      std::vector<std::pair<int, F>> col_entries, row_entries;
      for (int r : by_col[pc])
        if (r != pr) col_entries.push_back({r, m.at({r, pc})});
      for (int c : by_row[pr])
        if (c != pc) row_entries.push_back({c, m.at({pr, c})});
      // Row operations clear the pivot column; the matching column operations
      // on the pivot row then only touch the pivot row itself.
      for (const auto& [r, a] : col_entries)
        for (const auto& [c, b] : row_entries) {
          auto [it, fresh] = m.try_emplace({r, c}, F::zero());
          it->second -= a * inv * b;
          if (fresh) {
            by_row[r].insert(c);
            by_col[c].insert(r);
          }
          if (it->second.is_zero()) drop(r, c);
        }
      for (const auto& [r, a] : col_entries) drop(r, pc);
      for (const auto& [c, b] : row_entries) drop(pr, c);
      drop(pr, pc);
      const auto& gs = gens[static_cast<std::size_t>(pc)];
      const auto& gt = gens[static_cast<std::size_t>(pr)];
      out.free.add(gs.first, gs.second, -1);
      out.free.add(gt.first, gt.second, -1);
      out.pairs.push_back({i, gs.second, gt.second, best_e});
    }
  }
  return out;
}

}  // namespace khmut

#pragma once

// Lee's deformation of the Khovanov complex, the Rasmussen s-invariant, and
// the pages of the spectral sequence from Kh to Lee homology.
//
// Page indexing: d_r maps E_r^{p,q} to E_r^{p+1,q+r}, so r is measured in
// units of q. The deformation raises q by multiples of 4, hence
// E_1 = ... = E_4, E_5 = ... = E_8, and so on.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "khmut/chain_complex.hpp"
#include "khmut/cobordism.hpp"
#include "khmut/khovanov.hpp"
#include "khmut/sparse.hpp"

namespace khmut {

/// Generators with homological degree i and filtration level q; every
/// differential entry goes from degree i to i+1 and does not lower q.
template <ExactField F>
class FilteredComplex {
 public:
  int add_generator(int i, int q) {
    gens_.push_back({i, q});
    return static_cast<int>(gens_.size()) - 1;
  }
  void add_entry(int source, int target, const F& v) {
    const auto [i, qs] = gens_.at(static_cast<std::size_t>(source));
    const auto [j, qt] = gens_.at(static_cast<std::size_t>(target));
    if (j != i + 1) throw std::invalid_argument("FilteredComplex: entry must raise i by one");
    if (qt < qs) throw std::invalid_argument("FilteredComplex: entry lowers the filtration");
    if (!v.is_zero()) entries_.push_back({source, target, v});
  }
  const std::vector<std::pair<int, int>>& gens() const { return gens_; }
  const std::vector<std::tuple<int, int, F>>& entries() const { return entries_; }

  FilteredComplex shifted(ShiftSpec s) const {
    FilteredComplex out = *this;
    for (auto& g : out.gens_) g = {g.first + s.homological, g.second + s.quantum};
    return out;
  }

  /// The q-preserving part, i.e. the Khovanov complex.
  GradedChainComplex<F> associated_graded() const {
    GradedChainComplex<F> c;
    std::vector<int> local(gens_.size());
    for (std::size_t g = 0; g < gens_.size(); ++g) local[g] = c.add_generator(gens_[g].first, gens_[g].second);
    for (const auto& [s, t, v] : entries_)
      if (gens_[static_cast<std::size_t>(s)].second == gens_[static_cast<std::size_t>(t)].second)
        c.add_differential(gens_[static_cast<std::size_t>(s)].first, local[static_cast<std::size_t>(s)], local[static_cast<std::size_t>(t)], v);
    return c;
  }

  bool d_squared_is_zero() const {
    std::map<std::pair<int, int>, F> sq;
    std::vector<std::vector<std::pair<int, F>>> out(gens_.size());
    for (const auto& [s, t, v] : entries_) out[static_cast<std::size_t>(s)].push_back({t, v});
    for (std::size_t s = 0; s < gens_.size(); ++s)
      for (const auto& [t, v] : out[s])
        for (const auto& [u, w] : out[static_cast<std::size_t>(t)]) sq[{static_cast<int>(s), u}] += v * w;
    for (const auto& [k, v] : sq)
      if (!v.is_zero()) return false;
    return true;
  }

  /// dim of {x in F^a C^i : dx in F^{a+s} C^{i+1}}; s = nullopt means s = infinity.
  std::int64_t z_dim(int i, int a, std::optional<int> s) const {
    std::map<int, int> col, row;
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (gens_[g].first == i && gens_[g].second >= a) col.emplace(static_cast<int>(g), static_cast<int>(col.size()));
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (gens_[g].first == i + 1 && (!s || gens_[g].second < a + *s)) row.emplace(static_cast<int>(g), static_cast<int>(row.size()));
    std::vector<std::vector<std::pair<int, F>>> rows(row.size());
    for (const auto& [src, tgt, v] : entries_) {
      auto c = col.find(src);
      auto r = row.find(tgt);
      if (c != col.end() && r != row.end()) rows[static_cast<std::size_t>(r->second)].push_back({c->second, v});
    }
    std::erase_if(rows, [](const auto& r) { return r.empty(); });
    return static_cast<std::int64_t>(col.size()) - static_cast<std::int64_t>(rank_of_rows<F>(std::move(rows), static_cast<int>(col.size())));
  }

 private:
  std::vector<std::pair<int, int>> gens_;
  std::vector<std::tuple<int, int, F>> entries_;
};

/// Lee complex from the simplifying pipeline, normalized gradings. Each entry
/// c from q to q' stands for c t^((q'-q)/4); at t = 1 it is just c.
inline FilteredComplex<Rational> lee_complex(const PlanarDiagram& d, const KhOptions& opt = {}) {
  detail::check_size(d, opt.max_crossings);
  ScanOptions so;
  so.formal_t = true;
  so.order = opt.order;
  so.explicit_order = opt.explicit_order;
  ScanResult<Rational> r = scan_complex<Rational>(d, so);
  FilteredComplex<Rational> c;
  for (const auto& [i, q] : r.gens) c.add_generator(i, q);
  for (const auto& [s, t, v] : r.entries) c.add_entry(s, t, v);
  return c.shifted(normalization_shift(d));
}

/// Lee complex of the full cube (test oracle), normalized gradings.
inline FilteredComplex<Rational> naive_lee_complex(const PlanarDiagram& d, int max_crossings = 10) {
  CubeComplex<Rational> cx = naive_cube<Rational>(d, false, true, max_crossings);
  FilteredComplex<Rational> c;
  for (const auto& [i, q] : cx.gens) c.add_generator(i, q);
  for (const auto& [s, t, v] : cx.entries) c.add_entry(s, t, v);
  return c.shifted(normalization_shift(d));
}

/// Graded decomposition of a Q[t]-complex: free generators and torsion pairs
/// x -> t^k y (x in degree i at q, y in degree i+1 at q + 4k).
struct LeeDecomposition {
  BigradedDims free;
  struct Pair {
    int i = 0;
    int q_source = 0;
    int q_target = 0;
    int k() const { return (q_target - q_source) / 4; }
  };
  std::vector<Pair> pairs;
};

/// Graded Smith form of every differential, pivoting on the least power of t.
inline LeeDecomposition lee_decomposition(const FilteredComplex<Rational>& c) {
  const auto& gens = c.gens();
  for (const auto& [s, t, v] : c.entries()) {
    const int dq = gens[static_cast<std::size_t>(t)].second - gens[static_cast<std::size_t>(s)].second;
    if (dq % 4 != 0) throw std::invalid_argument("lee_decomposition: entry is not a power of t");
  }
  // Entries only join levels congruent mod 4, so floor(q / 4) measures powers of t.
  std::vector<int> weight;
  weight.reserve(gens.size());
  for (const auto& [i, q] : gens) weight.push_back((q - (((q % 4) + 4) % 4)) / 4);
  const MonomialSmithForm snf = monomial_smith_form<Rational>(gens, weight, c.entries());
  LeeDecomposition out;
  out.free = snf.free;
  for (const auto& p : snf.pairs) out.pairs.push_back({p.degree, p.grade_source, p.grade_target});
  return out;
}

/// Lee homology: the filtration levels of a basis (i, level) -> count.
inline BigradedDims lee_homology(const PlanarDiagram& d, const KhOptions& opt = {}) {
  return lee_decomposition(lee_complex(d, opt)).free;
}

inline int s_invariant(const PlanarDiagram& d, const KhOptions& opt = {}) {
  if (!d.is_knot()) throw std::invalid_argument("s_invariant: link input (" + std::to_string(d.num_components()) + " components)");
  const BigradedDims f = lee_homology(d, opt);
  if (f.total() != 2 || f.row(0).total() != 2) throw std::logic_error("s_invariant: Lee homology of a knot must be two copies of Q in degree 0");
  const int qmin = f.cells().begin()->first.second;
  const int qmax = f.cells().rbegin()->first.second;
  if (qmax - qmin != 2) throw std::logic_error("s_invariant: surviving levels are not s-1, s+1");
  return qmin + 1;
}

struct SpectralPage {
  int r = 1;
  BigradedDims dims;
};

/// E_r dims by the rank formula
///   E_r^{p,i} = z_r^{p,i} - z_{r-1}^{p+1,i} - z_{r-1}^{p-r+1,i-1} + z_r^{p-r+1,i-1}
/// with z_s^{a,i} = dim { x in F^a C^i : dx in F^{a+s} }.
template <ExactField F>
SpectralPage page_dims(const FilteredComplex<F>& c, int r) {
  if (r < 1) throw std::invalid_argument("page_dims: r must be at least 1");
  std::map<int, std::vector<int>> levels;  // i -> q values present
  for (const auto& [i, q] : c.gens()) levels[i].push_back(q);
  SpectralPage page;
  page.r = r;
  std::map<std::tuple<int, int, int>, std::int64_t> memo;
  auto z = [&](int i, int a, int s) {
    auto key = std::make_tuple(i, a, s);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    return memo[key] = c.z_dim(i, a, s);
  };
  for (auto& [i, qs] : levels) {
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    for (int p : qs) {
      const std::int64_t e = z(i, p, r) - z(i, p + 1, r - 1) - z(i - 1, p - r + 1, r - 1) + z(i - 1, p - r + 1, r);
      page.dims.add(i, p, e);
    }
  }
  return page;
}

inline SpectralPage page_dims(const PlanarDiagram& d, int r, const KhOptions& opt = {}) {
  return page_dims(lee_complex(d, opt), r);
}

/// Pages predicted by a decomposition: a pair with jump 4k lives on pages r <= 4k.
inline SpectralPage page_from_decomposition(const LeeDecomposition& dec, int r) {
  SpectralPage page;
  page.r = r;
  page.dims = dec.free;
  for (const auto& p : dec.pairs)
    if (p.q_target - p.q_source >= r) {
      page.dims.add(p.i, p.q_source, 1);
      page.dims.add(p.i + 1, p.q_target, 1);
    }
  return page;
}

}  // namespace khmut

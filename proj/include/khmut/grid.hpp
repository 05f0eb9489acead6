#pragma once

// Knot Floer homology from grid diagrams over F2: the tilde complex (empty
// rectangles avoiding every marking), hat by removing the V^{g-l} factor,
// the minus flavor over F2[U] with all U_i identified, and tau.
//
// Conventions: column c carries an O in row O[c] and an X in row X[c]. The
// link runs from O to X along columns and from X to O along rows, with
// vertical strands passing over horizontal ones. Markings sit at the centres
// of cells, states are permutations x with one lattice point (c, x[c]) per
// column.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "khmut/chain_complex.hpp"
#include "khmut/cobordism.hpp"
#include "khmut/diagram.hpp"
#include "khmut/field.hpp"
#include "khmut/graded.hpp"

namespace khmut {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridDiagram {
  int size = 0;
  std::vector<int> O;
  std::vector<int> X;

  GridDiagram() = default;
  GridDiagram(std::vector<int> o, std::vector<int> x) : size(static_cast<int>(o.size())), O(std::move(o)), X(std::move(x)) {
    validate();
  }

  void validate() const {
    if (size < 1) throw GridError("grid: size must be positive");
    if (static_cast<int>(O.size()) != size || static_cast<int>(X.size()) != size) throw GridError("grid: O and X must have length size");
    auto is_perm = [&](const std::vector<int>& p) {
      std::vector<bool> seen(static_cast<std::size_t>(size), false);
      for (int v : p) {
        if (v < 0 || v >= size || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
      }
      return true;
    };
    if (!is_perm(O) || !is_perm(X)) throw GridError("grid: O and X must be permutations of 0..size-1");
    for (int c = 0; c < size; ++c)
      if (O[static_cast<std::size_t>(c)] == X[static_cast<std::size_t>(c)])
        throw GridError("grid: O and X share the cell in column " + std::to_string(c));
  }

  std::vector<int> o_column_of_row() const {
    std::vector<int> inv(static_cast<std::size_t>(size));
    for (int c = 0; c < size; ++c) inv[static_cast<std::size_t>(O[static_cast<std::size_t>(c)])] = c;
    return inv;
  }
  std::vector<int> x_column_of_row() const {
    std::vector<int> inv(static_cast<std::size_t>(size));
    for (int c = 0; c < size; ++c) inv[static_cast<std::size_t>(X[static_cast<std::size_t>(c)])] = c;
    return inv;
  }

  int num_components() const {
    const auto oc = o_column_of_row();
    std::vector<bool> seen(static_cast<std::size_t>(size), false);
    int comps = 0;
    for (int c0 = 0; c0 < size; ++c0) {
      if (seen[static_cast<std::size_t>(c0)]) continue;
      ++comps;
      for (int c = c0; !seen[static_cast<std::size_t>(c)]; c = oc[static_cast<std::size_t>(X[static_cast<std::size_t>(c)])])
        seen[static_cast<std::size_t>(c)] = true;
    }
    return comps;
  }
  bool is_knot() const { return num_components() == 1; }

  friend bool operator==(const GridDiagram&, const GridDiagram&) = default;
};

/// Reversing the column order mirrors the link.
inline GridDiagram mirror(const GridDiagram& g) {
  std::vector<int> o(g.O.rbegin(), g.O.rend()), x(g.X.rbegin(), g.X.rend());
  return GridDiagram(std::move(o), std::move(x));
}

/// Stabilization at the X of column c: that X moves up one row and a new
/// column c+1 carries an O above a new X.
inline GridDiagram stabilize(const GridDiagram& g, int c) {
  if (c < 0 || c >= g.size) throw GridError("stabilize: column out of range");
  const int r = g.X[static_cast<std::size_t>(c)];
  auto lift = [&](int row) { return row > r ? row + 1 : row; };
  std::vector<int> o, x;
  for (int j = 0; j < g.size; ++j) {
    o.push_back(lift(g.O[static_cast<std::size_t>(j)]));
    x.push_back(j == c ? r + 1 : lift(g.X[static_cast<std::size_t>(j)]));
    if (j == c) {
      o.push_back(r + 1);
      x.push_back(r);
    }
  }
  return GridDiagram(std::move(o), std::move(x));
}

inline nlohmann::json grid_to_json(const GridDiagram& g) { return {{"size", g.size}, {"O", g.O}, {"X", g.X}}; }

inline GridDiagram grid_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("O") || !j.contains("X")) throw GridError("grid JSON needs \"O\" and \"X\"");
  GridDiagram g(j.at("O").get<std::vector<int>>(), j.at("X").get<std::vector<int>>());
  if (j.contains("size") && j.at("size").get<int>() != g.size) throw GridError("grid JSON: size does not match O/X");
  return g;
}

/// The planar diagram drawn by the grid.
inline PlanarDiagram grid_to_diagram(const GridDiagram& g) {
  const int n = g.size;
  const auto xc = g.x_column_of_row();
  const auto oc = g.o_column_of_row();
  auto between = [](int v, int a, int b) { return std::min(a, b) < v && v < std::max(a, b); };
  // crossing (column, row) -> in/out arcs of the two strands and directions
  struct Cr {
    int in_u = -1, out_u = -1, in_o = -1, out_o = -1, hdir = 0, vdir = 0;
  };
  std::map<std::pair<int, int>, Cr> cr;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int next_arc = 0;
  int free_loops = 0;
  for (int c0 = 0; c0 < n; ++c0) {
    if (seen[static_cast<std::size_t>(c0)]) continue;
    const int first_arc = next_arc;
    int arc = next_arc++;
    std::vector<std::pair<std::pair<int, int>, bool>> events;  // crossing, is_over
    for (int c = c0; !seen[static_cast<std::size_t>(c)];) {
      seen[static_cast<std::size_t>(c)] = true;
      const int y0 = g.O[static_cast<std::size_t>(c)], y1 = g.X[static_cast<std::size_t>(c)];
      const int vd = y1 > y0 ? 1 : -1;
      for (int r = y0 + vd; r != y1; r += vd)
        if (between(c, xc[static_cast<std::size_t>(r)], oc[static_cast<std::size_t>(r)])) {
          events.push_back({{c, r}, true});
          cr[{c, r}].vdir = vd;
        }
      const int r = y1, c1 = oc[static_cast<std::size_t>(r)];
      const int hd = c1 > c ? 1 : -1;
      for (int cc = c + hd; cc != c1; cc += hd)
        if (between(r, g.O[static_cast<std::size_t>(cc)], g.X[static_cast<std::size_t>(cc)])) {
          events.push_back({{cc, r}, false});
          cr[{cc, r}].hdir = hd;
        }
      c = c1;
    }
    if (events.empty()) {
      --next_arc;
      ++free_loops;
      continue;
    }
    for (std::size_t e = 0; e < events.size(); ++e) {
      const int out = (e + 1 == events.size()) ? first_arc : next_arc++;
      Cr& x = cr[events[e].first];
      if (events[e].second) {
        x.in_o = arc;
        x.out_o = out;
      } else {
        x.in_u = arc;
        x.out_u = out;
      }
      arc = out;
    }
  }
  std::vector<PlanarDiagram::Tuple> pd;
  for (const auto& [key, x] : cr) {
    // Counterclockwise from the incoming under-strand.
    const int south = x.vdir > 0 ? x.in_o : x.out_o;
    const int north = x.vdir > 0 ? x.out_o : x.in_o;
    if (x.hdir > 0)
      pd.push_back({x.in_u, south, x.out_u, north});
    else
      pd.push_back({x.in_u, north, x.out_u, south});
  }
  if (pd.empty()) return PlanarDiagram::unknot(free_loops);
  return PlanarDiagram::from_pd(std::move(pd), free_loops);
}

struct GridOptions {
  int max_size_hat = 8;
  int max_size_minus = 6;
  int truncation = 8;  // U-power used to report truncated minus dims
};

namespace grid_detail {

inline void check_size(const GridDiagram& g, int bound, const char* what) {
  if (g.size > bound)
    throw SizeGuardError(std::string(what) + ": grid size " + std::to_string(g.size) + " exceeds the bound " + std::to_string(bound));
}

inline std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Lexicographic rank of a permutation.
inline int perm_rank(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[static_cast<std::size_t>(j)] < p[static_cast<std::size_t>(i)]) ++smaller;
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

/// 2 * I(P, Q) in doubled coordinates: pairs with p strictly south-west of q.
inline int count_sw(const std::vector<std::pair<int, int>>& P, const std::vector<std::pair<int, int>>& Q) {
  int n = 0;
  for (const auto& p : P)
    for (const auto& q : Q)
      if (p.first < q.first && p.second < q.second) ++n;
  return n;
}

/// M_P(x) = J(x,x) - 2J(x,P) + J(P,P) + 1 with J(a,b) = (I(a,b) + I(b,a)) / 2.
inline int maslov(const std::vector<std::pair<int, int>>& x, const std::vector<std::pair<int, int>>& P) {
  const int two_m = 2 * count_sw(x, x) - 2 * (count_sw(x, P) + count_sw(P, x)) + 2 * count_sw(P, P) + 2;
  return two_m / 2;
}

}  // namespace grid_detail

/// The complex of a grid: generators are the g! states.
struct GridComplex {
  int size = 0;
  int components = 1;
  std::vector<std::vector<int>> states;
  std::vector<int> maslov;     // M = M_O
  std::vector<int> alexander;  // (M_O - M_X - (g - l)) / 2, before re-centering
  std::vector<std::tuple<int, int, int>> edges;  // source, target, number of O in the rectangle
};

enum class GridFlavor { Tilde, Minus };

/// Empty rectangles avoiding every X, and every O too for the tilde flavor.
inline GridComplex grid_complex(const GridDiagram& g, GridFlavor flavor) {
  g.validate();
  const int n = g.size;
  if (n > 10) throw SizeGuardError("grid_complex: size " + std::to_string(n) + " is beyond enumeration");
  GridComplex cx;
  cx.size = n;
  cx.components = g.num_components();
  std::vector<std::pair<int, int>> opts, xpts;
  for (int c = 0; c < n; ++c) {
    opts.push_back({2 * c + 1, 2 * g.O[static_cast<std::size_t>(c)] + 1});
    xpts.push_back({2 * c + 1, 2 * g.X[static_cast<std::size_t>(c)] + 1});
  }
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do {
    cx.states.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  for (const auto& s : cx.states) {
    std::vector<std::pair<int, int>> pts;
    for (int c = 0; c < n; ++c) pts.push_back({2 * c, 2 * s[static_cast<std::size_t>(c)]});
    const int mo = grid_detail::maslov(pts, opts);
    const int mx = grid_detail::maslov(pts, xpts);
    const int twice_a = mo - mx - (n - cx.components);
    if (twice_a % 2 != 0) throw std::logic_error("grid_complex: half-integral Alexander grading");
    cx.maslov.push_back(mo);
    cx.alexander.push_back(twice_a / 2);
  }
  auto mod = [n](int v) { return ((v % n) + n) % n; };
  for (std::size_t si = 0; si < cx.states.size(); ++si) {
    const auto& x = cx.states[si];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        // Rectangle with corners (i, x[i]) and (j, x[j]), going right and up.
        const int w = mod(j - i);
        const int h = mod(x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(i)]);
        const int row0 = x[static_cast<std::size_t>(i)];
        bool empty = true;
        for (int k = 1; k < w && empty; ++k) {
          const int dy = mod(x[static_cast<std::size_t>(mod(i + k))] - row0);
          if (dy > 0 && dy < h) empty = false;
        }
        if (!empty) continue;
        int os = 0;
        bool hits_x = false;
        for (int k = 0; k < w; ++k) {
          const int c = mod(i + k);
          if (mod(g.X[static_cast<std::size_t>(c)] - row0) < h) hits_x = true;
          if (mod(g.O[static_cast<std::size_t>(c)] - row0) < h) ++os;
        }
        if (hits_x || (flavor == GridFlavor::Tilde && os > 0)) continue;
        std::vector<int> y = x;
        std::swap(y[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(j)]);
        cx.edges.push_back({static_cast<int>(si), grid_detail::perm_rank(y), os});
      }
  }
  return cx;
}

/// d^2 = 0 over F2[U] (with U tracked by the O count).
inline bool grid_d_squared_is_zero(const GridComplex& cx) {
  std::vector<std::vector<std::pair<int, int>>> out(cx.states.size());
  for (const auto& [s, t, k] : cx.edges) out[static_cast<std::size_t>(s)].push_back({t, k});
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::map<std::pair<int, int>, int> acc;
    for (const auto& [t, k] : out[s])
      for (const auto& [u, l] : out[static_cast<std::size_t>(t)]) acc[{u, k + l}] ^= 1;
    for (const auto& [key, v] : acc)
      if (v) return false;
  }
  return true;
}

/// Each edge lowers M by one (after accounting for U powers) and keeps A.
inline bool grid_gradings_consistent(const GridComplex& cx) {
  for (const auto& [s, t, k] : cx.edges) {
    if (cx.maslov[static_cast<std::size_t>(t)] - 2 * k != cx.maslov[static_cast<std::size_t>(s)] - 1) return false;
    if (cx.alexander[static_cast<std::size_t>(t)] - k != cx.alexander[static_cast<std::size_t>(s)]) return false;
  }
  return true;
}

/// Homology of the tilde complex, (M, A) -> dim, un-centred Alexander grading.
inline BigradedDims tilde_hfk(const GridDiagram& g, const GridOptions& opt = {}) {
  grid_detail::check_size(g, opt.max_size_hat, "tilde_hfk");
  const GridComplex cx = grid_complex(g, GridFlavor::Tilde);
  GradedChainComplex<F2> c;
  std::vector<int> local(cx.states.size());
  for (std::size_t s = 0; s < cx.states.size(); ++s) local[s] = c.add_generator(-cx.maslov[s], cx.alexander[s]);
  for (const auto& [s, t, k] : cx.edges)
    c.add_differential(-cx.maslov[static_cast<std::size_t>(s)], local[static_cast<std::size_t>(s)], local[static_cast<std::size_t>(t)], F2(1));
  const BigradedDims h = homology_dims(c);
  BigradedDims out;
  for (const auto& [key, v] : h.cells()) out.add(-key.first, key.second, v);
  return out;
}

/// Divides a generating function in (M, A) by (1 + t)^times, where t shifts by (-1, -1).
inline BigradedDims deconvolve_v(const BigradedDims& b, int times) {
  BigradedDims cur = b;
  for (int k = 0; k < times; ++k) {
    // Solve c(m, a) = q(m, a) + q(m+1, a+1) from the top Maslov grading down;
    // with nonnegative coefficients the quotient lives on the support of c.
    std::vector<std::pair<int, int>> order;
    for (const auto& [key, v] : cur.cells()) order.push_back(key);
    std::sort(order.begin(), order.end(), [](auto x, auto y) { return x.first > y.first; });
    BigradedDims next;
    for (const auto& [m, a] : order) {
      const std::int64_t v = cur.at(m, a) - next.at(m + 1, a + 1);
      if (v < 0) throw std::logic_error("deconvolve_v: not divisible by V");
      next.add(m, a, v);
    }
    BigradedDims check = next;
    for (const auto& [key, v] : next.cells()) check.add(key.first - 1, key.second - 1, v);
    if (!(check == cur)) throw std::logic_error("deconvolve_v: not divisible by V");
    cur = next;
  }
  return cur;
}

/// Shift that makes the Alexander support symmetric about 0.
inline int alexander_centering(const BigradedDims& hat) {
  if (hat.empty()) return 0;
  int lo = hat.cells().begin()->first.second, hi = lo;
  for (const auto& [key, v] : hat.cells()) {
    lo = std::min(lo, key.second);
    hi = std::max(hi, key.second);
  }
  if ((lo + hi) % 2 != 0) throw std::logic_error("alexander_centering: support has no integral centre");
  return -(lo + hi) / 2;
}

namespace grid_detail {

inline BigradedDims shift_alexander(const BigradedDims& b, int s) {
  BigradedDims out;
  for (const auto& [key, v] : b.cells()) out.add(key.first, key.second + s, v);
  return out;
}

}  // namespace grid_detail

/// Hat-flavour knot Floer homology, (M, A) -> dim, Alexander grading centred.
inline BigradedDims hat_hfk(const GridDiagram& g, const GridOptions& opt = {}) {
  grid_detail::check_size(g, opt.max_size_hat, "hat_hfk");
  const BigradedDims hat = deconvolve_v(tilde_hfk(g, opt), g.size - g.num_components());
  return grid_detail::shift_alexander(hat, alexander_centering(hat));
}

/// An F2[U]-module: free towers and torsion summands F2[U]/U^k, each listed
/// by the (M, A) grading of its generator.
struct MinusHFK {
  BigradedDims towers;
  std::map<int, BigradedDims> torsion;  // k -> generators of F2[U]/U^k
  int truncation = 8;

  /// dims of the module modulo U^d.
  BigradedDims truncated(int d) const {
    BigradedDims out;
    auto spread = [&](const BigradedDims& gens, int len) {
      for (const auto& [key, v] : gens.cells())
        for (int j = 0; j < len; ++j) out.add(key.first - 2 * j, key.second - j, v);
    };
    spread(towers, d);
    for (const auto& [k, gens] : torsion) spread(gens, std::min(k, d));
    return out;
  }
  BigradedDims truncated() const { return truncated(truncation); }

  /// Summands that look free modulo U^d: towers plus torsion of order >= d.
  BigradedDims apparent_towers(int d) const {
    BigradedDims out = towers;
    for (const auto& [k, gens] : torsion)
      if (k >= d)
        for (const auto& [key, v] : gens.cells()) out.add(key.first, key.second, v);
    return out;
  }
  /// The tower/torsion split is the same when read at U-powers d and d + 2.
  bool stable() const { return apparent_towers(truncation) == apparent_towers(truncation + 2); }

  std::int64_t torsion_rank() const {
    std::int64_t n = 0;
    for (const auto& [k, gens] : torsion) n += gens.total();
    return n;
  }
};

/// Homology of the minus complex with every U_i set to U, before removing
/// the V^{g-l} factor; gradings un-centred.
inline MinusHFK minus_homology_collapsed(const GridDiagram& g, const GridOptions& opt = {}) {
  grid_detail::check_size(g, opt.max_size_minus, "minus_hfk");
  const GridComplex cx = grid_complex(g, GridFlavor::Minus);
  // M - 2A is invariant under U and drops by one along the differential.
  std::vector<std::pair<int, int>> gens;
  for (std::size_t s = 0; s < cx.states.size(); ++s) gens.push_back({2 * cx.alexander[s] - cx.maslov[s], cx.alexander[s]});
  std::vector<std::tuple<int, int, F2>> entries;
  for (const auto& [s, t, k] : cx.edges) entries.push_back({s, t, F2(1)});
  const MonomialSmithForm snf = monomial_smith_form<F2>(gens, cx.alexander, entries);
  MinusHFK out;
  out.truncation = opt.truncation;
  for (const auto& [key, v] : snf.free.cells()) out.towers.add(2 * key.second - key.first, key.second, v);
  for (const auto& p : snf.pairs)
    if (p.exponent > 0) out.torsion[p.exponent].add(2 * p.grade_target - (p.degree + 1), p.grade_target, 1);
  return out;
}

inline MinusHFK minus_hfk(const GridDiagram& g, const GridOptions& opt = {}) {
  grid_detail::check_size(g, opt.max_size_minus, "minus_hfk");
  const MinusHFK raw = minus_homology_collapsed(g, opt);
  const int times = g.size - g.num_components();
  const int shift = alexander_centering(deconvolve_v(tilde_hfk(g, opt), times));
  MinusHFK out;
  out.truncation = opt.truncation;
  out.towers = grid_detail::shift_alexander(deconvolve_v(raw.towers, times), shift);
  for (const auto& [k, gens] : raw.torsion) {
    BigradedDims d = grid_detail::shift_alexander(deconvolve_v(gens, times), shift);
    if (!d.empty()) out.torsion[k] = d;
  }
  return out;
}

/// tau(K) is the Alexander grading of the tower generator of HFK^-(m(K)).
inline int tau(const GridDiagram& g, const GridOptions& opt = {}) {
  if (!g.is_knot()) throw GridError("tau: grid has " + std::to_string(g.num_components()) + " components");
  const MinusHFK m = minus_hfk(mirror(g), opt);
  if (m.towers.total() != 1) throw std::logic_error("tau: expected a single tower for a knot");
  return m.towers.cells().begin()->first.second;
}

inline DeltaGradedDims hfk_delta_collapse(const BigradedDims& hfk) {
  DeltaGradedDims out;
  for (const auto& [key, v] : hfk.cells()) out[key.second - key.first] += v;
  return out;
}

/// dim(m, a) = dim(m - 2a, -a).
inline bool conjugation_symmetric(const BigradedDims& hfk) {
  for (const auto& [key, v] : hfk.cells())
    if (hfk.at(key.first - 2 * key.second, -key.second) != v) return false;
  return true;
}

}  // namespace khmut

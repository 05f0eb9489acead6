#pragma once

// Slow, direct computations used as references by the tests. They share no
// code with the library beyond the basic containers.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "khmut/diagram.hpp"
#include "khmut/graded.hpp"
#include "khmut/grid.hpp"
#include "khmut/io.hpp"

namespace khmut {

// readable gtest failure messages
inline void PrintTo(const BigradedDims& b, std::ostream* os) { *os << "{" << format_table(b) << "}"; }
inline void PrintTo(const LaurentPoly& p, std::ostream* os) { *os << p.str("t"); }

}  // namespace khmut

namespace oracle {

using khmut::BigradedDims;
using khmut::LaurentPoly;

inline std::string fixture(const std::string& rel) { return std::string(KHMUT_SOURCE_DIR) + "/fixtures/" + rel; }
inline khmut::PlanarDiagram load(const std::string& rel) { return khmut::parse_pd(khmut::read_file(fixture(rel))); }
inline khmut::GridDiagram load_grid(const std::string& rel) {
  return khmut::grid_from_json(khmut::parse_json_text(khmut::read_file(fixture("grids/" + rel)), rel));
}

/// Corpus fixtures with their knot names.
inline std::vector<std::pair<std::string, khmut::PlanarDiagram>> corpus() {
  std::vector<std::pair<std::string, khmut::PlanarDiagram>> out;
  for (const char* n : {"3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3", "7_1", "7_4", "8_19", "8_20", "9_42", "10_124",
                        "10_132", "L2a1", "L4a1", "L6a4"})
    out.push_back({n, load(std::string("corpus/") + n + ".json")});
  return out;
}

/// |det| of an integer matrix by fraction-free elimination.
inline std::int64_t abs_det(std::vector<std::vector<__int128>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) m[i][k] = 0;
  }
  __int128 d = m[n - 1][n - 1] * sign;
  return static_cast<std::int64_t>(d < 0 ? -d : d);
}

/// Knot determinant from the Fox coloring matrix: each crossing gives
/// 2*over - under_in - under_out; delete one row and one column.
inline std::int64_t coloring_determinant(const khmut::PlanarDiagram& d) {
  const auto& xs = d.crossings();
  std::map<int, int> parent;
  std::function<int(int)> find = [&](int a) {
    if (!parent.count(a)) parent[a] = a;
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  for (const auto& x : xs) {
    for (int a : x) find(a);
    parent[find(x[1])] = find(x[3]);  // over-strand continues through the crossing
  }
  std::map<int, int> strand;
  for (const auto& [a, p] : parent) strand.emplace(find(a), static_cast<int>(strand.size()));
  const std::size_t n = xs.size();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> m(n, std::vector<__int128>(strand.size(), 0));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& x = xs[r];
    m[r][static_cast<std::size_t>(strand[find(x[1])])] += 2;
    m[r][static_cast<std::size_t>(strand[find(x[0])])] -= 1;
    m[r][static_cast<std::size_t>(strand[find(x[2])])] -= 1;
  }
  std::vector<std::vector<__int128>> minor;
  for (std::size_t r = 1; r < n; ++r) minor.push_back(std::vector<__int128>(m[r].begin() + 1, m[r].end()));
  return abs_det(minor);
}

// ---------------------------------------------------------------------------
// Grid homology by brute force.

struct Pt {
  int x2, y2;  // doubled coordinates
};

/// #{(p, q) : p in P, q in Q, p strictly south-west of q}
inline int sw_pairs(const std::vector<Pt>& P, const std::vector<Pt>& Q) {
  int n = 0;
  for (const auto& p : P)
    for (const auto& q : Q) n += (p.x2 < q.x2 && p.y2 < q.y2);
  return n;
}

inline int maslov_of(const std::vector<Pt>& s, const std::vector<Pt>& marks) {
  // J(a,b) = (I(a,b) + I(b,a)) / 2, doubled to stay integral.
  const int twice = 2 * sw_pairs(s, s) - 2 * (sw_pairs(s, marks) + sw_pairs(marks, s)) + 2 * sw_pairs(marks, marks) + 2;
  return twice / 2;
}

/// Cell (c, r) of the torus lies in the rectangle spanned from lattice
/// point (c0, r0) to (c1, r1), going right and up.
inline bool cell_in(int n, int c, int r, int c0, int r0, int c1, int r1) {
  const int w = ((c1 - c0) % n + n) % n, h = ((r1 - r0) % n + n) % n;
  const int dc = ((c - c0) % n + n) % n, dr = ((r - r0) % n + n) % n;
  return dc < w && dr < h;
}

/// Lattice point (c, r) lies strictly inside that rectangle.
inline bool point_inside(int n, int c, int r, int c0, int r0, int c1, int r1) {
  const int w = ((c1 - c0) % n + n) % n, h = ((r1 - r0) % n + n) % n;
  const int dc = ((c - c0) % n + n) % n, dr = ((r - r0) % n + n) % n;
  return dc > 0 && dc < w && dr > 0 && dr < h;
}

inline std::size_t f2_rank(std::vector<std::vector<std::uint8_t>> m) {
  std::size_t rank = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && !m[p][c]) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && m[r][c])
        for (std::size_t k = c; k < cols; ++k) m[r][k] ^= m[rank][k];
    ++rank;
  }
  return rank;
}

/// Tilde grid homology: all pairs of states differing in two columns, each
/// of the two torus rectangles checked cell by cell.
inline BigradedDims brute_tilde(const khmut::GridDiagram& g) {
  const int n = g.size;
  std::vector<Pt> os, xs;
  for (int c = 0; c < n; ++c) {
    os.push_back({2 * c + 1, 2 * g.O[c] + 1});
    xs.push_back({2 * c + 1, 2 * g.X[c] + 1});
  }
  const int l = g.num_components();
  std::vector<std::vector<int>> states;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do states.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<int> M, A;
  for (const auto& s : states) {
    std::vector<Pt> pts;
    for (int c = 0; c < n; ++c) pts.push_back({2 * c, 2 * s[c]});
    const int mo = maslov_of(pts, os), mx = maslov_of(pts, xs);
    M.push_back(mo);
    A.push_back((mo - mx - (n - l)) / 2);
  }
  std::map<std::pair<int, int>, std::vector<std::size_t>> block;  // (M, A) -> states
  for (std::size_t i = 0; i < states.size(); ++i) block[{M[i], A[i]}].push_back(i);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = i;
  // rank of d from block (m, a) to (m-1, a)
  auto block_rank = [&](int m, int a) -> std::size_t {
    auto src = block.find({m, a}), tgt = block.find({m - 1, a});
    if (src == block.end() || tgt == block.end()) return 0;
    std::map<std::size_t, std::size_t> col;
    for (std::size_t k = 0; k < tgt->second.size(); ++k) col[tgt->second[k]] = k;
    std::vector<std::vector<std::uint8_t>> mat;
    for (std::size_t si : src->second) {
      std::vector<std::uint8_t> row(tgt->second.size(), 0);
      const auto& x = states[si];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          bool ok = true;
          for (int c = 0; c < n && ok; ++c) {
            if (cell_in(n, c, g.O[c], i, x[i], j, x[j]) || cell_in(n, c, g.X[c], i, x[i], j, x[j])) ok = false;
            if (point_inside(n, c, x[c], i, x[i], j, x[j])) ok = false;
          }
          if (!ok) continue;
          std::vector<int> y = x;
          std::swap(y[i], y[j]);
          auto it = col.find(index[y]);
          if (it != col.end()) row[it->second] ^= 1;
        }
      mat.push_back(row);
    }
    return f2_rank(mat);
  };
  BigradedDims out;
  for (const auto& [key, gens] : block) {
    const auto [m, a] = key;
    const std::int64_t h = static_cast<std::int64_t>(gens.size()) - static_cast<std::int64_t>(block_rank(m, a)) -
                           static_cast<std::int64_t>(block_rank(m + 1, a));
    out.add(m, a, h);
  }
  return out;
}

/// Alexander polynomial (symmetric, Delta(1) = 1) from the winding-number
/// matrix of a knot grid: det(t^{-w(p)}) = +-t^k (1 - t)^{g-1} Delta(t).
inline LaurentPoly grid_alexander(const khmut::GridDiagram& g) {
  const int n = g.size;
  // winding number around lattice point (i, j): signed vertical strands to its left
  auto wind = [&](int i, int j) {
    int w = 0;
    for (int c = 0; c < i; ++c) {
      const int lo = std::min(g.O[c], g.X[c]), hi = std::max(g.O[c], g.X[c]);
      if (lo < j && j <= hi) w += (g.X[c] > g.O[c]) ? 1 : -1;
    }
    return w;
  };
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  LaurentPoly det;
  do {
    int sign = 1;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) sign = -sign;
    int e = 0;
    for (int i = 0; i < n; ++i) e -= wind(i, perm[i]);
    det.add(e, sign);
  } while (std::next_permutation(perm.begin(), perm.end()));
  LaurentPoly q = det;
  for (int k = 0; k < n - 1; ++k) q = q.divided_by(LaurentPoly{{0, 1}, {1, -1}});
  // centre and fix the sign
  const int shift = -(q.min_exp() + q.max_exp()) / 2;
  LaurentPoly c;
  std::int64_t at1 = 0;
  for (const auto& [e, v] : q.terms()) {
    c.add(e + shift, v);
    at1 += v;
  }
  if (at1 < 0) {
    LaurentPoly neg;
    for (const auto& [e, v] : c.terms()) neg.add(e, -v);
    c = neg;
  }
  return c;
}

/// sum (-1)^m dim(m, a) t^a
inline LaurentPoly hfk_euler(const BigradedDims& h) {
  LaurentPoly p;
  for (const auto& [key, v] : h.cells()) p.add(key.second, (key.first % 2 == 0) ? v : -v);
  return p;
}

/// dims of H(C / U^d) for the minus complex with all U_i equal, computed
/// directly over F2 on the truncated complex x U^j, j < d.
inline BigradedDims truncated_minus_brute(const khmut::GridDiagram& g, int d) {
  const khmut::GridComplex cx = khmut::grid_complex(g, khmut::GridFlavor::Minus);
  const std::size_t N = cx.states.size();
  auto gid = [&](std::size_t s, int j) { return s * static_cast<std::size_t>(d) + static_cast<std::size_t>(j); };
  std::vector<int> M(N * d), A(N * d);
  for (std::size_t s = 0; s < N; ++s)
    for (int j = 0; j < d; ++j) {
      M[gid(s, j)] = cx.maslov[s] - 2 * j;
      A[gid(s, j)] = cx.alexander[s] - j;
    }
  std::map<std::pair<int, int>, std::vector<std::size_t>> block;
  for (std::size_t k = 0; k < N * d; ++k) block[{M[k], A[k]}].push_back(k);
  std::vector<std::vector<std::size_t>> out(N * d);
  for (const auto& [s, t, k] : cx.edges)
    for (int j = 0; j + k < d; ++j) out[gid(s, j)].push_back(gid(t, j + k));
  auto block_rank = [&](int m, int a) -> std::size_t {
    auto src = block.find({m, a}), tgt = block.find({m - 1, a});
    if (src == block.end() || tgt == block.end()) return 0;
    std::map<std::size_t, std::size_t> col;
    for (std::size_t k = 0; k < tgt->second.size(); ++k) col[tgt->second[k]] = k;
    std::vector<std::vector<std::uint8_t>> mat;
    for (std::size_t s : src->second) {
      std::vector<std::uint8_t> row(tgt->second.size(), 0);
      for (std::size_t t : out[s]) row[col.at(t)] ^= 1;
      mat.push_back(row);
    }
    return f2_rank(mat);
  };
  BigradedDims res;
  for (const auto& [key, gens] : block) {
    const auto [m, a] = key;
    res.add(m, a, static_cast<std::int64_t>(gens.size()) - static_cast<std::int64_t>(block_rank(m, a)) -
                      static_cast<std::int64_t>(block_rank(m + 1, a)));
  }
  return res;
}

/// What a module sum F[U]_{gens} + sum F[U]/U^k predicts for H(C / U^d),
/// where C is free: a tower gives d classes, a pair y = U^{-k} dx gives k
/// classes at y and k at U^{d-k} x when k < d, and two towers' worth otherwise.
inline BigradedDims predicted_quotient(const khmut::MinusHFK& m, int d) {
  BigradedDims out;
  auto run = [&](int m0, int a0, int len, std::int64_t v) {
    for (int j = 0; j < len; ++j) out.add(m0 - 2 * j, a0 - j, v);
  };
  for (const auto& [key, v] : m.towers.cells()) run(key.first, key.second, d, v);
  for (const auto& [k, gens] : m.torsion)
    for (const auto& [key, v] : gens.cells()) {
      // x sits at (M(y) + 1 - 2k, A(y) - k)
      const int xm = key.first + 1 - 2 * k, xa = key.second - k;
      if (k < d) {
        run(key.first, key.second, k, v);
        run(xm - 2 * (d - k), xa - (d - k), k, v);
      } else {
        run(key.first, key.second, d, v);
        run(xm, xa, d, v);
      }
    }
  return out;
}

}  // namespace oracle

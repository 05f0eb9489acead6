#pragma once

// Crossing-by-crossing simplification of the Khovanov complex in Bar-Natan's
// dotted cobordism category with h = 0 and dot^2 = t.
//
// Objects are crossingless matchings of the boundary points of the partial
// tangle, with homological and quantum shifts. A morphism between matchings
// A and B is a combination of basis cobordisms: one disk per cycle of A u B,
// each disk with or without a dot. The power of t carried by a term is fixed
// by the gradings and is never stored.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "khmut/diagram.hpp"
#include "khmut/field.hpp"

namespace khmut {

class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CrossingOrder { Input, Greedy };

struct ScanOptions {
  bool reduced = false;
  bool formal_t = false;  // keep the Lee deformation (t of q-degree -4)
  CrossingOrder order = CrossingOrder::Input;
  std::vector<int> explicit_order;  // overrides `order` when nonempty
};

/// Final simplified complex: generators (i, q) before normalization, and the
/// differential entries (source, target, coefficient). With formal_t an entry
/// stands for coefficient * t^((q_target - q_source)/4).
template <ExactField F>
struct ScanResult {
  std::vector<std::pair<int, int>> gens;
  std::vector<std::tuple<int, int, F>> entries;
};

/// Greedy order: repeatedly take the crossing sharing the most arcs with the
/// processed part, preferring fewer new boundary points.
inline std::vector<int> greedy_crossing_order(const PlanarDiagram& d) {
  const int n = d.num_crossings();
  std::vector<int> order;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::map<int, int> open;  // arc -> number of processed endpoints
  for (int step = 0; step < n; ++step) {
    int best = -1, best_shared = -1, best_new = 1 << 30;
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      int shared = 0, fresh = 0;
      for (int a : d.crossings()[static_cast<std::size_t>(c)]) {
        auto it = open.find(a);
        if (it != open.end() && it->second == 1) ++shared;
        else ++fresh;
      }
      if (shared > best_shared || (shared == best_shared && fresh < best_new)) {
        best = c;
        best_shared = shared;
        best_new = fresh;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
    for (int a : d.crossings()[static_cast<std::size_t>(best)]) ++open[a];
  }
  return order;
}

namespace scan {

using Mask = std::uint64_t;

template <ExactField F>
using Morph = std::vector<std::pair<Mask, F>>;  // sorted by mask, nonzero coefficients

template <ExactField F>
void morph_add(Morph<F>& m, Mask k, const F& v) {
  if (v.is_zero()) return;
  auto it = std::lower_bound(m.begin(), m.end(), k, [](const auto& e, Mask key) { return e.first < key; });
  if (it != m.end() && it->first == k) {
    it->second += v;
    if (it->second.is_zero()) m.erase(it);
  } else {
    m.insert(it, {k, v});
  }
}

struct CycleInfo {
  std::vector<int> cycle_of;  // boundary point -> cycle index (ordered by least point)
  int count = 0;
};

inline CycleInfo cycles_of(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  CycleInfo ci;
  ci.cycle_of.assign(a.size(), -1);
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (ci.cycle_of[p] >= 0) continue;
    std::size_t cur = p;
    do {
      ci.cycle_of[cur] = ci.count;
      std::size_t mid = a[cur];
      ci.cycle_of[mid] = ci.count;
      cur = b[mid];
    } while (cur != p);
    ++ci.count;
  }
  return ci;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// A connected surface piece after gluing: Euler characteristic, dots, and the
// basis cycles it bounds.
struct Piece {
  int chi = 0;
  int dots = 0;
  std::vector<int> cycles;
};

/// Evaluates a product of connected pieces in the disk basis. Each piece of
/// genus g with k boundary circles and e dots equals 2^g times the sum over
/// dot placements x on its k disks of a closed sphere carrying e+g+(k-|x|)
/// dots; that sphere is 1 (times a power of t) when the count is odd, else 0.
template <ExactField F>
Morph<F> evaluate(const std::vector<Piece>& pieces, const F& coeff) {
  std::vector<std::pair<Mask, F>> acc{{0, coeff}};
  for (const Piece& pc : pieces) {
    const int k = static_cast<int>(pc.cycles.size());
    const int twice_genus = 2 - k - pc.chi;
    if (twice_genus < 0 || twice_genus % 2) throw std::logic_error("cobordism: inconsistent Euler characteristic");
    const int g = twice_genus / 2;
    F factor = F::one();
    for (int j = 0; j < g; ++j) factor = factor * F(2);
    if (factor.is_zero()) return {};
    std::vector<std::pair<Mask, F>> next;
    for (std::uint32_t x = 0; x < (1u << k); ++x) {
      const int undotted = k - std::popcount(x);
      if ((pc.dots + g + undotted) % 2 == 0) continue;
      Mask add = 0;
      for (int j = 0; j < k; ++j)
        if (x >> j & 1u) add |= Mask{1} << pc.cycles[static_cast<std::size_t>(j)];
      for (const auto& [m, c] : acc) next.push_back({m | add, c * factor});
    }
    acc.swap(next);
    if (acc.empty()) return {};
  }
  Morph<F> out;
  for (const auto& [m, c] : acc) morph_add(out, m, c);
  return out;
}

}  // namespace scan

/// Runs the scanning algorithm and returns the simplified complex.
template <ExactField F>
class Scanner {
 public:
  Scanner(const PlanarDiagram& d, ScanOptions opt) : d_(d), opt_(std::move(opt)) {
    if (opt_.reduced && opt_.formal_t) throw std::invalid_argument("reduced Lee complex is not supported");
    arcs_ = d.num_arcs();
    order_ = !opt_.explicit_order.empty() ? opt_.explicit_order
             : opt_.order == CrossingOrder::Greedy ? greedy_crossing_order(d)
                                                   : identity_order(d.num_crossings());
    if (static_cast<int>(order_.size()) != d.num_crossings()) throw std::invalid_argument("crossing order has wrong length");
    if (opt_.reduced && d.num_crossings() > 0 && !d.basepoint()) throw std::invalid_argument("reduced homology needs a basepoint");
    bp_ = opt_.reduced && d.num_crossings() > 0 ? d.arc_index(*d.basepoint()) : -1;
  }

  ScanResult<F> run() {
    init();
    std::vector<bool> seen(static_cast<std::size_t>(d_.num_crossings()), false);
    for (int c : order_) {
      if (c < 0 || c >= d_.num_crossings() || seen[static_cast<std::size_t>(c)]) throw std::invalid_argument("crossing order is not a permutation");
      seen[static_cast<std::size_t>(c)] = true;
      add_crossing(c);
      simplify();
    }
    return finish();
  }

  /// Peak number of objects seen during the scan (diagnostics).
  std::size_t peak_objects() const { return peak_; }

 private:
  using Mask = scan::Mask;
  using Morph = scan::Morph<F>;
  using Matching = std::vector<std::uint8_t>;

  struct Obj {
    int h = 0;
    int q = 0;
    int m = 0;
    bool alive = true;
  };

  const PlanarDiagram& d_;
  ScanOptions opt_;
  int arcs_ = 0;
  int bp_ = -1;
  int bp_halves_seen_ = 0;
  std::vector<int> order_;
  std::size_t peak_ = 0;

  std::vector<int> boundary_;  // sorted point ids
  std::vector<Matching> matchings_;
  std::map<Matching, int> matching_ids_;
  std::unordered_map<std::uint64_t, scan::CycleInfo> cycle_cache_;

  std::vector<Obj> obj_;
  std::vector<std::unordered_map<int, Morph>> out_;
  std::vector<std::unordered_set<int>> in_;

  static std::vector<int> identity_order(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
  }

  int intern(const Matching& m) {
    auto [it, fresh] = matching_ids_.try_emplace(m, static_cast<int>(matchings_.size()));
    if (fresh) matchings_.push_back(m);
    return it->second;
  }

  const scan::CycleInfo& cycles(int a, int b) {
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    auto it = cycle_cache_.find(key);
    if (it != cycle_cache_.end()) return it->second;
    return cycle_cache_.emplace(key, scan::cycles_of(matchings_[static_cast<std::size_t>(a)], matchings_[static_cast<std::size_t>(b)])).first->second;
  }

  int new_object(int h, int q, int m) {
    obj_.push_back(Obj{h, q, m, true});
    out_.emplace_back();
    in_.emplace_back();
    return static_cast<int>(obj_.size()) - 1;
  }

  void set_entry(int s, int t, Morph m) {
    if (m.empty()) return;
    out_[static_cast<std::size_t>(s)][t] = std::move(m);
    in_[static_cast<std::size_t>(t)].insert(s);
  }

  int alive_count() const {
    int n = 0;
    for (const auto& o : obj_) n += o.alive;
    return n;
  }

  void init() {
    boundary_.clear();
    matchings_.clear();
    matching_ids_.clear();
    cycle_cache_.clear();
    obj_.clear();
    out_.clear();
    in_.clear();
    const int m0 = intern({});
    int loops = d_.free_loops();
    if (opt_.reduced && d_.num_crossings() == 0) --loops;  // the marked loop
    for (int lab = 0; lab < (1 << loops); ++lab) {
      int q = 0;
      for (int j = 0; j < loops; ++j) q += (lab >> j & 1) ? -1 : 1;
      new_object(0, q, m0);
    }
  }

  // --- extending by one crossing -----------------------------------------

  enum SlotKind { kGlue, kSelf, kNew };

  struct StepInfo {
    std::array<SlotKind, 4> kind{};
    std::array<int, 4> glue_point{};  // old boundary index
    std::array<int, 4> self_partner{};
    std::array<int, 4> new_index{};  // new boundary index
    std::vector<int> old_to_new;     // old boundary index -> new index or -1
    std::vector<std::pair<int, int>> new_origin;  // new index -> (0, old idx) | (1, slot)
    int new_size = 0;
  };

  // A traversal result: new matching plus closed loops. A loop is represented
  // by one old boundary point on it, or by a crossing slot.
  struct Ext {
    int n = 0;
    std::vector<std::pair<int, int>> loops;  // (0, old idx) | (1, slot)
  };

  StepInfo step_info(int c) {
    StepInfo si;
    const auto& t = d_.crossings()[static_cast<std::size_t>(c)];
    std::vector<int> new_ids;
    std::array<int, 4> ids{};
    for (int k = 0; k < 4; ++k) {
      const int arc = d_.arc_index(t[static_cast<std::size_t>(k)]);
      if (arc == bp_) {
        si.kind[static_cast<std::size_t>(k)] = kNew;
        ids[static_cast<std::size_t>(k)] = arcs_ + bp_halves_seen_++;
        continue;
      }
      int other = -1;
      for (int k2 = 0; k2 < 4; ++k2)
        if (k2 != k && t[static_cast<std::size_t>(k2)] == t[static_cast<std::size_t>(k)]) other = k2;
      if (other >= 0) {
        si.kind[static_cast<std::size_t>(k)] = kSelf;
        si.self_partner[static_cast<std::size_t>(k)] = other;
        continue;
      }
      auto it = std::lower_bound(boundary_.begin(), boundary_.end(), arc);
      if (it != boundary_.end() && *it == arc) {
        si.kind[static_cast<std::size_t>(k)] = kGlue;
        si.glue_point[static_cast<std::size_t>(k)] = static_cast<int>(it - boundary_.begin());
      } else {
        si.kind[static_cast<std::size_t>(k)] = kNew;
        ids[static_cast<std::size_t>(k)] = arc;
      }
    }
    std::vector<bool> glued(boundary_.size(), false);
    for (int k = 0; k < 4; ++k)
      if (si.kind[static_cast<std::size_t>(k)] == kGlue) glued[static_cast<std::size_t>(si.glue_point[static_cast<std::size_t>(k)])] = true;
    std::vector<std::pair<int, std::pair<int, int>>> merged;  // id -> origin
    for (std::size_t p = 0; p < boundary_.size(); ++p)
      if (!glued[p]) merged.push_back({boundary_[p], {0, static_cast<int>(p)}});
    for (int k = 0; k < 4; ++k)
      if (si.kind[static_cast<std::size_t>(k)] == kNew) merged.push_back({ids[static_cast<std::size_t>(k)], {1, k}});
    std::sort(merged.begin(), merged.end());
    si.old_to_new.assign(boundary_.size(), -1);
    std::vector<int> nb;
    for (std::size_t j = 0; j < merged.size(); ++j) {
      nb.push_back(merged[j].first);
      si.new_origin.push_back(merged[j].second);
      if (merged[j].second.first == 0) si.old_to_new[static_cast<std::size_t>(merged[j].second.second)] = static_cast<int>(j);
      else si.new_index[static_cast<std::size_t>(merged[j].second.second)] = static_cast<int>(j);
    }
    si.new_size = static_cast<int>(nb.size());
    if (si.new_size > 64) throw SizeGuardError("scan: boundary exceeds 64 points; try a different crossing order");
    next_boundary_ = std::move(nb);
    return si;
  }

  std::vector<int> next_boundary_;

  // Nodes: old boundary points [0, P) and slots [P, P+4).
  Ext extend(const StepInfo& si, const Matching& m, int s, std::vector<Matching>& new_table, std::map<Matching, int>& new_ids) {
    const int P = static_cast<int>(boundary_.size());
    const int N = P + 4;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::array<int, 2>> inc(static_cast<std::size_t>(N), {-1, -1});
    auto link = [&](int a, int b) {
      const int e = static_cast<int>(edges.size());
      edges.push_back({a, b});
      for (int x : {a, b}) {
        auto& slot = inc[static_cast<std::size_t>(x)];
        (slot[0] < 0 ? slot[0] : slot[1]) = e;
      }
    };
    for (int p = 0; p < P; ++p)
      if (p < m[static_cast<std::size_t>(p)]) link(p, m[static_cast<std::size_t>(p)]);
    for (auto [x, y] : PlanarDiagram::smoothing_pairs(s)) link(P + x, P + y);
    for (int k = 0; k < 4; ++k) {
      if (si.kind[static_cast<std::size_t>(k)] == kGlue) link(si.glue_point[static_cast<std::size_t>(k)], P + k);
      if (si.kind[static_cast<std::size_t>(k)] == kSelf && k < si.self_partner[static_cast<std::size_t>(k)]) link(P + k, P + si.self_partner[static_cast<std::size_t>(k)]);
    }
    auto endpoint_index = [&](int node) -> int {
      if (node < P) return si.old_to_new[static_cast<std::size_t>(node)];
      return si.kind[static_cast<std::size_t>(node - P)] == kNew ? si.new_index[static_cast<std::size_t>(node - P)] : -1;
    };
    auto other = [&](int e, int node) { return edges[static_cast<std::size_t>(e)].first == node ? edges[static_cast<std::size_t>(e)].second : edges[static_cast<std::size_t>(e)].first; };
    std::vector<bool> used(edges.size(), false);
    Matching nm(static_cast<std::size_t>(si.new_size), 0);
    for (int start = 0; start < N; ++start) {
      const int e0 = endpoint_index(start);
      if (e0 < 0) continue;
      int e = inc[static_cast<std::size_t>(start)][0];
      if (used[static_cast<std::size_t>(e)]) continue;
      int cur = start;
      for (;;) {
        used[static_cast<std::size_t>(e)] = true;
        cur = other(e, cur);
        if (endpoint_index(cur) >= 0) break;
        const auto& ie = inc[static_cast<std::size_t>(cur)];
        e = ie[0] == e ? ie[1] : ie[0];
      }
      const int e1 = endpoint_index(cur);
      nm[static_cast<std::size_t>(e0)] = static_cast<std::uint8_t>(e1);
      nm[static_cast<std::size_t>(e1)] = static_cast<std::uint8_t>(e0);
    }
    Ext ext;
    for (std::size_t e0 = 0; e0 < edges.size(); ++e0) {
      if (used[e0]) continue;
      // closed loop
      const int start = edges[e0].first;
      ext.loops.push_back(start < P ? std::make_pair(0, start) : std::make_pair(1, start - P));
      int e = static_cast<int>(e0), cur = start;
      do {
        used[static_cast<std::size_t>(e)] = true;
        cur = other(e, cur);
        const auto& ie = inc[static_cast<std::size_t>(cur)];
        e = ie[0] == e ? ie[1] : ie[0];
      } while (!used[static_cast<std::size_t>(e)]);
    }
    auto [it, fresh] = new_ids.try_emplace(nm, static_cast<int>(new_table.size()));
    if (fresh) new_table.push_back(nm);
    ext.n = it->second;
    return ext;
  }

  // Builds the morphism (f tensor piece) between delooped objects.
  // pieces_of_slot maps slots to crossing pieces: two strips (identity of a
  // smoothing) or one saddle.
  struct GlueShape {
    int ncomp = 0;
    std::vector<int> comp_of_fcycle;
    std::vector<int> comp_of_piece;
    std::vector<int> chi;  // before capping loops
  };

  GlueShape glue_shape(const StepInfo& si, const scan::CycleInfo& fc, const std::array<int, 4>& piece_of_slot, int npieces) {
    const int nf = fc.count;
    scan::UnionFind uf(nf + npieces);
    std::vector<int> glue_at;  // node whose component loses 1 from chi
    for (int k = 0; k < 4; ++k) {
      const int pk = nf + piece_of_slot[static_cast<std::size_t>(k)];
      if (si.kind[static_cast<std::size_t>(k)] == kGlue) {
        uf.unite(fc.cycle_of[static_cast<std::size_t>(si.glue_point[static_cast<std::size_t>(k)])], pk);
        glue_at.push_back(pk);
      } else if (si.kind[static_cast<std::size_t>(k)] == kSelf && k < si.self_partner[static_cast<std::size_t>(k)]) {
        uf.unite(pk, nf + piece_of_slot[static_cast<std::size_t>(si.self_partner[static_cast<std::size_t>(k)])]);
        glue_at.push_back(pk);
      }
    }
    GlueShape gs;
    std::map<int, int> ids;
    auto cid = [&](int node) {
      auto [it, fresh] = ids.try_emplace(uf.find(node), static_cast<int>(ids.size()));
      if (fresh) gs.chi.push_back(0);
      return it->second;
    };
    for (int j = 0; j < nf; ++j) {
      int c = cid(j);
      gs.comp_of_fcycle.push_back(c);
      gs.chi[static_cast<std::size_t>(c)] += 1;
    }
    for (int j = 0; j < npieces; ++j) {
      int c = cid(nf + j);
      gs.comp_of_piece.push_back(c);
      gs.chi[static_cast<std::size_t>(c)] += 1;
    }
    for (int node : glue_at) gs.chi[static_cast<std::size_t>(cid(node))] -= 1;
    gs.ncomp = static_cast<int>(ids.size());
    return gs;
  }

  int t_power_times4(int ncyc, int bsize, Mask mask, int q1, int q2) const {
    return ncyc - bsize / 2 - 2 * std::popcount(mask) - q1 + q2;
  }

  // Drops terms with a positive power of t unless the deformation is kept.
  void filter_t(Morph& m, int ncyc, int bsize, int q1, int q2) const {
    std::erase_if(m, [&](const auto& e) {
      const int k4 = t_power_times4(ncyc, bsize, e.first, q1, q2);
      if (k4 < 0 || k4 % 4) throw std::logic_error("cobordism: inhomogeneous morphism");
      return !opt_.formal_t && k4 > 0;
    });
  }

  void add_crossing(int c) {
    const StepInfo si = step_info(c);
    std::vector<Matching> new_table;
    std::map<Matching, int> new_ids;

    // Extension data per (old matching, smoothing).
    std::map<std::pair<int, int>, Ext> ext_cache;
    auto ext_of = [&](int m, int s) -> const Ext& {
      auto key = std::make_pair(m, s);
      auto it = ext_cache.find(key);
      if (it == ext_cache.end()) it = ext_cache.emplace(key, extend(si, matchings_[static_cast<std::size_t>(m)], s, new_table, new_ids)).first;
      return it->second;
    };

    // New objects.
    std::vector<Obj> nobj;
    std::vector<std::array<std::vector<int>, 2>> images(obj_.size());
    for (std::size_t o = 0; o < obj_.size(); ++o) {
      if (!obj_[o].alive) continue;
      for (int s = 0; s < 2; ++s) {
        const Ext& e = ext_of(obj_[o].m, s);
        const int L = static_cast<int>(e.loops.size());
        for (int lab = 0; lab < (1 << L); ++lab) {
          int q = obj_[o].q + s;
          for (int j = 0; j < L; ++j) q += (lab >> j & 1) ? -1 : 1;  // bit set: X
          images[o][static_cast<std::size_t>(s)].push_back(static_cast<int>(nobj.size()));
          nobj.push_back(Obj{obj_[o].h + s, q, e.n, true});
        }
      }
    }

    std::vector<std::unordered_map<int, Morph>> nout(nobj.size());
    std::vector<std::unordered_set<int>> nin(nobj.size());

    auto new_cycles = [&](int a, int b) {
      return scan::cycles_of(new_table[static_cast<std::size_t>(a)], new_table[static_cast<std::size_t>(b)]);
    };

    // Shared routine for both kinds of maps.
    auto emit = [&](int o1, int o2, int s1, int s2, const scan::CycleInfo& fc, const Morph& f, const F& sign,
                    const std::array<int, 4>& piece_of_slot, int npieces) {
      const Ext& e1 = ext_of(obj_[static_cast<std::size_t>(o1)].m, s1);
      const Ext& e2 = ext_of(obj_[static_cast<std::size_t>(o2)].m, s2);
      const GlueShape gs = glue_shape(si, fc, piece_of_slot, npieces);
      auto comp_of_rep = [&](const std::pair<int, int>& rep) {
        if (rep.first == 0) return gs.comp_of_fcycle[static_cast<std::size_t>(fc.cycle_of[static_cast<std::size_t>(rep.second)])];
        return gs.comp_of_piece[static_cast<std::size_t>(piece_of_slot[static_cast<std::size_t>(rep.second)])];
      };
      const scan::CycleInfo nc = new_cycles(e1.n, e2.n);
      std::vector<int> comp_of_ncycle(static_cast<std::size_t>(nc.count), -1);
      for (int p = 0; p < si.new_size; ++p) {
        const int j = nc.cycle_of[static_cast<std::size_t>(p)];
        if (comp_of_ncycle[static_cast<std::size_t>(j)] >= 0) continue;
        comp_of_ncycle[static_cast<std::size_t>(j)] = comp_of_rep(si.new_origin[static_cast<std::size_t>(p)]);
      }
      std::vector<int> chi = gs.chi;
      std::vector<int> loop1_comp, loop2_comp;
      for (const auto& r : e1.loops) {
        loop1_comp.push_back(comp_of_rep(r));
        chi[static_cast<std::size_t>(loop1_comp.back())] += 1;
      }
      for (const auto& r : e2.loops) {
        loop2_comp.push_back(comp_of_rep(r));
        chi[static_cast<std::size_t>(loop2_comp.back())] += 1;
      }
      std::vector<scan::Piece> base(static_cast<std::size_t>(gs.ncomp));
      for (int j = 0; j < gs.ncomp; ++j) base[static_cast<std::size_t>(j)].chi = chi[static_cast<std::size_t>(j)];
      for (int j = 0; j < nc.count; ++j) base[static_cast<std::size_t>(comp_of_ncycle[static_cast<std::size_t>(j)])].cycles.push_back(j);

      const auto& im1 = images[static_cast<std::size_t>(o1)][static_cast<std::size_t>(s1)];
      const auto& im2 = images[static_cast<std::size_t>(o2)][static_cast<std::size_t>(s2)];
      for (std::size_t l1 = 0; l1 < im1.size(); ++l1)
        for (std::size_t l2 = 0; l2 < im2.size(); ++l2) {
          const int n1 = im1[l1], n2 = im2[l2];
          Morph total;
          for (const auto& [mask, coeff] : f) {
            std::vector<scan::Piece> pcs = base;
            for (int j = 0; j < fc.count; ++j)
              if (mask >> j & 1u) pcs[static_cast<std::size_t>(gs.comp_of_fcycle[static_cast<std::size_t>(j)])].dots += 1;
            for (std::size_t j = 0; j < loop1_comp.size(); ++j)
              if (l1 >> j & 1u) pcs[static_cast<std::size_t>(loop1_comp[j])].dots += 1;  // X: dotted cup
            for (std::size_t j = 0; j < loop2_comp.size(); ++j)
              if (!(l2 >> j & 1u)) pcs[static_cast<std::size_t>(loop2_comp[j])].dots += 1;  // 1: dotted cap
            for (const auto& [m2, c2] : scan::evaluate<F>(pcs, coeff * sign)) scan::morph_add(total, m2, c2);
          }
          filter_t(total, nc.count, si.new_size, nobj[static_cast<std::size_t>(n1)].q, nobj[static_cast<std::size_t>(n2)].q);
          if (total.empty()) continue;
          auto& slot = nout[static_cast<std::size_t>(n1)][n2];
          for (const auto& [m2, c2] : total) scan::morph_add(slot, m2, c2);
          if (slot.empty()) nout[static_cast<std::size_t>(n1)].erase(n2);
          else nin[static_cast<std::size_t>(n2)].insert(n1);
        }
    };

    // Old differential tensored with the identity of each smoothing.
    for (int s = 0; s < 2; ++s) {
      std::array<int, 4> strips{};
      auto pairs = PlanarDiagram::smoothing_pairs(s);
      for (int j = 0; j < 2; ++j) {
        strips[static_cast<std::size_t>(pairs[static_cast<std::size_t>(j)].first)] = j;
        strips[static_cast<std::size_t>(pairs[static_cast<std::size_t>(j)].second)] = j;
      }
      for (std::size_t o1 = 0; o1 < obj_.size(); ++o1) {
        if (!obj_[o1].alive) continue;
        for (const auto& [o2, f] : out_[o1]) {
          const scan::CycleInfo& fc = cycles(obj_[o1].m, obj_[static_cast<std::size_t>(o2)].m);
          emit(static_cast<int>(o1), o2, s, s, fc, f, F::one(), strips, 2);
        }
      }
    }
    // Saddles, with the Koszul sign.
    const std::array<int, 4> saddle{0, 0, 0, 0};
    for (std::size_t o = 0; o < obj_.size(); ++o) {
      if (!obj_[o].alive) continue;
      const scan::CycleInfo& fc = cycles(obj_[o].m, obj_[o].m);
      const Morph id{{Mask{0}, F::one()}};
      const F sign = (obj_[o].h % 2 == 0) ? F::one() : -F::one();
      emit(static_cast<int>(o), static_cast<int>(o), 0, 1, fc, id, sign, saddle, 1);
    }

    boundary_ = next_boundary_;
    matchings_ = std::move(new_table);
    matching_ids_ = std::move(new_ids);
    cycle_cache_.clear();
    obj_ = std::move(nobj);
    out_ = std::move(nout);
    in_ = std::move(nin);
    peak_ = std::max(peak_, obj_.size());
  }

  // --- simplification -------------------------------------------------------

  std::optional<F> iso_coeff(int s, int t) const {
    const Obj& a = obj_[static_cast<std::size_t>(s)];
    const Obj& b = obj_[static_cast<std::size_t>(t)];
    if (a.m != b.m || a.q != b.q) return std::nullopt;
    const auto& row = out_[static_cast<std::size_t>(s)];
    auto it = row.find(t);
    if (it == row.end()) return std::nullopt;
    for (const auto& [mask, c] : it->second)
      if (mask == 0) return c;
    return std::nullopt;
  }

  // g o f for f: A -> B, g: B -> C, on the current boundary.
  Morph compose(const Morph& g, const Morph& f, int a, int b, int c, int qa, int qc) {
    const auto& ab = cycles(a, b);
    const auto& bc = cycles(b, c);
    const auto ac = scan::cycles_of(matchings_[static_cast<std::size_t>(a)], matchings_[static_cast<std::size_t>(c)]);
    const auto& mb = matchings_[static_cast<std::size_t>(b)];
    scan::UnionFind uf(ab.count + bc.count);
    std::vector<int> glue_node;
    for (std::size_t p = 0; p < mb.size(); ++p) {
      if (static_cast<int>(p) > mb[p]) continue;
      uf.unite(ab.cycle_of[p], ab.count + bc.cycle_of[p]);
      glue_node.push_back(ab.cycle_of[p]);
    }
    std::map<int, int> ids;
    std::vector<int> chi;
    auto cid = [&](int node) {
      auto [it, fresh] = ids.try_emplace(uf.find(node), static_cast<int>(ids.size()));
      if (fresh) chi.push_back(0);
      return it->second;
    };
    std::vector<int> comp_ab, comp_bc;
    for (int j = 0; j < ab.count; ++j) {
      comp_ab.push_back(cid(j));
      chi[static_cast<std::size_t>(comp_ab.back())] += 1;
    }
    for (int j = 0; j < bc.count; ++j) {
      comp_bc.push_back(cid(ab.count + j));
      chi[static_cast<std::size_t>(comp_bc.back())] += 1;
    }
    for (int node : glue_node) chi[static_cast<std::size_t>(cid(node))] -= 1;
    std::vector<scan::Piece> base(ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) base[j].chi = chi[j];
    std::vector<int> seen(static_cast<std::size_t>(ac.count), 0);
    for (std::size_t p = 0; p < mb.size(); ++p) {
      const int j = ac.cycle_of[p];
      if (seen[static_cast<std::size_t>(j)]++) continue;
      base[static_cast<std::size_t>(comp_ab[static_cast<std::size_t>(ab.cycle_of[p])])].cycles.push_back(j);
    }
    Morph out;
    for (const auto& [mf, cf] : f)
      for (const auto& [mg, cg] : g) {
        std::vector<scan::Piece> pcs = base;
        for (int j = 0; j < ab.count; ++j)
          if (mf >> j & 1u) pcs[static_cast<std::size_t>(comp_ab[static_cast<std::size_t>(j)])].dots += 1;
        for (int j = 0; j < bc.count; ++j)
          if (mg >> j & 1u) pcs[static_cast<std::size_t>(comp_bc[static_cast<std::size_t>(j)])].dots += 1;
        for (const auto& [m, v] : scan::evaluate<F>(pcs, cf * cg)) scan::morph_add(out, m, v);
      }
    filter_t(out, ac.count, static_cast<int>(boundary_.size()), qa, qc);
    return out;
  }

  void eliminate(int b1, int b2, const F& phi, std::vector<std::pair<int, int>>& work) {
    const F minus_inv = -phi.inverse();
    std::vector<int> sources, targets;
    for (int x : in_[static_cast<std::size_t>(b2)])
      if (x != b1) sources.push_back(x);
    for (const auto& [y, g] : out_[static_cast<std::size_t>(b1)])
      if (y != b2) targets.push_back(y);
    const int mb = obj_[static_cast<std::size_t>(b2)].m;
    for (int x : sources) {
      const Morph delta = out_[static_cast<std::size_t>(x)].at(b2);
      for (int y : targets) {
        const Morph& gamma = out_[static_cast<std::size_t>(b1)].at(y);
        Morph corr = compose(gamma, delta, obj_[static_cast<std::size_t>(x)].m, mb, obj_[static_cast<std::size_t>(y)].m,
                             obj_[static_cast<std::size_t>(x)].q, obj_[static_cast<std::size_t>(y)].q);
        if (corr.empty()) continue;
        auto& slot = out_[static_cast<std::size_t>(x)][y];
        for (const auto& [m, v] : corr) scan::morph_add(slot, m, v * minus_inv);
        if (slot.empty()) {
          out_[static_cast<std::size_t>(x)].erase(y);
          in_[static_cast<std::size_t>(y)].erase(x);
        } else {
          in_[static_cast<std::size_t>(y)].insert(x);
          work.push_back({x, y});
        }
      }
    }
    for (int b : {b1, b2}) {
      for (const auto& [y, g] : out_[static_cast<std::size_t>(b)]) in_[static_cast<std::size_t>(y)].erase(b);
      for (int x : in_[static_cast<std::size_t>(b)]) out_[static_cast<std::size_t>(x)].erase(b);
      out_[static_cast<std::size_t>(b)].clear();
      in_[static_cast<std::size_t>(b)].clear();
      obj_[static_cast<std::size_t>(b)].alive = false;
    }
  }

  void simplify() {
    std::vector<std::pair<int, int>> work;
    for (std::size_t s = 0; s < obj_.size(); ++s)
      for (const auto& [t, m] : out_[s]) work.push_back({static_cast<int>(s), t});
    // Cheapest pivots first: small fan-in times fan-out.
    auto cost = [&](const std::pair<int, int>& e) {
      return in_[static_cast<std::size_t>(e.second)].size() * out_[static_cast<std::size_t>(e.first)].size();
    };
    std::sort(work.begin(), work.end(), [&](const auto& a, const auto& b) { return cost(a) > cost(b); });
    while (!work.empty()) {
      auto [s, t] = work.back();
      work.pop_back();
      if (!obj_[static_cast<std::size_t>(s)].alive || !obj_[static_cast<std::size_t>(t)].alive) continue;
      auto phi = iso_coeff(s, t);
      if (!phi) continue;
      eliminate(s, t, *phi, work);
    }
    compact();
  }

  void compact() {
    std::vector<int> remap(obj_.size(), -1);
    std::vector<Obj> nobj;
    for (std::size_t o = 0; o < obj_.size(); ++o)
      if (obj_[o].alive) {
        remap[o] = static_cast<int>(nobj.size());
        nobj.push_back(obj_[o]);
      }
    std::vector<std::unordered_map<int, Morph>> nout(nobj.size());
    std::vector<std::unordered_set<int>> nin(nobj.size());
    for (std::size_t o = 0; o < obj_.size(); ++o) {
      if (remap[o] < 0) continue;
      for (auto& [t, m] : out_[o]) {
        nout[static_cast<std::size_t>(remap[o])][remap[static_cast<std::size_t>(t)]] = std::move(m);
        nin[static_cast<std::size_t>(remap[static_cast<std::size_t>(t)])].insert(remap[o]);
      }
    }
    obj_ = std::move(nobj);
    out_ = std::move(nout);
    in_ = std::move(nin);
  }

  ScanResult<F> finish() {
    ScanResult<F> r;
    for (const auto& o : obj_) {
      // In reduced mode the two basepoint halves remain; the marked arc has
      // endomorphisms id and dot, and dot is set to zero.
      r.gens.push_back({o.h, o.q});
    }
    for (std::size_t s = 0; s < obj_.size(); ++s)
      for (const auto& [t, m] : out_[s])
        for (const auto& [mask, c] : m)
          if (mask == 0) r.entries.push_back({static_cast<int>(s), t, c});
    return r;
  }
};

template <ExactField F>
ScanResult<F> scan_complex(const PlanarDiagram& d, const ScanOptions& opt = {}) {
  return Scanner<F>(d, opt).run();
}

}  // namespace khmut

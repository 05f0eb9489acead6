#pragma once

// Khovanov homology: gradings, normalization, the naive cube complex, and the
// simplifying pipeline.
//
// Conventions: a circle labelled 1 has q-degree +1 and one labelled x has -1;
// the vertex weight |v| is added to q and is the homological degree.
// Kh(D) = Kh^(D)[-n_-]{n_+ - 2n_-}, i.e. (i, q) -> (i - n_-, q + n_+ - 2n_-).

#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "khmut/chain_complex.hpp"
#include "khmut/cobordism.hpp"
#include "khmut/diagram.hpp"
#include "khmut/field.hpp"
#include "khmut/graded.hpp"

namespace khmut {

struct KhOptions {
  CrossingOrder order = CrossingOrder::Input;
  std::vector<int> explicit_order;
  int max_crossings = 28;
};

inline ShiftSpec normalization_shift(const PlanarDiagram& d) {
  return ShiftSpec{-d.n_minus(), d.n_plus() - 2 * d.n_minus()};
}

namespace detail {

inline void check_size(const PlanarDiagram& d, int bound) {
  if (d.num_crossings() > bound)
    throw SizeGuardError("diagram has " + std::to_string(d.num_crossings()) + " crossings; the bound is " +
                         std::to_string(bound));
}

template <ExactField F>
BigradedDims scan_homology(const PlanarDiagram& d, bool reduced, const KhOptions& opt) {
  check_size(d, opt.max_crossings);
  ScanOptions so;
  so.reduced = reduced;
  so.order = opt.order;
  so.explicit_order = opt.explicit_order;
  ScanResult<F> r = scan_complex<F>(d, so);
  GradedChainComplex<F> c;
  std::vector<int> local(r.gens.size());
  for (std::size_t g = 0; g < r.gens.size(); ++g) local[g] = c.add_generator(r.gens[g].first, r.gens[g].second);
  for (const auto& [s, t, v] : r.entries) {
    const int i = r.gens[static_cast<std::size_t>(s)].first;
    if (r.gens[static_cast<std::size_t>(t)].first != i + 1) throw std::logic_error("scan: differential of wrong degree");
    c.add_differential(i, local[static_cast<std::size_t>(s)], local[static_cast<std::size_t>(t)], v);
  }
  return homology_dims(c);
}

}  // namespace detail

/// Homology of the cube complex before the overall normalization shift.
template <ExactField F>
BigradedDims unnormalized_kh(const PlanarDiagram& d, const KhOptions& opt = {}) {
  return detail::scan_homology<F>(d, false, opt);
}

template <ExactField F>
BigradedDims kh(const PlanarDiagram& d, const KhOptions& opt = {}) {
  return unnormalized_kh<F>(d, opt).shifted(normalization_shift(d));
}

/// Reduced homology at the diagram's basepoint, normalized so that the
/// unknot gives a single generator at (0, 0).
template <ExactField F>
BigradedDims reduced_kh(const PlanarDiagram& d, const KhOptions& opt = {}) {
  if (d.num_crossings() > 0 && !d.basepoint()) throw std::invalid_argument("reduced_kh: missing basepoint");
  return detail::scan_homology<F>(d, true, opt).shifted(normalization_shift(d));
}

inline BigradedDims kh(const PlanarDiagram& d, Ring r, const KhOptions& opt = {}) {
  return r == Ring::Q ? kh<Rational>(d, opt) : kh<F2>(d, opt);
}
inline BigradedDims reduced_kh(const PlanarDiagram& d, Ring r, const KhOptions& opt = {}) {
  return r == Ring::Q ? reduced_kh<Rational>(d, opt) : reduced_kh<F2>(d, opt);
}

// ---------------------------------------------------------------------------
// Naive cube of resolutions; exponential, kept as a test oracle.

/// One generator of the naive cube: a vertex and a labelling of its circles.
struct CubeGenerator {
  std::uint32_t vertex = 0;
  std::uint32_t labels = 0;  // bit set: circle labelled x
};

/// Cube complex with generators indexed per vertex. With `lee` the
/// differential carries Lee's deformation (x*x = 1, x -> x(x) + 1(1)), which
/// raises q by 4; the result is then only filtered.
template <ExactField F>
struct CubeComplex {
  std::vector<std::pair<int, int>> gens;  // (i, q), unnormalized
  std::vector<std::tuple<int, int, F>> entries;
  std::vector<CubeGenerator> labels;
};

template <ExactField F>
CubeComplex<F> naive_cube(const PlanarDiagram& d, bool reduced = false, bool lee = false, int max_crossings = 12) {
  detail::check_size(d, max_crossings);
  const int n = d.num_crossings();
  if (reduced && n > 0 && !d.basepoint()) throw std::invalid_argument("naive_cube: missing basepoint");
  const int marked_arc = reduced && n > 0 ? d.arc_index(*d.basepoint()) : -1;
  const std::uint32_t nv = 1u << n;
  std::vector<SmoothedState> states;
  std::vector<int> arc_circles(nv);
  for (std::uint32_t v = 0; v < nv; ++v) {
    std::vector<bool> bits(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) bits[static_cast<std::size_t>(c)] = (v >> c) & 1u;
    states.push_back(d.smoothing(bits));
    int k = 0;
    for (int ci : states.back().circle_of_arc) k = std::max(k, ci + 1);
    arc_circles[v] = k;
  }
  // Marked circle: the one through the basepoint, or the first free loop.
  auto marked = [&](std::uint32_t v) -> int {
    if (!reduced) return -1;
    if (marked_arc >= 0) return states[v].circle_of_arc[static_cast<std::size_t>(marked_arc)];
    return arc_circles[v];
  };
  CubeComplex<F> cx;
  std::vector<std::vector<int>> index(nv);
  for (std::uint32_t v = 0; v < nv; ++v) {
    const int k = states[v].circle_count;
    const int h = std::popcount(v);
    index[v].assign(std::size_t{1} << k, -1);
    for (std::uint32_t lab = 0; lab < (1u << k); ++lab) {
      const int mk = marked(v);
      if (mk >= 0 && !(lab >> mk & 1u)) continue;  // reduced: marked circle is x
      int q = h;
      for (int j = 0; j < k; ++j) q += (lab >> j & 1u) ? -1 : 1;
      if (mk >= 0) q += 1;
      index[v][lab] = static_cast<int>(cx.gens.size());
      cx.gens.push_back({h, q});
      cx.labels.push_back({v, lab});
    }
  }
  // circle ids at v for the circles not touching crossing c map by any arc
  for (std::uint32_t v = 0; v < nv; ++v) {
    const SmoothedState& sv = states[v];
    const int kv = sv.circle_count, av = arc_circles[v];
    std::vector<int> rep(static_cast<std::size_t>(av), -1);
    for (std::size_t a = 0; a < sv.circle_of_arc.size(); ++a)
      if (rep[static_cast<std::size_t>(sv.circle_of_arc[a])] < 0) rep[static_cast<std::size_t>(sv.circle_of_arc[a])] = static_cast<int>(a);
    for (int c = 0; c < n; ++c) {
      if (v >> c & 1u) continue;
      const std::uint32_t w = v | (1u << c);
      const SmoothedState& sw = states[w];
      const int kw = sw.circle_count, aw = arc_circles[w];
      int ones_before = 0;
      for (int j = 0; j < c; ++j) ones_before += (v >> j) & 1u;
      const F sign = ones_before % 2 ? -F::one() : F::one();
      const auto& t = d.crossings()[static_cast<std::size_t>(c)];
      auto arc = [&](int slot) { return d.arc_index(t[static_cast<std::size_t>(slot)]); };
      const int A = sv.circle_of_arc[static_cast<std::size_t>(arc(0))];
      const int B = sv.circle_of_arc[static_cast<std::size_t>(arc(2))];
      // image circle of an untouched circle of v
      std::vector<int> to_w(static_cast<std::size_t>(kv), -1);
      for (int j = 0; j < av; ++j) to_w[static_cast<std::size_t>(j)] = sw.circle_of_arc[static_cast<std::size_t>(rep[static_cast<std::size_t>(j)])];
      for (int j = av; j < kv; ++j) to_w[static_cast<std::size_t>(j)] = aw + (j - av);
      for (std::uint32_t lab = 0; lab < (1u << kv); ++lab) {
        const int src = index[v][lab];
        if (src < 0) continue;
        std::uint32_t rest = 0;  // labels of the untouched circles at w
        for (int j = 0; j < kv; ++j)
          if (j != A && j != B && (lab >> j & 1u)) rest |= 1u << to_w[static_cast<std::size_t>(j)];
        auto put = [&](std::uint32_t wl, const F& coeff) {
          const int tgt = index[w][wl];
          if (tgt < 0) return;
          cx.entries.push_back({src, tgt, coeff * sign});
        };
        if (A != B) {
          const int C = sw.circle_of_arc[static_cast<std::size_t>(arc(0))];
          const bool xa = lab >> A & 1u, xb = lab >> B & 1u;
          if (!xa && !xb) put(rest, F::one());
          else if (xa != xb) put(rest | (1u << C), F::one());
          else if (lee) put(rest, F::one());
        } else {
          const int C1 = sw.circle_of_arc[static_cast<std::size_t>(arc(0))];
          const int C2 = sw.circle_of_arc[static_cast<std::size_t>(arc(1))];
          if (C1 == C2) throw std::logic_error("naive_cube: split produced one circle");
          const bool xa = lab >> A & 1u;
          if (!xa) {
            put(rest | (1u << C1), F::one());
            put(rest | (1u << C2), F::one());
          } else {
            put(rest | (1u << C1) | (1u << C2), F::one());
            if (lee) put(rest, F::one());
          }
        }
        (void)kw;
      }
    }
  }
  return cx;
}

template <ExactField F>
GradedChainComplex<F> to_graded_complex(const CubeComplex<F>& cx) {
  GradedChainComplex<F> c;
  std::vector<int> local(cx.gens.size());
  for (std::size_t g = 0; g < cx.gens.size(); ++g) local[g] = c.add_generator(cx.gens[g].first, cx.gens[g].second);
  for (const auto& [s, t, v] : cx.entries)
    c.add_differential(cx.gens[static_cast<std::size_t>(s)].first, local[static_cast<std::size_t>(s)], local[static_cast<std::size_t>(t)], v);
  return c;
}

template <ExactField F>
BigradedDims naive_unnormalized_kh(const PlanarDiagram& d, bool reduced = false) {
  return homology_dims(to_graded_complex(naive_cube<F>(d, reduced)));
}

template <ExactField F>
BigradedDims naive_kh(const PlanarDiagram& d, bool reduced = false) {
  return naive_unnormalized_kh<F>(d, reduced).shifted(normalization_shift(d));
}

// ---------------------------------------------------------------------------
// Derived tables.

inline DeltaGradedDims delta_collapse(const BigradedDims& b) {
  DeltaGradedDims out;
  for (const auto& [k, v] : b.cells()) out[k.second - 2 * k.first] += v;
  return out;
}

inline LaurentPoly graded_euler_characteristic(const BigradedDims& b) {
  LaurentPoly p;
  for (const auto& [k, v] : b.cells()) p.add(k.second, k.first % 2 == 0 ? v : -v);
  return p;
}

/// |J(i)| where J = chi / (q + q^-1), evaluated over the Gaussian integers.
inline std::int64_t determinant(const BigradedDims& b) {
  const LaurentPoly chi = graded_euler_characteristic(b);
  LaurentPoly j;
  try {
    j = chi.divided_by(LaurentPoly{{-1, 1}, {1, 1}});
  } catch (const std::domain_error&) {
    throw std::domain_error("determinant: Euler characteristic not divisible by q + 1/q (not a knot?)");
  }
  std::int64_t re = 0, im = 0;  // i^e cycles through 1, i, -1, -i
  for (const auto& [e, c] : j.terms()) {
    switch (((e % 4) + 4) % 4) {
      case 0: re += c; break;
      case 1: im += c; break;
      case 2: re -= c; break;
      default: im -= c; break;
    }
  }
  if (re != 0 && im != 0) throw std::domain_error("determinant: evaluation is not on an axis");
  return std::abs(re) + std::abs(im);
}

}  // namespace khmut

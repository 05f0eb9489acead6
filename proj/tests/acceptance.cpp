// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "khmut/grid.hpp"
#include "khmut/khovanov.hpp"
#include "khmut/lee.hpp"
#include "khmut/skein.hpp"
#include "oracles.hpp"
#include "reference.hpp"

using namespace khmut;

namespace {

// Pinned limits.
constexpr double kCriterion1Seconds = 60.0;
constexpr double kCriterion3Seconds = 600.0;
constexpr int kRandomTriples = 24;
constexpr int kEliminationTrials = 100;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Check {
  bool ok = true;
  std::ostringstream notes;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
};

PlanarDiagram member(const PlanarDiagram& base, int n) { return generate_family({base, *base.band_site(), n}); }

struct Family2 {
  PlanarDiagram k0 = oracle::load("k0.json");
  PlanarDiagram k0t = oracle::load("k0tau.json");
};

void criterion1(const Family2& f, Check& c) {
  const auto t0 = Clock::now();
  const BigradedDims kh_k0 = kh(f.k0, Ring::Q);
  const double t = seconds_since(t0);
  c.expect(kh_k0 == reference::kh_k0(), "Kh(K0) differs from the published table: " + format_table(kh_k0));
  c.expect(t < kCriterion1Seconds, "took " + std::to_string(t) + " s");
  c.notes << " (" << std::fixed << std::setprecision(2) << t << " s, total " << kh_k0.total() << ")";
}

void criterion2(const Family2& f, Check& c) {
  const BigradedDims a = kh(f.k0, Ring::Q), b = kh(f.k0t, Ring::Q);
  c.expect(b == reference::kh_k0t(), "Kh(K0t) differs from the published table: " + format_table(b));
  c.expect(delta_collapse(a) == reference::kDeltaK0, "delta(K0) = " + format_delta(delta_collapse(a)));
  c.expect(delta_collapse(b) == reference::kDeltaK0t, "delta(K0t) = " + format_delta(delta_collapse(b)));
  ComparisonReport r;
  r.kh_a = a;
  r.kh_b = b;
  c.expect(r.delta_swap(), "delta swap flag is false");
  c.notes << " (delta K0 " << format_delta(delta_collapse(a)) << "; K0t " << format_delta(delta_collapse(b)) << ")";
}

std::map<int, std::pair<BigradedDims, BigradedDims>> criterion3(const Family2& f, Check& c) {
  std::map<int, std::pair<BigradedDims, BigradedDims>> out;
  const auto t0 = Clock::now();
  for (int n = 8; n <= 10; ++n) {
    const BigradedDims a = kh(member(f.k0, n), Ring::Q), b = kh(member(f.k0t, n), Ring::Q);
    c.expect(a == closed_form(Family::K, n), "K_" + std::to_string(n) + " differs from the closed form");
    c.expect(b == closed_form(Family::KTau, n), "K_" + std::to_string(n) + "^t differs from the closed form");
    c.expect(a.total() == 26 && b.total() == 26, "total at n=" + std::to_string(n));
    out[n] = {a, b};
  }
  const double t = seconds_since(t0);
  c.expect(t < kCriterion3Seconds, "took " + std::to_string(t) + " s");
  c.notes << " (n=8,9,10, both families, " << std::fixed << std::setprecision(2) << t << " s)";
  return out;
}

void criterion4(const Family2& f, Check& c) {
  for (int n = 0; n <= 2; ++n) {
    const int a = s_invariant(member(f.k0, n)), b = s_invariant(member(f.k0t, n));
    c.expect(a == 0, "s(K_" + std::to_string(n) + ") = " + std::to_string(a));
    c.expect(b == 0, "s(K_" + std::to_string(n) + "^t) = " + std::to_string(b));
  }
  c.expect(s_invariant(oracle::load("unknot.json")) == 0, "s(unknot)");
  const int st = s_invariant(oracle::load("trefoil_right.json"));
  c.expect(std::abs(st) == 2, "s(trefoil) = " + std::to_string(st));
  c.notes << " (s(K_n) = s(K_n^t) = 0 for n=0,1,2; s(trefoil) = " << st << ")";
}

void criterion5(const Family2& f, const std::map<int, std::pair<BigradedDims, BigradedDims>>& big, Check& c) {
  int pairs = 0;
  for (int n = 0; n <= 2; ++n) {
    c.expect(graded_euler_characteristic(kh(member(f.k0, n), Ring::Q)) ==
                 graded_euler_characteristic(kh(member(f.k0t, n), Ring::Q)),
             "Euler characteristic at n=" + std::to_string(n));
    ++pairs;
  }
  for (const auto& [n, ab] : big) {
    c.expect(graded_euler_characteristic(ab.first) == graded_euler_characteristic(ab.second), "Euler characteristic at n=" + std::to_string(n));
    ++pairs;
  }
  c.notes << " (" << pairs << " mutant pairs)";
}

void criterion6(const Family2& f, Check& c) {
  const BigradedDims a = reduced_kh(f.k0, Ring::F2), b = reduced_kh(f.k0t, Ring::F2);
  c.expect(a == b, "reduced F2 tables differ");
  c.notes << " (total " << a.total() << ")";
}

void criterion7(const Family2& f, Check& c) {
  int family_triples = 0;
  for (const PlanarDiagram* base : {&f.k0, &f.k0t})
    for (int n = 1; n <= 4; ++n) {
      const PlanarDiagram d = member(*base, n);
      const SkeinTriple t = skein_triple(d, d.num_crossings() - 1);
      c.expect(kh(t.d0, Ring::Q) == kh(PlanarDiagram::unknot(2), Ring::Q), "D0 is not the 2-unlink at n=" + std::to_string(n));
      c.expect(les_consistency(make_les_instance<Rational>(t)).pass, "LES fails for K_" + std::to_string(n));
      ++family_triples;
    }
  std::mt19937 rng(7);
  int random_triples = 0;
  for (PlanarDiagram d : gen::random_diagrams(rng, kRandomTriples)) {
    if (d.n_plus() == 0) d = mirror(d);
    std::vector<int> pos;
    for (int k = 0; k < d.num_crossings(); ++k)
      if (d.sign(k) > 0) pos.push_back(k);
    const int k = pos[std::uniform_int_distribution<std::size_t>(0, pos.size() - 1)(rng)];
    c.expect(les_consistency(make_les_instance<Rational>(skein_triple(d, k))).pass, "LES fails on " + d.to_pd_string());
    ++random_triples;
  }
  // fault injection: every single-cell perturbation of a good instance must be flagged
  const PlanarDiagram k3 = member(f.k0, 3);
  const LESInstance good = make_les_instance<Rational>(skein_triple(k3, k3.num_crossings() - 1));
  int injected = 0, caught = 0;
  for (int which = 0; which < 3; ++which) {
    const BigradedDims& tbl = which == 0 ? good.d : which == 1 ? good.d0 : good.d1;
    for (const auto& [key, v] : tbl.cells()) {
      LESInstance bad = good;
      (which == 0 ? bad.d : which == 1 ? bad.d0 : bad.d1).add(key.first, key.second, 1);
      ++injected;
      caught += !les_consistency(bad).pass;
    }
  }
  c.expect(injected > 0 && caught == injected, "fault injection caught " + std::to_string(caught) + "/" + std::to_string(injected));
  c.notes << " (" << family_triples << " family triples, " << random_triples << " random triples, " << caught << "/" << injected
          << " faults caught)";
}

void criterion8(Check& c) {
  const GridDiagram unknot = oracle::load_grid("unknot.json"), unlink = oracle::load_grid("unlink2.json");
  c.expect(hat_hfk(unknot) == BigradedDims{{{0, 0}, 1}}, "hat(unknot)");
  c.expect(hat_hfk(unlink) == BigradedDims{{{0, 0}, 1}, {{-1, 0}, 1}}, "hat(2-unlink)");
  for (const char* n : {"trefoil_right.json", "trefoil_left.json", "figure8.json"}) {
    const GridDiagram g = oracle::load_grid(n);
    const BigradedDims h = hat_hfk(g);
    c.expect(tilde_hfk(g) == oracle::brute_tilde(g), std::string("tilde vs brute force on ") + n);
    c.expect(oracle::hfk_euler(h) == oracle::grid_alexander(g), std::string("Euler characteristic vs Alexander on ") + n);
    c.expect(conjugation_symmetric(h), std::string("symmetry on ") + n);
    for (int d = 1; d <= 2; ++d)
      c.expect(oracle::truncated_minus_brute(g, d) == oracle::predicted_quotient(minus_homology_collapsed(g), d),
               std::string("minus modulo U^d vs brute force on ") + n);
  }
  c.expect(tau(unknot) == 0, "tau(unknot)");
  const int t = tau(oracle::load_grid("trefoil_right.json"));
  c.expect(std::abs(t) == 1, "tau(trefoil) = " + std::to_string(t));
  c.notes << " (tau(trefoil) = " << t << ")";
}

void criterion9(const Family2& f, Check& c) {
  // substitute: published hat tables from fixture data, and the Kh delta swap
  auto load = [](const std::string& name) {
    return dims_from_json(parse_json_text(read_file(oracle::fixture("hfk/" + name)), name).at("dims"));
  };
  const BigradedDims a = load("k0.json"), b = load("k0tau.json");
  c.expect(a == reference::hfk_k0() && b == reference::hfk_k0t(), "fixture HFK tables differ from the published ones");
  c.expect(hfk_delta_collapse(a) == reference::kHfkDeltaK0, "HFK delta(K0)");
  c.expect(hfk_delta_collapse(b) == reference::kHfkDeltaK0t, "HFK delta(K0t)");
  c.expect(a.total() == 17 && b.total() == 17, "HFK totals");
  ComparisonReport r;
  r.kh_a = kh(f.k0, Ring::Q);
  r.kh_b = kh(f.k0t, Ring::Q);
  c.expect(r.delta_swap(), "Kh delta swap");
}

void criterion10(Check& c) {
  int corpus = 0;
  for (const auto& [name, d] : oracle::corpus()) {
    c.expect(d.num_crossings() <= 10, name + " exceeds 10 crossings");
    c.expect(kh<Rational>(d) == naive_kh<Rational>(d), "naive cube vs pipeline over Q on " + name);
    c.expect(kh<F2>(d) == naive_kh<F2>(d), "naive cube vs pipeline over F2 on " + name);
    if (d.num_crossings() <= 8) c.expect(to_graded_complex(naive_cube<Rational>(d)).d_squared_is_zero(), "d^2 on " + name);
    const BigradedDims table = kh(d, Ring::Q);
    BigradedDims dual;
    for (const auto& [k, v] : table.cells()) dual.add(-k.first, -k.second, v);
    c.expect(kh(mirror(d), Ring::Q) == dual, "mirror duality on " + name);
    ++corpus;
  }
  std::mt19937 rng(11);
  int trials = 0;
  for (int trial = 0; trial < kEliminationTrials; ++trial) {
    const gen::RandomComplex<Rational> rc = gen::random_complex<Rational>(rng);
    const GradedChainComplex<Rational> cx = rc.build();
    c.expect(cx.d_squared_is_zero(), "random complex d^2");
    c.expect(gen::dense_homology(rc) == rc.free, "random complex dense homology");
    bool done = false;
    for (int i : cx.degrees()) {
      for (const auto& [rcol, v] : cx.d(i).entries())
        if (cx.q_of(i, rcol.second) == cx.q_of(i + 1, rcol.first)) {
          const GradedChainComplex<Rational> e = gaussian_eliminate(cx, i, rcol.second, rcol.first);
          c.expect(e.d_squared_is_zero() && homology_dims(e) == rc.free, "gaussian_eliminate changed homology");
          done = true;
          break;
        }
      if (done) break;
    }
    ++trials;
  }
  c.notes << " (" << corpus << " corpus diagrams, " << trials << " elimination trials)";
}

bool report(int n, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes << " [exception: " << e.what() << "]";
  }
  std::cout << "criterion " << n << ": " << (c.ok ? "PASS" : "FAIL") << "  " << title << c.notes.str() << std::endl;
  return c.ok;
}

}  // namespace

int main() {
  const Family2 f;
  bool all = true;
  std::map<int, std::pair<BigradedDims, BigradedDims>> big;
  all &= report(1, "Kh(K0; Q) equals the published table", [&](Check& c) { criterion1(f, c); });
  all &= report(2, "Kh(K0t; Q) equals the published table; delta collapses swap", [&](Check& c) { criterion2(f, c); });
  all &= report(3, "K_n, K_n^t closed forms at n = 8, 9, 10", [&](Check& c) { big = criterion3(f, c); });
  all &= report(4, "s-invariants", [&](Check& c) { criterion4(f, c); });
  all &= report(5, "graded Euler characteristic agrees on mutant pairs", [&](Check& c) { criterion5(f, big, c); });
  all &= report(6, "reduced Kh over F2 agrees on K0, K0t", [&](Check& c) { criterion6(f, c); });
  all &= report(7, "skein exact sequence consistency", [&](Check& c) { criterion7(f, c); });
  all &= report(8, "grid HFK on small knots and links", [&](Check& c) { criterion8(c); });
  all &= report(9,
                "NOT REPRODUCIBLE: grid HFK of the 14-crossing knots (grid size ~14, ~10^11 states) and the HFK^- "
                "family isomorphisms are out of reach; substitute checked instead: fixture HFK tables and their "
                "delta collapses, and the Kh delta swap",
                [&](Check& c) { criterion9(f, c); });
  all &= report(10, "property suite", [&](Check& c) { criterion10(c); });
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return all ? 0 : 1;
}

#include <gtest/gtest.h>

#include <random>

#include "khmut/skein.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "reference.hpp"

using namespace khmut;

namespace {

PlanarDiagram family_member(const char* fixture, int n) {
  const PlanarDiagram base = oracle::load(fixture);
  return generate_family({base, *base.band_site(), n});
}

}  // namespace

TEST(LES, Trefoil) {
  const PlanarDiagram rt = oracle::load("trefoil_right.json");
  for (int c = 0; c < 3; ++c) {
    const LESReport rep = les_consistency(make_les_instance<Rational>(skein_triple(rt, c)));
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(rep.violations.empty());
  }
}

TEST(LES, TwistFamilies) {
  for (const char* f : {"k0.json", "k0tau.json"})
    for (int n = 1; n <= 4; ++n) {
      const PlanarDiagram d = family_member(f, n);
      const SkeinTriple t = skein_triple(d, d.num_crossings() - 1);
      const LESInstance in = make_les_instance<Rational>(t);
      EXPECT_TRUE(les_consistency(in).pass) << f << " n=" << n;
      // D0 is a diagram of the 2-component unlink and D1 one of K_{n-1}
      EXPECT_EQ(kh(t.d0, Ring::Q), kh(PlanarDiagram::unknot(2), Ring::Q)) << f << " n=" << n;
      EXPECT_EQ(kh(t.d1, Ring::Q), kh(family_member(f, n - 1), Ring::Q)) << f << " n=" << n;
      EXPECT_TRUE(les_consistency(make_les_instance<F2>(t)).pass) << f << " n=" << n;
    }
}

TEST(LES, RandomTriples) {
  std::mt19937 rng(2024);
  int checked = 0;
  for (PlanarDiagram d : gen::random_diagrams(rng, 30)) {
    if (d.n_plus() == 0) d = mirror(d);
    std::vector<int> pos;
    for (int c = 0; c < d.num_crossings(); ++c)
      if (d.sign(c) > 0) pos.push_back(c);
    const int c = pos[std::uniform_int_distribution<std::size_t>(0, pos.size() - 1)(rng)];
    const SkeinTriple t = skein_triple(d, c);
    EXPECT_TRUE(les_consistency(make_les_instance<Rational>(t)).pass) << d.to_pd_string() << " at " << c;
    EXPECT_TRUE(les_consistency(make_les_instance<F2>(t)).pass) << d.to_pd_string() << " at " << c;
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

// Bumping any single dimension breaks the alternating sum for its q.
TEST(LES, FaultInjectionIsDetected) {
  std::vector<LESInstance> good;
  good.push_back(make_les_instance<Rational>(skein_triple(oracle::load("trefoil_right.json"), 1)));
  const PlanarDiagram k2 = family_member("k0.json", 2);
  good.push_back(make_les_instance<Rational>(skein_triple(k2, k2.num_crossings() - 1)));
  for (const LESInstance& in : good) {
    ASSERT_TRUE(les_consistency(in).pass);
    for (int which = 0; which < 3; ++which) {
      const BigradedDims& table = which == 0 ? in.d : which == 1 ? in.d0 : in.d1;
      for (const auto& [k, v] : table.cells()) {
        for (int delta : {1, -1}) {
          LESInstance bad = in;
          BigradedDims& t = which == 0 ? bad.d : which == 1 ? bad.d0 : bad.d1;
          t.add(k.first, k.second, delta);
          const LESReport rep = les_consistency(bad);
          EXPECT_FALSE(rep.pass) << which << " (" << k.first << "," << k.second << ") " << delta;
          EXPECT_FALSE(rep.violations.empty());
        }
      }
    }
    // a dimension moved to another q is caught as well
    LESInstance shifted = in;
    shifted.d = in.d.shifted(0, 2);
    EXPECT_FALSE(les_consistency(shifted).pass);
  }
}

TEST(LES, RejectsMismatchedCounts) {
  LESInstance in = make_les_instance<Rational>(skein_triple(oracle::load("trefoil_right.json"), 0));
  LESInstance a = in;
  a.counts_d0.n_plus += 1;
  EXPECT_THROW(les_consistency(a), std::invalid_argument);
  LESInstance b = in;
  b.counts_d1.n_minus += 1;
  EXPECT_THROW(les_consistency(b), std::invalid_argument);
}

TEST(ClosedForm, BaseCasesAreThePublishedTables) {
  EXPECT_EQ(closed_form(Family::K, 0), reference::kh_k0());
  EXPECT_EQ(closed_form(Family::KTau, 0), reference::kh_k0t());
  for (int n = 0; n <= 30; ++n) {
    EXPECT_EQ(closed_form(Family::K, n).total(), 26);
    EXPECT_EQ(closed_form(Family::KTau, n).total(), 26);
    EXPECT_EQ(delta_collapse(closed_form(Family::K, n)), reference::kDeltaK0) << n;
    EXPECT_EQ(delta_collapse(closed_form(Family::KTau, n)), reference::kDeltaK0t) << n;
  }
}

TEST(ClosedForm, MatchesDirectComputation) {
  for (int n = 0; n <= 7; ++n) {
    EXPECT_EQ(kh(family_member("k0.json", n), Ring::Q), closed_form(Family::K, n)) << n;
    EXPECT_EQ(kh(family_member("k0tau.json", n), Ring::Q), closed_form(Family::KTau, n)) << n;
  }
}

TEST(Induction, LeeFilterOnKnownTables) {
  EXPECT_TRUE(lee_unpaired(reference::kh_k0()).empty());
  EXPECT_TRUE(lee_unpaired(reference::kh_k0t()).empty());
  // the trefoil pairs (2,5) with (3,9) and keeps (0,1), (0,3)
  EXPECT_TRUE(lee_unpaired(parse_table("1^0_1 1^0_3 1^2_5 1^3_9"), 2).empty());
  EXPECT_FALSE(lee_unpaired(parse_table("1^0_1 1^0_3 1^2_5 1^3_7"), 2).empty());
  EXPECT_FALSE(lee_unpaired(parse_table("1^0_1 1^0_3"), 0).empty());
}

TEST(Induction, StepResolvesUniquely) {
  for (Family fam : {Family::K, Family::KTau})
    for (int n = 9; n <= 11; ++n) {
      const InductionResult r = induction_step(closed_form(fam, n - 1), n, fam);
      ASSERT_TRUE(r.resolved) << family_name(fam) << " n=" << n;
      EXPECT_EQ(*r.resolved, closed_form(fam, n));
      ASSERT_EQ(r.candidates.size(), 4u);
      int feasible = 0;
      for (const auto& c : r.candidates) {
        if (c.lee_unpaired.empty()) {
          ++feasible;
          EXPECT_EQ(c.a, 0);
          EXPECT_EQ(c.b, 0);
        } else {
          EXPECT_TRUE(c.a > 0 || c.b > 0);
        }
        // candidates differ only in degrees 0 and 1
        for (const auto& [k, v] : c.table.cells())
          if (k.first < 0 || k.first > 1) EXPECT_EQ(v, closed_form(fam, n).at(k.first, k.second));
      }
      EXPECT_EQ(feasible, 1);
    }
}

TEST(Induction, ForcedWrongRankIsFlagged) {
  const InductionResult r = induction_step(closed_form(Family::K, 9), 10, Family::K);
  bool saw_a1 = false;
  for (const auto& c : r.candidates)
    if (c.a == 1 && c.b == 0) {
      saw_a1 = true;
      EXPECT_FALSE(c.lee_unpaired.empty());
    }
  EXPECT_TRUE(saw_a1);
}

TEST(Induction, Preconditions) {
  EXPECT_THROW(induction_step(closed_form(Family::K, 7), 8, Family::K), std::invalid_argument);
  EXPECT_THROW(induction_step(closed_form(Family::KTau, 8), 9, Family::K), std::invalid_argument);
}

TEST(Induction, AgreesWithDirectComputationAtNine) {
  const InductionResult r = induction_step(kh(family_member("k0.json", 8), Ring::Q), 9, Family::K);
  ASSERT_TRUE(r.resolved);
  EXPECT_EQ(*r.resolved, kh(family_member("k0.json", 9), Ring::Q));
}

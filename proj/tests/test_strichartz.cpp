#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "inls/strichartz.hpp"

using namespace inls;

namespace {
const ProblemParams kRef{3, Rational(1), Rational(1, 2)};
}

TEST_CASE("holder dual endpoints and involution") {
  CHECK(holder_dual(ExtRational(2)) == ExtRational(2));
  CHECK(holder_dual(ExtRational(1)).is_infinite());
  CHECK(holder_dual(ExtRational::infinity()) == ExtRational(1));
  CHECK(holder_dual(ExtRational(12, 5)) == ExtRational(12, 7));
  CHECK_THROWS_AS(holder_dual(ExtRational(1, 2)), std::domain_error);
}

TEST_CASE("holder dual is an involution on random rationals", "[property]") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(1, 3000), den(1, 300);
  for (int i = 0; i < 500; ++i) {
    Rational p = Rational(num(rng), den(rng)) + Rational(1);
    ExtRational e(p);
    CHECK(holder_dual(holder_dual(e)) == e);
  }
  CHECK(holder_dual(holder_dual(ExtRational::infinity())).is_infinite());
}

TEST_CASE("admissibility of endpoint pairs") {
  CHECK(admissible({ExtRational(2), ExtRational(6)}, 3, Rational(0),
                   AdmissibleKind::L2));
  CHECK(admissible({ExtRational::infinity(), ExtRational(2)}, 3, Rational(0),
                   AdmissibleKind::L2));
  // (inf, sigma_c) at level s_c for the reference triple: 0 = 3/2 - 3/4 - 3/4
  auto ci = derive_indices(kRef);
  CHECK(admissible({ExtRational::infinity(), ExtRational(ci.sigma_c)}, 3,
                   ci.s_c, AdmissibleKind::Hs));
  // scaling relation violated
  CHECK_FALSE(admissible({ExtRational(2), ExtRational(4)}, 3, Rational(0),
                         AdmissibleKind::L2));
  // p outside the range even though the relation could be solved
  CHECK_FALSE(admissible({ExtRational(1), ExtRational::infinity()}, 3,
                         Rational(0), AdmissibleKind::L2));
  // malformed pair
  CHECK_THROWS_AS(admissible({ExtRational(1, 2), ExtRational(2)}, 3,
                             Rational(0), AdmissibleKind::L2),
                  std::invalid_argument);
}

TEST_CASE("open endpoints are strict") {
  // N >= 3 upper endpoint 2N/(N-2) is closed for L2, open for Hs
  CHECK(admissible({ExtRational(2), ExtRational(6)}, 3, Rational(0),
                   AdmissibleKind::L2));
  auto ci = derive_indices(kRef);
  // p = 6 solves the Hs relation with q = 8/(-1)... construct a valid pair at
  // the open endpoint instead: 2/q = 3/2 - 3/6 - 3/4 = 1/4, q = 8.
  CHECK_FALSE(admissible({ExtRational(8), ExtRational(6)}, 3, ci.s_c,
                         AdmissibleKind::Hs));
  // lower endpoint of H-s is open: p = 2N/(N-2s) = 4, 2/q = 3/2-3/4+3/4, q=4/3
  CHECK_FALSE(admissible({ExtRational(4, 3), ExtRational(4)}, 3, ci.s_c,
                         AdmissibleKind::HminusS));
}

TEST_CASE("constructed pairs match hand-computed rationals") {
  SmallParams eps100{Rational(1, 100), Rational(1, 100)};

  auto pa1 = lemma_pair(PairFamily::pa1, kRef);
  REQUIRE(pa1.size() == 1);
  CHECK(pa1[0].pair.q == ExtRational(8));
  CHECK(pa1[0].pair.p == ExtRational(12, 5));

  auto pa2 = lemma_pair(PairFamily::pa2, kRef);
  REQUIRE(pa2.size() == 1);
  CHECK(pa2[0].pair.q == ExtRational(5));
  CHECK(pa2[0].pair.p == ExtRational(30, 11));

  auto ppm = lemma_pair(PairFamily::ppm_plus, kRef, eps100);
  REQUIRE(ppm.size() == 1);
  CHECK(ppm[0].pair.p == ExtRational(1800, 751));

  CHECK_THROWS_AS(lemma_pair(PairFamily::pa1, {2, Rational(1), Rational(1, 2)}),
                  std::domain_error);
}

TEST_CASE("ppm pairs straddle a common limit as eps -> 0", "[property]") {
  Rational eps(1, 10);
  ExtRational last_plus, last_minus;
  Rational gap_before;
  for (int k = 0; k < 12; ++k) {
    SmallParams sp{eps, Rational(1, 100)};
    auto plus = lemma_pair(PairFamily::ppm_plus, kRef, sp)[0].pair.p;
    auto minus = lemma_pair(PairFamily::ppm_minus, kRef, sp)[0].pair.p;
    CHECK(plus.finite_value() < minus.finite_value());
    Rational gap = minus.finite_value() - plus.finite_value();
    if (k > 0) CHECK(gap < gap_before);
    gap_before = gap;
    eps = eps / Rational(2);
  }
}

namespace {

struct SweepGen {
  std::mt19937_64 rng;
  explicit SweepGen(std::uint64_t seed) : rng(seed) {}

  Rational rat(std::int64_t lo_num, std::int64_t hi_num, std::int64_t den) {
    std::uniform_int_distribution<std::int64_t> d(lo_num, hi_num);
    return Rational(d(rng), den);
  }

  // Intercritical triple with margins keeping eps = theta = 1e-3 "small
  // enough" for every construction: sigma at least 1/50 inside both
  // thresholds, b away from its endpoints.
  ProblemParams intercritical(int N, Rational bmax) {
    while (true) {
      Rational b = rat(1, 199, 100); // (0, 2)
      if (!(b < bmax)) continue;
      Rational lo = (Rational(2) - b) / Rational(N) + Rational(1, 50);
      Rational hi = N >= 3 ? (Rational(2) - b) / Rational(N - 2) - Rational(1, 50)
                           : Rational(6);
      if (!(lo < hi)) continue;
      // draw sigma uniformly on a rational lattice inside (lo, hi)
      Rational t = rat(1, 999, 1000);
      Rational sigma = lo + t * (hi - lo);
      ProblemParams p{N, sigma, b};
      if (derive_indices(p).s_c >= Rational(99, 100)) continue;
      return p;
    }
  }

  ProblemParams lg1_2d() {
    while (true) {
      Rational b = rat(1, 89, 100); // stay clear of b = 1 so theta=1e-3 works
      Rational lo = (Rational(2) - b) / Rational(2) + Rational(1, 50);
      Rational sigma = lo + rat(1, 400, 100);
      ProblemParams p{2, sigma, b};
      return p;
    }
  }
};

} // namespace

TEST_CASE("constructed pairs satisfy their claimed admissibility on a sweep",
          "[property]") {
  SmallParams milli{Rational(1, 1000), Rational(1, 1000)};
  SweepGen gen(20250809);

  SECTION("dimension >= 3 families") {
    std::uniform_int_distribution<int> dim(3, 6);
    for (int i = 0; i < 200; ++i) {
      int N = dim(gen.rng);
      Rational bmax = Rational(N, 2) < Rational(2) ? Rational(N, 2) : Rational(2);
      ProblemParams p = gen.intercritical(N, bmax);
      for (auto fam : {PairFamily::pa1, PairFamily::pa2, PairFamily::ppm_plus,
                       PairFamily::ppm_minus, PairFamily::b3_eps}) {
        if (fam == PairFamily::pa2 && !(p.b < Rational(N - 2))) continue;
        auto pairs = lemma_pair(fam, p, milli);
        for (const auto& cp : pairs) {
          INFO(to_string(fam) << " role " << cp.role << " at N=" << N
                              << " sigma=" << p.sigma.str()
                              << " b=" << p.b.str());
          CHECK(admissible(cp.pair, p.N, cp.s, cp.claimed_kind));
        }
        if (fam == PairFamily::ppm_plus || fam == PairFamily::ppm_minus) {
          CHECK(pairs[0].pair.p.finite_value() < Rational(N));
        }
      }
    }
  }

  SECTION("two-dimensional families") {
    for (int i = 0; i < 200; ++i) {
      ProblemParams p = gen.lg1_2d();
      for (auto fam : {PairFamily::lgwp_hat, PairFamily::lgwp_tilde,
                       PairFamily::lgwp_bar, PairFamily::lgwp_star}) {
        auto pairs = lemma_pair(fam, p, milli);
        for (const auto& cp : pairs) {
          INFO(to_string(fam) << " role " << cp.role << " sigma="
                              << p.sigma.str() << " b=" << p.b.str());
          CHECK(admissible(cp.pair, p.N, cp.s, cp.claimed_kind));
        }
      }
    }
  }
}

TEST_CASE("relation systems close with zero residual at reference points") {
  SmallParams eps100{Rational(1, 100), Rational(1, 100)};

  SECTION("sistema with the minus pair") {
    auto rep = verify_relation_system(SystemId::sistema, kRef, eps100);
    for (const auto& r : rep.relations) {
      INFO(r.text);
      CHECK(r.residual == Rational(0));
    }
    CHECK(rep.overall_pass);
    // 1/q* for the minus pair equals (-1 + 3/2 - 1/100)/4 = 49/400
    bool found = false;
    for (const auto& c : rep.side_conditions) {
      if (c.text.find("minus") != std::string::npos &&
          c.text.find("1/q* > 0") != std::string::npos) {
        CHECK(c.value == "49/400");
        found = true;
      }
    }
    CHECK(found);
  }

  SECTION("exterior weight value for PA1 equals -b") {
    auto rep = verify_relation_system(SystemId::l1c12, kRef);
    CHECK(rep.overall_pass);
    bool found = false;
    for (const auto& c : rep.side_conditions) {
      if (c.text.find("N/gamma - b < 0") != std::string::npos) {
        CHECK(c.value == "-1/2");
        found = true;
      }
    }
    CHECK(found);
  }

  SECTION("interior system with PA2 passes for b < N-2") {
    auto rep = verify_relation_system(SystemId::l1, kRef);
    CHECK(rep.overall_pass);
  }

  SECTION("two-dimensional system closes identically") {
    ProblemParams p2{2, Rational(2), Rational(1, 2)};
    SmallParams th{Rational(1, 100), Rational(1, 10)};
    auto rep = verify_relation_system(SystemId::gwp3, p2, th);
    for (const auto& r : rep.relations) {
      INFO(r.text);
      CHECK(r.residual == Rational(0));
    }
    CHECK(rep.overall_pass);
  }

  SECTION("interior/exterior level-sc system") {
    // eps must sit below theta (1 - s_c)/2 for the interior weight sign
    SmallParams sp{Rational(1, 100), Rational(1, 10)};
    auto rep = verify_relation_system(SystemId::e1_admrel, kRef, sp);
    for (const auto& r : rep.relations) {
      INFO(r.text);
      CHECK(r.residual == Rational(0));
    }
    CHECK(rep.overall_pass);
  }
}

TEST_CASE("the printed qbar is flagged and the system reports all variants") {
  ProblemParams p{3, Rational(1, 2), Rational(5, 4)};
  SmallParams sp{Rational(1, 100), Rational(1, 100)};
  auto rep = verify_relation_system(SystemId::cond_h1_sl2, p, sp);
  // residuals still close exactly
  for (const auto& r : rep.relations) {
    INFO(r.text);
    CHECK(r.residual == Rational(0));
  }
  // but the printed pair fails admissibility, so the report cannot pass
  CHECK_FALSE(rep.overall_pass);
  bool printed_flagged = false, solved_ok = false;
  for (const auto& c : rep.side_conditions) {
    if (c.text.find("qbar_printed") != std::string::npos)
      printed_flagged = !c.pass;
    if (c.text.find("1/q1 > 0 with relation-solved qbar") != std::string::npos)
      solved_ok = c.pass;
  }
  CHECK(printed_flagged);
  CHECK(solved_ok);
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("relation residuals vanish on a random sweep", "[property]") {
  SweepGen gen(424242);
  SmallParams milli{Rational(1, 1000), Rational(1, 1000)};
  std::uniform_int_distribution<int> dim(3, 6);

  for (int i = 0; i < 120; ++i) {
    int N = dim(gen.rng);
    Rational bmax = Rational(N, 2) < Rational(2) ? Rational(N, 2) : Rational(2);
    ProblemParams p = gen.intercritical(N, bmax);

    for (auto id : {SystemId::sistema, SystemId::b1a, SystemId::l1c12,
                    SystemId::e1_admrel}) {
      auto rep = verify_relation_system(id, p, milli);
      for (const auto& r : rep.relations) {
        INFO(to_string(id) << ": " << r.text << " at N=" << N << " sigma="
                           << p.sigma.str() << " b=" << p.b.str());
        CHECK(r.residual == Rational(0));
      }
    }
    if (p.b < Rational(N - 2)) {
      auto rep = verify_relation_system(SystemId::l1, p, milli);
      for (const auto& r : rep.relations) CHECK(r.residual == Rational(0));
      CHECK(rep.overall_pass);
    }
  }

  for (int i = 0; i < 120; ++i) {
    ProblemParams p = gen.lg1_2d();
    auto rep = verify_relation_system(SystemId::gwp3, p, milli);
    for (const auto& r : rep.relations) {
      INFO("GWP3: " << r.text << " sigma=" << p.sigma.str()
                    << " b=" << p.b.str());
      CHECK(r.residual == Rational(0));
    }
    CHECK(rep.overall_pass);
  }
}

TEST_CASE("dyadic eps search reports a passing value where one exists") {
  auto eps = largest_passing_epsilon(SystemId::sistema, kRef, Rational(1, 1000));
  REQUIRE(eps.has_value());
  CHECK(*eps <= Rational(1, 8));
  // condH1sl2 never passes as printed
  ProblemParams p{3, Rational(1, 2), Rational(5, 4)};
  CHECK_FALSE(
      largest_passing_epsilon(SystemId::cond_h1_sl2, p, Rational(1, 1000))
          .has_value());
}

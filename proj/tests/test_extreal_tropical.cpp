#include <doctest.h>

#include "oracles.hpp"
#include "semiscale/tropical.hpp"

using namespace semiscale;
using namespace semiscale::testing;

namespace {

ExtendedWeightMatrix from(const WeightRows& rows) {
  return ExtendedWeightMatrix::from_rows(rows);
}

}  // namespace

TEST_CASE("extended reals absorb bottom") {
  const ExtReal bot = ExtReal::bottom();
  const ExtReal a(2.5);
  CHECK((bot + a).is_bottom());
  CHECK((a + bot).is_bottom());
  CHECK(max(bot, a) == a);
  CHECK((a + ExtReal(-1.0)).value() == doctest::Approx(1.5));
  CHECK_THROWS_AS(ExtReal(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(ExtReal(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("walk supremum on the two-cycle") {
  // Oracle: cycles weigh 0, so simple walks settle the suprema.
  const WeightRows mu = {{kNegInf, 1.0}, {-1.0, kNegInf}};
  const WeightRows expect = brute_force_walk_sup(mu, 2);
  CHECK(expect[0][0] == doctest::Approx(0.0));
  CHECK(expect[0][1] == doctest::Approx(1.0));
  CHECK(expect[1][0] == doctest::Approx(-1.0));
  CHECK(expect[1][1] == doctest::Approx(0.0));

  const WalkClosure w = walk_supremum(from(mu));
  CHECK_FALSE(w.divergent());
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      CHECK(w.entries(i, j).value() == doctest::Approx(expect[i][j]).epsilon(1e-12));
}

TEST_CASE("walk supremum with no edges stays bottom") {
  const WeightRows mu = {{kNegInf, kNegInf}, {kNegInf, kNegInf}};
  const WalkClosure w = walk_supremum(from(mu));
  CHECK_FALSE(w.divergent());
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(w.entries(i, j).is_bottom());
}

TEST_CASE("a strictly positive loop diverges") {
  const WeightRows mu = {{1.0, kNegInf}, {kNegInf, kNegInf}};
  const WalkClosure w = walk_supremum(from(mu));
  REQUIRE(w.divergent());
  CHECK(w.divergent_pairs == std::vector<IndexPair>{{0, 0}});
  CHECK_THROWS_AS(assert_no_divergence(w), DivergentError);
}

TEST_CASE("assert_no_divergence passes the two-cycle through") {
  const WalkClosure w = walk_supremum(from({{kNegInf, 1.0}, {-1.0, kNegInf}}));
  CHECK_FALSE(assert_no_divergence(w).divergent());
}

TEST_CASE("single vertex with a negative loop") {
  // Loop repetitions sum to -2, -4, ...; the supremum is the single pass.
  const WalkClosure w = walk_supremum(from({{-2.0}}));
  CHECK_FALSE(w.divergent());
  CHECK(w.entries(0, 0).value() == doctest::Approx(-2.0));
  CHECK_NOTHROW(assert_no_divergence(w));
}

TEST_CASE("zero-weight cycles do not diverge") {
  const WeightRows mu = {{0.0, 0.0}, {0.0, kNegInf}};
  const WalkClosure w = walk_supremum(from(mu));
  CHECK_FALSE(w.divergent());
  CHECK(w.entries(0, 0).value() == doctest::Approx(0.0));
}

TEST_CASE("random digraphs match the brute-force oracle") {
  Rng rng(20240611);
  std::size_t done = 0;
  while (done < 120) {
    const std::size_t n = 1 + rng.index(5);
    const WeightRows mu = random_digraph(rng, n, -3.0, 3.0, 0.4);
    if (has_positive_cycle(mu)) continue;
    ++done;

    const WalkClosure w = walk_supremum(from(mu));
    REQUIRE_FALSE(w.divergent());
    const WeightRows expect = brute_force_walk_sup(mu, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (expect[i][j] == kNegInf) {
          CHECK(w.entries(i, j).is_bottom());
        } else {
          CHECK(std::abs(w.entries(i, j).value() - expect[i][j]) <= 1e-12);
        }
      }

    // Edge domination and the triangle inequality (with bottom absorbing).
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        CHECK(w.entries(x, y) >= from(mu)(x, y));
        for (std::size_t z = 0; z < n; ++z) {
          const ExtReal lhs = w.entries(x, y) + w.entries(y, z);
          if (lhs.is_finite())
            CHECK(lhs.value() <= w.entries(x, z).value() + 1e-12);
        }
      }
  }
}

TEST_CASE("divergent pairs are exactly the routed-through-positive-cycle pairs") {
  Rng rng(777);
  std::size_t divergent_seen = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.index(5);
    const WeightRows mu = random_digraph(rng, n, -2.0, 2.0, 0.5);
    const WalkClosure w = walk_supremum(ExtendedWeightMatrix::from_rows(mu));

    // Oracle: v lies on a strictly positive cycle iff the best closed walk
    // through v within n steps is strictly positive.
    const WeightRows best = brute_force_walk_sup(mu, n);
    const auto reach = brute_force_reach(mu);
    std::vector<IndexPair> expect;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        bool div = false;
        for (std::size_t v = 0; v < n && !div; ++v)
          div = best[v][v] != kNegInf && best[v][v] > 1e-12 && reach[x][v] && reach[v][y];
        if (div) expect.emplace_back(x, y);
      }
    if (!expect.empty()) ++divergent_seen;
    CHECK(w.divergent_pairs == expect);
  }
  CHECK(divergent_seen > 20);  // the sample actually exercises divergence
}

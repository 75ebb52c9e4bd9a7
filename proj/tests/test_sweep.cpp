#include <cmath>

#include "confdim/io.hpp"
#include "confdim/sweep.hpp"
#include "doctest.h"

using namespace confdim;

namespace {

const std::vector<double> kGrid{1.5, 2.0, 2.5, 3.0, 3.5, 4.0};

} // namespace

TEST_CASE("diag(2,2) sweep: values stay near 1 at p=2 and Q lands near 2") {
  const SweepTable table = sweep({2, 0, 0, 2}, {0, 1}, kGrid, 3);
  for (int n = 1; n <= 3; ++n) {
    const ModulusResult* r = table.find(0, n, 2.0);
    REQUIRE(r != nullptr);
    REQUIRE(r->converged);
    CHECK(r->value == doctest::Approx(1.0).epsilon(1e-6));
  }
  const ExponentEstimate est = estimate_Q(table);
  CHECK(est.Q == doctest::Approx(2.0).epsilon(0.15));
  CHECK(est.p_low < est.Q);
  CHECK(est.Q < est.p_high);
}

TEST_CASE("diag(2,4) sweep growth ratios") {
  const SweepTable table = sweep({2, 0, 0, 4}, {0, 1}, kGrid, 3);
  // direction e1 at p=2 grows by about 2 per level, at p=4 shrinks by 2
  const ModulusResult* lo2 = table.find(0, 2, 2.0);
  const ModulusResult* hi2 = table.find(0, 3, 2.0);
  REQUIRE(lo2 != nullptr);
  REQUIRE(hi2 != nullptr);
  CHECK(hi2->value / lo2->value == doctest::Approx(2.0).epsilon(1e-5));
  const ModulusResult* lo4 = table.find(0, 2, 4.0);
  const ModulusResult* hi4 = table.find(0, 3, 4.0);
  REQUIRE(lo4 != nullptr);
  REQUIRE(hi4 != nullptr);
  CHECK(hi4->value / lo4->value == doctest::Approx(0.5).epsilon(1e-5));

  const ExponentEstimate est = estimate_Q(table);
  CHECK(est.direction == 0);  // slow eigendirection dominates
  CHECK(est.Q == doctest::Approx(3.0).epsilon(0.15));

  // direction maximum: e1 estimate at least the e2 estimate
  double q_e1 = 0, q_e2 = 0;
  for (const DirectionEstimate& d : est.per_direction) {
    if (d.direction == 0) q_e1 = d.Q;
    if (d.direction == 1) q_e2 = d.Q;
  }
  CHECK(q_e1 >= q_e2 - 1e-9);
}

TEST_CASE("cross-exponent consistency") {
  const SweepTable table = sweep({2, 0, 0, 4}, {0}, {2.0, 3.5}, 3);
  double prev = 1e300;
  for (int n = 1; n <= 3; ++n) {
    const ModulusResult* lo = table.find(0, n, 2.0);
    const ModulusResult* hi = table.find(0, n, 3.5);
    REQUIRE(lo != nullptr);
    REQUIRE(hi != nullptr);
    const double ratio = hi->value / lo->value;
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("estimate stability between depths") {
  const SweepTable t3 = sweep({2, 0, 0, 4}, {0, 1}, kGrid, 3);
  const SweepTable t4 = sweep({2, 0, 0, 4}, {0, 1}, kGrid, 4);
  const double q3 = estimate_Q(t3).Q;
  const double q4 = estimate_Q(t4).Q;
  CHECK(std::abs(q4 - q3) < 0.2);
}

TEST_CASE("report compares against the oracle") {
  const SweepTable table = sweep({2, 0, 0, 2}, {0, 1}, kGrid, 3);
  const ComparisonRecord rec = report({2, 0, 0, 2}, estimate_Q(table));
  CHECK(rec.oracle == doctest::Approx(2.0));
  CHECK(rec.attained);
  CHECK(rec.gap <= 0.3);
}

TEST_CASE("sheared matrix sweeps only the supported direction") {
  const SweepTable table = sweep({2, 1, 0, 2}, {0, 1}, {2.0, 3.0, 4.0}, 3);
  CHECK(table.find(0, 1, 2.0) == nullptr);   // e1 unsupported on sheared covers
  REQUIRE(table.find(1, 1, 2.0) != nullptr); // e2 fine
  const ExponentEstimate est = estimate_Q(table);
  CHECK(est.per_direction.size() == 1);
}

TEST_CASE("sweep csv has one row per cell") {
  const SweepTable table = sweep({2, 0, 0, 2}, {0}, {2.0, 3.0}, 3);
  const std::string csv = sweep_to_csv(table);
  size_t rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 1 + table.rows.size());
  CHECK(table.rows.size() == 6);
}

TEST_CASE("sweep rejects bad grids") {
  CHECK_THROWS_AS(sweep({2, 0, 0, 2}, {0}, {2.0, 2.0}, 3), InputError);
  CHECK_THROWS_AS(sweep({2, 0, 0, 2}, {0}, {1.0, 2.0}, 3), InputError);
  CHECK_THROWS_AS(estimate_Q(sweep({2, 0, 0, 2}, {0}, {2.0, 3.0}, 2)), InputError);
}

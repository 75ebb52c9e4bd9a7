#include <cmath>
#include <set>
#include <string>

#include "confdim/cover.hpp"
#include "confdim/io.hpp"
#include "doctest.h"

using namespace confdim;

TEST_CASE("subdivision piece counts are exactly |det|^n") {
  for (int n = 0; n <= 3; ++n) {
    CHECK(subdivision_cover({2, 0, 0, 2}, n).piece_count() ==
          static_cast<int>(std::pow(4, n)));
    CHECK(subdivision_cover({2, 0, 0, 4}, n).piece_count() ==
          static_cast<int>(std::pow(8, n)));
  }
  CHECK(subdivision_cover({2, 1, 0, 2}, 2).piece_count() == 16);
}

TEST_CASE("2x2 torus grid is complete") {
  const Cover c = subdivision_cover({2, 0, 0, 2}, 1);
  REQUIRE(c.piece_count() == 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) CHECK(c.adjacent(a, b));
}

TEST_CASE("diag(2,4) level 2 is a 4x16 grid") {
  const Cover c = subdivision_cover({2, 0, 0, 4}, 2);
  CHECK(c.piece_count() == 64);
  CHECK(c.k1 == 4);
  CHECK(c.k2 == 16);
  CHECK(c.slab_count[0] == 4);
  CHECK(c.slab_count[1] == 16);
  CHECK(c.nerve_connected());
}

TEST_CASE("level 0 cover is a single piece") {
  const Cover c = subdivision_cover({3, 0, 0, 9}, 0);
  CHECK(c.piece_count() == 1);
  CHECK(c.adj.empty());
  CHECK(c.nerve_connected());
}

TEST_CASE("piece budget is enforced with the count in the message") {
  CHECK_THROWS_AS(subdivision_cover({2, 0, 0, 2}, 12, 1000), BudgetError);
}

TEST_CASE("mesh decays like lambda^-n in the parabolic metric") {
  const IntMatrix2 A{2, 0, 0, 4};
  double prev = 0;
  for (int n = 1; n <= 4; ++n) {
    const double mesh = subdivision_cover(A, n).mesh();
    if (n > 1) {
      const double ratio = mesh / prev;
      CHECK(ratio >= 0.5 / 2);
      CHECK(ratio <= 2.0 / 2);
    }
    prev = mesh;
  }
}

TEST_CASE("sheared subdivision cover keeps slabs only along e2") {
  const Cover c = subdivision_cover({2, 1, 0, 2}, 1);
  CHECK(c.piece_count() == 4);
  CHECK(c.slab_count[0] == 0);
  CHECK(c.slab_count[1] == 2);
  CHECK(c.nerve_connected());
}

TEST_CASE("net covers") {
  const ParabolicMetric m(1.0, {1, 0, 0, 1});
  const Cover c0 = net_cover(m, 0);
  CHECK(c0.piece_count() >= 1);
  CHECK(c0.piece_count() <= 4);
  CHECK(c0.nerve_connected());

  const Cover c2 = net_cover(m, 2);
  CHECK(c2.nerve_connected());
  const QuasipackingReport q = verify_quasipacking(c2);
  CHECK(q.ok);
  CHECK(q.K <= 2.0 + 1e-9);
}

TEST_CASE("net cover growth at alpha 0.5 tracks Q = 3") {
  const ParabolicMetric m(0.5, {1, 0, 0, 1});
  const int a = net_cover(m, 1).piece_count();
  const int b = net_cover(m, 2).piece_count();
  const double growth = static_cast<double>(b) / a;
  CHECK(growth >= 8.0 / 16);
  CHECK(growth <= 8.0 * 16);
}

TEST_CASE("quasipacking constants for subdivision covers") {
  const QuasipackingReport q = verify_quasipacking(subdivision_cover({2, 0, 0, 2}, 2));
  CHECK(q.ok);
  CHECK(q.K <= 2 * std::sqrt(2.0));

  const QuasipackingReport single =
      verify_quasipacking(subdivision_cover({2, 0, 0, 2}, 0));
  CHECK(single.ok);
  CHECK(single.K == doctest::Approx(1.0));
}

TEST_CASE("self cover map multiplicities") {
  const SelfCoverMap scm = self_cover_map({2, 0, 0, 2}, 0);
  CHECK(scm.degree == 4);
  CHECK(scm.source_cover.piece_count() == 4);
  CHECK(scm.target_cover.piece_count() == 1);
  for (int t : scm.piece_map) CHECK(t == 0);

  const SelfCoverMap scm2 = self_cover_map({2, 0, 0, 4}, 1);
  CHECK(scm2.degree == 8);
  std::vector<int> pre(scm2.target_cover.piece_count(), 0);
  for (int t : scm2.piece_map) ++pre[t];
  for (int count : pre) CHECK(count == 8);
  validate_cover_map(scm2.map());
}

TEST_CASE("cover map validation catches broken maps") {
  const SelfCoverMap scm = self_cover_map({2, 0, 0, 2}, 1);
  CoverMap broken = scm.map();
  broken.piece_map.assign(broken.piece_map.size(), 0);  // all onto one piece
  CHECK_THROWS_AS(validate_cover_map(broken), InputError);
}

TEST_CASE("grid cover fixture") {
  const Cover g = grid_cover(3, 3);
  CHECK(g.piece_count() == 9);
  CHECK(g.adjacent(0, 1));
  CHECK_FALSE(g.adjacent(0, 4));  // rook adjacency, no diagonals
  CHECK_FALSE(g.adjacent(0, 2));
  CHECK(g.nerve_connected());
  const Cover king = grid_cover(3, 3, false, true);
  CHECK(king.adjacent(0, 4));
}

TEST_CASE("quasipacking certifies K <= 4 on sheared and complex covers") {
  struct Case {
    IntMatrix2 A;
    int n;
  };
  for (const Case c : {Case{{2, 1, 0, 2}, 2}, Case{{0, -2, 1, 0}, 2},
                       Case{{0, -2, 1, 0}, 3}, Case{{-2, 0, 0, 3}, 2}}) {
    const Cover cover = subdivision_cover(c.A, c.n);
    const QuasipackingReport q = verify_quasipacking(cover);
    CHECK(q.ok);
    CHECK(q.K <= 4.0);
    CHECK(cover.nerve_connected());
  }
}

TEST_CASE("net raster budget is rejected with an explicit bound") {
  const ParabolicMetric m(0.5, {1, 0, 0, 1});
  CHECK_THROWS_AS(maximal_net(m, 1.0 / 1024, 100000), BudgetError);
  try {
    maximal_net(m, 1.0 / 1024, 100000);
  } catch (const BudgetError& e) {
    CHECK(e.budget == 100000);
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("exact centers serialize to the expected rationals") {
  const Cover c = subdivision_cover({2, 0, 0, 4}, 1);
  // first cell center is (1/4, 1/8)
  CHECK(c.pieces[0].cx == Rational(1, 4));
  CHECK(c.pieces[0].cy == Rational(1, 8));
}

TEST_CASE("cover json export is stable and carries the schema fields") {
  const Cover c = subdivision_cover({2, 0, 0, 2}, 1);
  const std::string a = cover_to_json(c);
  const std::string b = cover_to_json(subdivision_cover({2, 0, 0, 2}, 1));
  CHECK(a == b);
  for (const char* field : {"\"level\"", "\"kind\"", "\"pieces\"", "\"adjacency\"",
                            "\"center\"", "\"center_frac\"", "\"radius\""})
    CHECK(a.find(field) != std::string::npos);
}

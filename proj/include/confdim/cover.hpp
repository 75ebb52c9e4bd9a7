#ifndef CONFDIM_COVER_HPP
#define CONFDIM_COVER_HPP

#include <cstdint>
#include <vector>

#include "confdim/geometry.hpp"
#include "confdim/rational.hpp"

namespace confdim {

std::int64_t default_piece_budget();  // CONFDIM_PIECE_BUDGET or 200000

struct Piece {
  int id = 0;
  Vec2 center;
  double radius = 0;  // outradius proxy in the cover's metric
  int level = 0;
  // Exact center for subdivision/grid covers (exact == false for net covers).
  Rational cx{0, 1}, cy{0, 1};
  bool exact = false;
};

enum class CoverKind { Subdivision, NetBall, Grid };

const char* to_string(CoverKind kind);

// Finite cover of the torus (or the unit square for plane grid fixtures)
// with nerve adjacency. Pieces are closed cells/balls; adjacency means the
// closures meet, including corner contact and torus wrap.
struct Cover {
  int level = 0;
  CoverKind kind = CoverKind::Grid;
  IntMatrix2 matrix;   // Subdivision
  double epsilon = 0;  // NetBall
  bool wrap = false;   // torus adjacency (false for plane grid fixtures)
  bool king = false;   // corner contact counts as adjacent

  // Class grid: piece id = j*k1 + i with i in [0,k1), j in [0,k2).
  // k1 == 0 when the cover has no grid structure (net covers).
  int k1 = 0, k2 = 0;

  // Slab structure per coordinate: slab_count[d] > 0 when the cells decompose
  // into full-width slabs along x_d, so the torus cut x_d = 0 runs along cell
  // boundaries. Sheared subdivision covers lose this in the sheared direction.
  int slab_count[2] = {0, 0};
  std::vector<int> slab[2];  // per-piece slab index when slab_count[d] > 0

  ParabolicMetric metric;  // metric used for radii and diameters
  std::vector<Piece> pieces;

  // Symmetric irreflexive adjacency in CSR form, neighbor lists sorted.
  std::vector<int> adj_off, adj;

  int piece_count() const { return static_cast<int>(pieces.size()); }
  bool adjacent(int a, int b) const;
  std::vector<std::pair<int, int>> edge_list() const;  // i < j, sorted
  bool nerve_connected() const;
  double mesh() const;  // max piece diameter (2*radius proxy)
};

// Cells of the lattice A^{-n} Z^2 on the torus; |det A|^n pieces. Centers are
// exact rationals; adjacency includes corner contact and wrap. Radius is half
// the cell corner diameter in the parabolic metric of A (RealDistinct case),
// in the l1 metric otherwise.
Cover subdivision_cover(const IntMatrix2& A, int n,
                        std::int64_t piece_budget = default_piece_budget());

// Balls of radius 2^-n centered on maximal_net(m, 2^-n); adjacency when
// center distance <= sum of radii.
Cover net_cover(const ParabolicMetric& m, int n,
                std::int64_t piece_budget = default_piece_budget());

// k1 x k2 grid on [0,1]^2, rook adjacency and no wrap by default.
// Fixture plumbing for the modulus test problems.
Cover grid_cover(int k1, int k2, bool wrap = false, bool king = false);

struct QuasipackingReport {
  double K = 1;    // certified outer/inner ratio
  bool ok = false;
  double min_pair_gap = 0;  // min over adjacent pairs of d(ci,cj) - (ri + rj), inner radii
  int bad_a = -1, bad_b = -1;
};

// Smallest K certified by construction: inner balls of half the separation
// are pairwise disjoint (checked on all adjacent pairs), outer balls of
// radius K*inner contain the pieces. A failure is a constructor bug, not a
// user error, so this reports instead of throwing.
QuasipackingReport verify_quasipacking(const Cover& cover);

struct CoverMap {
  const Cover* source = nullptr;
  const Cover* target = nullptr;
  std::vector<int> piece_map;  // source piece id -> target piece id
  int degree = 1;
};

// Multiplicity (1..degree preimages per target piece) and adjacency respect.
void validate_cover_map(const CoverMap& map);

// The cell map induced by f_A from level n+1 to level n.
struct SelfCoverMap {
  Cover source_cover;  // subdivision_cover(A, n+1)
  Cover target_cover;  // subdivision_cover(A, n)
  std::vector<int> piece_map;
  int degree = 1;

  CoverMap map() const { return {&source_cover, &target_cover, piece_map, degree}; }
};

SelfCoverMap self_cover_map(const IntMatrix2& A, int n,
                            std::int64_t piece_budget = default_piece_budget());

} // namespace confdim

#endif

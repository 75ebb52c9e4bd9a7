#include "confdim/cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace confdim {

std::int64_t default_piece_budget() {
  if (const char* env = std::getenv("CONFDIM_PIECE_BUDGET")) {
    const std::int64_t v = std::atoll(env);
    if (v > 0) return v;
  }
  return 200000;
}

const char* to_string(CoverKind kind) {
  switch (kind) {
    case CoverKind::Subdivision: return "subdivision";
    case CoverKind::NetBall: return "netball";
    case CoverKind::Grid: return "grid";
  }
  return "?";
}

bool Cover::adjacent(int a, int b) const {
  if (a == b) return false;
  const int* begin = adj.data() + adj_off[a];
  const int* end = adj.data() + adj_off[a + 1];
  return std::binary_search(begin, end, b);
}

std::vector<std::pair<int, int>> Cover::edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < piece_count(); ++a)
    for (int k = adj_off[a]; k < adj_off[a + 1]; ++k)
      if (a < adj[k]) out.emplace_back(a, adj[k]);
  return out;
}

bool Cover::nerve_connected() const {
  const int n = piece_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int k = adj_off[u]; k < adj_off[u + 1]; ++k) {
      const int v = adj[k];
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

double Cover::mesh() const {
  double m = 0;
  for (const Piece& p : pieces) m = std::max(m, 2 * p.radius);
  return m;
}

namespace {

struct Mat2i {
  std::int64_t a, b, c, d;  // columns (a,c) and (b,d)
  std::int64_t det() const { return a * d - b * c; }
};

Mat2i mat_pow(const IntMatrix2& A, int n) {
  Mat2i r{1, 0, 0, 1};
  Mat2i base{A.a, A.b, A.c, A.d};
  for (int i = 0; i < n; ++i) {
    r = Mat2i{r.a * base.a + r.b * base.c, r.a * base.b + r.b * base.d,
              r.c * base.a + r.d * base.c, r.c * base.b + r.d * base.d};
  }
  return r;
}

std::int64_t floor_div(std::int64_t x, std::int64_t y) {
  std::int64_t q = x / y;
  if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
  return q;
}

void ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& g, std::int64_t& x,
             std::int64_t& y) {
  if (b == 0) {
    if (a >= 0) { g = a; x = 1; y = 0; }
    else { g = -a; x = -1; y = 0; }
    return;
  }
  std::int64_t x1, y1;
  ext_gcd(b, a % b, g, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
}

// Lower-triangular column Hermite form of the lattice M Z^2: columns
// (h00, h10) and (0, h11) with h00, h11 > 0. Classes of Z^2 / M Z^2 are
// represented by (i, j) in [0,h00) x [0,h11).
struct Hnf {
  std::int64_t h00, h10, h11;

  std::pair<std::int64_t, std::int64_t> reduce(std::int64_t v1, std::int64_t v2) const {
    const std::int64_t q1 = floor_div(v1, h00);
    v1 -= q1 * h00;
    v2 -= q1 * h10;
    v2 -= floor_div(v2, h11) * h11;
    return {v1, v2};
  }
};

Hnf hermite_form(const Mat2i& M) {
  std::int64_t g, x, y;
  ext_gcd(M.a, M.b, g, x, y);
  Hnf h;
  h.h00 = g;
  h.h10 = x * M.c + y * M.d;
  std::int64_t second = M.det() / g;
  h.h11 = second >= 0 ? second : -second;
  // Normalize h10 into [0, h00) for a canonical form.
  h.h10 -= floor_div(h.h10, h.h00) * h.h00;
  return h;
}

// Detects whether cell intervals along coordinate d tile the circle in full
// slabs of width 1/S; fills slab indices when they do. Works on the exact
// rational corner ranges.
bool detect_slabs(const std::vector<std::pair<Rational, Rational>>& ranges,
                  int& slab_count, std::vector<int>& slabs) {
  if (ranges.empty()) return false;
  const Rational width = ranges[0].second - ranges[0].first;
  if (width.num != 1) return false;  // slabs must have width 1/S exactly
  const std::int64_t S = width.den;
  slabs.assign(ranges.size(), 0);
  for (size_t i = 0; i < ranges.size(); ++i) {
    if (ranges[i].second - ranges[i].first != width) return false;
    const Rational f = ranges[i].first.mod1();
    // f must equal m/S.
    if (S % f.den != 0) return false;
    const std::int64_t m = f.num * (S / f.den);
    slabs[i] = static_cast<int>(m);
  }
  slab_count = static_cast<int>(S);
  return true;
}

void finalize_adjacency(Cover& cover, const std::set<std::pair<int, int>>& edges) {
  const int n = cover.piece_count();
  std::vector<std::vector<int>> lists(n);
  for (const auto& [a, b] : edges) {
    lists[a].push_back(b);
    lists[b].push_back(a);
  }
  cover.adj_off.assign(n + 1, 0);
  cover.adj.clear();
  for (int i = 0; i < n; ++i) {
    std::sort(lists[i].begin(), lists[i].end());
    lists[i].erase(std::unique(lists[i].begin(), lists[i].end()), lists[i].end());
    cover.adj_off[i + 1] = cover.adj_off[i] + static_cast<int>(lists[i].size());
    cover.adj.insert(cover.adj.end(), lists[i].begin(), lists[i].end());
  }
}

} // namespace

Cover subdivision_cover(const IntMatrix2& A, int n, std::int64_t piece_budget) {
  const SpectralClass cls = classify(A);
  if (cls.tag == SpectralTag::NotExpanding)
    throw InputError("subdivision_cover: matrix is not expanding");
  if (n < 0) throw InputError("subdivision_cover: level must be >= 0");

  const std::int64_t absdet = std::llabs(A.det());
  std::int64_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (count > piece_budget / absdet) {
      const double requested = std::pow(static_cast<double>(absdet), n);
      std::ostringstream os;
      os << "subdivision_cover: |det A|^n = " << requested
         << " pieces exceeds budget " << piece_budget;
      throw BudgetError(os.str(), static_cast<std::int64_t>(requested), piece_budget);
    }
    count *= absdet;
  }

  const Mat2i M = mat_pow(A, n);
  const Hnf hnf = hermite_form(M);
  const std::int64_t k1 = hnf.h00, k2 = hnf.h11;

  Cover cover;
  cover.level = n;
  cover.kind = CoverKind::Subdivision;
  cover.matrix = A;
  cover.wrap = true;
  cover.king = true;
  cover.k1 = static_cast<int>(k1);
  cover.k2 = static_cast<int>(k2);
  cover.metric = (cls.tag == SpectralTag::RealDistinct)
                     ? ParabolicMetric::from_matrix(A)
                     : ParabolicMetric();

  // A^{-n} = adj(M)/det(M); cell for class k is A^{-n}([0,1]^2 + k).
  const std::int64_t D = M.det();
  auto cell_point = [&](std::int64_t kx, std::int64_t ky, const Rational& ox,
                        const Rational& oy, Rational& px, Rational& py) {
    const Rational vx = Rational(kx) + ox;
    const Rational vy = Rational(ky) + oy;
    px = (vx * Rational(M.d) - vy * Rational(M.b)) / Rational(D);
    py = (vy * Rational(M.a) - vx * Rational(M.c)) / Rational(D);
  };

  cover.pieces.resize(static_cast<size_t>(k1 * k2));
  std::vector<std::pair<Rational, Rational>> xranges(cover.pieces.size());
  std::vector<std::pair<Rational, Rational>> yranges(cover.pieces.size());

  for (std::int64_t j = 0; j < k2; ++j) {
    for (std::int64_t i = 0; i < k1; ++i) {
      const int id = static_cast<int>(j * k1 + i);
      Piece& piece = cover.pieces[id];
      piece.id = id;
      piece.level = n;
      piece.exact = true;
      cell_point(i, j, Rational(1, 2), Rational(1, 2), piece.cx, piece.cy);
      piece.cx = piece.cx.mod1();
      piece.cy = piece.cy.mod1();
      piece.center = {piece.cx.to_double(), piece.cy.to_double()};

      // Raw (unreduced) corners give the diameter and the slab ranges.
      Rational xs[4], ys[4];
      int t = 0;
      Vec2 corners[4];
      for (int dx = 0; dx <= 1; ++dx)
        for (int dy = 0; dy <= 1; ++dy) {
          cell_point(i, j, Rational(dx), Rational(dy), xs[t], ys[t]);
          corners[t] = {xs[t].to_double(), ys[t].to_double()};
          ++t;
        }
      double diam = 0;
      for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v)
          diam = std::max(diam, cover.metric.distance(corners[u], corners[v],
                                                      Ambient::Plane));
      piece.radius = diam / 2;

      auto [xmin, xmax] = std::minmax({xs[0], xs[1], xs[2], xs[3]});
      auto [ymin, ymax] = std::minmax({ys[0], ys[1], ys[2], ys[3]});
      xranges[id] = {xmin, xmax};
      yranges[id] = {ymin, ymax};
    }
  }

  cover.slab_count[0] = cover.slab_count[1] = 0;
  if (!detect_slabs(xranges, cover.slab_count[0], cover.slab[0])) {
    cover.slab_count[0] = 0;
    cover.slab[0].clear();
  }
  if (!detect_slabs(yranges, cover.slab_count[1], cover.slab[1])) {
    cover.slab_count[1] = 0;
    cover.slab[1].clear();
  }

  // Closures of cells k and k' meet iff k - k' has a representative in
  // {-1,0,1}^2 modulo M Z^2.
  std::set<std::pair<int, int>> edges;
  for (std::int64_t j = 0; j < k2; ++j) {
    for (std::int64_t i = 0; i < k1; ++i) {
      const int id = static_cast<int>(j * k1 + i);
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          if (dx == 0 && dy == 0) continue;
          auto [ri, rj] = hnf.reduce(i + dx, j + dy);
          const int nid = static_cast<int>(rj * k1 + ri);
          if (nid != id) edges.insert({std::min(id, nid), std::max(id, nid)});
        }
      }
    }
  }
  finalize_adjacency(cover, edges);
  return cover;
}

Cover net_cover(const ParabolicMetric& m, int n, std::int64_t piece_budget) {
  const double eps = std::pow(2.0, -n);
  Net net = maximal_net(m, std::min(eps, m.torus_diameter()));
  if (static_cast<std::int64_t>(net.points.size()) > piece_budget)
    throw BudgetError("net_cover: " + std::to_string(net.points.size()) +
                          " pieces exceeds budget " + std::to_string(piece_budget),
                      static_cast<std::int64_t>(net.points.size()), piece_budget);

  Cover cover;
  cover.level = n;
  cover.kind = CoverKind::NetBall;
  cover.epsilon = eps;
  cover.wrap = true;
  cover.metric = m;
  cover.pieces.resize(net.points.size());
  for (size_t i = 0; i < net.points.size(); ++i) {
    Piece& p = cover.pieces[i];
    p.id = static_cast<int>(i);
    p.center = net.points[i];
    p.radius = eps;
    p.level = n;
    p.exact = false;
  }
  std::set<std::pair<int, int>> edges;
  for (int a = 0; a < cover.piece_count(); ++a)
    for (int b = a + 1; b < cover.piece_count(); ++b)
      if (m.distance(cover.pieces[a].center, cover.pieces[b].center,
                     Ambient::Torus) <= cover.pieces[a].radius + cover.pieces[b].radius)
        edges.insert({a, b});
  finalize_adjacency(cover, edges);
  return cover;
}

Cover grid_cover(int k1, int k2, bool wrap, bool king) {
  if (k1 < 1 || k2 < 1) throw InputError("grid_cover: dimensions must be >= 1");
  Cover cover;
  cover.kind = CoverKind::Grid;
  cover.wrap = wrap;
  cover.king = king;
  cover.k1 = k1;
  cover.k2 = k2;
  cover.metric = ParabolicMetric();
  cover.slab_count[0] = k1;
  cover.slab_count[1] = k2;
  cover.slab[0].resize(static_cast<size_t>(k1) * k2);
  cover.slab[1].resize(static_cast<size_t>(k1) * k2);
  cover.pieces.resize(static_cast<size_t>(k1) * k2);
  for (int j = 0; j < k2; ++j) {
    for (int i = 0; i < k1; ++i) {
      const int id = j * k1 + i;
      Piece& p = cover.pieces[id];
      p.id = id;
      p.cx = Rational(2 * i + 1, 2 * static_cast<std::int64_t>(k1));
      p.cy = Rational(2 * j + 1, 2 * static_cast<std::int64_t>(k2));
      p.center = {p.cx.to_double(), p.cy.to_double()};
      p.radius = (1.0 / k1 + 1.0 / k2) / 2;  // half the l1 cell diameter
      p.exact = true;
      cover.slab[0][id] = i;
      cover.slab[1][id] = j;
    }
  }
  std::set<std::pair<int, int>> edges;
  auto wrap_delta = [&](int i, int di, int k) -> int {
    int t = i + di;
    if (wrap) {
      if (t < 0) t += k;
      if (t >= k) t -= k;
      return t;
    }
    return (t < 0 || t >= k) ? -1 : t;
  };
  for (int j = 0; j < k2; ++j) {
    for (int i = 0; i < k1; ++i) {
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          if (dx == 0 && dy == 0) continue;
          if (!king && dx != 0 && dy != 0) continue;
          const int ni = wrap_delta(i, dx, k1);
          const int nj = wrap_delta(j, dy, k2);
          if (ni < 0 || nj < 0) continue;
          const int id = j * k1 + i, nid = nj * k1 + ni;
          if (id != nid) edges.insert({std::min(id, nid), std::max(id, nid)});
        }
      }
    }
  }
  finalize_adjacency(cover, edges);
  return cover;
}

QuasipackingReport verify_quasipacking(const Cover& cover) {
  QuasipackingReport rep;
  const int n = cover.piece_count();
  if (n == 0) return rep;
  const Ambient amb = cover.wrap ? Ambient::Torus : Ambient::Plane;

  // Inner radius: half the separation to the nearest neighbor, capped so the
  // inner ball stays inside the piece (edge distance for cells, the ball
  // radius for net balls). Disjointness is then a per-pair inequality.
  std::vector<double> inner(n);
  for (int a = 0; a < n; ++a) {
    double sep = std::numeric_limits<double>::infinity();
    for (int k = cover.adj_off[a]; k < cover.adj_off[a + 1]; ++k) {
      const int b = cover.adj[k];
      sep = std::min(sep, cover.metric.distance(cover.pieces[a].center,
                                                cover.pieces[b].center, amb));
    }
    inner[a] = std::isfinite(sep) ? sep / 2 : cover.pieces[a].radius;
    inner[a] = std::min(inner[a], cover.pieces[a].radius);
    if (inner[a] <= 0) inner[a] = cover.pieces[a].radius;
  }
  if ((cover.kind == CoverKind::Subdivision || cover.kind == CoverKind::Grid) &&
      n > 1) {
    // Cap by the sampled metric distance from the center to the cell
    // boundary, in the plane chart around the cell. A single wrap-around
    // cell has no boundary, so the cap does not apply there.
    const Mat2i M = mat_pow(cover.matrix, cover.level);
    const std::int64_t D = cover.kind == CoverKind::Subdivision ? M.det() : 1;
    for (int a = 0; a < n; ++a) {
      const std::int64_t i = a % std::max(cover.k1, 1);
      const std::int64_t j = a / std::max(cover.k1, 1);
      auto corner = [&](double ox, double oy) -> Vec2 {
        if (cover.kind == CoverKind::Grid)
          return {(i + ox) / cover.k1, (j + oy) / cover.k2};
        const double vx = static_cast<double>(i) + ox;
        const double vy = static_cast<double>(j) + oy;
        return {(vx * M.d - vy * M.b) / D, (vy * M.a - vx * M.c) / D};
      };
      const Vec2 center = corner(0.5, 0.5);
      double edge = std::numeric_limits<double>::infinity();
      const int K = 16;
      for (int t = 0; t <= K; ++t) {
        const double s = static_cast<double>(t) / K;
        for (const Vec2 q : {corner(s, 0.0), corner(s, 1.0), corner(0.0, s),
                             corner(1.0, s)})
          edge = std::min(edge, cover.metric.distance(center, q, Ambient::Plane));
      }
      inner[a] = std::min(inner[a], edge);
    }
  }

  rep.ok = true;
  rep.min_pair_gap = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    for (int k = cover.adj_off[a]; k < cover.adj_off[a + 1]; ++k) {
      const int b = cover.adj[k];
      if (b <= a) continue;
      const double d = cover.metric.distance(cover.pieces[a].center,
                                             cover.pieces[b].center, amb);
      const double gap = d - (inner[a] + inner[b]);
      if (gap < rep.min_pair_gap) rep.min_pair_gap = gap;
      if (gap < -1e-12) {
        rep.ok = false;
        rep.bad_a = a;
        rep.bad_b = b;
      }
    }
  }
  if (!std::isfinite(rep.min_pair_gap)) rep.min_pair_gap = 0;

  double K = 1;
  for (int a = 0; a < n; ++a)
    K = std::max(K, cover.pieces[a].radius / inner[a]);
  rep.K = K;
  return rep;
}

void validate_cover_map(const CoverMap& map) {
  const Cover& src = *map.source;
  const Cover& tgt = *map.target;
  if (static_cast<int>(map.piece_map.size()) != src.piece_count())
    throw InputError("CoverMap: piece_map size mismatch");
  std::vector<int> preimages(tgt.piece_count(), 0);
  for (int s = 0; s < src.piece_count(); ++s) {
    const int t = map.piece_map[s];
    if (t < 0 || t >= tgt.piece_count())
      throw InputError("CoverMap: image id out of range");
    ++preimages[t];
  }
  for (int t = 0; t < tgt.piece_count(); ++t)
    if (preimages[t] < 1 || preimages[t] > map.degree)
      throw InputError("CoverMap: target piece " + std::to_string(t) + " has " +
                       std::to_string(preimages[t]) + " preimages, degree is " +
                       std::to_string(map.degree));
  for (const auto& [a, b] : src.edge_list()) {
    const int ta = map.piece_map[a], tb = map.piece_map[b];
    if (ta != tb && !tgt.adjacent(ta, tb))
      throw InputError("CoverMap: adjacency not respected at source edge (" +
                       std::to_string(a) + "," + std::to_string(b) + ")");
  }
}

SelfCoverMap self_cover_map(const IntMatrix2& A, int n, std::int64_t piece_budget) {
  SelfCoverMap out;
  out.source_cover = subdivision_cover(A, n + 1, piece_budget);
  out.target_cover = subdivision_cover(A, n, piece_budget);
  out.degree = static_cast<int>(std::llabs(A.det()));

  // Class (i,j) at level n+1 reduces to its class modulo A^n Z^2: the cell
  // A^{-(n+1)}(C + k) maps under f_A onto A^{-n}(C + k).
  const Mat2i Mn = mat_pow(A, n);
  const Hnf hn = hermite_form(Mn);
  const int k1s = out.source_cover.k1;
  out.piece_map.resize(out.source_cover.pieces.size());
  for (int j = 0; j < out.source_cover.k2; ++j)
    for (int i = 0; i < k1s; ++i) {
      auto [ri, rj] = hn.reduce(i, j);
      out.piece_map[static_cast<size_t>(j) * k1s + i] =
          static_cast<int>(rj * out.target_cover.k1 + ri);
    }
  validate_cover_map(out.map());
  return out;
}

} // namespace confdim

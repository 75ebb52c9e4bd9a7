#include "confdim/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace confdim {

CombCurve CombCurve::from_chain(std::vector<int> chain, const Cover& cover) {
  if (chain.empty()) throw InputError("CombCurve: chain must be nonempty");
  for (int id : chain)
    if (id < 0 || id >= cover.piece_count())
      throw InputError("CombCurve: piece id " + std::to_string(id) + " not in cover");
  for (size_t i = 0; i + 1 < chain.size(); ++i)
    if (chain[i] != chain[i + 1] && !cover.adjacent(chain[i], chain[i + 1]))
      throw InputError("CombCurve: pieces " + std::to_string(chain[i]) + " and " +
                       std::to_string(chain[i + 1]) + " are not adjacent");
  CombCurve c;
  c.chain = std::move(chain);
  c.support = c.chain;
  std::sort(c.support.begin(), c.support.end());
  c.support.erase(std::unique(c.support.begin(), c.support.end()), c.support.end());
  return c;
}

double CombCurve::length(std::span<const double> rho) const {
  double total = 0;
  for (int id : support) total += rho[id];
  return total;
}

FamilySpec FamilySpec::explicit_family(std::vector<CombCurve> curves) {
  FamilySpec s;
  s.variant = FamilyVariant::Explicit;
  s.curves = std::move(curves);
  return s;
}

FamilySpec FamilySpec::connector(std::vector<int> source, std::vector<int> target) {
  if (source.empty() || target.empty())
    throw InputError("Connector: source and target must be nonempty");
  std::sort(source.begin(), source.end());
  std::sort(target.begin(), target.end());
  for (int id : source)
    if (std::binary_search(target.begin(), target.end(), id))
      throw InputError("Connector: source and target must be disjoint");
  FamilySpec s;
  s.variant = FamilyVariant::Connector;
  s.source = std::move(source);
  s.target = std::move(target);
  return s;
}

FamilySpec FamilySpec::torus_loop(int direction) {
  if (direction != 0 && direction != 1)
    throw InputError("TorusLoop: direction must be 0 (e1) or 1 (e2)");
  FamilySpec s;
  s.variant = FamilyVariant::TorusLoop;
  s.direction = direction;
  return s;
}

FamilySpec FamilySpec::through_piece(int s0, int min_support) {
  if (min_support < 2) throw InputError("ThroughPiece: min_support must be >= 2");
  FamilySpec s;
  s.variant = FamilyVariant::ThroughPiece;
  s.s0 = s0;
  s.min_support = min_support;
  return s;
}

std::string FamilySpec::describe() const {
  std::ostringstream os;
  switch (variant) {
    case FamilyVariant::Explicit: os << "explicit(" << curves.size() << ")"; break;
    case FamilyVariant::Connector:
      os << "connector(" << source.size() << "->" << target.size() << ")";
      break;
    case FamilyVariant::TorusLoop: os << "loop-e" << (direction + 1); break;
    case FamilyVariant::ThroughPiece:
      os << "through(" << s0 << ",min=" << min_support << ")";
      break;
    case FamilyVariant::Union: os << "union"; break;
  }
  return os.str();
}

std::vector<int> side_pieces(const Cover& cover, const std::string& side) {
  int dir, slab;
  if (side == "left") { dir = 0; slab = 0; }
  else if (side == "right") { dir = 0; slab = cover.slab_count[0] - 1; }
  else if (side == "bottom") { dir = 1; slab = 0; }
  else if (side == "top") { dir = 1; slab = cover.slab_count[1] - 1; }
  else throw InputError("side_pieces: unknown side \"" + side + "\"");
  if (cover.slab_count[dir] <= 0)
    throw InputError("side_pieces: cover has no slab structure in that direction");
  std::vector<int> out;
  for (int id = 0; id < cover.piece_count(); ++id)
    if (cover.slab[dir][id] == slab) out.push_back(id);
  return out;
}

namespace {

bool reachable(const std::vector<int>& off, const std::vector<int>& adj,
               const std::vector<int>& sources, const std::vector<int>& targets) {
  if (sources.empty() || targets.empty()) return false;
  const int n = static_cast<int>(off.size()) - 1;
  std::vector<char> is_target(n, 0), seen(n, 0);
  for (int t : targets) is_target[t] = 1;
  std::vector<int> stack;
  for (int s : sources) {
    if (is_target[s]) return true;
    if (!seen[s]) { seen[s] = 1; stack.push_back(s); }
  }
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int k = off[u]; k < off[u + 1]; ++k) {
      const int v = adj[k];
      if (seen[v]) continue;
      if (is_target[v]) return true;
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  return false;
}

} // namespace

Family realize(const FamilySpec& spec, const Cover& cover) {
  Family fam;
  fam.cover_ = &cover;
  fam.spec_ = spec;

  switch (spec.variant) {
    case FamilyVariant::Explicit: {
      for (const CombCurve& c : spec.curves)
        CombCurve::from_chain(c.chain, cover);  // validates against this cover
      fam.empty_ = spec.curves.empty();
      return fam;
    }
    case FamilyVariant::Connector: {
      for (int id : spec.source)
        if (id < 0 || id >= cover.piece_count())
          throw InputError("Connector: source id out of range");
      for (int id : spec.target)
        if (id < 0 || id >= cover.piece_count())
          throw InputError("Connector: target id out of range");
      fam.sources_ = spec.source;
      fam.targets_ = spec.target;
      // Membership tests binary-search these, so keep them sorted even for
      // hand-assembled specs.
      std::sort(fam.sources_.begin(), fam.sources_.end());
      std::sort(fam.targets_.begin(), fam.targets_.end());
      fam.adj_off_ = cover.adj_off;
      fam.adj_ = cover.adj;
      fam.empty_ = !reachable(fam.adj_off_, fam.adj_, fam.sources_, fam.targets_);
      return fam;
    }
    case FamilyVariant::TorusLoop: {
      const int d = spec.direction;
      const int S = cover.slab_count[d];
      if (S <= 0)
        throw InputError("TorusLoop: cover cells do not stack in full slabs along e" +
                         std::to_string(d + 1) + " (direction unsupported)");
      for (int id = 0; id < cover.piece_count(); ++id) {
        if (cover.slab[d][id] == 0) fam.sources_.push_back(id);
        if (cover.slab[d][id] == S - 1) fam.targets_.push_back(id);
      }
      // Remove adjacency across the cut. With S <= 2 the extreme slabs also
      // touch inside the fundamental cell, so those edges stay.
      fam.adj_off_.assign(cover.piece_count() + 1, 0);
      std::vector<std::vector<int>> keep(cover.piece_count());
      for (int a = 0; a < cover.piece_count(); ++a) {
        for (int k = cover.adj_off[a]; k < cover.adj_off[a + 1]; ++k) {
          const int b = cover.adj[k];
          const int sa = cover.slab[d][a], sb = cover.slab[d][b];
          const bool cut = S > 2 && std::abs(sa - sb) == S - 1;
          if (!cut) keep[a].push_back(b);
        }
      }
      for (int a = 0; a < cover.piece_count(); ++a) {
        fam.adj_off_[a + 1] = fam.adj_off_[a] + static_cast<int>(keep[a].size());
        fam.adj_.insert(fam.adj_.end(), keep[a].begin(), keep[a].end());
      }
      if (fam.sources_.empty() || fam.targets_.empty())
        throw InputError("TorusLoop: no pieces meet the cut");
      fam.empty_ = !reachable(fam.adj_off_, fam.adj_, fam.sources_, fam.targets_);
      return fam;
    }
    case FamilyVariant::ThroughPiece: {
      if (spec.s0 < 0 || spec.s0 >= cover.piece_count())
        throw InputError("ThroughPiece: piece id out of range");
      fam.sources_ = {spec.s0};
      fam.adj_off_ = cover.adj_off;
      fam.adj_ = cover.adj;
      // Nonempty iff some chain through s0 reaches min_support pieces, i.e.
      // the component of s0 is large enough.
      int comp = 0;
      {
        std::vector<char> seen(cover.piece_count(), 0);
        std::vector<int> stack{spec.s0};
        seen[spec.s0] = 1;
        while (!stack.empty()) {
          const int u = stack.back();
          stack.pop_back();
          ++comp;
          for (int k = cover.adj_off[u]; k < cover.adj_off[u + 1]; ++k)
            if (!seen[cover.adj[k]]) {
              seen[cover.adj[k]] = 1;
              stack.push_back(cover.adj[k]);
            }
        }
      }
      fam.empty_ = comp < spec.min_support;
      return fam;
    }
    case FamilyVariant::Union:
      throw InputError("realize: build unions with make_union");
  }
  throw InputError("realize: bad variant");
}

Family make_union(std::vector<const Family*> parts) {
  if (parts.empty()) throw InputError("make_union: no parts");
  Family fam;
  fam.cover_ = &parts.front()->cover();
  for (const Family* p : parts)
    if (&p->cover() != fam.cover_)
      throw InputError("make_union: parts live on different covers");
  fam.spec_.variant = FamilyVariant::Union;
  fam.parts_ = std::move(parts);
  fam.empty_ = true;
  for (const Family* p : fam.parts_)
    if (!p->empty()) fam.empty_ = false;
  return fam;
}

bool Family::contains(const CombCurve& curve) const {
  if (curve.chain.empty()) return false;
  const FamilySpec& s = spec_;
  switch (s.variant) {
    case FamilyVariant::Explicit: {
      for (const CombCurve& c : s.curves)
        if (c.support == curve.support) return true;
      return false;
    }
    case FamilyVariant::Connector:
    case FamilyVariant::TorusLoop: {
      // Endpoints on the two sides, every step inside the family graph.
      // Source/target id lists are sorted by construction.
      if (!std::binary_search(sources_.begin(), sources_.end(), curve.chain.front()))
        return false;
      if (!std::binary_search(targets_.begin(), targets_.end(), curve.chain.back()))
        return false;
      for (size_t i = 0; i + 1 < curve.chain.size(); ++i) {
        const int a = curve.chain[i], b = curve.chain[i + 1];
        if (a == b) continue;
        const int* begin = adj_.data() + adj_off_[a];
        const int* end = adj_.data() + adj_off_[a + 1];
        if (std::find(begin, end, b) == end) return false;
      }
      return true;
    }
    case FamilyVariant::ThroughPiece:
      return std::binary_search(curve.support.begin(), curve.support.end(), s.s0) &&
             static_cast<int>(curve.support.size()) >= s.min_support;
    case FamilyVariant::Union:
      for (const Family* p : parts_)
        if (p->contains(curve)) return true;
      return false;
  }
  return false;
}

namespace {

constexpr int kLexThreshold = 8192;  // exact lex tie-breaking below this size

struct DijkstraResult {
  std::vector<double> dist;
  std::vector<int> parent;
  bool found = false;
  int best_target = -1;
  double best = std::numeric_limits<double>::infinity();
};

std::vector<int> walk_path(const std::vector<int>& parent, int v) {
  std::vector<int> path;
  for (int u = v; u != -1; u = parent[u]) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

bool lex_less(const std::vector<int>& parent, int a, int b) {
  const std::vector<int> pa = walk_path(parent, a);
  const std::vector<int> pb = walk_path(parent, b);
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
}

// Node-weighted multi-source Dijkstra in two phases: a standard pass for the
// distances, then a deterministic parent assignment over the tight edges
// (dist[u] + rho[v] == dist[v]). With positive weights the tight graph is a
// DAG whose lex-minimal paths are prefix-free, so choosing for each node (in
// distance order) the predecessor with the lexicographically smallest path
// yields the lexicographically smallest shortest id sequence overall. Zero
// weights and covers above the size threshold fall back to smallest
// predecessor id, which is still deterministic.
DijkstraResult dijkstra(const std::vector<int>& off, const std::vector<int>& adj,
                        const std::vector<int>& sources,
                        const std::vector<int>& targets,
                        std::span<const double> rho) {
  const int n = static_cast<int>(off.size()) - 1;
  const bool exact_lex = n <= kLexThreshold;
  DijkstraResult res;
  res.dist.assign(n, std::numeric_limits<double>::infinity());
  res.parent.assign(n, -1);

  std::vector<char> is_source(n, 0);
  for (int s : sources) is_source[s] = 1;

  {
    std::vector<char> done(n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (int s = 0; s < n; ++s)
      if (is_source[s]) {
        res.dist[s] = rho[s];
        heap.push({res.dist[s], s});
      }
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (done[u] || du > res.dist[u]) continue;
      done[u] = 1;
      for (int k = off[u]; k < off[u + 1]; ++k) {
        const int v = adj[k];
        const double cand = res.dist[u] + rho[v];
        if (cand < res.dist[v]) {
          res.dist[v] = cand;
          heap.push({cand, v});
        }
      }
    }
  }

  // Parent assignment in (dist, id) order; only already-assigned predecessors
  // are candidates, which resolves zero-weight ties deterministically.
  std::vector<int> order;
  order.reserve(n);
  for (int v = 0; v < n; ++v)
    if (std::isfinite(res.dist[v])) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (res.dist[a] != res.dist[b]) return res.dist[a] < res.dist[b];
    return a < b;
  });
  // Zero-weight plateaus can place a node's only tight predecessor later in
  // the order, so sweep until no assignment changes (one sweep suffices for
  // positive weights).
  std::vector<char> assigned(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v : order) {
      if (assigned[v]) continue;
      bool have = false;
      const bool root = is_source[v] && res.dist[v] == rho[v];
      int best_u = -1;
      for (int k = off[v]; k < off[v + 1]; ++k) {
        const int u = adj[k];
        if (!assigned[u]) continue;
        if (res.dist[u] + rho[v] != res.dist[v]) continue;
        if (!have) {
          best_u = u;
          have = true;
        } else if (exact_lex ? lex_less(res.parent, u, best_u) : u < best_u) {
          best_u = u;
        }
      }
      if (root && have) {
        // Compare the one-piece source path [v] against best_u's path + v.
        std::vector<int> cand = walk_path(res.parent, best_u);
        cand.push_back(v);
        const std::vector<int> self{v};
        if (!exact_lex || std::lexicographical_compare(self.begin(), self.end(),
                                                       cand.begin(), cand.end()))
          best_u = -1;
      } else if (!root && !have) {
        continue;  // not reachable in the tight graph yet
      } else if (root) {
        best_u = -1;
      }
      res.parent[v] = best_u;
      assigned[v] = 1;
      changed = true;
    }
  }

  for (int t : targets) {
    if (!std::isfinite(res.dist[t]) || !assigned[t]) continue;
    if (!res.found || res.dist[t] < res.best ||
        (res.dist[t] == res.best &&
         (exact_lex ? lex_less(res.parent, t, res.best_target) : t < res.best_target))) {
      res.best = res.dist[t];
      res.best_target = t;
      res.found = true;
    }
  }
  return res;
}

ShortestCurve shortest_explicit(const std::vector<CombCurve>& curves,
                                std::span<const double> rho) {
  ShortestCurve out;
  for (const CombCurve& c : curves) {
    const double len = c.length(rho);
    if (!out.found || len < out.length ||
        (len == out.length &&
         std::lexicographical_compare(c.chain.begin(), c.chain.end(),
                                      out.curve.chain.begin(), out.curve.chain.end()))) {
      out.found = true;
      out.length = len;
      out.curve = c;
    }
  }
  return out;
}

} // namespace

ShortestCurve shortest_curve(const Family& family, std::span<const double> rho) {
  if (static_cast<int>(rho.size()) != family.cover().piece_count())
    throw InputError("shortest_curve: rho size mismatch");
  for (double w : rho)
    if (!(w >= 0) || !std::isfinite(w))
      throw InputError("shortest_curve: rho must be nonnegative and finite");

  ShortestCurve out;
  switch (family.spec().variant) {
    case FamilyVariant::Explicit:
      return shortest_explicit(family.spec().curves, rho);
    case FamilyVariant::Connector:
    case FamilyVariant::TorusLoop: {
      if (family.empty()) return out;
      const DijkstraResult res = dijkstra(family.graph_off(), family.graph_adj(),
                                          family.sources(), family.targets(), rho);
      if (!res.found) return out;
      out.found = true;
      out.length = res.best;
      out.curve = CombCurve::from_chain(walk_path(res.parent, res.best_target),
                                        family.cover());
      return out;
    }
    case FamilyVariant::ThroughPiece: {
      if (family.empty()) return out;
      // Certified lower bound: any member chain covers min_support distinct
      // pieces from the component of s0, so its length is at least the sum of
      // the smallest min_support weights there.
      const int s0 = family.spec().s0;
      std::vector<char> seen(family.cover().piece_count(), 0);
      std::vector<int> stack{s0};
      seen[s0] = 1;
      std::vector<double> others;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        if (u != s0) others.push_back(rho[u]);
        for (int k = family.graph_off()[u]; k < family.graph_off()[u + 1]; ++k)
          if (!seen[family.graph_adj()[k]]) {
            seen[family.graph_adj()[k]] = 1;
            stack.push_back(family.graph_adj()[k]);
          }
      }
      std::sort(others.begin(), others.end());
      double bound = rho[s0];
      for (int i = 0; i + 1 < family.spec().min_support &&
                      i < static_cast<int>(others.size());
           ++i)
        bound += others[i];
      out.found = true;
      out.lower_bound_only = true;
      out.length = bound;
      out.curve.chain = {s0};
      out.curve.support = {s0};
      return out;
    }
    case FamilyVariant::Union: {
      for (const Family* p : family.parts()) {
        ShortestCurve cand = shortest_curve(*p, rho);
        if (!cand.found) continue;
        if (!out.found || cand.length < out.length ||
            (cand.length == out.length &&
             std::lexicographical_compare(cand.curve.chain.begin(), cand.curve.chain.end(),
                                          out.curve.chain.begin(), out.curve.chain.end())))
          out = cand;
      }
      return out;
    }
  }
  return out;
}

std::vector<CombCurve> violated_curves(const Family& family,
                                       std::span<const double> rho,
                                       double threshold) {
  std::vector<CombCurve> out;
  const FamilyVariant variant = family.spec().variant;
  if (variant == FamilyVariant::Explicit) {
    for (const CombCurve& c : family.spec().curves)
      if (c.length(rho) < threshold) out.push_back(c);
    return out;
  }
  if (variant == FamilyVariant::Union) {
    std::set<std::vector<int>> seen;
    for (const Family* p : family.parts())
      for (CombCurve& c : violated_curves(*p, rho, threshold))
        if (seen.insert(c.support).second) out.push_back(std::move(c));
    return out;
  }
  if (variant != FamilyVariant::Connector && variant != FamilyVariant::TorusLoop)
    return out;
  if (family.empty()) return out;

  const DijkstraResult res = dijkstra(family.graph_off(), family.graph_adj(),
                                      family.sources(), family.targets(), rho);
  if (!res.found) return out;

  std::vector<int> hits;
  for (int t : family.targets())
    if (std::isfinite(res.dist[t]) && res.dist[t] < threshold) hits.push_back(t);
  std::stable_sort(hits.begin(), hits.end(), [&](int a, int b) {
    if (res.dist[a] != res.dist[b]) return res.dist[a] < res.dist[b];
    return a < b;
  });
  std::vector<char> used(family.cover().piece_count(), 0);
  for (int t : hits) {
    const std::vector<int> path = walk_path(res.parent, t);
    bool free_path = true;
    for (int v : path)
      if (used[v]) {
        free_path = false;
        break;
      }
    if (!free_path) continue;
    for (int v : path) used[v] = 1;
    out.push_back(CombCurve::from_chain(path, family.cover()));
  }
  return out;
}

FamilySpec dual_connector(const FamilySpec& spec, const Cover& cover) {
  if (spec.variant == FamilyVariant::TorusLoop)
    return FamilySpec::torus_loop(1 - spec.direction);
  if (spec.variant != FamilyVariant::Connector)
    throw InputError("dual_connector: only connectors and torus loops have duals");
  if (cover.slab_count[0] <= 0 || cover.slab_count[1] <= 0)
    throw InputError("dual_connector: cover is not grid-like");

  auto is_side = [&](const std::vector<int>& ids, const std::string& side) {
    std::vector<int> want = side_pieces(cover, side);
    std::vector<int> got = ids;
    std::sort(got.begin(), got.end());
    return want == got;
  };
  const bool lr = is_side(spec.source, "left") && is_side(spec.target, "right");
  const bool rl = is_side(spec.source, "right") && is_side(spec.target, "left");
  const bool bt = is_side(spec.source, "bottom") && is_side(spec.target, "top");
  const bool tb = is_side(spec.source, "top") && is_side(spec.target, "bottom");
  if (lr || rl)
    return FamilySpec::connector(side_pieces(cover, "bottom"), side_pieces(cover, "top"));
  if (bt || tb)
    return FamilySpec::connector(side_pieces(cover, "left"), side_pieces(cover, "right"));
  throw InputError("dual_connector: connector does not join two opposite sides");
}

namespace {

struct Enumerator {
  const Family& family;
  int max_support;
  std::int64_t guard;
  std::int64_t visited = 0;
  std::set<std::vector<int>> seen_supports;
  std::vector<CombCurve> out;
  std::vector<char> on_path;
  std::vector<int> path;

  Enumerator(const Family& f, int ms, std::int64_t g)
      : family(f), max_support(ms), guard(g),
        on_path(f.cover().piece_count(), 0) {}

  void record() {
    std::vector<int> support(path);
    std::sort(support.begin(), support.end());
    if (seen_supports.insert(support).second) {
      CombCurve c;
      c.chain = path;
      c.support = std::move(support);
      out.push_back(std::move(c));
    }
  }

  void bump() {
    if (++visited > guard)
      throw BudgetError("enumerate_small: more than " + std::to_string(guard) +
                            " chains visited",
                        visited, guard);
  }

  void dfs_to_targets(int u, const std::vector<char>& is_target) {
    bump();
    if (is_target[u]) record();
    if (static_cast<int>(path.size()) >= max_support) return;
    for (int k = family.graph_off()[u]; k < family.graph_off()[u + 1]; ++k) {
      const int v = family.graph_adj()[k];
      if (on_path[v]) continue;
      on_path[v] = 1;
      path.push_back(v);
      dfs_to_targets(v, is_target);
      path.pop_back();
      on_path[v] = 0;
    }
  }
};

} // namespace

std::vector<CombCurve> enumerate_small(const Family& family, int max_support,
                                       std::int64_t guard) {
  const int n = family.cover().piece_count();
  std::vector<CombCurve> result;

  switch (family.spec().variant) {
    case FamilyVariant::Explicit: {
      std::set<std::vector<int>> seen;
      for (const CombCurve& c : family.spec().curves)
        if (static_cast<int>(c.support.size()) <= max_support &&
            seen.insert(c.support).second)
          result.push_back(c);
      return result;
    }
    case FamilyVariant::Connector:
    case FamilyVariant::TorusLoop: {
      Enumerator en(family, max_support, guard);
      std::vector<char> is_target(n, 0);
      for (int t : family.targets()) is_target[t] = 1;
      std::vector<int> sources(family.sources());
      std::sort(sources.begin(), sources.end());
      for (int s : sources) {
        en.on_path[s] = 1;
        en.path = {s};
        en.dfs_to_targets(s, is_target);
        en.on_path[s] = 0;
      }
      return en.out;
    }
    case FamilyVariant::ThroughPiece: {
      // Chains through s0 are two vertex-disjoint arms rooted at s0.
      const int s0 = family.spec().s0;
      const int need = family.spec().min_support;
      std::set<std::vector<int>> seen;
      std::int64_t visited = 0;
      std::vector<char> used(n, 0);
      std::vector<int> arm1, arm2;

      // Enumerate arm2 given fixed arm1 (both simple, sharing only s0).
      auto emit = [&]() {
        std::vector<int> chain(arm1.rbegin(), arm1.rend());
        chain.push_back(s0);
        chain.insert(chain.end(), arm2.begin(), arm2.end());
        std::vector<int> support(chain);
        std::sort(support.begin(), support.end());
        if (static_cast<int>(support.size()) < need) return;
        if (seen.insert(support).second) {
          CombCurve c;
          c.chain = std::move(chain);
          c.support = std::move(support);
          result.push_back(std::move(c));
        }
      };
      auto dfs2 = [&](auto&& self, int u) -> void {
        if (++visited > guard)
          throw BudgetError("enumerate_small: guard exceeded", visited, guard);
        emit();
        if (static_cast<int>(arm1.size() + arm2.size()) + 1 >= max_support) return;
        for (int k = family.graph_off()[u]; k < family.graph_off()[u + 1]; ++k) {
          const int v = family.graph_adj()[k];
          if (used[v]) continue;
          used[v] = 1;
          arm2.push_back(v);
          self(self, v);
          arm2.pop_back();
          used[v] = 0;
        }
      };
      auto dfs1 = [&](auto&& self, int u) -> void {
        if (++visited > guard)
          throw BudgetError("enumerate_small: guard exceeded", visited, guard);
        arm2.clear();
        dfs2(dfs2, s0);
        if (static_cast<int>(arm1.size()) + 1 >= max_support) return;
        for (int k = family.graph_off()[u]; k < family.graph_off()[u + 1]; ++k) {
          const int v = family.graph_adj()[k];
          if (used[v]) continue;
          used[v] = 1;
          arm1.push_back(v);
          self(self, v);
          arm1.pop_back();
          used[v] = 0;
        }
      };
      used[s0] = 1;
      dfs1(dfs1, s0);
      return result;
    }
    case FamilyVariant::Union: {
      std::set<std::vector<int>> seen;
      for (const Family* p : family.parts())
        for (CombCurve& c : enumerate_small(*p, max_support, guard))
          if (seen.insert(c.support).second) result.push_back(std::move(c));
      return result;
    }
  }
  return result;
}

} // namespace confdim

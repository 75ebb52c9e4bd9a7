#ifndef CONFDIM_CURVES_HPP
#define CONFDIM_CURVES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "confdim/cover.hpp"

namespace confdim {

// A combinatorial curve: a chain in the nerve. rho-length sums each support
// piece once regardless of revisits.
struct CombCurve {
  std::vector<int> chain;    // consecutive pieces adjacent in the cover
  std::vector<int> support;  // sorted distinct ids of chain

  static CombCurve from_chain(std::vector<int> chain, const Cover& cover);
  double length(std::span<const double> rho) const;
  bool operator==(const CombCurve& o) const { return chain == o.chain; }
};

enum class FamilyVariant { Explicit, Connector, TorusLoop, ThroughPiece, Union };

struct FamilySpec {
  FamilyVariant variant = FamilyVariant::Connector;
  std::vector<CombCurve> curves;    // Explicit
  std::vector<int> source, target;  // Connector
  int direction = 0;                // TorusLoop: 0 = e1, 1 = e2
  int s0 = -1;                      // ThroughPiece
  int min_support = 2;              // ThroughPiece

  static FamilySpec explicit_family(std::vector<CombCurve> curves);
  static FamilySpec connector(std::vector<int> source, std::vector<int> target);
  static FamilySpec torus_loop(int direction);
  static FamilySpec through_piece(int s0, int min_support = 2);
  std::string describe() const;
};

// Resolve a named grid side ("left", "right", "bottom", "top") to piece ids.
std::vector<int> side_pieces(const Cover& cover, const std::string& side);

// Realized family handle: membership tests and shortest-curve queries against
// one cover. TorusLoop(e_d) is realized by cutting the torus along x_d = 0:
// sources are the pieces meeting the cut from the right, targets their wrap
// partners, with adjacency across the cut removed.
class Family {
 public:
  const Cover& cover() const { return *cover_; }
  const FamilySpec& spec() const { return spec_; }
  bool empty() const { return empty_; }
  bool contains(const CombCurve& curve) const;

  const std::vector<int>& sources() const { return sources_; }
  const std::vector<int>& targets() const { return targets_; }
  const std::vector<int>& graph_off() const { return adj_off_; }
  const std::vector<int>& graph_adj() const { return adj_; }
  const std::vector<const Family*>& parts() const { return parts_; }

 private:
  friend Family realize(const FamilySpec& spec, const Cover& cover);
  friend Family make_union(std::vector<const Family*> parts);
  const Cover* cover_ = nullptr;
  FamilySpec spec_;
  std::vector<int> sources_, targets_;
  std::vector<int> adj_off_, adj_;  // family search graph
  std::vector<const Family*> parts_;
  bool empty_ = true;
};

Family realize(const FamilySpec& spec, const Cover& cover);

// Union of realized families over one cover; parts must outlive the handle.
Family make_union(std::vector<const Family*> parts);

struct ShortestCurve {
  CombCurve curve;
  double length = 0;
  bool found = false;
  // ThroughPiece families report a certified lower bound on the shortest
  // length instead of a witness curve (minimum-weight long chains through a
  // piece are not tractable exactly; all uses here need the bound direction).
  bool lower_bound_only = false;
};

// Minimum rho-length over the family; node-weighted shortest path with ties
// broken toward the lexicographically smallest id sequence.
ShortestCurve shortest_curve(const Family& family, std::span<const double> rho);

// Separation helper for the modulus solver: vertex-disjoint family curves of
// length < threshold extracted from one shortest-path tree (at least the
// single shortest curve when one violates). Deterministic order.
std::vector<CombCurve> violated_curves(const Family& family,
                                       std::span<const double> rho,
                                       double threshold);

// The transversal of a four-sided connector specification (or the other
// TorusLoop direction); involutive on what it supports.
FamilySpec dual_connector(const FamilySpec& spec, const Cover& cover);

// All simple chains in the family with support size <= max_support, dedup by
// support set, deterministic order. Guarded against explosion.
std::vector<CombCurve> enumerate_small(const Family& family, int max_support,
                                       std::int64_t guard = 1000000);

} // namespace confdim

#endif

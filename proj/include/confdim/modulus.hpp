#ifndef CONFDIM_MODULUS_HPP
#define CONFDIM_MODULUS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "confdim/curves.hpp"

namespace confdim {

// Nonnegative weight per piece with 0 < sum rho^p < inf.
struct AdmissibleMetric {
  std::vector<double> rho;
  double p = 2;

  AdmissibleMetric() = default;
  AdmissibleMetric(std::vector<double> rho, double p);
  double volume() const;  // V_p(rho) = sum rho^p
};

struct ModulusOf {
  double value = 0;
  double L = 0;          // shortest rho-length over the family
  bool infinite = false; // a curve of zero rho-length exists
  bool empty = false;    // empty family, value 0 by convention
};

// V_p(rho) / L^p; an upper bound on mod_p for every admissible rho.
ModulusOf modulus_of(const AdmissibleMetric& rho, const Family& family);

struct SolveOptions {
  double tol = 1e-7;
  int max_outer = 10000;
  int max_inner = 100000;
  // Seed the working set with the straight source-to-target chains when the
  // cover is slab structured; indispensable on large subdivision covers where
  // the optimal metric is supported on thousands of disjoint rows.
  bool seed_straight_chains = true;
};

struct ModulusResult {
  double p = 2;
  double value = 0;        // certified bracket midpoint
  double lower_bound = 0;  // dual value (weak duality, valid for any multipliers)
  double upper_bound = 0;  // V_p(rho)/L^p at the returned metric
  double L = 0;            // shortest rho-length at rho_opt (1 at convergence)
  AdmissibleMetric rho_opt;            // normalized to L = 1
  std::vector<CombCurve> active;       // working curves with length ~ L
  std::vector<double> multipliers;     // nonnegative, one per active curve
  double kkt_residual = 0;
  int iterations = 0;      // outer constraint-generation rounds
  bool converged = false;
  bool empty = false;
  std::string note;
};

// Combinatorial modulus by constraint generation: minimize V_p(rho) subject
// to rho-length >= 1 over a working subfamily, separating with
// shortest_curve until the global shortest length reaches 1 - tol. The
// subproblem is solved in the dual (projected Newton ascent on the curve
// multipliers), so Beurling stationarity p rho^{p-1} = sum of multipliers
// holds by construction and the dual value is a valid lower bound.
// Requires p > 1 (strict convexity).
ModulusResult solve(const Family& family, double p,
                    const SolveOptions& options = SolveOptions());

struct BeurlingReport {
  double stationarity = 0;    // max_s |p rho^{p-1} - sum of multipliers over s|
  double feasibility = 0;     // max(0, 1 - global shortest length)
  double tightness = 0;       // max over active curves |length - 1|
  double negativity = 0;      // max(0, -min multiplier)
  double identity_gap = 0;    // |value - (1/p) sum multipliers| / max(value, eps)
  double residual = 0;        // max of the above
};

// Recomputes the optimality certificate from scratch; reports, never throws.
BeurlingReport verify_beurling(const ModulusResult& result, const Family& family);

struct InequalityCheck {
  bool conclusive = false;
  bool holds = false;
  double lhs = 0, rhs = 0;
  std::string what;
};

// Monotonicity, overcurve comparison and subadditivity, asserted on the
// conservative bracket sides (left lower bound vs right upper bounds).
InequalityCheck check_monotone(const ModulusResult& sub, const ModulusResult& super,
                               double tol_rel = 1e-6);
InequalityCheck check_subadditivity(const std::vector<ModulusResult>& parts,
                                    const ModulusResult& whole,
                                    double tol_rel = 1e-6);

// (eps^{q-p} + sup/eps^p) * mod_p; upper bound for mod_q.
double dim_compare_bound(double mod_p_val, double sup_point_mod_q, double p,
                         double q, double eps);
// The bound minimized over the corollary's choice eps = sup^{1/(2p)}.
double dim_compare_eps(double sup_point_mod_q, double p);

struct PointFamilyBound {
  double eta = 0;          // upper bound for mod_q of curves through s0 of diam >= delta
  double L = 0;            // certified lower bound on the shortest test length
  double volume = 0;       // V_q of the test metric
  double expectation = 0;  // harmonic-sum heuristic C / log^{q-1}(R/r), display only
  bool degenerate = false; // delta below the piece scale at s0
  bool empty = false;      // no curve can reach distance delta/2 from s0
};

// Evaluates the explicit test metric rho(s) = diam(s)/dist(x0,s), zeroed
// beyond distance delta/2 and at s0 itself, against the family of curves
// through s0 of diameter >= delta. The shortest length is lower-bounded by
// the cheapest chain from s0 to the pieces reaching distance delta/2, so eta
// is a certified upper bound.
PointFamilyBound point_family_bound(const Cover& cover, int s0, double delta,
                                    double q);

struct TransportCheck {
  bool hypothesis_forward = false;   // every source-family curve maps over a target curve
  bool hypothesis_backward = false;  // every target curve contains an image
  bool bound_upper_ok = false;       // mod' <= d * mod   (given forward)
  bool bound_lower_ok = false;       // mod' >= d^-p * mod (given backward)
  bool pull_metric_admissible = false;  // rho o f admissible for the source family
  bool push_metric_admissible = false;  // l^p push of rho' admissible up to 1/d
  std::string witness;
  bool applicable() const { return hypothesis_forward || hypothesis_backward; }
};

TransportCheck transport_check(const CoverMap& map, const Family& source_family,
                               const Family& target_family, double p,
                               const ModulusResult& source_result,
                               const ModulusResult& target_result,
                               double tol_rel = 1e-6);

struct DualityProduct {
  bool crossing = false;  // every checked curve of one family meets every one of the other
  double product = 0;
  bool verdict = false;   // crossing && product <= 1 + tol
  std::string witness;
};

// mod_2(Gamma) * mod_2(Gamma_perp) <= 1 whenever the families cross; the
// crossing hypothesis is checked combinatorially on active and small curves.
DualityProduct duality_product(const Family& family, const Family& perp,
                               const ModulusResult& result,
                               const ModulusResult& perp_result,
                               double tol = 1e-6);

} // namespace confdim

#endif

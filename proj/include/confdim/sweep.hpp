#ifndef CONFDIM_SWEEP_HPP
#define CONFDIM_SWEEP_HPP

#include <string>
#include <vector>

#include "confdim/modulus.hpp"

namespace confdim {

struct SweepRow {
  int direction = 0;  // 0 = e1, 1 = e2
  int level = 0;
  double p = 2;
  ModulusResult result;
};

struct SweepTable {
  IntMatrix2 A;
  std::vector<int> directions;
  std::vector<double> p_grid;
  int n_min = 1, n_max = 1;
  std::vector<SweepRow> rows;  // deterministic (direction, level, p) order

  const ModulusResult* find(int direction, int level, double p) const;
};

struct SweepOptions {
  double tol = 1e-7;
  std::int64_t piece_budget = 0;  // 0: default budget
  int threads = 1;
};

// mod_p(TorusLoop(dir), subdivision_cover(A, n)) for every grid point.
// Directions without slab structure on the covers are skipped with a note in
// the affected rows. Cells are independent solves and may run in parallel;
// rows are merged in deterministic order.
SweepTable sweep(const IntMatrix2& A, const std::vector<int>& directions,
                 const std::vector<double>& p_grid, int n_max,
                 const SweepOptions& options = SweepOptions());

struct DirectionEstimate {
  int direction = 0;
  double Q = 0;
  double p_low = 0, p_high = 0;
  bool bracketed = false;
  std::string warning;
  std::vector<std::pair<double, double>> growth;  // (p, value(n_max)/value(n_max-1))
};

struct ExponentEstimate {
  double Q = 0;
  double p_low = 0, p_high = 0;
  int direction = 0;  // the direction attaining the max
  bool bracketed = false;
  std::vector<DirectionEstimate> per_direction;
  std::string warning;
};

// Critical exponent from the growth-ratio crossing: for each p the ratio
// r(p) = value(n_max)/value(n_max-1); Q sits where log r crosses zero,
// located by monotone interpolation on the grid. The estimate takes the max
// over directions (the slow eigendirection detects the larger exponent).
ExponentEstimate estimate_Q(const SweepTable& table);

struct ComparisonRecord {
  IntMatrix2 A;
  SpectralClass cls;
  double Q_est = 0;
  double p_low = 0, p_high = 0;
  double oracle = 0;
  bool attained = false;
  double gap = 0;
  std::string note;
};

ComparisonRecord report(const IntMatrix2& A, const ExponentEstimate& estimate);

} // namespace confdim

#endif

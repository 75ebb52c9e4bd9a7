#ifndef CONFDIM_GEOMETRY_HPP
#define CONFDIM_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace confdim {

// Thrown on rejected input (singular matrix, bad parameters, ...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a construction would exceed its piece/memory budget.
// Carries the offending count so callers can report it.
struct BudgetError : std::runtime_error {
  std::int64_t requested;
  std::int64_t budget;
  BudgetError(const std::string& what, std::int64_t req, std::int64_t bud)
      : std::runtime_error(what), requested(req), budget(bud) {}
};

struct Vec2 {
  double x = 0, y = 0;
};

// 2x2 integer matrix acting on the torus R^2/Z^2.
struct IntMatrix2 {
  std::int64_t a = 0, b = 0, c = 0, d = 0;

  std::int64_t det() const { return a * d - b * c; }
  std::int64_t trace() const { return a + d; }
  IntMatrix2 negated() const { return {-a, -b, -c, -d}; }
  bool operator==(const IntMatrix2&) const = default;

  Vec2 apply(Vec2 v) const {
    return {static_cast<double>(a) * v.x + static_cast<double>(b) * v.y,
            static_cast<double>(c) * v.x + static_cast<double>(d) * v.y};
  }
  std::string to_string() const;
};

// Parse "a,b;c,d".
IntMatrix2 parse_matrix(const std::string& text);

enum class SpectralTag {
  NotExpanding,
  MultipleOfIdentity,
  ComplexPair,
  RealDistinct,
  RealRepeatedNonSemisimple,
};

const char* to_string(SpectralTag tag);

// Eigenvalue moduli sorted |lambda| <= |mu|; complex pairs store the common
// modulus twice. Signed eigenvalues are kept for eigenvector computation in
// the real semisimple case.
struct SpectralClass {
  SpectralTag tag = SpectralTag::NotExpanding;
  double lambda = 0;
  double mu = 0;
  double lambda_signed = 0;
  double mu_signed = 0;
};

// Spectral classification from the characteristic polynomial, with the
// expanding test done in exact integer arithmetic on trace/determinant.
// Rejects singular matrices.
SpectralClass classify(const IntMatrix2& A);

struct ConfdimOracle {
  double value = 0;
  bool attained = false;
};

// Closed-form Ahlfors-regular conformal dimension of the induced sphere map.
// Rejects NotExpanding input (no conformal-gauge oracle).
ConfdimOracle confdim_oracle(const SpectralClass& cls);

enum class Ambient { Plane, Torus };

// The distance |u1| + |u2|^alpha in eigenbasis coordinates, alpha in (0,1].
// basis columns are the eigenvectors (identity for diagonal matrices),
// normalized to unit Euclidean length with positive first nonzero entry.
class ParabolicMetric {
 public:
  ParabolicMetric();  // alpha = 1, identity basis
  ParabolicMetric(double alpha, std::array<double, 4> basis_colmajor,
                  int lattice_search_radius = 2);

  // Metric of minimal dimension for a RealDistinct matrix:
  // alpha = log(lambda)/log(mu). MultipleOfIdentity gives alpha = 1.
  static ParabolicMetric from_matrix(const IntMatrix2& A);

  double alpha() const { return alpha_; }
  const std::array<double, 4>& basis() const { return basis_; }
  int lattice_search_radius() const { return search_radius_; }
  double basis_det() const;

  double distance(Vec2 x, Vec2 y, Ambient ambient) const;

  // Lebesgue area of the open metric ball of radius r (plane ambient):
  // 4 r^{1+1/alpha} / (1+1/alpha), scaled by |det basis|.
  double ball_measure(double r) const;

  // Diameter of the standard torus in this metric (used for net budgets).
  double torus_diameter() const;

  // Coordinates of a point in the eigenbasis.
  Vec2 to_eigen(Vec2 x) const;

 private:
  double alpha_;
  std::array<double, 4> basis_;      // column-major: v1 = (b0,b1), v2 = (b2,b3)
  std::array<double, 4> basis_inv_;
  int search_radius_;
};

// Max over random plane pairs of |d(Av,Aw)/d(v,w) - lambda| / lambda.
// The identity |mu|^alpha = |lambda| makes the true deviation zero.
double dilation_check(const IntMatrix2& A, const ParabolicMetric& m, int samples,
                      std::uint64_t seed = 0x9e3779b97f4a7c15ull);

struct AhlforsEstimate {
  double ratio_min = 0;
  double ratio_max = 0;
  double spread = 0;      // ratio_max / ratio_min
  bool regular = false;   // spread <= threshold
};

// Monte-Carlo ball measures on the torus at the given radii; ratios
// mu(B(x,r)) / r^Q over random centers. The spread threshold is our choice
// (the regularity constant is not pinned down anywhere).
AhlforsEstimate ahlfors_estimate(const ParabolicMetric& m, double Q,
                                 const std::vector<double>& radii, int samples,
                                 double threshold = 16.0,
                                 int points_per_ball = 20000,
                                 std::uint64_t seed = 0x2545f4914f6cdd1dull);

struct Net {
  std::vector<Vec2> points;
  double epsilon = 0;
};

// Greedy maximal epsilon-separated set over a deterministic raster of the
// fundamental cell (grid pitch <= epsilon/4 in metric terms). Accepted points
// are pairwise strictly more than epsilon apart; every raster candidate is
// within epsilon of an accepted point.
Net maximal_net(const ParabolicMetric& m, double epsilon,
                std::int64_t candidate_budget = 40000000);

} // namespace confdim

#endif

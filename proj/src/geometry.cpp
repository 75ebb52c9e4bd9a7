#include "confdim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace confdim {

std::string IntMatrix2::to_string() const {
  std::ostringstream os;
  os << a << "," << b << ";" << c << "," << d;
  return os.str();
}

IntMatrix2 parse_matrix(const std::string& text) {
  IntMatrix2 m;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream is(text);
  if (!(is >> m.a >> c1 >> m.b >> c2 >> m.c >> c3 >> m.d) || c1 != ',' ||
      c2 != ';' || c3 != ',') {
    throw InputError("matrix literal must look like \"a,b;c,d\": got \"" + text + "\"");
  }
  std::string rest;
  if (is >> rest) throw InputError("trailing characters in matrix literal: \"" + text + "\"");
  return m;
}

const char* to_string(SpectralTag tag) {
  switch (tag) {
    case SpectralTag::NotExpanding: return "NotExpanding";
    case SpectralTag::MultipleOfIdentity: return "MultipleOfIdentity";
    case SpectralTag::ComplexPair: return "ComplexPair";
    case SpectralTag::RealDistinct: return "RealDistinct";
    case SpectralTag::RealRepeatedNonSemisimple: return "RealRepeatedNonSemisimple";
  }
  return "?";
}

namespace {

// Both roots of t^2 - tr*t + det strictly outside the closed unit disk,
// decided exactly in integers. Complex case: |root|^2 = det. Real case:
// P(1) and P(-1) must have equal (nonzero) sign; a sign change or a root at
// +-1 puts an eigenvalue inside or on the circle. Integer det != 0 rules out
// both roots inside (their product would have modulus < 1).
bool expanding_exact(std::int64_t tr, std::int64_t det) {
  std::int64_t disc = tr * tr - 4 * det;
  if (disc < 0) return det >= 2;
  std::int64_t p1 = 1 - tr + det;   // P(1)
  std::int64_t pm1 = 1 + tr + det;  // P(-1)
  return (p1 > 0 && pm1 > 0) || (p1 < 0 && pm1 < 0);
}

} // namespace

SpectralClass classify(const IntMatrix2& A) {
  const std::int64_t det = A.det();
  if (det == 0) throw InputError("classify: singular matrix " + A.to_string());
  const std::int64_t tr = A.trace();
  const std::int64_t disc = tr * tr - 4 * det;

  SpectralClass cls;
  if (disc < 0) {
    const double modulus = std::sqrt(static_cast<double>(det));
    cls.lambda = cls.mu = modulus;
    cls.tag = expanding_exact(tr, det) ? SpectralTag::ComplexPair
                                       : SpectralTag::NotExpanding;
    return cls;
  }

  if (disc == 0) {
    // tr^2 = 4 det forces tr even; the repeated eigenvalue tr/2 is an integer.
    const std::int64_t ev = tr / 2;
    cls.lambda_signed = cls.mu_signed = static_cast<double>(ev);
    cls.lambda = cls.mu = std::abs(static_cast<double>(ev));
    if (!expanding_exact(tr, det)) {
      cls.tag = SpectralTag::NotExpanding;
    } else if (A.b == 0 && A.c == 0) {
      cls.tag = SpectralTag::MultipleOfIdentity;
    } else {
      cls.tag = SpectralTag::RealRepeatedNonSemisimple;
    }
    return cls;
  }

  const double root = std::sqrt(static_cast<double>(disc));
  const double r1 = (static_cast<double>(tr) - root) / 2.0;
  const double r2 = (static_cast<double>(tr) + root) / 2.0;
  double lo = r1, hi = r2;
  if (std::abs(lo) > std::abs(hi)) std::swap(lo, hi);
  cls.lambda_signed = lo;
  cls.mu_signed = hi;
  cls.lambda = std::abs(lo);
  cls.mu = std::abs(hi);
  // Distinct real eigenvalues; equal moduli happen only for a +-t pair,
  // which we still tag RealDistinct (alpha = 1, dimension 2, attained).
  cls.tag = expanding_exact(tr, det) ? SpectralTag::RealDistinct
                                     : SpectralTag::NotExpanding;
  return cls;
}

ConfdimOracle confdim_oracle(const SpectralClass& cls) {
  switch (cls.tag) {
    case SpectralTag::NotExpanding:
      throw InputError("confdim_oracle: map is not topologically cxc (an eigenvalue "
                       "has modulus <= 1)");
    case SpectralTag::MultipleOfIdentity:
    case SpectralTag::ComplexPair:
      return {2.0, true};
    case SpectralTag::RealDistinct:
      return {1.0 + std::log(cls.mu) / std::log(cls.lambda), true};
    case SpectralTag::RealRepeatedNonSemisimple:
      return {2.0, false};
  }
  throw InputError("confdim_oracle: bad tag");
}

ParabolicMetric::ParabolicMetric() : ParabolicMetric(1.0, {1, 0, 0, 1}) {}

ParabolicMetric::ParabolicMetric(double alpha, std::array<double, 4> basis_colmajor,
                                 int lattice_search_radius)
    : alpha_(alpha), basis_(basis_colmajor), search_radius_(lattice_search_radius) {
  if (!(alpha_ > 0.0) || alpha_ > 1.0)
    throw InputError("ParabolicMetric: alpha must lie in (0,1]");
  const double det = basis_[0] * basis_[3] - basis_[2] * basis_[1];
  if (std::abs(det) < 1e-12)
    throw InputError("ParabolicMetric: eigenbasis is singular");
  basis_inv_ = {basis_[3] / det, -basis_[2] / det, -basis_[1] / det, basis_[0] / det};
}

namespace {

std::array<double, 2> normalized_eigenvector(const IntMatrix2& A, double ev) {
  // Rows of (A - ev*I) give the orthogonal complement; either candidate below
  // spans the kernel when nonzero.
  double vx = static_cast<double>(A.b), vy = ev - static_cast<double>(A.a);
  if (std::abs(vx) + std::abs(vy) < 1e-12) {
    vx = ev - static_cast<double>(A.d);
    vy = static_cast<double>(A.c);
  }
  if (std::abs(vx) + std::abs(vy) < 1e-12) {
    vx = 1;
    vy = 0;
  }
  const double n = std::hypot(vx, vy);
  vx /= n;
  vy /= n;
  const double lead = (std::abs(vx) > 1e-14) ? vx : vy;
  if (lead < 0) { vx = -vx; vy = -vy; }
  return {vx, vy};
}

} // namespace

ParabolicMetric ParabolicMetric::from_matrix(const IntMatrix2& A) {
  const SpectralClass cls = classify(A);
  if (cls.tag == SpectralTag::MultipleOfIdentity)
    return ParabolicMetric(1.0, {1, 0, 0, 1});
  if (cls.tag != SpectralTag::RealDistinct)
    throw InputError("ParabolicMetric::from_matrix: matrix must be RealDistinct "
                     "or a multiple of the identity, got " +
                     std::string(to_string(cls.tag)));
  const double alpha = std::log(cls.lambda) / std::log(cls.mu);
  const auto v1 = normalized_eigenvector(A, cls.lambda_signed);
  const auto v2 = normalized_eigenvector(A, cls.mu_signed);
  return ParabolicMetric(alpha, {v1[0], v1[1], v2[0], v2[1]});
}

double ParabolicMetric::basis_det() const {
  return basis_[0] * basis_[3] - basis_[2] * basis_[1];
}

Vec2 ParabolicMetric::to_eigen(Vec2 x) const {
  return {basis_inv_[0] * x.x + basis_inv_[1] * x.y,
          basis_inv_[2] * x.x + basis_inv_[3] * x.y};
}

double ParabolicMetric::distance(Vec2 x, Vec2 y, Ambient ambient) const {
  if (ambient == Ambient::Plane) {
    const Vec2 u = to_eigen(x), w = to_eigen(y);
    return std::abs(w.x - u.x) + std::pow(std::abs(w.y - u.y), alpha_);
  }
  // Torus: reduce representatives to the fundamental cell, then search the
  // nearby lattice translates. Translates beyond the search radius cannot be
  // minimal for alpha in (0,1].
  auto frac = [](double t) { return t - std::floor(t); };
  Vec2 xr{frac(x.x), frac(x.y)};
  Vec2 yr{frac(y.x), frac(y.y)};
  const Vec2 u = to_eigen(xr);
  double best = std::numeric_limits<double>::infinity();
  const int R = search_radius_;
  for (int mx = -R; mx <= R; ++mx) {
    for (int my = -R; my <= R; ++my) {
      const Vec2 w = to_eigen({yr.x + mx, yr.y + my});
      const double d = std::abs(w.x - u.x) + std::pow(std::abs(w.y - u.y), alpha_);
      best = std::min(best, d);
    }
  }
  return best;
}

double ParabolicMetric::ball_measure(double r) const {
  if (!(r > 0)) throw InputError("ball_measure: radius must be positive");
  const double e = 1.0 + 1.0 / alpha_;
  return 4.0 * std::pow(r, e) / e * std::abs(basis_det());
}

double ParabolicMetric::torus_diameter() const {
  // Coarse deterministic estimate: max over a raster of the fundamental cell.
  double diam = 0;
  const int K = 32;
  for (int i = 0; i <= K; ++i)
    for (int j = 0; j <= K; ++j)
      diam = std::max(diam, distance({0, 0},
                                     {static_cast<double>(i) / K,
                                      static_cast<double>(j) / K},
                                     Ambient::Torus));
  return diam;
}

double dilation_check(const IntMatrix2& A, const ParabolicMetric& m, int samples,
                      std::uint64_t seed) {
  const SpectralClass cls = classify(A);
  if (cls.tag != SpectralTag::RealDistinct && cls.tag != SpectralTag::MultipleOfIdentity)
    throw InputError("dilation_check: matrix must act as a dilation (RealDistinct "
                     "or multiple of identity)");
  const double lambda = cls.lambda;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const Vec2 v{coord(rng), coord(rng)};
    const Vec2 w{coord(rng), coord(rng)};
    const double base = m.distance(v, w, Ambient::Plane);
    if (base < 1e-9) continue;
    const double mapped = m.distance(A.apply(v), A.apply(w), Ambient::Plane);
    worst = std::max(worst, std::abs(mapped / base - lambda) / lambda);
  }
  return worst;
}

AhlforsEstimate ahlfors_estimate(const ParabolicMetric& m, double Q,
                                 const std::vector<double>& radii, int samples,
                                 double threshold, int points_per_ball,
                                 std::uint64_t seed) {
  if (!(Q > 0)) throw InputError("ahlfors_estimate: Q must be positive");
  for (double r : radii)
    if (!(r > 0) || r > 1.0)
      throw InputError("ahlfors_estimate: radii must lie in (0,1]");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AhlforsEstimate est;
  est.ratio_min = std::numeric_limits<double>::infinity();
  est.ratio_max = 0;

  const double absdet = std::abs(m.basis_det());
  for (int s = 0; s < samples; ++s) {
    const Vec2 center{unit(rng), unit(rng)};
    for (double r : radii) {
      const double ext2 = std::pow(r, 1.0 / m.alpha());
      double volume;
      if (r <= 0.45 && ext2 <= 0.45) {
        // Ball fits in a half cell: sample its bounding box in eigen
        // coordinates, plane distance suffices.
        const Vec2 ce = m.to_eigen(center);
        std::int64_t hits = 0;
        for (int i = 0; i < points_per_ball; ++i) {
          const double ux = ce.x + (2 * unit(rng) - 1) * r;
          const double uy = ce.y + (2 * unit(rng) - 1) * ext2;
          const double d = std::abs(ux - ce.x) + std::pow(std::abs(uy - ce.y), m.alpha());
          if (d < r) ++hits;
        }
        const double box = 4.0 * r * ext2 * absdet;
        volume = box * static_cast<double>(hits) / points_per_ball;
      } else {
        // Large ball: sample the whole fundamental cell with torus distance.
        std::int64_t hits = 0;
        for (int i = 0; i < points_per_ball; ++i) {
          const Vec2 p{unit(rng), unit(rng)};
          if (m.distance(center, p, Ambient::Torus) < r) ++hits;
        }
        volume = static_cast<double>(hits) / points_per_ball;
      }
      const double ratio = volume / std::pow(r, Q);
      est.ratio_min = std::min(est.ratio_min, ratio);
      est.ratio_max = std::max(est.ratio_max, ratio);
    }
  }
  est.spread = est.ratio_max / est.ratio_min;
  est.regular = est.spread <= threshold;
  return est;
}

Net maximal_net(const ParabolicMetric& m, double epsilon, std::int64_t candidate_budget) {
  if (!(epsilon > 0)) throw InputError("maximal_net: epsilon must be positive");
  const double diam = m.torus_diameter();
  if (epsilon > diam * (1 + 1e-12))
    throw InputError("maximal_net: epsilon exceeds the torus diameter");

  // Raster pitch <= epsilon/4 in metric terms per coordinate.
  const double pitch1 = epsilon / 4.0;
  const double pitch2 = std::pow(epsilon / 4.0, 1.0 / m.alpha());
  const std::int64_t n1 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(1.0 / pitch1)));
  const std::int64_t n2 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(1.0 / pitch2)));
  if (n1 > candidate_budget / n2)
    throw BudgetError("maximal_net: candidate raster needs " +
                          std::to_string(n1) + "x" + std::to_string(n2) +
                          " points, budget is " + std::to_string(candidate_budget),
                      n1 * (n2 > 0 ? n2 : 1), candidate_budget);

  Net net;
  net.epsilon = epsilon;
  // Greedy over the fixed raster ordering; strict separation so that
  // epsilon = diam keeps a single point.
  for (std::int64_t j = 0; j < n2; ++j) {
    for (std::int64_t i = 0; i < n1; ++i) {
      const Vec2 cand{static_cast<double>(i) / n1, static_cast<double>(j) / n2};
      bool ok = true;
      for (const Vec2& p : net.points) {
        if (m.distance(cand, p, Ambient::Torus) <= epsilon) {
          ok = false;
          break;
        }
      }
      if (ok) net.points.push_back(cand);
    }
  }
  return net;
}

} // namespace confdim

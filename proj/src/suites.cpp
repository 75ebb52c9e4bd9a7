#include "confdim/suites.hpp"

#include <cmath>
#include <sstream>

#include "confdim/io.hpp"
#include "confdim/modulus.hpp"
#include "confdim/sweep.hpp"

namespace confdim {

namespace {

void add_line(SuiteReport& rep, const std::string& fixture, bool pass,
              const std::string& detail) {
  rep.lines.push_back({fixture, pass, detail});
  rep.pass = rep.pass && pass;
}

std::string num(double v) { return fmt17(v); }

SuiteReport suite_metric(bool corrupt) {
  SuiteReport rep{"metric", {}, true};
  struct Case {
    const char* name;
    IntMatrix2 A;
  };
  const Case cases[] = {
      {"diag(2,4)", {2, 0, 0, 4}},
      {"diag(3,9)", {3, 0, 0, 9}},
      {"2*Id", {2, 0, 0, 2}},
  };
  for (const Case& c : cases) {
    const ParabolicMetric m = ParabolicMetric::from_matrix(c.A);
    double dev = dilation_check(c.A, m, 10000);
    if (corrupt && rep.lines.empty()) dev += 1e-3;
    std::ostringstream os;
    os << "dilation deviation " << num(dev);
    add_line(rep, std::string("dilation ") + c.name, dev <= 1e-10, os.str());
  }
  {
    // Triangle inequality on deterministic pseudo-random triples, both ambients.
    const ParabolicMetric m(0.5, {1, 0, 0, 1});
    std::uint64_t state = 0x12345678u;
    auto next = [&]() {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      return static_cast<double>(state >> 11) / 9007199254740992.0;
    };
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec2 a{next() * 2 - 1, next() * 2 - 1};
      const Vec2 b{next() * 2 - 1, next() * 2 - 1};
      const Vec2 c2{next() * 2 - 1, next() * 2 - 1};
      for (Ambient amb : {Ambient::Plane, Ambient::Torus}) {
        const double lhs = m.distance(a, c2, amb);
        const double rhs = m.distance(a, b, amb) + m.distance(b, c2, amb);
        worst = std::max(worst, lhs - rhs);
      }
    }
    std::ostringstream os;
    os << "max triangle violation " << num(worst);
    add_line(rep, "triangle alpha=0.5", worst <= 1e-12, os.str());
  }
  return rep;
}

SuiteReport suite_quasipacking(bool corrupt) {
  SuiteReport rep{"quasipacking", {}, true};
  struct Case {
    std::string name;
    Cover cover;
    double K_max;
  };
  std::vector<Case> cases;
  cases.push_back({"subdivision diag(2,2) n=1", subdivision_cover({2, 0, 0, 2}, 1),
                   2 * std::sqrt(2.0)});
  cases.push_back({"subdivision diag(2,2) n=3", subdivision_cover({2, 0, 0, 2}, 3),
                   2 * std::sqrt(2.0)});
  cases.push_back({"subdivision diag(2,4) n=2", subdivision_cover({2, 0, 0, 4}, 2), 4.0});
  cases.push_back({"net alpha=1 n=1", net_cover(ParabolicMetric(), 1), 2.0 + 1e-12});
  cases.push_back(
      {"net alpha=0.5 n=2", net_cover(ParabolicMetric(0.5, {1, 0, 0, 1}), 2), 2.0 + 1e-12});
  for (Case& c : cases) {
    if (corrupt && rep.lines.empty() && !c.cover.pieces.empty())
      c.cover.pieces[0].radius *= 10;
    const QuasipackingReport q = verify_quasipacking(c.cover);
    std::ostringstream os;
    os << "K=" << num(q.K) << " min_gap=" << num(q.min_pair_gap);
    if (!q.ok) os << " violating pair (" << q.bad_a << "," << q.bad_b << ")";
    add_line(rep, c.name, q.ok && q.K <= c.K_max, os.str());
  }
  return rep;
}

struct SolvedFixture {
  std::string name;
  Cover cover;
  Family family;
  ModulusResult result;
};

// Shared solve fixtures for the beurling suite. Families point into their
// fixture's cover, so fixtures are built in place at reserved addresses.
std::vector<SolvedFixture> solve_fixtures() {
  std::vector<SolvedFixture> out;
  out.reserve(4);
  {
    SolvedFixture& f = out.emplace_back();
    f.name = "single-curve m=4 p=2";
    f.cover = grid_cover(4, 1);
    std::vector<CombCurve> curves{CombCurve::from_chain({0, 1, 2, 3}, f.cover)};
    f.family = realize(FamilySpec::explicit_family(curves), f.cover);
    f.result = solve(f.family, 2);
  }
  {
    SolvedFixture& f = out.emplace_back();
    f.name = "2x2 grid LR p=2";
    f.cover = grid_cover(2, 2);
    f.family = realize(FamilySpec::connector(side_pieces(f.cover, "left"),
                                             side_pieces(f.cover, "right")),
                       f.cover);
    f.result = solve(f.family, 2);
  }
  {
    SolvedFixture& f = out.emplace_back();
    f.name = "3x3 grid LR p=3";
    f.cover = grid_cover(3, 3);
    f.family = realize(FamilySpec::connector(side_pieces(f.cover, "left"),
                                             side_pieces(f.cover, "right")),
                       f.cover);
    f.result = solve(f.family, 3);
  }
  {
    SolvedFixture& f = out.emplace_back();
    f.name = "diag(2,4) level-1 loop-e1 p=2";
    f.cover = subdivision_cover({2, 0, 0, 4}, 1);
    f.family = realize(FamilySpec::torus_loop(0), f.cover);
    f.result = solve(f.family, 2);
  }
  return out;
}

SuiteReport suite_beurling(bool corrupt) {
  SuiteReport rep{"beurling", {}, true};
  std::vector<SolvedFixture> fixtures = solve_fixtures();
  for (SolvedFixture& f : fixtures) {
    if (corrupt && rep.lines.empty())
      for (double& w : f.result.rho_opt.rho) w = 1.0;
    const BeurlingReport b = verify_beurling(f.result, f.family);
    std::ostringstream os;
    os << "residual " << num(b.residual) << " (stat " << num(b.stationarity)
       << ", feas " << num(b.feasibility) << ", ident " << num(b.identity_gap) << ")";
    add_line(rep, f.name, f.result.converged && b.residual <= 1e-6, os.str());
  }
  return rep;
}

SuiteReport suite_subadd(bool corrupt) {
  SuiteReport rep{"subadd", {}, true};
  const Cover cover = grid_cover(3, 3);
  const Family lr = realize(FamilySpec::connector(side_pieces(cover, "left"),
                                                  side_pieces(cover, "right")),
                            cover);
  const Family tb = realize(FamilySpec::connector(side_pieces(cover, "bottom"),
                                                  side_pieces(cover, "top")),
                            cover);
  const Family top_row =
      realize(FamilySpec::explicit_family({CombCurve::from_chain({6, 7, 8}, cover)}),
              cover);
  const ModulusResult r_lr = solve(lr, 2);
  const ModulusResult r_tb = solve(tb, 2);
  ModulusResult r_row = solve(top_row, 2);
  if (corrupt) r_row.lower_bound *= 10;  // breaks the subset comparison

  {
    const InequalityCheck c = check_monotone(r_row, r_lr);
    std::ostringstream os;
    os << num(c.lhs) << " <= " << num(c.rhs) << " (top row vs full LR)";
    add_line(rep, "monotone subset 3x3", c.conclusive && c.holds, os.str());
  }
  {
    const Family both = make_union({&lr, &tb});
    const ModulusResult r_union = solve(both, 2);
    const InequalityCheck c = check_subadditivity({r_lr, r_tb}, r_union);
    std::ostringstream os;
    os << num(c.lhs) << " <= " << num(c.rhs) << " (LR u TB)";
    add_line(rep, "subadditivity 3x3", c.conclusive && c.holds, os.str());
  }
  {
    const Family same = make_union({&lr, &lr});
    const ModulusResult r_same = solve(same, 2);
    const double rel = std::abs(r_same.value - r_lr.value) /
                       std::max(std::abs(r_lr.value), 1e-300);
    std::ostringstream os;
    os << "union with itself differs by " << num(rel);
    add_line(rep, "idempotence 3x3", rel <= 1e-6, os.str());
  }
  return rep;
}

SuiteReport suite_dimcompare(bool corrupt) {
  SuiteReport rep{"dimcompare", {}, true};
  const Cover cover = grid_cover(8, 8);
  const Family lr = realize(FamilySpec::connector(side_pieces(cover, "left"),
                                                  side_pieces(cover, "right")),
                            cover);
  const ModulusResult r2 = solve(lr, 2);
  ModulusResult r3 = solve(lr, 3);
  if (corrupt) r3.upper_bound *= 100;

  // sup over pieces of the point-family bound at q = 3; every LR curve has
  // diameter >= 1, so delta = 1 restricts nothing.
  double sup_eta = 0;
  for (int s0 = 0; s0 < cover.piece_count(); ++s0) {
    const PointFamilyBound b = point_family_bound(cover, s0, 1.0, 3);
    if (!b.degenerate) sup_eta = std::max(sup_eta, b.eta);
  }
  for (double eps : {0.1, 0.25, 0.5, dim_compare_eps(sup_eta, 2)}) {
    const double bound = dim_compare_bound(r2.lower_bound, sup_eta, 2, 3, eps);
    std::ostringstream os;
    os << "mod3 " << num(r3.upper_bound) << " <= bound " << num(bound)
       << " at eps " << num(eps);
    add_line(rep, "8x8 dimension comparison", r3.upper_bound <= bound, os.str());
  }
  {
    const Cover c16 = grid_cover(16, 16);
    const Cover c32 = grid_cover(32, 32);
    const int mid16 = (16 / 2) * 16 + 16 / 2;
    const int mid32 = (32 / 2) * 32 + 32 / 2;
    const PointFamilyBound b16 = point_family_bound(c16, mid16, 0.5, 2);
    const PointFamilyBound b32 = point_family_bound(c32, mid32, 0.5, 2);
    std::ostringstream os;
    os << "eta16 " << num(b16.eta) << " (expect " << num(b16.expectation)
       << "), eta32 " << num(b32.eta);
    add_line(rep, "refinement monotonicity", b32.eta < b16.eta, os.str());
  }
  return rep;
}

SuiteReport suite_transport(bool corrupt) {
  SuiteReport rep{"transport", {}, true};
  {
    // Degree-1 identity map: both bounds give equality within tolerance.
    const Cover cover = grid_cover(3, 3);
    CoverMap id_map;
    id_map.source = &cover;
    id_map.target = &cover;
    id_map.degree = 1;
    id_map.piece_map.resize(cover.pieces.size());
    for (int i = 0; i < cover.piece_count(); ++i) id_map.piece_map[i] = i;
    const Family lr = realize(FamilySpec::connector(side_pieces(cover, "left"),
                                                    side_pieces(cover, "right")),
                              cover);
    const ModulusResult r = solve(lr, 2);
    const TransportCheck t = transport_check(id_map, lr, lr, 2, r, r);
    std::ostringstream os;
    os << "forward " << t.hypothesis_forward << " backward " << t.hypothesis_backward;
    add_line(rep, "identity map d=1",
             t.hypothesis_forward && t.hypothesis_backward && t.bound_upper_ok &&
                 t.bound_lower_ok && t.pull_metric_admissible && t.push_metric_admissible,
             os.str());
  }
  for (double p : {2.0, 3.0}) {
    const SelfCoverMap scm = self_cover_map({2, 0, 0, 2}, 1);
    const Family src = realize(FamilySpec::torus_loop(0), scm.source_cover);
    const Family tgt = realize(FamilySpec::torus_loop(0), scm.target_cover);
    const ModulusResult r_src = solve(src, p);
    ModulusResult r_tgt = solve(tgt, p);
    if (corrupt && p == 2.0) r_tgt.upper_bound *= 1e-3;
    const TransportCheck t = transport_check(scm.map(), src, tgt, p, r_src, r_tgt);
    std::ostringstream os;
    os << "mod'=" << num(r_src.value) << " mod=" << num(r_tgt.value) << " d=4"
       << (t.witness.empty() ? "" : " [" + t.witness + "]");
    add_line(rep, "self cover diag(2,2) n=1 p=" + num(p),
             t.applicable() && (!t.hypothesis_forward || t.bound_upper_ok) &&
                 (!t.hypothesis_backward || t.bound_lower_ok),
             os.str());
  }
  {
    // Degree-2 column doubling: map the 6x3 grid onto the 3x3 grid.
    const Cover src_cover = grid_cover(6, 3);
    const Cover tgt_cover = grid_cover(3, 3);
    CoverMap dbl;
    dbl.source = &src_cover;
    dbl.target = &tgt_cover;
    dbl.degree = 2;
    dbl.piece_map.resize(src_cover.pieces.size());
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 6; ++i)
        dbl.piece_map[j * 6 + i] = j * 3 + (i / 2);
    const Family src = realize(FamilySpec::connector(side_pieces(src_cover, "left"),
                                                     side_pieces(src_cover, "right")),
                               src_cover);
    const Family tgt = realize(FamilySpec::connector(side_pieces(tgt_cover, "left"),
                                                     side_pieces(tgt_cover, "right")),
                               tgt_cover);
    const ModulusResult r_src = solve(src, 2);
    const ModulusResult r_tgt = solve(tgt, 2);
    const TransportCheck t = transport_check(dbl, src, tgt, 2, r_src, r_tgt);
    std::ostringstream os;
    os << "mod'=" << num(r_src.value) << " mod=" << num(r_tgt.value) << " d=2";
    add_line(rep, "column doubling d=2",
             t.applicable() && (!t.hypothesis_forward || t.bound_upper_ok) &&
                 (!t.hypothesis_backward || t.bound_lower_ok),
             os.str());
  }
  return rep;
}

SuiteReport suite_duality(bool corrupt) {
  SuiteReport rep{"duality", {}, true};
  for (int k : {2, 3, 4}) {
    const Cover cover = grid_cover(k, k);
    const FamilySpec lr_spec = FamilySpec::connector(side_pieces(cover, "left"),
                                                     side_pieces(cover, "right"));
    const Family lr = realize(lr_spec, cover);
    const Family tb = realize(dual_connector(lr_spec, cover), cover);
    const ModulusResult r1 = solve(lr, 2);
    ModulusResult r2 = solve(tb, 2);
    if (corrupt && k == 2) r2.value *= 2;
    const DualityProduct d = duality_product(lr, tb, r1, r2);
    std::ostringstream os;
    os << "product " << num(d.product)
       << (d.witness.empty() ? "" : " [" + d.witness + "]");
    add_line(rep, "grid " + std::to_string(k) + "x" + std::to_string(k), d.verdict,
             os.str());
  }
  {
    const Cover cover = subdivision_cover({2, 0, 0, 4}, 2);
    const Family e1 = realize(FamilySpec::torus_loop(0), cover);
    const Family e2 = realize(FamilySpec::torus_loop(1), cover);
    const ModulusResult r1 = solve(e1, 2);
    const ModulusResult r2 = solve(e2, 2);
    const DualityProduct d = duality_product(e1, e2, r1, r2);
    std::ostringstream os;
    os << "product " << num(d.product)
       << (d.witness.empty() ? "" : " [" + d.witness + "]");
    add_line(rep, "diag(2,4) level-2 loops", d.verdict, os.str());
  }
  return rep;
}

} // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "metric", "quasipacking", "beurling", "subadd",
      "dimcompare", "transport", "duality"};
  return names;
}

SuiteReport run_suite(const std::string& name, bool inject_corrupt) {
  if (name == "metric") return suite_metric(inject_corrupt);
  if (name == "quasipacking") return suite_quasipacking(inject_corrupt);
  if (name == "beurling") return suite_beurling(inject_corrupt);
  if (name == "subadd") return suite_subadd(inject_corrupt);
  if (name == "dimcompare") return suite_dimcompare(inject_corrupt);
  if (name == "transport") return suite_transport(inject_corrupt);
  if (name == "duality") return suite_duality(inject_corrupt);
  throw InputError("unknown suite \"" + name + "\"");
}

std::string suite_report_text(const SuiteReport& report) {
  std::ostringstream os;
  os << "suite " << report.name << "\n";
  for (const SuiteLine& line : report.lines)
    os << "  [" << (line.pass ? "pass" : "FAIL") << "] " << line.fixture << ": "
       << line.detail << "\n";
  os << "  => " << (report.pass ? "ok" : "FAILED") << "\n";
  return os.str();
}

} // namespace confdim

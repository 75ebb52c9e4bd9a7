// Command-line front end: classify matrices, build and export covers, run
// modulus solves and conformal-dimension sweeps, and execute the verification
// suites. Exit codes: 0 ok, 2 input rejected, 3 nonconverged, 4 verification
// failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "confdim/io.hpp"
#include "confdim/modulus.hpp"
#include "confdim/suites.hpp"
#include "confdim/sweep.hpp"

using namespace confdim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNonconverged = 3;
constexpr int kExitVerification = 4;

struct CliOptions {
  std::string matrix;
  double alpha = 0;
  int levels = 1;
  std::vector<double> p_grid;  // empty: per-command default
  double tol = 1e-7;
  int max_iter = 10000;
  std::string out;
  std::string format = "json";
  int threads = 1;
  std::string family = "loop-e1";
  std::string suite = "all";
  std::string cover_kind = "subdivision";
  bool inject_corrupt = false;
};

// Family spec from a shorthand ("loop-e1", "connector:left-right") or a JSON
// object like {"variant":"connector","source":"left","target":"right"} with
// named sides resolved against grid covers; explicit families as id-chain
// arrays: {"variant":"explicit","chains":[[0,1],[2,3]]}.
FamilySpec parse_family(const std::string& text, const Cover& cover) {
  if (text == "loop-e1") return FamilySpec::torus_loop(0);
  if (text == "loop-e2") return FamilySpec::torus_loop(1);
  if (text.rfind("connector:", 0) == 0) {
    const std::string rest = text.substr(10);
    const auto dash = rest.find('-');
    if (dash == std::string::npos)
      throw InputError("connector shorthand must look like connector:left-right");
    return FamilySpec::connector(side_pieces(cover, rest.substr(0, dash)),
                                 side_pieces(cover, rest.substr(dash + 1)));
  }
  if (!text.empty() && text.front() == '{') {
    const nlohmann::json j = nlohmann::json::parse(text);
    const std::string variant = j.at("variant");
    if (variant == "connector") {
      auto resolve = [&](const nlohmann::json& v) -> std::vector<int> {
        if (v.is_string()) return side_pieces(cover, v.get<std::string>());
        return v.get<std::vector<int>>();
      };
      return FamilySpec::connector(resolve(j.at("source")), resolve(j.at("target")));
    }
    if (variant == "loop")
      return FamilySpec::torus_loop(j.at("direction").get<int>());
    if (variant == "explicit") {
      std::vector<CombCurve> curves;
      for (const auto& chain : j.at("chains"))
        curves.push_back(CombCurve::from_chain(chain.get<std::vector<int>>(), cover));
      return FamilySpec::explicit_family(std::move(curves));
    }
    if (variant == "through")
      return FamilySpec::through_piece(j.at("s0").get<int>(),
                                       j.value("min_support", 2));
    throw InputError("unknown family variant \"" + variant + "\"");
  }
  throw InputError("cannot parse family \"" + text + "\"");
}

void emit(const CliOptions& opt, const std::string& name, const std::string& content) {
  if (opt.out.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(opt.out);
  write_file(opt.out + "/" + name, content);
}

int cmd_classify(const CliOptions& opt) {
  const IntMatrix2 A = parse_matrix(opt.matrix);
  const SpectralClass cls = classify(A);
  std::cout << "matrix " << A.to_string() << "\n"
            << "class " << to_string(cls.tag) << "\n"
            << "eigen moduli " << fmt17(cls.lambda) << " " << fmt17(cls.mu) << "\n";
  if (cls.tag == SpectralTag::NotExpanding) {
    std::cout << "error: not expanding, no conformal-gauge oracle\n";
    return kExitInput;
  }
  const ConfdimOracle oracle = confdim_oracle(cls);
  std::cout << "confdim " << fmt17(oracle.value) << " "
            << (oracle.attained ? "attained" : "not attained") << "\n";
  return kExitOk;
}

int cmd_cover(const CliOptions& opt) {
  Cover cover;
  if (opt.cover_kind == "subdivision") {
    cover = subdivision_cover(parse_matrix(opt.matrix), opt.levels);
  } else if (opt.cover_kind == "net") {
    const ParabolicMetric m = opt.alpha > 0
                                  ? ParabolicMetric(opt.alpha, {1, 0, 0, 1})
                                  : ParabolicMetric::from_matrix(parse_matrix(opt.matrix));
    cover = net_cover(m, opt.levels);
  } else {
    throw InputError("cover kind must be subdivision or net");
  }
  emit(opt, "cover.json", cover_to_json(cover));
  const QuasipackingReport q = verify_quasipacking(cover);
  std::cout << "pieces " << cover.piece_count() << " K " << fmt17(q.K)
            << (q.ok ? "" : " QUASIPACKING-VIOLATION") << "\n";
  return q.ok ? kExitOk : kExitVerification;
}

int cmd_modulus(const CliOptions& opt) {
  Cover cover;
  if (opt.cover_kind == "subdivision")
    cover = subdivision_cover(parse_matrix(opt.matrix), opt.levels);
  else if (opt.cover_kind.rfind("grid:", 0) == 0) {
    const std::string dims = opt.cover_kind.substr(5);
    const auto x = dims.find('x');
    if (x == std::string::npos) throw InputError("grid kind must be grid:K1xK2");
    cover = grid_cover(std::atoi(dims.substr(0, x).c_str()),
                       std::atoi(dims.substr(x + 1).c_str()));
  } else {
    throw InputError("cover kind must be subdivision or grid:K1xK2");
  }
  const FamilySpec spec = parse_family(opt.family, cover);
  const Family family = realize(spec, cover);
  SolveOptions sopt;
  sopt.tol = opt.tol;
  sopt.max_outer = opt.max_iter;
  const double p = opt.p_grid.empty() ? 2.0 : opt.p_grid.front();
  const ModulusResult result = solve(family, p, sopt);
  if (opt.format == "csv")
    emit(opt, "modulus.csv",
         "level,p,value,lower,upper,kkt_residual,iterations\n" +
             result_csv_row(cover.level, result) + "\n");
  else
    emit(opt, "modulus.json", result_to_json(result));
  std::cout << "value " << fmt17(result.value) << " bracket ["
            << fmt17(result.lower_bound) << ", " << fmt17(result.upper_bound)
            << "]" << (result.converged ? "" : " NONCONVERGED") << "\n";
  return result.converged ? kExitOk : kExitNonconverged;
}

int cmd_confdim(const CliOptions& opt) {
  const IntMatrix2 A = parse_matrix(opt.matrix);
  const SpectralClass cls = classify(A);
  if (cls.tag == SpectralTag::NotExpanding) {
    std::cout << "error: not expanding\n";
    return kExitInput;
  }
  SweepOptions sopt;
  sopt.tol = opt.tol;
  sopt.threads = opt.threads;
  const std::vector<double> grid =
      opt.p_grid.empty() ? std::vector<double>{1.5, 2.0, 2.5, 3.0, 3.5, 4.0}
                         : opt.p_grid;
  const SweepTable table = sweep(A, {0, 1}, grid, opt.levels, sopt);
  const ExponentEstimate est = estimate_Q(table);
  const ComparisonRecord rec = report(A, est);
  emit(opt, "sweep.csv", sweep_to_csv(table));
  emit(opt, "confdim.json", comparison_to_json(rec));
  std::ostringstream os;
  os << "Q_est~" << fmt17(rec.Q_est) << " oracle=" << fmt17(rec.oracle)
     << (rec.attained ? " (attained)" : " (not attained)");
  if (rec.cls.tag == SpectralTag::RealRepeatedNonSemisimple)
    os << " [exploratory: " << rec.note << "]";
  std::cout << os.str() << "\n";
  bool all_converged = true;
  for (const SweepRow& row : table.rows) all_converged &= row.result.converged;
  return all_converged ? kExitOk : kExitNonconverged;
}

int cmd_verify(const CliOptions& opt) {
  std::vector<std::string> names;
  if (opt.suite == "all")
    names = suite_names();
  else
    names.push_back(opt.suite);
  std::ostringstream all;
  bool ok = true;
  for (const std::string& name : names) {
    const SuiteReport rep = run_suite(name, opt.inject_corrupt);
    const std::string text = suite_report_text(rep);
    std::cout << text;
    all << text;
    ok = ok && rep.pass;
  }
  if (!opt.out.empty()) emit(opt, "verify.txt", all.str());
  return ok ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial moduli and conformal dimension of torus coverings"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--matrix", opt.matrix, "integer matrix \"a,b;c,d\"");
    cmd->add_option("--alpha", opt.alpha, "metric exponent in (0,1]");
    cmd->add_option("--levels", opt.levels, "cover level / sweep depth");
    cmd->add_option("--p-grid", opt.p_grid, "exponent grid (strictly increasing, > 1)")
        ->delimiter(',');
    cmd->add_option("--tol", opt.tol, "solver tolerance");
    cmd->add_option("--max-iter", opt.max_iter, "outer iteration cap");
    cmd->add_option("--out", opt.out, "output directory (stdout when empty)");
    cmd->add_option("--format", opt.format, "json|csv");
    cmd->add_option("--threads", opt.threads, "parallel sweep cells");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "spectral class and oracle");
  add_common(classify_cmd);
  CLI::App* cover_cmd = app.add_subcommand("cover", "build and export a cover");
  add_common(cover_cmd);
  cover_cmd->add_option("--kind", opt.cover_kind, "subdivision|net");
  CLI::App* modulus_cmd = app.add_subcommand("modulus", "solve one modulus problem");
  add_common(modulus_cmd);
  modulus_cmd->add_option("--kind", opt.cover_kind, "subdivision|grid:K1xK2");
  modulus_cmd->add_option("--family", opt.family,
                          "loop-e1|loop-e2|connector:left-right|JSON spec");
  CLI::App* confdim_cmd =
      app.add_subcommand("confdim", "critical-exponent sweep and comparison");
  add_common(confdim_cmd);
  CLI::App* verify_cmd = app.add_subcommand("verify", "run verification suites");
  add_common(verify_cmd);
  verify_cmd->add_option("--suite", opt.suite,
                         "metric|quasipacking|beurling|subadd|dimcompare|transport|"
                         "duality|all");
  verify_cmd->add_flag("--inject-corrupt", opt.inject_corrupt,
                       "deliberately break one fixture (negative testing)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify_cmd->parsed()) return cmd_classify(opt);
    if (cover_cmd->parsed()) return cmd_cover(opt);
    if (modulus_cmd->parsed()) return cmd_modulus(opt);
    if (confdim_cmd->parsed()) return cmd_confdim(opt);
    if (verify_cmd->parsed()) return cmd_verify(opt);
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

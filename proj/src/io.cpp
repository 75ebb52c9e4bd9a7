#include "confdim/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace confdim {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// Numbers are emitted as preformatted strings so files are byte-stable and
// parse back losslessly at 17 significant digits.
ordered_json num(double v) { return fmt17(v); }

} // namespace

std::string cover_to_json(const Cover& cover) {
  ordered_json j;
  j["level"] = cover.level;
  j["kind"] = to_string(cover.kind);
  switch (cover.kind) {
    case CoverKind::Subdivision: j["matrix"] = cover.matrix.to_string(); break;
    case CoverKind::NetBall: j["epsilon"] = num(cover.epsilon); break;
    case CoverKind::Grid: j["k1"] = cover.k1; j["k2"] = cover.k2; break;
  }
  ordered_json pieces = ordered_json::array();
  for (const Piece& p : cover.pieces) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["center"] = {num(p.center.x), num(p.center.y)};
    if (p.exact)
      jp["center_frac"] = {{p.cx.num, p.cx.den}, {p.cy.num, p.cy.den}};
    jp["radius"] = num(p.radius);
    pieces.push_back(std::move(jp));
  }
  j["pieces"] = std::move(pieces);
  ordered_json adj = ordered_json::array();
  for (const auto& [a, b] : cover.edge_list()) adj.push_back({a, b});
  j["adjacency"] = std::move(adj);
  return j.dump(2) + "\n";
}

std::string result_to_json(const ModulusResult& result) {
  ordered_json j;
  j["p"] = num(result.p);
  j["value"] = num(result.value);
  j["lower"] = num(result.lower_bound);
  j["upper"] = num(result.upper_bound);
  j["L"] = num(result.L);
  j["kkt_residual"] = num(result.kkt_residual);
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["empty"] = result.empty;
  ordered_json act = ordered_json::array();
  for (const CombCurve& c : result.active) act.push_back(c.chain);
  j["active"] = std::move(act);
  ordered_json mult = ordered_json::array();
  for (double m : result.multipliers) mult.push_back(num(m));
  j["multipliers"] = std::move(mult);
  if (!result.note.empty()) j["note"] = result.note;
  return j.dump(2) + "\n";
}

std::string result_csv_row(int level, const ModulusResult& result) {
  std::ostringstream os;
  os << level << "," << fmt17(result.p) << "," << fmt17(result.value) << ","
     << fmt17(result.lower_bound) << "," << fmt17(result.upper_bound) << ","
     << fmt17(result.kkt_residual) << "," << result.iterations;
  return os.str();
}

std::string sweep_to_csv(const SweepTable& table) {
  std::ostringstream os;
  os << "direction,level,p,value,lower,upper,ratio\n";
  for (const SweepRow& row : table.rows) {
    double ratio = 0;
    const ModulusResult* prev = table.find(row.direction, row.level - 1, row.p);
    if (prev && prev->value > 0) ratio = row.result.value / prev->value;
    os << "e" << (row.direction + 1) << "," << row.level << "," << fmt17(row.p)
       << "," << fmt17(row.result.value) << "," << fmt17(row.result.lower_bound)
       << "," << fmt17(row.result.upper_bound) << "," << fmt17(ratio) << "\n";
  }
  return os.str();
}

std::string comparison_to_json(const ComparisonRecord& record) {
  ordered_json j;
  j["matrix"] = record.A.to_string();
  j["class"] = to_string(record.cls.tag);
  j["lambda"] = num(record.cls.lambda);
  j["mu"] = num(record.cls.mu);
  j["Q_est"] = num(record.Q_est);
  j["bracket"] = {num(record.p_low), num(record.p_high)};
  j["oracle"] = num(record.oracle);
  j["attained"] = record.attained;
  j["gap"] = num(record.gap);
  j["note"] = record.note;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + path);
  out << content;
}

} // namespace confdim

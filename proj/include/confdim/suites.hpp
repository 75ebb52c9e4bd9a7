#ifndef CONFDIM_SUITES_HPP
#define CONFDIM_SUITES_HPP

#include <string>
#include <vector>

namespace confdim {

struct SuiteLine {
  std::string fixture;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::vector<SuiteLine> lines;
  bool pass = true;
};

const std::vector<std::string>& suite_names();

// Runs one named verification suite over its built-in fixture set.
// inject_corrupt deliberately breaks one fixture to exercise failure paths.
SuiteReport run_suite(const std::string& name, bool inject_corrupt = false);

std::string suite_report_text(const SuiteReport& report);

} // namespace confdim

#endif

#ifndef CONFDIM_IO_HPP
#define CONFDIM_IO_HPP

#include <string>

#include "confdim/cover.hpp"
#include "confdim/modulus.hpp"
#include "confdim/sweep.hpp"

namespace confdim {

// %.17g: doubles round-trip exactly and output is byte-stable across runs.
std::string fmt17(double v);

std::string cover_to_json(const Cover& cover);

std::string result_to_json(const ModulusResult& result);
// Header: level,p,value,lower,upper,kkt_residual,iterations
std::string result_csv_row(int level, const ModulusResult& result);

// Header: direction,level,p,value,lower,upper,ratio (ratio vs previous level)
std::string sweep_to_csv(const SweepTable& table);
std::string comparison_to_json(const ComparisonRecord& record);

void write_file(const std::string& path, const std::string& content);

} // namespace confdim

#endif

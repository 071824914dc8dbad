#pragma once

#include <map>
#include <string>
#include <vector>

#include "xxz/density.hpp"
#include "xxz/nlie.hpp"

namespace xxz {

inline constexpr int kRecordVersion = 1;

// Versioned aux record: gamma, mode, twist, grid descriptor, node values as (re, im) pairs, residual.
std::string aux_to_json(const AuxSolution& sol, const std::string& config_hash);
// Node values and iteration count of a stored record; throws if the grid descriptor differs.
CVec aux_values_from_json(const std::string& text, const ContourGrid& grid, int* iterations = nullptr);

// {m, xi, nu, kappa, alpha, provenance, config_hash, entries (row-major (re, im)), extra scalars}.
std::string density_to_json(const DensityMatrix& D, const std::string& config_hash,
                            const std::map<std::string, cplx>& extra = {});
DensityMatrix density_from_json(const std::string& text);

// One CSV table with a fixed header; complex values occupy two columns <name>_re, <name>_im.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// Expands complex column names into _re/_im pairs.
std::vector<std::string> complex_columns(const std::string& name);
std::vector<std::string> complex_cells(cplx z);

}  // namespace xxz

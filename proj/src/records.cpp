#include "xxz/records.hpp"

#include <json.hpp>

#include "xxz/io.hpp"

namespace xxz {

using nlohmann::json;

namespace {

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

cplx unpair(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::Usage, "complex values must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json pairs(const CVec& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(pair(v[k]));
  return out;
}

json pairs(const std::vector<cplx>& v) {
  json out = json::array();
  for (auto z : v) out.push_back(pair(z));
  return out;
}

}  // namespace

std::string aux_to_json(const AuxSolution& sol, const std::string& config_hash) {
  json j;
  j["record"] = "aux_solution";
  j["version"] = kRecordVersion;
  j["config_hash"] = config_hash;
  j["gamma"] = sol.params.gamma;
  j["mode"] = to_string(sol.params.mode);
  j["trotter_limit"] = sol.params.trotter_limit;
  j["N"] = sol.params.N;
  j["T"] = sol.params.T;
  j["h"] = sol.params.h;
  j["twist"] = pair(sol.twist);
  j["grid"] = sol.grid->descriptor();
  j["iterations"] = sol.iterations;
  j["residual"] = sol.residual;
  j["winding"] = sol.winding;
  j["closure_power"] = sol.closure_power;
  j["nodes"] = pairs(CVec(Eigen::Map<const CVec>(sol.grid->nodes.data(), sol.grid->size())));
  j["a"] = pairs(sol.a);
  return j.dump(1) + "\n";
}

CVec aux_values_from_json(const std::string& text, const ContourGrid& grid, int* iterations) {
  const json j = json::parse(text);
  if (j.value("record", "") != "aux_solution" || j.value("version", 0) != kRecordVersion)
    throw Error(ErrorKind::Usage, "not an aux_solution record of version " + std::to_string(kRecordVersion));
  if (j.at("grid").get<std::string>() != grid.descriptor())
    throw Error(ErrorKind::Usage, "stored aux solution was computed on a different grid");
  const json& a = j.at("a");
  if (a.size() != grid.size()) throw Error(ErrorKind::Usage, "stored aux solution has the wrong length");
  CVec v(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) v[k] = unpair(a[k]);
  if (iterations) *iterations = j.value("iterations", 0);
  return v;
}

std::string density_to_json(const DensityMatrix& D, const std::string& config_hash,
                            const std::map<std::string, cplx>& extra) {
  json j;
  j["record"] = "density_matrix";
  j["version"] = kRecordVersion;
  j["config_hash"] = config_hash;
  j["m"] = D.m;
  j["provenance"] = to_string(D.provenance);
  j["nu"] = pairs(D.nu);
  j["xi"] = pairs(D.xi());
  j["kappa"] = pair(D.kappa);
  j["alpha"] = pair(D.alpha);
  json rows = json::array();
  for (Eigen::Index r = 0; r < D.entries.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < D.entries.cols(); ++c) row.push_back(pair(D.entries(r, c)));
    rows.push_back(row);
  }
  j["entries"] = rows;
  json ex = json::object();
  for (const auto& [k, v] : extra) ex[k] = pair(v);
  j["values"] = ex;
  return j.dump(1) + "\n";
}

DensityMatrix density_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("record", "") != "density_matrix") throw Error(ErrorKind::Usage, "not a density_matrix record");
  DensityMatrix D;
  D.m = j.at("m").get<int>();
  D.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  for (const auto& z : j.at("nu")) D.nu.push_back(unpair(z));
  D.kappa = unpair(j.at("kappa"));
  D.alpha = unpair(j.at("alpha"));
  const auto& rows = j.at("entries");
  const Eigen::Index d = static_cast<Eigen::Index>(rows.size());
  D.entries = CMat(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) D.entries(r, c) = unpair(rows[r][c]);
  return D;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw Error(ErrorKind::Usage, "CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(columns_.size()));
  rows_.push_back(cells);
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += "\n";
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::vector<std::string> complex_columns(const std::string& name) { return {name + "_re", name + "_im"}; }

std::vector<std::string> complex_cells(cplx z) { return {format_double(z.real()), format_double(z.imag())}; }

}  // namespace xxz

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <thread>

#include "xxz/config.hpp"
#include "xxz/density.hpp"
#include "xxz/io.hpp"
#include "xxz/oracle.hpp"
#include "xxz/records.hpp"
#include "xxz/verify.hpp"

namespace fs = std::filesystem;
using namespace xxz;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumerical = 3 };

// Aux solutions through the on-disk cache; a hit returns the stored record bytes unchanged.
class AuxStore {
 public:
  AuxStore(const RunConfig& cfg, GridPtr grid) : cfg_(cfg), grid_(std::move(grid)), dir_(resolve_cache_dir(cfg)) {}

  struct Entry {
    AuxPtr aux;
    std::string record;
    std::string key;
    bool hit = false;
  };

  Entry get(cplx twist) {
    const std::string key = aux_cache_key(cfg_, twist);
    const std::string path = dir_ + "/aux_" + key + ".json";
    Entry e;
    e.key = key;
    if (fs::exists(path)) {
      e.record = read_file(path);
      int iterations = 0;
      const CVec a = aux_values_from_json(e.record, *grid_, &iterations);
      e.aux = std::make_shared<const AuxSolution>(restore_aux(cfg_.model, twist, grid_, a, iterations, cfg_.solver));
      e.hit = true;
      return e;
    }
    e.aux = solve_aux_ptr(cfg_.model, twist, grid_, cfg_.solver);
    e.record = aux_to_json(*e.aux, key);
    write_file_atomic(path, e.record);
    return e;
  }

  AuxPtr aux(cplx twist) { return get(twist).aux; }

  SystemPtr system(cplx alpha) {
    const cplx k = cfg_.model.base_twist();
    return build_nystrom(make_rho_field(aux(k), aux(k + alpha)));
  }

 private:
  const RunConfig& cfg_;
  GridPtr grid_;
  std::string dir_;
};

GridPtr grid_for(const RunConfig& cfg) {
  return make_grid(cfg.model.gamma, cfg.grid_half_width(), cfg.cutoff, cfg.points_per_side);
}

std::string out_path(const RunConfig& cfg, const std::string& name) { return cfg.output_dir + "/" + name; }

void write_manifest(const RunConfig& cfg, const std::string& command, const std::vector<std::string>& outputs,
                    const std::vector<CheckResult>& checks = {}) {
  json j;
  j["record"] = "run";
  j["version"] = kRecordVersion;
  j["command"] = command;
  j["config_hash"] = config_hash(cfg);
  j["config"] = canonical_config(cfg);
  j["outputs"] = outputs;
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"id", c.id}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  j["checks"] = arr;
  write_file_atomic(out_path(cfg, command + "_run.json"), j.dump(1) + "\n");
}

// Spectral parameters of a run; a one-site run defaults to the reference point 0.
std::vector<cplx> nu_list(const RunConfig& cfg, int count) {
  if (cfg.model.nu.empty() && count == 1) return {0.0};
  if (static_cast<int>(cfg.model.nu.size()) < count)
    throw Error(ErrorKind::Config, "key 'nu' needs " + std::to_string(count) + " entries");
  return {cfg.model.nu.begin(), cfg.model.nu.begin() + count};
}

int cmd_solve_aux(const RunConfig& cfg) {
  AuxStore store(cfg, grid_for(cfg));
  const cplx k = cfg.model.base_twist();
  std::vector<cplx> twists = {k};
  if (cfg.model.alpha != 0.0) twists.push_back(k + cfg.model.alpha);
  std::vector<std::string> outputs;
  for (cplx tw : twists) {
    const auto e = store.get(tw);
    const std::string name = "aux_" + e.key + ".json";
    write_file_atomic(out_path(cfg, name), e.record);
    outputs.push_back(name);
    std::cout << (e.hit ? "cache hit  " : "cache miss ") << name << " twist " << format_complex(tw) << " iterations "
              << e.aux->iterations << " residual " << e.aux->residual << " winding " << e.aux->winding << "\n";
  }
  write_manifest(cfg, "solve-aux", outputs);
  return kOk;
}

int cmd_rho(const RunConfig& cfg) {
  AuxStore store(cfg, grid_for(cfg));
  const SystemPtr sys = store.system(cfg.model.alpha);
  const RhoField& f = *sys->field;
  std::vector<std::string> cols = {"config_hash"};
  for (const char* c : {"nu", "xi", "rho", "phi"})
    for (const auto& s : complex_columns(c)) cols.push_back(s);
  CsvTable table(cols);
  const std::vector<cplx> nus = cfg.model.nu.empty() ? std::vector<cplx>{0.0} : cfg.model.nu;
  for (cplx nu : nus) {
    const cplx rho = rho_continued(f, nu);
    std::vector<std::string> row = {config_hash(cfg)};
    for (cplx z : {nu, std::exp(nu), rho, phi_from_rho(rho, f.alpha, f.eta())})
      for (const auto& s : complex_cells(z)) row.push_back(s);
    table.add_row(row);
  }
  write_file_atomic(out_path(cfg, "rho.csv"), table.str());
  std::cout << table.str();
  write_manifest(cfg, "rho", {"rho.csv"});
  return kOk;
}

int cmd_omega(const RunConfig& cfg) {
  AuxStore store(cfg, grid_for(cfg));
  const SystemPtr sys = store.system(cfg.model.alpha);
  const std::vector<cplx> nus = nu_list(cfg, 2);
  std::vector<std::string> cols = {"config_hash"};
  for (const char* c : {"nu1", "nu2", "omega12", "omega21", "Psi12", "Psi21", "rho1", "rho2"})
    for (const auto& s : complex_columns(c)) cols.push_back(s);
  CsvTable table(cols);
  const auto w12 = compute_omega(*sys, nus[0], nus[1]), w21 = compute_omega(*sys, nus[1], nus[0]);
  std::vector<std::string> row = {config_hash(cfg)};
  for (cplx z : {nus[0], nus[1], w12.omega, w21.omega, w12.Psi12, w21.Psi12, w12.rho1, w12.rho2})
    for (const auto& s : complex_cells(z)) row.push_back(s);
  table.add_row(row);
  write_file_atomic(out_path(cfg, "omega.csv"), table.str());
  std::cout << table.str();
  write_manifest(cfg, "omega", {"omega.csv"});
  return kOk;
}

// Fixed column order of the correlator table.
std::vector<std::string> density_columns() {
  std::vector<std::string> cols = {"provenance", "m", "T", "h"};
  for (const char* c : {"kappa", "alpha", "rho"})
    for (const auto& s : complex_columns(c)) cols.push_back(s);
  cols.push_back("magnetization");
  for (const char* c : {"sz", "szsz", "sxsx", "omega12", "omega21", "phi1", "phi2"})
    for (const auto& s : complex_columns(c)) cols.push_back(s);
  cols.push_back("config_hash");
  return cols;
}

struct DensityRun {
  DensityMatrix D;
  std::map<std::string, cplx> values;
  std::optional<double> magnetization;
  std::vector<CheckResult> checks;
};

// Two-site matrix from omega and phi, with the scalars it was built from.
DensityMatrix factorized_m2(const NystromSystem& sys, cplx nu1, cplx nu2, std::map<std::string, cplx>* values) {
  const RhoField& f = *sys.field;
  const auto w12 = compute_omega(sys, nu1, nu2), w21 = compute_omega(sys, nu2, nu1);
  const cplx phi1 = phi_from_rho(w12.rho1, f.alpha, f.eta()), phi2 = phi_from_rho(w12.rho2, f.alpha, f.eta());
  if (values) *values = {{"omega12", w12.omega}, {"omega21", w21.omega}, {"phi1", phi1}, {"phi2", phi2}};
  return density_m2(sys, nu1, nu2);
}

DensityMatrix density_at_alpha(AuxStore& store, const RunConfig& cfg, cplx alpha, const std::vector<cplx>& nus,
                               std::map<std::string, cplx>* values) {
  const SystemPtr sys = store.system(alpha);
  if (cfg.sites == 1) {
    if (values) (*values)["rho"] = rho_continued(*sys->field, nus[0]);
    return density_m1(*sys->field, nus[0]);
  }
  if (cfg.sites == 2) return factorized_m2(*sys, nus[0], nus[1], values);
  return multint_density_matrix(*sys, nus);
}

DensityRun run_density(const RunConfig& cfg) {
  cfg.validate();
  AuxStore store(cfg, grid_for(cfg));
  const std::vector<cplx> nus = nu_list(cfg, cfg.sites);
  DensityRun run;
  if (cfg.physical_limit) {
    const double e = cfg.alpha_eps;
    std::map<double, DensityMatrix> family;
    for (double a : {-2 * e, -e, e, 2 * e}) family[a] = density_at_alpha(store, cfg, a, nus, nullptr);
    run.D = physical_limit(family, e);
  } else {
    run.D = density_at_alpha(store, cfg, cfg.model.alpha, nus, &run.values);
  }
  run.D.kappa = cfg.model.kappa;

  if (cfg.model.mode == Mode::Temperature && cfg.sites == 1) {
    const double e = cfg.alpha_eps;
    const cplx k = cfg.model.base_twist();
    const AuxPtr base = store.aux(k);
    auto rho = [&](double a) { return rho_continued(*make_rho_field(base, store.aux(k + a)), nus[0]); };
    const cplx slope = richardson_derivative(rho(-2 * e), rho(-e), rho(e), rho(2 * e), e);
    run.magnetization = (slope / (2.0 * cfg.model.eta())).real();
  }

  if (cfg.sites >= 2 && !cfg.physical_limit) {
    const SystemPtr sys = store.system(cfg.model.alpha);
    const cplx a = sys->field->alpha, eta = cfg.model.eta();
    const DensityMatrix D1a = density_m1(*sys->field, nus[0]), D1b = density_m1(*sys->field, nus[1]);
    if (cfg.sites == 2) {
      run.checks = reduction_checks("reduction", run.D, D1a, D1b, rho_continued(*sys->field, nus[0]), a, eta, 1e-8);
    } else {
      // Right reduction against the two-site matrix on the first two parameters.
      const DensityMatrix D2 = density_m2(*sys, nus[0], nus[1]);
      run.checks.push_back(make_check("reduction right", "tr_3 D(xi1, xi2, xi3) - D(xi1, xi2)",
                                      (partial_trace_last(run.D.entries) - D2.entries).cwiseAbs().maxCoeff(), 1e-6));
      run.checks.push_back(make_check("reduction trace", "|tr D - 1|", std::abs(run.D.entries.trace() - 1.0), 1e-6));
    }
  }
  return run;
}

std::vector<std::string> density_row(const RunConfig& cfg, const DensityRun& run) {
  auto opt = [&](const char* k) {
    auto it = run.values.find(k);
    return it == run.values.end() ? std::vector<std::string>{"", ""} : complex_cells(it->second);
  };
  const Correlators c = correlators(run.D);
  std::vector<std::string> row = {to_string(run.D.provenance), std::to_string(run.D.m), format_double(cfg.model.T),
                                  format_double(cfg.model.h)};
  for (const auto& v : {complex_cells(cfg.model.kappa), complex_cells(run.D.alpha), opt("rho")})
    row.insert(row.end(), v.begin(), v.end());
  row.push_back(run.magnetization ? format_double(*run.magnetization) : "");
  const bool two = run.D.m >= 2;
  const std::vector<std::string> blank = {"", ""};
  for (const auto& v : {complex_cells(c.sz), two ? complex_cells(c.szsz) : blank, two ? complex_cells(c.sxsx) : blank,
                        opt("omega12"), opt("omega21"), opt("phi1"), opt("phi2")})
    row.insert(row.end(), v.begin(), v.end());
  row.push_back(config_hash(cfg));
  return row;
}

int report_checks(const std::vector<CheckResult>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::cerr << (c.pass ? "ok   " : "FAIL ") << c.id << " residual " << c.residual << " (tol " << c.tolerance
              << ")\n";
    ok = ok && c.pass;
  }
  return ok ? kOk : kVerifyFailed;
}

int cmd_density(const RunConfig& cfg) {
  const DensityRun run = run_density(cfg);
  write_file_atomic(out_path(cfg, "density.json"), density_to_json(run.D, config_hash(cfg), run.values));
  CsvTable table(density_columns());
  table.add_row(density_row(cfg, run));
  write_file_atomic(out_path(cfg, "correlators.csv"), table.str());
  std::cout << table.str();
  write_manifest(cfg, "density", {"density.json", "correlators.csv"}, run.checks);
  return report_checks(run.checks);
}

int cmd_oracle(const RunConfig& cfg) {
  cfg.model.validate();
  DensityMatrix D;
  D.nu = nu_list(cfg, cfg.sites);
  D.m = cfg.sites;
  D.kappa = cfg.model.kappa;
  D.alpha = cfg.model.alpha;
  D.provenance = Provenance::Oracle;
  D.entries = density_direct(cfg.model, D.nu);
  const std::string text = density_to_json(D, config_hash(cfg));
  write_file_atomic(out_path(cfg, "oracle.json"), text);
  std::cout << text;
  write_manifest(cfg, "oracle", {"oracle.json"});
  return kOk;
}

SuiteSettings suite_settings(const RunConfig& cfg) {
  SuiteSettings s;
  auto given = [&](const char* k) { return cfg.given_keys.count(k) > 0; };
  if (given("gamma")) s.gamma = cfg.model.gamma;
  if (given("N")) s.N = cfg.model.N;
  if (given("kappa")) s.kappa = cfg.model.kappa;
  if (given("alpha")) s.alpha = cfg.model.alpha;
  if (given("nu")) {
    if (cfg.model.nu.size() != 2) throw Error(ErrorKind::Config, "key 'nu' must hold two entries for verify");
    s.nu1 = cfg.model.nu[0];
    s.nu2 = cfg.model.nu[1];
  }
  if (given("half_width")) s.half_width = cfg.grid_half_width();
  if (given("gamma") && !given("half_width")) s.half_width = cfg.grid_half_width();
  if (given("cutoff")) s.cutoff = cfg.cutoff;
  if (given("points_per_side")) s.points_per_side = cfg.points_per_side;
  s.solver = cfg.solver;
  s.inject_table_fault = cfg.inject_table_fault;
  return s;
}

int cmd_verify(const RunConfig& cfg) {
  VerificationReport report = run_suite(suite_settings(cfg), cfg.verify);
  report.config_hash = config_hash(cfg);
  write_file_atomic(out_path(cfg, "verify.json"), report.to_json());
  for (const auto& c : report.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << "  residual " << c.residual << "  tol " << c.tolerance
              << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
  std::cout << (report.all_pass() ? "all checks passed" : "verification FAILED") << "\n";
  write_manifest(cfg, "verify", {"verify.json"});
  return report.all_pass() ? kOk : kVerifyFailed;
}

int cmd_sweep(const RunConfig& cfg) {
  if (cfg.sweep_key.empty() || cfg.sweep_values.empty())
    throw Error(ErrorKind::Config, "sweep needs keys 'sweep_key' and 'sweep_values'");
  std::vector<double> values = cfg.sweep_values;
  std::sort(values.begin(), values.end());
  std::vector<std::optional<std::vector<std::string>>> rows(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        RunConfig point = cfg;
        set_config_value(point, cfg.sweep_key, format_double(values[i]));
        point.sweep_key.clear();
        point.sweep_values.clear();
        const DensityRun run = run_density(point);
        const std::string stem = "sweep/point_" + std::to_string(i);
        write_file_atomic(out_path(cfg, stem + ".json"), density_to_json(run.D, config_hash(point), run.values));
        std::vector<std::string> row = {format_double(values[i])};
        const auto cells = density_row(point, run);
        row.insert(row.end(), cells.begin(), cells.end());
        rows[i] = row;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min<int>(cfg.workers, static_cast<int>(values.size())); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<std::string> cols = {"sweep_" + cfg.sweep_key};
  for (const auto& c : density_columns()) cols.push_back(c);
  CsvTable table(cols);
  int code = kOk;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (rows[i]) {
      table.add_row(*rows[i]);
    } else {
      std::cerr << "point " << cfg.sweep_key << " = " << format_double(values[i]) << " failed: " << errors[i] << "\n";
      code = kNumerical;
    }
  }
  write_file_atomic(out_path(cfg, "sweep.csv"), table.str());
  std::cout << table.str();
  write_manifest(cfg, "sweep", {"sweep.csv"});
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XXZ alpha-twisted density matrices and factorized correlation functions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "print this help and exit");
  std::string config_path;
  std::map<std::string, std::string> flags;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  for (const auto& key : config_keys())
    app.add_option_function<std::string>("--" + key, [&flags, key](const std::string& v) { flags[key] = v; },
                                         "config key '" + key + "'");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve-aux", "solve (or load from cache) the auxiliary functions"},
      {"rho", "eigenvalue ratio rho and phi at the configured nu"},
      {"omega", "omega, Psi and rho at nu1, nu2"},
      {"density", "density matrix JSON and correlator CSV"},
      {"oracle", "brute-force density matrix from exact eigenvectors"},
      {"verify", "run the verification suite; exit 0 iff all checks pass"},
      {"sweep", "density pipeline over sweep_key = sweep_values"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [k, v] : flags) set_config_value(cfg, k, v);
    cfg.validate();
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "solve-aux") return cmd_solve_aux(cfg);
    if (cmd == "rho") return cmd_rho(cfg);
    if (cmd == "omega") return cmd_omega(cfg);
    if (cmd == "density") return cmd_density(cfg);
    if (cmd == "oracle") return cmd_oracle(cfg);
    if (cmd == "verify") return cmd_verify(cfg);
    return cmd_sweep(cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Usage) ? kUsage : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xxz/model.hpp"
#include "xxz/nlie.hpp"

namespace xxz {

// Flat typed run configuration. Text form: one "key = value" per line, '#' starts a comment.
// Complex values are "(re,im)" or a plain real; lists are whitespace separated.
struct RunConfig {
  ModelParams model;
  // Grid; half_width defaults to gamma/4 when unset.
  std::optional<double> half_width;
  double cutoff = 20.0;
  int points_per_side = 768;
  SolverOptions solver;
  // Density pipeline.
  int sites = 2;                 // m
  bool physical_limit = false;   // extrapolate alpha -> 0 from +-alpha_eps, +-2 alpha_eps
  double alpha_eps = 1e-3;
  // Verification.
  std::vector<std::string> verify = {"all"};
  bool inject_table_fault = false;  // test fixture: perturbs one coefficient of the +-/+- row
  // Sweep.
  std::string sweep_key;
  std::vector<double> sweep_values;
  int workers = 1;
  // Paths.
  std::string output_dir = "xxz_out";
  std::string cache_dir;  // empty: XXZ_CACHE_DIR, then <output_dir>/cache
  // Keys set explicitly through a file or a flag.
  std::set<std::string> given_keys;

  double grid_half_width() const { return half_width.value_or(model.gamma / 4.0); }
  void validate() const;
};

// Every accepted key, in canonical order.
const std::vector<std::string>& config_keys();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Sets one key from its text value; unknown keys and malformed values are config errors naming the key.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& cfg, const std::string& key);

// Canonical text (all keys, fixed order, round-trip number formatting) and its hash.
std::string canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);
// Hash of the inputs that determine one aux solution.
std::string aux_cache_key(const RunConfig& cfg, cplx twist);

std::string resolve_cache_dir(const RunConfig& cfg);

// Text codecs for typed values.
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

}  // namespace xxz

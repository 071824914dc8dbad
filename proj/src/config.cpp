#include "xxz/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "xxz/io.hpp"

namespace xxz {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& t) {
  double v = 0.0;
  const std::string s = trim(t);
  const char* first = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
  auto res = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a real number: '" + s + "'");
  return v;
}

int parse_int(const std::string& t) {
  int v = 0;
  const std::string s = trim(t);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& t) {
  const std::string s = trim(t);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

Mode parse_mode(const std::string& t) {
  const std::string s = trim(t);
  if (s == "finite_length") return Mode::FiniteLength;
  if (s == "temperature") return Mode::Temperature;
  throw std::invalid_argument("mode must be finite_length or temperature");
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  for (const auto& tok : split_ws(s)) out.push_back(parse_complex(tok));
  return out;
}

std::string format_complex_list(const std::vector<cplx>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_complex(v[i]);
  return out;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

struct KeySpec {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<std::pair<std::string, KeySpec>>& key_table() {
  static const std::vector<std::pair<std::string, KeySpec>> table = {
      {"gamma", {[](RunConfig& c, const std::string& v) { c.model.gamma = parse_real(v); },
                 [](const RunConfig& c) { return format_double(c.model.gamma); }}},
      {"J", {[](RunConfig& c, const std::string& v) { c.model.J = parse_real(v); },
             [](const RunConfig& c) { return format_double(c.model.J); }}},
      {"mode", {[](RunConfig& c, const std::string& v) { c.model.mode = parse_mode(v); },
                [](const RunConfig& c) { return std::string(to_string(c.model.mode)); }}},
      {"N", {[](RunConfig& c, const std::string& v) { c.model.N = parse_int(v); },
             [](const RunConfig& c) { return std::to_string(c.model.N); }}},
      {"T", {[](RunConfig& c, const std::string& v) { c.model.T = parse_real(v); },
             [](const RunConfig& c) { return format_double(c.model.T); }}},
      {"h", {[](RunConfig& c, const std::string& v) { c.model.h = parse_real(v); },
             [](const RunConfig& c) { return format_double(c.model.h); }}},
      {"kappa", {[](RunConfig& c, const std::string& v) { c.model.kappa = parse_complex(v); },
                 [](const RunConfig& c) { return format_complex(c.model.kappa); }}},
      {"alpha", {[](RunConfig& c, const std::string& v) { c.model.alpha = parse_complex(v); },
                 [](const RunConfig& c) { return format_complex(c.model.alpha); }}},
      {"beta_inhom", {[](RunConfig& c, const std::string& v) { c.model.beta_inhom = parse_complex_list(v); },
                      [](const RunConfig& c) { return format_complex_list(c.model.beta_inhom); }}},
      {"trotter_limit", {[](RunConfig& c, const std::string& v) { c.model.trotter_limit = parse_bool(v); },
                         [](const RunConfig& c) { return format_bool(c.model.trotter_limit); }}},
      {"nu", {[](RunConfig& c, const std::string& v) { c.model.nu = parse_complex_list(v); },
              [](const RunConfig& c) { return format_complex_list(c.model.nu); }}},
      {"half_width", {[](RunConfig& c, const std::string& v) {
                        if (trim(v) == "auto") c.half_width.reset();
                        else c.half_width = parse_real(v);
                      },
                      [](const RunConfig& c) {
                        return c.half_width ? format_double(*c.half_width) : std::string("auto");
                      }}},
      {"cutoff", {[](RunConfig& c, const std::string& v) { c.cutoff = parse_real(v); },
                  [](const RunConfig& c) { return format_double(c.cutoff); }}},
      {"points_per_side", {[](RunConfig& c, const std::string& v) { c.points_per_side = parse_int(v); },
                           [](const RunConfig& c) { return std::to_string(c.points_per_side); }}},
      {"tol", {[](RunConfig& c, const std::string& v) { c.solver.tol = parse_real(v); },
               [](const RunConfig& c) { return format_double(c.solver.tol); }}},
      {"damping", {[](RunConfig& c, const std::string& v) { c.solver.damping = parse_real(v); },
                   [](const RunConfig& c) { return format_double(c.solver.damping); }}},
      {"max_iter", {[](RunConfig& c, const std::string& v) { c.solver.max_iter = parse_int(v); },
                    [](const RunConfig& c) { return std::to_string(c.solver.max_iter); }}},
      {"branch_eps", {[](RunConfig& c, const std::string& v) { c.solver.branch_eps = parse_real(v); },
                      [](const RunConfig& c) { return format_double(c.solver.branch_eps); }}},
      {"sites", {[](RunConfig& c, const std::string& v) { c.sites = parse_int(v); },
                 [](const RunConfig& c) { return std::to_string(c.sites); }}},
      {"physical_limit", {[](RunConfig& c, const std::string& v) { c.physical_limit = parse_bool(v); },
                          [](const RunConfig& c) { return format_bool(c.physical_limit); }}},
      {"alpha_eps", {[](RunConfig& c, const std::string& v) { c.alpha_eps = parse_real(v); },
                     [](const RunConfig& c) { return format_double(c.alpha_eps); }}},
      {"verify", {[](RunConfig& c, const std::string& v) { c.verify = split_ws(v); },
                  [](const RunConfig& c) {
                    std::string out;
                    for (std::size_t i = 0; i < c.verify.size(); ++i) out += (i ? " " : "") + c.verify[i];
                    return out;
                  }}},
      {"inject_table_fault", {[](RunConfig& c, const std::string& v) { c.inject_table_fault = parse_bool(v); },
                              [](const RunConfig& c) { return format_bool(c.inject_table_fault); }}},
      {"sweep_key", {[](RunConfig& c, const std::string& v) { c.sweep_key = trim(v); },
                     [](const RunConfig& c) { return c.sweep_key; }}},
      {"sweep_values", {[](RunConfig& c, const std::string& v) {
                          c.sweep_values.clear();
                          for (const auto& t : split_ws(v)) c.sweep_values.push_back(parse_real(t));
                        },
                        [](const RunConfig& c) {
                          std::string out;
                          for (std::size_t i = 0; i < c.sweep_values.size(); ++i)
                            out += (i ? " " : "") + format_double(c.sweep_values[i]);
                          return out;
                        }}},
      {"workers", {[](RunConfig& c, const std::string& v) { c.workers = parse_int(v); },
                   [](const RunConfig& c) { return std::to_string(c.workers); }}},
      {"output_dir", {[](RunConfig& c, const std::string& v) { c.output_dir = trim(v); },
                      [](const RunConfig& c) { return c.output_dir; }}},
      {"cache_dir", {[](RunConfig& c, const std::string& v) { c.cache_dir = trim(v); },
                     [](const RunConfig& c) { return c.cache_dir; }}},
  };
  return table;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& [name, spec] : key_table())
    if (name == key) return &spec;
  return nullptr;
}

// Keys that do not change any computed number.
bool is_output_only(const std::string& key) {
  return key == "output_dir" || key == "cache_dir" || key == "workers" || key == "verify";
}

}  // namespace

cplx parse_complex(const std::string& text) {
  const std::string s = trim(text);
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw std::invalid_argument("complex value must be (re,im): '" + s + "'");
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("complex value must be (re,im): '" + s + "'");
    return {parse_real(s.substr(1, comma - 1)), parse_real(s.substr(comma + 1, s.size() - comma - 2))};
  }
  return {parse_real(s), 0.0};
}

std::string format_complex(cplx z) { return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")"; }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, spec] : key_table()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  try {
    spec->set(cfg, value);
    cfg.given_keys.insert(key);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorKind::Config, "key '" + key + "': " + e.what());
  }
}

std::string get_config_value(const RunConfig& cfg, const std::string& key) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  return spec->get(cfg);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (seen.count(key)) throw Error(ErrorKind::Config, "key '" + key + "' given twice");
    seen[key] = lineno;
    set_config_value(cfg, key, trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

void RunConfig::validate() const {
  model.validate();
  if (half_width && !(*half_width > 0.0 && *half_width < model.gamma / 2.0))
    throw Error(ErrorKind::Config, "key 'half_width' must satisfy 0 < half_width < gamma/2");
  if (!(cutoff > 0.0)) throw Error(ErrorKind::Config, "key 'cutoff' must be > 0");
  if (points_per_side < 16 || points_per_side % 16 != 0)
    throw Error(ErrorKind::Config, "key 'points_per_side' must be a positive multiple of 16");
  if (!(solver.tol > 0.0)) throw Error(ErrorKind::Config, "key 'tol' must be > 0");
  if (!(solver.damping > 0.0 && solver.damping <= 1.0)) throw Error(ErrorKind::Config, "key 'damping' must be in (0, 1]");
  if (solver.max_iter < 1) throw Error(ErrorKind::Config, "key 'max_iter' must be >= 1");
  if (sites < 1 || sites > 3) throw Error(ErrorKind::Config, "key 'sites' must be 1, 2 or 3");
  if (!(alpha_eps > 0.0)) throw Error(ErrorKind::Config, "key 'alpha_eps' must be > 0");
  if (workers < 1) throw Error(ErrorKind::Config, "key 'workers' must be >= 1");
  if (!sweep_key.empty() && !find_key(sweep_key))
    throw Error(ErrorKind::Config, "key 'sweep_key' names unknown key '" + sweep_key + "'");
}

std::string canonical_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [name, spec] : key_table()) out += name + " = " + spec.get(cfg) + "\n";
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  std::string out;
  for (const auto& [name, spec] : key_table())
    if (!is_output_only(name)) out += name + " = " + spec.get(cfg) + "\n";
  return hash_string(out);
}

std::string aux_cache_key(const RunConfig& cfg, cplx twist) {
  std::string s = "aux-v1\n";
  for (const char* k : {"gamma", "J", "mode", "N", "T", "h", "beta_inhom", "trotter_limit", "cutoff",
                        "points_per_side", "tol", "damping", "max_iter", "branch_eps"})
    s += std::string(k) + " = " + get_config_value(cfg, k) + "\n";
  s += "half_width = " + format_double(cfg.grid_half_width()) + "\n";
  s += "twist = " + format_complex(twist) + "\n";
  return hash_string(s);
}

std::string resolve_cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("XXZ_CACHE_DIR"); env && *env) return env;
  return cfg.output_dir + "/cache";
}

}  // namespace xxz

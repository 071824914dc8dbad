#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "xxz/config.hpp"
#include "xxz/io.hpp"
#include "xxz/records.hpp"
#include "xxz/verify.hpp"

using namespace xxz;

TEST_CASE("config parsing: values, comments, defaults") {
  const RunConfig c = parse_config(
      "# finite length run\n"
      "gamma = 0.7\n"
      "N = 6   # sites\n"
      "kappa = (0.1,0.02)\n"
      "alpha = 0.25\n"
      "nu = (0.1,0.01) -0.2\n"
      "mode = temperature\n"
      "T = 3\n"
      "verify = rho_identity omega_symmetries\n");
  CHECK(c.model.gamma == 0.7);
  CHECK(c.model.N == 6);
  CHECK(c.model.kappa == cplx(0.1, 0.02));
  CHECK(c.model.alpha == cplx(0.25, 0.0));
  REQUIRE(c.model.nu.size() == 2);
  CHECK(c.model.nu[1] == cplx(-0.2, 0.0));
  CHECK(c.model.mode == Mode::Temperature);
  CHECK(c.verify == std::vector<std::string>{"rho_identity", "omega_symmetries"});
  CHECK(c.grid_half_width() == doctest::Approx(0.7 / 4));
  CHECK(c.given_keys.count("gamma") == 1);
  CHECK(c.given_keys.count("cutoff") == 0);
}

TEST_CASE("config errors name the key") {
  try {
    parse_config("gamma = 0.6\nbogus_key = 1\n");
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
  try {
    parse_config("N = four\n");
    FAIL("malformed value accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("'N'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("N = 4\nN = 6\n"), Error);
  CHECK_THROWS_AS(parse_config("just text\n"), Error);
  RunConfig bad;
  bad.points_per_side = 100;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("canonical text round trips and hashing") {
  RunConfig c;
  set_config_value(c, "kappa", "(0.1,-0.3)");
  set_config_value(c, "beta_inhom", "0.1 (0.2,0.3) 0.3 0.4");
  const RunConfig back = parse_config(canonical_config(c));
  CHECK(canonical_config(back) == canonical_config(c));
  CHECK(config_hash(back) == config_hash(c));

  RunConfig moved = c;
  moved.output_dir = "elsewhere";
  moved.workers = 4;
  CHECK(config_hash(moved) == config_hash(c));
  RunConfig tighter = c;
  tighter.solver.tol = 1e-11;
  CHECK(config_hash(tighter) != config_hash(c));
  CHECK(aux_cache_key(tighter, 0.1) != aux_cache_key(c, 0.1));
  RunConfig other_alpha = c;
  other_alpha.model.alpha = 0.3;
  CHECK(aux_cache_key(other_alpha, 0.1) == aux_cache_key(c, 0.1));
}

TEST_CASE("cache directory resolution") {
  RunConfig c;
  c.output_dir = "out";
  ::unsetenv("XXZ_CACHE_DIR");
  CHECK(resolve_cache_dir(c) == "out/cache");
  ::setenv("XXZ_CACHE_DIR", "/tmp/xxz-cache-test", 1);
  CHECK(resolve_cache_dir(c) == "/tmp/xxz-cache-test");
  c.cache_dir = "explicit";
  CHECK(resolve_cache_dir(c) == "explicit");
  ::unsetenv("XXZ_CACHE_DIR");
}

TEST_CASE("aux record round trip is byte identical") {
  const ModelParams p = fixtures::finite_params();
  const GridPtr g = fixtures::coarse_grid();
  const AuxSolution sol = solve_aux(p, 0.1, g);
  const std::string text = aux_to_json(sol, "abc");
  int iterations = 0;
  const CVec a = aux_values_from_json(text, *g, &iterations);
  CHECK(iterations == sol.iterations);
  const AuxSolution back = restore_aux(p, 0.1, g, a, iterations);
  CHECK(aux_to_json(back, "abc") == text);
  CHECK_THROWS_AS(aux_values_from_json(text, *make_grid(0.6, 0.15, 20.0, 512)), Error);

  const auto dir = std::filesystem::temp_directory_path() / "xxz_record_test";
  write_file_atomic((dir / "aux.json").string(), text);
  CHECK(read_file((dir / "aux.json").string()) == text);
  std::filesystem::remove_all(dir);
}

TEST_CASE("density record round trip and CSV layout") {
  DensityMatrix D;
  D.m = 1;
  D.nu = {cplx(0.1, 0.2)};
  D.kappa = 0.1;
  D.alpha = cplx(0.2, -0.1);
  D.provenance = Provenance::Oracle;
  D.entries = (CMat(2, 2) << cplx(0.4, 0.1), 0, 0, cplx(0.6, -0.1)).finished();
  const DensityMatrix back = density_from_json(density_to_json(D, "h", {{"rho", 1.5}}));
  CHECK(back.provenance == Provenance::Oracle);
  CHECK(back.entries == D.entries);
  CHECK(back.alpha == D.alpha);

  std::vector<std::string> cols = {"m"};
  for (const auto& c : complex_columns("rho")) cols.push_back(c);
  CsvTable t(cols);
  std::vector<std::string> row = {"1"};
  for (const auto& c : complex_cells(cplx(0.5, -0.25))) row.push_back(c);
  t.add_row(row);
  CHECK(t.str() == "m,rho_re,rho_im\n1,0.5,-0.25\n");
  CHECK_THROWS_AS(t.add_row({"1"}), Error);
}

TEST_CASE("verification report lists every criterion") {
  const auto& ids = criterion_ids();
  CHECK(ids.size() == 12);
  CHECK_THROWS_AS(criterion_description("no_such_check"), Error);
  VerificationReport r;
  r.checks.push_back(make_check("rho_identity.finite_length", "d", 1e-12, 1e-8));
  const std::string json = r.to_json();
  for (const auto& id : ids) CHECK(json.find("\"" + id + "\"") != std::string::npos);
  CHECK(r.all_pass());
  r.checks.push_back(make_check("rho_identity.temperature", "d", std::nan(""), 1e-8));
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("fault injection fails the factorization check and names the element") {
  SuiteSettings s;
  s.inject_table_fault = true;
  const VerificationReport r = run_suite(s, {"factorization_identity"});
  CHECK_FALSE(r.all_pass());
  int failed = 0;
  for (const auto& c : r.checks)
    if (!c.pass) {
      ++failed;
      CHECK(c.id == "factorization_identity.element +-/+-");
    }
  CHECK(failed == 1);
}

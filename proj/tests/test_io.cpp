#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chebmg/io.hpp"

using namespace chebmg;

namespace {

CaseResult make_row(Family family, Cycle cycle) {
  CaseResult r;
  r.cfg.Lx = 8.0;
  r.cfg.n = 32;
  r.cfg.factor = 2;
  r.cfg.family = family;
  r.cfg.k = 3;
  r.cfg.cycle = cycle;
  r.cfg.driver = Driver::pcg;
  r.report.iterations = 7;
  r.report.fine_matvecs = 56;
  r.report.rho = 0.25;
  r.report.converged = true;
  r.report.wall_time_sec = 0.0015;
  r.lambda_tilde = 1.9;
  return r;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("shortest formatting round-trips exactly", "[io]") {
  for (double v : {0.1, 1.0 / 3.0, 1.03, 12345.678, 1e-300, 2.0, 0.0}) {
    REQUIRE(parse_double(format_shortest(v)) == v);
  }
  REQUIRE(format_shortest(1.125) == "1.125");
  REQUIRE(format_shortest(0.1) == "0.1");
  REQUIRE(format_shortest(static_cast<std::size_t>(12345)) == "12345");
}

TEST_CASE("numeric parsing rejects trailing junk", "[io]") {
  REQUIRE(parse_double("1e3") == 1000.0);
  REQUIRE(parse_size("42") == 42);
  REQUIRE_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_double(""), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_size("-3"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_size("3.5"), std::invalid_argument);
}

TEST_CASE("lambda_min is reported only for 1st-kind rows", "[io]") {
  CaseResult r = make_row(Family::first, Cycle::full);
  r.cfg.lambda_min_multiplier = 0.15;
  REQUIRE(effective_lambda_min_mult(r) == 0.15);

  r = make_row(Family::first_opt_lambda, Cycle::full);
  REQUIRE_FALSE(effective_lambda_min_mult(r).has_value());
  r.tuned_lambda_min = 0.05;
  REQUIRE(effective_lambda_min_mult(r) == 0.05);

  REQUIRE_FALSE(effective_lambda_min_mult(make_row(Family::fourth, Cycle::full)).has_value());
  REQUIRE_FALSE(effective_lambda_min_mult(make_row(Family::fourth_opt, Cycle::full)).has_value());
}

TEST_CASE("csv rows survive a write/parse round trip", "[io]") {
  std::vector<CaseResult> rows;
  rows.push_back(make_row(Family::fourth, Cycle::one_sided));
  rows.back().C_est = 127.25;
  rows.push_back(make_row(Family::first, Cycle::full));
  rows.back().report.converged = false;
  rows.push_back(make_row(Family::first_opt_lambda, Cycle::one_sided));
  rows.back().tuned_lambda_min = 0.0125;

  std::stringstream ss;
  write_csv(ss, rows);
  const auto parsed = parse_csv(ss);
  REQUIRE(parsed.size() == 3);

  REQUIRE(parsed[0].case_id == rows[0].cfg.id());
  REQUIRE(parsed[0].Lx == 8.0);
  REQUIRE(parsed[0].factor == 2);
  REQUIRE(parsed[0].family == "fourth");
  REQUIRE(parsed[0].k_pre == 6);
  REQUIRE(parsed[0].k_post == 0);
  REQUIRE(parsed[0].cycle == "one_sided");
  REQUIRE(parsed[0].driver == "pcg");
  REQUIRE(parsed[0].iterations == 7);
  REQUIRE(parsed[0].fine_matvecs == 56);
  REQUIRE(parsed[0].rho == 0.25);
  REQUIRE(parsed[0].C_est == 127.25);
  REQUIRE(parsed[0].lambda_tilde == 1.9);
  REQUIRE_FALSE(parsed[0].lambda_min_mult.has_value());
  REQUIRE(parsed[0].converged);
  REQUIRE(parsed[0].time_ms == rows[0].report.wall_time_sec * 1e3);

  REQUIRE(parsed[1].family == "first");
  REQUIRE(parsed[1].k_pre == 3);
  REQUIRE(parsed[1].k_post == 3);
  REQUIRE_FALSE(parsed[1].converged);
  REQUIRE(parsed[1].lambda_min_mult == rows[1].cfg.lambda_min_multiplier);
  REQUIRE_FALSE(parsed[1].C_est.has_value());

  REQUIRE(parsed[2].lambda_min_mult == 0.0125);
}

TEST_CASE("timing can be left out for byte-stable output", "[io]") {
  const std::vector<CaseResult> rows{make_row(Family::fourth, Cycle::full)};
  CsvOptions opts;
  opts.include_timing = false;

  std::stringstream a;
  write_csv(a, rows);
  std::stringstream b;
  write_csv(b, rows, opts);
  REQUIRE(a.str() != b.str());

  const auto parsed = parse_csv(b);
  REQUIRE_FALSE(parsed[0].time_ms.has_value());

  const std::string line = b.str();
  REQUIRE(line.find(",\n") != std::string::npos);
}

TEST_CASE("csv parsing validates header and fields", "[io]") {
  std::stringstream empty;
  REQUIRE_THROWS_AS(parse_csv(empty), std::invalid_argument);

  std::stringstream bad_header("id,n\n");
  REQUIRE_THROWS_AS(parse_csv(bad_header), std::invalid_argument);

  std::stringstream short_row(std::string(kCsvHeader) + "\nonly,three,fields\n");
  REQUIRE_THROWS_AS(parse_csv(short_row), std::invalid_argument);

  std::stringstream bad_bool(std::string(kCsvHeader) +
                             "\nid,1,2,fourth,1,1,full,pcg,1,4,0.5,,1.9,,yes,\n");
  REQUIRE_THROWS_AS(parse_csv(bad_bool), std::invalid_argument);

  std::stringstream crlf(std::string(kCsvHeader) +
                         "\r\nid,1,2,fourth,1,1,full,pcg,1,4,0.5,,1.9,,true,\r\n\r\n");
  const auto rows = parse_csv(crlf);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].converged);
  REQUIRE_FALSE(rows[0].time_ms.has_value());
}

TEST_CASE("the beta table dumps one row per coefficient", "[io]") {
  std::stringstream ss;
  write_beta_table_csv(ss);
  const std::string s = ss.str();
  REQUIRE(s.rfind("k,i,beta\n", 0) == 0);
  REQUIRE(std::count(s.begin(), s.end(), '\n') == 1 + 210);
  REQUIRE(s.find("\n1,1,1.125\n") != std::string::npos);
  REQUIRE(s.find("\n20,20,") != std::string::npos);
}

TEST_CASE("sweep emission writes csv and one svg per group", "[io]") {
  SweepResult sr;
  sr.rows.push_back(make_row(Family::fourth, Cycle::full));
  sr.rows.push_back(make_row(Family::fourth, Cycle::one_sided));
  sr.rows.push_back(make_row(Family::first, Cycle::full));
  sr.rows.back().report.converged = false;
  sr.rows.push_back(make_row(Family::fourth_opt, Cycle::one_sided));
  sr.rows.back().cfg.Lx = 64.0;
  select_best_rows(sr);

  const auto dir = fresh_dir("chebmg_test_io_sweep");
  const auto written = emit_sweep(sr, dir.string(), true, true);
  REQUIRE(written.size() == 3);
  REQUIRE(std::filesystem::exists(dir / "sweep.csv"));
  REQUIRE(std::filesystem::exists(dir / "sweep_Lx8_f2.svg"));
  REQUIRE(std::filesystem::exists(dir / "sweep_Lx64_f2.svg"));

  std::ifstream csv(dir / "sweep.csv");
  REQUIRE(parse_csv(csv).size() == 4);

  std::stringstream svg;
  {
    std::ifstream f(dir / "sweep_Lx8_f2.svg");
    svg << f.rdbuf();
  }
  const std::string body = svg.str();
  REQUIRE(body.find("<svg") != std::string::npos);
  REQUIRE(body.find("</svg>") != std::string::npos);
  REQUIRE(body.find("L_x = 8, coarsening factor 2") != std::string::npos);
  REQUIRE(body.find("fine matvecs") != std::string::npos);
  REQUIRE(body.find("#2ca02c") != std::string::npos);
  REQUIRE(body.find("stroke-dasharray") != std::string::npos);
  // The non-converged 1st-kind row is dropped, so its color is absent.
  REQUIRE(body.find("#1f77b4") == std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config files parse comments, types and lists", "[io]") {
  std::istringstream is(
      "# leading comment\n"
      "case.n = 64   # trailing comment\n"
      "case.tol = 1e-8\n"
      "case.estimate_c = true\n"
      "sweep.k = 1, 3..5, 9\n"
      "sweep.Lx = 1, 8, 64\n"
      "sweep.family = fourth , first\n"
      "\n");
  const Config c = Config::parse(is);
  REQUIRE(c.has("case.n"));
  REQUIRE_FALSE(c.has("case.maxit"));
  REQUIRE(c.get_size("case.n", 0) == 64);
  REQUIRE(c.get_size("case.maxit", 500) == 500);
  REQUIRE(c.get_double("case.tol", 1.0) == 1e-8);
  REQUIRE(c.get_bool("case.estimate_c", false));
  REQUIRE(c.get_size_list("sweep.k", {}) == std::vector<std::size_t>{1, 3, 4, 5, 9});
  REQUIRE(c.get_double_list("sweep.Lx", {}) == std::vector<double>{1.0, 8.0, 64.0});
  REQUIRE(c.get_string_list("sweep.family", {}) ==
          std::vector<std::string>{"fourth", "first"});
  REQUIRE(c.unconsumed().empty());
  REQUIRE_NOTHROW(c.reject_unknown());
}

TEST_CASE("config files reject malformed input", "[io]") {
  std::istringstream no_eq("case.n 64\n");
  REQUIRE_THROWS_AS(Config::parse(no_eq), ConfigError);

  std::istringstream dup("a = 1\na = 2\n");
  REQUIRE_THROWS_AS(Config::parse(dup), ConfigError);

  std::istringstream empty_key(" = 3\n");
  REQUIRE_THROWS_AS(Config::parse(empty_key), ConfigError);

  std::istringstream ok("a = x\nb = 5..2\nc = 1,,2\nd = oui\n");
  const Config c = Config::parse(ok);
  REQUIRE_THROWS_AS(c.get_double("a", 0.0), ConfigError);
  REQUIRE_THROWS_AS(c.get_size("a", 0), ConfigError);
  REQUIRE_THROWS_AS(c.get_size_list("b", {}), ConfigError);
  REQUIRE_THROWS_AS(c.get_size_list("c", {}), ConfigError);
  REQUIRE_THROWS_AS(c.get_bool("d", true), ConfigError);

  REQUIRE_THROWS_AS(Config::parse_file("/nonexistent/chebmg.cfg"), ConfigError);
}

TEST_CASE("unread config keys are reported", "[io]") {
  std::istringstream is("a = 1\nb = 2\n");
  const Config c = Config::parse(is);
  REQUIRE(c.get_size("a", 0) == 1);
  REQUIRE(c.unconsumed() == std::vector<std::string>{"b"});
  REQUIRE_THROWS_WITH(c.reject_unknown(), Catch::Matchers::ContainsSubstring("b"));
}

TEST_CASE("a sweep spec reads from config with unknown keys rejected", "[io]") {
  std::istringstream is(
      "sweep.Lx = 1, 8\n"
      "sweep.factor = 2\n"
      "sweep.k = 1..3\n"
      "sweep.family = fourth_opt\n"
      "sweep.cycle = one_sided\n"
      "case.n = 32\n"
      "case.driver = pgmres\n"
      "case.tol = 1e-7\n"
      "case.rhs_seed = 42\n");
  const SweepSpec spec = sweep_spec_from_config(Config::parse(is));
  REQUIRE(spec.Lx == std::vector<double>{1.0, 8.0});
  REQUIRE(spec.factors == std::vector<std::size_t>{2});
  REQUIRE(spec.ks == std::vector<std::size_t>{1, 2, 3});
  REQUIRE(spec.families == std::vector<Family>{Family::fourth_opt});
  REQUIRE(spec.cycles == std::vector<Cycle>{Cycle::one_sided});
  REQUIRE(spec.base.n == 32);
  REQUIRE(spec.base.driver == Driver::pgmres);
  REQUIRE(spec.base.tol == 1e-7);
  REQUIRE(spec.base.seeds.rhs == 42);
  REQUIRE(spec.base.maxit == 500);

  std::istringstream unknown("sweep.bogus = 1\n");
  REQUIRE_THROWS_AS(sweep_spec_from_config(Config::parse(unknown)), ConfigError);

  std::istringstream bad_family("sweep.family = fifth\n");
  REQUIRE_THROWS_AS(sweep_spec_from_config(Config::parse(bad_family)), ConfigError);
}

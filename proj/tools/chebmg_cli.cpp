// Command-line front end: single runs, grid sweeps, approximation
// constant estimates, bound tables and empirical lambda_min tuning.
// Exit codes: 0 success, 1 solver failure, 2 configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chebmg/chebmg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitConfigError = 2;

struct RunArgs {
  chebmg::CaseConfig cfg;
  std::string family = "fourth";
  std::string cycle = "one_sided";
  std::string driver = "pcg";
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  bool no_timing = false;
};

chebmg::CaseConfig case_config_from_file(const std::string& path) {
  const chebmg::Config file = chebmg::Config::parse_file(path);
  chebmg::CaseConfig c;
  c.Lx = file.get_double("case.Lx", c.Lx);
  c.n = file.get_size("case.n", c.n);
  c.factor = file.get_size("case.factor", c.factor);
  c.family = chebmg::family_from_string(
      file.get_string("case.family", chebmg::to_string(c.family)));
  c.k = file.get_size("case.k", c.k);
  c.cycle = chebmg::cycle_from_string(file.get_string("case.cycle", chebmg::to_string(c.cycle)));
  c.driver =
      chebmg::driver_from_string(file.get_string("case.driver", chebmg::to_string(c.driver)));
  c.tol = file.get_double("case.tol", c.tol);
  c.restart = file.get_size("case.restart", c.restart);
  c.maxit = file.get_size("case.maxit", c.maxit);
  c.seeds.rhs = file.get_size("case.rhs_seed", c.seeds.rhs);
  c.seeds.eigen = file.get_size("case.eigen_seed", c.seeds.eigen);
  c.seeds.tuning = file.get_size("case.tuning_seed", c.seeds.tuning);
  c.lambda_max_multiplier = file.get_double("case.lambda_max_multiplier", c.lambda_max_multiplier);
  c.lambda_min_multiplier = file.get_double("case.lambda_min_multiplier", c.lambda_min_multiplier);
  c.eigen_iterations = file.get_size("case.eigen_iterations", c.eigen_iterations);
  c.estimate_c = file.get_bool("case.estimate_c", c.estimate_c);
  file.reject_unknown();
  return c;
}

void print_case(const chebmg::CaseResult& r) {
  const chebmg::SolveReport& rep = r.report;
  std::cout << "case " << r.cfg.id() << "\n";
  std::cout << "  n=" << r.cfg.n << " k_pre=" << r.cfg.k_pre() << " k_post=" << r.cfg.k_post()
            << " tol=" << chebmg::format_shortest(r.cfg.tol) << "\n";
  std::cout << "  lambda_tilde=" << chebmg::format_shortest(r.lambda_tilde)
            << " lambda_max_mult=" << chebmg::format_shortest(r.cfg.lambda_max_multiplier);
  if (const auto lm = chebmg::effective_lambda_min_mult(r))
    std::cout << " lambda_min_mult=" << chebmg::format_shortest(*lm);
  if (r.tuned_lambda_min) std::cout << " (tuned)";
  std::cout << "\n";
  std::cout << "  converged=" << (rep.converged ? "true" : "false")
            << " iterations=" << rep.iterations << " fine_matvecs=" << rep.fine_matvecs
            << " rho=" << chebmg::format_shortest(rep.rho)
            << " time_ms=" << chebmg::format_shortest(rep.wall_time_sec * 1e3) << "\n";
  if (r.C_est) std::cout << "  C_est=" << chebmg::format_shortest(*r.C_est) << "\n";
  if (!rep.status.empty()) std::cout << "  status: " << rep.status << "\n";
  if (!r.note.empty()) std::cout << "  note: " << r.note << "\n";
}

int cmd_run(const RunArgs& args, const CLI::App& sub) {
  chebmg::CaseConfig cfg = args.cfg;
  if (!args.config_path.empty()) {
    cfg = case_config_from_file(args.config_path);
    // Explicit flags win over file values.
    const auto touched = [&sub](const std::string& name) { return sub.count(name) > 0; };
    if (touched("--Lx")) cfg.Lx = args.cfg.Lx;
    if (touched("--n")) cfg.n = args.cfg.n;
    if (touched("--factor")) cfg.factor = args.cfg.factor;
    if (touched("--k")) cfg.k = args.cfg.k;
    if (touched("--tol")) cfg.tol = args.cfg.tol;
    if (touched("--restart")) cfg.restart = args.cfg.restart;
    if (touched("--maxit")) cfg.maxit = args.cfg.maxit;
    if (touched("--seed")) cfg.seeds.rhs = args.cfg.seeds.rhs;
    if (touched("--eigen-seed")) cfg.seeds.eigen = args.cfg.seeds.eigen;
    if (touched("--tuning-seed")) cfg.seeds.tuning = args.cfg.seeds.tuning;
    if (touched("--lmax-mult")) cfg.lambda_max_multiplier = args.cfg.lambda_max_multiplier;
    if (touched("--lmin-mult")) cfg.lambda_min_multiplier = args.cfg.lambda_min_multiplier;
    if (touched("--eigen-iterations")) cfg.eigen_iterations = args.cfg.eigen_iterations;
    if (touched("--estimate-c")) cfg.estimate_c = args.cfg.estimate_c;
    if (sub.count("--family")) cfg.family = chebmg::family_from_string(args.family);
    if (sub.count("--cycle")) cfg.cycle = chebmg::cycle_from_string(args.cycle);
    if (sub.count("--driver")) cfg.driver = chebmg::driver_from_string(args.driver);
  } else {
    cfg.family = chebmg::family_from_string(args.family);
    cfg.cycle = chebmg::cycle_from_string(args.cycle);
    cfg.driver = chebmg::driver_from_string(args.driver);
  }
  cfg.validate();
  if (args.format != "csv")
    throw chebmg::ConfigError("run: unsupported format " + args.format);

  const chebmg::CaseResult res = chebmg::run_case(cfg);
  print_case(res);
  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    const std::string path = args.out_dir + "/case.csv";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    chebmg::CsvOptions copts;
    copts.include_timing = !args.no_timing;
    chebmg::write_csv(os, {res}, copts);
    std::cout << "wrote " << path << "\n";
  }
  return res.report.converged ? kExitOk : kExitSolverFailure;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& formats, bool no_timing,
              bool seed_given, std::uint64_t seed) {
  chebmg::SweepSpec spec;
  if (!config_path.empty())
    spec = chebmg::sweep_spec_from_config(chebmg::Config::parse_file(config_path));
  if (seed_given) spec.base.seeds.rhs = seed;

  bool want_csv = false, want_svg = false;
  for (const std::string& f : formats) {
    if (f == "csv")
      want_csv = true;
    else if (f == "svg")
      want_svg = true;
    else
      throw chebmg::ConfigError("sweep: unsupported format " + f);
  }

  const chebmg::SweepResult sr = chebmg::sweep(spec);
  std::filesystem::create_directories(out_dir);
  chebmg::CsvOptions copts;
  copts.include_timing = !no_timing;
  for (const std::string& path : chebmg::emit_sweep(sr, out_dir, want_csv, want_svg, copts))
    std::cout << "wrote " << path << "\n";

  std::size_t converged = 0;
  for (const chebmg::CaseResult& r : sr.rows)
    if (r.report.converged) ++converged;
  std::cout << sr.rows.size() << " rows, " << converged << " converged\n";
  std::cout << "best per (L_x, factor):\n";
  for (const auto& [key, idx] : sr.best_per_group) {
    const chebmg::CaseResult& r = sr.rows[idx];
    std::cout << "  L_x=" << chebmg::format_shortest(key.first) << " factor=" << key.second
              << ": " << chebmg::to_string(r.cfg.family) << " (" << r.cfg.k_pre() << ","
              << r.cfg.k_post() << ") " << chebmg::to_string(r.cfg.cycle) << " -> "
              << r.report.iterations << " iterations, " << r.report.fine_matvecs
              << " fine matvecs\n";
  }
  return converged > 0 ? kExitOk : kExitSolverFailure;
}

int cmd_estimate_c(double Lx, std::size_t n, std::size_t factor, std::size_t m,
                   std::uint64_t seed, bool no_reorth) {
  const chebmg::Domain dom(Lx, 1.0, n);
  const chebmg::Hierarchy h = chebmg::build_hierarchy(dom, factor);
  const chebmg::CEstimate est = chebmg::estimate_C(h, m, seed, !no_reorth);
  std::cout << "C_est=" << chebmg::format_shortest(est.C) << " m=" << est.m
            << " lambda_tilde=" << chebmg::format_shortest(h.lambda_tilde) << " n=" << n
            << " factor=" << factor << " L_x=" << chebmg::format_shortest(Lx) << "\n";
  return kExitOk;
}

int cmd_bounds(const std::vector<std::string>& family_names, const std::vector<std::size_t>& ks,
               const std::vector<double>& Cs, double lmin, const std::string& out_dir) {
  std::vector<chebmg::Family> families;
  for (const std::string& s : family_names) families.push_back(chebmg::family_from_string(s));

  std::ostringstream gamma, vtab, crit;
  gamma << "family,k,gamma_inverse\n";
  for (chebmg::Family f : families)
    for (std::size_t k : ks)
      gamma << chebmg::to_string(f) << ',' << k << ','
            << chebmg::format_shortest(chebmg::gamma_inverse(f, k, lmin)) << '\n';

  vtab << "family,k,C,V,bound_ratio\n";
  for (chebmg::Family f : families)
    for (std::size_t k : ks)
      for (double C : Cs)
        vtab << chebmg::to_string(f) << ',' << k << ',' << chebmg::format_shortest(C) << ','
             << chebmg::format_shortest(chebmg::v_bound(C, f, k, lmin)) << ','
             << chebmg::format_shortest(chebmg::bound_ratio(C, f, k, lmin)) << '\n';

  crit << "family,k,C_star\n";
  for (chebmg::Family f : families)
    for (std::size_t k : ks) {
      crit << chebmg::to_string(f) << ',' << k << ',';
      try {
        crit << chebmg::format_shortest(chebmg::critical_C(f, k, lmin));
      } catch (const std::exception&) {
        crit << "";
      }
      crit << '\n';
    }

  std::ostringstream beta;
  chebmg::write_beta_table_csv(beta);

  if (out_dir.empty()) {
    std::cout << gamma.str() << "\n" << vtab.str() << "\n" << crit.str();
    return kExitOk;
  }
  std::filesystem::create_directories(out_dir);
  const auto dump = [&out_dir](const std::string& name, const std::string& body) {
    const std::string path = out_dir + "/" + name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << body;
    std::cout << "wrote " << path << "\n";
  };
  dump("bounds_gamma.csv", gamma.str());
  dump("bounds_v.csv", vtab.str());
  dump("bounds_critical.csv", crit.str());
  dump("beta_table.csv", beta.str());
  return kExitOk;
}

int cmd_tune(chebmg::CaseConfig cfg, const std::string& cycle, const std::string& driver) {
  cfg.family = chebmg::Family::first_opt_lambda;
  cfg.cycle = chebmg::cycle_from_string(cycle);
  cfg.driver = chebmg::driver_from_string(driver);
  cfg.validate();
  const chebmg::Domain dom(cfg.Lx, 1.0, cfg.n);
  const chebmg::Hierarchy h =
      chebmg::build_hierarchy(dom, cfg.factor, cfg.eigen_iterations, cfg.seeds.eigen);
  const auto rows = chebmg::tune_lambda_min_table(cfg, h, chebmg::default_tuning_candidates());
  std::cout << "lambda_min_mult,iterations,fine_matvecs,converged\n";
  for (const chebmg::TuneRow& r : rows)
    std::cout << chebmg::format_shortest(r.candidate) << ',' << r.report.iterations << ','
              << r.report.fine_matvecs << ',' << (r.report.converged ? "true" : "false") << "\n";
  const std::size_t best = chebmg::select_tuned(rows);
  if (best == rows.size()) {
    std::cerr << "tune: no candidate converged for case " << cfg.id() << "\n";
    return kExitSolverFailure;
  }
  std::cout << "tuned lambda_min multiplier = " << chebmg::format_shortest(rows[best].candidate)
            << " (" << rows[best].report.iterations << " iterations, "
            << rows[best].report.fine_matvecs << " fine matvecs)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev-smoothed two-level multigrid experiment harness"};
  app.require_subcommand(1);

  RunArgs ra;
  CLI::App* run = app.add_subcommand("run", "Solve a single configured case");
  run->add_option("--Lx", ra.cfg.Lx, "Domain length in x (y is 1)");
  run->add_option("--n", ra.cfg.n, "Grid cells per dimension");
  run->add_option("--factor", ra.cfg.factor, "Coarsening factor");
  run->add_option("--family", ra.family, "first | first_opt_lambda | fourth | fourth_opt");
  run->add_option("--k", ra.cfg.k, "Half-cycle smoothing order");
  run->add_option("--cycle", ra.cycle, "full (k,k) | one_sided (2k,0)");
  run->add_option("--driver", ra.driver, "pcg | pgmres | mg_solver");
  run->add_option("--tol", ra.cfg.tol, "Relative residual tolerance");
  run->add_option("--restart", ra.cfg.restart, "GMRES restart length");
  run->add_option("--maxit", ra.cfg.maxit, "Iteration cap");
  run->add_option("--seed", ra.cfg.seeds.rhs, "Right-hand-side seed");
  run->add_option("--eigen-seed", ra.cfg.seeds.eigen, "Power iteration seed");
  run->add_option("--tuning-seed", ra.cfg.seeds.tuning, "Tuning right-hand-side seed");
  run->add_option("--lmax-mult", ra.cfg.lambda_max_multiplier, "Safety factor on lambda_tilde");
  run->add_option("--lmin-mult", ra.cfg.lambda_min_multiplier,
                  "lambda_min as a fraction of lambda_max (1st kind)");
  run->add_option("--eigen-iterations", ra.cfg.eigen_iterations, "Power iteration steps");
  run->add_flag("--estimate-c", ra.cfg.estimate_c, "Also estimate the approximation constant");
  run->add_option("--config", ra.config_path, "Case config file (case.* keys)");
  run->add_option("--out-dir", ra.out_dir, "Write case.csv here");
  run->add_option("--format", ra.format, "Output format (csv)");
  run->add_flag("--no-timing", ra.no_timing, "Leave the time_ms column empty");

  std::string sw_config, sw_out = ".";
  std::vector<std::string> sw_formats{"csv", "svg"};
  bool sw_no_timing = false;
  std::uint64_t sw_seed = 0;
  CLI::App* sw = app.add_subcommand("sweep", "Run a parameter grid from a config file");
  sw->add_option("--config", sw_config, "Sweep config file (sweep.* and case.* keys)");
  sw->add_option("--out-dir", sw_out, "Output directory");
  sw->add_option("--format", sw_formats, "csv and/or svg")->delimiter(',');
  CLI::Option* sw_seed_opt = sw->add_option("--seed", sw_seed, "Override case.rhs_seed");
  sw->add_flag("--no-timing", sw_no_timing, "Leave the time_ms column empty");

  double ec_Lx = 1.0;
  std::size_t ec_n = 128, ec_factor = 2, ec_m = 20;
  std::uint64_t ec_seed = 99;
  bool ec_no_reorth = false;
  CLI::App* ec = app.add_subcommand("estimate-c", "Estimate the approximation constant C");
  ec->add_option("--Lx", ec_Lx, "Domain length in x");
  ec->add_option("--n", ec_n, "Grid cells per dimension");
  ec->add_option("--factor", ec_factor, "Coarsening factor");
  ec->add_option("--m", ec_m, "Lanczos steps");
  ec->add_option("--seed", ec_seed, "Lanczos start vector seed");
  ec->add_flag("--no-reorth", ec_no_reorth, "Disable full reorthogonalization");

  std::vector<std::string> bd_families{"first", "fourth", "fourth_opt"};
  std::vector<std::size_t> bd_ks{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> bd_Cs{1.5, 4.0, 127.0, 3665.0};
  double bd_lmin = 0.1;
  std::string bd_out;
  CLI::App* bd = app.add_subcommand("bounds", "Print gamma^{-1}, V(C,k) and C* tables");
  bd->add_option("--families", bd_families, "Smoother families")->delimiter(',');
  bd->add_option("--k", bd_ks, "Smoothing orders")->delimiter(',');
  bd->add_option("--C", bd_Cs, "Approximation constants")->delimiter(',');
  bd->add_option("--lmin-mult", bd_lmin, "lambda_min fraction for the 1st kind");
  bd->add_option("--out-dir", bd_out, "Write CSV tables here instead of stdout");

  chebmg::CaseConfig tu;
  std::string tu_cycle = "full", tu_driver = "pcg";
  CLI::App* tn = app.add_subcommand("tune", "Empirically tune the 1st-kind lambda_min");
  tn->add_option("--Lx", tu.Lx, "Domain length in x");
  tn->add_option("--n", tu.n, "Grid cells per dimension");
  tn->add_option("--factor", tu.factor, "Coarsening factor");
  tn->add_option("--k", tu.k, "Half-cycle smoothing order");
  tn->add_option("--cycle", tu_cycle, "full | one_sided");
  tn->add_option("--driver", tu_driver, "pcg | pgmres | mg_solver");
  tn->add_option("--tol", tu.tol, "Relative residual tolerance");
  tn->add_option("--maxit", tu.maxit, "Iteration cap");
  tn->add_option("--seed", tu.seeds.tuning, "Tuning right-hand-side seed");
  tn->add_option("--eigen-seed", tu.seeds.eigen, "Power iteration seed");
  tn->add_option("--lmax-mult", tu.lambda_max_multiplier, "Safety factor on lambda_tilde");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(ra, *run);
    if (sw->parsed())
      return cmd_sweep(sw_config, sw_out, sw_formats, sw_no_timing, sw_seed_opt->count() > 0,
                       sw_seed);
    if (ec->parsed()) return cmd_estimate_c(ec_Lx, ec_n, ec_factor, ec_m, ec_seed, ec_no_reorth);
    if (bd->parsed()) return cmd_bounds(bd_families, bd_ks, bd_Cs, bd_lmin, bd_out);
    if (tn->parsed()) return cmd_tune(tu, tu_cycle, tu_driver);
  } catch (const chebmg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  return kExitConfigError;
}

#ifndef CHEBMG_HARNESS_HPP
#define CHEBMG_HARNESS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"
#include "krylov.hpp"
#include "lanczos.hpp"
#include "multigrid.hpp"
#include "problem.hpp"
#include "smoothers.hpp"

namespace chebmg {

enum class Cycle { full, one_sided };
enum class Driver { pcg, pgmres, mg_solver };

inline Cycle cycle_from_string(const std::string& s) {
  if (s == "full") return Cycle::full;
  if (s == "one_sided") return Cycle::one_sided;
  throw std::invalid_argument("unknown cycle: " + s);
}

inline std::string to_string(Cycle c) { return c == Cycle::full ? "full" : "one_sided"; }

inline Driver driver_from_string(const std::string& s) {
  if (s == "pcg") return Driver::pcg;
  if (s == "pgmres") return Driver::pgmres;
  if (s == "mg_solver") return Driver::mg_solver;
  throw std::invalid_argument("unknown driver: " + s);
}

inline std::string to_string(Driver d) {
  switch (d) {
    case Driver::pcg: return "pcg";
    case Driver::pgmres: return "pgmres";
    case Driver::mg_solver: return "mg_solver";
  }
  return "?";
}

struct Seeds {
  std::uint64_t rhs = 1234;
  std::uint64_t eigen = 7;
  std::uint64_t tuning = 4321;
};

/// One experiment: problem geometry, smoother choice, cycle shape and
/// Krylov driver. The cycle's smoothing orders derive from k: a full
/// cycle runs (k, k), a one-sided cycle (2k, 0), so both cost 2k fine
/// matvecs per preconditioner application.
struct CaseConfig {
  double Lx = 1.0;
  std::size_t n = 128;
  std::size_t factor = 2;
  Family family = Family::fourth;
  std::size_t k = 1;
  Cycle cycle = Cycle::one_sided;
  Driver driver = Driver::pcg;
  double tol = 1e-6;
  std::size_t restart = 30;
  std::size_t maxit = 500;
  Seeds seeds;
  double lambda_max_multiplier = 1.03;
  double lambda_min_multiplier = 0.1;
  std::size_t eigen_iterations = 30;
  bool estimate_c = false;

  std::size_t k_pre() const { return cycle == Cycle::full ? k : 2 * k; }
  std::size_t k_post() const { return cycle == Cycle::full ? k : 0; }

  std::string id() const {
    std::ostringstream os;
    os << "Lx" << Lx << "_f" << factor << "_" << chebmg::to_string(family) << "_k" << k << "_"
       << chebmg::to_string(cycle) << "_" << chebmg::to_string(driver);
    return os.str();
  }

  void validate() const {
    if (k < 1) throw std::invalid_argument("CaseConfig: k must be >= 1");
    if (factor < 2 || n % factor != 0)
      throw std::invalid_argument("CaseConfig: factor must divide n");
    if (!(tol > 0.0)) throw std::invalid_argument("CaseConfig: tol must be positive");
  }
};

struct CaseResult {
  CaseConfig cfg;
  SolveReport report;
  double lambda_tilde = 0.0;
  std::optional<double> C_est;
  std::optional<double> tuned_lambda_min;
  std::string note;
};

namespace detail {

inline ChebyshevConfig smoother_config(const CaseConfig& cfg, const Hierarchy& h,
                                       double lambda_min_mult) {
  ChebyshevConfig s;
  s.family = cfg.family;
  s.lambda_tilde = h.lambda_tilde;
  s.lambda_max_multiplier = cfg.lambda_max_multiplier;
  s.lambda_min_multiplier = lambda_min_mult;
  return s;
}

template <typename Op>
SolveReport stationary_solve(const Op& A, const Preconditioner& M, const Vec& b,
                             double tol, std::size_t maxit) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t mv0 = A.applications();
  SolveReport rep;
  const std::size_t n = b.size();
  Vec x(n, 0.0), r = b, t(n);
  const double r0 = norm2(r);
  rep.residual_history.push_back(r0);
  if (r0 == 0.0) {
    rep.converged = true;
    rep.status = "zero initial residual";
    return rep;
  }
  for (std::size_t it = 1; it <= maxit; ++it) {
    Vec z = M(r);
    axpy(1.0, z, x);
    A.apply(x, t);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - t[i];
    rep.iterations = it;
    rep.residual_history.push_back(norm2(r));
    if (rep.residual_history.back() / r0 <= tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) rep.status = "maxit reached";
  if (rep.iterations > 0) rep.rho = convergence_rate(rep);
  rep.fine_matvecs = A.applications() - mv0;
  rep.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

inline SolveReport dispatch_driver(const CaseConfig& cfg, const Hierarchy& h,
                                   const CycleConfig& cycle_cfg, const Vec& b) {
  Preconditioner M = [&h, &cycle_cfg](const Vec& v) {
    return preconditioner_apply(h, cycle_cfg, v);
  };
  SolveOptions opts;
  opts.tol = cfg.tol;
  opts.maxit = cfg.maxit;
  opts.restart = cfg.restart;
  const Vec x0(b.size(), 0.0);
  switch (cfg.driver) {
    case Driver::pcg: return pcg(h.A, M, b, x0, opts).second;
    case Driver::pgmres: return pgmres(h.A, M, b, x0, opts).second;
    case Driver::mg_solver: return stationary_solve(h.A, M, b, cfg.tol, cfg.maxit);
  }
  throw std::logic_error("dispatch_driver: unhandled driver");
}

}  // namespace detail

inline std::vector<double> default_tuning_candidates() {
  std::vector<double> c(16);
  const double lo = std::log(0.0125), hi = std::log(0.4);
  for (std::size_t i = 0; i < 16; ++i)
    c[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / 15.0);
  return c;
}

struct TuneRow {
  double candidate = 0.0;
  SolveReport report;
};

/// Solves against a dedicated seeded random right-hand side at each
/// lambda_min candidate. These runs are setup cost and do not touch
/// the reported counters of the main solve.
inline std::vector<TuneRow> tune_lambda_min_table(const CaseConfig& cfg, const Hierarchy& h,
                                                  const std::vector<double>& candidates) {
  if (candidates.empty())
    throw std::invalid_argument("tune_lambda_min_table: no candidates");
  const Vec b_tune = random_vector(h.fine_dim(), cfg.seeds.tuning);
  std::vector<TuneRow> rows;
  rows.reserve(candidates.size());
  for (double cand : candidates) {
    ChebyshevConfig s = detail::smoother_config(cfg, h, cand);
    CycleConfig cc{s, cfg.k_pre(), cfg.k_post()};
    rows.push_back(TuneRow{cand, detail::dispatch_driver(cfg, h, cc, b_tune)});
  }
  return rows;
}

/// Winner: fewest iterations, ties by matvecs, remaining ties keep
/// the first (smallest) candidate.
inline std::size_t select_tuned(const std::vector<TuneRow>& rows) {
  std::size_t best = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SolveReport& r = rows[i].report;
    if (!r.converged) continue;
    if (best == rows.size() || r.iterations < rows[best].report.iterations ||
        (r.iterations == rows[best].report.iterations &&
         r.fine_matvecs < rows[best].report.fine_matvecs))
      best = i;
  }
  return best;
}

inline double tune_lambda_min_empirical(const CaseConfig& cfg, const Hierarchy& h,
                                        const std::vector<double>& candidates) {
  const auto rows = tune_lambda_min_table(cfg, h, candidates);
  const std::size_t best = select_tuned(rows);
  if (best == rows.size())
    throw std::runtime_error("tune_lambda_min_empirical: all candidates failed for case " + cfg.id());
  return rows[best].candidate;
}

/// Builds the seeded problem, estimates the top eigenvalue, tunes
/// lambda_min when requested, runs the driver and returns the report
/// with the raw matvec counter delta of the solve.
inline CaseResult run_case_with(const CaseConfig& cfg, const Hierarchy& h) {
  cfg.validate();
  CaseResult res;
  res.cfg = cfg;
  res.lambda_tilde = h.lambda_tilde;
  if (cfg.cycle == Cycle::one_sided && cfg.driver == Driver::pcg)
    res.note = "pcg with an asymmetric one-sided preconditioner";

  double lmin_mult = cfg.lambda_min_multiplier;
  if (cfg.family == Family::first_opt_lambda) {
    lmin_mult = tune_lambda_min_empirical(cfg, h, default_tuning_candidates());
    res.tuned_lambda_min = lmin_mult;
  }

  const Problem prob = build_problem(h.domain, cfg.seeds.rhs);
  ChebyshevConfig s = detail::smoother_config(cfg, h, lmin_mult);
  CycleConfig cc{s, cfg.k_pre(), cfg.k_post()};
  res.report = detail::dispatch_driver(cfg, h, cc, prob.b);

  if (cfg.estimate_c) res.C_est = estimate_C(h, 20, cfg.seeds.eigen).C;
  return res;
}

inline CaseResult run_case(const CaseConfig& cfg) {
  cfg.validate();
  const Domain dom(cfg.Lx, 1.0, cfg.n);
  const Hierarchy h = build_hierarchy(dom, cfg.factor, cfg.eigen_iterations, cfg.seeds.eigen);
  return run_case_with(cfg, h);
}

/// Cross-product experiment grid. Hierarchies are shared per
/// (L_x, factor) pair across the family/k/cycle axes.
struct SweepSpec {
  std::vector<double> Lx{1.0, 8.0, 64.0, 128.0};
  std::vector<std::size_t> factors{2, 16};
  std::vector<Family> families{Family::first, Family::fourth, Family::fourth_opt};
  std::vector<std::size_t> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Cycle> cycles{Cycle::full, Cycle::one_sided};
  CaseConfig base;
};

struct SweepResult {
  std::vector<CaseResult> rows;
  /// (L_x, factor) -> index of the best converged row: fewest fine
  /// matvecs, ties by iterations, then by smaller k, then row order.
  std::map<std::pair<double, std::size_t>, std::size_t> best_per_group;
};

inline void select_best_rows(SweepResult& sr) {
  sr.best_per_group.clear();
  for (std::size_t i = 0; i < sr.rows.size(); ++i) {
    const CaseResult& r = sr.rows[i];
    if (!r.report.converged) continue;
    const auto key = std::make_pair(r.cfg.Lx, r.cfg.factor);
    const auto it = sr.best_per_group.find(key);
    if (it == sr.best_per_group.end()) {
      sr.best_per_group[key] = i;
      continue;
    }
    const CaseResult& cur = sr.rows[it->second];
    const auto rank = [](const CaseResult& c) {
      return std::make_tuple(c.report.fine_matvecs, c.report.iterations, c.cfg.k);
    };
    if (rank(r) < rank(cur)) it->second = i;
  }
}

inline SweepResult sweep(const SweepSpec& spec) {
  SweepResult out;
  for (double Lx : spec.Lx) {
    for (std::size_t factor : spec.factors) {
      CaseConfig probe = spec.base;
      probe.Lx = Lx;
      probe.factor = factor;
      probe.validate();
      const Domain dom(Lx, 1.0, probe.n);
      const Hierarchy h =
          build_hierarchy(dom, factor, probe.eigen_iterations, probe.seeds.eigen);
      std::optional<double> C_shared;
      if (probe.estimate_c) C_shared = estimate_C(h, 20, probe.seeds.eigen).C;
      for (Family family : spec.families) {
        for (std::size_t k : spec.ks) {
          for (Cycle cycle : spec.cycles) {
            CaseConfig cfg = probe;
            cfg.family = family;
            cfg.k = k;
            cfg.cycle = cycle;
            cfg.estimate_c = false;
            try {
              CaseResult r = run_case_with(cfg, h);
              r.C_est = C_shared;
              out.rows.push_back(std::move(r));
            } catch (const std::exception& e) {
              CaseResult r;
              r.cfg = cfg;
              r.lambda_tilde = h.lambda_tilde;
              r.report.status = std::string("error: ") + e.what();
              r.report.residual_history.push_back(0.0);
              out.rows.push_back(std::move(r));
            }
          }
        }
      }
    }
  }
  select_best_rows(out);
  return out;
}

}  // namespace chebmg

#endif

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"

using namespace chebmg;
using testutil::Mat;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

bool its_in_band(std::size_t its, std::size_t ref, std::size_t tol) {
  return its + tol >= ref && its <= ref + tol;
}

bool mv_in_band(std::size_t mv, double ref, double frac) {
  return std::abs(static_cast<double>(mv) - ref) <= frac * ref;
}

Mat dense_pi_f(const Hierarchy& h) {
  const Mat Ad = testutil::dense_operator(h.A);
  const Mat Pd = testutil::dense_prolongation(h.P);
  const Mat Ac = Pd.transpose() * Ad * Pd;
  return Mat::Identity(Ad.rows(), Ad.cols()) - Pd * Ac.llt().solve(Pd.transpose() * Ad);
}

Mat live_smoother(const Hierarchy& h, const ChebyshevConfig& s, std::size_t order) {
  const std::size_t n = h.fine_dim();
  return testutil::dense_from_apply(n, n, [&](const Vec& e) {
    Vec x = e;
    const Vec b(n, 0.0);
    chebyshev_smooth(h.A, h.inv_diag, s, order, b, x, false);
    return x;
  });
}

Mat live_cycle(const Hierarchy& h, const CycleConfig& cc) {
  const std::size_t n = h.fine_dim();
  return testutil::dense_from_apply(n, n, [&](const Vec& e) {
    Vec x = e;
    const Vec b(n, 0.0);
    v_cycle(h, cc, b, x, false);
    return x;
  });
}

struct TableRow {
  double Lx;
  std::size_t factor;
  Family family;
  Cycle cycle;
  std::size_t k;
  std::size_t ref_its;
  double ref_mv;
  std::size_t its_tol;
  double mv_tol;
};

void check_table_rows(Outcome& out, const std::vector<TableRow>& rows) {
  for (const TableRow& t : rows) {
    CaseConfig cfg;
    cfg.Lx = t.Lx;
    cfg.n = 128;
    cfg.factor = t.factor;
    cfg.family = t.family;
    cfg.k = t.k;
    cfg.cycle = t.cycle;
    cfg.driver = Driver::pcg;
    cfg.tol = 1e-6;
    const CaseResult r = run_case(cfg);
    const bool ok = r.report.converged &&
                    its_in_band(r.report.iterations, t.ref_its, t.its_tol) &&
                    mv_in_band(r.report.fine_matvecs, t.ref_mv, t.mv_tol);
    out.detail << " " << cfg.id() << " its=" << r.report.iterations << "/" << t.ref_its
               << " mv=" << r.report.fine_matvecs << "/" << t.ref_mv;
    if (!ok) {
      out.pass = false;
      out.detail << " OUT-OF-BAND";
    }
  }
}

Outcome criterion_1() {
  Outcome out;
  check_table_rows(out, {{1.0, 2, Family::first_opt_lambda, Cycle::full, 2, 4, 23.0, 2, 0.15},
                         {8.0, 2, Family::fourth, Cycle::one_sided, 7, 5, 79.0, 2, 0.15},
                         {64.0, 2, Family::fourth, Cycle::one_sided, 9, 15, 299.0, 2, 0.15},
                         {128.0, 2, Family::fourth_opt, Cycle::one_sided, 9, 16, 319.0, 2, 0.15}});
  return out;
}

Outcome criterion_2() {
  Outcome out;
  check_table_rows(out, {{1.0, 16, Family::fourth, Cycle::one_sided, 8, 6, 107.0, 2, 0.15},
                         {128.0, 16, Family::fourth_opt, Cycle::one_sided, 9, 18, 359.0, 3, 0.20}});
  return out;
}

Outcome criterion_3() {
  Outcome out;
  const std::vector<std::pair<double, double>> refs{{1.0, 4.0}, {8.0, 127.0}, {64.0, 3665.0}};
  for (const auto& [Lx, ref] : refs) {
    const Hierarchy h = build_hierarchy(Domain(Lx, 1.0, 128), 2);
    const double c = estimate_C(h, 20, 7).C;
    out.detail << " Lx" << Lx << " C=" << c << "/" << ref;
    if (!(std::abs(c - ref) <= 0.15 * ref)) {
      out.pass = false;
      out.detail << " OUT-OF-BAND";
    }
  }
  for (std::size_t n : {16u, 32u}) {
    const Hierarchy h = build_hierarchy(Domain(8.0, 1.0, n), 2);
    const Mat Ad = testutil::dense_operator(h.A);
    const Mat SA = Ad.diagonal().cwiseInverse().asDiagonal() * Ad;
    const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (SA + SA.transpose()));
    const double kappa = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    const double c = estimate_C(h, 20, 7).C;
    out.detail << " n" << n << " 1<=" << c << "<=" << kappa;
    if (!(1.0 <= c && c <= kappa)) {
      out.pass = false;
      out.detail << " VIOLATED";
    }
  }
  return out;
}

Outcome criterion_4() {
  Outcome out;
  double worst = 0.0;
  for (std::size_t n : {8u, 16u}) {
    for (double Lx : {1.0, 4.0}) {
      const Hierarchy h = build_hierarchy(Domain(Lx, 1.0, n), 2);
      const Mat Ad = testutil::dense_operator(h.A);
      const Mat pif = dense_pi_f(h);
      ChebyshevConfig s;
      s.family = Family::first;
      s.lambda_tilde = h.lambda_tilde;
      s.lambda_max_multiplier = 1.0;
      s.lambda_min_multiplier = 0.1;
      for (std::size_t k : {1u, 2u, 3u}) {
        const Mat Sk = live_smoother(h, s, k);
        const Mat S2k = live_smoother(h, s, 2 * k);
        const Mat EV = live_cycle(h, CycleConfig{s, k, k});
        const Mat EVp = live_cycle(h, CycleConfig{s, 2 * k, 0});
        const double half = testutil::a_norm(pif * Sk, Ad);
        const double full = testutil::a_norm(EV, Ad);
        const double one = testutil::a_norm(EVp, Ad);
        const double os_half = testutil::a_norm(pif * S2k, Ad);
        worst = std::max(worst, std::abs(full - half * half));
        worst = std::max(worst, std::abs(one - os_half));
        if (std::abs(full - half * half) > 1e-10 || std::abs(one - os_half) > 1e-10)
          out.pass = false;
      }
    }
  }
  out.detail << " worst identity defect " << worst;
  return out;
}

Outcome criterion_5() {
  Outcome out;
  double worst_rel = 0.0;
  for (std::size_t k = 1; k <= 8; ++k) {
    const double closed = 4.0 * static_cast<double>(k) * static_cast<double>(k + 1) / 3.0;
    const double numeric = numeric_gamma_inverse(ResidualPolynomial(Family::fourth, k));
    const double rel = std::abs(numeric - closed) / closed;
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-6) out.pass = false;
  }
  out.detail << " fourth worst rel " << worst_rel;
  double worst_asym = 0.0;
  for (std::size_t k = 3; k <= 8; ++k) {
    const double numeric = gamma_inverse(Family::fourth_opt, k);
    const double asym = fourth_opt_gamma_inverse_asymptote(k);
    const double rel = std::abs(numeric - asym) / asym;
    worst_asym = std::max(worst_asym, rel);
    if (rel > 0.05) out.pass = false;
  }
  out.detail << " fourth_opt asymptote worst rel " << worst_asym;
  return out;
}

Outcome criterion_6() {
  Outcome out;
  double worst = 0.0;
  for (Family family : {Family::first, Family::fourth, Family::fourth_opt}) {
    for (std::size_t k = 1; k <= 8; ++k) {
      const double lmin = family == Family::first ? lambda_min_opt_bound(k) : 0.1;
      double cs = 0.0;
      try {
        cs = critical_C(family, k, lmin);
      } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " " << to_string(family) << " k" << k << " no root (" << e.what() << ")";
        continue;
      }
      const double defect =
          std::abs(v_bound(cs, family, k, lmin) - std::sqrt(v_bound(cs, family, 2 * k, lmin)));
      worst = std::max(worst, defect);
      const bool favors_os =
          v_bound(2.0 * cs, family, k, lmin) > std::sqrt(v_bound(2.0 * cs, family, 2 * k, lmin));
      const double clo = std::max(1.0, cs / 2.0);
      const bool favors_full =
          v_bound(clo, family, k, lmin) < std::sqrt(v_bound(clo, family, 2 * k, lmin));
      if (defect > 1e-12 || !favors_os || !favors_full) {
        out.pass = false;
        out.detail << " " << to_string(family) << " k" << k << " BAD";
      }
    }
  }
  out.detail << " worst root defect " << worst;
  return out;
}

Outcome criterion_7() {
  Outcome out;
  const Hierarchy h = build_hierarchy(Domain(64.0, 1.0, 32), 2);
  ChebyshevConfig s;
  s.family = Family::fourth;
  s.lambda_tilde = h.lambda_tilde;
  const Vec v = random_vector(h.fine_dim(), 5);
  for (std::size_t k = 1; k <= 10; ++k) {
    for (const CycleConfig& cc : {full_cycle(s, k), one_sided_cycle(s, k)}) {
      const std::size_t before = h.A.applications();
      preconditioner_apply(h, cc, v);
      const std::size_t used = h.A.applications() - before;
      if (used != 2 * k) {
        out.pass = false;
        out.detail << " (" << cc.k_pre << "," << cc.k_post << ") used " << used;
      }
    }
  }
  out.detail << " cost 2k for k=1..10, both shapes";
  return out;
}

Outcome criterion_8() {
  Outcome out;
  SweepSpec spec;
  spec.factors = {16};
  spec.base.n = 128;
  spec.base.tol = 1e-6;
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sr = sweep(spec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (double Lx : spec.Lx) {
    std::size_t best_os = 0, best_first = 0;
    bool have_os = false, have_first = false;
    for (const CaseResult& r : sr.rows) {
      if (r.cfg.Lx != Lx || !r.report.converged) continue;
      if (r.cfg.cycle == Cycle::one_sided &&
          (r.cfg.family == Family::fourth || r.cfg.family == Family::fourth_opt)) {
        if (!have_os || r.report.fine_matvecs < best_os) best_os = r.report.fine_matvecs;
        have_os = true;
      }
      if (r.cfg.cycle == Cycle::full && r.cfg.family == Family::first) {
        if (!have_first || r.report.fine_matvecs < best_first) best_first = r.report.fine_matvecs;
        have_first = true;
      }
    }
    out.detail << " Lx" << Lx << " os=" << (have_os ? best_os : 0)
               << " full1st=" << (have_first ? best_first : 0);
    if (!have_os || !have_first || best_os >= best_first) {
      out.pass = false;
      out.detail << " NOT-DOMINANT";
    }
  }
  out.detail << " sweep " << secs << "s";
  if (secs > 600.0) out.pass = false;
  return out;
}

Outcome criterion_9() {
  Outcome out;
  double worst = 0.0;
  for (double Lx : {1.0, 8.0}) {
    const Hierarchy h = build_hierarchy(Domain(Lx, 1.0, 8), 2);
    const Mat Ad = testutil::dense_operator(h.A);
    for (Family family :
         {Family::first, Family::first_opt_lambda, Family::fourth, Family::fourth_opt}) {
      ChebyshevConfig s;
      s.family = family;
      s.lambda_tilde = h.lambda_tilde;
      s.lambda_max_multiplier = 1.0;
      s.lambda_min_multiplier = 0.1;
      for (std::size_t k = 1; k <= 6; ++k) {
        const Mat live = live_smoother(h, s, k);
        const Mat ref = testutil::polynomial_propagator(Ad, s, k);
        const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
        const double diff = (live - ref).cwiseAbs().maxCoeff();
        worst = std::max(worst, diff / scale);
        if (diff > 1e-11 * scale) out.pass = false;
      }
    }
  }
  out.detail << " worst propagator defect " << worst;
  if (!(beta_coefficients(1)[0] == 1.125)) out.pass = false;
  if (!(std::abs(beta_coefficients(2)[1] - 1.26408905371085) <= 1e-14)) out.pass = false;
  out.detail << " beta(1,1)=" << beta_coefficients(1)[0] << " beta(2,2)=" << beta_coefficients(2)[1];
  return out;
}

Outcome criterion_10() {
  Outcome out;
  {
    const Hierarchy h = build_hierarchy(Domain(8.0, 1.0, 64), 2);
    ChebyshevConfig s;
    s.family = Family::fourth;
    s.lambda_tilde = h.lambda_tilde;
    const CycleConfig cc = full_cycle(s, 2);
    const Preconditioner M = [&](const Vec& v) { return preconditioner_apply(h, cc, v); };
    const Problem prob = build_problem(h.domain, 1234);
    SolveOptions opts;
    opts.tol = 1e-10;
    const Vec x0(h.fine_dim(), 0.0);
    const auto [xc, rc] = pcg(h.A, M, prob.b, x0, opts);
    const auto [xg, rg] = pgmres(h.A, M, prob.b, x0, opts);
    double dn = 0.0, xn = 0.0;
    for (std::size_t i = 0; i < xc.size(); ++i) {
      dn += (xc[i] - xg[i]) * (xc[i] - xg[i]);
      xn += xc[i] * xc[i];
    }
    const double rel = std::sqrt(dn / xn);
    out.detail << " pcg/pgmres gap " << rel;
    if (!rc.converged || !rg.converged || rel > 1e-8) out.pass = false;

    const auto [xc2, rc2] = pcg(h.A, M, prob.b, x0, opts);
    if (rc2.residual_history != rc.residual_history || xc2 != xc) {
      out.pass = false;
      out.detail << " pcg NOT REPRODUCIBLE";
    }
  }
  {
    const Hierarchy h = build_hierarchy(Domain(64.0, 1.0, 32), 2);
    ChebyshevConfig s;
    s.family = Family::first;
    s.lambda_tilde = h.lambda_tilde;
    const CycleConfig cc = full_cycle(s, 1);
    const Preconditioner M = [&](const Vec& v) { return preconditioner_apply(h, cc, v); };
    const Problem prob = build_problem(h.domain, 1234);
    SolveOptions opts;
    opts.tol = 1e-8;
    opts.restart = 5;
    opts.maxit = 200;
    const Vec x0(h.fine_dim(), 0.0);
    const auto [xg, rg] = pgmres(h.A, M, prob.b, x0, opts);
    bool monotone = true;
    for (std::size_t i = 1; i < rg.residual_history.size(); ++i) {
      if ((i - 1) % opts.restart == 0) continue;
      if (rg.residual_history[i] > rg.residual_history[i - 1] * (1.0 + 1e-10) + 1e-300)
        monotone = false;
    }
    out.detail << " gmres windows monotone=" << (monotone ? "yes" : "no");
    if (!rg.converged || !monotone) out.pass = false;

    const auto [xg2, rg2] = pgmres(h.A, M, prob.b, x0, opts);
    if (rg2.residual_history != rg.residual_history) {
      out.pass = false;
      out.detail << " pgmres NOT REPRODUCIBLE";
    }
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
      {"1. factor-2 benchmark rows within bands", &criterion_1},
      {"2. factor-16 benchmark rows within bands", &criterion_2},
      {"3. C estimates near references and capped by kappa", &criterion_3},
      {"4. cycle norm identities to 1e-10", &criterion_4},
      {"5. gamma inverse cross-checks", &criterion_5},
      {"6. critical C roots and bound crossover", &criterion_6},
      {"7. preconditioner cost exactly 2k", &criterion_7},
      {"8. one-sided dominance at factor 16", &criterion_8},
      {"9. smoother polynomial oracle and beta spots", &criterion_9},
      {"10. solver cross-agreement and reproducibility", &criterion_10},
  };

  std::size_t failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " exception: " << e.what();
    }
    if (!out.pass) ++failed;
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << name << " |" << out.detail.str() << "\n";
  }
  if (failed == 0) {
    std::cout << "acceptance: all 10 criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << failed << " of 10 criteria FAILED\n";
  return 1;
}

#include "qlcoll/analysis.hpp"

#include "qlcoll/csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <ostream>
#include <random>

namespace qlcoll {

namespace {

double sup_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

Vector random_direction(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

double domain_diameter(const Domain& domain) { return (domain.upper() - domain.lower()).norm(); }

}  // namespace

ErrorMeasure measure_error(const TrialSpace& ts, const Coefficients& c, const JetField& u_star,
                           const Domain& domain, int probe_resolution) {
  if (probe_resolution < 50) throw Error("probe resolution must be at least 50");
  if (c.size() != ts.dim()) throw Error("coefficient length does not match trial dimension");
  const PointSet probes = probe_grid(domain, probe_resolution);
  ErrorMeasure m;
  m.probe_count = static_cast<int>(probes.size());
  for (const auto& x : probes) {
    const Jet2 diff = eval_jet(ts, c, x) - u_star(x);
    m.sup_err = std::max(m.sup_err, std::abs(diff.value));
    m.grad_sup_err = std::max(m.grad_sup_err, diff.gradient.lpNorm<Eigen::Infinity>());
    m.hess_sup_err = std::max(m.hess_sup_err, diff.hessian.lpNorm<Eigen::Infinity>());
  }
  return m;
}

double stability_quotient(const CollocationSystem& sys, const Coefficients& c_center, int n_pairs,
                          double radius, std::uint64_t seed, int probe_resolution) {
  if (n_pairs < 10) throw Error("stability probe needs at least 10 pairs");
  if (!(radius > 0.0)) throw Error("stability radius must be positive");
  if (c_center.size() != sys.cols()) throw Error("coefficient length does not match trial dimension");

  const PointSet probes = probe_grid(sys.problem().domain, probe_resolution);
  const Matrix values = basis_matrix(sys.trial(), probes, MultiIndex::value(sys.trial().space_dim()));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vector& c = c_center.values();
  double best = 0.0;
  int used = 0;
  for (int k = 0; k < n_pairs; ++k) {
    const Vector p1 = radius * unit(rng) * random_direction(rng, c.size());
    const Vector p2 = radius * unit(rng) * random_direction(rng, c.size());
    const double den =
        sup_norm(sys.apply(Coefficients(c + p1)) - sys.apply(Coefficients(c + p2)));
    if (!(den > 0.0) || !std::isfinite(den)) continue;
    const double num = sup_norm(values * (p1 - p2));
    best = std::max(best, num / den);
    ++used;
  }
  if (used == 0) throw Error("stability probe: every sampled pair had a zero residual difference");
  return best;
}

double hoelder_inverse_constant(const TrialSpace& ts, const Domain& domain, double gamma,
                                int n_trials, int n_pairs, std::uint64_t seed,
                                int probe_resolution) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error("gamma must lie in (0, 1)");
  if (n_trials < 1 || n_pairs < 1) throw Error("Hoelder probe needs trials and pairs");
  if (probe_resolution == 0) probe_resolution = domain.dim() == 1 ? 2000 : 150;

  const PointSet probes = probe_grid(domain, probe_resolution);
  const int d = ts.space_dim();
  const Matrix values = basis_matrix(ts, probes, MultiIndex::value(d));

  const double diam = domain_diameter(domain);
  const double q = ts.dim() >= 2 ? separation_distance(ts.centers()) : diam / probe_resolution;
  const double lo = std::log(std::min(0.5 * q, diam)), hi = std::log(diam);

  // Pairs (x, y): x a probe point, y at a log-uniform distance >= q/2 so that
  // both short and long separations are represented.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, probes.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> xs;
  std::vector<double> dist;
  Matrix y_values(n_pairs, ts.dim());
  int count = 0;
  for (int k = 0; k < n_pairs; ++k) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      const std::size_t i = pick(rng);
      const double t = std::exp(lo + (hi - lo) * unit(rng));
      const Point y = probes[i] + t * random_direction(rng, d);
      if (!domain.contains(y)) continue;
      for (int j = 0; j < ts.dim(); ++j) y_values(count, j) = ts.kernel().value(y, ts.centers()[j]);
      xs.push_back(i);
      dist.push_back(std::pow((y - probes[i]).norm(), gamma));
      ++count;
      break;
    }
  }

  double best = 1.0;
  for (int trial = 0; trial < n_trials; ++trial) {
    const Vector c = random_direction(rng, ts.dim());
    const Vector w = values * c;
    const double sup = sup_norm(w);
    if (!(sup > 0.0)) continue;
    const Vector wy = y_values.topRows(count) * c;
    double semi = 0.0;
    for (int k = 0; k < count; ++k) semi = std::max(semi, std::abs(w(xs[k]) - wy(k)) / dist[k]);
    best = std::max(best, (sup + semi) / sup);
  }
  return best;
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw Error("fit_rate: length mismatch");
  if (h.size() < 3) throw Error("fit_rate needs at least 3 points");
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(e[i] > 0.0)) throw Error("fit_rate: values must be positive");
    if (i > 0 && !(h[i] < h[i - 1])) throw Error("fit_rate: h must be strictly decreasing");
  }
  const auto n = static_cast<double>(h.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]);
    my += std::log(e[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(e[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void StudyConfig::validate() const {
  const auto names = builtin_problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end())
    throw Error("unknown problem '" + problem + "'");
  (void)Kernel(nu, eps);  // validates nu and eps
  if (levels.empty() == fill_targets.empty())
    throw Error("give exactly one of levels or fill_targets");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw Error("level sizes must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw Error("levels must be strictly increasing");
  }
  for (std::size_t i = 0; i < fill_targets.size(); ++i) {
    if (!(fill_targets[i] > 0.0)) throw Error("fill targets must be positive");
    if (i > 0 && fill_targets[i] >= fill_targets[i - 1])
      throw Error("fill targets must be strictly decreasing");
  }
  if (!(oversampling.rho >= 1.0)) throw Error("oversampling.rho must be at least 1");
  if (oversampling.beta != 1.0 && oversampling.beta != 2.0)
    throw Error("oversampling.beta must be 1 or 2");
  if (!(boundary_weight > 0.0)) throw Error("w_b must be positive");
  if (interior_count.has_value() != boundary_count.has_value())
    throw Error("give both test.interior and test.boundary or neither");
  if (interior_count && (*interior_count < 1 || *boundary_count < 1))
    throw Error("collocation budget too small");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error("gamma must lie in (0, 1)");
  if (hoelder_trials < 1 || hoelder_pairs < 1) throw Error("Hoelder probe sizes must be positive");
  if (hoelder_probe != 0 && hoelder_probe < 10) throw Error("hoelder probe resolution too small");
  if (stability_pairs < 10) throw Error("stability probe needs at least 10 pairs");
  if (stability_radius && !(*stability_radius > 0.0)) throw Error("stability radius must be positive");
  if (probe_resolution < 50) throw Error("probe resolution must be at least 50");
  if (threads < 1) throw Error("threads must be positive");
  solver.validate();
}

bool StudyReport::all_invariants_pass() const {
  return std::all_of(invariants.begin(), invariants.end(), [](const auto& c) { return c.passed; });
}

bool StudyReport::all_levels_converged() const {
  return std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.solve.converged; });
}

std::vector<int> resolve_level_counts(const StudyConfig& cfg) {
  if (!cfg.levels.empty()) return cfg.levels;
  const Domain domain = make_problem(cfg.problem).domain;
  auto fill = [&](int n) {
    return fill_distance(generate_interior_points(domain, n, cfg.center_strategy, cfg.seed), domain);
  };
  std::vector<int> out;
  int n = 1;
  for (double target : cfg.fill_targets) {
    while (fill(n) > target) {
      if (n > 1 << 16) throw Error("fill target unreachable");
      n += std::max(1, n / 8);
    }
    // Walk back to the smallest count that still reaches the target.
    while (n > 1 && fill(n - 1) <= target) --n;
    if (!out.empty() && n <= out.back()) n = out.back() + 1;
    out.push_back(n);
  }
  return out;
}

std::uint64_t level_seed(std::uint64_t seed, int level) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(level)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

LevelSetup build_level(const StudyConfig& cfg, int n_centers) {
  ProblemInstance problem = make_problem(cfg.problem);
  PointSet centers =
      generate_interior_points(problem.domain, n_centers, cfg.center_strategy, cfg.seed);
  TrialSpace trial(Kernel(cfg.nu, cfg.eps), std::move(centers));
  TestMap testmap =
      cfg.interior_count
          ? build_test_map_counts(problem.domain, *cfg.interior_count, *cfg.boundary_count,
                                  cfg.test_strategy, cfg.seed, cfg.boundary_weight)
          : build_test_map(problem.domain, trial.dim(), cfg.oversampling, cfg.test_strategy,
                           cfg.seed, cfg.boundary_weight);
  return {std::move(problem), std::move(trial), std::move(testmap)};
}

LevelResult run_level(const StudyConfig& cfg, int index, int n_centers) {
  LevelSetup setup = build_level(cfg, n_centers);
  if (!setup.problem.u_star) throw Error("study needs a problem with a manufactured solution");
  const JetField u_star = *setup.problem.u_star;
  const Domain domain = setup.problem.domain;

  LevelResult out;
  out.index = index;
  out.n_centers = setup.trial.dim();
  out.geometry = geometry_quality(setup.trial.centers(), domain);
  out.dim_trial = setup.trial.dim();
  out.dim_test = setup.testmap.rows();

  CollocationSystem sys(std::move(setup.problem), std::move(setup.trial), std::move(setup.testmap));
  out.underdetermined = sys.underdetermined();
  const TrialSpace& ts = sys.trial();

  Vector samples(ts.dim());
  for (int j = 0; j < ts.dim(); ++j) samples(j) = u_star(ts.centers()[j]).value;
  const Coefficients baseline = interpolate(ts, samples);
  out.baseline_err = measure_error(ts, baseline, u_star, domain, cfg.probe_resolution);
  out.baseline_residual_sup = sup_norm(sys.residual(baseline));

  out.solve = gauss_newton(sys, initial_guess(sys, cfg.solver.rank_tol), cfg.solver);
  out.err = measure_error(ts, out.solve.coeffs, u_star, domain, cfg.probe_resolution);

  const std::uint64_t seed = level_seed(cfg.seed, index);
  const double radius =
      cfg.stability_radius.value_or(0.1 * out.solve.coeffs.values().norm() + 1e-3);
  out.stability_quotient = stability_quotient(sys, out.solve.coeffs, cfg.stability_pairs, radius,
                                              seed, cfg.probe_resolution);
  out.c_r_gamma = hoelder_inverse_constant(ts, domain, cfg.gamma, cfg.hoelder_trials,
                                           cfg.hoelder_pairs, seed + 1, cfg.hoelder_probe);
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check(StudyReport& r, std::string name, bool ok, std::string detail) {
  r.invariants.push_back({std::move(name), ok, std::move(detail)});
}

}  // namespace

StudyReport run_convergence_study(const StudyConfig& cfg) {
  cfg.validate();
  const std::vector<int> counts = resolve_level_counts(cfg);
  if (counts.size() < 3) throw Error("a study needs at least 3 refinement levels");

  StudyReport rep;
  rep.config = cfg;
  const Domain domain = make_problem(cfg.problem).domain;
  rep.domain_name = domain.name();
  rep.c1_boundary = domain.has_c1_boundary();

  rep.levels.resize(counts.size());
  const auto n = static_cast<int>(counts.size());
  for (int start = 0; start < n; start += cfg.threads) {
    const int stop = std::min(n, start + cfg.threads);
    if (stop - start == 1) {
      rep.levels[start] = run_level(cfg, start, counts[start]);
      continue;
    }
    std::vector<std::future<LevelResult>> jobs;
    for (int i = start; i < stop; ++i)
      jobs.push_back(std::async(std::launch::async, run_level, std::cref(cfg), i, counts[i]));
    for (int i = start; i < stop; ++i) rep.levels[i] = jobs[i - start].get();
  }

  for (std::size_t i = 1; i < rep.levels.size(); ++i)
    if (!(rep.levels[i].geometry.fill_distance < rep.levels[i - 1].geometry.fill_distance))
      throw Error("levels do not refine: fill distance must decrease from level to level");

  std::vector<double> h, e, eb, c_rg, inv_h;
  for (const auto& l : rep.levels) {
    if (!l.solve.converged) continue;
    h.push_back(l.geometry.fill_distance);
    e.push_back(std::max(l.err.sup_err, std::numeric_limits<double>::min()));
    eb.push_back(std::max(l.baseline_err.sup_err, std::numeric_limits<double>::min()));
    c_rg.push_back(l.c_r_gamma);
  }
  if (h.size() < 3) throw ConvergenceError("insufficient converged levels");
  rep.fitted_rate_solution = fit_rate(h, e);
  rep.fitted_rate_baseline = fit_rate(h, eb);
  // Slope of log c against log(1/h) is minus the slope against log h.
  rep.hoelder_slope = -fit_rate(h, c_rg);

  bool factor2 = true, bound = true;
  std::string f2_detail, bound_detail;
  for (const auto& l : rep.levels) {
    if (!l.solve.converged) continue;
    if (l.solve.residual_sup > 2.0 * l.baseline_residual_sup + cfg.factor2_slack) {
      factor2 = false;
      f2_detail += " level " + std::to_string(l.index);
    }
    if (l.err.sup_err > cfg.error_bound_factor * l.baseline_err.sup_err * l.c_r_gamma) {
      bound = false;
      bound_detail += " level " + std::to_string(l.index);
    }
  }
  check(rep, "factor2_residual", factor2,
        factor2 ? "residual_sup <= 2 * baseline residual_sup at converged levels"
                : "violated at" + f2_detail);
  check(rep, "error_bound", bound,
        bound ? "sup_err <= " + fmt(cfg.error_bound_factor) + " * baseline_sup_err * c_r_gamma"
              : "violated at" + bound_detail);

  if (make_problem(cfg.problem).is_linear()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& l : rep.levels) {
      lo = std::min(lo, l.stability_quotient);
      hi = std::max(hi, l.stability_quotient);
    }
    check(rep, "stability_spread", hi <= cfg.stability_spread_limit * lo,
          "max/min stability quotient = " + fmt(hi / lo));
  }
  if (cfg.expect_monotone_error) {
    bool ok = true;
    for (std::size_t i = 1; i < rep.levels.size(); ++i)
      ok = ok && rep.levels[i].err.sup_err < rep.levels[i - 1].err.sup_err;
    check(rep, "monotone_error", ok, "sup_err strictly decreasing across levels");
  }
  if (cfg.expect_min_rate)
    check(rep, "min_rate", rep.fitted_rate_solution >= *cfg.expect_min_rate,
          "fitted_rate_solution = " + fmt(rep.fitted_rate_solution) + ", required >= " +
              fmt(*cfg.expect_min_rate));
  if (cfg.expect_max_rate_gap)
    check(rep, "rate_gap",
          std::abs(rep.fitted_rate_solution - rep.fitted_rate_baseline) <= *cfg.expect_max_rate_gap,
          "|solution rate - baseline rate| = " +
              fmt(std::abs(rep.fitted_rate_solution - rep.fitted_rate_baseline)) +
              ", allowed " + fmt(*cfg.expect_max_rate_gap));
  if (cfg.expect_max_hoelder_slope)
    check(rep, "hoelder_slope", rep.hoelder_slope <= *cfg.expect_max_hoelder_slope,
          "slope of log c_r_gamma vs log(1/h) = " + fmt(rep.hoelder_slope) + ", allowed " +
              fmt(*cfg.expect_max_hoelder_slope));
  return rep;
}

void write_study_csv(std::ostream& os, const StudyReport& r) {
  csv::write_row(os, {"level", "n_centers", "fill_distance", "separation_distance",
                      "uniformity_ratio", "dim_trial", "dim_test", "converged", "iterations",
                      "termination", "residual_sup", "residual_l2", "baseline_residual_sup",
                      "sup_err", "grad_sup_err", "hess_sup_err", "baseline_sup_err",
                      "baseline_grad_sup_err", "baseline_hess_sup_err", "stability_quotient",
                      "c_r_gamma", "quotient_over_c_r_gamma"});
  for (const auto& l : r.levels) {
    csv::write_row(
        os, {std::to_string(l.index), std::to_string(l.n_centers),
             csv::format(l.geometry.fill_distance), csv::format(l.geometry.separation_distance),
             csv::format(l.geometry.uniformity_ratio), std::to_string(l.dim_trial),
             std::to_string(l.dim_test), l.solve.converged ? "1" : "0",
             std::to_string(l.solve.iterations), to_string(l.solve.termination),
             csv::format(l.solve.residual_sup), csv::format(l.solve.residual_l2),
             csv::format(l.baseline_residual_sup), csv::format(l.err.sup_err),
             csv::format(l.err.grad_sup_err), csv::format(l.err.hess_sup_err),
             csv::format(l.baseline_err.sup_err), csv::format(l.baseline_err.grad_sup_err),
             csv::format(l.baseline_err.hess_sup_err), csv::format(l.stability_quotient),
             csv::format(l.c_r_gamma), csv::format(l.stability_quotient / l.c_r_gamma)});
  }
}

void write_study_table(std::ostream& os, const StudyReport& r) {
  char line[256];
  std::snprintf(line, sizeof line, "%-5s %6s %11s %6s %5s %4s %11s %11s %11s %11s %10s\n", "level",
                "dim", "h", "h/q", "test", "it", "res_sup", "2*base_res", "sup_err", "base_err",
                "quot/c_rg");
  os << "problem " << r.config.problem << " on " << r.domain_name << ", seed " << r.config.seed
     << '\n'
     << line;
  for (const auto& l : r.levels) {
    std::snprintf(line, sizeof line,
                  "%-5d %6d %11.4e %6.3f %5d %4d %11.4e %11.4e %11.4e %11.4e %10.3e%s\n", l.index,
                  l.dim_trial, l.geometry.fill_distance, l.geometry.uniformity_ratio, l.dim_test,
                  l.solve.iterations, l.solve.residual_sup, 2.0 * l.baseline_residual_sup,
                  l.err.sup_err, l.baseline_err.sup_err, l.stability_quotient / l.c_r_gamma,
                  l.solve.converged ? "" : "  (not converged)");
    os << line;
  }
  os << "fitted rate: solution " << fmt(r.fitted_rate_solution) << ", baseline "
     << fmt(r.fitted_rate_baseline) << "; c_r_gamma slope vs log(1/h) " << fmt(r.hoelder_slope)
     << '\n';
  if (!r.c1_boundary)
    os << "note: the domain boundary is not C^1; the Hoelder inverse estimate is not covered "
          "by theory here\n";
  for (const auto& c : r.invariants)
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}

void write_study_summary(std::ostream& os, const StudyReport& r) {
  const auto& c = r.config;
  os << "problem = " << c.problem << '\n'
     << "domain = " << r.domain_name << '\n'
     << "c1_boundary = " << (r.c1_boundary ? "true" : "false") << '\n'
     << "seed = " << c.seed << '\n'
     << "kernel.nu = " << csv::format(c.nu) << '\n'
     << "kernel.eps = " << csv::format(c.eps) << '\n'
     << "levels = " << r.levels.size() << '\n'
     << "baseline = kernel interpolant of u_star at the centers\n"
     << "stability_quotient = sampled lower bound, sup-norm proxy on the probe grid\n"
     << "c_r_gamma = sampled Hoelder/sup ratio on the trial space\n"
     << "fitted_rate_solution = " << csv::format(r.fitted_rate_solution) << '\n'
     << "fitted_rate_baseline = " << csv::format(r.fitted_rate_baseline) << '\n'
     << "hoelder_slope = " << csv::format(r.hoelder_slope) << '\n'
     << "all_levels_converged = " << (r.all_levels_converged() ? "true" : "false") << '\n';
  for (const auto& inv : r.invariants)
    os << "invariant." << inv.name << " = " << (inv.passed ? "pass" : "fail") << '\n';
  os << "status = " << (r.all_invariants_pass() ? "pass" : "fail") << '\n';
}

}  // namespace qlcoll

#pragma once

#include "qlcoll/collocation.hpp"
#include "qlcoll/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qlcoll {

inline constexpr int kDefaultAnalysisProbe = 100;

/// Discrete C^2 error proxy on a probe grid.
struct ErrorMeasure {
  double sup_err = 0.0;
  double grad_sup_err = 0.0;
  double hess_sup_err = 0.0;
  int probe_count = 0;
};

/// Errors of the trial function c against u_star on probe_grid(domain, res),
/// res >= 50.
ErrorMeasure measure_error(const TrialSpace& ts, const Coefficients& c, const JetField& u_star,
                           const Domain& domain, int probe_resolution = kDefaultAnalysisProbe);

/// Sampled lower bound of the discrete stability constant: the largest ratio
/// |u1 - u2|_inf (probe grid) / |T_s F u1 - T_s F u2|_inf over random pairs
/// c_center + p1, c_center + p2 with |p_i|_2 <= radius.
double stability_quotient(const CollocationSystem& sys, const Coefficients& c_center, int n_pairs,
                          double radius, std::uint64_t seed,
                          int probe_resolution = kDefaultAnalysisProbe);

/// Sampled lower bound of the Hoelder/sup norm-equivalence constant on the
/// trial space: max over random unit coefficient vectors of
/// (|w|_inf + sampled |w|_{C^gamma}) / |w|_inf. Pairs closer than q/2 are
/// skipped. probe_resolution 0 picks 2000 points in 1D and 150^2 in 2D.
double hoelder_inverse_constant(const TrialSpace& ts, const Domain& domain, double gamma,
                                int n_trials, int n_pairs, std::uint64_t seed,
                                int probe_resolution = 0);

/// Least-squares slope of log e against log h.
double fit_rate(const std::vector<double>& h, const std::vector<double>& e);

struct StudyConfig {
  std::string problem = "P1";
  double nu = 2.5;
  double eps = Kernel::kDefaultEps;

  std::vector<int> levels;            // center counts, or
  std::vector<double> fill_targets;   // target fill distances

  PointStrategy center_strategy = PointStrategy::Grid;
  PointStrategy test_strategy = PointStrategy::Grid;
  std::uint64_t seed = 0;

  OversamplingRule oversampling;
  double boundary_weight = 1.0;
  std::optional<int> interior_count;  // explicit collocation counts
  std::optional<int> boundary_count;

  double gamma = 0.5;
  int hoelder_trials = 20;
  int hoelder_pairs = 2000;
  int hoelder_probe = 0;
  int stability_pairs = 20;
  std::optional<double> stability_radius;  // default 0.1 |c|_2 + 1e-3
  int probe_resolution = kDefaultAnalysisProbe;

  SolveOptions solver;

  // Expectations checked in addition to the built-in invariants.
  std::optional<double> expect_min_rate;
  std::optional<double> expect_max_rate_gap;
  std::optional<double> expect_max_hoelder_slope;
  bool expect_monotone_error = false;
  double factor2_slack = 1e-9;
  double error_bound_factor = 10.0;
  double stability_spread_limit = 50.0;

  std::string output_dir = "out";
  int threads = 1;

  void validate() const;
};

struct LevelResult {
  int index = 0;
  int n_centers = 0;
  GeometryQuality geometry;
  int dim_trial = 0;
  int dim_test = 0;
  SolveReport solve;
  ErrorMeasure err;
  ErrorMeasure baseline_err;
  double baseline_residual_sup = 0.0;
  double stability_quotient = 0.0;
  double c_r_gamma = 0.0;
  bool underdetermined = false;
};

struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct StudyReport {
  StudyConfig config;
  std::string domain_name;
  bool c1_boundary = true;
  std::vector<LevelResult> levels;  // decreasing fill distance
  double fitted_rate_solution = 0.0;
  double fitted_rate_baseline = 0.0;
  double hoelder_slope = 0.0;
  std::vector<InvariantCheck> invariants;

  bool all_invariants_pass() const;
  bool all_levels_converged() const;
};

/// Center counts for each level; fill-distance targets are resolved to the
/// smallest count whose centers reach the target.
std::vector<int> resolve_level_counts(const StudyConfig& cfg);

/// Everything needed to solve one level.
struct LevelSetup {
  ProblemInstance problem;
  TrialSpace trial;
  TestMap testmap;
};
LevelSetup build_level(const StudyConfig& cfg, int n_centers);

/// Seed used for the random probes of one level.
std::uint64_t level_seed(std::uint64_t seed, int level);

LevelResult run_level(const StudyConfig& cfg, int index, int n_centers);

StudyReport run_convergence_study(const StudyConfig& cfg);

// Report formats; column order is documented in docs/formats.md.
void write_study_csv(std::ostream& os, const StudyReport& r);
void write_study_table(std::ostream& os, const StudyReport& r);
void write_study_summary(std::ostream& os, const StudyReport& r);

}  // namespace qlcoll

// Command-line front end: solve, study and probe subcommands driven by a
// flat key = value config (docs/formats.md).

#include "qlcoll/config.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace qlcoll;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNotConverged = 2, kInvariant = 3 };

struct Options {
  std::string config;
  std::string out;
  bool overwrite = false;
  int threads = 0;
  bool verbose = false;
  bool dump_system = false;
  std::string probe;
};

StudyConfig load(const Options& o) {
  StudyConfig cfg = load_study_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.threads > 0) cfg.threads = o.threads;
  return cfg;
}

/// Collects report files, refusing to replace existing ones unless allowed.
class OutputSet {
 public:
  OutputSet(fs::path dir, bool overwrite) : dir_(std::move(dir)), overwrite_(overwrite) {}

  void add(const std::string& name, std::string content) { files_[name] = std::move(content); }

  void commit() const {
    if (!overwrite_)
      for (const auto& [name, content] : files_)
        if (fs::exists(dir_ / name))
          throw Error("refusing to overwrite " + (dir_ / name).string() + " (pass --overwrite)");
    fs::create_directories(dir_);
    for (const auto& [name, content] : files_) {
      std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
      f << content;
      if (!f) throw Error("cannot write " + (dir_ / name).string());
    }
  }

 private:
  fs::path dir_;
  bool overwrite_;
  std::map<std::string, std::string> files_;
};

template <typename F>
std::string render(F&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

int cmd_solve(const Options& o) {
  const StudyConfig cfg = load(o);
  const int n = resolve_level_counts(cfg).back();
  LevelSetup setup = build_level(cfg, n);
  CollocationSystem sys(std::move(setup.problem), std::move(setup.trial), std::move(setup.testmap));
  if (sys.underdetermined())
    std::cerr << "warning: " << sys.rows() << " test values for " << sys.cols()
              << " trial coefficients; the discrete problem is underdetermined\n";

  const SolveReport rep = gauss_newton(sys, initial_guess(sys, cfg.solver.rank_tol), cfg.solver);

  OutputSet out(cfg.output_dir, o.overwrite);
  out.add("solve_report.txt", render([&](std::ostream& os) {
            os << "problem = " << cfg.problem << '\n'
               << "seed = " << cfg.seed << '\n'
               << "dim_trial = " << sys.cols() << '\n'
               << "dim_test = " << sys.rows() << '\n';
            write_solve_report(os, rep);
          }));
  out.add("trace.csv", render([&](std::ostream& os) { write_trace_csv(os, rep); }));
  out.add("coefficients.csv", render([&](std::ostream& os) { write_coefficients_csv(os, rep.coeffs); }));
  if (o.dump_system) {
    out.add("residual.csv",
            render([&](std::ostream& os) { write_vector_csv(os, sys.residual(rep.coeffs), "residual"); }));
    out.add("jacobian.csv",
            render([&](std::ostream& os) { write_matrix_csv(os, sys.jacobian(rep.coeffs)); }));
  }
  out.commit();

  if (o.verbose)
    for (const auto& t : rep.trace)
      std::printf("  %3d %-9s |R|_2 %.6e  |R|_inf %.6e  step %.3e\n", t.iteration, t.kind.c_str(),
                  t.residual_l2, t.residual_sup, t.step_norm);
  std::printf("%s: dim %d, %d test values, %s after %d iterations (%s), residual sup %.6e\n",
              cfg.problem.c_str(), sys.cols(), sys.rows(),
              rep.converged ? "converged" : "NOT converged", rep.iterations,
              to_string(rep.termination).c_str(), rep.residual_sup);
  return rep.converged ? kOk : kNotConverged;
}

int cmd_study(const Options& o) {
  const StudyConfig cfg = load(o);
  const StudyReport rep = run_convergence_study(cfg);

  OutputSet out(cfg.output_dir, o.overwrite);
  out.add("study.csv", render([&](std::ostream& os) { write_study_csv(os, rep); }));
  out.add("summary.txt", render([&](std::ostream& os) { write_study_summary(os, rep); }));
  out.commit();

  write_study_table(std::cout, rep);
  if (o.verbose)
    for (const auto& l : rep.levels) {
      std::cout << "level " << l.index << " trace\n";
      write_trace_csv(std::cout, l.solve);
    }
  if (!rep.all_invariants_pass()) return kInvariant;
  return rep.all_levels_converged() ? kOk : kNotConverged;
}

int cmd_probe(const Options& o) {
  if (o.probe != "geometry" && o.probe != "stability" && o.probe != "hoelder") {
    std::cerr << "error: unknown probe '" << o.probe << "' (geometry, stability, hoelder)\n";
    return kUsage;
  }
  const StudyConfig cfg = load(o);
  const std::vector<int> counts = resolve_level_counts(cfg);
  std::vector<double> h, c;

  if (o.probe == "geometry") std::printf("%-5s %6s %12s %12s %8s\n", "level", "n", "h", "q", "h/q");
  if (o.probe == "stability") std::printf("%-5s %6s %12s %12s\n", "level", "dim", "h", "quotient");
  if (o.probe == "hoelder") std::printf("%-5s %6s %12s %12s\n", "level", "dim", "h", "c_r_gamma");

  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto level = static_cast<int>(i);
    LevelSetup setup = build_level(cfg, counts[i]);
    const Domain domain = setup.problem.domain;
    const GeometryQuality g = geometry_quality(setup.trial.centers(), domain);
    if (o.probe == "geometry") {
      std::printf("%-5d %6d %12.6e %12.6e %8.4f\n", level, setup.trial.dim(), g.fill_distance,
                  g.separation_distance, g.uniformity_ratio);
    } else if (o.probe == "stability") {
      CollocationSystem sys(std::move(setup.problem), std::move(setup.trial),
                            std::move(setup.testmap));
      const SolveReport rep = gauss_newton(sys, initial_guess(sys, cfg.solver.rank_tol), cfg.solver);
      const double radius = cfg.stability_radius.value_or(0.1 * rep.coeffs.values().norm() + 1e-3);
      const double q = stability_quotient(sys, rep.coeffs, cfg.stability_pairs, radius,
                                          level_seed(cfg.seed, level), cfg.probe_resolution);
      std::printf("%-5d %6d %12.6e %12.6e\n", level, sys.cols(), g.fill_distance, q);
    } else {
      const double v = hoelder_inverse_constant(setup.trial, domain, cfg.gamma, cfg.hoelder_trials,
                                                cfg.hoelder_pairs, level_seed(cfg.seed, level) + 1,
                                                cfg.hoelder_probe);
      std::printf("%-5d %6d %12.6e %12.6e\n", level, setup.trial.dim(), g.fill_distance, v);
      h.push_back(g.fill_distance);
      c.push_back(v);
    }
  }
  if (o.probe == "hoelder" && h.size() >= 3)
    std::printf("slope of log c_r_gamma vs log(1/h): %.4f (gamma + d/2 = %.2f)\n", -fit_rate(h, c),
                cfg.gamma + 0.5 * make_problem(cfg.problem).domain.dim());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel collocation solver for quasilinear elliptic boundary value problems"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "study/solve config file")->required();
    sub->add_option("--out", o.out, "output directory (overrides output.dir)");
    sub->add_flag("--overwrite", o.overwrite, "replace existing report files");
    sub->add_option("--threads", o.threads, "levels solved in parallel")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", o.verbose, "print iteration traces");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve at the finest configured level");
  common(solve);
  solve->add_flag("--dump-system", o.dump_system, "also write residual.csv and jacobian.csv");
  CLI::App* study = app.add_subcommand("study", "run a convergence study over all levels");
  common(study);
  CLI::App* probe = app.add_subcommand("probe", "run one analysis probe per level");
  probe->add_option("which", o.probe, "geometry, stability or hoelder")->required();
  common(probe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (study->parsed()) return cmd_study(o);
    return cmd_probe(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

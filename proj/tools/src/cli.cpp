#include "rsde/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <memory>
#include <ostream>
#include <span>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "rsde/config.hpp"
#include "rsde/errors.hpp"
#include "rsde/estimate.hpp"
#include "rsde/harness.hpp"
#include "rsde/path_io.hpp"
#include "rsde/simulate.hpp"
#include "rsde/stationary.hpp"

namespace rsde::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

// Destination for data: the given stream, or a file when a path is set.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ofstream open_in(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw DataError("cannot open '" + (dir / name).string() + "' for writing");
  return os;
}

void warn_regime(const SamplingPlan& plan, std::ostream& err) {
  const auto d = validate_regime(plan);
  if (d.weak_ergodic_averaging) {
    err << "warning: n*h = " << d.nh << " < 10; asymptotic inference is unreliable\n";
  }
  if (d.bias_regime) {
    err << "warning: n*h^(1+2*alpha) = " << d.bias_figure << " > 1; discretization bias may dominate\n";
  }
}

Json result_json(const EstimateResult& r) {
  Json j;
  j["theta_hat"] = r.theta_hat;
  j["stderr"] = r.std_error;
  j["ci_lo"] = r.ci_lo;
  j["ci_hi"] = r.ci_hi;
  j["level"] = r.level;
  j["method"] = std::string(to_string(r.method));
  return j;
}

struct Flags {
  std::string config;
  std::string out;
  std::string path;
  std::string out_dir = ".";
  std::size_t n = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
  double theta = 0.0;
  std::size_t substeps = 0;
  std::string scheme;
  double level = 0.95;
  std::size_t reps = 0;
  std::vector<std::size_t> n_values;
  bool zscores = false;
  unsigned threads = 0;
  std::vector<double> thetas;
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 21;
};

// Flag values that map onto config keys; set flags win over the file.
class OverrideSet {
 public:
  void bind(CLI::Option* opt, std::string key, std::function<std::string()> value) {
    entries_.push_back({opt, std::move(key), std::move(value)});
  }
  ConfigOverrides collect() const {
    ConfigOverrides o;
    for (const auto& e : entries_) {
      if (e.opt->count() > 0) o[e.key] = e.value();
    }
    return o;
  }

 private:
  struct Entry {
    CLI::Option* opt;
    std::string key;
    std::function<std::string()> value;
  };
  std::vector<Entry> entries_;
};

void run_simulate(const Flags& f, const ConfigOverrides& o, std::ostream& out, std::ostream& err) {
  const auto cfg = parse_config(f.config, o);
  warn_regime(cfg.plan, err);
  Output dest(f.out, out);
  if (cfg.is_two_factor()) {
    if (o.count("theta0") != 0) {
      throw ConfigError("key 'theta0' (--theta) does not apply to two_factor; set two_factor.theta1/theta2");
    }
    write_two_factor_csv(dest.stream(), simulate_two_factor(*cfg.two_factor, cfg.plan, cfg.sim));
    return;
  }
  const auto path = simulate_path(cfg.require_model(), cfg.require_theta0(), cfg.plan, cfg.sim);
  write_path_csv(dest.stream(), path);
}

void run_estimate(const Flags& f, const ConfigOverrides& o, std::ostream& out, std::ostream& err) {
  const auto cfg = parse_config(f.config, o);
  std::ifstream is(f.path);
  if (!is) throw DataError("cannot open '" + f.path + "'");
  Json j;
  if (cfg.is_two_factor()) {
    const auto& p = *cfg.two_factor;
    const auto tf = read_two_factor_csv(is, p.a, p.b);
    warn_regime({tf.increments(), tf.h(), cfg.plan.alpha}, err);
    const auto est = estimate_two_factor(tf, p.sigma, cfg.level);
    j["theta1"] = result_json(est.theta1);
    j["theta2"] = result_json(est.theta2);
    j["n"] = tf.increments();
    j["h"] = tf.h();
  } else {
    const auto& model = cfg.require_model();
    const auto path = read_path_csv(is, model.barriers);
    warn_regime({path.increments(), path.h, cfg.plan.alpha}, err);
    const auto r = fit(path, model, cfg.level);
    if (r.at_boundary) err << "warning: estimate is on the boundary of the theta domain\n";
    j = result_json(r);
    j["n"] = path.increments();
    j["h"] = path.h;
  }
  out << j.dump() << '\n';
}

std::vector<McSummary> summaries_of(std::span<const McRun> runs, double theta0) {
  std::vector<McSummary> out;
  for (const auto& run : runs) out.push_back(summarize(run.estimates, theta0, run.n));
  return out;
}

void report_failures(std::span<const McRun> runs, std::ostream& err) {
  for (const auto& run : runs) {
    if (run.failures > 0) {
      err << "warning: n=" << run.n << ": " << run.failures << " replication(s) failed and were excluded\n";
    }
  }
}

void run_mc_command(const Flags& f, const ConfigOverrides& o, std::ostream& out, std::ostream& err) {
  const auto cfg = parse_config(f.config, o);
  const fs::path dir(f.out_dir);
  fs::create_directories(dir);

  if (cfg.is_two_factor()) {
    const auto& p = *cfg.two_factor;
    const TwoFactorMcConfig mc{p, cfg.plan, cfg.sim, cfg.replications, cfg.n_values, f.threads};
    const auto runs = run_mc_two_factor(mc);
    std::vector<McRun> first;
    std::vector<McRun> second;
    for (const auto& r : runs) {
      first.push_back(r.theta1);
      second.push_back(r.theta2);
    }
    report_failures(first, err);
    report_failures(second, err);
    const auto s1 = summaries_of(first, p.theta1);
    const auto s2 = summaries_of(second, p.theta2);
    auto e1 = open_in(dir, "estimates.csv");
    write_estimates_csv(e1, first);
    auto e2 = open_in(dir, "estimates_theta2.csv");
    write_estimates_csv(e2, second);
    auto m1 = open_in(dir, "summary.csv");
    write_summary_csv(m1, s1);
    auto m2 = open_in(dir, "summary_theta2.csv");
    write_summary_csv(m2, s2);
    out << "# theta1\n";
    write_summary_csv(out, s1);
    out << "# theta2\n";
    write_summary_csv(out, s2);
    return;
  }

  const auto& model = cfg.require_model();
  const double theta0 = cfg.require_theta0();
  const McConfig mc{model, theta0, cfg.plan, cfg.sim, cfg.replications, cfg.n_values, f.threads};
  const auto runs = run_mc(mc);
  report_failures(runs, err);
  const auto summaries = summaries_of(runs, theta0);
  auto est = open_in(dir, "estimates.csv");
  write_estimates_csv(est, runs);
  auto sum = open_in(dir, "summary.csv");
  write_summary_csv(sum, summaries);
  write_summary_csv(out, summaries);

  if (f.zscores) {
    const auto& last = runs.back();
    SamplingPlan plan = cfg.plan;
    plan.n = last.n;
    const auto rep = normality_diagnostic(last.estimates, theta0, plan, model);
    auto zs = open_in(dir, "zscores.csv");
    write_zscores_csv(zs, last.reps, rep.z);
    err << fmt::format("normality n={}: mean={:.4f} std={:.4f} ks={:.4f} p={:.4g} {}\n", last.n,
                       rep.mean, rep.std_dev, rep.ks_statistic, rep.p_value,
                       rep.pass ? "pass" : "fail");
  }
}

void run_density(const Flags& f, const ConfigOverrides& o, std::ostream& out) {
  const auto cfg = parse_config(f.config, o);
  const auto grid = invariant_density(cfg.require_model(), cfg.require_theta0());
  Output dest(f.out, out);
  auto& os = dest.stream();
  os << "x,pi\n";
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    os << num(grid.nodes[i]) << ',' << num(grid.values[i]) << '\n';
  }
}

void run_ginfo(const Flags& f, const CLI::App& cmd, const ConfigOverrides& o, std::ostream& out,
               std::ostream& err) {
  const auto cfg = parse_config(f.config, o);
  const auto& model = cfg.require_model();
  std::vector<double> thetas = f.thetas;
  if (thetas.empty()) {
    const double lo = cmd.count("--from") > 0 ? f.from : model.theta_domain.compact_lo();
    const double hi = cmd.count("--to") > 0 ? f.to : model.theta_domain.compact_hi();
    if (f.points < 1) throw ConfigError("--points must be >= 1");
    if (f.points == 1) {
      thetas.push_back(lo);
    } else {
      for (std::size_t i = 0; i < f.points; ++i) {
        thetas.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(f.points - 1));
      }
    }
  }
  Output dest(f.out, out);
  auto& os = dest.stream();
  os << "theta,g\n";
  for (const double th : thetas) {
    try {
      os << num(th) << ',' << num(g_information(model, th)) << '\n';
    } catch (const ModelError& e) {
      err << "warning: theta=" << num(th) << ": " << e.what() << '\n';
      os << num(th) << ",nan\n";
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reflected diffusion simulation and drift estimation", "rsde"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  Flags f;
  OverrideSet overrides;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", f.config, "Model/experiment config file")->required()->check(CLI::ExistingFile);
  };
  auto bind_number = [&](CLI::App* cmd, const std::string& flag, const std::string& key, auto& target,
                         const std::string& help) {
    auto* opt = cmd->add_option(flag, target, help);
    overrides.bind(opt, key, [&target] { return fmt::format("{}", target); });
  };

  auto* sim = app.add_subcommand("simulate", "Simulate one path and write it as CSV");
  add_config(sim);
  bind_number(sim, "--n", "n", f.n, "Number of observation intervals");
  bind_number(sim, "--h", "h", f.h, "Observation step");
  bind_number(sim, "--seed", "seed", f.seed, "Root seed");
  bind_number(sim, "--theta", "theta0", f.theta, "True parameter (defaults to theta0)");
  bind_number(sim, "--substeps", "substeps", f.substeps, "Fine steps per observation");
  overrides.bind(sim->add_option("--scheme", f.scheme, "lepingle | projection"), "scheme",
                 [&f] { return f.scheme; });
  sim->add_option("--out", f.out, "Output CSV (default: standard output)");

  auto* est = app.add_subcommand("estimate", "Estimate theta from a path CSV");
  add_config(est);
  est->add_option("--path", f.path, "Path CSV")->required()->check(CLI::ExistingFile);
  bind_number(est, "--level", "level", f.level, "Confidence level");

  auto* mc = app.add_subcommand("mc", "Monte Carlo replications with bias/std/MSE summaries");
  add_config(mc);
  bind_number(mc, "--reps", "reps", f.reps, "Replications per sample size");
  bind_number(mc, "--seed", "seed", f.seed, "Root seed");
  overrides.bind(mc->add_option("--n", f.n_values, "Sample sizes")->delimiter(','), "n_values", [&f] {
    return fmt::format("{}", fmt::join(f.n_values, ","));
  });
  mc->add_option("--out-dir", f.out_dir, "Directory for estimates.csv and summary.csv");
  mc->add_flag("--zscores", f.zscores, "Also write zscores.csv for the last sample size");
  mc->add_option("--threads", f.threads, "Worker threads (0: all cores)");

  auto* dens = app.add_subcommand("density", "Tabulate the stationary density as x,pi");
  add_config(dens);
  bind_number(dens, "--theta", "theta0", f.theta, "Parameter (defaults to theta0)");
  dens->add_option("--out", f.out, "Output CSV (default: standard output)");

  auto* ginfo = app.add_subcommand("ginfo", "Tabulate G(theta) as theta,g");
  add_config(ginfo);
  ginfo->add_option("--theta", f.thetas, "Explicit theta values")->delimiter(',');
  ginfo->add_option("--from", f.from, "Grid start (default: theta.lo)");
  ginfo->add_option("--to", f.to, "Grid end (default: theta.hi)");
  ginfo->add_option("--points", f.points, "Grid size")->capture_default_str();
  ginfo->add_option("--out", f.out, "Output CSV (default: standard output)");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    const auto o = overrides.collect();
    if (*sim) run_simulate(f, o, out, err);
    if (*est) run_estimate(f, o, out, err);
    if (*mc) run_mc_command(f, o, out, err);
    if (*dens) run_density(f, o, out);
    if (*ginfo) run_ginfo(f, *ginfo, o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace rsde::cli
